// Command-line front end: simulation, fitting, estimation and the experiment drivers.

#include "fcd/baselines.hpp"
#include "fcd/conddist.hpp"
#include "fcd/error.hpp"
#include "fcd/event_parse.hpp"
#include "fcd/flm.hpp"
#include "fcd/harness/curve_io.hpp"
#include "fcd/harness/dgp.hpp"
#include "fcd/harness/electricity.hpp"
#include "fcd/harness/experiments.hpp"
#include "fcd/harness/seasonal.hpp"
#include "fcd/model_io.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace fcd;
using harness::format_double;

struct Globals {
    std::uint64_t seed = 0;
    int grid_d = 100;
    std::string out;
};

// Writes to --out when given, stdout otherwise.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw UsageError("cannot open '" + path + "' for writing");
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

void emit_report(const harness::ExperimentReport& report, const std::string& out) {
    if (out.empty()) {
        harness::write_report_csv(report, std::cout);
    } else {
        harness::save_report(report, out);
    }
}

std::vector<Curve> load_nonempty(const std::string& path) {
    auto curves = harness::load_curves(path);
    if (curves.empty()) throw UsageError("'" + path + "' holds no curves");
    return curves;
}

// Covariates k = (file₁[k], file₂[k], …, scalars[k]).
std::vector<Covariate> load_covariates(const std::vector<std::string>& curve_files, const std::string& scalar_file) {
    std::vector<std::vector<Curve>> parts;
    for (const auto& f : curve_files) parts.push_back(load_nonempty(f));
    std::optional<harness::Table> scalars;
    if (!scalar_file.empty()) scalars = harness::load_table(scalar_file);
    std::size_t count = parts.empty() ? (scalars ? scalars->rows.size() : 0) : parts.front().size();
    for (const auto& p : parts) {
        if (p.size() != count) throw UsageError("covariate files hold different numbers of curves");
    }
    if (scalars && scalars->rows.size() != count) throw UsageError("scalar table does not align with the covariate curves");
    if (count == 0) throw UsageError("no covariates given");
    std::vector<Covariate> xs(count);
    for (std::size_t k = 0; k < count; ++k) {
        for (const auto& p : parts) xs[k].curve_parts.push_back(p[k]);
        if (scalars) xs[k].scalar_parts = scalars->rows[k];
    }
    return xs;
}

struct ModelInputs {
    std::string model;
    std::vector<std::string> x_files;
    std::string scalar_file;
    std::string series;
    std::size_t order = 1;
    std::vector<std::string> exog_next;

    void add(CLI::App* cmd) {
        cmd->add_option("--model", model, "fitted model JSON")->required()->check(CLI::ExistingFile);
        cmd->add_option("--x", x_files, "covariate curve CSV (repeat for each curve part); one query per row");
        cmd->add_option("--scalars", scalar_file, "covariate scalar table, one row per query");
        cmd->add_option("--series", series, "forecast from the last curves of this series instead of --x");
        cmd->add_option("--order", order, "lag order used with --series");
        cmd->add_option("--exog-next", exog_next, "exogenous curve CSVs for the forecast day (with --series)");
    }

    std::vector<Covariate> queries() const {
        if (!series.empty()) {
            if (!x_files.empty()) throw UsageError("use either --x or --series");
            const auto s = load_nonempty(series);
            std::optional<Covariate> exog;
            if (!exog_next.empty() || !scalar_file.empty()) exog = load_covariates(exog_next, scalar_file).front();
            return {far_forecast_covariate(s, order, exog)};
        }
        if (x_files.empty() && scalar_file.empty()) throw UsageError("one of --x or --series is required");
        return load_covariates(x_files, scalar_file);
    }
};

EventParseContext parse_context(const Grid& grid, std::optional<Curve> prediction = std::nullopt) {
    EventParseContext ctx;
    ctx.grid = grid;
    ctx.prediction = std::move(prediction);
    return ctx;
}

std::string status_name(EstimateStatus s) { return s == EstimateStatus::ok ? "ok" : "degenerate_noise"; }

TruncationRule truncation_from(double pve, double threshold, int fixed, bool absolute) {
    const int chosen = (pve > 0.0 ? 1 : 0) + (threshold > 0.0 ? 1 : 0) + (fixed > 0 ? 1 : 0);
    if (chosen > 1) throw UsageError("choose one of --pve, --threshold and --components");
    if (pve > 0.0) return TruncationRule::pve_rule(pve);
    if (fixed > 0) return TruncationRule::fixed_rule(fixed);
    return TruncationRule::threshold_rule(threshold, absolute ? ThresholdScale::absolute : ThresholdScale::relative);
}

std::vector<std::size_t> parse_sizes(const std::string& text) {
    std::vector<std::size_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(static_cast<std::size_t>(std::stoul(item)));
        } catch (const std::exception&) {
            throw UsageError("bad size '" + item + "'");
        }
    }
    return out;
}

std::array<int, 3> parse_date(const std::string& s) {
    int y = 0, m = 0, d = 0;
    char tail = 0;
    if (std::sscanf(s.c_str(), "%d-%d-%d%c", &y, &m, &d, &tail) != 3) throw UsageError("dates are YYYY-MM-DD");
    return {y, m, d};
}

int run(int argc, char** argv) {
    CLI::App app{"Conditional distribution estimation for functional regression"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--seed", g.seed, "random seed")->capture_default_str();
    app.add_option("--grid-d", g.grid_d, "grid resolution D (points t_i = i/D)")->capture_default_str()->check(CLI::Range(2, 1000000));
    app.add_option("--out", g.out, "output path (default: stdout)");

    // simulate
    auto* sim = app.add_subcommand("simulate", "simulate a functional time series");
    std::string process_name = "paparoditis";
    std::size_t sim_n = 100;
    double sim_b = 0.0;
    int sim_burn = -1;
    sim->add_option("--process", process_name, "paparoditis | synthetic | iid")->capture_default_str();
    sim->add_option("--n", sim_n, "number of curves")->capture_default_str();
    sim->add_option("--b", sim_b, "second-lag weight (paparoditis)")->capture_default_str();
    sim->add_option("--burn-in", sim_burn, "discarded initial curves (default per process)");

    // fit
    auto* fitc = app.add_subcommand("fit", "fit the truncated FPCA regression estimator");
    std::string fit_series, fit_y, fit_scalars;
    std::vector<std::string> fit_x, fit_exog;
    std::size_t fit_order = 1;
    double fit_pve = 0.0, fit_threshold = 0.0;
    int fit_components = 0;
    bool fit_absolute = false, fit_no_center = false, fit_dof = false;
    fitc->add_option("--series", fit_series, "functional time series CSV (FAR/FARX design)");
    fitc->add_option("--order", fit_order, "autoregressive order")->capture_default_str();
    fitc->add_option("--exog", fit_exog, "same-day exogenous curve CSVs aligned with --series");
    fitc->add_option("--y", fit_y, "response curve CSV (paired design)");
    fitc->add_option("--x", fit_x, "covariate curve CSVs (paired design)");
    fitc->add_option("--scalars", fit_scalars, "scalar covariate table");
    fitc->add_option("--pve", fit_pve, "truncate by share of variance explained");
    fitc->add_option("--threshold", fit_threshold, "eigenvalue threshold m_n (default 5 n^0.45)");
    fitc->add_flag("--absolute", fit_absolute, "compare eigenvalues with 1/m_n instead of λ₁/m_n");
    fitc->add_option("--components", fit_components, "fixed number of components");
    fitc->add_flag("--no-center", fit_no_center, "do not center covariates and responses");
    fitc->add_flag("--dof", fit_dof, "scale the residual covariance by 1/(n - T_n)");

    // estimate
    auto* est = app.add_subcommand("estimate", "estimate P(Y in A | X = x)");
    ModelInputs est_in;
    est_in.add(est);
    std::vector<std::string> est_events;
    std::string est_method = "boot";
    std::size_t est_mc = 2000;
    est->add_option("--event", est_events, "event specification (repeatable)")->required();
    est->add_option("--method", est_method, "boot | gauss")->capture_default_str();
    est->add_option("--mc", est_mc, "Monte-Carlo draws for gauss")->capture_default_str();

    // quantile
    auto* quant = app.add_subcommand("quantile", "quantile over a monotone family of sets");
    ModelInputs q_in;
    q_in.add(quant);
    std::string q_family, q_method = "boot";
    std::vector<double> q_p;
    std::size_t q_mc = 2000;
    quant->add_option("--family", q_family, "family specification, e.g. level-alpha:z=0.5")->required();
    quant->add_option("--p", q_p, "probability level (repeatable)")->required();
    quant->add_option("--method", q_method, "boot | gauss")->capture_default_str();
    quant->add_option("--mc", q_mc, "Monte-Carlo draws for gauss")->capture_default_str();

    // band
    auto* band = app.add_subcommand("band", "uniform prediction band");
    ModelInputs b_in;
    b_in.add(band);
    double b_nominal = 0.95;
    std::string b_method = "boot", b_stat = "signed";
    std::size_t b_mc = 2000;
    band->add_option("--nominal", b_nominal, "nominal coverage")->capture_default_str();
    band->add_option("--method", b_method, "boot | gauss")->capture_default_str();
    band->add_option("--mc", b_mc, "Monte-Carlo draws for gauss")->capture_default_str();
    band->add_option("--statistic", b_stat, "signed | abs")->capture_default_str();

    // coverage-exp
    auto* cov = app.add_subcommand("coverage-exp", "empirical coverage of uniform prediction bands");
    harness::CoverageConfig cc;
    std::vector<std::string> cov_methods{"boot"};
    std::string cov_stat = "signed";
    cov->add_option("--n", cc.n, "sample size")->capture_default_str();
    cov->add_option("--b", cc.b, "second-lag weight")->capture_default_str();
    cov->add_option("--nominal", cc.nominal, "nominal coverage")->capture_default_str();
    cov->add_option("--method", cov_methods, "boot | gauss (repeatable)");
    cov->add_option("--reps", cc.reps, "replications")->capture_default_str();
    cov->add_option("--mc", cc.mc, "Monte-Carlo draws for gauss")->capture_default_str();
    cov->add_option("--pve", cc.pve, "PVE truncation level")->capture_default_str();
    cov->add_option("--statistic", cov_stat, "signed | abs")->capture_default_str();
    cov->add_option("--threads", cc.threads, "worker threads (0: all cores)");

    // rmse-exp
    auto* rm = app.add_subcommand("rmse-exp", "RMSE of conditional probability estimates against an oracle");
    harness::RMSEConfig rc;
    std::string rm_sizes = "50,100,250", rm_event = "level:alpha=7.0710678118654755,z=0.5", rm_process = "synthetic";
    std::vector<std::string> rm_methods{"boot", "gauss"};
    rm->add_option("--process", rm_process, "synthetic | paparoditis | iid")->capture_default_str();
    rm->add_option("--sizes", rm_sizes, "comma-separated sample sizes")->capture_default_str();
    rm->add_option("--predictors", rc.predictors, "number of predictors")->capture_default_str();
    rm->add_option("--reps", rc.reps, "replications")->capture_default_str();
    rm->add_option("--event", rm_event, "target event")->capture_default_str();
    rm->add_option("--method,--methods", rm_methods, "boot | gauss | nw | glm (repeatable)");
    rm->add_option("--mc", rc.mc, "Monte-Carlo draws for gauss")->capture_default_str();
    rm->add_option("--oracle-mc", rc.oracle_mc, "oracle draws per predictor")->capture_default_str();
    rm->add_option("--threads", rc.threads, "worker threads (0: all cores)");

    // quantile-exp
    auto* qe = app.add_subcommand("quantile-exp", "RMSE of extreme level-set quantiles (boot vs gauss)");
    harness::QuantileConfig qc;
    qe->add_option("--n", qc.n, "sample size")->capture_default_str();
    qe->add_option("--predictors", qc.predictors, "number of predictors")->capture_default_str();
    qe->add_option("--reps", qc.reps, "replications")->capture_default_str();
    qe->add_option("--z", qc.z, "time budget of the level set")->capture_default_str();
    qe->add_option("--p", qc.p, "probability level (default 1 - 1/n)");
    qe->add_option("--mc", qc.mc, "Monte-Carlo draws for gauss")->capture_default_str();
    qe->add_option("--oracle-mc", qc.oracle_mc, "oracle draws per predictor")->capture_default_str();
    qe->add_option("--threads", qc.threads, "worker threads (0: all cores)");

    // entropy-eval
    auto* ee = app.add_subcommand("entropy-eval", "test-set cross-entropy of boot, GLM and NW on price curves");
    harness::EntropyConfig ec;
    std::string ee_price, ee_demand, ee_wind, ee_start;
    ee->add_option("--price", ee_price, "price curve CSV, one day per row")->required();
    ee->add_option("--demand", ee_demand, "demand curve CSV")->required();
    ee->add_option("--wind", ee_wind, "wind curve CSV")->required();
    ee->add_option("--start-date", ee_start, "date of the first row, YYYY-MM-DD")->required();
    ee->add_option("--alphas", ec.alphas, "price thresholds")->delimiter(',');
    ee->add_option("--zs", ec.zs, "time budgets")->delimiter(',');
    ee->add_option("--pve", ec.pve, "PVE truncation level")->capture_default_str();
    ee->add_option("--order", ec.order, "autoregressive order")->capture_default_str();
    ee->add_option("--test-months", ec.test_months_per_year, "test months per year")->capture_default_str();

    // deseasonalize
    auto* ds = app.add_subcommand("deseasonalize", "remove yearly and weekly seasonal components");
    std::string ds_series, ds_start;
    int ds_window = 21;
    bool ds_no_weekly = false;
    ds->add_option("--series", ds_series, "daily curve CSV")->required();
    ds->add_option("--start-date", ds_start, "date of the first row, YYYY-MM-DD")->required();
    ds->add_option("--window", ds_window, "rolling-mean window in days")->capture_default_str();
    ds->add_flag("--no-weekly", ds_no_weekly, "skip the weekly component");

    // baseline nw|glm
    auto* base = app.add_subcommand("baseline", "Nadaraya-Watson or functional GLM estimates");
    base->require_subcommand(1);
    struct BaselineArgs {
        std::string series, y, scalars, link = "logit";
        std::vector<std::string> x, query, events;
        double bandwidth = 0.0;
        int components = 0;
        double pve = 0.0;
    };
    BaselineArgs ba;
    auto add_baseline = [&](const std::string& name, const std::string& what) {
        auto* c = base->add_subcommand(name, what);
        c->add_option("--series", ba.series, "training series (FAR(1) pairs)");
        c->add_option("--y", ba.y, "training responses");
        c->add_option("--x", ba.x, "training covariate curve CSVs");
        c->add_option("--query", ba.query, "query covariate curve CSVs (one query per row)")->required();
        c->add_option("--event", ba.events, "event specification (repeatable)")->required();
        return c;
    };
    auto* nwc = add_baseline("nw", "Nadaraya-Watson with a Gaussian kernel");
    nwc->add_option("--bandwidth", ba.bandwidth, "kernel bandwidth (default: leave-one-out choice)");
    auto* glmc = add_baseline("glm", "binomial regression on functional principal component scores");
    glmc->add_option("--components", ba.components, "number of components");
    glmc->add_option("--pve", ba.pve, "choose components by share of variance explained")->capture_default_str();
    glmc->add_option("--link", ba.link, "logit | probit")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }
    const Grid grid(g.grid_d);

    if (*sim) {
        harness::DGPSpec spec;
        const auto kind = harness::parse_dgp_kind(process_name);
        if (kind == harness::DGPKind::far_paparoditis) {
            spec = harness::DGPSpec::paparoditis(sim_b, grid);
        } else {
            spec = harness::DGPSpec::synthetic(grid);
            spec.kind = kind;
            spec.b = sim_b;
        }
        if (sim_burn >= 0) spec.burn_in = sim_burn;
        spec.seed = g.seed;
        Output out(g.out);
        harness::write_curves(harness::simulate_far(spec, sim_n), out.stream());
        return 0;
    }

    if (*fitc) {
        RegressionSample sample;
        if (!fit_series.empty()) {
            if (!fit_y.empty() || !fit_x.empty()) throw UsageError("use either --series or --y/--x");
            const auto series = load_nonempty(fit_series);
            std::optional<std::vector<Covariate>> exog;
            if (!fit_exog.empty() || !fit_scalars.empty()) exog = load_covariates(fit_exog, fit_scalars);
            if (exog) {
                sample = build_far_design(series, fit_order, std::span<const Covariate>(*exog)).first;
            } else {
                sample = build_far_design(series, fit_order).first;
            }
        } else {
            if (fit_y.empty()) throw UsageError("one of --series or --y is required");
            sample.ys = load_nonempty(fit_y);
            sample.xs = load_covariates(fit_x, fit_scalars);
        }
        FitOptions options;
        options.truncation = truncation_from(fit_pve, fit_threshold, fit_components, fit_absolute);
        options.center = !fit_no_center;
        options.dof_correction = fit_dof;
        const FittedFLM model = fit(sample, options);
        Output out(g.out);
        write_model(model, out.stream());
        return 0;
    }

    if (*est) {
        const FittedFLM model = load_model(est_in.model);
        const Method method = parse_method(est_method);
        const NoiseBank bank = make_bank(model, method, est_mc, g.seed);
        const auto xs = est_in.queries();
        Output out(g.out);
        auto& os = out.stream();
        os << "query,event,method,value,count,n_used,status\n";
        for (std::size_t q = 0; q < xs.size(); ++q) {
            const Curve forecast = predict(model, xs[q]);
            const auto ctx = parse_context(model.grid, forecast);
            for (const auto& text : est_events) {
                const auto e = estimate_prob(forecast, bank, parse_event(text, ctx));
                os << q + 1 << ",\"" << text << "\"," << to_string(method) << ',' << format_double(e.value) << ','
                   << e.count << ',' << e.n_used << ',' << status_name(e.status) << '\n';
            }
        }
        return 0;
    }

    if (*quant) {
        const FittedFLM model = load_model(q_in.model);
        const Method method = parse_method(q_method);
        const NoiseBank bank = make_bank(model, method, q_mc, g.seed);
        const auto xs = q_in.queries();
        Output out(g.out);
        auto& os = out.stream();
        os << "query,p,quantile\n";
        for (std::size_t q = 0; q < xs.size(); ++q) {
            const Curve forecast = predict(model, xs[q]);
            const MonotoneFamily family = parse_family(q_family, parse_context(model.grid, forecast));
            for (double p : q_p) {
                os << q + 1 << ',' << format_double(p) << ','
                   << format_double(quantile_over_family(forecast, bank, family, p)) << '\n';
            }
        }
        return 0;
    }

    if (*band) {
        const FittedFLM model = load_model(b_in.model);
        const Method method = parse_method(b_method);
        if (b_stat != "signed" && b_stat != "abs") throw UsageError("--statistic is signed or abs");
        const auto statistic = b_stat == "signed" ? BandStatistic::signed_extremes : BandStatistic::absolute_sup;
        const NoiseBank bank = make_bank(model, method, b_mc, g.seed);
        const Curve sigma = residual_sigma(model);
        const auto xs = b_in.queries();
        Output out(g.out);
        auto& os = out.stream();
        os << "query,t,center,sigma,lower,upper,L,U\n";
        for (std::size_t q = 0; q < xs.size(); ++q) {
            const auto cal = calibrate_uniform_band(predict(model, xs[q]), sigma, bank, b_nominal, statistic);
            for (std::size_t i = 0; i < model.grid.size(); ++i) {
                const double c = cal.center[i];
                const double s = cal.sigma[i];
                os << q + 1 << ',' << format_double(model.grid.point(i)) << ',' << format_double(c) << ','
                   << format_double(s) << ',' << format_double(c + cal.lower * s) << ','
                   << format_double(c + cal.upper * s) << ',' << format_double(cal.lower) << ','
                   << format_double(cal.upper) << '\n';
            }
        }
        return 0;
    }

    if (*cov) {
        cc.seed = g.seed;
        cc.resolution = g.grid_d;
        cc.methods.clear();
        for (const auto& m : cov_methods) cc.methods.push_back(parse_method(m));
        if (cov_stat != "signed" && cov_stat != "abs") throw UsageError("--statistic is signed or abs");
        cc.statistic = cov_stat == "signed" ? BandStatistic::signed_extremes : BandStatistic::absolute_sup;
        const auto start = std::chrono::steady_clock::now();
        auto report = harness::coverage_report(cc, harness::run_coverage_experiment(cc));
        report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit_report(report, g.out);
        return 0;
    }

    if (*rm) {
        rc.seed = g.seed;
        rc.dgp = harness::parse_dgp_kind(rm_process) == harness::DGPKind::far_paparoditis
                     ? harness::DGPSpec::paparoditis(0.0, grid)
                     : harness::DGPSpec::synthetic(grid);
        rc.dgp.kind = harness::parse_dgp_kind(rm_process);
        rc.sizes = parse_sizes(rm_sizes);
        rc.event = parse_event(rm_event, parse_context(grid));
        rc.methods.clear();
        for (const auto& m : rm_methods) rc.methods.push_back(harness::parse_estimator(m));
        const auto start = std::chrono::steady_clock::now();
        auto report = harness::rmse_report(rc, harness::run_rmse_experiment(rc));
        report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit_report(report, g.out);
        return 0;
    }

    if (*qe) {
        qc.seed = g.seed;
        qc.dgp = harness::DGPSpec::synthetic(grid);
        const auto start = std::chrono::steady_clock::now();
        auto report = harness::quantile_report(qc, harness::run_quantile_experiment(qc));
        report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        emit_report(report, g.out);
        return 0;
    }

    if (*ee) {
        const auto date = parse_date(ee_start);
        ec.start_year = date[0];
        ec.start_month = date[1];
        ec.start_day = date[2];
        ec.seed = g.seed;
        harness::EntropyInputs inputs{load_nonempty(ee_price), load_nonempty(ee_demand), load_nonempty(ee_wind)};
        emit_report(harness::entropy_report(ec, harness::run_entropy_evaluation(inputs, ec)), g.out);
        return 0;
    }

    if (*ds) {
        const auto series = load_nonempty(ds_series);
        const auto date = parse_date(ds_start);
        const auto cal = harness::consecutive_days(date[0], date[1], date[2], series.size());
        Output out(g.out);
        harness::write_curves(harness::deseasonalize(series, cal.day_of_year, cal.day_of_week, ds_window, !ds_no_weekly),
                              out.stream());
        return 0;
    }

    if (*base) {
        RegressionSample sample;
        if (!ba.series.empty()) {
            sample = build_far_design(load_nonempty(ba.series), 1).first;
        } else {
            if (ba.y.empty() || ba.x.empty()) throw UsageError("training data needs --series or --y with --x");
            sample.ys = load_nonempty(ba.y);
            sample.xs = load_covariates(ba.x, "");
        }
        sample.validate();
        const auto queries = load_covariates(ba.query, "");
        const Grid& g_resp = sample.ys.front().grid();
        Output out(g.out);
        auto& os = out.stream();
        os << "query,event,method,value,parameter\n";
        for (const auto& text : ba.events) {
            const EventSet event = parse_event(text, parse_context(g_resp));
            std::vector<bool> labels;
            for (const auto& y : sample.ys) labels.push_back(event.contains(y));
            if (*nwc) {
                const double h = ba.bandwidth > 0.0 ? ba.bandwidth : nw_select_bandwidth(sample.xs, labels).bandwidth;
                const NWEstimator nw(sample.xs, labels, h);
                for (std::size_t q = 0; q < queries.size(); ++q) {
                    os << q + 1 << ",\"" << text << "\",nw," << format_double(nw.prob(queries[q])) << ','
                       << format_double(h) << '\n';
                }
            } else {
                int t = ba.components;
                if (t <= 0) {
                    const SpectralPair spec = eigendecompose(empirical_covariance(sample.xs, true));
                    t = truncation_pve(spec, ba.pve > 0.0 ? ba.pve : 0.85);
                }
                const FGLMModel glm = fglm_fit(sample.xs, labels, t, parse_link(ba.link));
                for (std::size_t q = 0; q < queries.size(); ++q) {
                    os << q + 1 << ",\"" << text << "\",glm," << format_double(fglm_prob(glm, queries[q])) << ','
                       << glm.coefficients.size() << '\n';
                }
            }
        }
        return 0;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const fcd::RangeExhaustedError& e) {
        std::cerr << "error: " << e.what() << " (probability at boundary " << e.boundary_probability() << ")\n";
        return 3;
    } catch (const fcd::DegenerateInputError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const fcd::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
