#include "fcd/harness/experiments.hpp"

#include "fcd/baselines.hpp"
#include "fcd/error.hpp"
#include "fcd/harness/curve_io.hpp"
#include "fcd/harness/metrics.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <thread>

namespace fcd::harness {

double ExperimentReport::value(std::size_t row, const std::string& column) const {
    auto it = std::find(value_columns.begin(), value_columns.end(), column);
    if (it == value_columns.end()) throw UsageError("report has no column '" + column + "'");
    return rows.at(row).values.at(static_cast<std::size_t>(it - value_columns.begin()));
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
    bool first = true;
    for (const auto& c : report.key_columns) out << (std::exchange(first, false) ? "" : ",") << c;
    for (const auto& c : report.value_columns) out << (std::exchange(first, false) ? "" : ",") << c;
    out << '\n';
    for (const auto& r : report.rows) {
        first = true;
        for (const auto& k : r.keys) out << (std::exchange(first, false) ? "" : ",") << k;
        for (double v : r.values) out << (std::exchange(first, false) ? "" : ",") << format_double(v);
        out << '\n';
    }
}

void write_report_json(const ExperimentReport& report, std::ostream& out) {
    nlohmann::ordered_json j;
    j["name"] = report.name;
    j["seed"] = report.seed;
    j["replications"] = report.replications;
    j["runtime_seconds"] = report.runtime_seconds;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& r : report.rows) {
        nlohmann::ordered_json row;
        for (std::size_t i = 0; i < r.keys.size(); ++i) row[report.key_columns[i]] = r.keys[i];
        for (std::size_t i = 0; i < r.values.size(); ++i) row[report.value_columns[i]] = r.values[i];
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    out << j.dump(2) << '\n';
}

void save_report(const ExperimentReport& report, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    if (path.ends_with(".json")) {
        write_report_json(report, out);
    } else {
        write_report_csv(report, out);
    }
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

namespace {

std::uint64_t seed_from(rng::Stream stream) { return stream(); }

}  // namespace

// ---- coverage ----

double CoverageCell::std_error() const {
    const double p = coverage();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(reps));
}

std::vector<CoverageCell> run_coverage_experiment(const CoverageConfig& config) {
    if (config.reps < 1) throw UsageError("replications must be >= 1");
    if (config.n < 3) throw UsageError("coverage experiment needs n >= 3");
    if (config.methods.empty()) throw UsageError("no methods requested");
    const FARProcess process(DGPSpec::paparoditis(config.b, Grid(config.resolution)));
    const rng::Stream root = rng::Stream(config.seed).split("coverage");
    const std::size_t k = config.methods.size();
    std::vector<char> contained(config.reps * k, 0);

    parallel_for(config.reps, config.threads, [&](std::size_t r) {
        const rng::Stream rep = root.split(r);
        rng::Stream data = rep.split("data");
        const std::vector<Curve> series = process.simulate(config.n + 1, data);
        const auto [sample, design] = build_far_design(series, 1);
        FitOptions options;
        options.truncation = TruncationRule::pve_rule(config.pve);
        const FittedFLM model = fit(sample, options);
        const Curve forecast = predict(model, far_forecast_covariate(series, 1));

        rng::Stream truth_stream = rep.split("truth");
        const Curve truth = process.conditional_mean(series.back(), series[series.size() - 2]) +
                            process.noise_curve(truth_stream);
        const Curve sigma = residual_sigma(model);
        for (std::size_t m = 0; m < k; ++m) {
            const Method method = config.methods[m];
            const NoiseBank bank = make_bank(model, method, config.mc, seed_from(rep.split("gauss")));
            const BandCalibration cal = calibrate_uniform_band(forecast, sigma, bank, config.nominal, config.statistic);
            contained[r * k + m] = cal.band().contains(truth) ? 1 : 0;
        }
    });

    std::vector<CoverageCell> cells;
    for (std::size_t m = 0; m < k; ++m) {
        CoverageCell c{config.methods[m], 0, config.reps};
        for (std::size_t r = 0; r < config.reps; ++r) c.hits += static_cast<std::size_t>(contained[r * k + m]);
        cells.push_back(c);
    }
    return cells;
}

ExperimentReport coverage_report(const CoverageConfig& config, const std::vector<CoverageCell>& cells) {
    ExperimentReport rep;
    rep.name = "coverage";
    rep.seed = config.seed;
    rep.replications = config.reps;
    rep.key_columns = {"method"};
    rep.value_columns = {"n", "b", "nominal", "reps", "hits", "coverage", "std_error"};
    for (const auto& c : cells) {
        rep.rows.push_back({{std::string(to_string(c.method))},
                            {static_cast<double>(config.n), config.b, config.nominal, static_cast<double>(c.reps),
                             static_cast<double>(c.hits), c.coverage(), c.std_error()}});
    }
    return rep;
}

// ---- RMSE ----

std::string_view to_string(Estimator e) noexcept {
    switch (e) {
        case Estimator::boot: return "boot";
        case Estimator::gauss: return "gauss";
        case Estimator::nw: return "nw";
        case Estimator::fglm: return "glm";
    }
    return "?";
}

Estimator parse_estimator(std::string_view s) {
    if (s == "boot") return Estimator::boot;
    if (s == "gauss") return Estimator::gauss;
    if (s == "nw") return Estimator::nw;
    if (s == "glm" || s == "fglm") return Estimator::fglm;
    throw UsageError("unknown estimator '" + std::string(s) + "' (expected boot, gauss, nw or glm)");
}

std::vector<Curve> draw_predictors(const FARProcess& process, std::size_t count, int burn_in, rng::Stream stream) {
    DGPSpec spec = process.spec();
    spec.burn_in = burn_in;
    const FARProcess chain(spec);
    std::vector<Curve> out;
    out.reserve(count);
    for (std::size_t j = 0; j < count; ++j) {
        rng::Stream s = stream.split(j);
        out.push_back(chain.simulate(1, s).front());
    }
    return out;
}

namespace {

NoiseBank oracle_bank(const FARProcess& process, std::size_t mc, rng::Stream stream) {
    NoiseBank bank;
    bank.method = Method::gauss;
    bank.draws = process.noise(mc, stream);
    return bank;
}

}  // namespace

double oracle_probability(const FARProcess& process, const Curve& x, const EventSet& event, std::size_t mc,
                          rng::Stream stream) {
    return estimate_prob(process.conditional_mean(x), oracle_bank(process, mc, stream), event).value;
}

namespace {

std::vector<bool> indicators(const RegressionSample& sample, const EventSet& event) {
    std::vector<bool> out;
    out.reserve(sample.size());
    for (const auto& y : sample.ys) out.push_back(event.contains(y));
    return out;
}

// Class frequency when one class is absent (the binomial fit is undefined then).
bool single_class(const std::vector<bool>& labels) {
    return std::all_of(labels.begin(), labels.end(), [&](bool b) { return b == labels.front(); });
}

}  // namespace

RMSEResult run_rmse_experiment(const RMSEConfig& config) {
    if (config.reps < 1 || config.predictors < 1 || config.sizes.empty() || config.methods.empty()) {
        throw UsageError("RMSE experiment needs reps, predictors, sizes and methods");
    }
    const FARProcess process(config.dgp);
    const rng::Stream root = rng::Stream(config.seed).split("rmse");
    const std::vector<Curve> predictors =
        draw_predictors(process, config.predictors, config.predictor_burn_in, root.split("predictors"));

    RMSEResult result;
    result.truth.resize(config.predictors);
    for (std::size_t j = 0; j < config.predictors; ++j) {
        result.truth[j] = oracle_probability(process, predictors[j], config.event, config.oracle_mc,
                                             root.split("oracle").split(j));
    }

    const std::size_t nm = config.methods.size();
    const std::size_t np = config.predictors;
    std::vector<std::size_t> degenerate(config.sizes.size() * config.reps, 0);
    for (std::size_t si = 0; si < config.sizes.size(); ++si) {
        const std::size_t n = config.sizes[si];
        // estimates[rep][method][predictor]
        std::vector<double> est(config.reps * nm * np, 0.0);
        parallel_for(config.reps, config.threads, [&](std::size_t r) {
            const rng::Stream rep = root.split("size").split(n).split(r);
            rng::Stream data = rep.split("data");
            const std::vector<Curve> series = process.simulate(n + 1, data);
            const auto [sample, design] = build_far_design(series, 1);
            FitOptions options;
            options.truncation = config.truncation;
            const FittedFLM model = fit(sample, options);
            const std::vector<bool> labels = indicators(sample, config.event);

            for (std::size_t m = 0; m < nm; ++m) {
                double* out = &est[(r * nm + m) * np];
                switch (config.methods[m]) {
                    case Estimator::boot:
                    case Estimator::gauss: {
                        const Method method = config.methods[m] == Estimator::boot ? Method::boot : Method::gauss;
                        const NoiseBank bank = make_bank(model, method, config.mc, seed_from(rep.split("gauss")));
                        for (std::size_t j = 0; j < np; ++j) {
                            out[j] = estimate_prob(predict(model, Covariate(predictors[j])), bank, config.event).value;
                        }
                        break;
                    }
                    case Estimator::nw: {
                        const double h = nw_select_bandwidth(sample.xs, labels).bandwidth;
                        const NWEstimator nw(sample.xs, labels, h);
                        for (std::size_t j = 0; j < np; ++j) out[j] = nw.prob(Covariate(predictors[j]));
                        break;
                    }
                    case Estimator::fglm: {
                        if (single_class(labels)) {
                            ++degenerate[si * config.reps + r];
                            for (std::size_t j = 0; j < np; ++j) out[j] = labels.front() ? 1.0 : 0.0;
                            break;
                        }
                        const FGLMModel glm = fglm_fit(sample.xs, labels, model.truncation, Link::logit);
                        for (std::size_t j = 0; j < np; ++j) out[j] = fglm_prob(glm, Covariate(predictors[j]));
                        break;
                    }
                }
            }
        });

        std::vector<std::vector<double>> per_method(nm, std::vector<double>(np));
        std::vector<double> medians(nm);
        for (std::size_t m = 0; m < nm; ++m) {
            for (std::size_t j = 0; j < np; ++j) {
                std::vector<double> e(config.reps);
                for (std::size_t r = 0; r < config.reps; ++r) e[r] = est[(r * nm + m) * np + j];
                per_method[m][j] = rmse(e, result.truth[j]);
            }
            medians[m] = median(per_method[m]);
        }
        result.rmse.push_back(std::move(per_method));
        result.median_rmse.push_back(std::move(medians));
    }
    for (auto d : degenerate) result.fglm_degenerate += d;
    return result;
}

ExperimentReport rmse_report(const RMSEConfig& config, const RMSEResult& result) {
    ExperimentReport rep;
    rep.name = "rmse";
    rep.seed = config.seed;
    rep.replications = config.reps;
    rep.key_columns = {"method", "predictor"};
    rep.value_columns = {"n", "truth", "rmse"};
    for (std::size_t si = 0; si < config.sizes.size(); ++si) {
        for (std::size_t m = 0; m < config.methods.size(); ++m) {
            const std::string name(to_string(config.methods[m]));
            for (std::size_t j = 0; j < config.predictors; ++j) {
                rep.rows.push_back({{name, std::to_string(j + 1)},
                                    {static_cast<double>(config.sizes[si]), result.truth[j], result.rmse[si][m][j]}});
            }
            rep.rows.push_back({{name, "median"},
                                {static_cast<double>(config.sizes[si]), std::nan(""), result.median_rmse[si][m]}});
        }
    }
    return rep;
}

// ---- extreme quantiles ----

double QuantileResult::gauss_win_fraction() const {
    std::size_t wins = 0;
    for (std::size_t j = 0; j < rmse_boot.size(); ++j) wins += rmse_gauss[j] < rmse_boot[j] ? 1 : 0;
    return rmse_boot.empty() ? 0.0 : static_cast<double>(wins) / static_cast<double>(rmse_boot.size());
}

QuantileResult run_quantile_experiment(const QuantileConfig& config) {
    if (config.reps < 1 || config.predictors < 1) throw UsageError("quantile experiment needs reps and predictors");
    const double p = config.p > 0.0 ? config.p : 1.0 - 1.0 / static_cast<double>(config.n);
    const FARProcess process(config.dgp);
    const MonotoneFamily family = level_threshold_family(config.z);
    const rng::Stream root = rng::Stream(config.seed).split("quantile");
    const std::vector<Curve> predictors =
        draw_predictors(process, config.predictors, config.predictor_burn_in, root.split("predictors"));

    QuantileResult result;
    result.p = p;
    const std::size_t np = config.predictors;
    result.truth.resize(np);
    for (std::size_t j = 0; j < np; ++j) {
        const NoiseBank bank = oracle_bank(process, config.oracle_mc, root.split("oracle").split(j));
        result.truth[j] = quantile_over_family(process.conditional_mean(predictors[j]), bank, family, p);
    }

    // [rep][predictor] for boot then gauss, plus realized statistics for the check loss.
    std::vector<double> boot(config.reps * np), gauss(config.reps * np), realized(config.reps * np);
    parallel_for(config.reps, config.threads, [&](std::size_t r) {
        const rng::Stream rep = root.split("rep").split(r);
        rng::Stream data = rep.split("data");
        const std::vector<Curve> series = process.simulate(config.n + 1, data);
        const auto [sample, design] = build_far_design(series, 1);
        FitOptions options;
        options.truncation = config.truncation;
        const FittedFLM model = fit(sample, options);
        const NoiseBank bb = boot_bank(model);
        const NoiseBank gb = gauss_bank(model, config.mc, seed_from(rep.split("gauss")));
        rng::Stream outcome = rep.split("outcome");
        for (std::size_t j = 0; j < np; ++j) {
            const Curve forecast = predict(model, Covariate(predictors[j]));
            boot[r * np + j] = quantile_over_family(forecast, bb, family, p);
            gauss[r * np + j] = quantile_over_family(forecast, gb, family, p);
            const Curve y = process.conditional_mean(predictors[j]) + process.noise_curve(outcome);
            realized[r * np + j] = family.statistic(y.samples());
        }
    });

    for (std::size_t j = 0; j < np; ++j) {
        std::vector<double> b(config.reps), g(config.reps);
        double lb = 0.0;
        double lg = 0.0;
        for (std::size_t r = 0; r < config.reps; ++r) {
            b[r] = boot[r * np + j];
            g[r] = gauss[r * np + j];
            lb += check_loss(realized[r * np + j] - b[r], p);
            lg += check_loss(realized[r * np + j] - g[r], p);
        }
        result.rmse_boot.push_back(rmse(b, result.truth[j]));
        result.rmse_gauss.push_back(rmse(g, result.truth[j]));
        result.check_loss_boot.push_back(lb / static_cast<double>(config.reps));
        result.check_loss_gauss.push_back(lg / static_cast<double>(config.reps));
    }
    return result;
}

ExperimentReport quantile_report(const QuantileConfig& config, const QuantileResult& result) {
    ExperimentReport rep;
    rep.name = "quantile";
    rep.seed = config.seed;
    rep.replications = config.reps;
    rep.key_columns = {"predictor"};
    rep.value_columns = {"n", "p", "truth", "rmse_boot", "rmse_gauss", "check_loss_boot", "check_loss_gauss"};
    for (std::size_t j = 0; j < result.truth.size(); ++j) {
        rep.rows.push_back({{std::to_string(j + 1)},
                            {static_cast<double>(config.n), result.p, result.truth[j], result.rmse_boot[j],
                             result.rmse_gauss[j], result.check_loss_boot[j], result.check_loss_gauss[j]}});
    }
    rep.rows.push_back({{"median"},
                        {static_cast<double>(config.n), result.p, std::nan(""), median(result.rmse_boot),
                         median(result.rmse_gauss), median(result.check_loss_boot), median(result.check_loss_gauss)}});
    return rep;
}

}  // namespace fcd::harness
