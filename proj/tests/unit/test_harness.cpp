#include "fcd/error.hpp"
#include "fcd/harness/dgp.hpp"
#include "fcd/harness/experiments.hpp"
#include "fcd/harness/metrics.hpp"
#include "fcd/harness/seasonal.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace fcd;
using namespace fcd::harness;

namespace {

struct Moments {
    double mean = 0, var = 0;
};

Moments moments(const std::vector<double>& v) {
    Moments m;
    for (double x : v) m.mean += x;
    m.mean /= static_cast<double>(v.size());
    for (double x : v) m.var += (x - m.mean) * (x - m.mean);
    m.var /= static_cast<double>(v.size() - 1);
    return m;
}

}  // namespace

TEST(Brownian, StartsAtZeroWithUnitVarianceAtOne) {
    const Grid g(100);
    std::vector<double> at1, at25, at75;
    rng::Stream s(1);
    for (int k = 0; k < 5000; ++k) {
        const Curve b = simulate_brownian(g, s);
        ASSERT_EQ(b[0], 0.0);
        at1.push_back(b[100]);
        at25.push_back(b[25]);
        at75.push_back(b[75]);
    }
    EXPECT_NEAR(moments(at1).var, 1.0, 0.06);
    double cov = 0;
    const double m25 = moments(at25).mean, m75 = moments(at75).mean;
    for (int k = 0; k < 5000; ++k) cov += (at25[k] - m25) * (at75[k] - m75);
    EXPECT_NEAR(cov / 4999, 0.25, 0.05);
    EXPECT_EQ(simulate_brownian(g, 5).values(), simulate_brownian(g, 5).values());
}

TEST(FAR, CollapsedRecursions) {
    DGPSpec spec = DGPSpec::paparoditis(0.0, Grid(50));
    spec.kernel_constant = 0.0;
    spec.noise = NoiseKind::none;
    for (const Curve& c : simulate_far(spec, 10)) EXPECT_EQ(sup_norm(c), 0.0);

    spec.noise = NoiseKind::brownian;
    spec.seed = 3;
    const auto iid = simulate_far(spec, 3000);
    std::vector<double> end, lag;
    for (std::size_t k = 0; k < iid.size(); ++k) {
        end.push_back(iid[k][50]);
        if (k > 0) lag.push_back(iid[k][50] * iid[k - 1][50]);
    }
    EXPECT_NEAR(moments(end).var, 1.0, 0.08);
    EXPECT_NEAR(moments(lag).mean, 0.0, 4 / std::sqrt(3000.0));
}

TEST(FAR, ExponentialKernelHasPositiveLagOneDependence) {
    DGPSpec spec = DGPSpec::paparoditis(0.0, Grid(100));
    spec.seed = 8;
    const auto y = simulate_far(spec, 201);
    std::vector<double> products;
    for (std::size_t k = 1; k < y.size(); ++k) products.push_back(inner_product(y[k], y[k - 1]));
    const Moments m = moments(products);
    EXPECT_GT(m.mean / std::sqrt(m.var / static_cast<double>(products.size())), 1.645);
    EXPECT_EQ(simulate_far(spec, 20)[19].values(), simulate_far(spec, 20)[19].values());
    EXPECT_LT(FARProcess(spec).operator_norm(), 1.0);
    EXPECT_NEAR(FARProcess(DGPSpec::synthetic(Grid(100))).operator_norm(), 0.6, 1e-9);
}

TEST(GaussianProcess, SpectrumAndKernelDrawsAgree) {
    const Grid g(60);
    const SpectralPair spec = fourier_spectrum(g, 9, 0.6);
    EXPECT_NEAR(spec.eigenvalues[0], 0.6, 1e-12);
    EXPECT_NEAR(spec.eigenvalues[2], 0.6 / 9, 1e-12);
    std::vector<double> v;
    for (std::uint64_t seed = 0; seed < 4000; ++seed) v.push_back(inner_product(simulate_gaussian_process(spec, g, seed),
                                                                                Curve::constant(g, 1.0)));
    EXPECT_NEAR(moments(v).var, 0.6, 0.6 * 0.1);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(61, 61);
    bad(0, 0) = -1;
    EXPECT_THROW((void)simulate_gaussian_process(bad, g, 1), DegenerateInputError);
    EXPECT_THROW((void)simulate_gaussian_process(Eigen::MatrixXd::Identity(5, 5), g, 1), StructuralError);
}

TEST(Metrics, Examples) {
    const double p_half[] = {0.5}, p_quarter[] = {0.25}, exact[] = {1.0, 0.0};
    EXPECT_NEAR(cross_entropy({true}, p_half), std::log(2.0), 1e-12);
    EXPECT_NEAR(cross_entropy({true}, p_quarter), std::log(4.0), 1e-12);
    EXPECT_LT(cross_entropy({true, false}, exact), 1e-11);
    EXPECT_THROW((void)cross_entropy({true, false}, p_half), UsageError);
    EXPECT_DOUBLE_EQ(check_loss(2, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(check_loss(-2, 0.5), 1.0);
    EXPECT_DOUBLE_EQ(check_loss(1, 0.95), 0.95);
    EXPECT_NEAR(check_loss(-1, 0.95), 0.05, 1e-15);
    EXPECT_THROW((void)check_loss(1, 1.0), UsageError);
    const double est[] = {1, 3};
    EXPECT_DOUBLE_EQ(rmse(est, 2), 1.0);
    EXPECT_EQ(median({5, 1, 3}), 3.0);
}

TEST(Seasonal, Examples) {
    const Grid g(24);
    const Calendar cal = consecutive_days(2023, 1, 2, 28);  // a Monday, four full weeks
    EXPECT_EQ(cal.day_of_week[0], 0);
    std::vector<Curve> flat(28, Curve::constant(g, 4.2));
    for (const Curve& c : deseasonalize(flat, cal.day_of_year, cal.day_of_week)) EXPECT_LE(sup_norm(c), 1e-12);

    std::vector<Curve> weekly;
    for (int dow : cal.day_of_week) weekly.push_back(Curve::from_function(g, [&](double t) { return 3 + dow * t * t - 0.5 * dow; }));
    for (const Curve& c : deseasonalize(weekly, cal.day_of_year, cal.day_of_week)) EXPECT_LE(sup_norm(c), 1e-8);

    rng::Stream s(2);
    std::vector<Curve> noisy;
    for (int k = 0; k < 28; ++k) noisy.push_back(fcd::testing::smooth_curve(g, 4, s));
    const SeasonalModel yearly_only = SeasonalModel::fit(noisy, cal.day_of_year, cal.day_of_week, 21, false);
    const auto out = deseasonalize(noisy, cal.day_of_year, cal.day_of_week, 21, false);
    for (std::size_t k = 0; k < noisy.size(); ++k) {
        EXPECT_LE(sup_norm(out[k] - (noisy[k] - yearly_only.yearly(cal.day_of_year[k]))), 1e-12);
    }
    const auto back = yearly_only.restore(out, cal.day_of_year, cal.day_of_week);
    EXPECT_LE(sup_norm(back[5] - noisy[5]), 1e-12);
    EXPECT_THROW((void)deseasonalize(noisy, {1, 2}, cal.day_of_week), UsageError);
}

TEST(Calendar, LeapYearAndWeekdays) {
    const Calendar cal = consecutive_days(2024, 2, 28, 3);
    EXPECT_EQ(cal.day_of_year, (std::vector<int>{59, 60, 61}));
    EXPECT_EQ(cal.day_of_week, (std::vector<int>{2, 3, 4}));
    EXPECT_EQ(cal.month, (std::vector<int>{2, 2, 3}));
    EXPECT_THROW((void)consecutive_days(2023, 2, 30, 1), UsageError);
}

TEST(Oracle, SelfConsistentAcrossSeeds) {
    const FARProcess process(DGPSpec::synthetic(Grid(50)));
    const auto xs = draw_predictors(process, 20, 100, rng::Stream(1));
    const EventSet a = EventSet::level(std::sqrt(50.0), 0.5);
    double ss = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double p1 = oracle_probability(process, xs[i], a, 10000, rng::Stream(2).split(i));
        const double p2 = oracle_probability(process, xs[i], a, 10000, rng::Stream(3).split(i));
        ss += (p1 - p2) * (p1 - p2);
    }
    EXPECT_LE(std::sqrt(ss / static_cast<double>(xs.size())), 0.01);
}

TEST(Experiments, DeterministicAndThreadIndependent) {
    CoverageConfig cfg;
    cfg.n = 60;
    cfg.reps = 12;
    cfg.seed = 5;
    cfg.resolution = 40;
    cfg.mc = 300;
    cfg.methods = {Method::boot, Method::gauss};
    cfg.threads = 1;
    const auto a = run_coverage_experiment(cfg);
    cfg.threads = 3;
    const auto b = run_coverage_experiment(cfg);
    ASSERT_EQ(a.size(), 2u);
    for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a[i].hits, b[i].hits);
    std::ostringstream ca, cb;
    write_report_csv(coverage_report(cfg, a), ca);
    write_report_csv(coverage_report(cfg, b), cb);
    EXPECT_EQ(ca.str(), cb.str());
    const ExperimentReport rep = coverage_report(cfg, a);
    EXPECT_GE(rep.value(0, "coverage"), 0.0);
    EXPECT_LE(rep.value(0, "coverage"), 1.0);

    RMSEConfig r;
    r.dgp = DGPSpec::synthetic(Grid(40));
    r.sizes = {40};
    r.predictors = 4;
    r.reps = 5;
    r.mc = 200;
    r.oracle_mc = 500;
    r.methods = {Estimator::boot, Estimator::gauss, Estimator::nw, Estimator::fglm};
    r.seed = 9;
    r.threads = 1;
    const RMSEResult r1 = run_rmse_experiment(r);
    r.threads = 2;
    const RMSEResult r2 = run_rmse_experiment(r);
    EXPECT_EQ(r1.rmse, r2.rmse);
    EXPECT_EQ(r1.truth, r2.truth);
}

TEST(Experiments, WiderNominalNeverCoversLess) {
    CoverageConfig cfg;
    cfg.n = 80;
    cfg.reps = 60;
    cfg.seed = 13;
    cfg.methods = {Method::gauss};
    cfg.mc = 4000;
    cfg.nominal = 0.95;
    const double at95 = run_coverage_experiment(cfg).front().coverage();
    cfg.nominal = 0.999;
    const double at999 = run_coverage_experiment(cfg).front().coverage();
    EXPECT_GE(at999, at95);
    EXPECT_LE(at999, 1.0);
}
