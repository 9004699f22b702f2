#include "fcd/conddist.hpp"
#include "fcd/error.hpp"
#include "fcd/harness/experiments.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace fcd;
using fcd::testing::apply_kernel;
using fcd::testing::constant_residual_model;
using fcd::testing::smooth_curve;

namespace {

const Covariate& origin() {
    static const Covariate x({}, {0.0});
    return x;
}

// Γ̂ = c·(𝟙 ⊗ 𝟙): in coordinates the single eigenvector is sqrt(w), which has unit norm.
FittedFLM constant_shift_model(const Grid& g, double c) {
    FittedFLM m = constant_residual_model(g, {-1.0, 1.0});
    const auto p = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd basis = Eigen::MatrixXd::Identity(p, p);
    basis.col(0) = g.sqrt_weights();
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis);
    Eigen::MatrixXd q = qr.householderQ();
    if (q(0, 0) < 0) q.col(0) = -q.col(0);
    m.gamma_hat.eigenvectors = q;
    m.gamma_hat.eigenvalues = Eigen::VectorXd::Zero(p);
    m.gamma_hat.eigenvalues[0] = c;
    return m;
}

double stddev(const std::vector<double>& v) {
    double mean = 0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double ss = 0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double kernel_rho(double t, double s) { return 0.6 * std::cos(t - s); }

}  // namespace

TEST(BootProb, ConstantResidualExamples) {
    const Grid g(30);
    const FittedFLM m = constant_residual_model(g, {-1.0, 0.0, 1.0});
    const CondProbEstimate e = boot_prob(m, origin(), max_family().at(0.0));
    EXPECT_EQ(e.count, 2u);
    EXPECT_EQ(e.n_used, 3u);
    EXPECT_DOUBLE_EQ(e.value, 2.0 / 3.0);

    const FittedFLM zero = constant_residual_model(g, {0.0, 0.0});
    EXPECT_EQ(boot_prob(zero, origin(), EventSet::boundary(-0.1, 0.1)).value, 1.0);
}

TEST(Quantile, BootConstantResidualExamples) {
    const Grid g(30);
    const FittedFLM m = constant_residual_model(g, {-1.0, 0.0, 1.0});
    EXPECT_EQ(quantile_over_family(m, origin(), max_family(), 0.5), 0.0);
    EXPECT_EQ(quantile_over_family(m, origin(), max_family(), 0.9), 1.0);
    EXPECT_EQ(quantile_over_family(m, origin(), max_family(), 0.2), -1.0);

    MonotoneFamily capped = max_family();
    capped.upper = 0.5;
    try {
        (void)quantile_over_family(m, origin(), capped, 0.9);
        FAIL() << "expected RangeExhaustedError";
    } catch (const RangeExhaustedError& err) {
        EXPECT_EQ(err.boundary(), 0.5);
        EXPECT_DOUBLE_EQ(err.boundary_probability(), 2.0 / 3.0);
    }
    EXPECT_THROW((void)quantile_over_family(m, origin(), max_family(), 1.0), UsageError);

    // Bisection on the same family without its statistic agrees to the tolerance.
    MonotoneFamily plain = max_family();
    plain.statistic = nullptr;
    plain.lower = -5;
    plain.upper = 5;
    EXPECT_NEAR(quantile_over_family(m, origin(), plain, 0.5), 0.0, 1e-3);
}

TEST(GaussProb, DegenerateNoise) {
    const Grid g(30);
    const FittedFLM m = constant_residual_model(g, {0.0, 0.0, 0.0});
    const CondProbEstimate in = gauss_prob(m, origin(), EventSet::boundary(-0.1, 0.1), 100, 3);
    EXPECT_EQ(in.value, 1.0);
    EXPECT_EQ(in.status, EstimateStatus::degenerate_noise);
    EXPECT_EQ(gauss_prob(m, origin(), EventSet::extremal(0.0), 100, 3).value, 0.0);
    const GaussSampler sampler = GaussSampler::from_model(m);
    EXPECT_EQ(sampler.rank(), 0);
    for (const Curve& c : sampler.sample_noise(5, 1)) EXPECT_EQ(sup_norm(c), 0.0);
}

TEST(GaussProb, ConstantShiftNoiseIsScalarNormal) {
    const Grid g(40);
    const FittedFLM m = constant_shift_model(g, 1.0);
    const std::size_t mc = 4000;
    const CondProbEstimate e = gauss_prob(m, origin(), max_family().at(0.0), mc, 17);
    EXPECT_NEAR(e.value, 0.5, 3 * 0.5 / std::sqrt(static_cast<double>(mc)));
    // Every draw is a constant curve with unit variance.
    const auto draws = GaussSampler::from_model(m).sample_noise(2000, 5);
    std::vector<double> level;
    for (const Curve& c : draws) {
        EXPECT_NEAR(c.values().maxCoeff(), c.values().minCoeff(), 1e-12);
        level.push_back(c[0]);
    }
    EXPECT_NEAR(stddev(level), 1.0, 0.06);
}

TEST(GaussSampler, CovarianceAndMeanMatchSpectrum) {
    const Grid g(50);
    rng::Stream s(31);
    RegressionSample sample;
    for (int k = 0; k < 60; ++k) {
        Curve x = smooth_curve(g, 5, s);
        sample.ys.push_back(apply_kernel(x, kernel_rho) + smooth_curve(g, 7, s, 0.5));
        sample.xs.emplace_back(std::move(x));
    }
    const FittedFLM m = fit(sample);
    const GaussSampler sampler = GaussSampler::from_model(m);
    rng::Stream draw_stream(99);
    const std::size_t count = 5000;
    const RowMatrix d = sampler.draw(count, draw_stream);
    const Eigen::MatrixXd coords = d * g.sqrt_weights().asDiagonal();
    const Eigen::MatrixXd emp = coords.transpose() * coords / static_cast<double>(count);
    const double nu1 = m.gamma_hat.eigenvalues[0];
    EXPECT_LE((emp - m.gamma_hat.reconstruct()).cwiseAbs().maxCoeff(), 5 * nu1 / std::sqrt(5000.0));
    const Eigen::VectorXd mean = coords.colwise().mean();
    EXPECT_LE(mean.cwiseAbs().maxCoeff(), 4 * std::sqrt(nu1 / 5000.0));
}

TEST(Estimators, AxiomsOnRandomModels) {
    const Grid g(40);
    for (std::uint64_t trial = 0; trial < 40; ++trial) {
        rng::Stream s = rng::Stream(500).split(trial);
        RegressionSample sample;
        for (int k = 0; k < 30; ++k) {
            Curve x = smooth_curve(g, 5, s);
            sample.ys.push_back(apply_kernel(x, kernel_rho) + smooth_curve(g, 6, s, 0.6));
            sample.xs.emplace_back(std::move(x));
        }
        const FittedFLM m = fit(sample);
        const Covariate x(smooth_curve(g, 5, s));
        for (Method method : {Method::boot, Method::gauss}) {
            const NoiseBank bank = make_bank(m, method, 500, trial);
            const Curve f = predict(m, x);
            EXPECT_EQ(estimate_prob(f, bank, EventSet::nothing()).value, 0.0);
            EXPECT_EQ(estimate_prob(f, bank, EventSet::everything()).value, 1.0);
            double prev = 0;
            for (double alpha = -2; alpha <= 2; alpha += 0.1) {
                const EventSet a = EventSet::level(alpha, 0.3);
                const double pa = estimate_prob(f, bank, a).value;
                EXPECT_GE(pa, prev);
                EXPECT_LE(pa, 1.0);
                EXPECT_EQ(pa + estimate_prob(f, bank, EventSet::complement(a)).value, 1.0);
                prev = pa;
            }
            double q_prev = -1e300;
            for (double p = 0.05; p < 1; p += 0.05) {
                const double q = quantile_over_family(f, bank, level_threshold_family(0.3), p);
                EXPECT_GE(q, q_prev);
                q_prev = q;
            }
        }
    }
}

TEST(GaussProb, MonteCarloErrorHalvesWithFourTimesDraws) {
    const Grid g(30);
    const FittedFLM m = constant_shift_model(g, 1.0);
    const EventSet a = max_family().at(0.3);
    std::vector<double> small, large;
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        small.push_back(gauss_prob(m, origin(), a, 400, seed).value);
        large.push_back(gauss_prob(m, origin(), a, 1600, 10000 + seed).value);
    }
    const double ratio = stddev(small) / stddev(large);
    EXPECT_GT(ratio, 2.0 / 1.5);
    EXPECT_LT(ratio, 2.0 * 1.5);
}

TEST(Band, DegenerateAndSymmetric) {
    const Grid g(30);
    const FittedFLM zero = constant_residual_model(g, {0.0, 0.0, 0.0});
    const BandCalibration flat = calibrate_uniform_band(zero, origin(), 0.95, {Method::gauss, 200, 1});
    EXPECT_EQ(flat.lower, 0.0);
    EXPECT_EQ(flat.upper, 0.0);
    EXPECT_TRUE(flat.band().contains(flat.center));
    EXPECT_FALSE(flat.band().contains(flat.center + Curve::constant(g, 1e-9)));

    const FittedFLM shift = constant_shift_model(g, 4.0);
    const BandCalibration sym = calibrate_uniform_band(shift, origin(), 0.9, {Method::gauss, 20000, 2});
    EXPECT_LT(sym.lower, 0.0);
    EXPECT_GT(sym.upper, 0.0);
    EXPECT_NEAR(sym.lower, -sym.upper, 0.05);
    EXPECT_NEAR(sym.upper, 1.6449, 0.05);  // σ = 2 rescales the noise to a standard normal
    EXPECT_THROW((void)calibrate_uniform_band(shift, origin(), 1.0), UsageError);
}

TEST(SampleQuantile, TypeSeven) {
    EXPECT_EQ(sample_quantile({3, 1, 2}, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(sample_quantile({1, 2, 3, 4}, 0.5), 2.5);
    EXPECT_EQ(sample_quantile({5}, 0.9), 5.0);
    EXPECT_THROW((void)sample_quantile({}, 0.5), UsageError);
}

TEST(Consistency, UniformErrorOverFamilyShrinks) {
    const Grid g(30);
    const Curve x0 = Curve::from_function(g, [](double t) { return std::sin(3 * t); });
    const Curve mean = apply_kernel(x0, kernel_rho);
    // Oracle: 10000 draws of the true conditional law at x0.
    rng::Stream oracle_stream(404);
    std::vector<double> truth_stats;
    for (int k = 0; k < 10000; ++k) truth_stats.push_back((mean + smooth_curve(g, 6, oracle_stream, 0.6)).values().maxCoeff());
    std::sort(truth_stats.begin(), truth_stats.end());
    std::vector<double> xis;
    for (int i = 0; i <= 40; ++i) xis.push_back(-1 + 4.0 * i / 40);

    std::vector<double> medians;
    for (std::size_t n : {50, 500}) {
        std::vector<double> sup_err;
        for (std::uint64_t r = 0; r < 40; ++r) {
            rng::Stream s = rng::Stream(405).split(n).split(r);
            RegressionSample sample;
            for (std::size_t k = 0; k < n; ++k) {
                Curve x = smooth_curve(g, 5, s);
                sample.ys.push_back(apply_kernel(x, kernel_rho) + smooth_curve(g, 6, s, 0.6));
                sample.xs.emplace_back(std::move(x));
            }
            const FittedFLM m = fit(sample);
            const NoiseBank bank = boot_bank(m);
            const Curve f = predict(m, Covariate(x0));
            double worst = 0;
            for (double xi : xis) {
                const double est = estimate_prob(f, bank, max_family().at(xi)).value;
                const double tru = static_cast<double>(std::upper_bound(truth_stats.begin(), truth_stats.end(), xi) -
                                                       truth_stats.begin()) / 10000.0;
                worst = std::max(worst, std::abs(est - tru));
            }
            sup_err.push_back(worst);
        }
        std::sort(sup_err.begin(), sup_err.end());
        medians.push_back(sup_err[sup_err.size() / 2]);
    }
    EXPECT_GT(medians[0], medians[1]);
}

TEST(Coverage, BootAtFourHundred) {
    harness::CoverageConfig cfg;
    cfg.n = 400;
    cfg.reps = 500;
    cfg.seed = 11;
    cfg.methods = {Method::boot};
    const auto cells = harness::run_coverage_experiment(cfg);
    EXPECT_NEAR(cells.front().coverage(), 0.933, 0.03);
}
