#include "fcd/error.hpp"
#include "fcd/flm.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <algorithm>

using namespace fcd;
using fcd::testing::apply_kernel;
using fcd::testing::fourier;
using fcd::testing::smooth_curve;

namespace {

double rho_kernel(double t, double s) { return 0.8 * std::exp(-(t - s) * (t - s) / 0.1) + 0.3 * t * s; }

RegressionSample noisy_sample(const Grid& g, std::size_t n, rng::Stream& s, double noise) {
    RegressionSample out;
    for (std::size_t k = 0; k < n; ++k) {
        Curve x = smooth_curve(g, 9, s);
        out.ys.push_back(apply_kernel(x, rho_kernel) + smooth_curve(g, 5, s, noise));
        out.xs.emplace_back(std::move(x));
    }
    return out;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace

TEST(Fit, NoiselessRankRRecoveredExactly) {
    const Grid g(60);
    rng::Stream s(21);
    for (int r : {1, 3, 5}) {
        RegressionSample sample;
        for (int k = 0; k < 40; ++k) {
            Curve x = smooth_curve(g, r, s);
            sample.ys.push_back(apply_kernel(x, rho_kernel));
            sample.xs.emplace_back(std::move(x));
        }
        const FittedFLM m = fit(sample, {TruncationRule::fixed_rule(r + 2)});
        EXPECT_EQ(m.truncation, r);  // capped at the numerical rank
        for (std::size_t k = 0; k < sample.size(); ++k) {
            EXPECT_LE(sup_norm(m.residuals[k]), 1e-8);
            EXPECT_LE(sup_norm(predict(m, sample.xs[k]) - sample.ys[k]), 1e-8);
        }
    }
}

TEST(Fit, RankOneOperatorRecovered) {
    // ρ = e ⊗ f, X_k = a_k f: score least squares gives ρ̂ f = e exactly.
    const Grid g(50);
    const Curve f = Curve::from_function(g, [](double t) { return fourier(1, t); });
    const Curve e = Curve::from_function(g, [](double t) { return 1 + t * t; });
    rng::Stream s(2);
    std::normal_distribution<double> n;
    RegressionSample sample;
    for (int k = 0; k < 30; ++k) {
        const double a = n(s);
        sample.xs.emplace_back(a * f);
        sample.ys.push_back((a * inner_product(f, f)) * e);
    }
    const FittedFLM m = fit(sample, {TruncationRule::fixed_rule(1), false});
    EXPECT_LE(sup_norm(predict(m, Covariate(f)) - inner_product(f, f) * e), 1e-6);
}

TEST(Fit, ResidualMeanZeroAndGammaRank) {
    const Grid g(40);
    rng::Stream s(8);
    const RegressionSample sample = noisy_sample(g, 25, s, 0.5);
    const FittedFLM m = fit(sample);
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.size()));
    for (const Curve& r : m.residuals) mean += r.values();
    EXPECT_LE((mean / 25.0).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_LE(m.gamma_hat.rank(), 24);
    EXPECT_GE(m.truncation, 1);
    for (std::size_t k = 0; k < sample.size(); ++k) {
        EXPECT_EQ(m.residuals[k].values(), (sample.ys[k] - predict(m, sample.xs[k])).values());
    }
    const FittedFLM dof = fit(sample, {TruncationRule{}, true, true});
    EXPECT_NEAR(dof.gamma_hat.eigenvalues[0] / m.gamma_hat.eigenvalues[0], 25.0 / (25 - m.truncation), 1e-10);
}

TEST(Predict, AffineInCovariate) {
    const Grid g(40);
    rng::Stream s(4);
    const FittedFLM m = fit(noisy_sample(g, 30, s, 0.3));
    const Curve a = smooth_curve(g, 9, s), b = smooth_curve(g, 9, s);
    const Curve p0 = predict(m, Covariate(Curve::zero(g)));
    const Curve lhs = predict(m, Covariate(a + b)) - p0;
    const Curve rhs = (predict(m, Covariate(a)) - p0) + (predict(m, Covariate(b)) - p0);
    EXPECT_LE(sup_norm(lhs - rhs), 1e-10);
    EXPECT_THROW((void)predict(m, Covariate({a, b}, {})), StructuralError);
}

TEST(Fit, RejectsBadSamples) {
    const Grid g(10);
    RegressionSample one;
    one.ys.push_back(Curve::zero(g));
    one.xs.emplace_back(Curve::zero(g));
    EXPECT_THROW((void)fit(one), UsageError);
    RegressionSample flat = one;
    flat.ys.push_back(Curve::zero(g));
    flat.xs.emplace_back(Curve::zero(g));
    EXPECT_THROW((void)fit(flat), DegenerateInputError);
}

TEST(FarDesign, AlignmentAndShapes) {
    const Grid g(10);
    std::vector<Curve> series;
    for (int k = 0; k < 6; ++k) series.push_back(Curve::constant(g, k));
    auto [sample, design] = build_far_design(series, 2);
    ASSERT_EQ(sample.size(), 4u);
    for (std::size_t r = 0; r < sample.size(); ++r) {
        const double k = sample.ys[r][0];
        ASSERT_EQ(sample.xs[r].curve_parts.size(), 2u);
        EXPECT_EQ(sample.xs[r].curve_parts[0][0], k - 1);
        EXPECT_EQ(sample.xs[r].curve_parts[1][0], k - 2);
        EXPECT_EQ(design.rows[r].response, static_cast<std::size_t>(k));
    }

    std::vector<Covariate> exog;
    for (int k = 0; k < 6; ++k) exog.emplace_back(std::vector<Curve>{Curve::constant(g, 100 + k), Curve::constant(g, 200 + k)},
                                                  std::vector<double>{});
    auto [sx, dx] = build_far_design(series, 1, std::span<const Covariate>(exog));
    EXPECT_TRUE(dx.exogenous);
    for (std::size_t r = 0; r < sx.size(); ++r) {
        const double k = sx.ys[r][0];
        ASSERT_EQ(sx.xs[r].curve_parts.size(), 3u);
        EXPECT_EQ(sx.xs[r].curve_parts[1][0], 100 + k);  // same-day exogenous value
        EXPECT_EQ(sx.xs[r].curve_parts[2][0], 200 + k);
    }
    const Covariate next = far_forecast_covariate(series, 2);
    EXPECT_EQ(next.curve_parts[0][0], 5.0);
    EXPECT_EQ(next.curve_parts[1][0], 4.0);
    EXPECT_THROW((void)build_far_design(series, 6), UsageError);
    EXPECT_THROW((void)build_far_design(series, 0), UsageError);
}

TEST(Consistency, InAndOutOfSampleErrorShrinks) {
    const Grid g(30);
    const std::size_t sizes[] = {50, 200, 800};
    std::vector<double> med_in, med_out;
    for (std::size_t n : sizes) {
        std::vector<double> in_err, out_err;
        for (std::uint64_t r = 0; r < 100; ++r) {
            rng::Stream s = rng::Stream(77).split(n).split(r);
            const RegressionSample sample = noisy_sample(g, n, s, 0.5);
            const FittedFLM m = fit(sample);
            double acc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += l2_norm(predict(m, sample.xs[k]) - apply_kernel(sample.xs[k].curve_parts[0], rho_kernel));
            }
            in_err.push_back(acc / static_cast<double>(n));
            const Curve fresh = smooth_curve(g, 9, s);
            out_err.push_back(l2_norm(predict(m, Covariate(fresh)) - apply_kernel(fresh, rho_kernel)));
        }
        med_in.push_back(median(in_err));
        med_out.push_back(median(out_err));
    }
    EXPECT_GT(med_in[0], med_in[1]);
    EXPECT_GT(med_in[1], med_in[2]);
    EXPECT_GT(med_out[0], med_out[1]);
    EXPECT_GT(med_out[1], med_out[2]);
}
