#pragma once

#include "fcd/curves.hpp"
#include "fcd/flm.hpp"
#include "fcd/rng.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

namespace fcd::testing {

/// Orthonormal Fourier function j (j = 0 is the constant).
inline double fourier(int j, double t) {
    if (j == 0) return 1.0;
    const double f = 2.0 * std::numbers::pi * ((j + 1) / 2);
    return std::numbers::sqrt2 * (j % 2 == 1 ? std::sin(f * t) : std::cos(f * t));
}

/// Σ_{j<k} sd_j Z_j φ_j with sd_j = 1/(j+1).
inline Curve smooth_curve(const Grid& g, int k, rng::Stream& s, double scale = 1.0) {
    std::normal_distribution<double> n;
    std::vector<double> z(static_cast<std::size_t>(k));
    for (int j = 0; j < k; ++j) z[static_cast<std::size_t>(j)] = scale * n(s) / (j + 1);
    return Curve::from_function(g, [&](double t) {
        double v = 0;
        for (int j = 0; j < k; ++j) v += z[static_cast<std::size_t>(j)] * fourier(j, t);
        return v;
    });
}

/// Integral operator with kernel k(t,s), trapezoid quadrature.
template <class K>
Curve apply_kernel(const Curve& x, K&& kernel) {
    const Grid& g = x.grid();
    const Eigen::VectorXd& w = g.weights();
    return Curve::from_function(g, [&](double t) {
        double v = 0;
        for (std::size_t i = 0; i < g.size(); ++i) v += w[static_cast<Eigen::Index>(i)] * kernel(t, g.point(i)) * x[i];
        return v;
    });
}

/// Model with residuals replaced by the given constants (grid D) and a zero forecast map.
inline FittedFLM constant_residual_model(const Grid& g, const std::vector<double>& shifts) {
    RegressionSample sample;
    for (std::size_t k = 0; k < shifts.size(); ++k) {
        sample.xs.emplace_back(std::vector<Curve>{}, std::vector<double>{static_cast<double>(k)});
        sample.ys.push_back(Curve::constant(g, shifts[k]));
    }
    // Shifts are not linear in the scalar, so fit then overwrite for an exact residual set.
    FittedFLM m = fit(sample, {TruncationRule::fixed_rule(1)});
    m.rho_hat.setZero();
    m.y_mean.setZero();
    m.residuals.clear();
    Eigen::MatrixXd e(static_cast<Eigen::Index>(shifts.size()), static_cast<Eigen::Index>(g.size()));
    for (std::size_t k = 0; k < shifts.size(); ++k) {
        m.residuals.push_back(Curve::constant(g, shifts[k]));
        e.row(static_cast<Eigen::Index>(k)) = coordinates(m.residuals.back()).transpose();
    }
    m.gamma_hat = eigendecompose(empirical_covariance(e, true));
    return m;
}

}  // namespace fcd::testing
