#pragma once

#include "fcd/curves.hpp"
#include "fcd/specdecomp.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fcd {

/// Paired sample (Y_k, X_k), k = 1..n.
struct RegressionSample {
    std::vector<Curve> ys;
    std::vector<Covariate> xs;

    /// Checks n ≥ 2, equal lengths and shared structure; throws otherwise.
    void validate() const;
    [[nodiscard]] std::size_t size() const noexcept { return ys.size(); }
};

/// How the number of retained principal components T_n is chosen.
struct TruncationRule {
    enum class Kind { threshold, pve, fixed };

    Kind kind = Kind::threshold;
    double m_n = 0.0;  // threshold: λ_j ≥ λ₁/m_n (relative) or 1/m_n (absolute); 0 → 5·n^0.45
    ThresholdScale scale = ThresholdScale::relative;
    double pve = 0.85;
    int fixed = 1;

    static TruncationRule threshold_rule(double m_n = 0.0, ThresholdScale scale = ThresholdScale::relative) {
        TruncationRule r;
        r.kind = Kind::threshold;
        r.m_n = m_n;
        r.scale = scale;
        return r;
    }
    static TruncationRule pve_rule(double v) {
        TruncationRule r;
        r.kind = Kind::pve;
        r.pve = v;
        return r;
    }
    static TruncationRule fixed_rule(int t) {
        TruncationRule r;
        r.kind = Kind::fixed;
        r.fixed = t;
        return r;
    }
};

/// Default m_n = 5 n^0.45.
double default_m_n(std::size_t n);

struct FitOptions {
    TruncationRule truncation;
    bool center = true;
    /// Scale Γ̂ by 1/(n − T_n) instead of 1/n.
    bool dof_correction = false;
};

/**
 * Fitted single-truncated FPCA regression estimator together with everything
 * the conditional-distribution estimators consume.
 *
 * `rho_hat` acts on raw covariate vectors (curve samples, then scalars) and
 * returns raw response samples; predict(x) = y_mean + rho_hat·(x − x_mean).
 */
struct FittedFLM {
    Grid grid{2};
    CovariateLayout layout;
    Eigen::MatrixXd rho_hat;
    int truncation = 0;
    TruncationRule rule;
    bool centered = true;
    bool dof_correction = false;
    Eigen::VectorXd x_mean;  // raw layout; zero when not centered
    Eigen::VectorXd y_mean;  // raw samples; zero when not centered
    SpectralPair x_spectrum;
    std::vector<Curve> residuals;
    SpectralPair gamma_hat;

    [[nodiscard]] std::size_t sample_size() const noexcept { return residuals.size(); }
};

FittedFLM fit(const RegressionSample& sample, const FitOptions& options = {});

Curve predict(const FittedFLM& model, const Covariate& x);

/// Γ̂ as a pointwise kernel matrix on the grid, Σ ν_j ψ_j(t)ψ_j(s).
Eigen::MatrixXd residual_kernel(const FittedFLM& model);

/// Positions in a series that make up one (response, covariate) pair.
struct LagDesign {
    std::size_t order = 1;
    bool exogenous = false;
    struct Row {
        std::size_t response;
        std::vector<std::size_t> lags;  // series positions, lag 1 first
    };
    std::vector<Row> rows;

    [[nodiscard]] std::size_t effective_size() const noexcept { return rows.size(); }
};

/**
 * FAR(p)/FARX(p) design: for each k ≥ p the response Y_k is paired with the
 * covariate (Y_{k−1}, …, Y_{k−p}, parts of exog[k]).
 */
std::pair<RegressionSample, LagDesign> build_far_design(std::span<const Curve> series, std::size_t order,
                                                        std::optional<std::span<const Covariate>> exog = std::nullopt);

/// The covariate that forecasts the element following `series` (uses the last p curves).
Covariate far_forecast_covariate(std::span<const Curve> series, std::size_t order,
                                 const std::optional<Covariate>& exog_next = std::nullopt);

}  // namespace fcd
