#pragma once

#include "fcd/curves.hpp"
#include "fcd/events.hpp"
#include "fcd/flm.hpp"
#include "fcd/rng.hpp"
#include "fcd/specdecomp.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace fcd {

enum class Method { boot, gauss };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view s);

enum class EstimateStatus {
    ok,
    /// Γ̂ has rank zero; Gauss reduced to the indicator of the forecast itself.
    degenerate_noise,
};

/// value = count / n_used.
struct CondProbEstimate {
    double value = 0.0;
    Method method = Method::boot;
    std::size_t count = 0;
    std::size_t n_used = 0;
    std::optional<std::uint64_t> seed;
    EstimateStatus status = EstimateStatus::ok;
};

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/**
 * Karhunen–Loève sampler for a centered Gaussian process with covariance
 * Σ ν_j ψ_j ⊗ ψ_j. Components with ν_j ≤ 1e-12·ν₁ are dropped.
 */
class GaussSampler {
public:
    GaussSampler(const SpectralPair& spectrum, const Grid& grid, double rel_cutoff = 1e-12);
    static GaussSampler from_model(const FittedFLM& model) { return GaussSampler(model.gamma_hat, model.grid); }

    [[nodiscard]] Eigen::Index rank() const noexcept { return loadings_.cols(); }
    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    /// Column j is ν_j^{1/2} ψ_j sampled on the grid.
    [[nodiscard]] const Eigen::MatrixXd& loadings() const noexcept { return loadings_; }
    /// Retained eigenvalues ν_j.
    [[nodiscard]] const Eigen::VectorXd& variances() const noexcept { return variances_; }

    /// `count` draws as rows; consumes `stream`.
    [[nodiscard]] RowMatrix draw(std::size_t count, rng::Stream& stream) const;
    [[nodiscard]] std::vector<Curve> sample_noise(std::size_t count, std::uint64_t seed) const;

private:
    Grid grid_;
    Eigen::MatrixXd loadings_;
    Eigen::VectorXd variances_;
};

/**
 * The perturbations an estimator adds to the forecast: the n model residuals
 * (boot) or M Gaussian draws (gauss). Built once and reused across events so
 * that estimates for different sets share the same draws.
 */
struct NoiseBank {
    Method method = Method::boot;
    RowMatrix draws;
    std::optional<std::uint64_t> seed;
    EstimateStatus status = EstimateStatus::ok;

    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(draws.rows()); }
};

NoiseBank boot_bank(const FittedFLM& model);
NoiseBank gauss_bank(const FittedFLM& model, std::size_t mc, std::uint64_t seed);
NoiseBank make_bank(const FittedFLM& model, Method method, std::size_t mc, std::uint64_t seed);

/// Fraction of forecast + perturbation curves lying in `event`.
CondProbEstimate estimate_prob(const Curve& forecast, const NoiseBank& bank, const EventSet& event);

/// Residual bootstrap estimate (1/n) Σ 𝟙{ρ̂(x) + ε̂_k ∈ A}.
CondProbEstimate boot_prob(const FittedFLM& model, const Covariate& x, const EventSet& event);

/// Gaussian-simulation estimate with `mc` Karhunen–Loève draws from Γ̂.
CondProbEstimate gauss_prob(const FittedFLM& model, const Covariate& x, const EventSet& event, std::size_t mc = 2000,
                            std::uint64_t seed = 0);

struct QuantileOptions {
    Method method = Method::boot;
    std::size_t mc = 2000;
    std::uint64_t seed = 0;
    /// Bisection stops when the bracket is below rel_tol·(upper − lower).
    double rel_tol = 1e-4;
};

/**
 * ξ̂_p = inf{ ξ ∈ [lower, upper] : P̂(Y ∈ A_ξ | x) ≥ p }.
 *
 * Families with a statistic are solved exactly through order statistics of
 * T(forecast + perturbation); others by bisection on the (monotone)
 * estimated probability. Decreasing families are reflected, which returns
 * sup{ ξ : P̂(A_ξ) ≥ p }. Throws RangeExhaustedError when p is not reached.
 */
double quantile_over_family(const Curve& forecast, const NoiseBank& bank, const MonotoneFamily& family, double p,
                            double rel_tol = 1e-4);
double quantile_over_family(const FittedFLM& model, const Covariate& x, const MonotoneFamily& family, double p,
                            const QuantileOptions& options = {});

enum class BandStatistic {
    /// L from inf_t ε(t)/σ(t), U from sup_t ε(t)/σ(t).
    signed_extremes,
    /// L and U both from sup_t |ε(t)|/σ(t).
    absolute_sup,
};

struct BandOptions {
    Method method = Method::boot;
    std::size_t mc = 2000;
    std::uint64_t seed = 0;
    BandStatistic statistic = BandStatistic::signed_extremes;
};

/// Uniform prediction band {ŷ + Lσ ≤ y ≤ ŷ + Uσ on the grid}.
struct BandCalibration {
    Curve center;
    Curve sigma;
    double lower = 0.0;  // L
    double upper = 0.0;  // U
    double nominal = 0.95;
    Method method = Method::boot;

    [[nodiscard]] EventSet band() const;
};

BandCalibration calibrate_uniform_band(const FittedFLM& model, const Covariate& x, double nominal,
                                       const BandOptions& options = {});
BandCalibration calibrate_uniform_band(const Curve& forecast, const Curve& sigma, const NoiseBank& bank, double nominal,
                                       BandStatistic statistic = BandStatistic::signed_extremes);

/// σ(t) = sqrt(Γ̂(t,t)), floored at 1e-8·max σ.
Curve residual_sigma(const FittedFLM& model);

/// Linear-interpolation sample quantile (R's type 7).
double sample_quantile(std::vector<double> values, double q);

}  // namespace fcd
