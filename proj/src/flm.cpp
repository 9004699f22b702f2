#include "fcd/flm.hpp"

#include "fcd/error.hpp"

#include <cmath>
#include <string>

namespace fcd {

void RegressionSample::validate() const {
    if (ys.size() != xs.size()) {
        throw UsageError("regression sample has " + std::to_string(ys.size()) + " responses but " +
                         std::to_string(xs.size()) + " covariates");
    }
    if (ys.size() < 2) throw UsageError("regression sample needs at least 2 pairs");
    for (std::size_t k = 1; k < ys.size(); ++k) {
        if (!(ys[k].grid() == ys[0].grid())) throw StructuralError("responses do not share one grid");
        if (!xs[k].same_structure(xs[0])) throw StructuralError("covariates do not share one structure");
    }
    if (xs[0].dimension() == 0) throw StructuralError("covariates are empty");
}

double default_m_n(std::size_t n) { return 5.0 * std::pow(static_cast<double>(n), 0.45); }

namespace {

int choose_truncation(const SpectralPair& spec, const TruncationRule& rule, std::size_t n) {
    switch (rule.kind) {
        case TruncationRule::Kind::threshold:
            return truncation_threshold(spec, rule.m_n > 0.0 ? rule.m_n : default_m_n(n), rule.scale);
        case TruncationRule::Kind::pve:
            return truncation_pve(spec, rule.pve);
        case TruncationRule::Kind::fixed:
            if (rule.fixed < 1) throw UsageError("fixed truncation level must be >= 1");
            return rule.fixed;
    }
    throw UsageError("unknown truncation rule");
}

}  // namespace

FittedFLM fit(const RegressionSample& sample, const FitOptions& options) {
    sample.validate();
    const std::size_t n = sample.size();
    const Grid grid = sample.ys.front().grid();
    const CovariateLayout layout = CovariateLayout::of(sample.xs.front());
    const auto p = static_cast<Eigen::Index>(layout.dimension());
    const auto m = static_cast<Eigen::Index>(grid.size());
    const Eigen::VectorXd x_scale = coordinate_scaling(layout);

    Eigen::MatrixXd x_raw(static_cast<Eigen::Index>(n), p);
    Eigen::MatrixXd y_raw(static_cast<Eigen::Index>(n), m);
    for (std::size_t k = 0; k < n; ++k) {
        x_raw.row(static_cast<Eigen::Index>(k)) = raw_vector(sample.xs[k]).transpose();
        y_raw.row(static_cast<Eigen::Index>(k)) = sample.ys[k].values().transpose();
    }

    FittedFLM model;
    model.grid = grid;
    model.layout = layout;
    model.rule = options.truncation;
    model.centered = options.center;
    model.dof_correction = options.dof_correction;
    model.x_mean = options.center ? Eigen::VectorXd(x_raw.colwise().mean().transpose()) : Eigen::VectorXd::Zero(p);
    model.y_mean = options.center ? Eigen::VectorXd(y_raw.colwise().mean().transpose()) : Eigen::VectorXd::Zero(m);

    const Eigen::MatrixXd x_coords = (x_raw.rowwise() - model.x_mean.transpose()) * x_scale.asDiagonal();
    const Eigen::MatrixXd y_coords = (y_raw.rowwise() - model.y_mean.transpose()) * grid.sqrt_weights().asDiagonal();

    model.x_spectrum = eigendecompose(empirical_covariance(x_coords, false));
    const Eigen::Index rank = model.x_spectrum.rank();
    if (rank == 0) throw DegenerateInputError("covariate sample has an identically zero covariance");

    int t = choose_truncation(model.x_spectrum, options.truncation, n);
    // Directions beyond the numerical rank would be inverted noise.
    model.truncation = std::min(t, static_cast<int>(rank));

    const Eigen::MatrixXd cyx = empirical_cross_covariance(y_coords, x_coords);
    const auto v = model.x_spectrum.eigenvectors.leftCols(model.truncation);
    const Eigen::VectorXd inv_lambda = model.x_spectrum.eigenvalues.head(model.truncation).cwiseInverse();
    const Eigen::MatrixXd rho_coords = (cyx * v) * inv_lambda.asDiagonal() * v.transpose();
    model.rho_hat = grid.sqrt_weights().cwiseInverse().asDiagonal() * rho_coords * x_scale.asDiagonal();

    model.residuals.reserve(n);
    for (std::size_t k = 0; k < n; ++k) model.residuals.push_back(sample.ys[k] - predict(model, sample.xs[k]));

    Eigen::MatrixXd e_coords(static_cast<Eigen::Index>(n), m);
    for (std::size_t k = 0; k < n; ++k) e_coords.row(static_cast<Eigen::Index>(k)) = coordinates(model.residuals[k]).transpose();
    CovarianceOperator gamma = empirical_covariance(e_coords, true);
    if (options.dof_correction) {
        const double denom = static_cast<double>(n) - model.truncation;
        if (denom <= 0.0) throw DegenerateInputError("degrees-of-freedom correction needs n > T_n");
        gamma.matrix *= static_cast<double>(n) / denom;
    }
    model.gamma_hat = eigendecompose(gamma);
    return model;
}

Curve predict(const FittedFLM& model, const Covariate& x) {
    if (!(CovariateLayout::of(x) == model.layout)) throw StructuralError("covariate structure does not match the model");
    return Curve(model.grid, model.y_mean + model.rho_hat * (raw_vector(x) - model.x_mean));
}

Eigen::MatrixXd residual_kernel(const FittedFLM& model) {
    const Eigen::MatrixXd k = model.gamma_hat.reconstruct();
    const Eigen::VectorXd inv = model.grid.sqrt_weights().cwiseInverse();
    return inv.asDiagonal() * k * inv.asDiagonal();
}

std::pair<RegressionSample, LagDesign> build_far_design(std::span<const Curve> series, std::size_t order,
                                                        std::optional<std::span<const Covariate>> exog) {
    if (order < 1) throw UsageError("autoregressive order must be >= 1");
    if (series.size() <= order) {
        throw UsageError("series of length " + std::to_string(series.size()) + " is too short for order " +
                         std::to_string(order));
    }
    if (exog && exog->size() != series.size()) throw UsageError("exogenous covariates must align with the series");

    RegressionSample sample;
    LagDesign design;
    design.order = order;
    design.exogenous = exog.has_value();
    for (std::size_t k = order; k < series.size(); ++k) {
        LagDesign::Row row{k, {}};
        Covariate x;
        for (std::size_t lag = 1; lag <= order; ++lag) {
            row.lags.push_back(k - lag);
            x.curve_parts.push_back(series[k - lag]);
        }
        if (exog) {
            const Covariate& e = (*exog)[k];
            x.curve_parts.insert(x.curve_parts.end(), e.curve_parts.begin(), e.curve_parts.end());
            x.scalar_parts = e.scalar_parts;
        }
        sample.ys.push_back(series[k]);
        sample.xs.push_back(std::move(x));
        design.rows.push_back(std::move(row));
    }
    return {std::move(sample), std::move(design)};
}

Covariate far_forecast_covariate(std::span<const Curve> series, std::size_t order, const std::optional<Covariate>& exog_next) {
    if (order < 1 || series.size() < order) throw UsageError("series too short to form a forecast covariate");
    Covariate x;
    for (std::size_t lag = 1; lag <= order; ++lag) x.curve_parts.push_back(series[series.size() - lag]);
    if (exog_next) {
        x.curve_parts.insert(x.curve_parts.end(), exog_next->curve_parts.begin(), exog_next->curve_parts.end());
        x.scalar_parts = exog_next->scalar_parts;
    }
    return x;
}

}  // namespace fcd
