#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace fcd {

/**
 * Uniform grid t_i = i/D, i = 0..D, on [0,1].
 *
 * Carries the trapezoid weights used for every L² quantity. Copies share the
 * immutable weight tables.
 */
class Grid {
public:
    explicit Grid(int resolution);

    [[nodiscard]] int resolution() const noexcept { return resolution_; }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(resolution_) + 1; }
    [[nodiscard]] double point(std::size_t i) const noexcept {
        return static_cast<double>(i) / static_cast<double>(resolution_);
    }
    [[nodiscard]] Eigen::VectorXd points() const;

    /// Trapezoid weights: 1/(2D) at the ends, 1/D inside. They sum to 1.
    [[nodiscard]] const Eigen::VectorXd& weights() const noexcept { return tables_->weights; }
    [[nodiscard]] const Eigen::VectorXd& sqrt_weights() const noexcept { return tables_->sqrt_weights; }

    /// Index of the grid point closest to s (ties go to the lower index).
    [[nodiscard]] std::size_t nearest_index(double s) const;

    friend bool operator==(const Grid& a, const Grid& b) noexcept { return a.resolution_ == b.resolution_; }

private:
    struct Tables {
        Eigen::VectorXd weights;
        Eigen::VectorXd sqrt_weights;
    };

    int resolution_;
    std::shared_ptr<const Tables> tables_;
};

/// A real function on [0,1] sampled on a Grid. Values are finite.
class Curve {
public:
    Curve(Grid grid, Eigen::VectorXd values);

    static Curve zero(const Grid& grid);
    static Curve constant(const Grid& grid, double value);

    template <class F>
    static Curve from_function(const Grid& grid, F&& f) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
        for (std::size_t i = 0; i < grid.size(); ++i) v[static_cast<Eigen::Index>(i)] = f(grid.point(i));
        return Curve(grid, std::move(v));
    }

    [[nodiscard]] const Grid& grid() const noexcept { return grid_; }
    [[nodiscard]] const Eigen::VectorXd& values() const noexcept { return values_; }
    [[nodiscard]] std::span<const double> samples() const noexcept {
        return {values_.data(), static_cast<std::size_t>(values_.size())};
    }
    [[nodiscard]] std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[static_cast<Eigen::Index>(i)]; }

    friend Curve operator+(const Curve& a, const Curve& b);
    friend Curve operator-(const Curve& a, const Curve& b);
    friend Curve operator*(double s, const Curve& a);

private:
    Grid grid_;
    Eigen::VectorXd values_;
};

/// An element of the product covariate space: curve parts followed by scalar parts.
struct Covariate {
    std::vector<Curve> curve_parts;
    std::vector<double> scalar_parts;

    Covariate() = default;
    explicit Covariate(Curve curve) { curve_parts.push_back(std::move(curve)); }
    Covariate(std::vector<Curve> curves, std::vector<double> scalars);

    /// Length of the flattened coefficient vector.
    [[nodiscard]] std::size_t dimension() const noexcept;
    /// True when both covariates have the same number of parts on the same grid.
    [[nodiscard]] bool same_structure(const Covariate& other) const noexcept;
};

// Layout of a covariate's flattened coordinate vector.
struct CovariateLayout {
    std::size_t curve_parts = 0;
    std::size_t scalar_parts = 0;
    int resolution = 0;  // 0 when there are no curve parts

    [[nodiscard]] std::size_t dimension() const noexcept {
        return curve_parts * (static_cast<std::size_t>(resolution) + 1) + scalar_parts;
    }
    static CovariateLayout of(const Covariate& x);
    friend bool operator==(const CovariateLayout&, const CovariateLayout&) = default;
};

// ---- L² and sup-norm quantities ----

double inner_product(const Curve& a, const Curve& b);
double covariate_inner_product(const Covariate& a, const Covariate& b);
double l2_norm(const Curve& a);
double covariate_norm(const Covariate& a);
double sup_norm(const Curve& a);

/// Fraction of grid points with a(t_i) > alpha: a grid-count proxy for λ(t : a(t) > α).
double exceedance_measure(const Curve& a, double alpha);
double exceedance_measure(std::span<const double> values, double alpha);

/// Length (t-units) of the longest run of consecutive grid points strictly above d.
double longest_excursion(const Curve& a, double d);
double longest_excursion(std::span<const double> values, double d);

// ---- coordinates ----
//
// Curves map to sqrt(w)∘samples so that the Euclidean inner product of
// coordinate vectors equals the trapezoid L² inner product. Covariates
// concatenate the coordinates of their curve parts followed by the raw scalars.

Eigen::VectorXd coordinates(const Curve& a);
Eigen::VectorXd coordinates(const Covariate& x);
Curve curve_from_coordinates(const Grid& grid, const Eigen::VectorXd& coords);

/// Flattened raw samples (no quadrature weighting) followed by scalars.
Eigen::VectorXd raw_vector(const Covariate& x);
Covariate covariate_from_raw(const CovariateLayout& layout, const Eigen::VectorXd& raw);

/// Per-entry factor turning raw_vector(x) into coordinates(x).
Eigen::VectorXd coordinate_scaling(const CovariateLayout& layout);

}  // namespace fcd
