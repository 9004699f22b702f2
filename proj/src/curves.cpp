#include "fcd/curves.hpp"

#include "fcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fcd {

Grid::Grid(int resolution) : resolution_(resolution) {
    if (resolution < 2) throw UsageError("grid resolution must be at least 2, got " + std::to_string(resolution));
    Tables t;
    const auto n = static_cast<Eigen::Index>(resolution) + 1;
    const double h = 1.0 / resolution;
    t.weights = Eigen::VectorXd::Constant(n, h);
    t.weights[0] = 0.5 * h;
    t.weights[n - 1] = 0.5 * h;
    t.sqrt_weights = t.weights.cwiseSqrt();
    tables_ = std::make_shared<const Tables>(std::move(t));
}

Eigen::VectorXd Grid::points() const {
    Eigen::VectorXd p(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) p[static_cast<Eigen::Index>(i)] = point(i);
    return p;
}

std::size_t Grid::nearest_index(double s) const {
    if (!std::isfinite(s)) throw UsageError("grid location must be finite");
    const double scaled = std::clamp(s, 0.0, 1.0) * resolution_;
    const double lower = std::floor(scaled);
    auto idx = static_cast<std::size_t>(lower);
    if (scaled - lower > 0.5) ++idx;
    return std::min(idx, static_cast<std::size_t>(resolution_));
}

Curve::Curve(Grid grid, Eigen::VectorXd values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (static_cast<std::size_t>(values_.size()) != grid_.size()) {
        throw StructuralError("curve has " + std::to_string(values_.size()) + " samples but grid needs " +
                              std::to_string(grid_.size()));
    }
    if (!values_.allFinite()) throw UsageError("curve values must be finite");
}

Curve Curve::zero(const Grid& grid) { return constant(grid, 0.0); }

Curve Curve::constant(const Grid& grid, double value) {
    return Curve(grid, Eigen::VectorXd::Constant(static_cast<Eigen::Index>(grid.size()), value));
}

namespace {

void require_same_grid(const Curve& a, const Curve& b) {
    if (!(a.grid() == b.grid())) {
        throw StructuralError("grid mismatch: D=" + std::to_string(a.grid().resolution()) +
                              " vs D=" + std::to_string(b.grid().resolution()));
    }
}

}  // namespace

Curve operator+(const Curve& a, const Curve& b) {
    require_same_grid(a, b);
    return Curve(a.grid_, a.values_ + b.values_);
}

Curve operator-(const Curve& a, const Curve& b) {
    require_same_grid(a, b);
    return Curve(a.grid_, a.values_ - b.values_);
}

Curve operator*(double s, const Curve& a) { return Curve(a.grid_, s * a.values_); }

Covariate::Covariate(std::vector<Curve> curves, std::vector<double> scalars)
    : curve_parts(std::move(curves)), scalar_parts(std::move(scalars)) {
    for (const auto& c : curve_parts) {
        if (!(c.grid() == curve_parts.front().grid())) throw StructuralError("covariate curve parts must share one grid");
    }
    for (double s : scalar_parts) {
        if (!std::isfinite(s)) throw UsageError("covariate scalar parts must be finite");
    }
}

std::size_t Covariate::dimension() const noexcept { return CovariateLayout::of(*this).dimension(); }

bool Covariate::same_structure(const Covariate& other) const noexcept {
    return CovariateLayout::of(*this) == CovariateLayout::of(other);
}

CovariateLayout CovariateLayout::of(const Covariate& x) {
    CovariateLayout layout;
    layout.curve_parts = x.curve_parts.size();
    layout.scalar_parts = x.scalar_parts.size();
    layout.resolution = x.curve_parts.empty() ? 0 : x.curve_parts.front().grid().resolution();
    return layout;
}

double inner_product(const Curve& a, const Curve& b) {
    require_same_grid(a, b);
    return (a.grid().weights().array() * (a.values().array() * b.values().array())).sum();
}

double covariate_inner_product(const Covariate& a, const Covariate& b) {
    if (!a.same_structure(b)) throw StructuralError("covariate structure mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.curve_parts.size(); ++i) acc += inner_product(a.curve_parts[i], b.curve_parts[i]);
    for (std::size_t i = 0; i < a.scalar_parts.size(); ++i) acc += a.scalar_parts[i] * b.scalar_parts[i];
    return acc;
}

double l2_norm(const Curve& a) { return std::sqrt(std::max(0.0, inner_product(a, a))); }

double covariate_norm(const Covariate& a) { return std::sqrt(std::max(0.0, covariate_inner_product(a, a))); }

double sup_norm(const Curve& a) { return a.values().cwiseAbs().maxCoeff(); }

double exceedance_measure(std::span<const double> values, double alpha) {
    if (values.empty()) return 0.0;
    const auto above = std::count_if(values.begin(), values.end(), [alpha](double v) { return v > alpha; });
    return static_cast<double>(above) / static_cast<double>(values.size());
}

double exceedance_measure(const Curve& a, double alpha) { return exceedance_measure(a.samples(), alpha); }

double longest_excursion(std::span<const double> values, double d) {
    if (values.size() < 2) return 0.0;
    std::size_t best = 0;
    std::size_t run = 0;
    for (double v : values) {
        run = v > d ? run + 1 : 0;
        best = std::max(best, run);
    }
    if (best < 2) return 0.0;
    return static_cast<double>(best - 1) / static_cast<double>(values.size() - 1);
}

double longest_excursion(const Curve& a, double d) { return longest_excursion(a.samples(), d); }

Eigen::VectorXd coordinates(const Curve& a) { return a.grid().sqrt_weights().cwiseProduct(a.values()); }

Eigen::VectorXd coordinates(const Covariate& x) {
    const auto layout = CovariateLayout::of(x);
    return coordinate_scaling(layout).cwiseProduct(raw_vector(x));
}

Curve curve_from_coordinates(const Grid& grid, const Eigen::VectorXd& coords) {
    if (static_cast<std::size_t>(coords.size()) != grid.size()) throw StructuralError("coordinate length mismatch");
    return Curve(grid, coords.cwiseQuotient(grid.sqrt_weights()));
}

Eigen::VectorXd raw_vector(const Covariate& x) {
    const auto layout = CovariateLayout::of(x);
    Eigen::VectorXd out(static_cast<Eigen::Index>(layout.dimension()));
    Eigen::Index pos = 0;
    for (const auto& c : x.curve_parts) {
        out.segment(pos, c.values().size()) = c.values();
        pos += c.values().size();
    }
    for (double s : x.scalar_parts) out[pos++] = s;
    return out;
}

Covariate covariate_from_raw(const CovariateLayout& layout, const Eigen::VectorXd& raw) {
    if (static_cast<std::size_t>(raw.size()) != layout.dimension()) throw StructuralError("raw covariate length mismatch");
    Covariate x;
    Eigen::Index pos = 0;
    if (layout.curve_parts > 0) {
        const Grid grid(layout.resolution);
        const auto m = static_cast<Eigen::Index>(grid.size());
        for (std::size_t i = 0; i < layout.curve_parts; ++i) {
            x.curve_parts.emplace_back(grid, raw.segment(pos, m));
            pos += m;
        }
    }
    for (std::size_t i = 0; i < layout.scalar_parts; ++i) x.scalar_parts.push_back(raw[pos++]);
    return x;
}

Eigen::VectorXd coordinate_scaling(const CovariateLayout& layout) {
    Eigen::VectorXd s = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(layout.dimension()));
    if (layout.curve_parts > 0) {
        const Grid grid(layout.resolution);
        const auto m = static_cast<Eigen::Index>(grid.size());
        for (std::size_t i = 0; i < layout.curve_parts; ++i) s.segment(static_cast<Eigen::Index>(i) * m, m) = grid.sqrt_weights();
    }
    return s;
}

}  // namespace fcd
