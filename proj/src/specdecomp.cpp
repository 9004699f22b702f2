#include "fcd/specdecomp.hpp"

#include "fcd/error.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace fcd {

Eigen::Index SpectralPair::rank(double rel_tol) const noexcept {
    if (eigenvalues.size() == 0 || eigenvalues[0] <= 0.0) return 0;
    const double cut = rel_tol * eigenvalues[0];
    Eigen::Index r = 0;
    while (r < eigenvalues.size() && eigenvalues[r] > cut) ++r;
    return r;
}

Eigen::MatrixXd SpectralPair::reconstruct() const {
    return eigenvectors * eigenvalues.asDiagonal() * eigenvectors.transpose();
}

CovarianceOperator empirical_covariance(const Eigen::MatrixXd& samples, bool center) {
    if (samples.rows() == 0) throw UsageError("empirical covariance of an empty sample");
    const double n = static_cast<double>(samples.rows());
    Eigen::MatrixXd m;
    if (center) {
        const Eigen::RowVectorXd mean = samples.colwise().mean();
        const Eigen::MatrixXd c = samples.rowwise() - mean;
        m = c.transpose() * c / n;
    } else {
        m = samples.transpose() * samples / n;
    }
    // Enforce exact symmetry; the product is symmetric only up to rounding.
    m = 0.5 * (m + m.transpose()).eval();
    return {std::move(m)};
}

namespace {

template <class T>
Eigen::MatrixXd stack_coordinates(std::span<const T> sample) {
    if (sample.empty()) throw UsageError("empirical covariance of an empty sample");
    const Eigen::VectorXd first = coordinates(sample.front());
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(sample.size()), first.size());
    rows.row(0) = first.transpose();
    for (std::size_t k = 1; k < sample.size(); ++k) {
        Eigen::VectorXd c = coordinates(sample[k]);
        if (c.size() != first.size()) throw StructuralError("sample elements do not share one structure");
        if constexpr (std::is_same_v<T, Curve>) {
            if (!(sample[k].grid() == sample.front().grid())) throw StructuralError("sample curves do not share one grid");
        } else {
            if (!sample[k].same_structure(sample.front())) throw StructuralError("sample covariates do not share one structure");
        }
        rows.row(static_cast<Eigen::Index>(k)) = c.transpose();
    }
    return rows;
}

}  // namespace

CovarianceOperator empirical_covariance(std::span<const Curve> sample, bool center) {
    return empirical_covariance(stack_coordinates(sample), center);
}

CovarianceOperator empirical_covariance(std::span<const Covariate> sample, bool center) {
    return empirical_covariance(stack_coordinates(sample), center);
}

Eigen::MatrixXd empirical_cross_covariance(const Eigen::MatrixXd& y_coords, const Eigen::MatrixXd& x_coords) {
    if (y_coords.rows() != x_coords.rows()) {
        throw UsageError("cross covariance needs equal sample sizes, got " + std::to_string(y_coords.rows()) + " and " +
                         std::to_string(x_coords.rows()));
    }
    if (y_coords.rows() == 0) throw UsageError("cross covariance of an empty sample");
    return y_coords.transpose() * x_coords / static_cast<double>(y_coords.rows());
}

Eigen::MatrixXd empirical_cross_covariance(std::span<const Curve> ys, std::span<const Covariate> xs) {
    if (ys.size() != xs.size()) {
        throw UsageError("cross covariance needs equal sample sizes, got " + std::to_string(ys.size()) + " and " +
                         std::to_string(xs.size()));
    }
    return empirical_cross_covariance(stack_coordinates(ys), stack_coordinates(xs));
}

SpectralPair eigendecompose(const CovarianceOperator& op) {
    const auto& a = op.matrix;
    if (a.rows() != a.cols()) throw StructuralError("operator matrix is not square");
    if (a.rows() == 0) throw UsageError("operator matrix is empty");
    const double scale = a.cwiseAbs().maxCoeff();
    if (!std::isfinite(scale)) throw DegenerateInputError("operator matrix has non-finite entries");
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(scale, 1e-300)) {
        throw StructuralError("operator matrix is not symmetric");
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw DegenerateInputError("symmetric eigensolver did not converge");

    const Eigen::Index n = a.rows();
    SpectralPair out;
    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        // Eigen returns ascending order.
        out.eigenvalues[i] = solver.eigenvalues()[n - 1 - i];
        Eigen::VectorXd v = solver.eigenvectors().col(n - 1 - i);
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (std::abs(v[j]) > best) {
                best = std::abs(v[j]);
                arg = j;
            }
        }
        if (v[arg] < 0.0) v = -v;
        out.eigenvectors.col(i) = v;
    }

    for (Eigen::Index i = 0; i < n; ++i) {
        if (out.eigenvalues[i] < 0.0) {
            out.clamped_mass += -out.eigenvalues[i];
            out.eigenvalues[i] = 0.0;
        }
    }
    const double lead = out.eigenvalues[0];
    if (out.clamped_mass > 1e-8 * std::max(lead, 0.0) && out.clamped_mass > 1e-14 * scale) {
        throw DegenerateInputError("operator is not positive semidefinite (clamped mass " +
                                   std::to_string(out.clamped_mass) + ")");
    }
    return out;
}

Curve eigenfunction(const SpectralPair& spec, Eigen::Index i, const Grid& grid) {
    if (i < 0 || i >= spec.size()) throw UsageError("eigenvector index out of range");
    return curve_from_coordinates(grid, spec.eigenvectors.col(i));
}

int truncation_threshold(const SpectralPair& spec, double m_n, ThresholdScale scale) {
    if (!(m_n >= 1.0) || !std::isfinite(m_n)) throw UsageError("truncation parameter m_n must be finite and >= 1");
    if (spec.size() == 0 || spec.eigenvalues[0] <= 0.0) throw DegenerateInputError("spectrum is identically zero");
    const double cut = scale == ThresholdScale::relative ? spec.eigenvalues[0] / m_n : 1.0 / m_n;
    int t = 0;
    for (Eigen::Index j = 0; j < spec.size(); ++j) {
        if (spec.eigenvalues[j] > 0.0 && spec.eigenvalues[j] >= cut) t = static_cast<int>(j) + 1;
    }
    return std::max(t, 1);
}

int truncation_pve(const SpectralPair& spec, double v) {
    if (!(v > 0.0 && v < 1.0)) throw UsageError("PVE level must lie in (0,1)");
    const double total = spec.eigenvalues.sum();
    if (!(total > 0.0)) throw DegenerateInputError("spectrum has zero total mass");
    double acc = 0.0;
    for (Eigen::Index d = 0; d < spec.size(); ++d) {
        acc += spec.eigenvalues[d];
        if (acc / total >= v) return static_cast<int>(d) + 1;
    }
    return static_cast<int>(spec.size());
}

}  // namespace fcd
