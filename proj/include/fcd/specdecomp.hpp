#pragma once

#include "fcd/curves.hpp"

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace fcd {

/// Symmetric PSD operator expressed in orthonormal coordinates (see coordinates()).
struct CovarianceOperator {
    Eigen::MatrixXd matrix;
};

/**
 * Eigenpairs of a symmetric operator, sorted nonincreasing.
 *
 * Eigenvectors are the columns of `eigenvectors`, orthonormal in coordinate
 * space (hence L²-orthonormal for curve operators). Each column is signed so
 * that its first entry of largest magnitude is positive. Negative eigenvalues
 * are clamped to zero; the total clamped magnitude is kept in `clamped_mass`.
 */
struct SpectralPair {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;
    double clamped_mass = 0.0;

    [[nodiscard]] Eigen::Index size() const noexcept { return eigenvalues.size(); }
    /// Number of eigenvalues strictly above rel_tol·λ₁.
    [[nodiscard]] Eigen::Index rank(double rel_tol = 1e-10) const noexcept;
    /// Σ λ_i v_i v_iᵀ.
    [[nodiscard]] Eigen::MatrixXd reconstruct() const;
};

/// Covariance of coordinate vectors stored as rows of `samples`.
CovarianceOperator empirical_covariance(const Eigen::MatrixXd& samples, bool center);
CovarianceOperator empirical_covariance(std::span<const Curve> sample, bool center);
CovarianceOperator empirical_covariance(std::span<const Covariate> sample, bool center);

/// Ĉ_YX = (1/n) Σ y_k ⊗ x_k as a (D+1)×p matrix in coordinates.
Eigen::MatrixXd empirical_cross_covariance(const Eigen::MatrixXd& y_coords, const Eigen::MatrixXd& x_coords);
Eigen::MatrixXd empirical_cross_covariance(std::span<const Curve> ys, std::span<const Covariate> xs);

SpectralPair eigendecompose(const CovarianceOperator& op);

/// Eigenvector i of a curve-space operator as a function on the grid.
Curve eigenfunction(const SpectralPair& spec, Eigen::Index i, const Grid& grid);

enum class ThresholdScale { relative, absolute };

/**
 * T_n = max{ j ≥ 1 : λ_j ≥ λ₁/m_n } (relative) or λ_j ≥ 1/m_n (absolute).
 * Ties pass. The result is at least 1 and at most the number of strictly
 * positive eigenvalues.
 */
int truncation_threshold(const SpectralPair& spec, double m_n, ThresholdScale scale = ThresholdScale::relative);

/// Smallest d with (Σ_{j≤d} λ_j)/(Σ_j λ_j) ≥ v.
int truncation_pve(const SpectralPair& spec, double v);

}  // namespace fcd
