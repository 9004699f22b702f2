#include "fcd/harness/dgp.hpp"

#include "fcd/error.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

namespace fcd::harness {

DGPKind parse_dgp_kind(std::string_view s) {
    if (s == "far_paparoditis" || s == "paparoditis") return DGPKind::far_paparoditis;
    if (s == "far_synthetic" || s == "synthetic") return DGPKind::far_synthetic;
    if (s == "gaussian_iid" || s == "iid") return DGPKind::gaussian_iid;
    throw UsageError("unknown process '" + std::string(s) + "'");
}

std::string_view to_string(DGPKind k) noexcept {
    switch (k) {
        case DGPKind::far_paparoditis: return "far_paparoditis";
        case DGPKind::far_synthetic: return "far_synthetic";
        case DGPKind::gaussian_iid: return "gaussian_iid";
    }
    return "?";
}

DGPSpec DGPSpec::paparoditis(double b, Grid grid) {
    DGPSpec s;
    s.kind = DGPKind::far_paparoditis;
    s.grid = std::move(grid);
    s.b = b;
    return s;
}

DGPSpec DGPSpec::synthetic(Grid grid) {
    DGPSpec s;
    s.kind = DGPKind::far_synthetic;
    s.grid = std::move(grid);
    s.noise = NoiseKind::gaussian;
    s.burn_in = 30;
    return s;
}

SpectralPair fourier_spectrum(const Grid& grid, std::size_t components, double scale) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    SpectralPair spec;
    spec.eigenvalues.resize(static_cast<Eigen::Index>(components));
    spec.eigenvectors.resize(m, static_cast<Eigen::Index>(components));
    for (std::size_t j = 0; j < components; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const std::size_t k = (j + 1) / 2;
        Curve psi = Curve::from_function(grid, [&](double t) {
            if (j == 0) return 1.0;
            const double arg = 2.0 * std::numbers::pi * static_cast<double>(k) * t;
            return std::numbers::sqrt2 * (j % 2 == 1 ? std::sin(arg) : std::cos(arg));
        });
        Eigen::VectorXd v = coordinates(psi);
        spec.eigenvectors.col(jj) = v / v.norm();
        spec.eigenvalues[jj] = scale / static_cast<double>((j + 1) * (j + 1));
    }
    return spec;
}

namespace {

// Asymmetric Gaussian-bump kernel, rescaled to operator norm 0.6.
Eigen::MatrixXd synthetic_kernel(const Grid& grid) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    Eigen::MatrixXd k(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            const double t = grid.point(static_cast<std::size_t>(i));
            const double s = grid.point(static_cast<std::size_t>(j));
            const double u = t - 0.7 * s - 0.25;
            k(i, j) = (0.5 + s) * std::exp(-u * u / (2.0 * 0.15 * 0.15));
        }
    }
    const Eigen::VectorXd sw = grid.sqrt_weights();
    const Eigen::MatrixXd op = sw.asDiagonal() * k * sw.asDiagonal();
    const double norm = Eigen::JacobiSVD<Eigen::MatrixXd>(op).singularValues()[0];
    return k * (0.6 / norm);
}

}  // namespace

FARProcess::FARProcess(const DGPSpec& spec) : spec_(spec), mean_(Curve::zero(spec.grid)) {
    if (spec.burn_in < 0) throw UsageError("burn-in must be nonnegative");
    const auto m = static_cast<Eigen::Index>(spec.grid.size());
    switch (spec.kind) {
        case DGPKind::far_paparoditis:
            kernel_.resize(m, m);
            for (Eigen::Index i = 0; i < m; ++i) {
                for (Eigen::Index j = 0; j < m; ++j) {
                    const double t = spec.grid.point(static_cast<std::size_t>(i));
                    const double s = spec.grid.point(static_cast<std::size_t>(j));
                    kernel_(i, j) = spec.kernel_constant * std::exp((t * t + s * s) / 2.0);
                }
            }
            break;
        case DGPKind::far_synthetic:
            kernel_ = synthetic_kernel(spec.grid);
            break;
        case DGPKind::gaussian_iid:
            kernel_ = Eigen::MatrixXd::Zero(m, m);
            break;
    }
    if (spec.kind != DGPKind::far_paparoditis) {
        mean_ = Curve::from_function(spec.grid, [](double t) {
            return 6.6 + 0.9 * std::sin(2.0 * std::numbers::pi * t - 2.2) + 0.4 * std::cos(4.0 * std::numbers::pi * t);
        });
    }
    integrator_ = kernel_ * spec.grid.weights().asDiagonal();
    if (spec.noise == NoiseKind::gaussian) sampler_.emplace(fourier_spectrum(spec.grid, 21, 0.6), spec.grid);
}

double FARProcess::operator_norm() const {
    const Eigen::VectorXd sw = grid().sqrt_weights();
    const Eigen::MatrixXd op = sw.asDiagonal() * kernel_ * sw.asDiagonal();
    return Eigen::JacobiSVD<Eigen::MatrixXd>(op).singularValues()[0];
}

Curve FARProcess::conditional_mean(const Curve& prev1, const std::optional<Curve>& prev2) const {
    Eigen::VectorXd v = mean_.values() + integrator_ * (prev1.values() - mean_.values());
    if (prev2 && spec_.b != 0.0) v += spec_.b * (prev2->values() - mean_.values());
    return Curve(grid(), std::move(v));
}

RowMatrix FARProcess::noise(std::size_t count, rng::Stream& stream) const {
    const auto m = static_cast<Eigen::Index>(grid().size());
    switch (spec_.noise) {
        case NoiseKind::none:
            return RowMatrix::Zero(static_cast<Eigen::Index>(count), m);
        case NoiseKind::gaussian:
            return sampler_->draw(count, stream);
        case NoiseKind::brownian: {
            RowMatrix out(static_cast<Eigen::Index>(count), m);
            for (Eigen::Index k = 0; k < out.rows(); ++k) out.row(k) = simulate_brownian(grid(), stream).values().transpose();
            return out;
        }
    }
    return {};
}

Curve FARProcess::noise_curve(rng::Stream& stream) const {
    return Curve(grid(), noise(1, stream).row(0).transpose());
}

std::vector<Curve> FARProcess::simulate(std::size_t n, rng::Stream& stream) const {
    if (n < 1) throw UsageError("series length must be >= 1");
    std::vector<Curve> out;
    out.reserve(n);
    Curve prev1 = mean_;
    Curve prev2 = mean_;
    const std::size_t total = n + static_cast<std::size_t>(spec_.burn_in);
    for (std::size_t k = 0; k < total; ++k) {
        Curve next = conditional_mean(prev1, prev2) + noise_curve(stream);
        prev2 = std::move(prev1);
        prev1 = next;
        if (k >= static_cast<std::size_t>(spec_.burn_in)) out.push_back(std::move(next));
    }
    return out;
}

Curve simulate_brownian(const Grid& grid, rng::Stream& stream) {
    std::normal_distribution<double> normal(0.0, std::sqrt(1.0 / grid.resolution()));
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
    v[0] = 0.0;
    for (Eigen::Index i = 1; i < v.size(); ++i) v[i] = v[i - 1] + normal(stream);
    return Curve(grid, std::move(v));
}

Curve simulate_brownian(const Grid& grid, std::uint64_t seed) {
    rng::Stream stream(seed);
    return simulate_brownian(grid, stream);
}

std::vector<Curve> simulate_far(const DGPSpec& spec, std::size_t n) {
    rng::Stream stream(spec.seed);
    return FARProcess(spec).simulate(n, stream);
}

Curve simulate_gaussian_process(const SpectralPair& spectrum, const Grid& grid, std::uint64_t seed) {
    if (spectrum.size() > 0 && spectrum.eigenvalues.minCoeff() < 0.0) {
        throw DegenerateInputError("covariance spectrum has negative eigenvalues");
    }
    return GaussSampler(spectrum, grid).sample_noise(1, seed).front();
}

Curve simulate_gaussian_process(const Eigen::MatrixXd& kernel, const Grid& grid, std::uint64_t seed) {
    const auto m = static_cast<Eigen::Index>(grid.size());
    if (kernel.rows() != m || kernel.cols() != m) throw StructuralError("kernel matrix does not match the grid");
    const Eigen::VectorXd sw = grid.sqrt_weights();
    const CovarianceOperator op{sw.asDiagonal() * kernel * sw.asDiagonal()};
    return simulate_gaussian_process(eigendecompose(op), grid, seed);
}

}  // namespace fcd::harness
