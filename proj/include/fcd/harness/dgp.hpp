#pragma once

#include "fcd/conddist.hpp"
#include "fcd/curves.hpp"
#include "fcd/rng.hpp"
#include "fcd/specdecomp.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace fcd::harness {

enum class DGPKind {
    /// Y_k = ∫ 0.34·e^{(t²+s²)/2} Y_{k−1}(s) ds + b·Y_{k−2} + B_k, B_k Brownian.
    far_paparoditis,
    /// Asymmetric-kernel FAR(1) around a daily-profile mean with Gaussian Fourier noise.
    far_synthetic,
    /// Independent draws of mean + noise.
    gaussian_iid,
};

enum class NoiseKind { brownian, gaussian, none };

DGPKind parse_dgp_kind(std::string_view s);
std::string_view to_string(DGPKind k) noexcept;

struct DGPSpec {
    DGPKind kind = DGPKind::far_paparoditis;
    Grid grid{100};
    double b = 0.0;
    double kernel_constant = 0.34;
    NoiseKind noise = NoiseKind::brownian;
    int burn_in = 100;
    std::uint64_t seed = 0;

    static DGPSpec paparoditis(double b = 0.0, Grid grid = Grid(100));
    /// Burn-in 30, Gaussian noise.
    static DGPSpec synthetic(Grid grid = Grid(100));
};

/// A fully specified FAR(2)-form process μ + ρ(Y_{k−1} − μ) + b(Y_{k−2} − μ) + ε_k.
class FARProcess {
public:
    explicit FARProcess(const DGPSpec& spec);

    [[nodiscard]] const DGPSpec& spec() const noexcept { return spec_; }
    [[nodiscard]] const Grid& grid() const noexcept { return spec_.grid; }
    [[nodiscard]] const Curve& mean() const noexcept { return mean_; }
    /// Kernel values ρ(t_i, s_j).
    [[nodiscard]] const Eigen::MatrixXd& kernel() const noexcept { return kernel_; }
    /// L² operator norm of ρ on the grid.
    [[nodiscard]] double operator_norm() const;

    [[nodiscard]] Curve conditional_mean(const Curve& prev1, const std::optional<Curve>& prev2 = std::nullopt) const;
    [[nodiscard]] RowMatrix noise(std::size_t count, rng::Stream& stream) const;
    [[nodiscard]] Curve noise_curve(rng::Stream& stream) const;

    /// n consecutive outputs after the burn-in, started from the mean.
    [[nodiscard]] std::vector<Curve> simulate(std::size_t n, rng::Stream& stream) const;

private:
    DGPSpec spec_;
    Curve mean_;
    Eigen::MatrixXd kernel_;
    Eigen::MatrixXd integrator_;  // kernel · diag(w)
    std::optional<GaussSampler> sampler_;
};

Curve simulate_brownian(const Grid& grid, rng::Stream& stream);
Curve simulate_brownian(const Grid& grid, std::uint64_t seed);

/// simulate(n) with the stream Stream(spec.seed).
std::vector<Curve> simulate_far(const DGPSpec& spec, std::size_t n);

/// One Karhunen–Loève draw from a spectrum (coordinates) or from a pointwise kernel matrix K(t_i, t_j).
Curve simulate_gaussian_process(const SpectralPair& spectrum, const Grid& grid, std::uint64_t seed);
Curve simulate_gaussian_process(const Eigen::MatrixXd& kernel, const Grid& grid, std::uint64_t seed);

/// Spectrum of ν_j = scale·j⁻² on the Fourier basis 1, √2 sin 2πkt, √2 cos 2πkt.
SpectralPair fourier_spectrum(const Grid& grid, std::size_t components, double scale);

}  // namespace fcd::harness
