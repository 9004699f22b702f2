#include "fcd/conddist.hpp"

#include "fcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace fcd {

std::string_view to_string(Method m) noexcept { return m == Method::boot ? "boot" : "gauss"; }

Method parse_method(std::string_view s) {
    if (s == "boot") return Method::boot;
    if (s == "gauss") return Method::gauss;
    throw UsageError("unknown method '" + std::string(s) + "' (expected boot or gauss)");
}

GaussSampler::GaussSampler(const SpectralPair& spectrum, const Grid& grid, double rel_cutoff) : grid_(grid) {
    if (static_cast<std::size_t>(spectrum.eigenvectors.rows()) != grid.size()) {
        throw StructuralError("noise spectrum does not live on the curve grid");
    }
    const Eigen::Index r = spectrum.size() == 0 ? 0 : spectrum.rank(rel_cutoff);
    variances_ = spectrum.eigenvalues.head(r);
    const Eigen::VectorXd inv_sqrt_w = grid.sqrt_weights().cwiseInverse();
    loadings_ = inv_sqrt_w.asDiagonal() * spectrum.eigenvectors.leftCols(r) * variances_.cwiseSqrt().asDiagonal();
}

RowMatrix GaussSampler::draw(std::size_t count, rng::Stream& stream) const {
    const auto m = static_cast<Eigen::Index>(grid_.size());
    const auto n = static_cast<Eigen::Index>(count);
    if (rank() == 0) return RowMatrix::Zero(n, m);
    RowMatrix z(n, rank());
    std::normal_distribution<double> normal;
    for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index j = 0; j < rank(); ++j) z(k, j) = normal(stream);
    }
    return z * loadings_.transpose();
}

std::vector<Curve> GaussSampler::sample_noise(std::size_t count, std::uint64_t seed) const {
    if (count < 1) throw UsageError("sample count must be >= 1");
    rng::Stream stream(seed);
    const RowMatrix d = draw(count, stream);
    std::vector<Curve> out;
    out.reserve(count);
    for (Eigen::Index k = 0; k < d.rows(); ++k) out.emplace_back(grid_, d.row(k).transpose());
    return out;
}

NoiseBank boot_bank(const FittedFLM& model) {
    if (model.residuals.empty()) throw UsageError("model has no residuals");
    NoiseBank bank;
    bank.method = Method::boot;
    const auto m = static_cast<Eigen::Index>(model.grid.size());
    bank.draws.resize(static_cast<Eigen::Index>(model.residuals.size()), m);
    for (std::size_t k = 0; k < model.residuals.size(); ++k) {
        bank.draws.row(static_cast<Eigen::Index>(k)) = model.residuals[k].values().transpose();
    }
    return bank;
}

NoiseBank gauss_bank(const FittedFLM& model, std::size_t mc, std::uint64_t seed) {
    if (mc < 1) throw UsageError("Monte-Carlo size must be >= 1");
    const GaussSampler sampler = GaussSampler::from_model(model);
    NoiseBank bank;
    bank.method = Method::gauss;
    bank.seed = seed;
    if (sampler.rank() == 0) {
        bank.status = EstimateStatus::degenerate_noise;
        bank.draws = RowMatrix::Zero(static_cast<Eigen::Index>(mc), static_cast<Eigen::Index>(model.grid.size()));
        return bank;
    }
    rng::Stream stream(seed);
    bank.draws = sampler.draw(mc, stream);
    return bank;
}

NoiseBank make_bank(const FittedFLM& model, Method method, std::size_t mc, std::uint64_t seed) {
    return method == Method::boot ? boot_bank(model) : gauss_bank(model, mc, seed);
}

namespace {

template <class F>
void for_each_shifted(const Curve& forecast, const NoiseBank& bank, F&& f) {
    if (static_cast<std::size_t>(bank.draws.cols()) != forecast.size()) throw StructuralError("noise bank grid mismatch");
    std::vector<double> buf(forecast.size());
    const auto& mu = forecast.values();
    for (Eigen::Index k = 0; k < bank.draws.rows(); ++k) {
        for (std::size_t i = 0; i < buf.size(); ++i) {
            const auto ii = static_cast<Eigen::Index>(i);
            buf[i] = mu[ii] + bank.draws(k, ii);
        }
        f(std::span<const double>(buf));
    }
}

}  // namespace

CondProbEstimate estimate_prob(const Curve& forecast, const NoiseBank& bank, const EventSet& event) {
    if (bank.size() == 0) throw UsageError("empty noise bank");
    std::size_t hits = 0;
    for_each_shifted(forecast, bank, [&](std::span<const double> y) {
        if (event.contains(y, forecast.grid())) ++hits;
    });
    CondProbEstimate est;
    est.method = bank.method;
    est.count = hits;
    est.n_used = bank.size();
    est.value = static_cast<double>(hits) / static_cast<double>(bank.size());
    est.seed = bank.seed;
    est.status = bank.status;
    return est;
}

CondProbEstimate boot_prob(const FittedFLM& model, const Covariate& x, const EventSet& event) {
    return estimate_prob(predict(model, x), boot_bank(model), event);
}

CondProbEstimate gauss_prob(const FittedFLM& model, const Covariate& x, const EventSet& event, std::size_t mc,
                            std::uint64_t seed) {
    return estimate_prob(predict(model, x), gauss_bank(model, mc, seed), event);
}

namespace {

// Smallest k in 1..n with k/n ≥ p, compared exactly as the estimator's value is.
std::size_t order_index(double p, std::size_t n) {
    for (std::size_t k = 1; k <= n; ++k) {
        if (static_cast<double>(k) / static_cast<double>(n) >= p) return k;
    }
    return n + 1;
}

double quantile_by_statistic(const Curve& forecast, const NoiseBank& bank, const MonotoneFamily& fam, double p) {
    std::vector<double> stats;
    stats.reserve(bank.size());
    for_each_shifted(forecast, bank, [&](std::span<const double> y) { stats.push_back(fam.statistic(y)); });
    std::sort(stats.begin(), stats.end());
    const std::size_t n = stats.size();
    const std::size_t k = order_index(p, n);
    const double at_upper = static_cast<double>(std::upper_bound(stats.begin(), stats.end(), fam.upper) - stats.begin()) /
                            static_cast<double>(n);
    if (k > n || stats[k - 1] > fam.upper) {
        throw RangeExhaustedError("probability level " + std::to_string(p) + " not reached inside the family range",
                                  fam.upper, at_upper);
    }
    return std::max(stats[k - 1], fam.lower);
}

double quantile_by_bisection(const Curve& forecast, const NoiseBank& bank, const MonotoneFamily& fam, double p,
                             double rel_tol) {
    double lo = fam.lower;
    double hi = fam.upper;
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw UsageError("bisection over family '" + fam.name + "' needs a finite range");
    }
    auto prob = [&](double xi) { return estimate_prob(forecast, bank, fam.at(xi)).value; };
    if (prob(lo) >= p) return lo;
    const double at_upper = prob(hi);
    if (at_upper < p) {
        throw RangeExhaustedError("probability level " + std::to_string(p) + " not reached inside the family range", hi,
                                  at_upper);
    }
    const double tol = rel_tol * (hi - lo);
    while (hi - lo > tol) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (prob(mid) >= p) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

double quantile_over_family(const Curve& forecast, const NoiseBank& bank, const MonotoneFamily& family, double p,
                            double rel_tol) {
    if (!(p > 0.0 && p < 1.0)) throw UsageError("probability level must lie in (0,1)");
    if (!(family.lower < family.upper)) throw UsageError("family range must satisfy lower < upper");
    if (family.direction == MonotoneFamily::Direction::decreasing) {
        MonotoneFamily reflected;
        reflected.generator = [g = family.generator](double eta) { return g(-eta); };
        reflected.lower = -family.upper;
        reflected.upper = -family.lower;
        reflected.name = family.name + " (reflected)";
        return -quantile_by_bisection(forecast, bank, reflected, p, rel_tol);
    }
    if (family.statistic) return quantile_by_statistic(forecast, bank, family, p);
    return quantile_by_bisection(forecast, bank, family, p, rel_tol);
}

double quantile_over_family(const FittedFLM& model, const Covariate& x, const MonotoneFamily& family, double p,
                            const QuantileOptions& options) {
    return quantile_over_family(predict(model, x), make_bank(model, options.method, options.mc, options.seed), family, p,
                                options.rel_tol);
}

EventSet BandCalibration::band() const {
    return EventSet::uniform_band(center, -lower * sigma, upper * sigma);
}

Curve residual_sigma(const FittedFLM& model) {
    const auto& spec = model.gamma_hat;
    const Eigen::VectorXd w = model.grid.weights();
    Eigen::VectorXd var = (spec.eigenvectors.array().square().matrix() * spec.eigenvalues).cwiseQuotient(w);
    Eigen::VectorXd sigma = var.cwiseMax(0.0).cwiseSqrt();
    if (!sigma.allFinite()) throw DegenerateInputError("residual standard deviation is not finite");
    const double top = sigma.maxCoeff();
    if (top <= 0.0) return Curve::constant(model.grid, 1.0);
    return Curve(model.grid, sigma.cwiseMax(1e-8 * top));
}

double sample_quantile(std::vector<double> values, double q) {
    if (values.empty()) throw UsageError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw UsageError("quantile level must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const double h = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BandCalibration calibrate_uniform_band(const Curve& forecast, const Curve& sigma, const NoiseBank& bank, double nominal,
                                       BandStatistic statistic) {
    if (!(nominal > 0.0 && nominal < 1.0)) throw UsageError("nominal coverage must lie in (0,1)");
    if (!(sigma.grid() == forecast.grid())) throw StructuralError("sigma and forecast grids differ");
    if (sigma.values().minCoeff() <= 0.0) throw DegenerateInputError("band scale sigma must be positive");
    const double alpha = 1.0 - nominal;
    std::vector<double> lows;
    std::vector<double> highs;
    lows.reserve(bank.size());
    highs.reserve(bank.size());
    const auto& s = sigma.values();
    for (Eigen::Index k = 0; k < bank.draws.rows(); ++k) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        double abs_max = 0.0;
        for (Eigen::Index i = 0; i < bank.draws.cols(); ++i) {
            const double r = bank.draws(k, i) / s[i];
            lo = std::min(lo, r);
            hi = std::max(hi, r);
            abs_max = std::max(abs_max, std::abs(r));
        }
        if (statistic == BandStatistic::signed_extremes) {
            lows.push_back(lo);
            highs.push_back(hi);
        } else {
            lows.push_back(abs_max);
            highs.push_back(abs_max);
        }
    }
    BandCalibration cal{forecast, sigma, sample_quantile(lows, alpha / 2.0), sample_quantile(highs, 1.0 - alpha / 2.0),
                        nominal, bank.method};
    return cal;
}

BandCalibration calibrate_uniform_band(const FittedFLM& model, const Covariate& x, double nominal,
                                       const BandOptions& options) {
    return calibrate_uniform_band(predict(model, x), residual_sigma(model),
                                  make_bank(model, options.method, options.mc, options.seed), nominal, options.statistic);
}

}  // namespace fcd
