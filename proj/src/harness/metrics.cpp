#include "fcd/harness/metrics.hpp"

#include "fcd/error.hpp"

#include <algorithm>
#include <cmath>

namespace fcd::harness {

double cross_entropy(const std::vector<bool>& labels, std::span<const double> probs) {
    if (labels.size() != probs.size()) throw UsageError("labels and probabilities differ in length");
    if (labels.empty()) throw UsageError("cross-entropy of an empty sample");
    double sum = 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const double p = std::clamp(probs[i], 1e-12, 1.0 - 1e-12);
        sum += labels[i] ? std::log(p) : std::log1p(-p);
    }
    return -sum / static_cast<double>(labels.size());
}

double check_loss(double residual, double p) {
    if (!(p > 0.0 && p < 1.0)) throw UsageError("check loss level must lie in (0,1)");
    return (p - (residual <= 0.0 ? 1.0 : 0.0)) * residual;
}

double rmse(std::span<const double> estimates, double truth) {
    if (estimates.empty()) throw UsageError("RMSE of an empty sample");
    double s = 0.0;
    for (double e : estimates) s += (e - truth) * (e - truth);
    return std::sqrt(s / static_cast<double>(estimates.size()));
}

double median(std::vector<double> values) {
    if (values.empty()) throw UsageError("median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace fcd::harness
