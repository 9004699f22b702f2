#pragma once

#include <span>
#include <vector>

namespace fcd::harness {

/// −(1/N) Σ [y log p + (1−y) log(1−p)] with p clipped to [1e-12, 1 − 1e-12].
double cross_entropy(const std::vector<bool>& labels, std::span<const double> probs);

/// Check (pinball) loss ρ_p(y) = (p − 𝟙{y ≤ 0})·y.
double check_loss(double residual, double p);

double rmse(std::span<const double> estimates, double truth);

double median(std::vector<double> values);

}  // namespace fcd::harness
