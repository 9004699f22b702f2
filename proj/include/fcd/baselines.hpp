#pragma once

#include "fcd/curves.hpp"
#include "fcd/specdecomp.hpp"

#include <Eigen/Dense>

#include <span>
#include <string_view>
#include <vector>

namespace fcd {

/**
 * Functional Nadaraya–Watson estimator of P(Y ∈ A | X = x) with a Gaussian
 * kernel on the covariate-space distance.
 */
class NWEstimator {
public:
    NWEstimator(std::span<const Covariate> xs, std::vector<bool> indicators, double bandwidth);

    [[nodiscard]] double bandwidth() const noexcept { return bandwidth_; }
    [[nodiscard]] std::size_t size() const noexcept { return labels_.size(); }

    /// Kernel-weighted mean of the training indicators at x.
    [[nodiscard]] double prob(const Covariate& x) const;
    /// Same, but on a coordinate vector; `skip` excludes one training index (leave-one-out).
    [[nodiscard]] double prob_coords(const Eigen::VectorXd& x, std::ptrdiff_t skip = -1) const;
    /// True if the last query fell back to the unweighted mean.
    [[nodiscard]] bool fell_back() const noexcept { return fell_back_; }

    [[nodiscard]] const Eigen::MatrixXd& coords() const noexcept { return coords_; }
    [[nodiscard]] const Eigen::VectorXd& labels() const noexcept { return labels_; }

private:
    Eigen::MatrixXd coords_;  // rows
    Eigen::VectorXd labels_;
    double bandwidth_;
    CovariateLayout layout_;
    mutable bool fell_back_ = false;
};

double nw_prob(const NWEstimator& est, const Covariate& x);

/// 20 log-spaced bandwidths spanning [0.05, 5] × median pairwise distance.
std::vector<double> default_bandwidth_grid(std::span<const Covariate> xs);

struct BandwidthSelection {
    double bandwidth;
    std::vector<double> grid;
    std::vector<double> loo_error;  // mean squared leave-one-out error per grid point
};

/// Leave-one-out squared-error bandwidth choice; ties go to the smaller bandwidth.
BandwidthSelection nw_select_bandwidth(std::span<const Covariate> xs, const std::vector<bool>& indicators,
                                       std::vector<double> grid = {});
/// Same, from a precomputed matrix of squared coordinate distances (reused across events).
BandwidthSelection nw_select_bandwidth(const Eigen::MatrixXd& sq_distances, const std::vector<bool>& indicators,
                                       std::vector<double> grid = {});
Eigen::MatrixXd pairwise_sq_distances(std::span<const Covariate> xs);

enum class Link { logit, probit };

Link parse_link(std::string_view s);
double apply_link(Link link, double eta);

/// Binomial regression g(β₀ + ⟨x − x̄, β⟩) with β in the span of the leading T_n FPC directions.
struct FGLMModel {
    Link link = Link::logit;
    double intercept = 0.0;
    Eigen::VectorXd coefficients;  // one per retained component
    Eigen::VectorXd x_mean;        // coordinates
    Eigen::MatrixXd directions;    // coordinates, one column per component
    CovariateLayout layout;
    bool converged = false;
    bool separated = false;
    int iterations = 0;
    double log_likelihood = 0.0;

    [[nodiscard]] Eigen::VectorXd scores(const Covariate& x) const;
};

/// IRLS on the T_n leading FPC scores of xs.
FGLMModel fglm_fit(std::span<const Covariate> xs, const std::vector<bool>& labels, int truncation, Link link);
/// IRLS on given score rows (exposed for tests and for callers that already have scores).
FGLMModel fglm_fit_scores(const Eigen::MatrixXd& scores, const std::vector<bool>& labels, Link link);

double fglm_prob(const FGLMModel& model, const Covariate& x);
double fglm_prob_scores(const FGLMModel& model, const Eigen::VectorXd& scores);

}  // namespace fcd
