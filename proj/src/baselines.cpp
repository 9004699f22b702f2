#include "fcd/baselines.hpp"

#include "fcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace fcd {

namespace {

Eigen::MatrixXd stack(std::span<const Covariate> xs) {
    if (xs.empty()) throw UsageError("no training covariates");
    Eigen::MatrixXd rows(static_cast<Eigen::Index>(xs.size()), static_cast<Eigen::Index>(xs.front().dimension()));
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!xs[i].same_structure(xs.front())) throw StructuralError("training covariates do not share one structure");
        rows.row(static_cast<Eigen::Index>(i)) = coordinates(xs[i]).transpose();
    }
    return rows;
}

Eigen::VectorXd to_vector(const std::vector<bool>& b) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(b.size()));
    for (std::size_t i = 0; i < b.size(); ++i) v[static_cast<Eigen::Index>(i)] = b[i] ? 1.0 : 0.0;
    return v;
}

// Kernel-weighted mean with weights exp(-(d² - d²_min)/(2h²)); the shift cancels in the ratio.
double weighted_mean(const Eigen::VectorXd& sq_dist, const Eigen::VectorXd& labels, double h, std::ptrdiff_t skip,
                     bool& fell_back) {
    double d_min = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < sq_dist.size(); ++i) {
        if (i != skip) d_min = std::min(d_min, sq_dist[i]);
    }
    double num = 0.0;
    double den = 0.0;
    const double scale = 1.0 / (2.0 * h * h);
    for (Eigen::Index i = 0; i < sq_dist.size(); ++i) {
        if (i == skip) continue;
        const double w = std::exp(-(sq_dist[i] - d_min) * scale);
        num += w * labels[i];
        den += w;
    }
    fell_back = !(den > 0.0) || !std::isfinite(den) || !std::isfinite(num);
    if (!fell_back) return num / den;
    double sum = 0.0;
    Eigen::Index count = 0;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (i == skip) continue;
        sum += labels[i];
        ++count;
    }
    return count > 0 ? sum / static_cast<double>(count) : 0.0;
}

}  // namespace

NWEstimator::NWEstimator(std::span<const Covariate> xs, std::vector<bool> indicators, double bandwidth)
    : coords_(stack(xs)), labels_(to_vector(indicators)), bandwidth_(bandwidth), layout_(CovariateLayout::of(xs.front())) {
    if (indicators.size() != xs.size()) throw UsageError("one indicator per training covariate is required");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) throw UsageError("bandwidth must be positive and finite");
}

double NWEstimator::prob_coords(const Eigen::VectorXd& x, std::ptrdiff_t skip) const {
    if (x.size() != coords_.cols()) throw StructuralError("query covariate has the wrong dimension");
    const Eigen::VectorXd sq = (coords_.rowwise() - x.transpose()).rowwise().squaredNorm();
    return weighted_mean(sq, labels_, bandwidth_, skip, fell_back_);
}

double NWEstimator::prob(const Covariate& x) const {
    if (!(CovariateLayout::of(x) == layout_)) throw StructuralError("query covariate structure does not match");
    return prob_coords(coordinates(x));
}

double nw_prob(const NWEstimator& est, const Covariate& x) { return est.prob(x); }

namespace {

Eigen::MatrixXd sq_distances_of_rows(const Eigen::MatrixXd& rows) {
    const Eigen::VectorXd norms = rows.rowwise().squaredNorm();
    Eigen::MatrixXd g = rows * rows.transpose();
    Eigen::MatrixXd d = (-2.0 * g).colwise() + norms;
    d.rowwise() += norms.transpose();
    d = d.cwiseMax(0.0);
    d.diagonal().setZero();
    return d;
}

std::vector<double> grid_from_median(const Eigen::MatrixXd& sq) {
    std::vector<double> dists;
    const Eigen::Index n = sq.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) dists.push_back(std::sqrt(sq(i, j)));
    }
    if (dists.empty()) throw UsageError("bandwidth grid needs at least two covariates");
    auto mid = dists.begin() + static_cast<std::ptrdiff_t>(dists.size() / 2);
    std::nth_element(dists.begin(), mid, dists.end());
    const double median = *mid;
    if (!(median > 0.0)) throw DegenerateInputError("median pairwise covariate distance is zero");
    std::vector<double> grid(20);
    const double lo = std::log(0.05 * median);
    const double hi = std::log(5.0 * median);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid.size() - 1));
    }
    return grid;
}

}  // namespace

std::vector<double> default_bandwidth_grid(std::span<const Covariate> xs) {
    return grid_from_median(sq_distances_of_rows(stack(xs)));
}

Eigen::MatrixXd pairwise_sq_distances(std::span<const Covariate> xs) { return sq_distances_of_rows(stack(xs)); }

BandwidthSelection nw_select_bandwidth(std::span<const Covariate> xs, const std::vector<bool>& indicators,
                                       std::vector<double> grid) {
    if (indicators.size() != xs.size()) throw UsageError("one indicator per training covariate is required");
    return nw_select_bandwidth(pairwise_sq_distances(xs), indicators, std::move(grid));
}

BandwidthSelection nw_select_bandwidth(const Eigen::MatrixXd& sq, const std::vector<bool>& indicators,
                                       std::vector<double> grid) {
    if (sq.rows() < 3) throw UsageError("bandwidth selection needs at least 3 training pairs");
    if (sq.rows() != sq.cols() || indicators.size() != static_cast<std::size_t>(sq.rows())) {
        throw UsageError("one indicator per training covariate is required");
    }
    if (sq.maxCoeff() <= 0.0) throw DegenerateInputError("all pairwise covariate distances are zero");
    if (grid.empty()) grid = grid_from_median(sq);
    std::sort(grid.begin(), grid.end());
    const Eigen::VectorXd labels = to_vector(indicators);

    BandwidthSelection sel;
    sel.grid = grid;
    sel.bandwidth = grid.front();
    double best = std::numeric_limits<double>::infinity();
    for (double h : grid) {
        if (!(h > 0.0)) throw UsageError("bandwidth candidates must be positive");
        double err = 0.0;
        bool fb = false;
        for (Eigen::Index i = 0; i < sq.rows(); ++i) {
            const double p = weighted_mean(sq.col(i), labels, h, i, fb);
            err += (labels[i] - p) * (labels[i] - p);
        }
        err /= static_cast<double>(sq.rows());
        sel.loo_error.push_back(err);
        if (err < best) {
            best = err;
            sel.bandwidth = h;
        }
    }
    return sel;
}

Link parse_link(std::string_view s) {
    if (s == "logit") return Link::logit;
    if (s == "probit") return Link::probit;
    throw UsageError("unknown link '" + std::string(s) + "' (expected logit or probit)");
}

double apply_link(Link link, double eta) {
    if (link == Link::logit) return 1.0 / (1.0 + std::exp(-eta));
    return 0.5 * std::erfc(-eta / std::numbers::sqrt2);
}

namespace {

constexpr double kProbFloor = 1e-15;
constexpr double kMaxSlopeNorm = 1e3;

double clamp_prob(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); }

double inverse_link(Link link, double mu) {
    mu = clamp_prob(mu);
    if (link == Link::logit) return std::log(mu / (1.0 - mu));
    // Newton on Φ(x) = mu; Φ is smooth and strictly increasing.
    double x = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double step = (apply_link(Link::probit, x) - mu) / std::max(normal_pdf(x), 1e-300);
        x -= step;
        if (std::abs(step) < 1e-14) break;
    }
    return x;
}

double log_likelihood(const Eigen::VectorXd& y, const Eigen::VectorXd& eta, Link link) {
    double ll = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        const double p = clamp_prob(apply_link(link, eta[i]));
        ll += y[i] * std::log(p) + (1.0 - y[i]) * std::log(1.0 - p);
    }
    return ll;
}

bool perfectly_separated(const Eigen::VectorXd& y, const Eigen::VectorXd& eta) {
    double max0 = -std::numeric_limits<double>::infinity();
    double min1 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < y.size(); ++i) {
        if (y[i] > 0.5) {
            min1 = std::min(min1, eta[i]);
        } else {
            max0 = std::max(max0, eta[i]);
        }
    }
    return max0 < min1;
}

}  // namespace

FGLMModel fglm_fit_scores(const Eigen::MatrixXd& scores, const std::vector<bool>& labels, Link link) {
    const Eigen::Index n = scores.rows();
    if (static_cast<std::size_t>(n) != labels.size()) throw UsageError("one label per score row is required");
    const Eigen::VectorXd y = to_vector(labels);
    const double mean = n > 0 ? y.mean() : 0.0;
    if (n == 0 || mean == 0.0 || mean == 1.0) throw DegenerateInputError("binomial regression needs both classes present");

    const Eigen::Index q = scores.cols() + 1;
    Eigen::MatrixXd design(n, q);
    design.col(0).setOnes();
    design.rightCols(scores.cols()) = scores;

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(q);
    beta[0] = inverse_link(link, mean);
    Eigen::VectorXd eta = design * beta;
    double ll = log_likelihood(y, eta, link);

    FGLMModel model;
    model.link = link;
    for (int it = 1; it <= 100; ++it) {
        model.iterations = it;
        Eigen::VectorXd w(n);
        Eigen::VectorXd z(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double mu = clamp_prob(apply_link(link, eta[i]));
            double dmu = link == Link::logit ? mu * (1.0 - mu) : normal_pdf(eta[i]);
            dmu = std::max(dmu, 1e-300);
            w[i] = dmu * dmu / (mu * (1.0 - mu));
            z[i] = eta[i] + (y[i] - mu) / dmu;
        }
        const Eigen::MatrixXd xtwx = design.transpose() * w.asDiagonal() * design;
        const Eigen::VectorXd xtwz = design.transpose() * w.asDiagonal() * z;
        const Eigen::VectorXd target = xtwx.ldlt().solve(xtwz);
        if (!target.allFinite()) break;

        // Step halving keeps the log-likelihood nondecreasing.
        Eigen::VectorXd step = target - beta;
        double new_ll = ll;
        Eigen::VectorXd candidate = beta;
        for (int half = 0; half < 30; ++half) {
            candidate = beta + step;
            new_ll = log_likelihood(y, design * candidate, link);
            if (new_ll >= ll - 1e-12) break;
            step *= 0.5;
        }
        const double gain = new_ll - ll;
        beta = candidate;
        eta = design * beta;
        ll = new_ll;
        if (beta.tail(q - 1).norm() > kMaxSlopeNorm) break;
        if (gain < 1e-10) {
            model.converged = true;
            break;
        }
    }

    model.separated = perfectly_separated(y, eta) || beta.tail(q - 1).norm() > kMaxSlopeNorm;
    if (model.separated) {
        model.converged = false;
        const double norm = beta.tail(q - 1).norm();
        if (norm > kMaxSlopeNorm) beta.tail(q - 1) *= kMaxSlopeNorm / norm;
        ll = log_likelihood(y, design * beta, link);
    }
    model.intercept = beta[0];
    model.coefficients = beta.tail(q - 1);
    model.log_likelihood = ll;
    return model;
}

FGLMModel fglm_fit(std::span<const Covariate> xs, const std::vector<bool>& labels, int truncation, Link link) {
    if (truncation < 1) throw UsageError("binomial regression needs at least one component");
    const Eigen::MatrixXd rows = stack(xs);
    const Eigen::VectorXd mean = rows.colwise().mean().transpose();
    const Eigen::MatrixXd centered = rows.rowwise() - mean.transpose();
    const SpectralPair spec = eigendecompose(empirical_covariance(centered, false));
    const Eigen::Index rank = spec.rank();
    if (rank == 0) throw DegenerateInputError("covariates have zero variance");
    const Eigen::Index t = std::min<Eigen::Index>(truncation, rank);
    const Eigen::MatrixXd directions = spec.eigenvectors.leftCols(t);

    FGLMModel model = fglm_fit_scores(centered * directions, labels, link);
    model.x_mean = mean;
    model.directions = directions;
    model.layout = CovariateLayout::of(xs.front());
    return model;
}

Eigen::VectorXd FGLMModel::scores(const Covariate& x) const {
    if (!(CovariateLayout::of(x) == layout)) throw StructuralError("covariate structure does not match the model");
    return directions.transpose() * (coordinates(x) - x_mean);
}

double fglm_prob_scores(const FGLMModel& model, const Eigen::VectorXd& scores) {
    if (scores.size() != model.coefficients.size()) throw StructuralError("score vector has the wrong length");
    return clamp_prob(apply_link(model.link, model.intercept + scores.dot(model.coefficients)));
}

double fglm_prob(const FGLMModel& model, const Covariate& x) { return fglm_prob_scores(model, model.scores(x)); }

}  // namespace fcd
