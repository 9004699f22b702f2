#pragma once

#include "fcd/conddist.hpp"
#include "fcd/events.hpp"
#include "fcd/flm.hpp"
#include "fcd/harness/dgp.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fcd::harness {

/**
 * A table of results: string key columns followed by numeric value columns.
 * Everything except `runtime_seconds` is a pure function of the
 * configuration and seed; the CSV form omits the runtime.
 */
struct ExperimentReport {
    std::string name;
    std::uint64_t seed = 0;
    std::size_t replications = 0;
    std::vector<std::string> key_columns;
    std::vector<std::string> value_columns;
    struct Row {
        std::vector<std::string> keys;
        std::vector<double> values;
    };
    std::vector<Row> rows;
    double runtime_seconds = 0.0;

    [[nodiscard]] double value(std::size_t row, const std::string& column) const;
};

void write_report_csv(const ExperimentReport& report, std::ostream& out);
void write_report_json(const ExperimentReport& report, std::ostream& out);
/// Writes CSV, or JSON when the path ends in ".json".
void save_report(const ExperimentReport& report, const std::string& path);

/// Runs body(i) for i in [0, count) on up to `threads` workers (0: hardware concurrency).
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

struct CoverageConfig {
    std::size_t n = 200;
    double b = 0.0;
    double nominal = 0.95;
    std::vector<Method> methods{Method::boot};
    std::size_t reps = 500;
    std::size_t mc = 2000;
    double pve = 0.85;
    int resolution = 100;
    BandStatistic statistic = BandStatistic::signed_extremes;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct CoverageCell {
    Method method;
    std::size_t hits = 0;
    std::size_t reps = 0;
    [[nodiscard]] double coverage() const { return static_cast<double>(hits) / static_cast<double>(reps); }
    [[nodiscard]] double std_error() const;
};

/**
 * Per replicate: simulate n+1 curves of the FAR process, fit FAR(1) by PVE,
 * calibrate a uniform band at the last curve, draw the true next curve from
 * the full process and record containment. All methods share the data of a
 * replicate.
 */
std::vector<CoverageCell> run_coverage_experiment(const CoverageConfig& config);
ExperimentReport coverage_report(const CoverageConfig& config, const std::vector<CoverageCell>& cells);

enum class Estimator { boot, gauss, nw, fglm };

std::string_view to_string(Estimator e) noexcept;
Estimator parse_estimator(std::string_view s);

struct RMSEConfig {
    DGPSpec dgp = DGPSpec::synthetic();
    std::vector<std::size_t> sizes{50, 100, 250};
    std::size_t predictors = 50;
    std::size_t reps = 100;
    /// Target event for the response; defaults to {λ(Y > √50) ≤ 0.5}.
    EventSet event = EventSet::level(7.0710678118654755, 0.5);
    std::vector<Estimator> methods{Estimator::boot, Estimator::gauss};
    std::size_t mc = 2000;
    std::size_t oracle_mc = 10000;
    TruncationRule truncation = TruncationRule::threshold_rule();
    int predictor_burn_in = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

/// Predictors drawn from independent chains of the process (stream "predictors").
std::vector<Curve> draw_predictors(const FARProcess& process, std::size_t count, int burn_in, rng::Stream stream);

/// Monte-Carlo truth P(Y₁ ∈ A | Y₀ = x) with `mc` draws on the oracle stream.
double oracle_probability(const FARProcess& process, const Curve& x, const EventSet& event, std::size_t mc,
                          rng::Stream stream);

struct RMSEResult {
    std::vector<double> truth;  // per predictor
    /// rmse[size index][method index][predictor]
    std::vector<std::vector<std::vector<double>>> rmse;
    std::vector<std::vector<double>> median_rmse;  // [size][method]
    std::size_t fglm_degenerate = 0;  // replicates where one class was absent
};

RMSEResult run_rmse_experiment(const RMSEConfig& config);
ExperimentReport rmse_report(const RMSEConfig& config, const RMSEResult& result);

struct QuantileConfig {
    DGPSpec dgp = DGPSpec::synthetic();
    std::size_t n = 250;
    std::size_t predictors = 50;
    std::size_t reps = 100;
    double z = 0.5;
    /// Probability level; 0 means 1 − 1/n.
    double p = 0.0;
    std::size_t mc = 10000;
    std::size_t oracle_mc = 10000;
    TruncationRule truncation = TruncationRule::threshold_rule();
    int predictor_burn_in = 100;
    std::uint64_t seed = 0;
    unsigned threads = 0;
};

struct QuantileResult {
    double p = 0.0;
    std::vector<double> truth;       // α_p per predictor
    std::vector<double> rmse_boot;   // per predictor
    std::vector<double> rmse_gauss;  // per predictor
    std::vector<double> check_loss_boot;
    std::vector<double> check_loss_gauss;

    /// Fraction of predictors where gauss has the lower RMSE.
    [[nodiscard]] double gauss_win_fraction() const;
};

/**
 * α̂_p with P(λ(Y₁ > α_p) ≤ z | Y₀) = p over the level-threshold family, for
 * boot and gauss, against the oracle quantile. Check loss is evaluated on
 * a fresh draw of the statistic for each replicate.
 */
QuantileResult run_quantile_experiment(const QuantileConfig& config);
ExperimentReport quantile_report(const QuantileConfig& config, const QuantileResult& result);

}  // namespace fcd::harness
