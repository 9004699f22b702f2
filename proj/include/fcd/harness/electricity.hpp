#pragma once

#include "fcd/curves.hpp"
#include "fcd/harness/experiments.hpp"

#include <cstdint>
#include <vector>

namespace fcd::harness {

struct EntropyConfig {
    /// Civil date of the first curve; curves are consecutive days.
    int start_year = 2014;
    int start_month = 1;
    int start_day = 1;
    std::vector<double> alphas{30, 35, 40, 45, 50, 55, 60, 65, 70};
    std::vector<double> zs{0.0, 1.0 / 6, 2.0 / 6, 3.0 / 6, 4.0 / 6, 5.0 / 6};
    std::size_t test_months_per_year = 4;
    std::size_t order = 7;
    double pve = 0.98;
    int window = 21;
    std::uint64_t seed = 0;
};

struct EntropyInputs {
    std::vector<Curve> price;
    std::vector<Curve> demand;
    std::vector<Curve> wind;
};

struct EntropyResult {
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    int truncation = 0;
    struct Cell {
        double alpha;
        double z;
        double boot;
        double glm;
        double nw;
        double positive_rate;  // share of test curves inside the set
    };
    std::vector<Cell> cells;
};

/**
 * Test months are drawn at random (seeded) per calendar year; each series is
 * deseasonalized with components fitted on training days; a FARX(order) model
 * with same-day demand and wind is fitted on pairs whose response day is a
 * training day. Level sets {λ(Y > α) ≤ z} are evaluated on prices with the
 * seasonal component restored, and each method's test cross-entropy is
 * reported per (α, z).
 */
EntropyResult run_entropy_evaluation(const EntropyInputs& inputs, const EntropyConfig& config);
ExperimentReport entropy_report(const EntropyConfig& config, const EntropyResult& result);

/// Months (1..12) assigned to the test set for each distinct year in `years`.
std::vector<bool> test_mask(const std::vector<int>& years, const std::vector<int>& months, std::size_t per_year,
                            std::uint64_t seed);

}  // namespace fcd::harness
