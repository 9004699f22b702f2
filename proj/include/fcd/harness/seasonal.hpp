#pragma once

#include "fcd/curves.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <vector>

namespace fcd::harness {

/**
 * Z_t = Z^(Y)_t + Z^(W)_t + Z̃_t.
 *
 * Z^(W) is the per-weekday mean curve, centered so that the seven weekday
 * means average to zero. Z^(Y) is the per-day-of-year mean of Z − Z^(W),
 * smoothed by a circular rolling mean over the 366 day-of-year slots (empty
 * slots are skipped). Without the weekly part, Z^(Y) is computed from Z.
 */
class SeasonalModel {
public:
    /// Day of year is 1..366, day of week 0..6. `train` selects the rows used for fitting (default: all).
    static SeasonalModel fit(const std::vector<Curve>& series, const std::vector<int>& day_of_year,
                             const std::vector<int>& day_of_week, int window = 21, bool weekly = true,
                             const std::vector<bool>& train = {});

    [[nodiscard]] Curve component(int day_of_year, int day_of_week) const;
    [[nodiscard]] Curve yearly(int day_of_year) const;
    [[nodiscard]] Curve weekly(int day_of_week) const;
    [[nodiscard]] bool has_weekly() const noexcept { return weekly_; }

    [[nodiscard]] std::vector<Curve> remove(const std::vector<Curve>& series, const std::vector<int>& day_of_year,
                                            const std::vector<int>& day_of_week) const;
    [[nodiscard]] std::vector<Curve> restore(const std::vector<Curve>& residuals, const std::vector<int>& day_of_year,
                                             const std::vector<int>& day_of_week) const;

private:
    SeasonalModel(Grid grid) : grid_(std::move(grid)) {}

    Grid grid_;
    bool weekly_ = true;
    std::array<Eigen::VectorXd, 7> weekday_;
    std::vector<Eigen::VectorXd> yearly_;  // 366 slots, index doy−1
};

std::vector<Curve> deseasonalize(const std::vector<Curve>& series, const std::vector<int>& day_of_year,
                                 const std::vector<int>& day_of_week, int window = 21, bool weekly = true);

/// Calendar of consecutive days from a civil start date: day of year 1..366, day of week 0 = Monday.
struct Calendar {
    std::vector<int> year;
    std::vector<int> month;
    std::vector<int> day_of_year;
    std::vector<int> day_of_week;
};

Calendar consecutive_days(int year, int month, int day, std::size_t count);

}  // namespace fcd::harness
