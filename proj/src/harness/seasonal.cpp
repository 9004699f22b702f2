#include "fcd/harness/seasonal.hpp"

#include "fcd/error.hpp"

#include <chrono>

namespace fcd::harness {

namespace {

void check_alignment(const std::vector<Curve>& series, const std::vector<int>& doy, const std::vector<int>& dow) {
    if (doy.size() != series.size() || dow.size() != series.size()) {
        throw UsageError("calendar indices are not aligned with the series");
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (doy[i] < 1 || doy[i] > 366) throw UsageError("day of year must lie in 1..366");
        if (dow[i] < 0 || dow[i] > 6) throw UsageError("day of week must lie in 0..6");
        if (!(series[i].grid() == series.front().grid())) throw StructuralError("series curves do not share one grid");
    }
}

}  // namespace

SeasonalModel SeasonalModel::fit(const std::vector<Curve>& series, const std::vector<int>& day_of_year,
                                 const std::vector<int>& day_of_week, int window, bool weekly,
                                 const std::vector<bool>& train) {
    if (series.empty()) throw UsageError("cannot deseasonalize an empty series");
    check_alignment(series, day_of_year, day_of_week);
    if (!train.empty() && train.size() != series.size()) throw UsageError("training mask is not aligned with the series");
    if (window < 1) throw UsageError("rolling window must be >= 1");
    auto used = [&](std::size_t i) { return train.empty() || train[i]; };

    SeasonalModel model(series.front().grid());
    model.weekly_ = weekly;
    const auto m = static_cast<Eigen::Index>(model.grid_.size());

    for (auto& w : model.weekday_) w = Eigen::VectorXd::Zero(m);
    if (weekly) {
        std::array<int, 7> counts{};
        for (std::size_t i = 0; i < series.size(); ++i) {
            if (!used(i)) continue;
            model.weekday_[static_cast<std::size_t>(day_of_week[i])] += series[i].values();
            ++counts[static_cast<std::size_t>(day_of_week[i])];
        }
        Eigen::VectorXd grand = Eigen::VectorXd::Zero(m);
        for (std::size_t d = 0; d < 7; ++d) {
            if (counts[d] == 0) throw DegenerateInputError("weekday " + std::to_string(d) + " has no training days");
            model.weekday_[d] /= counts[d];
            grand += model.weekday_[d];
        }
        grand /= 7.0;
        for (auto& w : model.weekday_) w -= grand;
    }

    std::vector<Eigen::VectorXd> sums(366, Eigen::VectorXd::Zero(m));
    std::vector<int> counts(366, 0);
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!used(i)) continue;
        const auto slot = static_cast<std::size_t>(day_of_year[i] - 1);
        sums[slot] += series[i].values() - model.weekday_[static_cast<std::size_t>(day_of_week[i])];
        ++counts[slot];
    }
    Eigen::VectorXd overall = Eigen::VectorXd::Zero(m);
    int filled = 0;
    for (std::size_t s = 0; s < 366; ++s) {
        if (counts[s] == 0) continue;
        sums[s] /= counts[s];
        overall += sums[s];
        ++filled;
    }
    if (filled == 0) throw DegenerateInputError("no training days to estimate the yearly component");
    overall /= filled;

    const int half = window / 2;
    model.yearly_.assign(366, Eigen::VectorXd::Zero(m));
    for (int s = 0; s < 366; ++s) {
        Eigen::VectorXd acc = Eigen::VectorXd::Zero(m);
        int n = 0;
        for (int o = -half; o <= window - 1 - half; ++o) {
            const auto slot = static_cast<std::size_t>(((s + o) % 366 + 366) % 366);
            if (counts[slot] == 0) continue;
            acc += sums[slot];
            ++n;
        }
        model.yearly_[static_cast<std::size_t>(s)] = n > 0 ? Eigen::VectorXd(acc / n) : overall;
    }
    return model;
}

Curve SeasonalModel::yearly(int day_of_year) const {
    if (day_of_year < 1 || day_of_year > 366) throw UsageError("day of year must lie in 1..366");
    return Curve(grid_, yearly_[static_cast<std::size_t>(day_of_year - 1)]);
}

Curve SeasonalModel::weekly(int day_of_week) const {
    if (day_of_week < 0 || day_of_week > 6) throw UsageError("day of week must lie in 0..6");
    return Curve(grid_, weekday_[static_cast<std::size_t>(day_of_week)]);
}

Curve SeasonalModel::component(int day_of_year, int day_of_week) const {
    return yearly(day_of_year) + weekly(day_of_week);
}

std::vector<Curve> SeasonalModel::remove(const std::vector<Curve>& series, const std::vector<int>& day_of_year,
                                         const std::vector<int>& day_of_week) const {
    check_alignment(series, day_of_year, day_of_week);
    std::vector<Curve> out;
    out.reserve(series.size());
    for (std::size_t i = 0; i < series.size(); ++i) {
        if (!(series[i].grid() == grid_)) throw StructuralError("series grid differs from the fitted seasonal grid");
        out.push_back(series[i] - component(day_of_year[i], day_of_week[i]));
    }
    return out;
}

std::vector<Curve> SeasonalModel::restore(const std::vector<Curve>& residuals, const std::vector<int>& day_of_year,
                                          const std::vector<int>& day_of_week) const {
    check_alignment(residuals, day_of_year, day_of_week);
    std::vector<Curve> out;
    out.reserve(residuals.size());
    for (std::size_t i = 0; i < residuals.size(); ++i) out.push_back(residuals[i] + component(day_of_year[i], day_of_week[i]));
    return out;
}

std::vector<Curve> deseasonalize(const std::vector<Curve>& series, const std::vector<int>& day_of_year,
                                 const std::vector<int>& day_of_week, int window, bool weekly) {
    return SeasonalModel::fit(series, day_of_year, day_of_week, window, weekly).remove(series, day_of_year, day_of_week);
}

Calendar consecutive_days(int year, int month, int day, std::size_t count) {
    using namespace std::chrono;
    const year_month_day start{std::chrono::year{year}, std::chrono::month{static_cast<unsigned>(month)},
                               std::chrono::day{static_cast<unsigned>(day)}};
    if (!start.ok()) throw UsageError("invalid start date");
    Calendar cal;
    sys_days d{start};
    for (std::size_t i = 0; i < count; ++i, d += days{1}) {
        const year_month_day ymd{d};
        const sys_days jan1{ymd.year() / January / 1};
        cal.year.push_back(static_cast<int>(ymd.year()));
        cal.month.push_back(static_cast<int>(static_cast<unsigned>(ymd.month())));
        cal.day_of_year.push_back(static_cast<int>((d - jan1).count()) + 1);
        cal.day_of_week.push_back(static_cast<int>(weekday{d}.iso_encoding()) - 1);
    }
    return cal;
}

}  // namespace fcd::harness
