#include "fcd/events.hpp"

#include "fcd/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace fcd {

namespace {

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw UsageError(std::string(what) + " must be finite");
}

void require_grid(const Curve& c, const Grid& grid, const char* what) {
    if (!(c.grid() == grid)) throw StructuralError(std::string(what) + " is on a different grid than the tested curve");
}

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

EventSet EventSet::level(double alpha, double z) {
    require_finite(alpha, "level threshold");
    require_finite(z, "level time budget");
    return EventSet(LevelEvent{alpha, z});
}

EventSet EventSet::contrast(Curve gamma, double a) {
    require_finite(a, "contrast level");
    return EventSet(ContrastEvent{std::move(gamma), a});
}

EventSet EventSet::extremal(double d) {
    require_finite(d, "extremal threshold");
    return EventSet(ExtremalEvent{d});
}

EventSet EventSet::excursion(double d, double c) {
    require_finite(d, "excursion threshold");
    require_finite(c, "excursion duration");
    return EventSet(ExcursionEvent{d, c});
}

EventSet EventSet::boundary(double alpha, double beta) {
    if (std::isnan(alpha) || std::isnan(beta)) throw UsageError("boundary bounds must not be NaN");
    return EventSet(BoundaryEvent{alpha, beta});
}

EventSet EventSet::point_band(Curve center, Curve lower_width, Curve upper_width, double s) {
    if (!(center.grid() == lower_width.grid()) || !(center.grid() == upper_width.grid())) {
        throw StructuralError("band curves must share one grid");
    }
    if (!(s >= 0.0 && s <= 1.0)) throw UsageError("band location must lie in [0,1]");
    return EventSet(PointBandEvent{std::move(center), std::move(lower_width), std::move(upper_width), s});
}

EventSet EventSet::uniform_band(Curve center, Curve lower_width, Curve upper_width) {
    if (!(center.grid() == lower_width.grid()) || !(center.grid() == upper_width.grid())) {
        throw StructuralError("band curves must share one grid");
    }
    return EventSet(UniformBandEvent{std::move(center), std::move(lower_width), std::move(upper_width)});
}

EventSet EventSet::complement(EventSet inner) {
    return EventSet(ComplementEvent{std::make_shared<const EventSet>(std::move(inner))});
}

EventSet EventSet::custom(std::function<bool(std::span<const double>)> predicate, std::string name) {
    if (!predicate) throw UsageError("custom event needs a predicate");
    return EventSet(CustomEvent{std::move(predicate), std::move(name)});
}

EventSet EventSet::nothing() {
    const double inf = std::numeric_limits<double>::infinity();
    return boundary(inf, -inf);
}

EventSet EventSet::everything() { return complement(nothing()); }

bool EventSet::contains(const Curve& y) const { return contains(y.samples(), y.grid()); }

bool EventSet::contains(std::span<const double> y, const Grid& grid) const {
    if (y.size() != grid.size()) throw StructuralError("sample count does not match the grid");
    return std::visit(
        overloaded{
            [&](const LevelEvent& e) { return exceedance_measure(y, e.alpha) <= e.z; },
            [&](const ContrastEvent& e) {
                require_grid(e.gamma, grid, "contrast function");
                const auto& w = grid.weights();
                const auto& g = e.gamma.values();
                double acc = 0.0;
                for (std::size_t i = 0; i < y.size(); ++i) {
                    const auto ii = static_cast<Eigen::Index>(i);
                    acc += w[ii] * g[ii] * y[i];
                }
                return acc > e.a;
            },
            [&](const ExtremalEvent& e) { return *std::max_element(y.begin(), y.end()) > e.d; },
            [&](const ExcursionEvent& e) { return longest_excursion(y, e.d) >= e.c; },
            [&](const BoundaryEvent& e) {
                return std::all_of(y.begin(), y.end(), [&](double v) { return v >= e.alpha && v <= e.beta; });
            },
            [&](const PointBandEvent& e) {
                require_grid(e.center, grid, "band center");
                const std::size_t i = grid.nearest_index(e.s);
                return y[i] >= e.center[i] - e.lower_width[i] && y[i] <= e.center[i] + e.upper_width[i];
            },
            [&](const UniformBandEvent& e) {
                require_grid(e.center, grid, "band center");
                for (std::size_t i = 0; i < y.size(); ++i) {
                    if (y[i] < e.center[i] - e.lower_width[i] || y[i] > e.center[i] + e.upper_width[i]) return false;
                }
                return true;
            },
            [&](const ComplementEvent& e) { return !e.inner->contains(y, grid); },
            [&](const CustomEvent& e) { return e.predicate(y); },
        },
        kind_);
}

std::string EventSet::describe() const {
    std::ostringstream os;
    os.precision(17);
    std::visit(overloaded{
                   [&](const LevelEvent& e) { os << "level:alpha=" << e.alpha << ",z=" << e.z; },
                   [&](const ContrastEvent& e) { os << "contrast:a=" << e.a; },
                   [&](const ExtremalEvent& e) { os << "extremal:d=" << e.d; },
                   [&](const ExcursionEvent& e) { os << "excursion:d=" << e.d << ",c=" << e.c; },
                   [&](const BoundaryEvent& e) { os << "boundary:alpha=" << e.alpha << ",beta=" << e.beta; },
                   [&](const PointBandEvent& e) { os << "point_band:s=" << e.s; },
                   [&](const UniformBandEvent&) { os << "uniform_band"; },
                   [&](const ComplementEvent& e) { os << "not:" << e.inner->describe(); },
                   [&](const CustomEvent& e) { os << "custom:" << e.name; },
               },
               kind_);
    return os.str();
}

std::size_t level_tolerance(double z, std::size_t points) {
    // Same floating-point comparison as exceedance_measure(...) <= z.
    std::size_t c = 0;
    while (c < points && static_cast<double>(c + 1) / static_cast<double>(points) <= z) ++c;
    if (static_cast<double>(c) / static_cast<double>(points) > z) {
        throw UsageError("level time budget is negative: no curve qualifies");
    }
    return c;
}

MonotoneFamily level_threshold_family(double z) {
    if (!(z >= 0.0)) throw UsageError("level time budget must be nonnegative");
    MonotoneFamily fam;
    fam.generator = [z](double xi) { return EventSet::level(xi, z); };
    fam.direction = MonotoneFamily::Direction::increasing;
    // λ(y > ξ) ≤ z  ⇔  at most K points exceed ξ  ⇔  ξ ≥ (K+1)-th largest sample.
    fam.statistic = [z](std::span<const double> y) {
        const std::size_t k = level_tolerance(z, y.size());
        if (k >= y.size()) return -std::numeric_limits<double>::infinity();
        std::vector<double> v(y.begin(), y.end());
        std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end(), std::greater<>());
        return v[k];
    };
    fam.name = "level-alpha";
    return fam;
}

MonotoneFamily level_time_family(double alpha) {
    require_finite(alpha, "level threshold");
    MonotoneFamily fam;
    fam.generator = [alpha](double xi) { return EventSet::level(alpha, xi); };
    fam.lower = 0.0;
    fam.upper = 1.0;
    fam.statistic = [alpha](std::span<const double> y) { return exceedance_measure(y, alpha); };
    fam.name = "level-z";
    return fam;
}

MonotoneFamily max_family() {
    MonotoneFamily fam;
    fam.generator = [](double xi) { return EventSet::complement(EventSet::extremal(xi)); };
    fam.statistic = [](std::span<const double> y) { return *std::max_element(y.begin(), y.end()); };
    fam.name = "max";
    return fam;
}

MonotoneFamily contrast_family(Curve gamma) {
    MonotoneFamily fam;
    fam.generator = [gamma](double xi) { return EventSet::complement(EventSet::contrast(gamma, xi)); };
    fam.statistic = [gamma](std::span<const double> y) {
        if (y.size() != gamma.size()) throw StructuralError("contrast function is on a different grid");
        const auto& w = gamma.grid().weights();
        double acc = 0.0;
        for (std::size_t i = 0; i < y.size(); ++i) acc += w[static_cast<Eigen::Index>(i)] * gamma[i] * y[i];
        return acc;
    };
    fam.name = "contrast";
    return fam;
}

MonotoneFamily custom_family(std::function<EventSet(double)> generator, double lower, double upper,
                             MonotoneFamily::Direction asserted) {
    if (!generator) throw UsageError("custom family needs a generator");
    if (!(lower < upper)) throw UsageError("family range must satisfy lower < upper");
    MonotoneFamily fam;
    fam.generator = std::move(generator);
    fam.lower = lower;
    fam.upper = upper;
    fam.direction = asserted;
    fam.name = "custom";
    return fam;
}

}  // namespace fcd
