#pragma once

#include "fcd/curves.hpp"

#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <variant>

namespace fcd {

// Event kinds. Inequalities follow each definition literally:
//   level      λ(t : y(t) > alpha) ≤ z
//   contrast   ⟨gamma, y⟩ > a
//   extremal   max_t y(t) > d
//   excursion  longest run strictly above d lasts ≥ c
//   boundary   alpha ≤ y(t) ≤ beta for all t (bounds may be infinite)
//   bands      center − a ≤ y ≤ center + b, at one point or on the whole grid

struct LevelEvent {
    double alpha;
    double z;
};

struct ContrastEvent {
    Curve gamma;
    double a;
};

struct ExtremalEvent {
    double d;
};

struct ExcursionEvent {
    double d;
    double c;
};

struct BoundaryEvent {
    double alpha;
    double beta;
};

struct PointBandEvent {
    Curve center;
    Curve lower_width;  // a
    Curve upper_width;  // b
    double s;
};

struct UniformBandEvent {
    Curve center;
    Curve lower_width;
    Curve upper_width;
};

class EventSet;

struct ComplementEvent {
    std::shared_ptr<const EventSet> inner;
};

struct CustomEvent {
    std::function<bool(std::span<const double>)> predicate;
    std::string name;
};

/// A deterministic membership predicate over curves.
class EventSet {
public:
    using Variant = std::variant<LevelEvent, ContrastEvent, ExtremalEvent, ExcursionEvent, BoundaryEvent,
                                 PointBandEvent, UniformBandEvent, ComplementEvent, CustomEvent>;

    static EventSet level(double alpha, double z);
    static EventSet contrast(Curve gamma, double a);
    static EventSet extremal(double d);
    static EventSet excursion(double d, double c);
    static EventSet boundary(double alpha, double beta);
    static EventSet point_band(Curve center, Curve lower_width, Curve upper_width, double s);
    static EventSet uniform_band(Curve center, Curve lower_width, Curve upper_width);
    static EventSet complement(EventSet inner);
    static EventSet custom(std::function<bool(std::span<const double>)> predicate, std::string name = "custom");
    /// The whole space (complement of an empty boundary set).
    static EventSet everything();
    /// The empty set.
    static EventSet nothing();

    [[nodiscard]] bool contains(const Curve& y) const;
    /// Membership of raw samples on `grid`; avoids building a Curve in hot loops.
    [[nodiscard]] bool contains(std::span<const double> values, const Grid& grid) const;

    [[nodiscard]] const Variant& kind() const noexcept { return kind_; }
    [[nodiscard]] std::string describe() const;

private:
    explicit EventSet(Variant v) : kind_(std::move(v)) {}
    Variant kind_;
};

[[nodiscard]] inline bool contains(const EventSet& a, const Curve& y) { return a.contains(y); }

/**
 * One-parameter family ξ ↦ A_ξ, nested in ξ.
 *
 * When `statistic` is set the family is A_ξ = {y : T(y) ≤ ξ} for that T
 * (increasing), which lets quantile searches use order statistics instead of
 * bisection.
 */
struct MonotoneFamily {
    enum class Direction { increasing, decreasing };

    std::function<EventSet(double)> generator;
    double lower = -std::numeric_limits<double>::infinity();
    double upper = std::numeric_limits<double>::infinity();
    Direction direction = Direction::increasing;
    std::function<double(std::span<const double>)> statistic;
    std::string name;

    [[nodiscard]] EventSet at(double xi) const { return generator(xi); }
};

/// {λ(y > ξ) ≤ z}: level sets swept over the threshold, increasing in ξ.
MonotoneFamily level_threshold_family(double z);
/// {λ(y > alpha) ≤ ξ}: level sets swept over the time budget, increasing in ξ ∈ [0,1].
MonotoneFamily level_time_family(double alpha);
/// {max y ≤ ξ}: complement of extremal sets, increasing in ξ.
MonotoneFamily max_family();
/// {⟨gamma, y⟩ ≤ ξ}: complement of contrast sets, increasing in ξ.
MonotoneFamily contrast_family(Curve gamma);
/// User family. The caller asserts the direction; it is not verified.
MonotoneFamily custom_family(std::function<EventSet(double)> generator, double lower, double upper,
                             MonotoneFamily::Direction asserted);

/// Largest grid count c with c/(D+1) ≤ z, i.e. the number of exceedances a level set tolerates.
std::size_t level_tolerance(double z, std::size_t points);

}  // namespace fcd
