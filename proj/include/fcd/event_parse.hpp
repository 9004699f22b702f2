#pragma once

#include "fcd/curves.hpp"
#include "fcd/events.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace fcd {

/// What the compact event syntax may refer to besides literal numbers.
struct EventParseContext {
    Grid grid{100};
    /// Resolves "@path" references to a curve. Defaults to the first row of a curve CSV.
    std::function<Curve(const std::string&)> load_curve;
    /// Value substituted for "pred" (band centers relative to the forecast).
    std::optional<Curve> prediction;
};

/**
 * Parses the compact event syntax, e.g.
 *
 *   level:alpha=50,z=0.5
 *   contrast:gamma=@file.csv,a=0.5
 *   excursion:d=0,c=0.25
 *   extremal:d=1
 *   boundary:alpha=-inf,beta=3
 *   uniform_band:center=pred,a=1,b=@upper.csv
 *   point_band:s=0.5,center=pred,a=1,b=1
 *   not:<event>
 *
 * Curve-valued parameters accept a number (constant curve), "@path" or "pred".
 */
EventSet parse_event(std::string_view text, const EventParseContext& ctx);

/// Families: "level-alpha:z=0.5", "level-z:alpha=50", "max", "contrast:gamma=@g.csv".
/// Optional "lo=" and "hi=" keys set the search range.
MonotoneFamily parse_family(std::string_view text, const EventParseContext& ctx);

}  // namespace fcd
