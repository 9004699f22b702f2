#include "fcd/error.hpp"
#include "fcd/event_parse.hpp"
#include "fcd/events.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <limits>

using namespace fcd;
using fcd::testing::smooth_curve;

namespace {

std::vector<EventSet> sample_events(const Grid& g, rng::Stream& s) {
    const Curve gamma = smooth_curve(g, 4, s);
    const Curve w = Curve::constant(g, 0.7);
    return {EventSet::level(0.3, 0.4),
            EventSet::contrast(gamma, 0.1),
            EventSet::extremal(1.0),
            EventSet::excursion(0.0, 0.2),
            EventSet::boundary(-1.5, 1.5),
            EventSet::point_band(Curve::zero(g), w, w, 0.3),
            EventSet::uniform_band(Curve::zero(g), w, w),
            EventSet::custom([](std::span<const double> y) { return y[0] > 0; })};
}

}  // namespace

TEST(Contains, Examples) {
    const Grid g(100);
    EXPECT_FALSE(EventSet::level(50, 0.5).contains(Curve::constant(g, 60)));
    EXPECT_TRUE(EventSet::contrast(Curve::constant(g, 1), 0).contains(Curve::from_function(g, [](double t) { return t; })));
    EXPECT_FALSE(EventSet::extremal(1).contains(Curve::from_function(g, [](double t) { return t; })));
    EXPECT_TRUE(EventSet::extremal(0.99).contains(Curve::from_function(g, [](double t) { return t; })));
    EXPECT_TRUE(EventSet::excursion(0, 1).contains(Curve::constant(g, 1)));
    EXPECT_TRUE(EventSet::boundary(-std::numeric_limits<double>::infinity(), 1).contains(Curve::constant(g, 1)));
    EXPECT_FALSE(EventSet::boundary(1.5, 2).contains(Curve::constant(g, 1)));
    EXPECT_TRUE(EventSet::everything().contains(Curve::constant(g, 1e9)));
    EXPECT_FALSE(EventSet::nothing().contains(Curve::zero(g)));
    EXPECT_THROW((void)EventSet::extremal(std::numeric_limits<double>::quiet_NaN()), UsageError);
}

TEST(Contains, ComplementNegatesAndBandsNest) {
    const Grid g(50);
    rng::Stream s(6);
    const auto events = sample_events(g, s);
    const Curve zero = Curve::zero(g), w = Curve::constant(g, 0.7);
    for (int k = 0; k < 300; ++k) {
        const Curve y = smooth_curve(g, 6, s, 0.8);
        for (const EventSet& a : events) EXPECT_NE(EventSet::complement(a).contains(y), a.contains(y));
        if (EventSet::uniform_band(zero, w, w).contains(y)) {
            for (double at = 0; at <= 1; at += 0.05) EXPECT_TRUE(EventSet::point_band(zero, w, w, at).contains(y));
        }
        EXPECT_EQ(EventSet::complement(EventSet::complement(events[0])).contains(y), events[0].contains(y));
    }
}

TEST(Families, NestedInParameter) {
    const Grid g(50);
    rng::Stream s(10);
    const Curve gamma = smooth_curve(g, 3, s);
    std::vector<MonotoneFamily> families = {level_threshold_family(0.3), level_threshold_family(0.0), level_time_family(0.2),
                                            max_family(), contrast_family(gamma)};
    for (int k = 0; k < 100; ++k) {
        const Curve y = smooth_curve(g, 6, s);
        for (const MonotoneFamily& fam : families) {
            bool inside = false;
            for (int i = 0; i <= 40; ++i) {
                const double xi = fam.lower > -1e300 ? fam.lower + (fam.upper - fam.lower) * i / 40.0 : -3 + 6 * i / 40.0;
                const bool now = fam.at(xi).contains(y);
                EXPECT_TRUE(!inside || now) << fam.name << " at " << xi;
                inside = now;
                if (fam.statistic) {
                    EXPECT_EQ(now, fam.statistic(y.samples()) <= xi) << fam.name;
                }
            }
        }
    }
}

TEST(Families, LevelExamples) {
    const Grid g(100);
    rng::Stream s(12);
    for (int k = 0; k < 200; ++k) {
        const Curve y = smooth_curve(g, 6, s, 15.0);
        EXPECT_TRUE(!EventSet::level(0, 0.2).contains(y) || EventSet::level(0, 0.4).contains(y));
        EXPECT_TRUE(!EventSet::level(10, 0.3).contains(y) || EventSet::level(20, 0.3).contains(y));
        EXPECT_TRUE(!max_family().at(0.5).contains(y) || max_family().at(0.6).contains(y));
    }
}

TEST(Events, GridRefinementConverges) {
    // Grid exceedance of sin(2πt) above 0.5 approaches the exact measure 1/3.
    for (int d : {50, 100, 200, 400, 800, 1600}) {
        const Curve y = Curve::from_function(Grid(d), [](double t) { return std::sin(2 * std::numbers::pi * t); });
        EXPECT_LE(std::abs(exceedance_measure(y, 0.5) - 1.0 / 3.0), 2.0 / d);
    }
}

TEST(EventParse, KindsAndErrors) {
    EventParseContext ctx;
    ctx.grid = Grid(20);
    ctx.prediction = Curve::constant(ctx.grid, 2.0);
    const Curve y = Curve::constant(ctx.grid, 2.5);
    EXPECT_TRUE(parse_event("level:alpha=3,z=0", ctx).contains(y));
    EXPECT_TRUE(parse_event("contrast:gamma=1,a=2", ctx).contains(y));
    EXPECT_FALSE(parse_event("extremal:d=2.5", ctx).contains(y));
    EXPECT_TRUE(parse_event("excursion:d=2,c=1", ctx).contains(y));
    EXPECT_TRUE(parse_event("boundary:alpha=-inf,beta=3", ctx).contains(y));
    EXPECT_TRUE(parse_event("uniform_band:center=pred,a=1,b=0.5", ctx).contains(y));
    EXPECT_FALSE(parse_event("point_band:s=0.5,center=pred,a=1,b=0.25", ctx).contains(y));
    EXPECT_TRUE(parse_event("not:extremal:d=2.5", ctx).contains(y));
    ctx.load_curve = [&](const std::string& p) {
        if (p != "g.csv") throw ParseError("missing " + p);
        return Curve::constant(ctx.grid, 2.0);
    };
    EXPECT_TRUE(parse_event("contrast:gamma=@g.csv,a=4.9", ctx).contains(y));

    EXPECT_THROW((void)parse_event("level:alpha=1", ctx), ParseError);
    EXPECT_THROW((void)parse_event("level:alpha=x,z=1", ctx), ParseError);
    EXPECT_THROW((void)parse_event("level:alpha=1,z=1,q=2", ctx), ParseError);
    EXPECT_THROW((void)parse_event("wobble:d=1", ctx), ParseError);
    EXPECT_THROW((void)parse_event("extremal:d", ctx), ParseError);

    const MonotoneFamily fam = parse_family("level-alpha:z=0.5,lo=-4,hi=4", ctx);
    EXPECT_EQ(fam.lower, -4);
    EXPECT_EQ(fam.upper, 4);
    EXPECT_THROW((void)parse_family("max:lo=2,hi=1", ctx), ParseError);
    EXPECT_THROW((void)parse_family("nope", ctx), ParseError);
}
