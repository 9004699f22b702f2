#include "fcd/event_parse.hpp"

#include "fcd/error.hpp"
#include "fcd/harness/curve_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

namespace fcd {

namespace {

struct Spec {
    std::string kind;
    std::map<std::string, std::string, std::less<>> params;
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

Spec split_spec(std::string_view text) {
    Spec spec;
    const auto colon = text.find(':');
    spec.kind = trim(text.substr(0, colon));
    if (spec.kind.empty()) throw ParseError("event specification has no kind: '" + std::string(text) + "'");
    if (colon == std::string_view::npos) return spec;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ParseError("expected key=value in '" + std::string(item) + "'");
        std::string key = trim(item.substr(0, eq));
        if (spec.params.contains(key)) throw ParseError("duplicate key '" + key + "'");
        spec.params.emplace(std::move(key), trim(item.substr(eq + 1)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return spec;
}

double parse_number(const std::string& s, const std::string& key) {
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) throw ParseError("parameter '" + key + "' is not a number: '" + s + "'");
    return v;
}

class Params {
public:
    Params(const Spec& spec, const EventParseContext& ctx) : spec_(spec), ctx_(ctx) {}

    double number(const std::string& key) const { return parse_number(require(key), key); }
    double number_or(const std::string& key, double fallback) const {
        auto it = spec_.params.find(key);
        return it == spec_.params.end() ? fallback : parse_number(it->second, key);
    }

    Curve curve(const std::string& key) const {
        const std::string& v = require(key);
        if (v == "pred") {
            if (!ctx_.prediction) throw ParseError("'pred' is only available where a forecast exists (key '" + key + "')");
            return *ctx_.prediction;
        }
        if (!v.empty() && v.front() == '@') {
            Curve c = ctx_.load_curve ? ctx_.load_curve(v.substr(1)) : default_loader(v.substr(1));
            if (!(c.grid() == ctx_.grid)) throw StructuralError("curve '" + v.substr(1) + "' is on a different grid");
            return c;
        }
        return Curve::constant(ctx_.grid, parse_number(v, key));
    }

    void allow(std::initializer_list<std::string_view> keys) const {
        for (const auto& [k, _] : spec_.params) {
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
                throw ParseError("unknown key '" + k + "' for kind '" + spec_.kind + "'");
            }
        }
    }

private:
    const std::string& require(const std::string& key) const {
        auto it = spec_.params.find(key);
        if (it == spec_.params.end()) throw ParseError("kind '" + spec_.kind + "' needs parameter '" + key + "'");
        return it->second;
    }

    static Curve default_loader(const std::string& path) {
        auto curves = harness::load_curves(path);
        if (curves.empty()) throw ParseError("curve file '" + path + "' is empty");
        return curves.front();
    }

    const Spec& spec_;
    const EventParseContext& ctx_;
};

}  // namespace

EventSet parse_event(std::string_view text, const EventParseContext& ctx) {
    const std::string t = trim(text);
    for (std::string_view prefix : {"not:", "complement:"}) {
        if (t.starts_with(prefix)) return EventSet::complement(parse_event(std::string_view(t).substr(prefix.size()), ctx));
    }
    const Spec spec = split_spec(t);
    const Params p(spec, ctx);
    const std::string& k = spec.kind;
    if (k == "level") {
        p.allow({"alpha", "z"});
        return EventSet::level(p.number("alpha"), p.number("z"));
    }
    if (k == "contrast") {
        p.allow({"gamma", "a"});
        return EventSet::contrast(p.curve("gamma"), p.number("a"));
    }
    if (k == "extremal") {
        p.allow({"d"});
        return EventSet::extremal(p.number("d"));
    }
    if (k == "excursion") {
        p.allow({"d", "c"});
        return EventSet::excursion(p.number("d"), p.number("c"));
    }
    if (k == "boundary") {
        p.allow({"alpha", "beta"});
        return EventSet::boundary(p.number_or("alpha", -std::numeric_limits<double>::infinity()),
                                  p.number_or("beta", std::numeric_limits<double>::infinity()));
    }
    if (k == "uniform_band") {
        p.allow({"center", "a", "b"});
        return EventSet::uniform_band(p.curve("center"), p.curve("a"), p.curve("b"));
    }
    if (k == "point_band") {
        p.allow({"center", "a", "b", "s"});
        return EventSet::point_band(p.curve("center"), p.curve("a"), p.curve("b"), p.number("s"));
    }
    if (k == "everything") return EventSet::everything();
    if (k == "nothing") return EventSet::nothing();
    throw ParseError("unknown event kind '" + k + "'");
}

MonotoneFamily parse_family(std::string_view text, const EventParseContext& ctx) {
    const Spec spec = split_spec(trim(text));
    const Params p(spec, ctx);
    const std::string& k = spec.kind;
    MonotoneFamily fam;
    if (k == "level-alpha") {
        p.allow({"z", "lo", "hi"});
        fam = level_threshold_family(p.number("z"));
    } else if (k == "level-z") {
        p.allow({"alpha", "lo", "hi"});
        fam = level_time_family(p.number("alpha"));
    } else if (k == "max") {
        p.allow({"lo", "hi"});
        fam = max_family();
    } else if (k == "contrast") {
        p.allow({"gamma", "lo", "hi"});
        fam = contrast_family(p.curve("gamma"));
    } else {
        throw ParseError("unknown family kind '" + k + "'");
    }
    fam.lower = p.number_or("lo", fam.lower);
    fam.upper = p.number_or("hi", fam.upper);
    if (!(fam.lower < fam.upper)) throw ParseError("family range must satisfy lo < hi");
    return fam;
}

}  // namespace fcd
