#pragma once

#include "fcd/curves.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace fcd::harness {

/**
 * Curve CSV: a header row with the D+1 grid points, then one row per curve.
 * Values are written in shortest round-trip form, so load(save(c)) == c bit
 * for bit. An empty file loads as an empty list.
 */
std::vector<Curve> load_curves(const std::string& path);
std::vector<Curve> read_curves(std::istream& in);
void save_curves(const std::vector<Curve>& curves, const std::string& path);
void write_curves(const std::vector<Curve>& curves, std::ostream& out);

/// A plain numeric table with a header (scalar covariates, calendar columns, ...).
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    [[nodiscard]] std::size_t column(const std::string& name) const;
};

Table load_table(const std::string& path);
Table read_table(std::istream& in);
void write_table(const Table& table, std::ostream& out);
void save_table(const Table& table, const std::string& path);

/// Shortest decimal string that parses back to exactly x.
std::string format_double(double x);

}  // namespace fcd::harness
