#include "fcd/harness/curve_io.hpp"

#include "fcd/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace fcd::harness {

std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc{}) throw UsageError("cannot format number");
    return {buf, ptr};
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    double v = 0.0;
    const char* first = cell.data();
    const char* last = first + cell.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (cell.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        throw ParseError("non-numeric cell '" + cell + "'", row, col);
    }
    return v;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

// Header plus numeric rows, all of the header's width.
Table read_numeric(std::istream& in, bool numeric_header) {
    Table t;
    std::string line;
    std::size_t row = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++row;
        if (blank(line)) continue;
        auto cells = split_line(line);
        if (!have_header) {
            if (numeric_header) {
                for (std::size_t c = 0; c < cells.size(); ++c) parse_cell(cells[c], row, c + 1);
            }
            t.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != t.header.size()) {
            throw ParseError("ragged row: expected " + std::to_string(t.header.size()) + " columns, found " +
                                 std::to_string(cells.size()),
                             row, std::min(cells.size(), t.header.size()) + 1);
        }
        std::vector<double> values(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) values[c] = parse_cell(cells[c], row, c + 1);
        t.rows.push_back(std::move(values));
    }
    return t;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::vector<Curve> read_curves(std::istream& in) {
    const Table t = read_numeric(in, true);
    std::vector<Curve> curves;
    if (t.header.empty()) return curves;
    if (t.header.size() < 3) throw ParseError("a curve file needs at least 3 grid columns", 1);
    const Grid grid(static_cast<int>(t.header.size()) - 1);
    for (std::size_t c = 0; c < t.header.size(); ++c) {
        const double s = parse_cell(t.header[c], 1, c + 1);
        if (std::abs(s - grid.point(c)) > 1e-9) {
            throw ParseError("header is not the uniform grid i/D", 1, c + 1);
        }
    }
    curves.reserve(t.rows.size());
    for (const auto& r : t.rows) curves.emplace_back(grid, Eigen::Map<const Eigen::VectorXd>(r.data(), static_cast<Eigen::Index>(r.size())));
    return curves;
}

std::vector<Curve> load_curves(const std::string& path) {
    auto in = open_in(path);
    return read_curves(in);
}

void write_curves(const std::vector<Curve>& curves, std::ostream& out) {
    if (curves.empty()) return;
    const Grid& grid = curves.front().grid();
    for (std::size_t i = 0; i < grid.size(); ++i) out << (i ? "," : "") << format_double(grid.point(i));
    out << '\n';
    for (const auto& c : curves) {
        if (!(c.grid() == grid)) throw StructuralError("curves to save do not share one grid");
        for (std::size_t i = 0; i < c.size(); ++i) out << (i ? "," : "") << format_double(c[i]);
        out << '\n';
    }
}

void save_curves(const std::vector<Curve>& curves, const std::string& path) {
    auto out = open_out(path);
    write_curves(curves, out);
}

std::size_t Table::column(const std::string& name) const {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw UsageError("table has no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
}

Table read_table(std::istream& in) { return read_numeric(in, false); }

Table load_table(const std::string& path) {
    auto in = open_in(path);
    return read_table(in);
}

void write_table(const Table& table, std::ostream& out) {
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
        out << '\n';
    }
}

void save_table(const Table& table, const std::string& path) {
    auto out = open_out(path);
    write_table(table, out);
}

}  // namespace fcd::harness
