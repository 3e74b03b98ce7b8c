#pragma once

#include <string>
#include <vector>

namespace mipt {

// Shortest representation that round-trips exactly through parse_double.
std::string format_double(double v);
double parse_double(const std::string& s);  // throws on trailing garbage

// Numeric CSV with a '#'-prefixed metadata block. Every cell is a double
// (missing observables are written as nan).
struct Table {
    std::vector<std::string> meta;     // header comment lines, without "# "
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    int col(const std::string& name) const;       // -1 when absent
    int col_required(const std::string& name) const;  // throws
    double at(std::size_t row, const std::string& name) const;

    static Table read_csv(const std::string& path);
    void write_csv(const std::string& path) const;
    std::string to_csv() const;

    // First "key=value" meta line matching key, else empty.
    std::string meta_value(const std::string& key) const;
};

}  // namespace mipt
