#include "mipt/table.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mipt {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc{} || res.ptr != end)
        throw std::invalid_argument("not a number: '" + s + "'");
    return v;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

}  // namespace

int Table::col(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

int Table::col_required(const std::string& name) const {
    const int c = col(name);
    if (c < 0) throw std::invalid_argument("table is missing required column '" + name + "'");
    return c;
}

double Table::at(std::size_t row, const std::string& name) const {
    return rows.at(row).at(static_cast<std::size_t>(col_required(name)));
}

Table Table::read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    Table t;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty()) continue;
        if (s[0] == '#') {
            std::string body = trim(s.substr(1));
            t.meta.push_back(body);
            continue;
        }
        if (t.columns.empty()) {
            t.columns = split_csv_line(s);
            continue;
        }
        const std::vector<std::string> cells = split_csv_line(s);
        if (cells.size() != t.columns.size())
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(t.columns.size()) + " cells, got " +
                                     std::to_string(cells.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (std::size_t i = 0; i < cells.size(); ++i) {
            try {
                row.push_back(parse_double(cells[i]));
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(lineno) + ": column '" + t.columns[i] +
                                         "': not a number: '" + cells[i] + "'");
            }
        }
        t.rows.push_back(std::move(row));
    }
    if (t.columns.empty()) throw std::runtime_error(path + ": no header row found");
    return t;
}

std::string Table::to_csv() const {
    std::string out;
    for (const std::string& m : meta) {
        out += "# ";
        out += m;
        out += '\n';
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) out += ',';
        out += columns[i];
    }
    out += '\n';
    for (const std::vector<double>& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

void Table::write_csv(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << to_csv();
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

std::string Table::meta_value(const std::string& key) const {
    const std::string prefix = key + "=";
    for (const std::string& m : meta)
        if (m.rfind(prefix, 0) == 0) return m.substr(prefix.size());
    return "";
}

}  // namespace mipt
