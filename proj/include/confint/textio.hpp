#pragma once

// CSV ingestion/emission and numeric text formatting. Dialect: comma
// separated, header required, UTF-8, '.' decimal separator. Machine output
// carries 12 significant digits.

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "confint/errors.hpp"
#include "confint/types.hpp"

namespace confint {

// 12-significant-digit decimal form; round-trips through strtod to the same
// double, so repeated write/read cycles are stable.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// The double nearest the 12-digit decimal form of v; applied to values bound
// for JSON output so the serializer never prints more digits.
inline double round12(double v) {
    return std::strtod(format_number(v).c_str(), nullptr);
}

inline std::string format_fixed2(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    cells.push_back(cur);
    return cells;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace detail

inline CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0)
            line.erase(0, 3); // UTF-8 BOM
        if (line.empty() && in.peek() == EOF) break; // trailing newline
        const auto cells = detail::split_csv_line(line);
        if (lineno == 1) {
            table.header = cells;
            if (table.header.empty() || (table.header.size() == 1 && table.header[0].empty()))
                throw parse_error("missing CSV header", 1, 0);
            continue;
        }
        if (cells.size() != table.header.size())
            throw parse_error("row has " + std::to_string(cells.size()) +
                                  " cells, header has " + std::to_string(table.header.size()),
                              lineno, 0);
        table.rows.push_back(cells);
    }
    if (table.header.empty()) throw parse_error("empty CSV input", 0, 0);
    return table;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    const std::string v = detail::trim(cell);
    if (v.empty()) throw parse_error("empty numeric cell", row, col);
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size())
        throw parse_error("cell '" + v + "' is not numeric", row, col);
    return d;
}

// Dataset CSV: required columns named x and y; every other column is a
// confounder. Row/column numbers in errors are 1-based file coordinates.
inline Dataset read_dataset_csv(std::istream& in) {
    const CsvTable table = read_csv(in);
    int x_col = -1, y_col = -1;
    std::vector<int> w_cols;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        const std::string name = detail::trim(table.header[c]);
        if (name == "x") x_col = int(c);
        else if (name == "y") y_col = int(c);
        else w_cols.push_back(int(c));
    }
    if (x_col < 0) throw parse_error("no column named 'x'", 1, 0);
    if (y_col < 0) throw parse_error("no column named 'y'", 1, 0);

    const auto n = Eigen::Index(table.rows.size());
    if (n == 0) throw parse_error("no data rows", 1, 0);
    Dataset d;
    d.x.resize(n);
    d.y.resize(n);
    d.w.resize(n, Eigen::Index(w_cols.size()));
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& row = table.rows[std::size_t(r)];
        const std::size_t file_row = std::size_t(r) + 2;
        d.x(r) = parse_cell(row[std::size_t(x_col)], file_row, std::size_t(x_col) + 1);
        d.y(r) = parse_cell(row[std::size_t(y_col)], file_row, std::size_t(y_col) + 1);
        for (std::size_t k = 0; k < w_cols.size(); ++k)
            d.w(r, Eigen::Index(k)) =
                parse_cell(row[std::size_t(w_cols[k])], file_row, std::size_t(w_cols[k]) + 1);
    }
    return d;
}

inline void write_dataset_csv(std::ostream& out, const Dataset& d) {
    out << "x,y";
    for (Eigen::Index c = 0; c < d.confounders(); ++c) out << ",w" << (c + 1);
    out << "\n";
    for (Eigen::Index r = 0; r < d.rows(); ++r) {
        out << format_number(d.x(r)) << ',' << format_number(d.y(r));
        for (Eigen::Index c = 0; c < d.confounders(); ++c)
            out << ',' << format_number(d.w(r, c));
        out << "\n";
    }
}

} // namespace confint
