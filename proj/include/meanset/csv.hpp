#pragma once

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "meanset/errors.hpp"

namespace meanset {

// Minimal CSV handling: numeric files without headers, comma-separated.
// Parsing failures name the 1-based row (and column) so bad inputs are easy
// to locate.

inline std::vector<std::vector<double>> read_numeric_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw input_error("cannot open '" + path + "' for reading");
    }
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        // Skip blank lines (commonly a trailing newline).
        if (line.find_first_not_of(" \t") == std::string::npos) {
            continue;
        }
        std::vector<double> row;
        std::stringstream ss(line);
        std::string cell;
        std::size_t col = 0;
        while (std::getline(ss, cell, ',')) {
            ++col;
            const char* begin = cell.c_str();
            char* end = nullptr;
            errno = 0;
            const double value = std::strtod(begin, &end);
            // Reject empty cells and trailing garbage.
            while (end != nullptr && (*end == ' ' || *end == '\t')) ++end;
            if (end == begin || (end != nullptr && *end != '\0') || errno == ERANGE) {
                throw input_error(path + ": row " + std::to_string(lineno) + ", column " +
                                  std::to_string(col) + ": cannot parse '" + cell + "' as a number");
            }
            row.push_back(value);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

// Fixed shortest-roundtrip formatting for doubles, used everywhere a file is
// written, so identical runs produce byte-identical output.
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return std::string(buf);
}

}  // namespace meanset
