#pragma once

#include <hsbc/app/tables.hpp>

#include <json.hpp>

#include <ostream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace hsbc::app {

/// Pre-formatted cell; numeric cells become JSON numbers.
struct Cell {
    std::string text;
    bool numeric = false;
};

inline Cell num(double x, int decimals = 6) {
    auto s = fmt::format("{:.{}f}", x, decimals);
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return {std::move(s), true};
}

inline Cell num_g(double x) { return {fmt::format("{:.10g}", x), true}; }

inline Cell str(std::string s) { return {std::move(s), false}; }

/// Flat table of records for plot-ready output.
struct Records {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

inline void write_records(const Records &r, Format format, std::ostream &out) {
    switch (format) {
    case Format::csv: {
        for (std::size_t i = 0; i < r.columns.size(); ++i) fmt::print(out, "{}{}", i ? "," : "", r.columns[i]);
        fmt::print(out, "\n");
        for (const auto &row : r.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) fmt::print(out, "{}{}", i ? "," : "", row[i].text);
            fmt::print(out, "\n");
        }
        break;
    }
    case Format::markdown: {
        fmt::print(out, "|");
        for (const auto &c : r.columns) fmt::print(out, " {} |", c);
        fmt::print(out, "\n|");
        for (std::size_t i = 0; i < r.columns.size(); ++i) fmt::print(out, "---|");
        fmt::print(out, "\n");
        for (const auto &row : r.rows) {
            fmt::print(out, "|");
            for (const auto &c : row) fmt::print(out, " {} |", c.text);
            fmt::print(out, "\n");
        }
        break;
    }
    case Format::json: {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto &row : r.rows) {
            nlohmann::json o = nlohmann::json::object();
            for (std::size_t i = 0; i < row.size() && i < r.columns.size(); ++i)
                o[r.columns[i]] = row[i].numeric ? nlohmann::json(std::stod(row[i].text)) : nlohmann::json(row[i].text);
            arr.push_back(std::move(o));
        }
        out << arr.dump(2) << '\n';
        break;
    }
    }
}

} // namespace hsbc::app
