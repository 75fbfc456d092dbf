#pragma once

#include <hsbc/error.hpp>
#include <hsbc/ions.hpp>
#include <hsbc/solvents.hpp>

#include <array>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hsbc {

enum class Quantity { dG_expt, dG_born, dG_msa, dG_hsbc, dS_expt, dS_born, dS_msa, dS_hsbc };

inline constexpr std::array<Quantity, 8> all_quantities = {
    Quantity::dG_expt, Quantity::dG_born, Quantity::dG_msa, Quantity::dG_hsbc,
    Quantity::dS_expt, Quantity::dS_born, Quantity::dS_msa, Quantity::dS_hsbc};

inline std::string_view to_string(Quantity q) {
    switch (q) {
    case Quantity::dG_expt: return "dG_expt";
    case Quantity::dG_born: return "dG_born";
    case Quantity::dG_msa: return "dG_msa";
    case Quantity::dG_hsbc: return "dG_hsbc";
    case Quantity::dS_expt: return "dS_expt";
    case Quantity::dS_born: return "dS_born";
    case Quantity::dS_msa: return "dS_msa";
    case Quantity::dS_hsbc: return "dS_hsbc";
    }
    return "?";
}

/// kJ/mol for dG_*, J/(mol K) for dS_*.
inline std::string_view unit_of(Quantity q) {
    return static_cast<int>(q) < 4 ? "kJ/mol" : "J/(mol K)";
}

struct ReferenceRow {
    std::string ion;
    std::string solvent;
    Quantity quantity = Quantity::dG_expt;
    std::optional<double> value; // empty when the source marks the cell N/R

    bool not_reported() const noexcept { return !value.has_value(); }
};

class ReferenceTable {
public:
    void add(ReferenceRow row) {
        if (find(row.ion, row.solvent, row.quantity))
            throw ValidationError("duplicate reference entry " + row.ion + "/" + row.solvent + "/" +
                                  std::string(to_string(row.quantity)));
        rows_.push_back(std::move(row));
    }

    const ReferenceRow *find(std::string_view ion, std::string_view solvent, Quantity q) const {
        for (const auto &r : rows_)
            if (r.quantity == q && r.ion == ion && r.solvent == solvent) return &r;
        return nullptr;
    }

    /// Value if present and reported.
    std::optional<double> value(std::string_view ion, std::string_view solvent, Quantity q) const {
        const auto *r = find(ion, solvent, q);
        return r ? r->value : std::nullopt;
    }

    void merge(const ReferenceTable &other) {
        for (const auto &r : other.rows_) add(r);
    }

    const std::vector<ReferenceRow> &rows() const noexcept { return rows_; }
    std::size_t size() const noexcept { return rows_.size(); }
    bool empty() const noexcept { return rows_.empty(); }

private:
    std::vector<ReferenceRow> rows_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(trim(line.substr(start, pos == std::string_view::npos ? pos : pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

inline std::optional<double> parse_number(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

} // namespace detail

inline constexpr std::string_view reference_csv_header =
    "ion,solvent,dG_expt,dG_born,dG_msa,dG_hsbc,dS_expt,dS_born,dS_msa,dS_hsbc";

/// Reads one reference CSV (see reference_csv_header). Each data line yields
/// eight rows, one per quantity; `N/R` cells become not-reported rows.
inline ReferenceTable load_reference(const std::filesystem::path &path,
                                     const SolventRegistry &solvents = {}) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open reference file " + path.string());
    const auto ions = builtin_ion_set();
    auto known_ion = [&](std::string_view n) {
        for (const auto &i : ions)
            if (i.name == n) return true;
        return false;
    };

    ReferenceTable table;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = detail::trim(line);
        if (lineno == 1 && view.size() >= 3 && view.substr(0, 3) == "\xEF\xBB\xBF") view.remove_prefix(3);
        if (view.empty()) continue;
        if (!header_seen) {
            if (view != reference_csv_header)
                throw ParseError("reference CSV: unexpected header '" + std::string(view) + "'", lineno);
            header_seen = true;
            continue;
        }
        const auto cells = detail::split_csv(view);
        if (cells.size() != 10)
            throw ParseError("reference CSV: expected 10 fields, got " + std::to_string(cells.size()), lineno);
        const std::string ion(cells[0]), solvent(cells[1]);
        if (!known_ion(ion)) throw ValidationError("reference CSV: unknown ion '" + ion + "'");
        if (!solvents.find(solvent)) throw ValidationError("reference CSV: unknown solvent '" + solvent + "'");
        for (std::size_t k = 0; k < all_quantities.size(); ++k) {
            const auto cell = cells[k + 2];
            ReferenceRow row{ion, solvent, all_quantities[k], std::nullopt};
            if (cell != "N/R") {
                row.value = detail::parse_number(cell);
                if (!row.value)
                    throw ParseError("reference CSV: bad number '" + std::string(cell) + "'", lineno);
            }
            table.add(std::move(row));
        }
    }
    return table;
}

} // namespace hsbc
