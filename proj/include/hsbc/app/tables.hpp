#pragma once

#include <hsbc/calibration.hpp>
#include <hsbc/ions.hpp>
#include <hsbc/reference.hpp>
#include <hsbc/solvents.hpp>
#include <hsbc/thermo.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace hsbc::app {

enum class Format { csv, markdown, json };

inline Format parse_format(std::string_view s) {
    if (s == "csv") return Format::csv;
    if (s == "markdown" || s == "md") return Format::markdown;
    if (s == "json") return Format::json;
    throw ValidationError(fmt::format("unknown format '{}' (csv, markdown, json)", s));
}

struct ModelColumns {
    std::optional<double> expt;
    double born = 0.0;
    double msa = 0.0;
    double hsbc = 0.0;

    /// |HSBC - MSA| / |MSA| in percent, from unrounded values.
    double error_pct() const { return std::abs(hsbc - msa) / std::abs(msa) * 100.0; }
};

struct TableRow {
    std::string ion;
    ModelColumns dG; // kJ/mol
    ModelColumns dS; // J/(mol K)
};

struct SolvationTable {
    std::string solvent;
    double temperature = 25.0;
    AlphaLaw alpha;
    bool has_expt = false;
    std::vector<TableRow> rows;
};

/// Free energies and entropies of the three models for every ion. Born and
/// MSA entropies are analytic; HSBC entropies follow the alpha law along T.
inline SolvationTable build_table(const SolventModel &solvent, std::span<const IonSpec> ions, double celsius,
                                  const AlphaLaw &alpha, const ReferenceTable *reference = nullptr) {
    SolvationTable t;
    t.solvent = solvent.name();
    t.temperature = celsius;
    t.alpha = alpha;
    for (const auto &ion : ions) {
        TableRow row;
        row.ion = ion.name;
        row.dG.born = free_energy(Model::Born, ion, solvent, celsius, alpha);
        row.dG.msa = free_energy(Model::MSA, ion, solvent, celsius, alpha);
        row.dG.hsbc = free_energy(Model::HSBC, ion, solvent, celsius, alpha);
        row.dS.born = entropy_analytic(Model::Born, ion, solvent, celsius);
        row.dS.msa = entropy_analytic(Model::MSA, ion, solvent, celsius);
        row.dS.hsbc = entropy(Model::HSBC, ion, solvent, celsius, alpha);
        if (reference) {
            row.dG.expt = reference->value(ion.name, solvent.name(), Quantity::dG_expt);
            row.dS.expt = reference->value(ion.name, solvent.name(), Quantity::dS_expt);
            if (reference->find(ion.name, solvent.name(), Quantity::dG_expt)) t.has_expt = true;
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---------------------------------------------------------------------------
// Presentation rounding

inline long round_int(double x) { return std::lround(x); }

inline std::string fmt_int(double x) { return std::to_string(round_int(x)); }

inline std::string fmt_pct(double x) {
    auto s = fmt::format("{:.1f}", x);
    return s == "-0.0" ? "0.0" : s;
}

inline std::string fmt_alpha(double x) {
    auto s = fmt::format("{:.6f}", x);
    return s == "-0.000000" ? "0.000000" : s;
}

inline std::string fmt_expt(const std::optional<double> &v) { return v ? fmt_int(*v) : "N/R"; }

inline nlohmann::json json_int(const std::optional<double> &v) {
    return v ? nlohmann::json(round_int(*v)) : nlohmann::json("N/R");
}

inline void write_tables_csv(std::span<const SolvationTable> tables, std::ostream &out) {
    const bool expt = std::any_of(tables.begin(), tables.end(), [](const auto &t) { return t.has_expt; });
    fmt::print(out, "solvent,T_C,ion,{}dG_born,dG_msa,dG_hsbc,dG_err_pct,{}dS_born,dS_msa,dS_hsbc,dS_err_pct\n",
               expt ? "dG_expt," : "", expt ? "dS_expt," : "");
    for (const auto &t : tables) {
        for (const auto &r : t.rows) {
            fmt::print(out, "{},{},{},", t.solvent, t.temperature, r.ion);
            if (expt) fmt::print(out, "{},", fmt_expt(r.dG.expt));
            fmt::print(out, "{},{},{},{},", fmt_int(r.dG.born), fmt_int(r.dG.msa), fmt_int(r.dG.hsbc),
                       fmt_pct(r.dG.error_pct()));
            if (expt) fmt::print(out, "{},", fmt_expt(r.dS.expt));
            fmt::print(out, "{},{},{},{}\n", fmt_int(r.dS.born), fmt_int(r.dS.msa), fmt_int(r.dS.hsbc),
                       fmt_pct(r.dS.error_pct()));
        }
    }
}

inline void write_tables_markdown(std::span<const SolvationTable> tables, std::ostream &out) {
    bool first = true;
    for (const auto &t : tables) {
        if (!first) fmt::print(out, "\n");
        first = false;
        fmt::print(out, "### Ion solvation free energies (kJ/mol) and entropies (J/(mol K)) in {} at {} C\n\n",
                   t.solvent, t.temperature);
        fmt::print(out, "alpha(T) = {} + {} T\n\n", fmt_alpha(t.alpha.a1), fmt_alpha(t.alpha.a2));
        if (t.has_expt) {
            fmt::print(out, "| Ion | dG Expt | dG Born | dG MSA | dG HSBC | dG Error% | dS Expt | dS Born | dS MSA | "
                            "dS HSBC | dS Error% |\n");
            fmt::print(out, "|---|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n");
        } else {
            fmt::print(out, "| Ion | dG Born | dG MSA | dG HSBC | dG Error% | dS Born | dS MSA | dS HSBC | "
                            "dS Error% |\n");
            fmt::print(out, "|---|---:|---:|---:|---:|---:|---:|---:|---:|\n");
        }
        for (const auto &r : t.rows) {
            fmt::print(out, "| {} |", r.ion);
            if (t.has_expt) fmt::print(out, " {} |", fmt_expt(r.dG.expt));
            fmt::print(out, " {} | {} | {} | {} |", fmt_int(r.dG.born), fmt_int(r.dG.msa), fmt_int(r.dG.hsbc),
                       fmt_pct(r.dG.error_pct()));
            if (t.has_expt) fmt::print(out, " {} |", fmt_expt(r.dS.expt));
            fmt::print(out, " {} | {} | {} | {} |\n", fmt_int(r.dS.born), fmt_int(r.dS.msa), fmt_int(r.dS.hsbc),
                       fmt_pct(r.dS.error_pct()));
        }
    }
}

inline nlohmann::json tables_json(std::span<const SolvationTable> tables) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &t : tables) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto &r : t.rows) {
            auto cols = [&](const ModelColumns &c) {
                nlohmann::json j;
                if (t.has_expt) j["expt"] = json_int(c.expt);
                j["born"] = round_int(c.born);
                j["msa"] = round_int(c.msa);
                j["hsbc"] = round_int(c.hsbc);
                j["error_pct"] = std::stod(fmt_pct(c.error_pct()));
                return j;
            };
            rows.push_back({{"ion", r.ion}, {"dG", cols(r.dG)}, {"dS", cols(r.dS)}});
        }
        arr.push_back({{"solvent", t.solvent},
                       {"T_C", t.temperature},
                       {"alpha", {{"a1", std::stod(fmt_alpha(t.alpha.a1))}, {"a2", std::stod(fmt_alpha(t.alpha.a2))}}},
                       {"units", {{"dG", "kJ/mol"}, {"dS", "J/(mol K)"}}},
                       {"rows", rows}});
    }
    return {{"tables", arr}};
}

inline void write_tables(std::span<const SolvationTable> tables, Format format, std::ostream &out) {
    switch (format) {
    case Format::csv: write_tables_csv(tables, out); break;
    case Format::markdown: write_tables_markdown(tables, out); break;
    case Format::json: out << tables_json(tables).dump(2) << '\n'; break;
    }
}

} // namespace hsbc::app
