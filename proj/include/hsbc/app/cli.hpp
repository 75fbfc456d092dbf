#pragma once

#include <hsbc/app/records.hpp>
#include <hsbc/app/tables.hpp>
#include <hsbc/bem.hpp>
#include <hsbc/calibration.hpp>
#include <hsbc/ions.hpp>
#include <hsbc/reference.hpp>
#include <hsbc/solvents.hpp>
#include <hsbc/thermo.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

#ifndef HSBC_DEFAULT_DATA_DIR
#define HSBC_DEFAULT_DATA_DIR "data"
#endif

namespace hsbc::app {

namespace fs = std::filesystem;

struct GlobalOptions {
    std::string data_dir = HSBC_DEFAULT_DATA_DIR;
    std::string params;
    std::string format = "csv";
    std::string out;
    std::vector<std::string> solvent_files;
};

enum class AlphaSource { explicit_value, parameter_file, fit };

inline std::string_view to_string(AlphaSource s) {
    switch (s) {
    case AlphaSource::explicit_value: return "explicit";
    case AlphaSource::parameter_file: return "parameter-file";
    case AlphaSource::fit: return "fit";
    }
    return "?";
}

struct ResolvedAlpha {
    AlphaSource source = AlphaSource::fit;
    AlphaLaw law;
};

/// Exactly one alpha source: an explicit constant, a parameter file, or a
/// fresh fit over the solvent's default temperature grid.
inline ResolvedAlpha resolve_alpha(const SolventModel &solvent, const std::optional<double> &explicit_alpha,
                                   const std::string &params_path) {
    if (explicit_alpha && !params_path.empty())
        throw ValidationError("--alpha and --params are mutually exclusive alpha sources");
    if (explicit_alpha) {
        if (!(*explicit_alpha >= 0.0)) throw DomainError(fmt::format("--alpha = {} must be >= 0", *explicit_alpha));
        return {AlphaSource::explicit_value, AlphaLaw::constant(*explicit_alpha)};
    }
    if (!params_path.empty()) return {AlphaSource::parameter_file, load_params(params_path, solvent.name()).law()};
    const auto temps = default_temperature_grid(solvent);
    return {AlphaSource::fit, fit_alpha_line(solvent, temps).law()};
}

/// Shared state of one CLI invocation.
class Session {
public:
    Session(GlobalOptions options, std::ostream &out, std::ostream &err)
        : options_(std::move(options)), out_(out), err_(err) {
        for (const auto &f : options_.solvent_files) solvents_.load_json(f);
    }

    const GlobalOptions &options() const noexcept { return options_; }
    const SolventRegistry &solvents() const noexcept { return solvents_; }
    std::ostream &console() { return out_; }
    std::ostream &err() { return err_; }
    Format format() const { return parse_format(options_.format); }

    void warn(const std::string &msg) { fmt::print(err_, "warning: {}\n", msg); }
    void notice(const std::string &msg) { fmt::print(err_, "notice: {}\n", msg); }

    /// Runs `body` against --out when given, else the standard output.
    void emit(const std::function<void(std::ostream &)> &body) {
        if (options_.out.empty()) {
            body(out_);
            return;
        }
        std::ofstream f(options_.out);
        if (!f) throw IoError("cannot write " + options_.out);
        body(f);
        if (!f) throw IoError("write failed for " + options_.out);
    }

    std::vector<const SolventModel *> select_solvents(const std::vector<std::string> &names) const {
        std::vector<const SolventModel *> out;
        if (names.empty()) {
            for (const auto &s : solvents_.all()) out.push_back(&s);
        } else {
            for (const auto &n : names) out.push_back(&solvents_.get(n));
        }
        return out;
    }

    /// Every reference CSV in the data directory, in file-name order.
    ReferenceTable references() {
        ReferenceTable table;
        const fs::path dir(options_.data_dir);
        std::error_code ec;
        if (!fs::is_directory(dir, ec)) {
            warn(fmt::format("data directory '{}' not found; tables are emitted without Expt columns", dir.string()));
            return table;
        }
        std::vector<fs::path> files;
        for (const auto &e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
        std::sort(files.begin(), files.end());
        for (const auto &f : files) {
            std::ifstream in(f);
            std::string first;
            std::getline(in, first);
            if (!first.empty() && first.back() == '\r') first.pop_back();
            if (first.rfind("\xEF\xBB\xBF", 0) == 0) first.erase(0, 3);
            if (first != reference_csv_header) continue;
            table.merge(load_reference(f, solvents_));
        }
        return table;
    }

private:
    GlobalOptions options_;
    std::ostream &out_;
    std::ostream &err_;
    SolventRegistry solvents_;
};

inline std::vector<IonSpec> select_ions(const std::vector<std::string> &names) {
    if (names.empty()) return builtin_ion_set();
    std::vector<IonSpec> out;
    for (const auto &n : names) out.push_back(builtin_ion(n));
    return out;
}

// ---------------------------------------------------------------------------
// tables

struct TablesConfig {
    std::vector<std::string> solvents;
    std::vector<std::string> ions;
    double temperature = reference_temperature;
    std::optional<double> alpha;
};

inline void cmd_tables(Session &s, const TablesConfig &cfg) {
    const auto format = s.format();
    const auto reference = s.references();
    const auto ions = select_ions(cfg.ions);
    std::vector<SolvationTable> tables;
    for (const auto *solvent : s.select_solvents(cfg.solvents)) {
        const auto alpha = resolve_alpha(*solvent, cfg.alpha, s.options().params);
        auto t = build_table(*solvent, ions, cfg.temperature, alpha.law, &reference);
        if (!t.has_expt)
            s.warn(fmt::format("no reference data for solvent '{}'; Expt columns omitted", solvent->name()));
        tables.push_back(std::move(t));
    }
    s.emit([&](std::ostream &o) { write_tables(tables, format, o); });
}

// ---------------------------------------------------------------------------
// fit

struct FitConfig {
    std::vector<std::string> solvents;
    std::vector<double> temperatures;
    RadiusGrid grid;
};

inline void cmd_fit(Session &s, const FitConfig &cfg) {
    const auto format = s.format();
    const auto radii = cfg.grid.points();
    std::vector<CalibrationSet> sets;
    for (const auto *solvent : s.select_solvents(cfg.solvents)) {
        auto temps = cfg.temperatures.empty() ? default_temperature_grid(*solvent) : cfg.temperatures;
        std::sort(temps.begin(), temps.end());
        temps.erase(std::unique(temps.begin(), temps.end()), temps.end());
        if (temps.size() == 1) {
            const double t = temps.front();
            solvent->require_in_range(t);
            const auto fit = fit_alpha(*solvent, t, radii);
            s.notice(fmt::format("'{}': single temperature {} C, alpha = {}; no alpha(T) line fitted, a2 set to 0",
                                 solvent->name(), t, fmt_alpha(fit.alpha)));
            CalibrationSet set;
            set.solvent = solvent->name();
            set.samples.push_back({t, fit.alpha, fit.sse});
            set.a1 = fit.alpha;
            set.fitted_at_grid = cfg.grid;
            sets.push_back(std::move(set));
        } else {
            sets.push_back(fit_alpha_line(*solvent, temps, cfg.grid));
        }
    }
    if (!s.options().out.empty()) save_params(std::span<const CalibrationSet>(sets), s.options().out);

    // --out receives the parameter file, the summary goes to the console
    if (format == Format::json) {
        nlohmann::json j = nlohmann::json::array();
        for (const auto &set : sets) j.push_back(to_json(set));
        s.console() << j.dump(2) << '\n';
    } else {
        Records r{{"solvent", "n_samples", "a1", "a2", "r_squared"}, {}};
        for (const auto &set : sets)
            r.rows.push_back({str(set.solvent), num(static_cast<double>(set.samples.size()), 0), num(set.a1),
                              num(set.a2), set.r_squared ? num(*set.r_squared) : str("")});
        write_records(r, format, s.console());
    }
}

// ---------------------------------------------------------------------------
// sweep

struct SweepConfig {
    std::string solvent = "W";
    std::optional<double> t_min;
    std::optional<double> t_max;
    double step = 5.0;
    std::vector<std::string> ions;
    std::vector<std::string> models;
    std::optional<double> alpha;
};

inline Model parse_model(std::string_view s) {
    if (s == "Born" || s == "born") return Model::Born;
    if (s == "MSA" || s == "msa") return Model::MSA;
    if (s == "HSBC" || s == "hsbc") return Model::HSBC;
    throw ValidationError(fmt::format("unknown model '{}' (Born, MSA, HSBC)", s));
}

/// Temperatures t_min, t_min + step, ... <= t_max, clipped to the valid range.
inline std::vector<double> sweep_grid(Session &s, const SolventModel &solvent, const SweepConfig &cfg) {
    const auto &range = solvent.valid_range();
    double lo = cfg.t_min.value_or(range.min), hi = cfg.t_max.value_or(range.max);
    if (!(cfg.step > 0.0)) throw DomainError("sweep: --step must be positive");
    if (lo > hi) throw DomainError("sweep: --tmin exceeds --tmax");
    if (lo < range.min || hi > range.max) {
        const double clo = std::clamp(lo, range.min, range.max), chi = std::clamp(hi, range.min, range.max);
        s.warn(fmt::format("sweep range [{}, {}] C exceeds the validity of '{}'; clipped to [{}, {}] C", lo, hi,
                           solvent.name(), clo, chi));
        lo = clo;
        hi = chi;
    }
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        const double t = lo + cfg.step * i;
        if (t > hi + 1e-9 * std::max(1.0, std::abs(hi))) break;
        grid.push_back(std::min(t, hi));
    }
    return grid;
}

inline void cmd_sweep(Session &s, const SweepConfig &cfg) {
    const auto format = s.format();
    const auto &solvent = s.solvents().get(cfg.solvent);
    const auto ions = select_ions(cfg.ions);
    std::vector<Model> models;
    if (cfg.models.empty())
        models = {Model::Born, Model::MSA, Model::HSBC};
    else
        for (const auto &m : cfg.models) models.push_back(parse_model(m));
    const auto grid = sweep_grid(s, solvent, cfg);
    AlphaLaw alpha;
    if (std::find(models.begin(), models.end(), Model::HSBC) != models.end())
        alpha = resolve_alpha(solvent, cfg.alpha, s.options().params).law;

    Records r{{"solvent", "ion", "model", "T_C", "dG_kJ_mol", "dS_J_mol_K"}, {}};
    for (const auto &ion : ions)
        for (Model m : models)
            for (double t : grid)
                r.rows.push_back({str(solvent.name()), str(ion.name), str(std::string(to_string(m))), num(t, 4),
                                  num(free_energy(m, ion, solvent, t, alpha), 6),
                                  num(entropy(m, ion, solvent, t, alpha), 6)});
    s.emit([&](std::ostream &o) { write_records(r, format, o); });
}

// ---------------------------------------------------------------------------
// figdata

struct FigdataConfig {
    std::string kind = "h"; // h: h(E_n) curves; alpha: alpha(T) series
    std::optional<std::string> solvents;
    std::vector<double> temperatures{25.0, 75.0};
    RadiusGrid grid;
    std::optional<double> alpha;
};

inline std::vector<std::string> split_list(const std::string &s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

inline void cmd_figdata(Session &s, const FigdataConfig &cfg) {
    const auto format = s.format();
    const auto radii = cfg.grid.points();
    Records r;
    if (cfg.kind == "h") {
        const auto names = split_list(cfg.solvents.value_or("W"));
        r.columns = {"solvent", "T_C", "R", "abs_E_n", "h_exact", "h_model"};
        for (const auto &name : names) {
            const auto &solvent = s.solvents().get(name);
            const auto alpha = resolve_alpha(solvent, cfg.alpha, s.options().params).law;
            for (double t : cfg.temperatures) {
                for (const auto &p : figure_data(solvent, t, radii, alpha.at(t)))
                    r.rows.push_back({str(name), num(t, 4), num(p.radius, 4), num_g(std::abs(p.normal_field)),
                                      num_g(p.h_exact), num_g(p.h_model)});
            }
        }
    } else if (cfg.kind == "alpha") {
        const auto names = cfg.solvents ? split_list(*cfg.solvents) : [&] {
            std::vector<std::string> all;
            for (const auto &sv : s.solvents().all()) all.push_back(sv.name());
            return all;
        }();
        r.columns = {"solvent", "T_C", "alpha", "alpha_line", "a1", "a2", "r_squared"};
        for (const auto &name : names) {
            const auto &solvent = s.solvents().get(name);
            const auto temps = default_temperature_grid(solvent);
            const auto set = fit_alpha_line(solvent, temps, cfg.grid);
            for (const auto &smp : set.samples)
                r.rows.push_back({str(name), num(smp.temperature, 4), num(smp.alpha), num(set.alpha_at(smp.temperature)),
                                  num(set.a1), num(set.a2), num(set.r_squared.value_or(1.0))});
        }
    } else {
        throw ValidationError(fmt::format("figdata: unknown --kind '{}' (h, alpha)", cfg.kind));
    }
    s.emit([&](std::ostream &o) { write_records(r, format, o); });
}

// ---------------------------------------------------------------------------
// bem

struct BemConfig {
    std::string mesh;
    std::string charges;
    std::optional<double> icosphere_radius;
    int subdivisions = 3;
    double charge = 1.0;
    double eps_in = 1.0;
    std::optional<double> eps_out;
    std::string solvent = "W";
    double temperature = reference_temperature;
    std::optional<double> alpha;
    bool linear = false;
    bool flat = false;
    std::string sigma_out;
};

inline void cmd_bem(Session &s, const BemConfig &cfg) {
    bem::SurfaceMesh mesh;
    if (cfg.icosphere_radius && !cfg.mesh.empty()) throw ValidationError("bem: give either --mesh or --icosphere");
    if (cfg.icosphere_radius)
        mesh = bem::icosphere(*cfg.icosphere_radius, cfg.subdivisions);
    else if (!cfg.mesh.empty())
        mesh = bem::read_off(fs::path(cfg.mesh));
    else
        throw ValidationError("bem: a surface is required (--mesh FILE or --icosphere R)");

    bem::ChargeSet charges;
    if (!cfg.charges.empty())
        charges = bem::read_charges(fs::path(cfg.charges));
    else if (cfg.icosphere_radius)
        charges = {{bem::Vec3::Zero(), cfg.charge}};
    else
        throw ValidationError("bem: --charges FILE is required with --mesh");

    const auto &solvent = s.solvents().get(cfg.solvent);
    const double eps_out = cfg.eps_out ? *cfg.eps_out : eps_of_T(solvent, cfg.temperature);
    if (!(eps_out >= cfg.eps_in)) throw DomainError("bem: eps_out must be >= eps_in");
    std::optional<ResolvedAlpha> alpha;
    if (!cfg.linear) {
        alpha = resolve_alpha(solvent, cfg.alpha, s.options().params);
        solvent.require_in_range(cfg.temperature);
    }
    const double alpha_value = alpha ? alpha->law.at(cfg.temperature) : 0.0;

    bem::BemOptions opts;
    opts.geometry = cfg.flat ? bem::GeometryModel::Flat : bem::GeometryModel::Quadratic;
    bem::PanelSystem system(std::move(mesh), std::move(charges), cfg.eps_in, eps_out, alpha_value, opts);
    const auto report = cfg.linear ? bem::solve_linear(system) : bem::solve_nonlinear(system);
    const UnitSystem units{born_constant, cfg.eps_in};
    const double energy = bem::reaction_energy(system, units);

    auto summary = bem::solution_summary(system, report, energy);
    summary["mode"] = cfg.linear ? "linear" : "nonlinear";
    if (alpha) summary["alpha_source"] = std::string(to_string(alpha->source));
    // the centred-ion demo has a closed-form counterpart
    const auto &q = system.charges();
    if (cfg.icosphere_radius && q.size() == 1 && q[0].position.norm() == 0.0 &&
        q[0].charge == std::round(q[0].charge) && q[0].charge != 0.0) {
        const IonSpec ion{"probe", static_cast<int>(q[0].charge), *cfg.icosphere_radius};
        const double analytic = cfg.linear ? born_energy(ion, eps_out, units)
                                           : hsbc_solve(ion, eps_out, alpha_value, units).dG;
        summary["analytic_kJ_mol"] = analytic;
        summary["relative_deviation"] = std::abs(energy - analytic) / std::abs(analytic);
    }
    if (!cfg.sigma_out.empty()) {
        std::ofstream f(cfg.sigma_out);
        if (!f) throw IoError("cannot write " + cfg.sigma_out);
        bem::write_sigma_csv(system, f);
    }
    s.emit([&](std::ostream &o) { o << summary.dump(2) << '\n'; });
}

// ---------------------------------------------------------------------------
// validate

struct ValidateConfig {
    double temperature = reference_temperature;
    std::optional<double> alpha;
};

struct Check {
    Quantity quantity;
    double rel; // relative tolerance
    double abs; // absolute tolerance; the larger of the two applies
};

/// Born and MSA columns to +/-1; HSBC columns to 3% or 10 units.
inline constexpr std::array<Check, 6> golden_checks = {{
    {Quantity::dG_born, 0.0, 1.0},
    {Quantity::dG_msa, 0.0, 1.0},
    {Quantity::dG_hsbc, 0.03, 10.0},
    {Quantity::dS_born, 0.0, 1.0},
    {Quantity::dS_msa, 0.0, 1.0},
    {Quantity::dS_hsbc, 0.03, 10.0},
}};

/// Compares every computed table column against the reference CSVs; returns
/// the number of failed columns.
inline int cmd_validate(Session &s, const ValidateConfig &cfg) {
    const auto reference = s.references();
    const auto ions = builtin_ion_set();
    auto &out = s.console();
    int failed = 0, checked = 0;
    for (const auto &solvent : s.solvents().all()) {
        bool any = false;
        for (const auto &ion : ions)
            if (reference.find(ion.name, solvent.name(), Quantity::dG_born)) any = true;
        if (!any) continue;
        const auto alpha = resolve_alpha(solvent, cfg.alpha, s.options().params);
        const auto table = build_table(solvent, ions, cfg.temperature, alpha.law, &reference);
        for (const auto &c : golden_checks) {
            int n = 0, ok = 0;
            double worst = 0.0;
            for (const auto &row : table.rows) {
                const auto ref = reference.value(row.ion, solvent.name(), c.quantity);
                if (!ref) continue;
                const double value = [&] {
                    switch (c.quantity) {
                    case Quantity::dG_born: return row.dG.born;
                    case Quantity::dG_msa: return row.dG.msa;
                    case Quantity::dG_hsbc: return row.dG.hsbc;
                    case Quantity::dS_born: return row.dS.born;
                    case Quantity::dS_msa: return row.dS.msa;
                    default: return row.dS.hsbc;
                    }
                }();
                const double dev = std::abs(value - *ref);
                worst = std::max(worst, dev);
                ++n;
                if (dev <= std::max(c.rel * std::abs(*ref), c.abs)) ++ok;
            }
            if (n == 0) continue;
            ++checked;
            const bool pass = ok == n;
            if (!pass) ++failed;
            fmt::print(out, "{} {:<5} {:<8} {}/{} within tolerance (max |dev| {:.3f} {}, alpha from {})\n",
                       pass ? "PASS" : "FAIL", solvent.name(), to_string(c.quantity), ok, n, worst,
                       unit_of(c.quantity), to_string(alpha.source));
        }
    }
    if (checked == 0) {
        s.warn("no reference data found; nothing validated");
        return 0;
    }
    fmt::print(out, "{}: {} of {} column checks passed\n", failed == 0 ? "PASS" : "FAIL", checked - failed, checked);
    return failed;
}

// ---------------------------------------------------------------------------
// entry point

/// Parses `args` (without the program name) and runs one subcommand.
/// Returns the process exit code: 0 iff no error occurred.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"Ion solvation thermodynamics: Born, MSA and hydration-shell boundary models, "
                 "alpha calibration and a boundary-element solver",
                 "hsbc"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOptions g;
    app.add_option("--data-dir", g.data_dir, "Directory with reference CSV files")->capture_default_str();
    app.add_option("--params", g.params, "alpha parameter file (JSON)");
    app.add_option("--format", g.format, "Output format")
        ->check(CLI::IsMember({"csv", "markdown", "md", "json"}))
        ->capture_default_str();
    app.add_option("--out", g.out, "Output file (default: standard output)");
    app.add_option("--solvent-file", g.solvent_files, "Extra solvent definitions (JSON)");

    TablesConfig tables;
    auto *c_tables = app.add_subcommand("tables", "Free energy / entropy tables for the ion set");
    c_tables->add_option("--solvent", tables.solvents, "Solvents (default: all)")->delimiter(',');
    c_tables->add_option("--ions", tables.ions, "Ions (default: all)")->delimiter(',');
    c_tables->add_option("--temp", tables.temperature, "Temperature in C")->capture_default_str();
    c_tables->add_option("--alpha", tables.alpha, "Constant alpha in Angstrom");

    FitConfig fit;
    auto *c_fit = app.add_subcommand("fit", "Calibrate alpha(T) = a1 + a2 T; --out writes the parameter file");
    c_fit->add_option("--solvent", fit.solvents, "Solvents (default: all)")->delimiter(',');
    c_fit->add_option("--temps", fit.temperatures, "Temperatures in C (default: 5 across the valid range)")
        ->delimiter(',');
    c_fit->add_option("--r-min", fit.grid.r_min, "Smallest radius of the grid")->capture_default_str();
    c_fit->add_option("--r-max", fit.grid.r_max, "Largest radius of the grid")->capture_default_str();
    c_fit->add_option("--r-step", fit.grid.step, "Radius step")->capture_default_str();

    SweepConfig sweep;
    auto *c_sweep = app.add_subcommand("sweep", "dG and dS over a temperature range");
    c_sweep->add_option("--solvent", sweep.solvent, "Solvent")->capture_default_str();
    c_sweep->add_option("--tmin", sweep.t_min, "Lowest temperature in C (default: range minimum)");
    c_sweep->add_option("--tmax", sweep.t_max, "Highest temperature in C (default: range maximum)");
    c_sweep->add_option("--step", sweep.step, "Temperature step")->capture_default_str();
    c_sweep->add_option("--ions", sweep.ions, "Ions (default: all)")->delimiter(',');
    c_sweep->add_option("--models", sweep.models, "Born, MSA, HSBC (default: all)")->delimiter(',');
    c_sweep->add_option("--alpha", sweep.alpha, "Constant alpha in Angstrom");

    FigdataConfig fig;
    auto *c_fig = app.add_subcommand("figdata", "Plot data: h(E_n) curves or alpha(T) series");
    c_fig->add_option("--kind", fig.kind, "h or alpha")->check(CLI::IsMember({"h", "alpha"}))->capture_default_str();
    c_fig->add_option("--solvents", fig.solvents, "Comma-separated solvents (h: W, alpha: all)");
    c_fig->add_option("--temps", fig.temperatures, "Temperatures for h curves")->delimiter(',');
    c_fig->add_option("--r-min", fig.grid.r_min, "Smallest radius")->capture_default_str();
    c_fig->add_option("--r-max", fig.grid.r_max, "Largest radius")->capture_default_str();
    c_fig->add_option("--r-step", fig.grid.step, "Radius step")->capture_default_str();
    c_fig->add_option("--alpha", fig.alpha, "Constant alpha in Angstrom");

    BemConfig bemc;
    auto *c_bem = app.add_subcommand("bem", "Boundary-element solve on a closed surface");
    c_bem->add_option("--mesh", bemc.mesh, "Surface mesh (OFF)");
    c_bem->add_option("--charges", bemc.charges, "Charges, one 'x y z q' per line");
    c_bem->add_option("--icosphere", bemc.icosphere_radius, "Use a sphere of this radius instead of --mesh");
    c_bem->add_option("--subdivisions", bemc.subdivisions, "Icosphere subdivisions")
        ->check(CLI::Range(0, 7))
        ->capture_default_str();
    c_bem->add_option("--charge", bemc.charge, "Centred charge for --icosphere")->capture_default_str();
    c_bem->add_option("--eps-in", bemc.eps_in, "Interior permittivity")->capture_default_str();
    c_bem->add_option("--eps-out", bemc.eps_out, "Exterior permittivity (default: solvent at --temp)");
    c_bem->add_option("--solvent", bemc.solvent, "Solvent for eps_out and alpha")->capture_default_str();
    c_bem->add_option("--temp", bemc.temperature, "Temperature in C")->capture_default_str();
    c_bem->add_option("--alpha", bemc.alpha, "Constant alpha in Angstrom");
    c_bem->add_flag("--linear", bemc.linear, "Solve the linear equation only");
    c_bem->add_flag("--flat", bemc.flat, "Flat panels instead of curved ones");
    c_bem->add_option("--sigma-out", bemc.sigma_out, "Per-panel sigma CSV");

    ValidateConfig val;
    auto *c_val = app.add_subcommand("validate", "Compare all tables with the reference CSVs");
    c_val->add_option("--temp", val.temperature, "Temperature in C")->capture_default_str();
    c_val->add_option("--alpha", val.alpha, "Constant alpha in Angstrom");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        return app.exit(e, out, err);
    }

    try {
        Session session(g, out, err);
        session.format();
        if (c_tables->parsed()) cmd_tables(session, tables);
        if (c_fit->parsed()) cmd_fit(session, fit);
        if (c_sweep->parsed()) cmd_sweep(session, sweep);
        if (c_fig->parsed()) cmd_figdata(session, fig);
        if (c_bem->parsed()) cmd_bem(session, bemc);
        if (c_val->parsed() && cmd_validate(session, val) != 0) return 1;
    } catch (const std::exception &e) {
        fmt::print(err, "error: {}\n", e.what());
        return 1;
    }
    return 0;
}

} // namespace hsbc::app
