#pragma once

#include <hsbc/error.hpp>
#include <hsbc/ions.hpp>
#include <hsbc/solvents.hpp>
#include <hsbc/thermo.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <fmt/format.h>

namespace hsbc {

/// Perturbation that maps the Born surface charge onto the MSA one:
/// sigma_Born / sigma_MSA - 1 = delta_s / R.
inline double h_exact(double radius, const SolventModel &solvent, double celsius) {
    if (!(radius > 0.0)) throw DomainError("h_exact: radius must be positive");
    return msa_shift(solvent, celsius).delta_s / radius;
}

struct RadiusGrid {
    double r_min = 1.0;
    double r_max = 30.0;
    double step = 0.05;

    std::vector<double> points() const {
        std::vector<double> r;
        const auto n = static_cast<std::size_t>(std::floor((r_max - r_min) / step + 1e-9)) + 1;
        r.reserve(n);
        for (std::size_t i = 0; i < n; ++i) r.push_back(r_min + step * static_cast<double>(i));
        return r;
    }
};

inline std::vector<double> default_radii_grid() { return RadiusGrid{}.points(); }

/// Five evenly spaced temperatures across the solvent's valid range.
inline std::vector<double> default_temperature_grid(const SolventModel &solvent, int n = 5) {
    const auto &r = solvent.valid_range();
    std::vector<double> t;
    for (int i = 0; i < n; ++i) t.push_back(r.min + (r.max - r.min) * i / (n - 1));
    return t;
}

/// Normal field of a unit test charge of radius R carrying its MSA surface charge.
inline double calibration_field(double radius, double eps, double delta_s) {
    const IonSpec probe{"probe", 1, radius};
    return normal_field(probe, msa_sigma(probe, eps, delta_s));
}

struct AlphaFit {
    double alpha = 0.0;
    double sse = 0.0;
};

/// Least-squares alpha over the radii grid: minimises
/// sum_R (h_exact(R) - alpha sqrt|E_n(R)|)^2, which is quadratic in alpha.
inline AlphaFit fit_alpha(const SolventModel &solvent, double celsius, std::span<const double> radii) {
    if (radii.empty()) throw FitError("fit_alpha: empty radii grid");
    const double eps = eps_of_T(solvent, celsius);
    const double delta = msa_shift(solvent, celsius).delta_s;
    double num = 0.0, den = 0.0;
    for (double r : radii) {
        if (!(r > 0.0)) throw DomainError("fit_alpha: radii must be positive");
        const double e = std::abs(calibration_field(r, eps, delta));
        num += (delta / r) * std::sqrt(e);
        den += e;
    }
    if (!(den > 0.0)) throw FitError("fit_alpha: degenerate grid, all normal fields vanish");
    AlphaFit fit{num / den, 0.0};
    for (double r : radii) {
        const double d = delta / r - fit.alpha * std::sqrt(std::abs(calibration_field(r, eps, delta)));
        fit.sse += d * d;
    }
    return fit;
}

inline AlphaFit fit_alpha(const SolventModel &solvent, double celsius) {
    const auto grid = default_radii_grid();
    return fit_alpha(solvent, celsius, grid);
}

struct AlphaSample {
    double temperature = 0.0; // C
    double alpha = 0.0;       // A
    double sse = 0.0;
};

struct CalibrationSet {
    std::string solvent;
    std::vector<AlphaSample> samples;
    double a1 = 0.0; // A
    double a2 = 0.0; // A/K
    std::optional<double> r_squared; // absent when the source does not report it
    double tolerance = 0.0; // max |a1 + a2 T - alpha| accepted for the samples
    std::optional<RadiusGrid> fitted_at_grid;

    AlphaLaw law() const noexcept { return {a1, a2}; }
    double alpha_at(double celsius) const noexcept { return a1 + a2 * celsius; }
};

inline void validate(const CalibrationSet &set) {
    if (set.samples.empty()) throw ValidationError("calibration set '" + set.solvent + "': no samples");
    for (const auto &s : set.samples) {
        if (!(s.alpha > 0.0))
            throw ValidationError(fmt::format("calibration set '{}': alpha = {} at T = {} must be positive",
                                              set.solvent, s.alpha, s.temperature));
        if (std::abs(set.alpha_at(s.temperature) - s.alpha) > set.tolerance)
            throw ValidationError(fmt::format("calibration set '{}': line misses sample at T = {} by more "
                                              "than tolerance {}",
                                              set.solvent, s.temperature, set.tolerance));
    }
    if (set.r_squared && !(*set.r_squared >= 0.0 && *set.r_squared <= 1.0))
        throw ValidationError(fmt::format("calibration set '{}': r_squared = {} outside [0, 1]", set.solvent,
                                          *set.r_squared));
}

struct LineFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 1.0;
};

inline LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    if (syy > 0.0) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = y[i] - (f.intercept + f.slope * x[i]);
            ssr += d * d;
        }
        f.r_squared = std::clamp(1.0 - ssr / syy, 0.0, 1.0);
    }
    return f;
}

/// Fits alpha at every temperature and regresses alpha(T) = a1 + a2 T.
inline CalibrationSet fit_alpha_line(const SolventModel &solvent, std::span<const double> temperatures,
                                     const RadiusGrid &grid = {}) {
    std::vector<double> ts(temperatures.begin(), temperatures.end());
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
    if (ts.size() < 2)
        throw FitError(fmt::format("fit_alpha_line: need at least 2 distinct temperatures for '{}'",
                                   solvent.name()));
    for (double t : ts) solvent.require_in_range(t);

    const auto radii = grid.points();
    CalibrationSet set;
    set.solvent = solvent.name();
    set.fitted_at_grid = grid;
    std::vector<double> alphas;
    for (double t : ts) {
        const auto fit = fit_alpha(solvent, t, radii);
        set.samples.push_back({t, fit.alpha, fit.sse});
        alphas.push_back(fit.alpha);
    }
    const auto line = least_squares_line(ts, alphas);
    set.a1 = line.intercept;
    set.a2 = line.slope;
    set.r_squared = line.r_squared;
    double worst = 0.0;
    for (const auto &s : set.samples) worst = std::max(worst, std::abs(set.alpha_at(s.temperature) - s.alpha));
    set.tolerance = worst * (1.0 + 1e-9) + 1e-12;
    return set;
}

// ---------------------------------------------------------------------------
// Parameter files

inline nlohmann::json to_json(const CalibrationSet &set) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto &s : set.samples) samples.push_back({{"T", s.temperature}, {"alpha", s.alpha}, {"sse", s.sse}});
    nlohmann::json grid = nullptr;
    if (set.fitted_at_grid) {
        const auto &g = *set.fitted_at_grid;
        grid = {{"r_min", g.r_min}, {"r_max", g.r_max}, {"step", g.step}, {"points", g.points().size()}};
    }
    return {{"solvent", set.solvent},
            {"samples", samples},
            {"a1", set.a1},
            {"a2", set.a2},
            {"r_squared", set.r_squared ? nlohmann::json(*set.r_squared) : nlohmann::json(nullptr)},
            {"tolerance", set.tolerance},
            {"fitted_at_grid", grid}};
}

inline CalibrationSet calibration_from_json(const nlohmann::json &j) {
    CalibrationSet set;
    try {
        set.solvent = j.at("solvent").get<std::string>();
        for (const auto &s : j.at("samples"))
            set.samples.push_back({s.at("T").get<double>(), s.at("alpha").get<double>(), s.value("sse", 0.0)});
        set.a1 = j.at("a1").get<double>();
        set.a2 = j.at("a2").get<double>();
        if (j.contains("r_squared") && !j.at("r_squared").is_null())
            set.r_squared = j.at("r_squared").get<double>();
        set.tolerance = j.value("tolerance", 0.0);
        if (j.contains("fitted_at_grid") && !j.at("fitted_at_grid").is_null()) {
            const auto &g = j.at("fitted_at_grid");
            set.fitted_at_grid =
                RadiusGrid{g.at("r_min").get<double>(), g.at("r_max").get<double>(), g.at("step").get<double>()};
        }
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("parameter file: ") + e.what());
    }
    validate(set);
    return set;
}

inline void write_json_file(const nlohmann::json &j, const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path.string());
    out << j.dump(2) << '\n';
    if (!out) throw IoError("write failed for " + path.string());
}

inline nlohmann::json read_json_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    try {
        nlohmann::json j;
        in >> j;
        return j;
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

inline void save_params(const CalibrationSet &set, const std::filesystem::path &path) {
    write_json_file(to_json(set), path);
}

inline void save_params(std::span<const CalibrationSet> sets, const std::filesystem::path &path) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto &s : sets) j.push_back(to_json(s));
    write_json_file(j, path);
}

/// All parameter sets in a file (a single object or an array of them).
inline std::vector<CalibrationSet> load_param_file(const std::filesystem::path &path) {
    const auto j = read_json_file(path);
    std::vector<CalibrationSet> sets;
    if (j.is_array())
        for (const auto &e : j) sets.push_back(calibration_from_json(e));
    else
        sets.push_back(calibration_from_json(j));
    return sets;
}

inline CalibrationSet load_params(const std::filesystem::path &path) {
    auto sets = load_param_file(path);
    if (sets.size() != 1)
        throw ValidationError(fmt::format("{}: expected one parameter set, found {}", path.string(), sets.size()));
    return sets.front();
}

inline CalibrationSet load_params(const std::filesystem::path &path, std::string_view solvent) {
    for (auto &s : load_param_file(path))
        if (s.solvent == solvent) return s;
    throw ValidationError(fmt::format("{}: no parameter set for solvent '{}'", path.string(), solvent));
}

// ---------------------------------------------------------------------------
// Plot data

struct HCurvePoint {
    double radius = 0.0;
    double normal_field = 0.0;
    double h_exact = 0.0;
    double h_model = 0.0;
};

inline std::vector<HCurvePoint> figure_data(const SolventModel &solvent, double celsius,
                                            std::span<const double> radii, double alpha) {
    const double eps = eps_of_T(solvent, celsius);
    const double delta = msa_shift(solvent, celsius).delta_s;
    std::vector<HCurvePoint> rows;
    rows.reserve(radii.size());
    for (double r : radii) {
        if (!(r > 0.0)) throw DomainError("figure_data: radii must be positive");
        const double e = calibration_field(r, eps, delta);
        rows.push_back({r, e, delta / r, h_model(e, alpha)});
    }
    return rows;
}

/// As above with alpha fitted at (solvent, T) on the same grid.
inline std::vector<HCurvePoint> figure_data(const SolventModel &solvent, double celsius,
                                            std::span<const double> radii) {
    return figure_data(solvent, celsius, radii, fit_alpha(solvent, celsius, radii).alpha);
}

} // namespace hsbc
