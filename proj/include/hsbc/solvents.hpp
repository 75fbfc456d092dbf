#pragma once

#include <hsbc/error.hpp>

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include <fmt/format.h>

namespace hsbc {

// Dielectric laws. Temperatures are in degrees Celsius; since the laws are
// evaluated on a shifted scale only, a derivative per degree C equals the
// derivative per kelvin.

/// eps(T) = c3 T^3 + c2 T^2 + c1 T + c0
struct CubicPoly {
    double c3 = 0.0;
    double c2 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
};

/// log10 eps(T) = log10 eps_ref - slope (T - t_ref)
struct LogLinear {
    double eps_ref = 1.0;
    double slope = 0.0;
    double t_ref = 25.0;
};

/// eps(T) = eps_ref - slope (T - t_ref)
struct Linear {
    double eps_ref = 1.0;
    double slope = 0.0;
    double t_ref = 25.0;
};

using LawForm = std::variant<CubicPoly, LogLinear, Linear>;

struct TemperatureRange {
    double min = 0.0;
    double max = 0.0;

    bool contains(double celsius) const noexcept { return celsius >= min && celsius <= max; }
    double width() const noexcept { return max - min; }
};

class DielectricLaw {
public:
    DielectricLaw(LawForm form, TemperatureRange range) : form_(form), range_(range) {
        if (!(range_.max >= range_.min) || !std::isfinite(range_.min) || !std::isfinite(range_.max))
            throw ValidationError("dielectric law: invalid temperature range");
        if (!(min_over_range() > 1.0))
            throw ValidationError("dielectric law: eps must exceed 1 on the whole valid range");
    }

    const LawForm &form() const noexcept { return form_; }
    const TemperatureRange &range() const noexcept { return range_; }

    /// Evaluates the closed form; the caller is responsible for the range check.
    double value(double t) const {
        return std::visit(
            [t](const auto &law) -> double {
                using L = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<L, CubicPoly>)
                    return ((law.c3 * t + law.c2) * t + law.c1) * t + law.c0;
                else if constexpr (std::is_same_v<L, LogLinear>)
                    return law.eps_ref * std::pow(10.0, -law.slope * (t - law.t_ref));
                else
                    return law.eps_ref - law.slope * (t - law.t_ref);
            },
            form_);
    }

    double derivative(double t) const {
        return std::visit(
            [this, t](const auto &law) -> double {
                using L = std::decay_t<decltype(law)>;
                if constexpr (std::is_same_v<L, CubicPoly>)
                    return (3.0 * law.c3 * t + 2.0 * law.c2) * t + law.c1;
                else if constexpr (std::is_same_v<L, LogLinear>)
                    return -std::log(10.0) * law.slope * value(t);
                else
                    return -law.slope;
            },
            form_);
    }

private:
    // Minimum of eps over the range: endpoints plus interior critical points.
    double min_over_range() const {
        double m = std::min(value(range_.min), value(range_.max));
        if (const auto *c = std::get_if<CubicPoly>(&form_)) {
            const double a = 3.0 * c->c3, b = 2.0 * c->c2, d = c->c1;
            std::vector<double> roots;
            if (a != 0.0) {
                const double disc = b * b - 4.0 * a * d;
                if (disc >= 0.0) {
                    roots.push_back((-b + std::sqrt(disc)) / (2.0 * a));
                    roots.push_back((-b - std::sqrt(disc)) / (2.0 * a));
                }
            } else if (b != 0.0) {
                roots.push_back(-d / b);
            }
            for (double r : roots)
                if (range_.contains(r)) m = std::min(m, value(r));
        }
        return m;
    }

    LawForm form_;
    TemperatureRange range_;
};

class SolventModel {
public:
    SolventModel(std::string name, double solvent_radius, DielectricLaw law)
        : name_(std::move(name)), solvent_radius_(solvent_radius), law_(std::move(law)) {
        if (!(solvent_radius_ > 0.0))
            throw ValidationError(fmt::format("solvent '{}': R_s must be positive", name_));
    }

    const std::string &name() const noexcept { return name_; }
    /// Solvent molecule radius R_s in Angstrom.
    double solvent_radius() const noexcept { return solvent_radius_; }
    const DielectricLaw &law() const noexcept { return law_; }
    const TemperatureRange &valid_range() const noexcept { return law_.range(); }

    void require_in_range(double celsius) const {
        if (!valid_range().contains(celsius))
            throw RangeError(fmt::format("solvent '{}': T = {} C outside valid range [{}, {}] C",
                                         name_, celsius, valid_range().min, valid_range().max));
    }

private:
    std::string name_;
    double solvent_radius_;
    DielectricLaw law_;
};

inline double eps_of_T(const SolventModel &solvent, double celsius) {
    solvent.require_in_range(celsius);
    return solvent.law().value(celsius);
}

/// d eps / dT per kelvin.
inline double deps_dT(const SolventModel &solvent, double celsius) {
    solvent.require_in_range(celsius);
    return solvent.law().derivative(celsius);
}

/// Unique positive root of lambda^2 (1 + lambda)^4 = 16 eps.
inline double wertheim_lambda(double eps) {
    if (!(eps >= 1.0))
        throw DomainError(fmt::format("wertheim_lambda: eps = {} must be >= 1", eps));
    const double target = 16.0 * eps;
    auto residual = [target](double l) {
        const double p = (1.0 + l) * (1.0 + l);
        return l * l * p * p - target;
    };
    // left side is strictly increasing for lambda > 0
    double lo = 1e-8, hi = 64.0;
    while (residual(hi) < 0.0) hi *= 2.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-10 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (residual(mid) < 0.0 ? lo : hi) = mid;
    }
    double l = 0.5 * (lo + hi);
    for (int i = 0; i < 8; ++i) {
        const double d = 2.0 * l * std::pow(1.0 + l, 3) * (1.0 + 3.0 * l);
        const double step = residual(l) / d;
        const double next = std::clamp(l - step, lo, hi);
        if (next == l) break;
        l = next;
    }
    return l;
}

struct MsaShift {
    double lambda = 1.0;
    double delta_s = 0.0;      // Angstrom
    double d_delta_s_dT = 0.0; // Angstrom/K
};

inline MsaShift msa_shift(const SolventModel &solvent, double celsius) {
    const double eps = eps_of_T(solvent, celsius);
    const double deps = deps_dT(solvent, celsius);
    const double l = wertheim_lambda(eps);
    // implicit differentiation of lambda^2 (1+lambda)^4 = 16 eps
    const double dl = 16.0 * deps / (2.0 * l * std::pow(1.0 + l, 3) * (1.0 + 3.0 * l));
    const double rs = solvent.solvent_radius();
    return {l, rs / l, -rs * dl / (l * l)};
}

// ---------------------------------------------------------------------------
// Registry

inline const std::vector<SolventModel> &builtin_solvents() {
    static const std::vector<SolventModel> solvents = {
        {"W", 1.420, DielectricLaw(CubicPoly{-1.410e-6, 9.398e-4, -0.40008, 87.740}, {0.0, 100.0})},
        // slope 0.264e-2 /C: the tabulated 0.26e-2 is this value rounded
        {"MeOH", 1.855, DielectricLaw(LogLinear{32.63, 0.264e-2, 25.0}, {5.0, 55.0})},
        {"F", 1.725, DielectricLaw(Linear{109.0, 0.72, 20.0}, {18.0, 25.0})},
        {"AN", 2.135, DielectricLaw(Linear{37.50, 0.16, 20.0}, {15.0, 25.0})},
        {"DMF", 2.585,
         DielectricLaw(CubicPoly{-1.000389e-6, 7.718531e-4, -0.2204448, 42.04569}, {-60.0, 120.0})},
    };
    return solvents;
}

inline nlohmann::json to_json(const SolventModel &s) {
    nlohmann::json law;
    std::visit(
        [&law](const auto &f) {
            using L = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<L, CubicPoly>) {
                law["variant"] = "cubic";
                law["params"] = {{"c3", f.c3}, {"c2", f.c2}, {"c1", f.c1}, {"c0", f.c0}};
            } else if constexpr (std::is_same_v<L, LogLinear>) {
                law["variant"] = "log_linear";
                law["params"] = {{"eps_T0", f.eps_ref}, {"a_hat", f.slope}, {"T0", f.t_ref}};
            } else {
                law["variant"] = "linear";
                law["params"] = {{"eps_T0", f.eps_ref}, {"a", f.slope}, {"T0", f.t_ref}};
            }
        },
        s.law().form());
    return {{"name", s.name()},
            {"R_s", s.solvent_radius()},
            {"law", law},
            {"valid_range", {s.valid_range().min, s.valid_range().max}}};
}

inline SolventModel solvent_from_json(const nlohmann::json &j) {
    try {
        const auto &law = j.at("law");
        const auto &p = law.at("params");
        const std::string variant = law.at("variant").get<std::string>();
        LawForm form;
        if (variant == "cubic")
            form = CubicPoly{p.at("c3").get<double>(), p.at("c2").get<double>(),
                             p.at("c1").get<double>(), p.at("c0").get<double>()};
        else if (variant == "log_linear")
            form = LogLinear{p.at("eps_T0").get<double>(), p.at("a_hat").get<double>(),
                             p.at("T0").get<double>()};
        else if (variant == "linear")
            form = Linear{p.at("eps_T0").get<double>(), p.at("a").get<double>(),
                          p.at("T0").get<double>()};
        else
            throw ValidationError("unknown dielectric law variant '" + variant + "'");
        const auto &r = j.at("valid_range");
        if (!r.is_array() || r.size() != 2)
            throw ValidationError("valid_range must be a [min, max] pair");
        return SolventModel(j.at("name").get<std::string>(), j.at("R_s").get<double>(),
                            DielectricLaw(form, {r[0].get<double>(), r[1].get<double>()}));
    } catch (const nlohmann::json::exception &e) {
        throw ValidationError(std::string("solvent definition: ") + e.what());
    }
}

/// Named solvent collection; starts with the built-in set, accepts custom
/// definitions from JSON. Later definitions with the same name replace earlier ones.
class SolventRegistry {
public:
    SolventRegistry() : solvents_(builtin_solvents()) {}

    void add(SolventModel s) {
        auto it = std::find_if(solvents_.begin(), solvents_.end(),
                               [&](const SolventModel &m) { return m.name() == s.name(); });
        if (it != solvents_.end())
            *it = std::move(s);
        else
            solvents_.push_back(std::move(s));
    }

    const SolventModel *find(std::string_view name) const {
        for (const auto &s : solvents_)
            if (s.name() == name) return &s;
        return nullptr;
    }

    const SolventModel &get(std::string_view name) const {
        if (const auto *s = find(name)) return *s;
        throw ValidationError(fmt::format("unknown solvent '{}'", name));
    }

    const std::vector<SolventModel> &all() const noexcept { return solvents_; }

    /// Loads a single solvent object or an array of them.
    void load_json(const std::filesystem::path &path) {
        std::ifstream in(path);
        if (!in) throw IoError("cannot open solvent file " + path.string());
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error &e) {
            throw ValidationError("solvent file " + path.string() + ": " + e.what());
        }
        if (j.is_array())
            for (const auto &entry : j) add(solvent_from_json(entry));
        else
            add(solvent_from_json(j));
    }

    nlohmann::json dump_json() const {
        nlohmann::json out = nlohmann::json::array();
        for (const auto &s : solvents_) out.push_back(to_json(s));
        return out;
    }

private:
    std::vector<SolventModel> solvents_;
};

inline const SolventModel &builtin_solvent(std::string_view name) {
    for (const auto &s : builtin_solvents())
        if (s.name() == name) return s;
    throw ValidationError(fmt::format("unknown solvent '{}'", name));
}

} // namespace hsbc
