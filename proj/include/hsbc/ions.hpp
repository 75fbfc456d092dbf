#pragma once

#include <hsbc/error.hpp>
#include <hsbc/solvents.hpp>
#include <hsbc/units.hpp>

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

namespace hsbc {

struct IonSpec {
    std::string name;
    int valence = 1;
    double radius = 1.0; // Angstrom

    double charge() const noexcept { return static_cast<double>(valence); }
};

inline void validate(const IonSpec &ion) {
    if (!(ion.radius > 0.0))
        throw ValidationError(fmt::format("ion '{}': radius must be positive", ion.name));
    if (std::abs(ion.valence) < 1)
        throw ValidationError(fmt::format("ion '{}': |valence| must be >= 1", ion.name));
}

/// Inverts the Born equation: the cavity radius giving `dG_born` (kJ/mol) in a
/// solvent of dielectric constant `eps`.
inline double radius_from_born(double dG_born, double eps, int valence = 1,
                               const UnitSystem &units = {}) {
    if (!(dG_born < 0.0))
        throw DomainError(fmt::format("radius_from_born: dG = {} must be negative", dG_born));
    if (!(eps > units.eps_in))
        throw DomainError(fmt::format("radius_from_born: eps = {} must exceed eps_in", eps));
    const double z2 = static_cast<double>(valence) * valence;
    return units.born_constant * (1.0 / units.eps_in - 1.0 / eps) * z2 / std::abs(dG_born);
}

struct BornColumnEntry {
    std::string_view name;
    int valence;
    double dG_born; // kJ/mol, water at 25 C
};

/// Born free energies in water at 25 C for the reference ion set; the cavity
/// radii are obtained from these by inversion.
inline constexpr std::array<BornColumnEntry, 9> water_born_column = {{
    {"Li+", 1, -779.0},
    {"Na+", 1, -591.0},
    {"K+", 1, -451.0},
    {"Rb+", 1, -421.0},
    {"Cs+", 1, -373.0},
    {"F-", -1, -576.0},
    {"Cl-", -1, -411.0},
    {"Br-", -1, -377.0},
    {"I-", -1, -333.0},
}};

inline constexpr double reference_temperature = 25.0; // C

inline std::vector<IonSpec> builtin_ion_set() {
    const double eps_w = eps_of_T(builtin_solvent("W"), reference_temperature);
    std::vector<IonSpec> ions;
    ions.reserve(water_born_column.size());
    for (const auto &e : water_born_column)
        ions.push_back({std::string(e.name), e.valence, radius_from_born(e.dG_born, eps_w, e.valence)});
    return ions;
}

inline IonSpec builtin_ion(std::string_view name) {
    for (auto &ion : builtin_ion_set())
        if (ion.name == name) return ion;
    throw ValidationError(fmt::format("unknown ion '{}'", name));
}

} // namespace hsbc
