#pragma once

#include <hsbc/error.hpp>
#include <hsbc/ions.hpp>
#include <hsbc/solvents.hpp>
#include <hsbc/units.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <limits>
#include <string_view>

#include <fmt/format.h>

namespace hsbc {

enum class Model { Born, MSA, HSBC };

inline std::string_view to_string(Model m) {
    switch (m) {
    case Model::Born: return "Born";
    case Model::MSA: return "MSA";
    case Model::HSBC: return "HSBC";
    }
    return "?";
}

/// alpha(T) = a1 + a2 T, T in Celsius, alpha in Angstrom.
struct AlphaLaw {
    double a1 = 0.0;
    double a2 = 0.0;

    static AlphaLaw constant(double alpha) { return {alpha, 0.0}; }
    double at(double celsius) const noexcept { return a1 + a2 * celsius; }
};

struct ThermoResult {
    Model model = Model::Born;
    double dG = 0.0;                                    // kJ/mol
    double dS = std::numeric_limits<double>::quiet_NaN(); // J/(mol K)
    double sigma = 0.0;                                 // reduced surface charge, e0/A^2
    double normal_field = 0.0;                          // e0/A^2, bare Coulomb field is q/R^2
    double h = 0.0;
    int iterations = 0;
};

/// (eps_out - eps_in) / eps_out
inline double dielectric_contrast(double eps_out, double eps_in = 1.0) {
    return (eps_out - eps_in) / eps_out;
}

namespace detail {

inline void check_dielectrics(double eps_out, const UnitSystem &units) {
    if (!(units.eps_in >= 1.0))
        throw DomainError(fmt::format("eps_in = {} must be >= 1", units.eps_in));
    if (!(eps_out >= units.eps_in))
        throw DomainError(fmt::format("eps_out = {} must be >= eps_in = {}", eps_out, units.eps_in));
}

} // namespace detail

inline double born_energy(const IonSpec &ion, double eps_out, const UnitSystem &units = {}) {
    validate(ion);
    detail::check_dielectrics(eps_out, units);
    const double q = ion.charge();
    return -units.born_constant * q * q * (1.0 / units.eps_in - 1.0 / eps_out) / ion.radius;
}

inline double msa_energy(const IonSpec &ion, double eps_out, double delta_s, const UnitSystem &units = {}) {
    validate(ion);
    detail::check_dielectrics(eps_out, units);
    const double q = ion.charge();
    return -units.born_constant * q * q * (1.0 / units.eps_in - 1.0 / eps_out) / (ion.radius + delta_s);
}

inline double msa_energy(const IonSpec &ion, const SolventModel &solvent, double celsius,
                         const UnitSystem &units = {}) {
    return msa_energy(ion, eps_of_T(solvent, celsius), msa_shift(solvent, celsius).delta_s, units);
}

inline double born_sigma(const IonSpec &ion, double eps_out, const UnitSystem &units = {}) {
    validate(ion);
    detail::check_dielectrics(eps_out, units);
    return -dielectric_contrast(eps_out, units.eps_in) * ion.charge() / (4.0 * pi * ion.radius * ion.radius);
}

inline double msa_sigma(const IonSpec &ion, double eps_out, double delta_s, const UnitSystem &units = {}) {
    validate(ion);
    detail::check_dielectrics(eps_out, units);
    return -dielectric_contrast(eps_out, units.eps_in) / (4.0 * pi) * ion.charge() /
           (ion.radius * (ion.radius + delta_s));
}

inline double msa_sigma(const IonSpec &ion, const SolventModel &solvent, double celsius,
                        const UnitSystem &units = {}) {
    return msa_sigma(ion, eps_of_T(solvent, celsius), msa_shift(solvent, celsius).delta_s, units);
}

/// h(E_n) = alpha sqrt(|E_n|)
inline double h_model(double normal_field, double alpha) {
    if (!(alpha >= 0.0)) throw DomainError(fmt::format("h_model: alpha = {} must be >= 0", alpha));
    return alpha * std::sqrt(std::abs(normal_field));
}

/// Normal field just inside a spherical ion carrying uniform surface charge
/// sigma: 4 pi (q dG/dn - K sigma) with K sigma = sigma/2 on the sphere.
inline double normal_field(const IonSpec &ion, double sigma) {
    return -ion.charge() / (ion.radius * ion.radius) - 2.0 * pi * sigma;
}

/// Free energy (kJ/mol) of a uniform surface charge sigma on the ion's sphere.
inline double surface_charge_energy(const IonSpec &ion, double sigma, const UnitSystem &units = {}) {
    return 4.0 * pi * units.born_constant * ion.radius * ion.charge() * sigma / units.eps_in;
}

struct FixedPointOptions {
    int max_iterations = 500;
    double tolerance = 1e-12; // relative residual
    double damping = 0.5;     // applied once the residual grows
};

/// Solves (1 + h(E_n(sigma))) sigma = sigma_Born for a spherical ion.
inline ThermoResult hsbc_solve(const IonSpec &ion, double eps_out, double alpha,
                               const UnitSystem &units = {}, const FixedPointOptions &opts = {}) {
    if (!(alpha >= 0.0)) throw DomainError(fmt::format("hsbc_solve: alpha = {} must be >= 0", alpha));
    const double sb = born_sigma(ion, eps_out, units);

    ThermoResult out;
    out.model = Model::HSBC;
    if (sb == 0.0) {
        out.normal_field = normal_field(ion, 0.0);
        out.h = h_model(out.normal_field, alpha);
        return out;
    }

    auto residual = [&](double s) {
        return std::abs((1.0 + h_model(normal_field(ion, s), alpha)) * s - sb) / std::abs(sb);
    };

    double sigma = sb;
    double res = residual(sigma);
    bool damped = false;
    int k = 0;
    while (res > opts.tolerance) {
        if (k == opts.max_iterations)
            throw IterationError("hsbc_solve: fixed point did not converge", k, res);
        ++k;
        const double target = sb / (1.0 + h_model(normal_field(ion, sigma), alpha));
        double next = damped ? sigma + opts.damping * (target - sigma) : target;
        double next_res = residual(next);
        if (!damped && next_res > res) {
            damped = true;
            next = sigma + opts.damping * (target - sigma);
            next_res = residual(next);
        }
        sigma = next;
        res = next_res;
    }

    out.sigma = sigma;
    out.normal_field = normal_field(ion, sigma);
    out.h = h_model(out.normal_field, alpha);
    out.dG = surface_charge_energy(ion, sigma, units);
    out.iterations = k;
    return out;
}

inline ThermoResult hsbc_solve(const IonSpec &ion, const SolventModel &solvent, double celsius, double alpha,
                               const UnitSystem &units = {}, const FixedPointOptions &opts = {}) {
    return hsbc_solve(ion, eps_of_T(solvent, celsius), alpha, units, opts);
}

// ---------------------------------------------------------------------------
// Temperature derivatives

/// df/dT at `celsius` with step dT, staying inside `range`: central
/// difference where T +/- dT fit, else a second-order one-sided stencil.
template <class F>
double temperature_derivative(const TemperatureRange &range, double celsius, double dT, F &&f) {
    if (!range.contains(celsius))
        throw RangeError(fmt::format("T = {} C outside valid range [{}, {}] C", celsius, range.min, range.max));
    if (range.contains(celsius - dT) && range.contains(celsius + dT))
        return (f(celsius + dT) - f(celsius - dT)) / (2.0 * dT);
    if (range.contains(celsius - 2.0 * dT))
        return (3.0 * f(celsius) - 4.0 * f(celsius - dT) + f(celsius - 2.0 * dT)) / (2.0 * dT);
    if (range.contains(celsius + 2.0 * dT))
        return (-3.0 * f(celsius) + 4.0 * f(celsius + dT) - f(celsius + 2.0 * dT)) / (2.0 * dT);
    throw RangeError(fmt::format("valid range [{}, {}] C too narrow for dT = {}", range.min, range.max, dT));
}

inline constexpr double entropy_step = 0.1;    // K
inline constexpr double h_derivative_step = 0.01; // K

/// Free energy of a model at temperature T; `alpha` is only used for HSBC.
inline double free_energy(Model model, const IonSpec &ion, const SolventModel &solvent, double celsius,
                          const AlphaLaw &alpha, const UnitSystem &units = {}) {
    switch (model) {
    case Model::Born: return born_energy(ion, eps_of_T(solvent, celsius), units);
    case Model::MSA: return msa_energy(ion, solvent, celsius, units);
    case Model::HSBC: return hsbc_solve(ion, solvent, celsius, alpha.at(celsius), units).dG;
    }
    return 0.0;
}

/// Solvation entropy -d(dG)/dT in J/(mol K) by finite differences. For HSBC
/// the alpha law is followed along T.
inline double entropy(Model model, const IonSpec &ion, const SolventModel &solvent, double celsius,
                      const AlphaLaw &alpha, const UnitSystem &units = {}, double dT = entropy_step) {
    const double slope = temperature_derivative(solvent.valid_range(), celsius, dT, [&](double t) {
        return free_energy(model, ion, solvent, t, alpha, units);
    });
    return -1000.0 * slope;
}

/// Closed-form entropy for the Born and MSA models.
inline double entropy_analytic(Model model, const IonSpec &ion, const SolventModel &solvent, double celsius,
                               const UnitSystem &units = {}) {
    validate(ion);
    const double eps = eps_of_T(solvent, celsius);
    const double deps = deps_dT(solvent, celsius);
    const double q2 = ion.charge() * ion.charge();
    const double c = 1.0 / units.eps_in - 1.0 / eps;
    const double dc = deps / (eps * eps);
    switch (model) {
    case Model::Born: return 1000.0 * units.born_constant * q2 * dc / ion.radius;
    case Model::MSA: {
        const auto shift = msa_shift(solvent, celsius);
        const double a = ion.radius + shift.delta_s;
        return 1000.0 * units.born_constant * q2 * (dc / a - c * shift.d_delta_s_dT / (a * a));
    }
    case Model::HSBC: break;
    }
    throw DomainError("entropy_analytic: no closed form for the HSBC model");
}

/// HSBC entropy from the derivative of eps_hat / (1 + h): eps_hat' is
/// analytic, dh/dT is taken numerically along the converged fixed point.
inline double hsbc_entropy_split(const IonSpec &ion, const SolventModel &solvent, double celsius,
                                 const AlphaLaw &alpha, const UnitSystem &units = {},
                                 double dT = h_derivative_step) {
    validate(ion);
    const double eps = eps_of_T(solvent, celsius);
    const double deps = deps_dT(solvent, celsius);
    const double eh = dielectric_contrast(eps, units.eps_in);
    const double deh = units.eps_in * deps / (eps * eps);
    const double h = hsbc_solve(ion, solvent, celsius, alpha.at(celsius), units).h;
    const double dh = temperature_derivative(solvent.valid_range(), celsius, dT, [&](double t) {
        return hsbc_solve(ion, solvent, t, alpha.at(t), units).h;
    });
    const double q2 = ion.charge() * ion.charge();
    return 1000.0 * units.born_constant * q2 / (units.eps_in * ion.radius) *
           (deh * (1.0 + h) - dh * eh) / ((1.0 + h) * (1.0 + h));
}

/// Energy, entropy and surface quantities of one model at one state point.
inline ThermoResult evaluate(Model model, const IonSpec &ion, const SolventModel &solvent, double celsius,
                             const AlphaLaw &alpha, const UnitSystem &units = {}) {
    ThermoResult r;
    const double eps = eps_of_T(solvent, celsius);
    switch (model) {
    case Model::Born:
        r.dG = born_energy(ion, eps, units);
        r.sigma = born_sigma(ion, eps, units);
        break;
    case Model::MSA:
        r.dG = msa_energy(ion, solvent, celsius, units);
        r.sigma = msa_sigma(ion, solvent, celsius, units);
        break;
    case Model::HSBC: r = hsbc_solve(ion, solvent, celsius, alpha.at(celsius), units); break;
    }
    r.model = model;
    if (model != Model::HSBC) {
        r.normal_field = normal_field(ion, r.sigma);
        r.h = 0.0;
    }
    r.dS = entropy(model, ion, solvent, celsius, alpha, units);
    return r;
}

/// Ratio of the nonlinear charging free energy to the linear-response value,
/// 2 (1 + h1) * integral_0^1 q dq / (1 + h1 sqrt(q)).
inline double charging_ratio(double h1) {
    if (!(h1 >= 0.0)) throw DomainError(fmt::format("charging_ratio: h1 = {} must be >= 0", h1));
    if (h1 == 0.0) return 1.0;
    // q = u^2 removes the square-root endpoint behaviour
    auto f = [h1](double u) { return 2.0 * u * u * u / (1.0 + h1 * u); };
    double err = 0.0;
    const double integral =
        boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, 0.0, 1.0, 15, 1e-13, &err);
    return 2.0 * (1.0 + h1) * integral;
}

} // namespace hsbc
