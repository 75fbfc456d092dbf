#pragma once

#include <boost/math/quadrature/gauss.hpp>

#include <array>
#include <cstddef>
#include <vector>

namespace hsbc::bem {

/// Point of a rule on the reference triangle {(u, v): u, v >= 0, u + v <= 1},
/// weights summing to 1 (multiply by the triangle area).
struct TrianglePoint {
    double u = 0.0;
    double v = 0.0;
    double weight = 0.0;
};

/// Dunavant's symmetric 16-point rule, exact for polynomials of degree 8.
inline const std::array<TrianglePoint, 16> &dunavant16() {
    static const std::array<TrianglePoint, 16> rule = [] {
        std::array<TrianglePoint, 16> r{};
        std::size_t k = 0;
        auto orbit3 = [&](double a, double b, double w) {
            // barycentrics (a, b, b) and rotations; (u, v) are the 2nd and 3rd
            r[k++] = {b, b, w};
            r[k++] = {a, b, w};
            r[k++] = {b, a, w};
        };
        auto orbit6 = [&](double a, double b, double c, double w) {
            r[k++] = {b, c, w};
            r[k++] = {c, b, w};
            r[k++] = {a, c, w};
            r[k++] = {c, a, w};
            r[k++] = {a, b, w};
            r[k++] = {b, a, w};
        };
        r[k++] = {1.0 / 3.0, 1.0 / 3.0, 0.144315607677787};
        orbit3(0.081414823414554, 0.459292588292723, 0.095091634267285);
        orbit3(0.658861384496480, 0.170569307751760, 0.103217370534718);
        orbit3(0.898905543365938, 0.050547228317031, 0.032458497623198);
        orbit6(0.008394777409958, 0.263112829634638, 0.728492392955404, 0.027230314174435);
        return r;
    }();
    return rule;
}

/// Gauss-Legendre rule of N points mapped to [0, 1]; weights sum to 1.
struct LinePoint {
    double x = 0.0;
    double weight = 0.0;
};

template <unsigned N>
std::vector<LinePoint> gauss_unit_interval() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto &abs = G::abscissa();
    const auto &w = G::weights();
    std::vector<LinePoint> out;
    // boost stores the non-negative half; odd N has the centre at index 0
    for (std::size_t i = 0; i < abs.size(); ++i) {
        const double x = abs[i];
        if (x == 0.0) {
            out.push_back({0.5, 0.5 * w[i]});
        } else {
            out.push_back({0.5 * (1.0 - x), 0.5 * w[i]});
            out.push_back({0.5 * (1.0 + x), 0.5 * w[i]});
        }
    }
    return out;
}

/// Run-time order selection over the orders the solver exposes.
inline std::vector<LinePoint> gauss_unit_interval(int n) {
    switch (n) {
    case 4: return gauss_unit_interval<4>();
    case 6: return gauss_unit_interval<6>();
    case 8: return gauss_unit_interval<8>();
    case 10: return gauss_unit_interval<10>();
    case 12: return gauss_unit_interval<12>();
    case 16: return gauss_unit_interval<16>();
    case 20: return gauss_unit_interval<20>();
    default: return {};
    }
}

} // namespace hsbc::bem
