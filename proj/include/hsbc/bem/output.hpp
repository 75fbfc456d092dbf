#pragma once

#include <hsbc/bem/solver.hpp>

#include <json.hpp>

#include <ostream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace hsbc::bem {

/// Per-panel CSV: index, collocation point, normal, area, sigma, E_n.
inline void write_sigma_csv(const PanelSystem &system, std::ostream &out) {
    const auto &g = system.geometry();
    const auto &sigma = system.sigma();
    const auto &field = system.normal_field();
    fmt::print(out, "panel,x,y,z,nx,ny,nz,area,sigma,E_n\n");
    for (std::size_t k = 0; k < g.size(); ++k) {
        const auto i = static_cast<Eigen::Index>(k);
        const auto &c = g.collocation[k];
        const auto &n = g.normal[k];
        fmt::print(out, "{},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.10g},{:.12g},{:.12g}\n", k, c.x(),
                   c.y(), c.z(), n.x(), n.y(), n.z(), g.area[k], sigma(i), field(i));
    }
}

inline nlohmann::json solution_summary(const PanelSystem &system, const SolveReport &report, double energy) {
    return {{"energy_kJ_mol", energy},
            {"iterations", report.iterations},
            {"krylov_iterations", report.krylov_iterations},
            {"residual", report.residual},
            {"panels", system.size()},
            {"alpha", system.alpha()},
            {"eps_in", system.eps_in()},
            {"eps_out", system.eps_out()}};
}

} // namespace hsbc::bem
