#pragma once

#include <hsbc/bem/gmres.hpp>
#include <hsbc/bem/mesh.hpp>
#include <hsbc/bem/panels.hpp>
#include <hsbc/bem/quadrature.hpp>
#include <hsbc/error.hpp>
#include <hsbc/units.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include <fmt/format.h>

namespace hsbc::bem {

struct BemOptions {
    GeometryModel geometry = GeometryModel::Quadratic;
    double near_factor = 2.0; // near field when distance < near_factor * panel diameter
    int self_order = 10;      // Gauss points per direction of the Duffy self rule
    GmresOptions gmres{};
    double picard_tolerance = 1e-8;
    int picard_max_iterations = 50;
    double relaxation = 0.5; // weight of the new h after an increase of the residual
};

struct SolveReport {
    Eigen::VectorXd sigma;
    int iterations = 0;        // outer Picard iterations (0 for a linear solve)
    int krylov_iterations = 0; // total GMRES iterations
    double residual = 0.0;     // relative residual of the equation solved
};

/// Dielectric problem on a closed surface: point charges inside a region of
/// permittivity eps_in, surrounded by eps_out. Unknown is the induced surface
/// charge sigma per panel, in the reduced units where G = 1/(4 pi r).
class PanelSystem {
public:
    PanelSystem(SurfaceMesh mesh, ChargeSet charges, double eps_in, double eps_out, double alpha = 0.0,
                BemOptions options = {})
        : mesh_(std::move(mesh)), charges_(std::move(charges)), eps_in_(eps_in), eps_out_(eps_out),
          alpha_(alpha), options_(std::move(options)) {
        if (mesh_.size() == 0) throw ValidationError("panel system: empty mesh");
        if (!mesh_.is_closed()) throw ValidationError("panel system: mesh is not closed");
        if (mesh_.size() > 10000)
            throw ValidationError(fmt::format("panel system: {} panels exceeds the dense limit of 10000",
                                              mesh_.size()));
        if (!(eps_in_ > 0.0) || !(eps_out_ > 0.0)) throw DomainError("panel system: permittivities must be positive");
        if (!(alpha_ >= 0.0)) throw DomainError("panel system: alpha must be >= 0");
        if (charges_.empty()) throw ValidationError("panel system: no charges");
        for (std::size_t i = 0; i < charges_.size(); ++i)
            if (!is_inside(mesh_, charges_[i].position))
                throw ValidationError(fmt::format("panel system: charge {} lies outside the surface", i));
        if (gauss_unit_interval(options_.self_order).empty())
            throw ValidationError(fmt::format("panel system: unsupported self_order {}", options_.self_order));
        geometry_ = build_geometry(mesh_, options_.geometry);
        assemble();
        coulomb_ = coulomb_normal_derivative();
    }

    const SurfaceMesh &mesh() const noexcept { return mesh_; }
    const ChargeSet &charges() const noexcept { return charges_; }
    const PanelGeometry &geometry() const noexcept { return geometry_; }
    const BemOptions &options() const noexcept { return options_; }
    double eps_in() const noexcept { return eps_in_; }
    double eps_out() const noexcept { return eps_out_; }
    double alpha() const noexcept { return alpha_; }
    double contrast() const noexcept { return (eps_out_ - eps_in_) / eps_out_; }
    std::size_t size() const noexcept { return geometry_.size(); }

    /// Dense K with K(j, k) = integral over panel k of dG/dn_j at collocation point j.
    const Eigen::MatrixXd &operator_matrix() const noexcept { return K_; }
    /// Sum_i q_i dG/dn(x_j; r_i) per panel.
    const Eigen::VectorXd &coulomb_field() const noexcept { return coulomb_; }

    /// State after the last solve.
    const Eigen::VectorXd &sigma() const noexcept { return sigma_; }
    const Eigen::VectorXd &normal_field() const noexcept { return normal_field_; }

    void set_solution(Eigen::VectorXd sigma) {
        if (sigma.size() != static_cast<Eigen::Index>(size()))
            throw ValidationError("panel system: sigma has the wrong length");
        normal_field_ = compute_normal_field(sigma);
        sigma_ = std::move(sigma);
    }

    /// E_n = 4 pi (sum_i q_i dG/dn - K sigma), the field just inside the surface.
    Eigen::VectorXd compute_normal_field(const Eigen::VectorXd &sigma) const {
        return 4.0 * std::numbers::pi * (coulomb_ - K_ * sigma);
    }

private:
    double self_term(std::size_t j, const std::vector<LinePoint> &gl) const {
        const auto &patch = geometry_.patches[j];
        const Vec3 &x = geometry_.collocation[j];
        const Vec3 &n = geometry_.normal[j];
        constexpr double third = 1.0 / 3.0;
        // sub-triangles (c, a, b) around the collocation point in (u, v)
        static constexpr std::array<std::array<double, 2>, 3> corner = {{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
        double total = 0.0;
        for (int e = 0; e < 3; ++e) {
            const auto &a = corner[e];
            const auto &b = corner[(e + 1) % 3];
            const double au = a[0] - third, av = a[1] - third, bu = b[0] - third, bv = b[1] - third;
            const double det = std::abs(au * bv - av * bu);
            for (const auto &ps : gl) {
                for (const auto &pt : gl) {
                    const double s = ps.x, t = pt.x;
                    const double u = third + s * ((1.0 - t) * au + t * bu);
                    const double v = third + s * ((1.0 - t) * av + t * bv);
                    const Vec3 y = patch.position(u, v);
                    const double dA = patch.jacobian(u, v).norm() * det * s;
                    const Vec3 d = x - y;
                    const double r = d.norm();
                    if (r == 0.0) continue;
                    total += ps.weight * pt.weight * dA * d.dot(n) / (4.0 * std::numbers::pi * r * r * r);
                }
            }
        }
        return total;
    }

    void assemble() {
        const auto n = static_cast<Eigen::Index>(size());
        K_.resize(n, n);
        const auto gl = gauss_unit_interval(options_.self_order);
        const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
        // each entry is computed independently, so the result does not depend on the thread count
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < n; ++j) {
            const Vec3 &x = geometry_.collocation[j];
            const Vec3 &nj = geometry_.normal[j];
            for (Eigen::Index k = 0; k < n; ++k) {
                if (k == j) {
                    K_(j, k) = self_term(static_cast<std::size_t>(j), gl);
                    continue;
                }
                const Vec3 d = x - geometry_.collocation[k];
                const double r = d.norm();
                if (r < options_.near_factor * geometry_.diameter[k]) {
                    double s = 0.0;
                    for (const auto &q : geometry_.rule[k]) {
                        const Vec3 dq = x - q.position;
                        const double rq = dq.norm();
                        s += q.weight * dq.dot(nj) / (rq * rq * rq);
                    }
                    K_(j, k) = s * inv4pi;
                } else {
                    K_(j, k) = geometry_.area[k] * d.dot(nj) * inv4pi / (r * r * r);
                }
            }
        }
    }

    Eigen::VectorXd coulomb_normal_derivative() const {
        const auto n = static_cast<Eigen::Index>(size());
        Eigen::VectorXd g(n);
        const double inv4pi = 1.0 / (4.0 * std::numbers::pi);
#pragma omp parallel for schedule(static)
        for (Eigen::Index j = 0; j < n; ++j) {
            double s = 0.0;
            for (const auto &c : charges_) {
                const Vec3 d = geometry_.collocation[j] - c.position;
                const double r = d.norm();
                s -= c.charge * d.dot(geometry_.normal[j]) * inv4pi / (r * r * r);
            }
            g(j) = s;
        }
        return g;
    }

    SurfaceMesh mesh_;
    ChargeSet charges_;
    double eps_in_;
    double eps_out_;
    double alpha_;
    BemOptions options_;
    PanelGeometry geometry_;
    Eigen::MatrixXd K_;
    Eigen::VectorXd coulomb_;
    Eigen::VectorXd sigma_;
    Eigen::VectorXd normal_field_;
};

inline Eigen::VectorXd apply_K(const PanelSystem &system, const Eigen::VectorXd &sigma) {
    if (sigma.size() != static_cast<Eigen::Index>(system.size()))
        throw ValidationError("apply_K: sigma has the wrong length");
    return system.operator_matrix() * sigma;
}

namespace detail {

/// (I + diag(h) + eps_hat (-I/2 + K)) sigma
inline Eigen::VectorXd apply_bie(const PanelSystem &system, const Eigen::VectorXd &h, const Eigen::VectorXd &sigma) {
    const double e = system.contrast();
    Eigen::VectorXd out = (1.0 - 0.5 * e) * sigma + e * (system.operator_matrix() * sigma);
    if (h.size() != 0) out += h.cwiseProduct(sigma);
    return out;
}

inline GmresResult solve_frozen(const PanelSystem &system, const Eigen::VectorXd &h, const Eigen::VectorXd &guess) {
    const Eigen::VectorXd rhs = system.contrast() * system.coulomb_field();
    return gmres([&](const Eigen::VectorXd &v) { return apply_bie(system, h, v); }, rhs, guess,
                 system.options().gmres);
}

inline double relative_residual(const PanelSystem &system, const Eigen::VectorXd &h, const Eigen::VectorXd &sigma) {
    const Eigen::VectorXd rhs = system.contrast() * system.coulomb_field();
    const double bn = rhs.norm();
    const double rn = (rhs - apply_bie(system, h, sigma)).norm();
    return bn == 0.0 ? rn : rn / bn;
}

inline Eigen::VectorXd h_of_field(const Eigen::VectorXd &field, double alpha) {
    return alpha * field.cwiseAbs().cwiseSqrt();
}

} // namespace detail

/// Residual of the nonlinear equation at sigma, relative to the right-hand side.
inline double nonlinear_residual(const PanelSystem &system, const Eigen::VectorXd &sigma) {
    const Eigen::VectorXd h = detail::h_of_field(system.compute_normal_field(sigma), system.alpha());
    return detail::relative_residual(system, h, sigma);
}

/// (I + eps_hat (-I/2 + K)) sigma = eps_hat sum_i q_i dG/dn.
inline SolveReport solve_linear(PanelSystem &system) {
    const auto n = static_cast<Eigen::Index>(system.size());
    const auto res = detail::solve_frozen(system, Eigen::VectorXd(), Eigen::VectorXd::Zero(n));
    if (!res.converged)
        throw IterationError("solve_linear: GMRES did not reach the tolerance", res.iterations, res.residual);
    system.set_solution(res.x);
    return {res.x, 0, res.iterations, res.residual};
}

/// Nonlinear equation with h_j = alpha sqrt|E_n,j| multiplying sigma_j:
/// Picard iteration that freezes h, solves the linear equation, updates h.
inline SolveReport solve_nonlinear(PanelSystem &system) {
    SolveReport report = solve_linear(system);
    if (system.alpha() == 0.0) return report;

    const auto &opts = system.options();
    Eigen::VectorXd sigma = report.sigma;
    Eigen::VectorXd h = detail::h_of_field(system.compute_normal_field(sigma), system.alpha());
    double previous = detail::relative_residual(system, h, sigma);
    for (int it = 1; it <= opts.picard_max_iterations; ++it) {
        const auto inner = detail::solve_frozen(system, h, sigma);
        if (!inner.converged)
            throw IterationError("solve_nonlinear: inner GMRES did not reach the tolerance", inner.iterations,
                                 inner.residual);
        report.krylov_iterations += inner.iterations;
        sigma = inner.x;
        const Eigen::VectorXd h_new = detail::h_of_field(system.compute_normal_field(sigma), system.alpha());
        const double residual = detail::relative_residual(system, h_new, sigma);
        report.iterations = it;
        report.residual = residual;
        if (residual <= opts.picard_tolerance) {
            system.set_solution(sigma);
            report.sigma = std::move(sigma);
            return report;
        }
        h = residual > previous ? (opts.relaxation * h_new + (1.0 - opts.relaxation) * h) : h_new;
        previous = residual;
    }
    throw IterationError("solve_nonlinear: Picard iteration stagnated", report.iterations, report.residual);
}

/// Reaction potential of sigma at each charge, integral of sigma G dA / eps_in.
inline std::vector<double> reaction_potential(const PanelSystem &system, const Eigen::VectorXd &sigma) {
    const auto &g = system.geometry();
    std::vector<double> phi;
    phi.reserve(system.charges().size());
    for (const auto &c : system.charges()) {
        double s = 0.0;
        for (std::size_t k = 0; k < g.size(); ++k) {
            double integral = 0.0;
            for (const auto &q : g.rule[k]) integral += q.weight / (q.position - c.position).norm();
            s += sigma(static_cast<Eigen::Index>(k)) * integral;
        }
        phi.push_back(s / (4.0 * std::numbers::pi * system.eps_in()));
    }
    return phi;
}

/// 1/2 sum_i q_i phi_reac(r_i) in kJ/mol.
inline double reaction_energy(const PanelSystem &system, const Eigen::VectorXd &sigma, const UnitSystem &units = {}) {
    if (sigma.size() != static_cast<Eigen::Index>(system.size()))
        throw ValidationError("reaction_energy: sigma has the wrong length");
    const auto phi = reaction_potential(system, sigma);
    double e = 0.0;
    for (std::size_t i = 0; i < phi.size(); ++i) e += 0.5 * system.charges()[i].charge * phi[i];
    // reduced units: a charge q carries the field q / (4 pi r^2); 8 pi K_B restores kJ/mol
    return 8.0 * std::numbers::pi * units.born_constant * e;
}

inline double reaction_energy(const PanelSystem &system, const UnitSystem &units = {}) {
    return reaction_energy(system, system.sigma(), units);
}

} // namespace hsbc::bem
