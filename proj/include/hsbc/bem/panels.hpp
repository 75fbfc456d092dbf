#pragma once

#include <hsbc/bem/mesh.hpp>
#include <hsbc/bem/quadrature.hpp>

#include <algorithm>
#include <array>
#include <vector>

namespace hsbc::bem {

enum class GeometryModel {
    Flat,      // straight-sided triangles
    Quadratic, // 6-node patches with edge midpoints lifted onto the estimated surface
};

/// Quadratic triangular patch over the reference triangle, nodes ordered
/// corners 0, 1, 2 then edge midpoints 01, 12, 20.
class QuadraticPatch {
public:
    QuadraticPatch() = default;
    explicit QuadraticPatch(const std::array<Vec3, 6> &nodes) : x_(nodes) {}

    Vec3 position(double u, double v) const {
        const double w = 1.0 - u - v;
        return w * (2.0 * w - 1.0) * x_[0] + u * (2.0 * u - 1.0) * x_[1] + v * (2.0 * v - 1.0) * x_[2] +
               4.0 * w * u * x_[3] + 4.0 * u * v * x_[4] + 4.0 * v * w * x_[5];
    }

    /// Tangents d/du, d/dv.
    std::array<Vec3, 2> tangents(double u, double v) const {
        const double w = 1.0 - u - v;
        const Vec3 du = -(4.0 * w - 1.0) * x_[0] + (4.0 * u - 1.0) * x_[1] + 4.0 * (w - u) * x_[3] +
                        4.0 * v * x_[4] - 4.0 * v * x_[5];
        const Vec3 dv = -(4.0 * w - 1.0) * x_[0] + (4.0 * v - 1.0) * x_[2] - 4.0 * u * x_[3] +
                        4.0 * u * x_[4] + 4.0 * (w - v) * x_[5];
        return {du, dv};
    }

    /// Unnormalised normal du x dv; its norm is the area element per du dv.
    Vec3 jacobian(double u, double v) const {
        const auto [du, dv] = tangents(u, v);
        return du.cross(dv);
    }

    const std::array<Vec3, 6> &nodes() const noexcept { return x_; }

private:
    std::array<Vec3, 6> x_{};
};

struct QuadPoint {
    Vec3 position;
    double weight; // physical area weight
};

/// Per-panel geometry consumed by the operator: collocation point and
/// normal, curved area, diameter, and a 16-point rule on the patch.
struct PanelGeometry {
    std::vector<QuadraticPatch> patches;
    std::vector<Vec3> collocation;
    std::vector<Vec3> normal;
    std::vector<double> area;
    std::vector<double> diameter;
    std::vector<std::array<QuadPoint, 16>> rule;

    std::size_t size() const noexcept { return patches.size(); }

    double total_area() const {
        double s = 0.0;
        for (double a : area) s += a;
        return s;
    }
};

/// Midpoint of edge (a, b) lifted along the mean vertex normal by the sag of
/// the circular arc through a and b with end normals na and nb.
inline Vec3 lifted_midpoint(const Vec3 &pa, const Vec3 &pb, const Vec3 &na, const Vec3 &nb) {
    const Vec3 mid = 0.5 * (pa + pb);
    Vec3 dir = na + nb;
    const double len = dir.norm();
    if (!(len > 0.0)) return mid;
    dir /= len;
    const double sag = (nb - na).dot(pb - pa) / 8.0;
    return mid + sag * dir;
}

inline PanelGeometry build_geometry(const SurfaceMesh &mesh, GeometryModel model) {
    PanelGeometry g;
    const std::size_t n = mesh.size();
    g.patches.reserve(n);
    const auto vn = model == GeometryModel::Quadratic ? mesh.vertex_normals() : std::vector<Vec3>{};
    const auto &verts = mesh.vertices();
    for (std::size_t i = 0; i < n; ++i) {
        const auto &t = mesh.triangles()[i];
        const Vec3 &a = verts[t[0]], &b = verts[t[1]], &c = verts[t[2]];
        std::array<Vec3, 6> nodes{a, b, c, 0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)};
        if (model == GeometryModel::Quadratic) {
            nodes[3] = lifted_midpoint(a, b, vn[t[0]], vn[t[1]]);
            nodes[4] = lifted_midpoint(b, c, vn[t[1]], vn[t[2]]);
            nodes[5] = lifted_midpoint(c, a, vn[t[2]], vn[t[0]]);
        }
        g.patches.emplace_back(nodes);
    }

    g.collocation.resize(n);
    g.normal.resize(n);
    g.area.resize(n);
    g.diameter.resize(n);
    g.rule.resize(n);
    const auto &tri = dunavant16();
    for (std::size_t i = 0; i < n; ++i) {
        const auto &p = g.patches[i];
        constexpr double third = 1.0 / 3.0;
        g.collocation[i] = p.position(third, third);
        g.normal[i] = p.jacobian(third, third).normalized();
        double area = 0.0;
        for (std::size_t q = 0; q < tri.size(); ++q) {
            // reference triangle has area 1/2
            const double w = 0.5 * tri[q].weight * p.jacobian(tri[q].u, tri[q].v).norm();
            g.rule[i][q] = {p.position(tri[q].u, tri[q].v), w};
            area += w;
        }
        g.area[i] = area;
        const auto &[a, b, c] = mesh.corners(i);
        g.diameter[i] = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    }
    return g;
}

} // namespace hsbc::bem
