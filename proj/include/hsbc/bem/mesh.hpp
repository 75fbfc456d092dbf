#pragma once

#include <hsbc/error.hpp>

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace hsbc::bem {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

/// Triangulated surface; lengths in Angstrom. Triangles are counter-clockwise
/// seen from outside, so the flat normal (b - a) x (c - a) points outward.
class SurfaceMesh {
public:
    SurfaceMesh() = default;

    SurfaceMesh(std::vector<Vec3> vertices, std::vector<Triangle> triangles)
        : vertices_(std::move(vertices)), triangles_(std::move(triangles)) {
        const int nv = static_cast<int>(vertices_.size());
        centroids_.reserve(triangles_.size());
        areas_.reserve(triangles_.size());
        normals_.reserve(triangles_.size());
        for (std::size_t i = 0; i < triangles_.size(); ++i) {
            for (int v : triangles_[i])
                if (v < 0 || v >= nv)
                    throw ValidationError(fmt::format("mesh: triangle {} references vertex {} of {}", i, v, nv));
            const auto &[a, b, c] = corners(i);
            const Vec3 cr = (b - a).cross(c - a);
            const double twice = cr.norm();
            if (!(twice > 0.0)) throw ValidationError(fmt::format("mesh: triangle {} is degenerate", i));
            centroids_.push_back((a + b + c) / 3.0);
            areas_.push_back(0.5 * twice);
            normals_.push_back(cr / twice);
        }
    }

    const std::vector<Vec3> &vertices() const noexcept { return vertices_; }
    const std::vector<Triangle> &triangles() const noexcept { return triangles_; }
    std::size_t size() const noexcept { return triangles_.size(); }

    std::array<Vec3, 3> corners(std::size_t i) const {
        const auto &t = triangles_[i];
        return {vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]};
    }
    const Vec3 &centroid(std::size_t i) const { return centroids_[i]; }
    double area(std::size_t i) const { return areas_[i]; }
    const Vec3 &normal(std::size_t i) const { return normals_[i]; }

    double total_area() const {
        double s = 0.0;
        for (double a : areas_) s += a;
        return s;
    }

    /// Sum of area-weighted normals; zero for a closed surface.
    Vec3 closure_vector() const {
        Vec3 s = Vec3::Zero();
        for (std::size_t i = 0; i < size(); ++i) s += areas_[i] * normals_[i];
        return s;
    }

    bool is_closed(double rel_tol = 1e-8) const {
        return !triangles_.empty() && closure_vector().norm() <= rel_tol * total_area();
    }

    /// Enclosed volume by the divergence theorem; positive for outward orientation.
    double signed_volume() const {
        double v = 0.0;
        for (std::size_t i = 0; i < size(); ++i) v += areas_[i] * centroids_[i].dot(normals_[i]);
        return v / 3.0;
    }

    SurfaceMesh flipped() const {
        auto tris = triangles_;
        for (auto &t : tris) std::swap(t[1], t[2]);
        return SurfaceMesh(vertices_, std::move(tris));
    }

    /// Area-weighted average of adjacent face normals, normalised.
    std::vector<Vec3> vertex_normals() const {
        std::vector<Vec3> vn(vertices_.size(), Vec3::Zero());
        for (std::size_t i = 0; i < size(); ++i)
            for (int v : triangles_[i]) vn[v] += areas_[i] * normals_[i];
        for (auto &n : vn) {
            const double len = n.norm();
            if (len > 0.0) n /= len;
        }
        return vn;
    }

private:
    std::vector<Vec3> vertices_;
    std::vector<Triangle> triangles_;
    std::vector<Vec3> centroids_;
    std::vector<double> areas_;
    std::vector<Vec3> normals_;
};

/// Geodesic sphere of radius R from a subdivided icosahedron; 20 * 4^n panels.
inline SurfaceMesh icosphere(double radius, int subdivisions) {
    if (subdivisions < 0 || subdivisions > 7)
        throw DomainError(fmt::format("icosphere: subdivisions = {} outside [0, 7]", subdivisions));
    if (!(radius > 0.0)) throw DomainError("icosphere: radius must be positive");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3> v = {{-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
                           {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
    for (auto &p : v) p.normalize();
    std::vector<Triangle> f = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
                               {1, 5, 9},  {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
                               {3, 9, 4},  {3, 4, 2},  {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
                               {4, 9, 5},  {2, 4, 11}, {6, 2, 10},  {8, 6, 7},  {9, 8, 1}};
    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            v.push_back((v[a] + v[b]).normalized());
            const int idx = static_cast<int>(v.size()) - 1;
            midpoint.emplace(key, idx);
            return idx;
        };
        std::vector<Triangle> next;
        next.reserve(f.size() * 4);
        for (const auto &[a, b, c] : f) {
            const int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
            next.push_back({a, ab, ca});
            next.push_back({b, bc, ab});
            next.push_back({c, ca, bc});
            next.push_back({ab, bc, ca});
        }
        f = std::move(next);
    }
    for (auto &p : v) p *= radius;
    return SurfaceMesh(std::move(v), std::move(f));
}

// ---------------------------------------------------------------------------
// OFF files

namespace detail {

/// Yields non-empty, comment-stripped lines with their 1-based line numbers.
class LineReader {
public:
    explicit LineReader(std::istream &in) : in_(in) {}

    bool next(std::string &out) {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
            if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
            out = std::move(line);
            return true;
        }
        return false;
    }

    std::size_t line() const noexcept { return lineno_; }

private:
    std::istream &in_;
    std::size_t lineno_ = 0;
};

} // namespace detail

/// ASCII OFF, triangles only. A mesh with inward orientation is flipped.
inline SurfaceMesh read_off(std::istream &in) {
    detail::LineReader reader(in);
    std::string line;
    if (!reader.next(line)) throw ParseError("OFF: empty input", reader.line());
    std::istringstream head(line);
    std::string magic;
    head >> magic;
    if (magic != "OFF") throw ParseError("OFF: missing 'OFF' header", reader.line());
    long nv = -1, nf = -1, ne = 0;
    if (!(head >> nv)) {
        if (!reader.next(line)) throw ParseError("OFF: missing counts", reader.line());
        head = std::istringstream(line);
        head >> nv;
    }
    if (!(head >> nf) || nv < 0 || nf < 0) throw ParseError("OFF: bad vertex/face counts", reader.line());
    head >> ne;

    std::vector<Vec3> verts;
    verts.reserve(static_cast<std::size_t>(nv));
    for (long i = 0; i < nv; ++i) {
        if (!reader.next(line)) throw ParseError("OFF: unexpected end of vertex list", reader.line());
        std::istringstream ls(line);
        double x, y, z;
        if (!(ls >> x >> y >> z)) throw ParseError("OFF: bad vertex", reader.line());
        verts.emplace_back(x, y, z);
    }
    std::vector<Triangle> tris;
    tris.reserve(static_cast<std::size_t>(nf));
    for (long i = 0; i < nf; ++i) {
        if (!reader.next(line)) throw ParseError("OFF: unexpected end of face list", reader.line());
        std::istringstream ls(line);
        int n = 0;
        Triangle t{};
        if (!(ls >> n)) throw ParseError("OFF: bad face", reader.line());
        if (n != 3) throw ParseError(fmt::format("OFF: only triangles supported, got {}-gon", n), reader.line());
        if (!(ls >> t[0] >> t[1] >> t[2])) throw ParseError("OFF: bad face indices", reader.line());
        for (int idx : t)
            if (idx < 0 || idx >= nv) throw ParseError("OFF: face index out of range", reader.line());
        tris.push_back(t);
    }
    SurfaceMesh mesh;
    try {
        mesh = SurfaceMesh(std::move(verts), std::move(tris));
    } catch (const ValidationError &e) {
        throw ParseError(std::string("OFF: ") + e.what(), reader.line());
    }
    return mesh.signed_volume() < 0.0 ? mesh.flipped() : mesh;
}

inline SurfaceMesh read_off(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open mesh file " + path.string());
    return read_off(in);
}

inline void write_off(const SurfaceMesh &mesh, std::ostream &out) {
    fmt::print(out, "OFF\n{} {} 0\n", mesh.vertices().size(), mesh.size());
    for (const auto &v : mesh.vertices()) fmt::print(out, "{:.17g} {:.17g} {:.17g}\n", v.x(), v.y(), v.z());
    for (const auto &t : mesh.triangles()) fmt::print(out, "3 {} {} {}\n", t[0], t[1], t[2]);
}

// ---------------------------------------------------------------------------
// Point charges

struct PointCharge {
    Vec3 position = Vec3::Zero(); // Angstrom
    double charge = 0.0;          // e0
};

using ChargeSet = std::vector<PointCharge>;

/// Plain text, one `x y z q` per line; `#` starts a comment.
inline ChargeSet read_charges(std::istream &in) {
    detail::LineReader reader(in);
    ChargeSet out;
    std::string line;
    while (reader.next(line)) {
        std::istringstream ls(line);
        double x, y, z, q;
        std::string extra;
        if (!(ls >> x >> y >> z >> q) || (ls >> extra))
            throw ParseError("charges: expected 'x y z q'", reader.line());
        out.push_back({Vec3(x, y, z), q});
    }
    return out;
}

inline ChargeSet read_charges(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open charge file " + path.string());
    return read_charges(in);
}

/// Generalised winding number of the surface around p (1 inside, 0 outside),
/// from the solid angles of the triangles.
inline double winding_number(const SurfaceMesh &mesh, const Vec3 &p) {
    double total = 0.0;
    for (std::size_t i = 0; i < mesh.size(); ++i) {
        const auto &[a0, b0, c0] = mesh.corners(i);
        const Vec3 a = a0 - p, b = b0 - p, c = c0 - p;
        const double la = a.norm(), lb = b.norm(), lc = c.norm();
        const double num = a.dot(b.cross(c));
        const double den = la * lb * lc + a.dot(b) * lc + a.dot(c) * lb + b.dot(c) * la;
        total += 2.0 * std::atan2(num, den);
    }
    return total / (4.0 * std::numbers::pi);
}

inline bool is_inside(const SurfaceMesh &mesh, const Vec3 &p) { return winding_number(mesh, p) > 0.5; }

} // namespace hsbc::bem
