#pragma once

// Triangle meshes: storage with per-vertex one-rings, an OBJ subset reader,
// analytic test surfaces and a small z-buffered PPM renderer.

#include "isoops/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace isoops {

using Vec3 = Eigen::Vector3d;
using Triangle = std::array<int, 3>;

struct TriMesh
{
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    /// Unit per-vertex normals; empty until computed or supplied.
    std::vector<Vec3> normals;
    /// Neighbors of each vertex ordered around it (counter-clockwise seen from
    /// the outside for consistently oriented meshes).
    std::vector<std::vector<int>> one_rings;
    /// True where the ring is not a closed cycle.
    std::vector<bool> boundary;

    std::size_t vertex_count() const { return vertices.size(); }
};

/// Fills one_rings and boundary from the triangle list.
inline void build_topology(TriMesh& m)
{
    const int n = static_cast<int>(m.vertices.size());
    for (const auto& t : m.triangles) {
        for (int v : t) require(v >= 0 && v < n, ErrorCode::InvalidArgument, "triangle index out of range");
        require(t[0] != t[1] && t[1] != t[2] && t[0] != t[2], ErrorCode::InvalidArgument, "degenerate triangle");
    }
    // next[v] maps a ring neighbor a to b for every triangle (v, a, b).
    std::vector<std::map<int, int>> next(static_cast<std::size_t>(n));
    std::vector<bool> nonmanifold(static_cast<std::size_t>(n), false);
    for (const auto& t : m.triangles) {
        for (int k = 0; k < 3; ++k) {
            const int v = t[static_cast<std::size_t>(k)];
            const int a = t[static_cast<std::size_t>((k + 1) % 3)];
            const int b = t[static_cast<std::size_t>((k + 2) % 3)];
            auto& nx = next[static_cast<std::size_t>(v)];
            if (!nx.emplace(a, b).second) nonmanifold[static_cast<std::size_t>(v)] = true;
        }
    }
    m.one_rings.assign(static_cast<std::size_t>(n), {});
    m.boundary.assign(static_cast<std::size_t>(n), false);
    for (int v = 0; v < n; ++v) {
        const auto& nx = next[static_cast<std::size_t>(v)];
        auto& ring = m.one_rings[static_cast<std::size_t>(v)];
        if (nx.empty()) {
            m.boundary[static_cast<std::size_t>(v)] = true;
            continue;
        }
        // Start at a neighbor with no predecessor if there is one (open fan).
        std::map<int, int> indegree;
        for (auto [a, b] : nx) {
            indegree[b]++;
            indegree.try_emplace(a, 0);
        }
        int start = nx.begin()->first;
        bool open = false;
        for (auto [a, d] : indegree) {
            if (d == 0) {
                start = a;
                open = true;
                break;
            }
        }
        int cur = start;
        bool closed = false;
        for (std::size_t guard = 0; guard <= nx.size() + 1; ++guard) {
            ring.push_back(cur);
            auto it = nx.find(cur);
            if (it == nx.end()) break;
            cur = it->second;
            if (cur == start) {
                closed = true;
                break;
            }
        }
        const bool complete = closed && ring.size() == nx.size();
        m.boundary[static_cast<std::size_t>(v)] = open || !complete || nonmanifold[static_cast<std::size_t>(v)];
        if (!complete && !open) {
            // several cycles around one vertex: keep every neighbor, unordered
            ring.clear();
            for (auto [a, d] : indegree) ring.push_back(a);
        }
    }
}

/// Angle-weighted average of incident face normals; zero-area faces skipped.
/// Vertices without a usable face get a zero vector.
inline std::vector<Vec3> vertex_normals(const TriMesh& m)
{
    std::vector<Vec3> acc(m.vertices.size(), Vec3::Zero());
    for (const auto& t : m.triangles) {
        const Vec3& p0 = m.vertices[static_cast<std::size_t>(t[0])];
        const Vec3& p1 = m.vertices[static_cast<std::size_t>(t[1])];
        const Vec3& p2 = m.vertices[static_cast<std::size_t>(t[2])];
        const Vec3 cr = (p1 - p0).cross(p2 - p0);
        const double area2 = cr.norm();
        const double scale = std::max({(p1 - p0).norm(), (p2 - p0).norm(), (p2 - p1).norm()});
        if (!(area2 > 1e-14 * scale * scale)) continue;
        const Vec3 fn = cr / area2;
        for (int k = 0; k < 3; ++k) {
            const Vec3& p = m.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])];
            const Vec3& q = m.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 1) % 3)])];
            const Vec3& r = m.vertices[static_cast<std::size_t>(t[static_cast<std::size_t>((k + 2) % 3)])];
            const Vec3 e1 = (q - p).normalized(), e2 = (r - p).normalized();
            const double ang = std::atan2(e1.cross(e2).norm(), e1.dot(e2));
            acc[static_cast<std::size_t>(t[static_cast<std::size_t>(k)])] += ang * fn;
        }
    }
    for (auto& n : acc) {
        const double len = n.norm();
        n = len > 0.0 ? Vec3(n / len) : Vec3::Zero();
    }
    return acc;
}

/// Topology plus normals (computed unless already supplied for every vertex).
inline void finalize(TriMesh& m)
{
    build_topology(m);
    if (m.normals.size() != m.vertices.size()) {
        m.normals = vertex_normals(m);
    } else {
        for (auto& n : m.normals) {
            const double len = n.norm();
            require(len > 0.0, ErrorCode::InvalidArgument, "supplied normal has zero length");
            n /= len;
        }
    }
}

namespace detail {

[[noreturn]] inline void parse_fail(int line, const std::string& msg)
{
    fail(ErrorCode::Parse, "line " + std::to_string(line) + ": " + msg);
}

inline double parse_real(const std::string& tok, int line)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size() || !std::isfinite(v)) parse_fail(line, "bad number '" + tok + "'");
        return v;
    } catch (const std::invalid_argument&) {
        parse_fail(line, "bad number '" + tok + "'");
    } catch (const std::out_of_range&) {
        parse_fail(line, "number out of range '" + tok + "'");
    }
}

inline int parse_index(const std::string& tok, int count, int line)
{
    long v = 0;
    std::size_t used = 0;
    try {
        v = std::stol(tok, &used);
    } catch (const std::logic_error&) {
        parse_fail(line, "bad index '" + tok + "'");
    }
    if (used != tok.size()) parse_fail(line, "bad index '" + tok + "'");
    const long idx = v > 0 ? v - 1 : count + v;
    if (v == 0 || idx < 0 || idx >= count) parse_fail(line, "index " + tok + " out of range");
    return static_cast<int>(idx);
}

} // namespace detail

/// OBJ subset: `v x y z`, `vn x y z`, `vt ...` (ignored), `f` with corners
/// `a`, `a/b`, `a//c`, `a/b/c` (negative indices count from the end; polygons
/// are fan-triangulated), `#` comments and blank lines. Anything else is a
/// Parse error naming the line. Normals are used only when every vertex gets one.
inline TriMesh read_obj(std::istream& in)
{
    TriMesh m;
    std::vector<Vec3> vn;
    std::vector<int> vertex_normal;
    int texcoords = 0;
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (!raw.empty() && raw.back() == '\r') raw.pop_back();
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::string tag;
        if (!(ls >> tag)) continue;
        std::vector<std::string> toks;
        for (std::string t; ls >> t;) toks.push_back(t);
        if (tag == "v" || tag == "vn") {
            if (toks.size() != 3) detail::parse_fail(line_no, tag + " needs 3 coordinates");
            const Vec3 p(detail::parse_real(toks[0], line_no), detail::parse_real(toks[1], line_no),
                         detail::parse_real(toks[2], line_no));
            if (tag == "v") {
                m.vertices.push_back(p);
                vertex_normal.push_back(-1);
            } else {
                vn.push_back(p);
            }
        } else if (tag == "vt") {
            if (toks.empty() || toks.size() > 3) detail::parse_fail(line_no, "vt needs 1 to 3 coordinates");
            for (const auto& t : toks) detail::parse_real(t, line_no);
            ++texcoords;
        } else if (tag == "f") {
            if (toks.size() < 3) detail::parse_fail(line_no, "face needs at least 3 corners");
            std::vector<int> corners;
            for (const auto& t : toks) {
                std::vector<std::string> parts;
                std::string part;
                std::istringstream ps(t);
                while (std::getline(ps, part, '/')) parts.push_back(part);
                if (!t.empty() && t.back() == '/') parts.push_back("");
                if (parts.empty() || parts.size() > 3 || parts[0].empty()) {
                    detail::parse_fail(line_no, "bad face corner '" + t + "'");
                }
                const int v = detail::parse_index(parts[0], static_cast<int>(m.vertices.size()), line_no);
                if (parts.size() >= 2 && !parts[1].empty()) detail::parse_index(parts[1], texcoords, line_no);
                if (parts.size() == 3) {
                    if (parts[2].empty()) detail::parse_fail(line_no, "bad face corner '" + t + "'");
                    const int n = detail::parse_index(parts[2], static_cast<int>(vn.size()), line_no);
                    vertex_normal[static_cast<std::size_t>(v)] = n;
                }
                corners.push_back(v);
            }
            for (std::size_t k = 1; k + 1 < corners.size(); ++k) {
                const Triangle tri{corners[0], corners[k], corners[k + 1]};
                if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
                    detail::parse_fail(line_no, "face repeats a vertex");
                }
                m.triangles.push_back(tri);
            }
        } else {
            detail::parse_fail(line_no, "unsupported statement '" + tag + "'");
        }
    }
    if (!m.vertices.empty() && std::all_of(vertex_normal.begin(), vertex_normal.end(), [](int k) { return k >= 0; })) {
        for (int k : vertex_normal) m.normals.push_back(vn[static_cast<std::size_t>(k)]);
    }
    finalize(m);
    return m;
}

inline TriMesh read_obj(const std::string& path)
{
    std::ifstream in(path);
    require(static_cast<bool>(in), ErrorCode::Io, "cannot open " + path);
    return read_obj(in);
}

inline void write_obj(std::ostream& os, const TriMesh& m)
{
    const auto old = os.precision(17);
    for (const auto& v : m.vertices) os << "v " << v.x() << " " << v.y() << " " << v.z() << "\n";
    for (const auto& t : m.triangles) os << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
    os.precision(old);
}

/// Subdivided icosahedron projected onto the unit sphere, outward orientation.
/// Level 4 has 2562 vertices and edges of about 0.066.
inline TriMesh icosphere(int level)
{
    require(level >= 0 && level <= 8, ErrorCode::InvalidArgument, "icosphere level must be in [0, 8]");
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    TriMesh m;
    for (const auto& p : {Vec3(-1, t, 0), Vec3(1, t, 0), Vec3(-1, -t, 0), Vec3(1, -t, 0), Vec3(0, -1, t),
                          Vec3(0, 1, t), Vec3(0, -1, -t), Vec3(0, 1, -t), Vec3(t, 0, -1), Vec3(t, 0, 1),
                          Vec3(-t, 0, -1), Vec3(-t, 0, 1)}) {
        m.vertices.push_back(p.normalized());
    }
    m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                   {11, 10, 2}, {10, 7, 6}, {7, 1, 8},   {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                   {3, 8, 9},  {4, 9, 5},  {2, 4, 11},  {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    for (int l = 0; l < level; ++l) {
        std::map<std::pair<int, int>, int> mid;
        auto midpoint = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = mid.find(key);
            if (it != mid.end()) return it->second;
            m.vertices.push_back((m.vertices[static_cast<std::size_t>(a)] + m.vertices[static_cast<std::size_t>(b)])
                                     .normalized());
            const int id = static_cast<int>(m.vertices.size()) - 1;
            mid.emplace(key, id);
            return id;
        };
        std::vector<Triangle> next;
        for (const auto& tr : m.triangles) {
            const int a = midpoint(tr[0], tr[1]), b = midpoint(tr[1], tr[2]), c = midpoint(tr[2], tr[0]);
            next.push_back({tr[0], a, c});
            next.push_back({tr[1], b, a});
            next.push_back({tr[2], c, b});
            next.push_back({a, b, c});
        }
        m.triangles = std::move(next);
    }
    finalize(m);
    return m;
}

/// (n+1) x (n+1) grid on [0, size]^2 in the plane z = 0, normals +z.
inline TriMesh grid_plane(int n, double size = 1.0)
{
    require(n >= 2, ErrorCode::InvalidArgument, "plane needs n >= 2");
    TriMesh m;
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i) m.vertices.emplace_back(size * i / n, size * j / n, 0.0);
    auto id = [n](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    finalize(m);
    return m;
}

/// Open cylinder of the given radius around the z axis, z in [0, height], with
/// `segments` vertices per ring; alternate rings are offset by half a segment.
inline TriMesh cylinder(int segments, int rings, double radius = 1.0, double height = 2.0)
{
    require(segments >= 3 && rings >= 1, ErrorCode::InvalidArgument, "cylinder needs segments >= 3, rings >= 1");
    TriMesh m;
    for (int r = 0; r <= rings; ++r) {
        const double z = height * r / rings;
        const double off = (r % 2) * 0.5;
        for (int s = 0; s < segments; ++s) {
            const double a = 2.0 * std::numbers::pi * (s + off) / segments;
            m.vertices.emplace_back(radius * std::cos(a), radius * std::sin(a), z);
        }
    }
    auto id = [segments](int r, int s) { return r * segments + ((s % segments) + segments) % segments; };
    for (int r = 0; r < rings; ++r) {
        for (int s = 0; s < segments; ++s) {
            if (r % 2 == 0) {
                m.triangles.push_back({id(r, s), id(r, s + 1), id(r + 1, s)});
                m.triangles.push_back({id(r, s + 1), id(r + 1, s + 1), id(r + 1, s)});
            } else {
                m.triangles.push_back({id(r, s), id(r, s + 1), id(r + 1, s + 1)});
                m.triangles.push_back({id(r, s), id(r + 1, s + 1), id(r + 1, s)});
            }
        }
    }
    finalize(m);
    return m;
}

/// Applies p -> s R p + t to vertices and R to supplied normals.
inline TriMesh transformed(const TriMesh& in, const Eigen::Matrix3d& rot, const Vec3& shift, double scale = 1.0)
{
    TriMesh m = in;
    for (auto& v : m.vertices) v = scale * (rot * v) + shift;
    for (auto& n : m.normals) n = rot * n;
    return m;
}

struct Rgb
{
    unsigned char r = 0, g = 0, b = 0;
};

/// Blue-white-red map of t in [0, 1].
inline Rgb diverging_color(double t)
{
    t = std::clamp(t, 0.0, 1.0);
    auto byte = [](double v) { return static_cast<unsigned char>(std::lround(255.0 * std::clamp(v, 0.0, 1.0))); };
    if (t < 0.5) {
        const double s = t / 0.5;
        return {byte(s), byte(s), 255};
    }
    const double s = (1.0 - t) / 0.5;
    return {255, byte(s), byte(s)};
}

/// Value at the given quantile (linear interpolation between order statistics).
inline double quantile(std::vector<double> v, double q)
{
    require(!v.empty(), ErrorCode::InvalidArgument, "quantile of an empty set");
    std::sort(v.begin(), v.end());
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct RgbImage
{
    int width = 0;
    int height = 0;
    std::vector<Rgb> pixels;
};

/// Orthographic view along -z after rotating the mesh so its bounding box is
/// centred. Per-vertex values are interpolated across faces and mapped over
/// their robust [2%, 98%] range; non-finite values render grey.
inline RgbImage render_values(const TriMesh& m, const std::vector<double>& values, int size = 512)
{
    require(values.size() == m.vertices.size(), ErrorCode::DimensionMismatch, "one value per vertex");
    require(size >= 8, ErrorCode::InvalidArgument, "image too small");
    RgbImage img{size, size, std::vector<Rgb>(static_cast<std::size_t>(size * size), Rgb{255, 255, 255})};
    std::vector<double> finite;
    for (double v : values)
        if (std::isfinite(v)) finite.push_back(v);
    const double lo = finite.empty() ? 0.0 : quantile(finite, 0.02);
    const double hi = finite.empty() ? 1.0 : quantile(finite, 0.98);
    const double span = hi > lo ? hi - lo : 1.0;

    // slight tilt so that flat and cylindrical shapes show depth
    const Eigen::Matrix3d rot =
        (Eigen::AngleAxisd(-0.5, Vec3::UnitX()) * Eigen::AngleAxisd(0.3, Vec3::UnitY())).toRotationMatrix();
    std::vector<Vec3> p;
    Vec3 lo3 = Vec3::Constant(1e300), hi3 = Vec3::Constant(-1e300);
    for (const auto& v : m.vertices) {
        p.push_back(rot * v);
        lo3 = lo3.cwiseMin(p.back());
        hi3 = hi3.cwiseMax(p.back());
    }
    const Vec3 c = 0.5 * (lo3 + hi3);
    const double ext = std::max({hi3.x() - lo3.x(), hi3.y() - lo3.y(), 1e-12});
    const double s = 0.9 * size / ext;
    for (auto& q : p) q = Vec3((q.x() - c.x()) * s + size / 2.0, (c.y() - q.y()) * s + size / 2.0, q.z());

    std::vector<double> depth(static_cast<std::size_t>(size * size), -1e300);
    for (const auto& t : m.triangles) {
        const Vec3& a = p[static_cast<std::size_t>(t[0])];
        const Vec3& b = p[static_cast<std::size_t>(t[1])];
        const Vec3& cc = p[static_cast<std::size_t>(t[2])];
        const double den = (b.x() - a.x()) * (cc.y() - a.y()) - (cc.x() - a.x()) * (b.y() - a.y());
        if (std::abs(den) < 1e-12) continue;
        const Vec3 wn = (rot * (m.vertices[static_cast<std::size_t>(t[1])] - m.vertices[static_cast<std::size_t>(t[0])]))
                            .cross(rot * (m.vertices[static_cast<std::size_t>(t[2])] -
                                          m.vertices[static_cast<std::size_t>(t[0])]))
                            .normalized();
        const double shade = 0.35 + 0.65 * std::abs(wn.z());
        const int x0 = std::max(0, static_cast<int>(std::floor(std::min({a.x(), b.x(), cc.x()}))));
        const int x1 = std::min(size - 1, static_cast<int>(std::ceil(std::max({a.x(), b.x(), cc.x()}))));
        const int y0 = std::max(0, static_cast<int>(std::floor(std::min({a.y(), b.y(), cc.y()}))));
        const int y1 = std::min(size - 1, static_cast<int>(std::ceil(std::max({a.y(), b.y(), cc.y()}))));
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const double px = x + 0.5, py = y + 0.5;
                const double l1 = ((b.x() - px) * (cc.y() - py) - (cc.x() - px) * (b.y() - py)) / den;
                const double l2 = ((cc.x() - px) * (a.y() - py) - (a.x() - px) * (cc.y() - py)) / den;
                const double l3 = 1.0 - l1 - l2;
                if (l1 < 0 || l2 < 0 || l3 < 0) continue;
                const double z = l1 * a.z() + l2 * b.z() + l3 * cc.z();
                const auto k = static_cast<std::size_t>(y * size + x);
                if (z <= depth[k]) continue;
                depth[k] = z;
                const double v = l1 * values[static_cast<std::size_t>(t[0])] + l2 * values[static_cast<std::size_t>(t[1])] +
                                 l3 * values[static_cast<std::size_t>(t[2])];
                Rgb col = std::isfinite(v) ? diverging_color((v - lo) / span) : Rgb{128, 128, 128};
                col.r = static_cast<unsigned char>(std::lround(col.r * shade));
                col.g = static_cast<unsigned char>(std::lround(col.g * shade));
                col.b = static_cast<unsigned char>(std::lround(col.b * shade));
                img.pixels[k] = col;
            }
        }
    }
    return img;
}

} // namespace isoops
