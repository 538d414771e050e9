#pragma once

// Mean curvature H and curvedness R at mesh vertices from circular means over
// the one-ring:
//
//   k_j = 2 (Q_j - P) . n(P) / |Q_j - P|^2,   d_j = (n(Q_j) - n(P)) / |Q_j - P|
//   H = sum w_j k_j,   R^2 = sum w_j |d_j|^2
//
// with w_j the circular weights of the tangent-plane edge angles taken mod pi.
// Outward normals give H = -1 on the unit sphere.

#include "isoops/error.hpp"
#include "isoops/mesh.hpp"
#include "isoops/parallel.hpp"
#include "isoops/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <vector>

namespace isoops {

struct RingSample
{
    int neighbor = 0;
    double phi = 0.0;
    double rho = 0.0;
    double k = 0.0;
    Vec3 d = Vec3::Zero();
};

/// Ring samples of an interior vertex sorted by tangent angle, measured from
/// the projection of the first ring edge.
inline std::vector<RingSample> ring_frame(const TriMesh& m, int vertex)
{
    const auto v = static_cast<std::size_t>(vertex);
    require(vertex >= 0 && v < m.vertices.size(), ErrorCode::InvalidArgument, "vertex index out of range");
    require(m.normals.size() == m.vertices.size(), ErrorCode::InvalidArgument, "mesh has no normals");
    if (m.boundary[v]) fail(ErrorCode::BoundaryVertex, "vertex " + std::to_string(vertex) + " is on the boundary");
    const auto& ring = m.one_rings[v];
    require(ring.size() >= 3, ErrorCode::TooFewDirections, "vertex " + std::to_string(vertex) + " has < 3 neighbors");
    const Vec3& p = m.vertices[v];
    const Vec3& n = m.normals[v];
    require(n.norm() > 0.5, ErrorCode::DegenerateProjection, "vertex " + std::to_string(vertex) + " has no normal");

    std::vector<RingSample> out;
    Vec3 u = Vec3::Zero(), w = Vec3::Zero();
    for (int q : ring) {
        const Vec3 e = m.vertices[static_cast<std::size_t>(q)] - p;
        const double rho = e.norm();
        const Vec3 t = e - e.dot(n) * n;
        if (!(t.norm() >= 1e-8 * rho) || rho == 0.0) {
            fail(ErrorCode::DegenerateProjection,
                 "edge " + std::to_string(vertex) + "-" + std::to_string(q) + " is parallel to the normal");
        }
        if (out.empty()) {
            u = t.normalized();
            w = n.cross(u);
        }
        double phi = std::atan2(t.dot(w), t.dot(u));
        if (phi < 0.0) phi += 2.0 * std::numbers::pi;
        out.push_back({q, phi, rho, 2.0 * e.dot(n) / (rho * rho),
                       (m.normals[static_cast<std::size_t>(q)] - n) / rho});
    }
    std::stable_sort(out.begin(), out.end(), [](const RingSample& a, const RingSample& b) { return a.phi < b.phi; });
    return out;
}

struct VertexCurvature
{
    double H = std::numeric_limits<double>::quiet_NaN();
    double R = std::numeric_limits<double>::quiet_NaN();
    /// False for boundary vertices and where the uniform-weight fallback was used.
    bool valid = false;
};

/// Circular weights for ring angles reduced mod pi, in the order of `phis`.
/// Throws GapTooLarge when the reduced directions leave a gap >= pi/2.
inline std::vector<double> ring_weights(const std::vector<double>& phis)
{
    const std::size_t n = phis.size();
    std::vector<std::pair<double, std::size_t>> red;
    for (std::size_t j = 0; j < n; ++j) {
        double a = std::fmod(phis[j], std::numbers::pi);
        if (a < 0.0) a += std::numbers::pi;
        if (a >= std::numbers::pi) a = 0.0;
        red.emplace_back(a, j);
    }
    std::stable_sort(red.begin(), red.end());
    std::vector<double> angles;
    for (const auto& r : red) angles.push_back(r.first);
    const DirectionSet set = circular_weights(angles);
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k) w[red[k].second] = set.weights[k];
    return w;
}

inline VertexCurvature vertex_curvature(const TriMesh& m, int vertex)
{
    const auto ring = ring_frame(m, vertex);
    std::vector<double> phis;
    for (const auto& s : ring) phis.push_back(s.phi);
    VertexCurvature out;
    std::vector<double> w;
    try {
        w = ring_weights(phis);
        out.valid = true;
    } catch (const Error& e) {
        if (e.code() != ErrorCode::GapTooLarge) throw;
        w.assign(ring.size(), 1.0 / static_cast<double>(ring.size()));
        out.valid = false;
    }
    double h = 0.0, r2 = 0.0;
    for (std::size_t j = 0; j < ring.size(); ++j) {
        h += w[j] * ring[j].k;
        r2 += w[j] * ring[j].d.squaredNorm();
    }
    out.H = h;
    out.R = std::sqrt(r2);
    return out;
}

struct CurvatureSummary
{
    std::size_t valid = 0;
    std::size_t fallback = 0;
    std::size_t boundary = 0;
    double median_H = std::numeric_limits<double>::quiet_NaN();
    double median_R = std::numeric_limits<double>::quiet_NaN();
};

struct MeshCurvature
{
    std::vector<VertexCurvature> vertices;
    CurvatureSummary summary;
};

/// Per-vertex curvature; boundary and degenerate vertices are reported invalid
/// with NaN values, fallback vertices invalid with their uniform-weight values.
inline MeshCurvature mesh_curvature(const TriMesh& m)
{
    MeshCurvature out;
    out.vertices.resize(m.vertices.size());
    std::vector<char> is_boundary(m.vertices.size(), 0);
    parallel_rows(m.vertices.size(), [&](std::size_t v) {
        if (m.boundary[v] || m.one_rings[v].size() < 3) {
            is_boundary[v] = 1;
            return;
        }
        try {
            out.vertices[v] = vertex_curvature(m, static_cast<int>(v));
        } catch (const Error&) {
            out.vertices[v] = VertexCurvature{};
        }
    });
    std::vector<double> hs, rs;
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
        const auto& c = out.vertices[v];
        if (is_boundary[v]) {
            ++out.summary.boundary;
        } else if (c.valid) {
            ++out.summary.valid;
            hs.push_back(c.H);
            rs.push_back(c.R);
        } else {
            ++out.summary.fallback;
        }
    }
    if (!hs.empty()) {
        out.summary.median_H = quantile(hs, 0.5);
        out.summary.median_R = quantile(rs, 0.5);
    }
    return out;
}

/// CSV: vertex, H, R, valid.
inline void write_curvature_csv(std::ostream& os, const MeshCurvature& c)
{
    const auto old = os.precision(17);
    os << "vertex,H,R,valid\n";
    for (std::size_t v = 0; v < c.vertices.size(); ++v) {
        os << v << "," << c.vertices[v].H << "," << c.vertices[v].R << "," << (c.vertices[v].valid ? 1 : 0) << "\n";
    }
    os.precision(old);
}

} // namespace isoops
