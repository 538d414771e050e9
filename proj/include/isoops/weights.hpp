#pragma once

// Mean-value weights for direction sets.
//
// A weighted direction set {e_i, w_i} with sum w_i = 1 reproduces the sphere
// mean of every polynomial of a given degree when the Veronese images of the
// directions balance: sum w_i V(e_i) equals the sphere mean of V. For harmonic
// bases that mean is zero, which in 2D with degree 2 reduces to
// sum w_k exp(2 i phi_k) = 0.

#include "isoops/error.hpp"
#include "isoops/veronese.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

namespace isoops {

struct DirectionSet
{
    int ambient_dim = 0;
    std::vector<Vec> dirs;
    /// Empty when the set carries no weights.
    std::vector<double> weights;

    std::size_t size() const { return dirs.size(); }
    bool has_weights() const { return !weights.empty(); }
};

/// Unit vectors (cos a, sin a) for the given angles.
inline std::vector<Vec> circle_directions(std::span<const double> angles)
{
    std::vector<Vec> dirs;
    dirs.reserve(angles.size());
    for (double a : angles) {
        Vec e(2);
        e << std::cos(a), std::sin(a);
        dirs.push_back(std::move(e));
    }
    return dirs;
}

/// Weights proportional to the side lengths of the polygon circumscribed about
/// the unit circle whose outward normals are exp(2 i phi_k):
///   w_j ∝ tan(beta_{j-1}) + tan(beta_j),  beta_k = phi_{k+1} - phi_k (cyclic mod pi).
/// Angles must be non-decreasing in [0, pi); a repeated angle is a zero gap and
/// splits the weight of that direction between its copies.
inline DirectionSet circular_weights(std::span<const double> angles)
{
    const std::size_t n = angles.size();
    require(n >= 3, ErrorCode::TooFewDirections, "need at least 3 directions, got " + std::to_string(n));
    for (std::size_t k = 0; k < n; ++k) {
        require(std::isfinite(angles[k]) && angles[k] >= 0.0 && angles[k] < std::numbers::pi,
                ErrorCode::InvalidArgument, "angles must lie in [0, pi)");
        require(k == 0 || angles[k] >= angles[k - 1], ErrorCode::InvalidArgument, "angles must be sorted");
    }

    std::vector<double> tan_gap(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double gap = k + 1 < n ? angles[k + 1] - angles[k] : angles[0] + std::numbers::pi - angles[k];
        if (gap >= std::numbers::pi / 2) {
            fail(ErrorCode::GapTooLarge,
                 "angular gap " + std::to_string(gap) + " after direction " + std::to_string(k) + " is >= pi/2");
        }
        tan_gap[k] = std::tan(gap);
    }

    DirectionSet out;
    out.ambient_dim = 2;
    out.dirs = circle_directions(angles);
    out.weights.resize(n);
    double total = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        out.weights[j] = tan_gap[(j + n - 1) % n] + tan_gap[j];
        total += out.weights[j];
    }
    for (auto& w : out.weights) w /= total;
    return out;
}

/// sum_k w_k exp(2 i phi_k) for a weighted planar direction set.
inline std::complex<double> double_angle_residual(const DirectionSet& set)
{
    std::complex<double> s = 0.0;
    for (std::size_t k = 0; k < set.size(); ++k) {
        const double phi = std::atan2(set.dirs[k][1], set.dirs[k][0]);
        s += set.weights[k] * std::polar(1.0, 2.0 * phi);
    }
    return s;
}

struct AffineSolveOptions
{
    /// Singular values below rank_tol * sigma_max are treated as zero.
    double rank_tol = 1e-10;
    /// Accepted residual of the stacked system, relative to 1 + ||A|| ||w||.
    double residual_tol = 1e-9;
};

/// Least-norm weights with sum_i w_i v_i = target and sum_i w_i = 1.
/// Throws RankDeficientError when the stacked system is inconsistent.
inline Vec solve_affine_weights(const std::vector<Vec>& vectors, const Vec& target, AffineSolveOptions opt = {})
{
    require(!vectors.empty(), ErrorCode::TooFewDirections, "no vectors");
    const Eigen::Index dim = target.size();
    const auto n = static_cast<Eigen::Index>(vectors.size());
    Eigen::MatrixXd a(dim + 1, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        require(vectors[static_cast<std::size_t>(i)].size() == dim, ErrorCode::DimensionMismatch,
                "vector dimension does not match target");
        a.col(i).head(dim) = vectors[static_cast<std::size_t>(i)];
        a(dim, i) = 1.0;
    }
    Vec b(dim + 1);
    b.head(dim) = target;
    b[dim] = 1.0;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(opt.rank_tol);
    Vec w = svd.solve(b);
    const double residual = (a * w - b).norm();
    const double sigma_max = svd.singularValues().size() > 0 ? svd.singularValues()[0] : 0.0;
    if (!w.allFinite() || residual > opt.residual_tol * (1.0 + sigma_max * w.norm())) {
        throw RankDeficientError(static_cast<int>(svd.rank()), static_cast<int>(dim + 1),
                                 "no weights satisfy the mean-value system, residual " + std::to_string(residual));
    }
    return w;
}

/// Weights reproducing sphere means of degree-k polynomials from samples at `points`.
/// Harmonic: sum w_i G(P_i) = 0 for every harmonic G of degree k, sum w_i = 1.
/// Full: sum w_i F(P_i) equals the sphere mean of F for every homogeneous F of degree k.
/// Among all solutions the least-norm one is returned; weights may be negative.
inline DirectionSet veronese_weights(const std::vector<Vec>& points, int degree, BasisKind kind)
{
    require(!points.empty(), ErrorCode::TooFewDirections, "no points");
    const int dim = static_cast<int>(points.front().size());
    const PolyBasis basis = kind == BasisKind::Full ? full_basis(dim, degree) : harmonic_basis(dim, degree);
    const VeroneseImage img = evaluate_basis(basis, points);

    Vec target = Vec::Zero(static_cast<Eigen::Index>(basis.size()));
    if (kind == BasisKind::Full) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            target[static_cast<Eigen::Index>(j)] = basis.monomials[j].sphere_mean();
        }
    }
    const Vec w = solve_affine_weights(img.points, target);

    DirectionSet out;
    out.ambient_dim = dim;
    out.dirs = points;
    out.weights.assign(w.data(), w.data() + w.size());
    return out;
}

/// Points with exactly m coordinates equal to ±1/sqrt(m), all others zero.
struct MidpointLattice
{
    int ambient_dim = 0;
    int m = 0;
    std::vector<Vec> points;
    /// #M_1 / #M_m
    double normalizer = 0.0;

    std::size_t count() const { return points.size(); }
};

inline MidpointLattice midpoint_lattice(int ambient_dim, int m)
{
    require(ambient_dim >= 1, ErrorCode::InvalidArgument, "ambient dimension must be >= 1");
    require(m >= 1 && m <= ambient_dim, ErrorCode::InvalidArgument,
            "m must lie in [1, " + std::to_string(ambient_dim) + "], got " + std::to_string(m));
    MidpointLattice lat;
    lat.ambient_dim = ambient_dim;
    lat.m = m;
    const double s = 1.0 / std::sqrt(static_cast<double>(m));

    std::vector<int> support;
    auto emit = [&] {
        for (unsigned signs = 0; signs < (1u << m); ++signs) {
            Vec p = Vec::Zero(ambient_dim);
            for (int k = 0; k < m; ++k) p[support[static_cast<std::size_t>(k)]] = (signs >> k & 1u) ? -s : s;
            lat.points.push_back(std::move(p));
        }
    };
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(support.size()) == m) {
            emit();
            return;
        }
        for (int i = start; i < ambient_dim; ++i) {
            support.push_back(i);
            self(self, i + 1);
            support.pop_back();
        }
    };
    rec(rec, 0);
    lat.normalizer = 2.0 * ambient_dim / static_cast<double>(lat.points.size());
    return lat;
}

/// Equal-weight average of F over the lattice; F must be a constant plus a
/// homogeneous quadratic.
inline double lattice_mean(const Polynomial& f, const MidpointLattice& lattice)
{
    require(f.ambient_dim == lattice.ambient_dim, ErrorCode::DimensionMismatch, "polynomial/lattice dimension");
    for (const auto& [mono, c] : f.terms) {
        const int d = mono.degree();
        require(d == 0 || d == 2, ErrorCode::DegreeMismatch,
                "lattice means are exact for constant + quadratic terms only, got degree " + std::to_string(d));
    }
    double s = 0.0;
    for (const auto& p : lattice.points) s += f(p);
    return s / static_cast<double>(lattice.count());
}

/// Outcome of the n+1 point interpolation test: weights exist iff (A^T A)^{-1}
/// is diagonal, A having the points as columns.
struct FrameWeights
{
    bool ok = false;
    std::vector<double> weights;
    double off_diagonal_norm = 0.0;

    explicit operator bool() const { return ok; }
};

inline FrameWeights frame_weights(const std::vector<Vec>& points, double tol = 1e-10)
{
    require(!points.empty(), ErrorCode::TooFewDirections, "no points");
    const auto d = points.front().size();
    require(static_cast<Eigen::Index>(points.size()) == d, ErrorCode::DimensionMismatch,
            "frame_weights needs exactly ambient_dim points");
    Eigen::MatrixXd a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        require(points[static_cast<std::size_t>(i)].size() == d, ErrorCode::DimensionMismatch, "point dimension");
        a.col(i) = points[static_cast<std::size_t>(i)];
    }
    const Eigen::MatrixXd gram = a.transpose() * a;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    require(lu.isInvertible(), ErrorCode::Singular, "A^T A is singular");
    const Eigen::MatrixXd inv = lu.inverse();

    FrameWeights out;
    Eigen::MatrixXd off = inv;
    off.diagonal().setZero();
    out.off_diagonal_norm = off.norm();
    out.ok = off.cwiseAbs().maxCoeff() <= tol;
    if (out.ok) {
        for (Eigen::Index i = 0; i < d; ++i) out.weights.push_back(inv(i, i));
    }
    return out;
}

/// CSV: direction components then weight, one row per direction.
inline void write_direction_csv(std::ostream& os, const DirectionSet& set)
{
    os << "# directions=" << set.size() << " ambient_dim=" << set.ambient_dim << "\n";
    for (int i = 0; i < set.ambient_dim; ++i) os << "x" << (i + 1) << ",";
    os << "weight\n";
    const auto old = os.precision(17);
    for (std::size_t k = 0; k < set.size(); ++k) {
        for (int i = 0; i < set.ambient_dim; ++i) os << set.dirs[k][i] << ",";
        os << (set.has_weights() ? set.weights[k] : 0.0) << "\n";
    }
    os.precision(old);
}

} // namespace isoops
