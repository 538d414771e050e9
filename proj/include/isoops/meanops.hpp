#pragma once

// Discrete spherical means of directional-derivative samples.
//
// With weights that reproduce sphere means of quadratics, the weighted sum of
// second directional derivatives equals Delta f / d in R^d (d = 2 gives the
// familiar factor 1/2). Every operation here returns the full operator, i.e.
// the weighted sum multiplied by d.

#include "isoops/error.hpp"
#include "isoops/weights.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace isoops {

struct DirectionalSamples
{
    DirectionSet dirs;
    std::optional<std::vector<double>> first_derivs;
    std::optional<std::vector<double>> second_derivs;
};

namespace detail {

inline const std::vector<double>& checked(const DirectionSet& dirs, const std::optional<std::vector<double>>& v,
                                          const char* what)
{
    require(v.has_value(), ErrorCode::InvalidArgument, std::string("missing ") + what);
    require(v->size() == dirs.size(), ErrorCode::DimensionMismatch,
            std::string(what) + " count does not match direction count");
    require(dirs.has_weights(), ErrorCode::InvalidArgument, "direction set carries no weights");
    return *v;
}

} // namespace detail

/// Second difference along a line through p with neighbors at distance rho1
/// (value f_q1) and rho2 (value f_q2) on opposite sides. Exact on quadratics.
inline double second_diff_unequal(double f_p, double f_q1, double f_q2, double rho1, double rho2)
{
    require(rho1 > 0.0 && rho2 > 0.0, ErrorCode::InvalidArgument, "radii must be positive");
    const double blend = (f_q1 / rho1 + f_q2 / rho2) / (1.0 / rho1 + 1.0 / rho2);
    return 2.0 / (rho1 * rho2) * (blend - f_p);
}

/// Delta f from exact or approximate second directional derivatives.
inline double mean_laplacian(const DirectionalSamples& s)
{
    const auto& d2 = detail::checked(s.dirs, s.second_derivs, "second derivatives");
    double acc = 0.0;
    for (std::size_t k = 0; k < d2.size(); ++k) acc += s.dirs.weights[k] * d2[k];
    return s.dirs.ambient_dim * acc;
}

/// |grad f|^2 from first directional derivatives.
inline double mean_grad_sq(const DirectionalSamples& s)
{
    const auto& d1 = detail::checked(s.dirs, s.first_derivs, "first derivatives");
    double acc = 0.0;
    for (std::size_t k = 0; k < d1.size(); ++k) acc += s.dirs.weights[k] * d1[k] * d1[k];
    return s.dirs.ambient_dim * acc;
}

/// c . grad f for a constant vector c (in 2D: a df/dx + b df/dy).
inline double mean_directional(const DirectionalSamples& s, const Vec& c)
{
    const auto& d1 = detail::checked(s.dirs, s.first_derivs, "first derivatives");
    require(c.size() == s.dirs.ambient_dim, ErrorCode::DimensionMismatch, "coefficient vector dimension");
    double acc = 0.0;
    for (std::size_t k = 0; k < d1.size(); ++k) acc += s.dirs.weights[k] * c.dot(s.dirs.dirs[k]) * d1[k];
    return s.dirs.ambient_dim * acc;
}

inline double mean_directional(const DirectionalSamples& s, double a, double b)
{
    Vec c(2);
    c << a, b;
    return mean_directional(s, c);
}

/// div(a grad f) from samples t_k = d/de_k (a df/de_k).
inline double mean_quasi_laplacian(const DirectionSet& dirs, const std::vector<double>& samples)
{
    require(samples.size() == dirs.size(), ErrorCode::DimensionMismatch, "sample count does not match direction count");
    require(dirs.has_weights(), ErrorCode::InvalidArgument, "direction set carries no weights");
    double acc = 0.0;
    for (std::size_t k = 0; k < samples.size(); ++k) acc += dirs.weights[k] * samples[k];
    return dirs.ambient_dim * acc;
}

/// One line through the center: unit direction, forward sample at +rho_fwd,
/// backward sample at -rho_bwd.
struct Spoke
{
    Vec direction;
    double rho_fwd = 0.0;
    double f_fwd = 0.0;
    double rho_bwd = 0.0;
    double f_bwd = 0.0;
};

struct StarStencil
{
    double f_center = 0.0;
    std::vector<Spoke> spokes;
};

/// Delta f at the center of an irregular star. Spoke weights come from the
/// harmonic degree-2 construction on the spoke directions.
inline double irregular_laplacian(const StarStencil& star)
{
    require(!star.spokes.empty(), ErrorCode::TooFewDirections, "star has no spokes");
    std::vector<Vec> dirs;
    for (const auto& sp : star.spokes) {
        const double n = sp.direction.norm();
        require(n > 0.0, ErrorCode::InvalidArgument, "zero spoke direction");
        dirs.push_back(sp.direction / n);
    }
    const DirectionSet w = veronese_weights(dirs, 2, BasisKind::Harmonic);
    DirectionalSamples s{w, std::nullopt, std::vector<double>{}};
    for (const auto& sp : star.spokes) {
        s.second_derivs->push_back(second_diff_unequal(star.f_center, sp.f_fwd, sp.f_bwd, sp.rho_fwd, sp.rho_bwd));
    }
    return mean_laplacian(s);
}

/// Builds spokes from scattered neighbors: each neighbor is paired with the one
/// making the largest angle with it at the center; that angle must exceed
/// `min_angle` (120 degrees by default). Mutual pairs yield a single spoke.
inline StarStencil pair_spokes(const Vec& center, double f_center, const std::vector<Vec>& neighbors,
                               const std::vector<double>& values, double min_angle = 2.0 * std::numbers::pi / 3.0)
{
    require(neighbors.size() == values.size(), ErrorCode::DimensionMismatch, "neighbor/value count");
    require(neighbors.size() >= 2, ErrorCode::TooFewDirections, "need at least two neighbors");
    const std::size_t n = neighbors.size();
    std::vector<Vec> rel;
    for (const auto& q : neighbors) {
        Vec r = q - center;
        require(r.norm() > 0.0, ErrorCode::InvalidArgument, "neighbor coincides with center");
        rel.push_back(std::move(r));
    }

    StarStencil star;
    star.f_center = f_center;
    std::vector<std::size_t> partner(n);
    for (std::size_t i = 0; i < n; ++i) {
        double best = -1.0;
        std::size_t arg = i;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double c = std::clamp(rel[i].dot(rel[j]) / (rel[i].norm() * rel[j].norm()), -1.0, 1.0);
            const double ang = std::acos(c);
            if (ang > best) {
                best = ang;
                arg = j;
            }
        }
        if (best <= min_angle) {
            fail(ErrorCode::UnpairableNeighbor, "neighbor " + std::to_string(i) + " has no opposite partner (best angle " +
                                                    std::to_string(best * 180.0 / std::numbers::pi) + " deg)");
        }
        partner[i] = arg;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = partner[i];
        if (partner[j] == i && j < i) continue;
        const double rf = rel[i].norm();
        star.spokes.push_back({rel[i] / rf, rf, values[i], rel[j].norm(), values[j]});
    }
    return star;
}

} // namespace isoops
