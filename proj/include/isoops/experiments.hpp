#pragma once

// Numerical experiments on the Gaussian bump g = exp(-(x^2 + y^2)): Taylor
// residuals of the w = 4 stencils, the angular anisotropy of Laplacian error
// fields, the rotation residual of the quasi-Laplacian, and level-set
// roundness after nonlinear diffusion. Shared by the CLI and the acceptance
// suite.

#include "isoops/diffusion.hpp"
#include "isoops/grid.hpp"
#include "isoops/stencils.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace isoops::experiments {

using Fn2 = std::function<double(double, double)>;

struct Gaussian
{
    static double value(double x, double y) { return std::exp(-(x * x + y * y)); }
    static double dx(double x, double y) { return -2.0 * x * value(x, y); }
    static double laplacian(double x, double y)
    {
        const double r2 = x * x + y * y;
        return 4.0 * (r2 - 1.0) * value(x, y);
    }
    static double bilaplacian(double x, double y)
    {
        const double r2 = x * x + y * y;
        return 16.0 * (r2 * r2 - 4.0 * r2 + 2.0) * value(x, y);
    }
    /// Delta d/dx g
    static double laplacian_dx(double x, double y)
    {
        const double r2 = x * x + y * y;
        return -8.0 * x * (r2 - 2.0) * value(x, y);
    }
};

/// Stencil applied at (x, y) to a function sampled analytically at the neighbors.
inline double apply_at(const Stencil3& s, const Fn2& f, double x, double y)
{
    double acc = 0.0;
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            const double k = s.coeff(r, c);
            if (k != 0.0) acc += k * f(x + (c - 1) * s.h, y + (1 - r) * s.h);
        }
    }
    return acc;
}

/// Sample points of the Taylor-residual checks: a 31x31 lattice on [-1.5, 1.5]^2.
inline std::vector<std::array<double, 2>> probe_points()
{
    std::vector<std::array<double, 2>> pts;
    for (int j = 0; j <= 30; ++j)
        for (int i = 0; i <= 30; ++i) pts.push_back({-1.5 + 0.1 * i, -1.5 + 0.1 * j});
    return pts;
}

/// max |D_x|w=4 g - dg/dx - c h^2 Delta dg/dx| over the probe points.
inline double dx4_residual(double h, double c)
{
    const Stencil3 s = dx_stencil(4.0, h);
    double e = 0.0;
    for (auto [x, y] : probe_points()) {
        const double r = apply_at(s, Gaussian::value, x, y) - Gaussian::dx(x, y) - c * h * h * Gaussian::laplacian_dx(x, y);
        e = std::max(e, std::abs(r));
    }
    return e;
}

/// max |L|w=4 g - Delta g - (h^2/12) Delta^2 g| over the probe points.
inline double lap4_residual(double h)
{
    const Stencil3 s = laplacian_stencil(4.0, h);
    double e = 0.0;
    for (auto [x, y] : probe_points()) {
        const double r = apply_at(s, Gaussian::value, x, y) - Gaussian::laplacian(x, y) -
                         h * h / 12.0 * Gaussian::bilaplacian(x, y);
        e = std::max(e, std::abs(r));
    }
    return e;
}

/// Observed orders log2(E(h_k) / E(h_{k+1})) for successive halvings.
inline std::vector<double> richardson_slopes(const std::vector<double>& hs, const std::vector<double>& errors)
{
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
        out.push_back(std::log(errors[k] / errors[k + 1]) / std::log(hs[k] / hs[k + 1]));
    }
    return out;
}

inline double bilinear(const GridField& f, double x, double y)
{
    const double u = (x - f.x0) / f.h, v = (y - f.y0) / f.h;
    const int i = std::clamp(static_cast<int>(std::floor(u)), 0, f.width - 2);
    const int j = std::clamp(static_cast<int>(std::floor(v)), 0, f.height - 2);
    const double s = u - i, t = v - j;
    return (1 - s) * (1 - t) * f.at(i, j) + s * (1 - t) * f.at(i + 1, j) + (1 - s) * t * f.at(i, j + 1) +
           s * t * f.at(i + 1, j + 1);
}

/// Separable degree-5 Lagrange interpolation on the 6x6 nodes around (x, y);
/// out-of-range taps follow the boundary policy.
inline double lagrange6(const GridField& f, double x, double y)
{
    const double u = (x - f.x0) / f.h, v = (y - f.y0) / f.h;
    const int i0 = static_cast<int>(std::floor(u)), j0 = static_cast<int>(std::floor(v));
    auto weights = [](double t, std::array<double, 6>& w) {
        for (int a = 0; a < 6; ++a) {
            double p = 1.0;
            for (int b = 0; b < 6; ++b) {
                if (b != a) p *= (t - (b - 2)) / static_cast<double>(a - b);
            }
            w[static_cast<std::size_t>(a)] = p;
        }
    };
    std::array<double, 6> wx{}, wy{};
    weights(u - i0, wx);
    weights(v - j0, wy);
    double acc = 0.0;
    for (int b = 0; b < 6; ++b) {
        double row = 0.0;
        for (int a = 0; a < 6; ++a) row += wx[static_cast<std::size_t>(a)] * f.sample_at(i0 + a - 2, j0 + b - 2);
        acc += wy[static_cast<std::size_t>(b)] * row;
    }
    return acc;
}

inline double population_std(const std::vector<double>& v)
{
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(v.size()));
}

/// (Delta - L_w)[g] on the node grid covering [-half_width, half_width]^2.
inline GridField laplacian_error_field(StencilWeight w, double h, double half_width = 2.0)
{
    const int n = static_cast<int>(std::lround(2.0 * half_width / h)) + 1;
    const Stencil3 s = laplacian_stencil(w, h);
    return GridField::sample(
        n, n, h, [&](double x, double y) { return Gaussian::laplacian(x, y) - apply_at(s, Gaussian::value, x, y); },
        Boundary::MirrorNeumann, -half_width, -half_width);
}

/// A(w): max over radii in [0.3, 1.5] (step 0.05) of the standard deviation of
/// the bilinearly interpolated error field over 360 angles.
inline double anisotropy(StencilWeight w, double h = 0.05)
{
    const GridField e = laplacian_error_field(w, h);
    double worst = 0.0;
    for (int k = 0; k <= 24; ++k) {
        const double r = 0.3 + 0.05 * k;
        std::vector<double> ring;
        for (int a = 0; a < 360; ++a) {
            const double t = a * std::numbers::pi / 180.0;
            ring.push_back(bilinear(e, r * std::cos(t), r * std::sin(t)));
        }
        worst = std::max(worst, population_std(ring));
    }
    return worst;
}

/// alpha L+^a + beta Lx^a at the origin with a and f sampled analytically.
inline double quasi_laplacian_at_origin(double alpha, double beta, const Fn2& a, const Fn2& f, double h)
{
    const double c = f(0.0, 0.0);
    double plus = 0.0, cross = 0.0;
    for (int s : {-1, 1}) {
        plus += a(s * h / 2, 0.0) * (f(s * h, 0.0) - c) + a(0.0, s * h / 2) * (f(0.0, s * h) - c);
        for (int t : {-1, 1}) cross += a(s * h / 2, t * h / 2) * (f(s * h, t * h) - c);
    }
    return alpha * plus / (h * h) + beta * cross / (2.0 * h * h);
}

/// Smooth test pair for the rotation check.
inline double test_diffusivity(double x, double y) { return 1.0 + 0.3 * std::sin(1.3 * x + 0.4) * std::cos(0.9 * y - 0.2) + 0.2 * x * y; }
inline double test_function(double x, double y) { return std::exp(0.6 * x - 0.35 * y) * std::cos(0.8 * x + 1.1 * y + 0.3); }

/// |E(theta, h) - E(0, h)| where E is discrete minus continuous quasi-Laplacian
/// at the origin and the inputs are rotated by theta. The continuous value is
/// rotation invariant, so it cancels.
inline double quasi_laplacian_rotation_residual(double alpha, double beta, double theta, double h)
{
    const double c = std::cos(theta), s = std::sin(theta);
    auto rot = [c, s](const Fn2& fn) {
        return Fn2([fn, c, s](double x, double y) { return fn(c * x + s * y, -s * x + c * y); });
    };
    const double d0 = quasi_laplacian_at_origin(alpha, beta, test_diffusivity, test_function, h);
    const double dt = quasi_laplacian_at_origin(alpha, beta, rot(test_diffusivity), rot(test_function), h);
    return std::abs(dt - d0);
}

/// Radii at which rays from (cx, cy) first cross `level`, one per degree.
inline std::vector<double> level_set_radii(const GridField& f, double cx, double cy, double level, double r_max)
{
    std::vector<double> radii;
    for (int a = 0; a < 360; ++a) {
        const double t = a * std::numbers::pi / 180.0;
        const double ux = std::cos(t), uy = std::sin(t);
        auto val = [&](double r) { return lagrange6(f, cx + r * ux, cy + r * uy) - level; };
        const double dr = f.h / 4.0;
        double lo = 0.0, hi = 0.0;
        bool found = false;
        for (double r = dr; r <= r_max; r += dr) {
            if (val(r) < 0.0) {
                lo = r - dr;
                hi = r;
                found = true;
                break;
            }
        }
        if (!found) {
            radii.push_back(r_max);
            continue;
        }
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (val(mid) < 0.0 ? hi : lo) = mid;
        }
        radii.push_back(0.5 * (lo + hi));
    }
    return radii;
}

struct BumpSetup
{
    int size = 256;
    /// Gaussian width in pixels: u0 = exp(-r^2 / sigma^2).
    double sigma = 48.0;
    double lambda = 0.1;
    int steps = 200;
    /// Time step shared by every stencil mix; the default is stable for both
    /// the five-point (1, 0) and the (2/3, 1/3) schemes.
    double dt = 0.225;
};

/// Unit-spacing image of the Gaussian bump centred on node (size/2, size/2).
inline GridField bump_image(const BumpSetup& setup)
{
    const double c = setup.size / 2;
    return GridField::sample(
        setup.size, setup.size, 1.0,
        [&](double x, double y) { return std::exp(-((x - c) * (x - c) + (y - c) * (y - c)) / (setup.sigma * setup.sigma)); });
}

/// Angular standard deviation of the 0.5 level-set radius after diffusing the
/// bump with the given stencil mix.
inline double bump_level_set_std(const BumpSetup& setup, double alpha, double beta)
{
    DiffusionConfig cfg;
    cfg.lambda = setup.lambda;
    cfg.steps = setup.steps;
    cfg.alpha = alpha;
    cfg.beta = beta;
    cfg.dt = setup.dt;
    const GridField u = run(bump_image(setup), cfg).result;
    const double c = setup.size / 2;
    return population_std(level_set_radii(u, c, c, 0.5, setup.size / 2 - 2));
}

} // namespace isoops::experiments
