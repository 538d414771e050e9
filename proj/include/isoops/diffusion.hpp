#pragma once

// Perona-Malik diffusion u_t = div(exp(-|grad u| / lambda) grad u), explicit
// Euler in time, alpha L+^a + beta Lx^a in space.

#include "isoops/error.hpp"
#include "isoops/grid.hpp"
#include "isoops/stencils.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace isoops {

struct DiffusionConfig
{
    /// Contrast parameter; +inf gives linear heat flow.
    double lambda = 0.1;
    double dt = 0.0;
    int steps = 100;
    double alpha = 2.0 / 3.0;
    double beta = 1.0 / 3.0;
    double gradient_w = 4.0;
    /// Skip the stability check.
    bool allow_unstable = false;
};

/// Largest stable step for a <= 1: 0.9 * 2 / rho with rho the Gershgorin
/// bound of the unit-diffusivity operator.
inline double max_stable_dt(double alpha, double beta, double h)
{
    const auto unit = StaggeredDiffusivity::unit(3, 3);
    return 0.9 * 2.0 / quasi_laplacian_gershgorin(alpha, beta, unit, h);
}

/// exp(-|grad u| / lambda) at the nodes, gradient from D_x, D_y with weight w,
/// then averaged onto the staggered points.
inline StaggeredDiffusivity diffusivity(const GridField& u, double lambda, StencilWeight gradient_w)
{
    require(lambda > 0.0, ErrorCode::InvalidArgument, "lambda must be positive");
    if (std::isinf(lambda)) return StaggeredDiffusivity::unit(u.width, u.height);
    const GridField gx = apply(dx_stencil(gradient_w, u.h), u);
    const GridField gy = apply(dy_stencil(gradient_w, u.h), u);
    GridField a = u.like();
    for (std::size_t k = 0; k < a.values.size(); ++k) {
        a.values[k] = std::exp(-std::hypot(gx.values[k], gy.values[k]) / lambda);
    }
    return StaggeredDiffusivity::average(a);
}

inline GridField step(const GridField& u, const DiffusionConfig& cfg)
{
    require(cfg.dt > 0.0, ErrorCode::InvalidArgument, "dt must be positive");
    const StaggeredDiffusivity a = diffusivity(u, cfg.lambda, cfg.gradient_w);
    if (!cfg.allow_unstable) {
        const double bound = 0.9 * 2.0 / quasi_laplacian_gershgorin(cfg.alpha, cfg.beta, a, u.h);
        if (cfg.dt > bound) {
            fail(ErrorCode::StabilityViolation,
                 "dt " + std::to_string(cfg.dt) + " exceeds stability bound " + std::to_string(bound));
        }
    }
    const GridField lap = quasi_laplacian_apply(cfg.alpha, cfg.beta, a, u);
    GridField next = u;
    for (std::size_t k = 0; k < next.values.size(); ++k) next.values[k] += cfg.dt * lap.values[k];
    return next;
}

struct MassLogEntry
{
    int step = 0;
    double mass = 0.0;
    double min = 0.0;
    double max = 0.0;
};

inline MassLogEntry mass_entry(int step_index, const GridField& u)
{
    const auto [lo, hi] = std::minmax_element(u.values.begin(), u.values.end());
    return {step_index, u.sum(), *lo, *hi};
}

struct DiffusionRun
{
    GridField result;
    /// Entry 0 describes the input, entry k the field after k steps.
    std::vector<MassLogEntry> log;
};

inline DiffusionRun run(const GridField& u0, const DiffusionConfig& cfg)
{
    require(cfg.steps >= 0, ErrorCode::InvalidArgument, "steps must be >= 0");
    DiffusionRun r{u0, {mass_entry(0, u0)}};
    for (int s = 1; s <= cfg.steps; ++s) {
        r.result = step(r.result, cfg);
        r.log.push_back(mass_entry(s, r.result));
    }
    return r;
}

} // namespace isoops
