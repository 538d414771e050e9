#include "catch_amalgamated.hpp"
#include "support.hpp"

#include "isoops/diffusion.hpp"
#include "isoops/experiments.hpp"

#include <cstdlib>
#include <limits>

using namespace isoops;
using Catch::Approx;
constexpr double inf = std::numeric_limits<double>::infinity();

namespace {

GridField noisy_image(int n)
{
    GridField f(n, n, 1.0);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            f.at(i, j) = (i > n / 2 ? 0.8 : 0.2) + 0.1 * testing::uniform(-1, 1) + (j > n / 3 ? 0.05 : 0.0);
    return f;
}

} // namespace

TEST_CASE("diffusivity")
{
    const GridField flat = GridField::sample(8, 8, 1.0, [](double, double) { return 0.4; });
    const auto a = diffusivity(flat, 0.1, 4);
    CHECK(a.min_value() == Approx(1.0).margin(1e-14));
    CHECK(a.max_value() == Approx(1.0).margin(1e-14));

    const GridField ramp = GridField::sample(8, 8, 1.0, [](double x, double) { return x; });
    const auto b = diffusivity(ramp, 1.0, 4);
    for (int j = 1; j < 7; ++j)
        for (int i = 2; i < 6; ++i) {
            CHECK(b.east(i, j) == Approx(std::exp(-1.0)).margin(1e-14));
            CHECK(b.north_east(i, j) == Approx(std::exp(-1.0)).margin(1e-14));
        }

    CHECK(diffusivity(ramp, inf, 4).is_unit());
    CHECK(testing::thrown_code([&] { diffusivity(ramp, 0.0, 4); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("steps = 0 is the identity")
{
    const GridField f = noisy_image(10);
    DiffusionConfig cfg;
    cfg.steps = 0;
    cfg.dt = 0.1;
    const DiffusionRun r = run(f, cfg);
    CHECK(r.result.values == f.values);
    CHECK(r.log.size() == 1);
}

TEST_CASE("heat step on a paraboloid")
{
    const GridField f = GridField::sample(9, 9, 0.5, [](double x, double y) { return x * x + y * y; });
    DiffusionConfig cfg;
    cfg.lambda = inf;
    cfg.dt = 0.05;
    const GridField g = step(f, cfg);
    for (int j = 1; j < 8; ++j)
        for (int i = 1; i < 8; ++i) CHECK(g.at(i, j) - f.at(i, j) == Approx(4.0 * cfg.dt).margin(1e-10));
}

TEST_CASE("stability bound is enforced")
{
    const GridField f = noisy_image(12);
    DiffusionConfig cfg;
    cfg.steps = 1;
    cfg.dt = 1.0;
    CHECK(testing::thrown_code([&] { run(f, cfg); }) == ErrorCode::StabilityViolation);
    cfg.allow_unstable = true;
    CHECK_NOTHROW(run(f, cfg));
    CHECK(max_stable_dt(2.0 / 3.0, 1.0 / 3.0, 1.0) == Approx(0.9 * 2.0 / (20.0 / 3.0)));
    CHECK(max_stable_dt(1.0, 0.0, 1.0) == Approx(0.9 * 2.0 / 8.0));
    cfg.dt = -1.0;
    CHECK(testing::thrown_code([&] { step(f, cfg); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("mass conservation and maximum principle")
{
    const GridField f = noisy_image(40);
    const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
    const double range = *hi - *lo;
    for (auto [al, be] : {std::pair{1.0, 0.0}, std::pair{2.0 / 3.0, 1.0 / 3.0}}) {
        DiffusionConfig cfg;
        cfg.alpha = al;
        cfg.beta = be;
        cfg.steps = 200;
        cfg.dt = max_stable_dt(al, be, 1.0);
        const DiffusionRun r = run(f, cfg);
        for (const auto& e : r.log) {
            CHECK(std::abs(e.mass - r.log.front().mass) <= 1e-9 * std::abs(r.log.front().mass));
            CHECK(e.min >= *lo - 1e-9 * range);
            CHECK(e.max <= *hi + 1e-9 * range);
        }
    }
}

TEST_CASE("infinite lambda is linear heat flow bit for bit")
{
    const GridField f = noisy_image(24);
    DiffusionConfig cfg;
    cfg.lambda = inf;
    cfg.steps = 25;
    cfg.dt = 0.2;
    const GridField r = run(f, cfg).result;
    GridField u = f;
    const Stencil3 l = combined_laplacian(cfg.alpha, cfg.beta, 1.0);
    for (int s = 0; s < cfg.steps; ++s) {
        const GridField lap = apply(l, u);
        for (std::size_t k = 0; k < u.values.size(); ++k) u.values[k] += cfg.dt * lap.values[k];
    }
    CHECK(r.values == u.values);
}

TEST_CASE("result does not depend on the thread count")
{
    const GridField f = noisy_image(130);
    DiffusionConfig cfg;
    cfg.steps = 5;
    cfg.dt = 0.2;
    setenv("ISOOPS_THREADS", "1", 1);
    const GridField a = run(f, cfg).result;
    setenv("ISOOPS_THREADS", "4", 1);
    const GridField b = run(f, cfg).result;
    unsetenv("ISOOPS_THREADS");
    CHECK(a.values == b.values);
}

TEST_CASE("optimal mix keeps bump level sets round")
{
    experiments::BumpSetup s;
    s.size = 128;
    s.sigma = 24;
    s.steps = 100;
    const double opt = experiments::bump_level_set_std(s, 2.0 / 3.0, 1.0 / 3.0);
    const double five = experiments::bump_level_set_std(s, 1.0, 0.0);
    CHECK(opt < five);
}
