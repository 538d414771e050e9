#include "catch_amalgamated.hpp"
#include "support.hpp"

#include "isoops/experiments.hpp"
#include "isoops/stencils.hpp"

#include <limits>
#include <sstream>

using namespace isoops;
using Catch::Approx;
constexpr double inf = std::numeric_limits<double>::infinity();

namespace {

bool same_mask(const Stencil3& s, const Mask3& m, double scale)
{
    return s.mask == m && s.scale == scale;
}

GridField sample(int n, double h, const std::function<double(double, double)>& f, Boundary b = Boundary::MirrorNeumann)
{
    return GridField::sample(n, n, h, f, b, -0.5 * (n - 1) * h, -0.5 * (n - 1) * h);
}

} // namespace

TEST_CASE("derivative masks")
{
    CHECK(same_mask(dx_stencil(4, 1), {{{-1, 0, 1}, {-4, 0, 4}, {-1, 0, 1}}}, 1.0 / 12.0));
    CHECK(same_mask(dx_stencil(1, 1), {{{-1, 0, 1}, {-1, 0, 1}, {-1, 0, 1}}}, 1.0 / 6.0));
    CHECK(same_mask(dx_stencil(2, 1), {{{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}}}, 1.0 / 8.0));
    CHECK(same_mask(dx_stencil(inf, 0.5), {{{0, 0, 0}, {-1, 0, 1}, {0, 0, 0}}}, 1.0));
    CHECK(same_mask(dy_stencil(2, 1), {{{1, 2, 1}, {0, 0, 0}, {-1, -2, -1}}}, 1.0 / 8.0));
    for (double w : {0.0, 1.0, 2.0, 4.0, 7.5}) {
        CHECK(dx_stencil(w, 1).mask_sum() == 0.0);
        CHECK(dy_stencil(w, 1).mask_sum() == 0.0);
    }
}

TEST_CASE("Laplacian masks")
{
    CHECK(same_mask(laplacian_stencil(4, 1), {{{1, 4, 1}, {4, -20, 4}, {1, 4, 1}}}, 1.0 / 6.0));
    CHECK(same_mask(laplacian_stencil(inf, 1), plus_laplacian(1).mask, 1.0));
    CHECK(plus_laplacian(1).mask == Mask3{{{0, 1, 0}, {1, -4, 1}, {0, 1, 0}}});
    const Stencil3 l0 = laplacian_stencil(0, 1);
    const Stencil3 lx = cross_laplacian(1);
    CHECK(lx.mask == Mask3{{{1, 0, 1}, {0, -4, 0}, {1, 0, 1}}});
    CHECK(lx.scale == 0.5);
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) CHECK(l0.coeff(r, c) == lx.coeff(r, c));
}

TEST_CASE("weight validation")
{
    CHECK(testing::thrown_code([] { dx_stencil(-2.0, 1); }) == ErrorCode::InvalidArgument);
    CHECK(testing::thrown_code([] { laplacian_stencil(-3.0, 1); }) == ErrorCode::InvalidArgument);
    CHECK(testing::thrown_code([] { dx_stencil(std::nan(""), 1); }) == ErrorCode::InvalidArgument);
    CHECK(testing::thrown_code([] { dx_stencil(-inf, 1); }) == ErrorCode::InvalidArgument);
    CHECK(testing::thrown_code([] { dx_stencil(4, 0.0); }) == ErrorCode::InvalidArgument);
    CHECK(StencilWeight::infinity().str() == "inf");
}

TEST_CASE("alpha beta decomposition")
{
    CHECK(alpha_beta(4) == std::pair{2.0 / 3.0, 1.0 / 3.0});
    CHECK(alpha_beta(inf) == std::pair{1.0, 0.0});
    CHECK(alpha_beta(2) == std::pair{0.5, 0.5});
    for (int t = 0; t < 50; ++t) {
        const double w = testing::uniform(-1.9, 20.0);
        const auto [a, b] = alpha_beta(w);
        const Stencil3 l = laplacian_stencil(w, 1);
        const Stencil3 p = plus_laplacian(1), x = cross_laplacian(1);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                CHECK(l.coeff(r, c) == Approx(a * p.coeff(r, c) + b * x.coeff(r, c)).margin(1e-15));
    }
}

TEST_CASE("apply is exact on low-degree polynomials")
{
    const double h = 0.1;
    const GridField quad = sample(9, h, [](double x, double y) { return x * x + y * y; });
    const GridField fx = sample(9, h, [](double x, double) { return x; });
    const GridField fy = sample(9, h, [](double, double y) { return y; });
    for (double w : {0.0, 1.0, 2.0, 4.0, inf}) {
        const GridField l = apply(laplacian_stencil(w, h), quad);
        const GridField dx = apply(dx_stencil(w, h), fx);
        const GridField dxy = apply(dx_stencil(w, h), fy);
        for (int j = 1; j < 8; ++j) {
            for (int i = 1; i < 8; ++i) {
                CHECK(l.at(i, j) == Approx(4.0).margin(1e-12 / (h * h)));
                CHECK(dx.at(i, j) == Approx(1.0).margin(1e-12));
                CHECK(dxy.at(i, j) == Approx(0.0).margin(1e-12));
            }
        }
    }
    // x^4: L4 gives 12 x^2 + 2 h^2 exactly
    const GridField q4 = sample(9, h, [](double x, double) { return x * x * x * x; });
    const GridField l4 = apply(laplacian_stencil(4, h), q4);
    for (int j = 1; j < 8; ++j)
        for (int i = 1; i < 8; ++i) CHECK(l4.at(i, j) == Approx(12 * q4.x(i) * q4.x(i) + 2 * h * h).margin(1e-9));
}

TEST_CASE("boundary policies")
{
    CHECK(GridField::wrap(-1, 5, Boundary::MirrorNeumann) == 0);
    CHECK(GridField::wrap(5, 5, Boundary::MirrorNeumann) == 4);
    CHECK(GridField::wrap(-2, 5, Boundary::MirrorNeumann) == 1);
    CHECK(GridField::wrap(-1, 5, Boundary::Periodic) == 4);
    CHECK(GridField::wrap(7, 5, Boundary::Periodic) == 2);
    CHECK(testing::thrown_code([] { GridField(2, 5, 1.0); }) == ErrorCode::InvalidArgument);
    // a constant field stays flat under every stencil, including at the edges
    const GridField c = sample(6, 1.0, [](double, double) { return 3.0; });
    for (double v : apply(laplacian_stencil(2, 1), c).values) CHECK(v == 0.0);
    const GridField p = sample(8, 1.0, [](double x, double) { return std::sin(x); }, Boundary::Periodic);
    CHECK(apply(dx_stencil(4, 1), p).h == 1.0);
}

TEST_CASE("corrected derivative is fourth order")
{
    std::vector<double> hs = {0.1, 0.05, 0.025}, err;
    for (double h : hs) {
        const int n = static_cast<int>(std::lround(3.0 / h)) + 1;
        const GridField g = sample(n, h, experiments::Gaussian::value);
        const GridField d = corrected_dx(g);
        double e = 0.0;
        for (int j = 4; j < n - 4; ++j)
            for (int i = 4; i < n - 4; ++i) e = std::max(e, std::abs(d.at(i, j) - experiments::Gaussian::dx(g.x(i), g.y(j))));
        err.push_back(e);
    }
    for (double s : experiments::richardson_slopes(hs, err)) CHECK(s >= 3.8);
}

TEST_CASE("Taylor expansions of the w = 4 pair")
{
    const std::vector<double> hs = {0.1, 0.05, 0.025};
    std::vector<double> lap, dx6;
    for (double h : hs) {
        lap.push_back(experiments::lap4_residual(h));
        dx6.push_back(experiments::dx4_residual(h, 1.0 / 6.0));
    }
    for (double s : experiments::richardson_slopes(hs, lap)) CHECK(s >= 3.9);
    for (double s : experiments::richardson_slopes(hs, dx6)) CHECK(s >= 3.9);
}

TEST_CASE("anisotropy ordering")
{
    const double a4 = experiments::anisotropy(4), a2 = experiments::anisotropy(2);
    const double a0 = experiments::anisotropy(0), ai = experiments::anisotropy(inf);
    CHECK(a4 < a2);
    CHECK(a2 < std::min(a0, ai));
}

TEST_CASE("quasi-Laplacian with unit diffusivity")
{
    const double h = 0.2;
    const GridField f = sample(12, h, [](double x, double y) { return std::sin(x) * std::cos(2 * y) + x * y; });
    const auto unit = StaggeredDiffusivity::unit(12, 12);
    const GridField a = quasi_laplacian_apply(2.0 / 3.0, 1.0 / 3.0, unit, f);
    const GridField b = apply(laplacian_stencil(4, h), f);
    for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(a.values[k] == Approx(b.values[k]).margin(1e-12));

    // sampled a = 1 takes the divergence-form path and agrees too
    const auto sampled = StaggeredDiffusivity::sample(f, [](double, double) { return 1.0; });
    const GridField c = quasi_laplacian_apply(2.0 / 3.0, 1.0 / 3.0, sampled, f);
    for (std::size_t k = 0; k < a.values.size(); ++k) CHECK(c.values[k] == Approx(a.values[k]).margin(1e-11));

    const GridField quad = sample(12, h, [](double x, double y) { return x * x + y * y; });
    const GridField q = quasi_laplacian_apply(0.5, 0.5, sampled, quad);
    for (int j = 1; j < 11; ++j)
        for (int i = 1; i < 11; ++i) CHECK(q.at(i, j) == Approx(4.0).margin(1e-10));

    CHECK(testing::thrown_code([&] { quasi_laplacian_apply(0.5, 0.6, unit, f); }) == ErrorCode::InvalidArgument);
    CHECK(testing::thrown_code([&] { quasi_laplacian_apply(0.5, 0.5, StaggeredDiffusivity::unit(5, 5), f); }) ==
          ErrorCode::DimensionMismatch);
}

TEST_CASE("quasi-Laplacian with linear diffusivity on a quadratic")
{
    const double x0 = 0.3, y0 = -0.1;
    std::vector<double> err;
    for (double h : {0.1, 0.05, 0.025}) {
        const GridField f = GridField::sample(5, 5, h, [](double x, double) { return x * x; }, Boundary::MirrorNeumann,
                                              x0 - 2 * h, y0 - 2 * h);
        const auto a = StaggeredDiffusivity::sample(f, [](double x, double) { return 1.0 + x; });
        const GridField q = quasi_laplacian_apply(2.0 / 3.0, 1.0 / 3.0, a, f);
        err.push_back(std::abs(q.at(2, 2) - (2.0 + 4.0 * x0)));
    }
    for (double e : err) CHECK(e < 1e-9);
}

TEST_CASE("quasi-Laplacian conserves mass with mirror boundaries")
{
    const GridField f = sample(20, 0.1, [](double x, double y) { return std::exp(-3 * (x * x + y * y)) + 0.1 * x; });
    GridField node = f.like();
    for (std::size_t k = 0; k < node.values.size(); ++k) node.values[k] = testing::uniform(0.1, 1.0);
    const auto a = StaggeredDiffusivity::average(node);
    for (auto [al, be] : {std::pair{1.0, 0.0}, std::pair{2.0 / 3.0, 1.0 / 3.0}, std::pair{0.0, 1.0}}) {
        const GridField q = quasi_laplacian_apply(al, be, a, f);
        double s = 0.0, mag = 0.0;
        for (double v : q.values) {
            s += v;
            mag += std::abs(v);
        }
        CHECK(std::abs(s) <= 1e-10 * mag);
    }
    CHECK_FALSE(a.has_nonpositive());
    node.values[7] = -1.0;
    CHECK(StaggeredDiffusivity::average(node).has_nonpositive());
}

TEST_CASE("quasi-Laplacian rotation residual orders")
{
    const double theta = std::numbers::pi / 6;
    const std::vector<double> hs = {0.1, 0.05, 0.025, 0.0125};
    std::vector<double> opt, five;
    for (double h : hs) {
        opt.push_back(experiments::quasi_laplacian_rotation_residual(2.0 / 3.0, 1.0 / 3.0, theta, h));
        five.push_back(experiments::quasi_laplacian_rotation_residual(1.0, 0.0, theta, h));
    }
    for (double s : experiments::richardson_slopes(hs, opt)) CHECK(s >= 3.0);
    for (double s : experiments::richardson_slopes(hs, five)) CHECK(s <= 2.5);
}

TEST_CASE("stencil CSV")
{
    std::ostringstream os;
    write_stencil_csv(os, laplacian_stencil(4, 1), "lap");
    CHECK(os.str() == "# stencil=lap h=1 scale=0.16666666666666666\n1,4,1\n4,-20,4\n1,4,1\n");
}
