#pragma once

// 3x3 stencils for d/dx, d/dy and the Laplacian parameterized by the weight w
// of the axis directions relative to the diagonals:
//
//   D_x = 1/(2h(w+2)) [-1 0 1; -w 0 w; -1 0 1]
//   L   = 1/(h^2(w+2)) [1 w 1; w -4(w+1) w; 1 w 1] = alpha L+ + beta Lx
//
// with alpha = w/(w+2), beta = 2/(w+2). w = inf gives the central difference
// and the five-point L+, w = 0 the diagonal Lx, w = 4 the rotation-optimal pair.
// Row 0 of a mask holds the dy = +1 neighbors, column 0 the dx = -1 neighbors.

#include "isoops/error.hpp"
#include "isoops/grid.hpp"
#include "isoops/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace isoops {

/// Axis weight w of the 3x3 family; either a finite value > -2 or infinity.
class StencilWeight
{
public:
    StencilWeight(double w)
    {
        if (std::isinf(w) && w > 0) {
            m_infinite = true;
            return;
        }
        require(std::isfinite(w), ErrorCode::InvalidArgument, "stencil weight must be finite or +inf");
        require(w > -2.0, ErrorCode::InvalidArgument, "stencil weight must exceed -2, got " + std::to_string(w));
        m_value = w;
    }

    static StencilWeight infinity() { return StencilWeight(std::numeric_limits<double>::infinity()); }

    bool is_infinite() const { return m_infinite; }
    double value() const { return m_infinite ? std::numeric_limits<double>::infinity() : m_value; }

    std::string str() const
    {
        if (m_infinite) return "inf";
        std::ostringstream os;
        os.precision(17);
        os << m_value;
        return os.str();
    }

private:
    double m_value = 0.0;
    bool m_infinite = false;
};

using Mask3 = std::array<std::array<double, 3>, 3>;

struct Stencil3
{
    Mask3 mask{};
    double scale = 1.0;
    double h = 1.0;

    double coeff(int row, int col) const
    {
        return scale * mask[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)];
    }

    double mask_sum() const
    {
        double s = 0.0;
        for (const auto& r : mask)
            for (double v : r) s += v;
        return s;
    }
};

inline Stencil3 dx_stencil(StencilWeight w, double h)
{
    require(h > 0.0, ErrorCode::InvalidArgument, "spacing must be positive");
    if (w.is_infinite()) return {{{{0, 0, 0}, {-1, 0, 1}, {0, 0, 0}}}, 1.0 / (2.0 * h), h};
    const double v = w.value();
    return {{{{-1, 0, 1}, {-v, 0, v}, {-1, 0, 1}}}, 1.0 / (2.0 * h * (v + 2.0)), h};
}

/// D_x rotated by pi/2.
inline Stencil3 dy_stencil(StencilWeight w, double h)
{
    require(h > 0.0, ErrorCode::InvalidArgument, "spacing must be positive");
    if (w.is_infinite()) return {{{{0, 1, 0}, {0, 0, 0}, {0, -1, 0}}}, 1.0 / (2.0 * h), h};
    const double v = w.value();
    return {{{{1, v, 1}, {0, 0, 0}, {-1, -v, -1}}}, 1.0 / (2.0 * h * (v + 2.0)), h};
}

inline Stencil3 plus_laplacian(double h) { return {{{{0, 1, 0}, {1, -4, 1}, {0, 1, 0}}}, 1.0 / (h * h), h}; }

inline Stencil3 cross_laplacian(double h) { return {{{{1, 0, 1}, {0, -4, 0}, {1, 0, 1}}}, 1.0 / (2.0 * h * h), h}; }

inline Stencil3 laplacian_stencil(StencilWeight w, double h)
{
    require(h > 0.0, ErrorCode::InvalidArgument, "spacing must be positive");
    if (w.is_infinite()) return plus_laplacian(h);
    const double v = w.value();
    return {{{{1, v, 1}, {v, -4.0 * (v + 1.0), v}, {1, v, 1}}}, 1.0 / (h * h * (v + 2.0)), h};
}

/// Coefficients of laplacian_stencil(w) in the basis {L+, Lx}.
inline std::pair<double, double> alpha_beta(StencilWeight w)
{
    if (w.is_infinite()) return {1.0, 0.0};
    const double v = w.value();
    return {v / (v + 2.0), 2.0 / (v + 2.0)};
}

/// alpha L+ + beta Lx as a single stencil with scale 1/h^2.
inline Stencil3 combined_laplacian(double alpha, double beta, double h)
{
    const double b = beta / 2.0;
    return {{{{b, alpha, b}, {alpha, -4.0 * (alpha + b), alpha}, {b, alpha, b}}}, 1.0 / (h * h), h};
}

/// Convolution with the 3x3 stencil; neighbors outside the grid come from the
/// field's boundary policy. Interior rows are independent.
inline GridField apply(const Stencil3& s, const GridField& f)
{
    GridField out = f.like();
    Mask3 c{};
    for (int r = 0; r < 3; ++r)
        for (int q = 0; q < 3; ++q) c[static_cast<std::size_t>(r)][static_cast<std::size_t>(q)] = s.coeff(r, q);

    parallel_rows(static_cast<std::size_t>(f.height), [&](std::size_t row) {
        const int j = static_cast<int>(row);
        for (int i = 0; i < f.width; ++i) {
            double acc = 0.0;
            for (int r = 0; r < 3; ++r) {
                const int dy = 1 - r;
                for (int q = 0; q < 3; ++q) {
                    const double cq = c[static_cast<std::size_t>(r)][static_cast<std::size_t>(q)];
                    if (cq == 0.0) continue;
                    acc += cq * f.sample_at(i + q - 1, j + dy);
                }
            }
            out.at(i, j) = acc;
        }
    });
    return out;
}

/// (1 - c h^2 L4) D_x|w=4 with c = 1/6, the leading coefficient of the D_x|w=4
/// truncation error (D_x|w=4 = d/dx + (h^2/6) Delta d/dx + O(h^4)).
inline GridField corrected_dx(const GridField& f)
{
    const GridField d = apply(dx_stencil(4.0, f.h), f);
    const GridField lap = apply(laplacian_stencil(4.0, f.h), d);
    GridField out = f.like();
    const double c = f.h * f.h / 6.0;
    for (std::size_t k = 0; k < out.values.size(); ++k) out.values[k] = d.values[k] - c * lap.values[k];
    return out;
}

/// Diffusivity at the staggered points of a grid: axis midpoints (i±1/2, j),
/// (i, j±1/2) and cell corners (i±1/2, j±1/2).
class StaggeredDiffusivity
{
public:
    /// a = 1 everywhere.
    static StaggeredDiffusivity unit(int width, int height)
    {
        StaggeredDiffusivity d(width, height);
        d.m_unit = true;
        std::fill(d.m_x.begin(), d.m_x.end(), 1.0);
        std::fill(d.m_y.begin(), d.m_y.end(), 1.0);
        std::fill(d.m_d.begin(), d.m_d.end(), 1.0);
        return d;
    }

    /// Samples a(x, y) analytically at the staggered locations of `geometry`.
    static StaggeredDiffusivity sample(const GridField& geometry, const std::function<double(double, double)>& a)
    {
        StaggeredDiffusivity d(geometry.width, geometry.height);
        const double hh = geometry.h;
        const int w = geometry.width, ht = geometry.height;
        for (int j = 0; j < ht; ++j)
            for (int i = 0; i <= w; ++i) d.m_x[d.xi(i, j)] = a(geometry.x(i) - hh / 2, geometry.y(j));
        for (int j = 0; j <= ht; ++j)
            for (int i = 0; i < w; ++i) d.m_y[d.yi(i, j)] = a(geometry.x(i), geometry.y(j) - hh / 2);
        for (int j = 0; j <= ht; ++j)
            for (int i = 0; i <= w; ++i) d.m_d[d.di(i, j)] = a(geometry.x(i) - hh / 2, geometry.y(j) - hh / 2);
        return d;
    }

    /// Arithmetic mean of the two (axis) or four (corner) adjacent node values;
    /// nodes outside the grid follow the field's boundary policy.
    static StaggeredDiffusivity average(const GridField& node_values)
    {
        const GridField& a = node_values;
        StaggeredDiffusivity d(a.width, a.height);
        for (int j = 0; j < a.height; ++j)
            for (int i = 0; i <= a.width; ++i) d.m_x[d.xi(i, j)] = 0.5 * (a.sample_at(i - 1, j) + a.sample_at(i, j));
        for (int j = 0; j <= a.height; ++j)
            for (int i = 0; i < a.width; ++i) d.m_y[d.yi(i, j)] = 0.5 * (a.sample_at(i, j - 1) + a.sample_at(i, j));
        for (int j = 0; j <= a.height; ++j)
            for (int i = 0; i <= a.width; ++i)
                d.m_d[d.di(i, j)] = 0.25 * (a.sample_at(i - 1, j - 1) + a.sample_at(i, j - 1) +
                                            a.sample_at(i - 1, j) + a.sample_at(i, j));
        return d;
    }

    int width() const { return m_w; }
    int height() const { return m_h; }
    bool is_unit() const { return m_unit; }

    double east(int i, int j) const { return m_x[xi(i + 1, j)]; }
    double west(int i, int j) const { return m_x[xi(i, j)]; }
    double north(int i, int j) const { return m_y[yi(i, j + 1)]; }
    double south(int i, int j) const { return m_y[yi(i, j)]; }
    double north_east(int i, int j) const { return m_d[di(i + 1, j + 1)]; }
    double north_west(int i, int j) const { return m_d[di(i, j + 1)]; }
    double south_east(int i, int j) const { return m_d[di(i + 1, j)]; }
    double south_west(int i, int j) const { return m_d[di(i, j)]; }

    double min_value() const
    {
        double m = std::numeric_limits<double>::infinity();
        for (const auto* v : {&m_x, &m_y, &m_d})
            for (double a : *v) m = std::min(m, a);
        return m;
    }

    double max_value() const
    {
        double m = -std::numeric_limits<double>::infinity();
        for (const auto* v : {&m_x, &m_y, &m_d})
            for (double a : *v) m = std::max(m, a);
        return m;
    }

    bool has_nonpositive() const { return min_value() <= 0.0; }

private:
    StaggeredDiffusivity(int w, int h)
        : m_w(w)
        , m_h(h)
        , m_x(static_cast<std::size_t>((w + 1) * h))
        , m_y(static_cast<std::size_t>(w * (h + 1)))
        , m_d(static_cast<std::size_t>((w + 1) * (h + 1)))
    {}

    std::size_t xi(int i, int j) const { return static_cast<std::size_t>(j * (m_w + 1) + i); }
    std::size_t yi(int i, int j) const { return static_cast<std::size_t>(j * m_w + i); }
    std::size_t di(int i, int j) const { return static_cast<std::size_t>(j * (m_w + 1) + i); }

    int m_w = 0;
    int m_h = 0;
    bool m_unit = false;
    std::vector<double> m_x; // (i - 1/2, j), i in [0, W]
    std::vector<double> m_y; // (i, j - 1/2), j in [0, H]
    std::vector<double> m_d; // (i - 1/2, j - 1/2)
};

/// alpha L+^a + beta Lx^a in divergence form:
///   L+^a f = 1/h^2     sum_axis   a_nb (f_nb - f_c)
///   Lx^a f = 1/(2 h^2) sum_corner a_nb (f_nb - f_c)
/// Unit diffusivity takes the constant-coefficient stencil path.
inline GridField quasi_laplacian_apply(double alpha, double beta, const StaggeredDiffusivity& a, const GridField& f)
{
    require(std::abs(alpha + beta - 1.0) <= 1e-12, ErrorCode::InvalidArgument, "alpha + beta must equal 1");
    require(a.width() == f.width && a.height() == f.height, ErrorCode::DimensionMismatch,
            "diffusivity does not match field size");
    if (a.is_unit()) return apply(combined_laplacian(alpha, beta, f.h), f);

    GridField out = f.like();
    const double cp = alpha / (f.h * f.h);
    const double cx = beta / (2.0 * f.h * f.h);
    parallel_rows(static_cast<std::size_t>(f.height), [&](std::size_t row) {
        const int j = static_cast<int>(row);
        for (int i = 0; i < f.width; ++i) {
            const double c = f.at(i, j);
            const double plus = a.east(i, j) * (f.sample_at(i + 1, j) - c) + a.west(i, j) * (f.sample_at(i - 1, j) - c) +
                                a.north(i, j) * (f.sample_at(i, j + 1) - c) + a.south(i, j) * (f.sample_at(i, j - 1) - c);
            const double cross = a.north_east(i, j) * (f.sample_at(i + 1, j + 1) - c) +
                                 a.north_west(i, j) * (f.sample_at(i - 1, j + 1) - c) +
                                 a.south_east(i, j) * (f.sample_at(i + 1, j - 1) - c) +
                                 a.south_west(i, j) * (f.sample_at(i - 1, j - 1) - c);
            out.at(i, j) = cp * plus + cx * cross;
        }
    });
    return out;
}

/// Largest Gershgorin row sum (absolute) of the quasi-Laplacian operator.
inline double quasi_laplacian_gershgorin(double alpha, double beta, const StaggeredDiffusivity& a, double h)
{
    const double cp = std::abs(alpha) / (h * h);
    const double cx = std::abs(beta) / (2.0 * h * h);
    double rho = 0.0;
    for (int j = 0; j < a.height(); ++j) {
        for (int i = 0; i < a.width(); ++i) {
            const double off = cp * (std::abs(a.east(i, j)) + std::abs(a.west(i, j)) + std::abs(a.north(i, j)) +
                                     std::abs(a.south(i, j))) +
                               cx * (std::abs(a.north_east(i, j)) + std::abs(a.north_west(i, j)) +
                                     std::abs(a.south_east(i, j)) + std::abs(a.south_west(i, j)));
            rho = std::max(rho, 2.0 * off);
        }
    }
    return rho;
}

/// CSV dump: header comment with h and scale, then the three mask rows.
inline void write_stencil_csv(std::ostream& os, const Stencil3& s, const std::string& label)
{
    const auto old = os.precision(17);
    os << "# stencil=" << label << " h=" << s.h << " scale=" << s.scale << "\n";
    for (const auto& r : s.mask) os << r[0] << "," << r[1] << "," << r[2] << "\n";
    os.precision(old);
}

} // namespace isoops
