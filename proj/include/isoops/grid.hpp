#pragma once

#include "isoops/error.hpp"

#include <string>
#include <vector>

namespace isoops {

enum class Boundary {
    /// Half-sample reflection: index -1 maps to 0, index W maps to W-1 (zero flux).
    MirrorNeumann,
    Periodic,
};

/// Scalar field on a square grid. Node (i, j) sits at (x0 + i h, y0 + j h);
/// values are row-major with j as the row index.
struct GridField
{
    int width = 0;
    int height = 0;
    double h = 1.0;
    double x0 = 0.0;
    double y0 = 0.0;
    Boundary boundary = Boundary::MirrorNeumann;
    std::vector<double> values;

    GridField() = default;

    GridField(int w, int ht, double spacing, Boundary b = Boundary::MirrorNeumann, double origin_x = 0.0,
              double origin_y = 0.0)
        : width(w)
        , height(ht)
        , h(spacing)
        , x0(origin_x)
        , y0(origin_y)
        , boundary(b)
    {
        require(w >= 3 && ht >= 3, ErrorCode::InvalidArgument,
                "grid must be at least 3x3, got " + std::to_string(w) + "x" + std::to_string(ht));
        require(spacing > 0.0, ErrorCode::InvalidArgument, "grid spacing must be positive");
        values.assign(static_cast<std::size_t>(w) * static_cast<std::size_t>(ht), 0.0);
    }

    template <typename Fn>
    static GridField sample(int w, int ht, double spacing, Fn&& fn, Boundary b = Boundary::MirrorNeumann,
                            double origin_x = 0.0, double origin_y = 0.0)
    {
        GridField g(w, ht, spacing, b, origin_x, origin_y);
        for (int j = 0; j < ht; ++j) {
            for (int i = 0; i < w; ++i) g.at(i, j) = fn(g.x(i), g.y(j));
        }
        return g;
    }

    /// Same geometry and boundary, zero values.
    GridField like() const { return GridField(width, height, h, boundary, x0, y0); }

    double x(int i) const { return x0 + i * h; }
    double y(int j) const { return y0 + j * h; }

    std::size_t index(int i, int j) const
    {
        return static_cast<std::size_t>(j) * static_cast<std::size_t>(width) + static_cast<std::size_t>(i);
    }
    double& at(int i, int j) { return values[index(i, j)]; }
    double at(int i, int j) const { return values[index(i, j)]; }

    static int wrap(int i, int n, Boundary b)
    {
        if (b == Boundary::Periodic) {
            i %= n;
            return i < 0 ? i + n : i;
        }
        while (i < 0 || i >= n) i = i < 0 ? -i - 1 : 2 * n - i - 1;
        return i;
    }

    /// Value at any integer index, out-of-range indices resolved by the boundary policy.
    double sample_at(int i, int j) const
    {
        return at(wrap(i, width, boundary), wrap(j, height, boundary));
    }

    /// Sum in fixed row-major order.
    double sum() const
    {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
};

} // namespace isoops
