#pragma once

// Frequency responses of the 3x3 derivative family and the implicit
// (Pade-type) derivative
//
//   1/(w+2) (f'_{i-1} + w f'_i + f'_{i+1}) = (f_{i+1} - f_{i-1}) / (2h)
//
// on periodic signals, plus its separable 2D counterpart built on D_x(w).

#include "isoops/error.hpp"
#include "isoops/grid.hpp"
#include "isoops/parallel.hpp"
#include "isoops/stencils.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <string>
#include <vector>

namespace isoops {

using Complex = std::complex<double>;

/// Eigenvalue of D_x(w) (h = 1) on exp(i(w1 x + w2 y)).
inline Complex explicit_response(double w, double omega1, double omega2)
{
    if (std::isinf(w)) return {0.0, std::sin(omega1)};
    StencilWeight check(w);
    return {0.0, std::sin(omega1) * (w + 2.0 * std::cos(omega2)) / (w + 2.0)};
}

/// Eigenvalue of the implicit derivative (h = 1) on exp(i w x).
inline Complex sharpened_response(double w, double omega)
{
    if (std::isinf(w)) return {0.0, std::sin(omega)};
    StencilWeight check(w);
    return {0.0, std::sin(omega) * (w + 2.0) / (w + 2.0 * std::cos(omega))};
}

/// Circulant system with rows [1 w 1] / (w + 2) and wraparound.
class CyclicSmoother
{
public:
    CyclicSmoother(int n, double w)
        : m_n(n)
        , m_w(w)
    {
        require(n >= 3, ErrorCode::InvalidArgument, "periodic signal needs at least 3 samples");
        if (std::isinf(w)) return;
        StencilWeight check(w);
        for (int k = 0; k < n; ++k) {
            const double lambda = w + 2.0 * std::cos(2.0 * std::numbers::pi * k / n);
            if (std::abs(lambda) <= 1e-12 * (std::abs(w) + 2.0)) {
                fail(ErrorCode::Singular, "implicit derivative singular for w=" + std::to_string(w) + ", N=" +
                                              std::to_string(n) + " (mode " + std::to_string(k) + ")");
            }
        }
        if (std::abs(w) <= 2.0) {
            Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                a(i, i) = w;
                a(i, (i + 1) % n) += 1.0;
                a(i, (i + n - 1) % n) += 1.0;
            }
            m_lu = a.partialPivLu();
            m_dense = true;
        }
    }

    int size() const { return m_n; }

    /// Solves [1 w 1]/(w+2) x = rhs in place.
    template <typename T>
    void solve(std::vector<T>& x) const
    {
        require(static_cast<int>(x.size()) == m_n, ErrorCode::DimensionMismatch, "signal length");
        if (std::isinf(m_w)) return;
        const double s = m_w + 2.0;
        if (m_dense) {
            Eigen::Matrix<T, Eigen::Dynamic, 1> b(m_n);
            for (int i = 0; i < m_n; ++i) b(i) = x[static_cast<std::size_t>(i)] * s;
            const Eigen::Matrix<T, Eigen::Dynamic, 1> r = m_lu.solve(b.template cast<T>());
            for (int i = 0; i < m_n; ++i) x[static_cast<std::size_t>(i)] = r(i);
            return;
        }
        for (auto& v : x) v *= s;
        sherman_morrison(x);
    }

private:
    // Cyclic Thomas for diagonal w, off-diagonals 1; |w| > 2 keeps it
    // diagonally dominant.
    template <typename T>
    void sherman_morrison(std::vector<T>& d) const
    {
        const std::size_t n = d.size();
        const double gamma = -m_w;
        std::vector<double> diag(n, m_w);
        diag[0] = m_w - gamma;
        diag[n - 1] = m_w - 1.0 / gamma;
        std::vector<double> u(n, 0.0);
        u[0] = gamma;
        u[n - 1] = 1.0;
        std::vector<double> cp(n);
        auto thomas = [&](auto& rhs) {
            cp[0] = 1.0 / diag[0];
            rhs[0] = rhs[0] / diag[0];
            for (std::size_t i = 1; i < n; ++i) {
                const double m = diag[i] - cp[i - 1];
                cp[i] = 1.0 / m;
                rhs[i] = (rhs[i] - rhs[i - 1]) / m;
            }
            for (std::size_t i = n - 1; i-- > 0;) rhs[i] = rhs[i] - cp[i] * rhs[i + 1];
        };
        thomas(d);
        thomas(u);
        const T fact = (d[0] + d[n - 1] / gamma) / (1.0 + u[0] + u[n - 1] / gamma);
        for (std::size_t i = 0; i < n; ++i) d[i] -= fact * u[i];
    }

    int m_n;
    double m_w;
    bool m_dense = false;
    Eigen::PartialPivLU<Eigen::MatrixXd> m_lu;
};

/// Periodic implicit derivative of `signal` with spacing h.
template <typename T>
std::vector<T> implicit_derivative(const std::vector<T>& signal, double w, double h)
{
    require(h > 0.0, ErrorCode::InvalidArgument, "spacing must be positive");
    const int n = static_cast<int>(signal.size());
    const CyclicSmoother solver(n, w);
    std::vector<T> x(signal.size());
    for (int i = 0; i < n; ++i) {
        x[static_cast<std::size_t>(i)] =
            (signal[static_cast<std::size_t>((i + 1) % n)] - signal[static_cast<std::size_t>((i + n - 1) % n)]) /
            (2.0 * h);
    }
    solver.solve(x);
    return x;
}

enum class Axis { X, Y };

/// D(w) along `axis` followed by the inverse of [1 w 1]/(w+2) along both axes.
/// Per axis the response is sharpened_response(w, omega h) / h.
inline GridField sharpened_gradient_2d(const GridField& f, double w, Axis axis = Axis::X)
{
    require(f.boundary == Boundary::Periodic, ErrorCode::InvalidArgument, "sharpened gradient needs a periodic field");
    const StencilWeight sw(w);
    GridField g = apply(axis == Axis::X ? dx_stencil(sw, f.h) : dy_stencil(sw, f.h), f);
    if (sw.is_infinite()) return g;

    const CyclicSmoother along_x(f.width, w);
    const CyclicSmoother along_y(f.height, w);
    parallel_rows(static_cast<std::size_t>(f.height), [&](std::size_t row) {
        const int j = static_cast<int>(row);
        std::vector<double> line(static_cast<std::size_t>(f.width));
        for (int i = 0; i < f.width; ++i) line[static_cast<std::size_t>(i)] = g.at(i, j);
        along_x.solve(line);
        for (int i = 0; i < f.width; ++i) g.at(i, j) = line[static_cast<std::size_t>(i)];
    });
    parallel_rows(static_cast<std::size_t>(f.width), [&](std::size_t col) {
        const int i = static_cast<int>(col);
        std::vector<double> line(static_cast<std::size_t>(f.height));
        for (int j = 0; j < f.height; ++j) line[static_cast<std::size_t>(j)] = g.at(i, j);
        along_y.solve(line);
        for (int j = 0; j < f.height; ++j) g.at(i, j) = line[static_cast<std::size_t>(j)];
    });
    return g;
}

enum class ResponseKind { Explicit, Sharpened };

inline const char* to_string(ResponseKind k) { return k == ResponseKind::Explicit ? "explicit" : "sharpened"; }

/// CSV blocks (one per w) with columns omega, re, im, abs_err where
/// abs_err = |H(omega) - i omega|. Explicit responses are taken along the axis
/// (omega2 = 0). Omega runs over [0, omega_max] in `samples` equal steps.
inline void emit_response_table(std::ostream& os, const std::vector<double>& ws, double omega_max, int samples,
                                ResponseKind kind = ResponseKind::Sharpened)
{
    require(samples >= 2, ErrorCode::InvalidArgument, "need at least 2 samples");
    require(omega_max > 0.0 && omega_max < std::numbers::pi, ErrorCode::InvalidArgument,
            "omega_max must lie in (0, pi)");
    const auto old = os.precision(17);
    os << "# scheme=" << to_string(kind) << " omega_max=" << omega_max << " samples=" << samples << "\n";
    for (double w : ws) {
        os << "# w=" << StencilWeight(w).str() << "\n";
        os << "w,omega,re,im,abs_err\n";
        for (int k = 0; k < samples; ++k) {
            const double om = omega_max * k / (samples - 1);
            const Complex hval = kind == ResponseKind::Sharpened ? sharpened_response(w, om) : explicit_response(w, om, 0.0);
            os << StencilWeight(w).str() << "," << om << "," << hval.real() << "," << hval.imag() << ","
               << std::abs(hval - Complex(0.0, om)) << "\n";
        }
    }
    os.precision(old);
}

/// max over omega in [0, omega_max] (grid of `samples` points) of |H(omega) - i omega|.
inline double max_response_error(double w, double omega_max, int samples = 2001)
{
    double e = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double om = omega_max * k / (samples - 1);
        e = std::max(e, std::abs(sharpened_response(w, om) - Complex(0.0, om)));
    }
    return e;
}

} // namespace isoops
