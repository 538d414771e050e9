#pragma once

// Full and harmonic Veronese maps: monomial bases of homogeneous polynomials
// of a fixed degree, the harmonic subspace (exact integer null space of the
// Laplacian), and evaluation of a basis on points of the unit sphere.

#include "isoops/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>
#include <vector>

namespace isoops {

using Vec = Eigen::VectorXd;

/// C(m, n), zero when m < n or either argument is negative.
inline std::int64_t binomial(int m, int n)
{
    if (n < 0 || m < 0 || m < n) return 0;
    n = std::min(n, m - n);
    std::int64_t r = 1;
    for (int i = 1; i <= n; ++i) r = r * (m - n + i) / i;
    return r;
}

/// Dimension of the degree-k spherical harmonics on S^n, given ambient dim n+1.
inline std::int64_t harmonic_dimension(int ambient_dim, int degree)
{
    const int n = ambient_dim - 1;
    return binomial(n + degree, n) - binomial(n + degree - 2, n);
}

struct Monomial
{
    std::vector<int> exponents;

    int degree() const { return std::accumulate(exponents.begin(), exponents.end(), 0); }

    double evaluate(const Vec& x) const
    {
        double v = 1.0;
        for (std::size_t i = 0; i < exponents.size(); ++i) {
            for (int p = 0; p < exponents[i]; ++p) v *= x[static_cast<Eigen::Index>(i)];
        }
        return v;
    }

    /// Mean of the monomial over the unit sphere in R^d.
    double sphere_mean() const
    {
        const int d = static_cast<int>(exponents.size());
        double num = 1.0;
        for (int a : exponents) {
            if (a % 2 != 0) return 0.0;
            for (int j = a - 1; j > 0; j -= 2) num *= j;
        }
        double den = 1.0;
        for (int j = 0; j < degree() / 2; ++j) den *= d + 2 * j;
        return num / den;
    }

    bool operator==(const Monomial&) const = default;
};

/// Homogeneous monomials of `degree` in `ambient_dim` variables. Pure powers
/// x_i^k come first, the rest follow in descending lexicographic order of the
/// exponent vector; for degree 2 this yields x1^2..xd^2, x1x2, x1x3, ...
inline std::vector<Monomial> monomials(int ambient_dim, int degree)
{
    require(ambient_dim >= 1, ErrorCode::InvalidArgument, "ambient dimension must be >= 1");
    std::vector<Monomial> out;
    if (degree < 0) return out;

    std::vector<Monomial> lex;
    std::vector<int> e(static_cast<std::size_t>(ambient_dim), 0);
    // recursive descending-lex enumeration
    auto rec = [&](auto&& self, int pos, int remaining) -> void {
        if (pos == ambient_dim - 1) {
            e[static_cast<std::size_t>(pos)] = remaining;
            lex.push_back({e});
            return;
        }
        for (int a = remaining; a >= 0; --a) {
            e[static_cast<std::size_t>(pos)] = a;
            self(self, pos + 1, remaining - a);
        }
    };
    rec(rec, 0, degree);

    if (degree >= 2) {
        for (int i = 0; i < ambient_dim; ++i) {
            Monomial m{std::vector<int>(static_cast<std::size_t>(ambient_dim), 0)};
            m.exponents[static_cast<std::size_t>(i)] = degree;
            out.push_back(m);
        }
        for (const auto& m : lex) {
            bool pure = std::count(m.exponents.begin(), m.exponents.end(), degree) == 1;
            if (!pure) out.push_back(m);
        }
    } else {
        out = std::move(lex);
    }
    return out;
}

inline std::size_t monomial_index(const std::vector<Monomial>& list, const Monomial& m)
{
    for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i] == m) return i;
    }
    fail(ErrorCode::InvalidArgument, "monomial not in list");
}

/// Integer matrix of the Laplacian from degree-k to degree-(k-2) homogeneous
/// polynomials in the monomial bases above (rows: degree k-2, cols: degree k).
inline std::vector<std::vector<std::int64_t>> laplacian_matrix(int ambient_dim, int degree)
{
    const auto src = monomials(ambient_dim, degree);
    const auto dst = monomials(ambient_dim, degree - 2);
    std::vector<std::vector<std::int64_t>> m(dst.size(), std::vector<std::int64_t>(src.size(), 0));
    for (std::size_t c = 0; c < src.size(); ++c) {
        for (int i = 0; i < ambient_dim; ++i) {
            const int a = src[c].exponents[static_cast<std::size_t>(i)];
            if (a < 2) continue;
            Monomial t = src[c];
            t.exponents[static_cast<std::size_t>(i)] -= 2;
            m[monomial_index(dst, t)][c] += static_cast<std::int64_t>(a) * (a - 1);
        }
    }
    return m;
}

/// Exact Laplacian of an integer coefficient vector (over monomials(d, k)).
inline std::vector<std::int64_t> apply_laplacian(int ambient_dim, int degree,
                                                 const std::vector<std::int64_t>& coeffs)
{
    const auto lap = laplacian_matrix(ambient_dim, degree);
    std::vector<std::int64_t> out(lap.size(), 0);
    for (std::size_t r = 0; r < lap.size(); ++r) {
        for (std::size_t c = 0; c < coeffs.size(); ++c) out[r] += lap[r][c] * coeffs[c];
    }
    return out;
}

namespace detail {

__extension__ typedef __int128 wide_int;

struct Rational
{
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Rational make(wide_int n, wide_int d)
    {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        wide_int a = n < 0 ? -n : n, b = d;
        while (b != 0) {
            wide_int t = a % b;
            a = b;
            b = t;
        }
        if (a == 0) a = 1;
        return {static_cast<std::int64_t>(n / a), static_cast<std::int64_t>(d / a)};
    }

    bool zero() const { return num == 0; }
    Rational operator-(const Rational& o) const
    {
        return make(static_cast<wide_int>(num) * o.den - static_cast<wide_int>(o.num) * den,
                    static_cast<wide_int>(den) * o.den);
    }
    Rational operator*(const Rational& o) const
    {
        return make(static_cast<wide_int>(num) * o.num, static_cast<wide_int>(den) * o.den);
    }
    Rational operator/(const Rational& o) const
    {
        return make(static_cast<wide_int>(num) * o.den, static_cast<wide_int>(den) * o.num);
    }
};

/// Integer basis of the null space of an integer matrix with `cols` columns.
inline std::vector<std::vector<std::int64_t>> integer_null_space(
    const std::vector<std::vector<std::int64_t>>& mat, std::size_t cols)
{
    std::vector<std::vector<Rational>> a;
    for (const auto& row : mat) {
        std::vector<Rational> r;
        for (auto v : row) r.push_back({v, 1});
        a.push_back(std::move(r));
    }
    std::vector<std::size_t> pivot_cols;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t p = row;
        while (p < a.size() && a[p][c].zero()) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[row]);
        const Rational lead = a[row][c];
        for (auto& v : a[row]) v = v / lead;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || a[r][c].zero()) continue;
            const Rational f = a[r][c];
            for (std::size_t k = 0; k < cols; ++k) a[r][k] = a[r][k] - f * a[row][k];
        }
        pivot_cols.push_back(c);
        ++row;
    }

    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;

    std::vector<std::vector<std::int64_t>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<Rational> v(cols, Rational{0, 1});
        v[f] = {1, 1};
        for (std::size_t r = 0; r < pivot_cols.size(); ++r) {
            v[pivot_cols[r]] = Rational{0, 1} - a[r][f];
        }
        std::int64_t lcm = 1;
        for (const auto& q : v) lcm = std::lcm(lcm, q.den);
        std::vector<std::int64_t> iv(cols);
        std::int64_t g = 0;
        for (std::size_t k = 0; k < cols; ++k) {
            iv[k] = v[k].num * (lcm / v[k].den);
            g = std::gcd(g, iv[k]);
        }
        std::int64_t sign = 1;
        for (auto x : iv) {
            if (x != 0) {
                sign = x < 0 ? -1 : 1;
                break;
            }
        }
        for (auto& x : iv) x = x / g * sign;
        basis.push_back(std::move(iv));
    }
    return basis;
}

} // namespace detail

enum class BasisKind { Full, Harmonic };

inline const char* to_string(BasisKind kind) { return kind == BasisKind::Full ? "full" : "harmonic"; }

/// A basis of homogeneous polynomials of one degree. Element j has the integer
/// coefficient vector elements[j] over `monomials`.
struct PolyBasis
{
    int ambient_dim = 0;
    int degree = 0;
    BasisKind kind = BasisKind::Full;
    std::vector<Monomial> monomials;
    std::vector<std::vector<std::int64_t>> elements;

    std::size_t size() const { return elements.size(); }

    double evaluate(std::size_t element, const Vec& x) const
    {
        double s = 0.0;
        const auto& c = elements[element];
        for (std::size_t m = 0; m < monomials.size(); ++m) {
            if (c[m] != 0) s += static_cast<double>(c[m]) * monomials[m].evaluate(x);
        }
        return s;
    }
};

inline PolyBasis full_basis(int ambient_dim, int degree)
{
    require(degree >= 0, ErrorCode::InvalidArgument, "degree must be >= 0");
    PolyBasis b;
    b.ambient_dim = ambient_dim;
    b.degree = degree;
    b.kind = BasisKind::Full;
    b.monomials = monomials(ambient_dim, degree);
    for (std::size_t i = 0; i < b.monomials.size(); ++i) {
        std::vector<std::int64_t> e(b.monomials.size(), 0);
        e[i] = 1;
        b.elements.push_back(std::move(e));
    }
    return b;
}

/// Integer basis of the kernel of the Laplacian on degree-k homogeneous
/// polynomials; below degree 2 every monomial is harmonic.
inline PolyBasis harmonic_basis(int ambient_dim, int degree)
{
    require(degree >= 0, ErrorCode::InvalidArgument, "degree must be >= 0");
    PolyBasis b;
    b.ambient_dim = ambient_dim;
    b.degree = degree;
    b.kind = BasisKind::Harmonic;
    b.monomials = monomials(ambient_dim, degree);
    b.elements = detail::integer_null_space(laplacian_matrix(ambient_dim, degree), b.monomials.size());
    return b;
}

/// Image of sphere points under a basis. For the full degree-2 map `xi` is
/// (1,...,1;0,...,0) with ambient_dim ones; it is empty otherwise.
struct VeroneseImage
{
    std::vector<Vec> points;
    std::vector<Vec> source_points;
    Vec xi;
};

inline VeroneseImage evaluate_basis(const PolyBasis& basis, const std::vector<Vec>& points)
{
    VeroneseImage img;
    for (const auto& p : points) {
        require(p.size() == basis.ambient_dim, ErrorCode::DimensionMismatch,
                "point has dimension " + std::to_string(p.size()) + ", basis expects " +
                    std::to_string(basis.ambient_dim));
        require(std::abs(p.norm() - 1.0) <= 1e-9, ErrorCode::InvalidArgument, "point is not on the unit sphere");
        Vec q(static_cast<Eigen::Index>(basis.size()));
        for (std::size_t j = 0; j < basis.size(); ++j) q[static_cast<Eigen::Index>(j)] = basis.evaluate(j, p);
        img.points.push_back(std::move(q));
        img.source_points.push_back(p);
    }
    if (basis.kind == BasisKind::Full && basis.degree == 2) {
        img.xi = Vec::Zero(static_cast<Eigen::Index>(basis.size()));
        img.xi.head(basis.ambient_dim).setOnes();
    }
    return img;
}

/// Polynomial with real coefficients, used for test functions and lattice means.
struct Polynomial
{
    int ambient_dim = 0;
    std::vector<std::pair<Monomial, double>> terms;

    double operator()(const Vec& x) const
    {
        double s = 0.0;
        for (const auto& [m, c] : terms) s += c * m.evaluate(x);
        return s;
    }

    double sphere_mean() const
    {
        double s = 0.0;
        for (const auto& [m, c] : terms) s += c * m.sphere_mean();
        return s;
    }

    /// Combination sum_j coeffs[j] * basis element j.
    static Polynomial from_basis(const PolyBasis& basis, const std::vector<double>& coeffs)
    {
        Polynomial p;
        p.ambient_dim = basis.ambient_dim;
        for (std::size_t m = 0; m < basis.monomials.size(); ++m) {
            double c = 0.0;
            for (std::size_t j = 0; j < basis.size(); ++j) c += coeffs[j] * static_cast<double>(basis.elements[j][m]);
            if (c != 0.0) p.terms.emplace_back(basis.monomials[m], c);
        }
        return p;
    }
};

/// CSV rows: element index, exponent tuple, integer coefficient (nonzero terms only).
inline void write_basis_csv(std::ostream& os, const PolyBasis& basis)
{
    os << "# kind=" << to_string(basis.kind) << " ambient_dim=" << basis.ambient_dim << " degree=" << basis.degree
       << " elements=" << basis.size() << "\n";
    os << "element";
    for (int i = 0; i < basis.ambient_dim; ++i) os << ",e" << (i + 1);
    os << ",coefficient\n";
    for (std::size_t j = 0; j < basis.size(); ++j) {
        for (std::size_t m = 0; m < basis.monomials.size(); ++m) {
            if (basis.elements[j][m] == 0) continue;
            os << j;
            for (int e : basis.monomials[m].exponents) os << "," << e;
            os << "," << basis.elements[j][m] << "\n";
        }
    }
}

} // namespace isoops
