#pragma once

#include "isoops/error.hpp"
#include "isoops/veronese.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace testing {

inline std::mt19937_64& rng()
{
    static std::mt19937_64 gen(20240611u);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline isoops::Vec random_unit(int dim)
{
    std::normal_distribution<double> n(0.0, 1.0);
    isoops::Vec v(dim);
    do {
        for (int i = 0; i < dim; ++i) v[i] = n(rng());
    } while (v.norm() < 1e-3);
    return v / v.norm();
}

/// Code of the isoops::Error thrown by f, or nullopt when nothing (or something else) is thrown.
template <typename F>
std::optional<isoops::ErrorCode> thrown_code(F&& f)
{
    try {
        f();
    } catch (const isoops::Error& e) {
        return e.code();
    } catch (...) {
        return std::nullopt;
    }
    return std::nullopt;
}

/// Random homogeneous quadratic x^T A x (A symmetric) as a Polynomial, plus trace(A).
struct Quadratic
{
    isoops::Polynomial poly;
    double trace = 0.0;
};

inline Quadratic random_quadratic(int dim, double constant = 0.0)
{
    Quadratic q;
    q.poly.ambient_dim = dim;
    for (const auto& m : isoops::monomials(dim, 2)) {
        const double c = uniform(-1.0, 1.0);
        q.poly.terms.emplace_back(m, c);
        for (int e : m.exponents)
            if (e == 2) q.trace += c;
    }
    if (constant != 0.0) {
        q.poly.terms.emplace_back(isoops::Monomial{std::vector<int>(static_cast<std::size_t>(dim), 0)}, constant);
    }
    return q;
}

} // namespace testing
