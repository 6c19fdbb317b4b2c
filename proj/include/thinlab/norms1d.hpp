#pragma once

// Discrete Hölder norms of sampled one-dimensional data.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "thinlab/core.hpp"

namespace thinlab {

enum class Aggregation { Sum, Max };

inline const char* to_string(Aggregation a) { return a == Aggregation::Sum ? "sum" : "max"; }

struct HolderReport {
    int k = 0;
    double gamma = 0.0;
    double m = 0.0;
    Aggregation aggregation = Aggregation::Sum;
    double value = 0.0;
    std::vector<double> sup_terms;     ///< sup term for derivative order i = 0..k
    std::vector<Point> sup_witness;    ///< node attaining each sup term
    double seminorm = 0.0;             ///< (weighted) Hölder quotient of the k-th derivative
    Point pair_a{}, pair_b{};          ///< pair attaining the seminorm
};

/// Samples of a function on a uniform grid. Derivative arrays are optional;
/// when empty they are filled by second-order finite differences.
struct Sampled1D {
    std::vector<double> x;
    std::vector<double> v;
    std::vector<double> d1;
    std::vector<double> d2;

    std::size_t size() const { return x.size(); }
    double spacing() const { return x.size() > 1 ? (x.back() - x.front()) / double(x.size() - 1) : 0.0; }

    // values only; a Function1 goes to the overload below and keeps its derivatives
    template <class F>
        requires(!std::same_as<std::remove_cvref_t<F>, Function1>)
    static Sampled1D sample(F&& f, double a, double b, std::size_t n)
    {
        Sampled1D s;
        s.x.resize(n);
        s.v.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.x[i] = a + (b - a) * double(i) / double(n - 1);
            s.v[i] = f(s.x[i]);
        }
        return s;
    }

    static Sampled1D sample(const Function1& f, double a, double b, std::size_t n)
    {
        Sampled1D s = sample(f.f, a, b, n);
        s.d1.resize(n);
        s.d2.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            s.d1[i] = f.d1(s.x[i]);
            s.d2[i] = f.d2(s.x[i]);
        }
        return s;
    }
};

namespace detail {

inline std::vector<double> fd_derivative(std::span<const double> v, double h)
{
    const std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 3)
        return d;
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (v[i + 1] - v[i - 1]) / (2 * h);
    d[0] = (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
    d[n - 1] = (3 * v[n - 1] - 4 * v[n - 2] + v[n - 3]) / (2 * h);
    return d;
}

inline std::vector<double> fd_second_derivative(std::span<const double> v, double h)
{
    const std::size_t n = v.size();
    std::vector<double> d(n, 0.0);
    if (n < 4)
        return d;
    for (std::size_t i = 1; i + 1 < n; ++i)
        d[i] = (v[i + 1] - 2 * v[i] + v[i - 1]) / (h * h);
    d[0] = (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / (h * h);
    d[n - 1] = (2 * v[n - 1] - 5 * v[n - 2] + 4 * v[n - 3] - v[n - 4]) / (h * h);
    return d;
}

/// Derivative table [order][node] up to order k.
inline std::vector<std::vector<double>> derivative_table(const Sampled1D& s, int k)
{
    std::vector<std::vector<double>> t;
    t.push_back(s.v);
    const double h = s.spacing();
    if (k >= 1)
        t.push_back(s.d1.size() == s.size() ? s.d1 : fd_derivative(s.v, h));
    if (k >= 2)
        t.push_back(s.d2.size() == s.size() ? s.d2 : fd_second_derivative(s.v, h));
    return t;
}

} // namespace detail

/// Weighted Hölder norm with weight x^(m+i) on the i-th derivative and
/// x1^(m+k+gamma) on the pair quotient, x1 = min(x1, x2). Nodes at x <= 0 are
/// skipped when m > 0. Pairs closer than 2h are skipped.
inline HolderReport weighted_norm_1d(const Sampled1D& s, int k, double gamma, double m,
                                     Aggregation agg = Aggregation::Max)
{
    HolderReport r;
    r.k = k;
    r.gamma = gamma;
    r.m = m;
    r.aggregation = agg;
    if (s.size() < 2)
        return r;
    const auto table = detail::derivative_table(s, k);
    const bool weighted = m > 0.0;
    auto weight = [&](double x, double p) { return weighted || p != 0.0 ? std::pow(x, p) : 1.0; };
    auto skip = [&](double x) { return weighted && x <= 0.0; };

    for (int i = 0; i <= k; ++i) {
        double best = 0.0;
        Point at{};
        for (std::size_t n = 0; n < s.size(); ++n) {
            if (skip(s.x[n]))
                continue;
            const double w = weighted ? weight(s.x[n], m + i) : 1.0;
            const double val = std::abs(w * table[i][n]);
            if (val > best) {
                best = val;
                at = {s.x[n], 0.0};
            }
        }
        r.sup_terms.push_back(best);
        r.sup_witness.push_back(at);
    }

    const auto& dk = table[k];
    const double min_sep = 2.0 * s.spacing() * (1.0 - 1e-12);
    for (std::size_t a = 0; a < s.size(); ++a) {
        if (skip(s.x[a]))
            continue;
        for (std::size_t b = a + 1; b < s.size(); ++b) {
            const double dx = std::abs(s.x[b] - s.x[a]);
            if (dx < min_sep)
                continue;
            const double x1 = std::min(s.x[a], s.x[b]);
            if (skip(x1))
                continue;
            double q = std::abs(dk[a] - dk[b]) / std::pow(dx, gamma);
            if (weighted)
                q *= std::pow(x1, m + k + gamma);
            if (q > r.seminorm) {
                r.seminorm = q;
                r.pair_a = {s.x[a], 0.0};
                r.pair_b = {s.x[b], 0.0};
            }
        }
    }

    double sup_part = 0.0;
    for (double t : r.sup_terms)
        sup_part = agg == Aggregation::Sum ? sup_part + t : std::max(sup_part, t);
    r.value = sup_part + r.seminorm;
    return r;
}

/// Plain C^{k,gamma} norm: sum of derivative sups plus the k-th derivative seminorm.
inline HolderReport holder_norm_1d(const Sampled1D& s, int k, double gamma)
{
    return weighted_norm_1d(s, k, gamma, 0.0, Aggregation::Sum);
}

} // namespace thinlab
