#pragma once

// Planar coordinate changes (x, y) -> (s, z) used to reduce the general
// problem to a straight corner with Neumann data, and the push-forward of
// the operator through them.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <string>

#include "thinlab/coefficients.hpp"
#include "thinlab/core.hpp"
#include "thinlab/geometry.hpp"

namespace thinlab {

/// Value, Jacobian and Hessians of a map R^2 -> R^2 at one point.
/// jac[a][b] = d out_a / d in_b; hess[a] = {d11, d12, d22} of out_a.
struct MapJet {
    std::array<double, 2> val{};
    std::array<std::array<double, 2>, 2> jac{};
    std::array<std::array<double, 3>, 2> hess{};

    Point point() const { return {val[0], val[1]}; }
    double det() const { return jac[0][0] * jac[1][1] - jac[0][1] * jac[1][0]; }

    static MapJet identity(Point p)
    {
        MapJet j;
        j.val = {p.x, p.y};
        j.jac = {{{1.0, 0.0}, {0.0, 1.0}}};
        return j;
    }
};

/// Jet of outer(inner(p)) from the jets of inner at p and outer at inner(p).
inline MapJet chain(const MapJet& outer, const MapJet& inner)
{
    MapJet r;
    r.val = outer.val;
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            r.jac[a][b] = outer.jac[a][0] * inner.jac[0][b] + outer.jac[a][1] * inner.jac[1][b];
    auto h = [](const std::array<double, 3>& v, int i, int j) { return i == j ? v[2 * i] : v[1]; };
    constexpr int idx[3][2] = {{0, 0}, {0, 1}, {1, 1}};
    for (int a = 0; a < 2; ++a)
        for (int k = 0; k < 3; ++k) {
            const int b = idx[k][0], c = idx[k][1];
            double v = outer.jac[a][0] * inner.hess[0][k] + outer.jac[a][1] * inner.hess[1][k];
            for (int p = 0; p < 2; ++p)
                for (int q = 0; q < 2; ++q)
                    v += h(outer.hess[a], p, q) * inner.jac[p][b] * inner.jac[q][c];
            r.hess[a][k] = v;
        }
    return r;
}

/// Invertible planar map with second-order jets in both directions.
struct PlaneMap {
    std::string tag;
    std::function<MapJet(Point)> forward_jet; ///< (x, y) -> (s, z)
    std::function<MapJet(Point)> inverse_jet; ///< (s, z) -> (x, y)

    Point forward(Point p) const { return forward_jet(p).point(); }
    Point inverse(Point q) const { return inverse_jet(q).point(); }

    static PlaneMap identity()
    {
        return {"identity", [](Point p) { return MapJet::identity(p); }, [](Point q) { return MapJet::identity(q); }};
    }
};

/// Apply `first`, then `second`.
inline PlaneMap compose(const PlaneMap& first, const PlaneMap& second)
{
    return {first.tag + "," + second.tag,
            [first, second](Point p) {
                const MapJet a = first.forward_jet(p);
                return chain(second.forward_jet(a.point()), a);
            },
            [first, second](Point q) {
                const MapJet b = second.inverse_jet(q);
                return chain(first.inverse_jet(b.point()), b);
            }};
}

namespace detail {

/// Trajectory of dx/dy = G(x) with the variational equations for x_s and x_ss,
/// integrated from y = 0 (x = s) to y = z with classical RK4.
struct Trajectory {
    double x, xs, xss;
};

inline Trajectory integrate_trajectory(const Function1& G, double s, double z, double hmax)
{
    const int n = std::max(1, int(std::ceil(std::abs(z) / hmax)));
    const double h = z / n;
    std::array<double, 3> u{s, 1.0, 0.0};
    auto rhs = [&G](const std::array<double, 3>& w) {
        const double g1 = G.d1(w[0]);
        return std::array<double, 3>{G.f(w[0]), g1 * w[1], G.d2(w[0]) * w[1] * w[1] + g1 * w[2]};
    };
    for (int i = 0; i < n; ++i) {
        const auto k1 = rhs(u);
        std::array<double, 3> t;
        for (int c = 0; c < 3; ++c)
            t[c] = u[c] + 0.5 * h * k1[c];
        const auto k2 = rhs(t);
        for (int c = 0; c < 3; ++c)
            t[c] = u[c] + 0.5 * h * k2[c];
        const auto k3 = rhs(t);
        for (int c = 0; c < 3; ++c)
            t[c] = u[c] + h * k3[c];
        const auto k4 = rhs(t);
        for (int c = 0; c < 3; ++c)
            u[c] += h / 6.0 * (k1[c] + 2 * k2[c] + 2 * k3[c] + k4[c]);
    }
    return {u[0], u[1], u[2]};
}

/// Foot point s of the trajectory through (x, y): integrate dx/dy = G(x) back to y = 0.
inline double trajectory_foot(const Function1& G, double x, double y, double hmax)
{
    const int n = std::max(1, int(std::ceil(std::abs(y) / hmax)));
    const double h = -y / n;
    double u = x;
    for (int i = 0; i < n; ++i) {
        const double k1 = G.f(u);
        const double k2 = G.f(u + 0.5 * h * k1);
        const double k3 = G.f(u + 0.5 * h * k2);
        const double k4 = G.f(u + h * k3);
        u += h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
    }
    return u;
}

struct Cutoff {
    static constexpr double lo = 0.75;
    static constexpr double hi = 13.0 / 16.0;

    // 1 on [0, lo], 0 on [hi, 1], quintic smoothstep in between (C^2).
    static std::array<double, 3> eval(double x)
    {
        const double w = hi - lo;
        const double t = (x - lo) / w;
        if (t <= 0.0)
            return {1.0, 0.0, 0.0};
        if (t >= 1.0)
            return {0.0, 0.0, 0.0};
        const double S = t * t * t * (10 - 15 * t + 6 * t * t);
        const double S1 = 30 * t * t * (1 - t) * (1 - t);
        const double S2 = 60 * t * (1 - t) * (1 - 2 * t);
        return {1.0 - S, -S1 / w, -S2 / (w * w)};
    }
};

} // namespace detail

/// P1: straighten the oblique direction. The inverse (s, z) -> (x, y) follows the
/// trajectory x(z; s) of dx/dy = G(x), x(0; s) = s; the forward map integrates
/// the same ODE backwards. Jacobians come from the variational equations.
inline PlaneMap p1_flatten(const Function1& G, const BoundaryProfile& profile, int boundary_samples = 1024)
{
    const double hmax = std::max(profile.max_value(), 1e-6) / 64.0;
    PlaneMap m;
    m.tag = "p1";
    m.inverse_jet = [G, hmax](Point q) {
        const auto t = detail::integrate_trajectory(G, q.x, q.y, hmax);
        const double g = G.f(t.x), g1 = G.d1(t.x);
        MapJet j;
        j.val = {t.x, q.y};
        j.jac = {{{t.xs, g}, {0.0, 1.0}}};
        j.hess[0] = {t.xss, g1 * t.xs, g1 * g};
        j.hess[1] = {0.0, 0.0, 0.0};
        return j;
    };
    m.forward_jet = [G, hmax](Point p) {
        const double s = detail::trajectory_foot(G, p.x, p.y, hmax);
        const auto t = detail::integrate_trajectory(G, s, p.y, hmax);
        const double Xs = t.xs, Xss = t.xss;
        const double Xz = G.f(t.x), Xsz = G.d1(t.x) * Xs, Xzz = G.d1(t.x) * Xz;
        const double sx = 1.0 / Xs;
        const double sy = -Xz / Xs;
        const double sxx = -Xss * sx * sx / Xs;
        const double sxy = -(Xss * sy + Xsz) * sx / Xs;
        const double syy = -((Xss * sy + Xsz) * sy + Xsz * sy + Xzz) / Xs;
        MapJet j;
        j.val = {s, p.y};
        j.jac = {{{sx, sy}, {0.0, 1.0}}};
        j.hess[0] = {sxx, sxy, syy};
        j.hess[1] = {0.0, 0.0, 0.0};
        return j;
    };

    // Boundary reparametrization s(x) of the image of the upper boundary must be increasing.
    double prev = -INFINITY;
    for (int i = 0; i <= boundary_samples; ++i) {
        const double x = double(i) / boundary_samples;
        const double s = m.forward({x, profile(x)}).x;
        if (!(s > prev))
            throw Error(ErrorKind::NonInvertible,
                        "boundary reparametrization not increasing near x = " + std::to_string(x));
        prev = s;
    }
    return m;
}

/// Ratio f1/f with f1 = chi Pi_bar x + (1 - chi) f, and its first two derivatives.
inline std::array<double, 3> straightening_ratio(const BoundaryProfile& p, double x)
{
    x = std::clamp(x, 1e-9, 1.0);
    const auto [chi, chi1, chi2] = detail::Cutoff::eval(x);
    if (chi == 0.0 && chi1 == 0.0 && chi2 == 0.0)
        return {1.0, 0.0, 0.0};
    const double pb = p.pi_bar();
    const double f = p.eval(x), f1 = p.eval_d1(x), f2 = p.eval_d2(x);
    const double q = pb * x / f - 1.0;
    const double w = f - x * f1;
    const double q1 = pb * w / (f * f);
    const double q2 = pb * (-x * f2 / (f * f) - 2 * f1 * w / (f * f * f));
    return {1.0 + chi * q, chi1 * q + chi * q1, chi2 * q + 2 * chi1 * q1 + chi * q2};
}

/// P2: s = x, z = (f1(x)/f(x)) y. Maps the upper boundary onto z = f1(s),
/// which equals Pi_bar s on [0, 3/4]. Identity for x >= 13/16.
inline PlaneMap p2_straighten(const BoundaryProfile& profile, int check_samples = 4096)
{
    const double hi = 1.0 + profile.c_f() + 1e-9;
    for (int i = 1; i < check_samples; ++i) {
        const double x = double(i) / check_samples;
        const double g = straightening_ratio(profile, x)[0];
        if (g < 1.0 - 1e-9 || g > hi)
            throw Error(ErrorKind::DegenerateRatio,
                        "f1/f = " + std::to_string(g) + " at x = " + std::to_string(x));
    }
    auto prof = std::make_shared<BoundaryProfile>(profile);
    PlaneMap m;
    m.tag = "p2";
    m.forward_jet = [prof](Point p) {
        const auto [g, g1, g2] = straightening_ratio(*prof, p.x);
        MapJet j;
        j.val = {p.x, g * p.y};
        j.jac = {{{1.0, 0.0}, {g1 * p.y, g}}};
        j.hess[0] = {0.0, 0.0, 0.0};
        j.hess[1] = {g2 * p.y, g1, 0.0};
        return j;
    };
    m.inverse_jet = [prof](Point q) {
        const auto [g, g1, g2] = straightening_ratio(*prof, q.x);
        MapJet j;
        j.val = {q.x, q.y / g};
        j.jac = {{{1.0, 0.0}, {-q.y * g1 / (g * g), 1.0 / g}}};
        j.hess[0] = {0.0, 0.0, 0.0};
        j.hess[1] = {q.y * (2 * g1 * g1 / (g * g * g) - g2 / (g * g)), -g1 / (g * g), 0.0};
        return j;
    };
    return m;
}

/// P3: (s, z) = (1 - x, y). Moves the right corner to the origin; involutive.
inline PlaneMap p3_reflect()
{
    auto jet = [](Point p) {
        MapJet j;
        j.val = {1.0 - p.x, p.y};
        j.jac = {{{-1.0, 0.0}, {0.0, 1.0}}};
        return j;
    };
    return {"p3", jet, jet};
}

/// Profile of the image of the upper boundary under `m`, z = fhat(s).
inline BoundaryProfile mapped_profile(const BoundaryProfile& p, const PlaneMap& m)
{
    auto prof = std::make_shared<BoundaryProfile>(p);
    auto map = std::make_shared<PlaneMap>(m);
    struct BoundaryJet {
        double S, Z, S1, Z1, S2, Z2;
    };
    auto bjet = [prof, map](double x) {
        const double f = prof->eval(x), f1 = prof->eval_d1(x), f2 = prof->eval_d2(x);
        const MapJet j = map->forward_jet({x, f});
        BoundaryJet b;
        b.S = j.val[0];
        b.Z = j.val[1];
        b.S1 = j.jac[0][0] + j.jac[0][1] * f1;
        b.Z1 = j.jac[1][0] + j.jac[1][1] * f1;
        b.S2 = j.hess[0][0] + 2 * j.hess[0][1] * f1 + j.hess[0][2] * f1 * f1 + j.jac[0][1] * f2;
        b.Z2 = j.hess[1][0] + 2 * j.hess[1][1] * f1 + j.hess[1][2] * f1 * f1 + j.jac[1][1] * f2;
        return b;
    };
    const bool increasing = bjet(1.0).S > bjet(0.0).S;
    // Solve S(x) = s by safeguarded Newton.
    auto locate = [bjet, increasing](double s) {
        double lo = 0.0, hi = 1.0;
        double x = increasing ? s : 1.0 - s;
        x = std::clamp(x, 0.0, 1.0);
        BoundaryJet b = bjet(x);
        for (int it = 0; it < 100; ++it) {
            const double r = b.S - s;
            if ((r < 0.0) == increasing)
                lo = x;
            else
                hi = x;
            if (std::abs(r) < 1e-15)
                break;
            double xn = x - r / b.S1;
            if (!(xn > lo && xn < hi))
                xn = 0.5 * (lo + hi);
            if (std::abs(xn - x) < 1e-16)
                break;
            x = xn;
            b = bjet(x);
        }
        return b;
    };
    // f, f' and f'' are queried at the same s in turn; nested mapped profiles
    // would otherwise repeat every inner solve three times
    struct Memo {
        std::mutex mu;
        double s = NAN;
        BoundaryJet b{};
    };
    auto memo = std::make_shared<Memo>();
    auto cached = [locate, memo](double s) {
        std::lock_guard<std::mutex> lock(memo->mu);
        if (s != memo->s) {
            memo->b = locate(s);
            memo->s = s;
        }
        return memo->b;
    };
    Function1 fhat{[cached](double s) {
                       if (s <= 0.0 || s >= 1.0)
                           return 0.0;
                       return cached(s).Z;
                   },
                   [cached](double s) {
                       const auto b = cached(std::clamp(s, 0.0, 1.0));
                       return b.Z1 / b.S1;
                   },
                   [cached](double s) {
                       const auto b = cached(std::clamp(s, 0.0, 1.0));
                       const double d1 = b.Z1 / b.S1;
                       return (b.Z2 - d1 * b.S2) / (b.S1 * b.S1);
                   }};
    return BoundaryProfile(std::move(fhat), p.gamma(), "mapped:" + m.tag);
}

/// Operator, oblique coefficient and domain after a change of variables.
struct TransformedProblem {
    CoefficientSet coefficients; ///< A1..E1 as functions of (s, z); G1 as a function of s
    BoundaryProfile profile;     ///< image of the upper boundary
    std::string provenance;
    PlaneMap map;
    double source_c_f = 0.0;     ///< C_f of the original profile
    double lambda1 = 0.0;        ///< sampled ellipticity constant of (A1, B1, C1)
};

/// Coefficients of the pushed-forward operator at the image point of (x, y).
struct PushedCoefficients {
    double A1, B1, C1, D1, E1;
};

inline PushedCoefficients pushed_coefficients(const CoefficientSet& c, const MapJet& j, double x, double y)
{
    const double A = c.A(x, y), B = c.B(x, y), C = c.C(x, y), D = c.D(x, y), E = c.E(x, y);
    const double sx = j.jac[0][0], sy = j.jac[0][1], zx = j.jac[1][0], zy = j.jac[1][1];
    const auto& hs = j.hess[0];
    const auto& hz = j.hess[1];
    return {A * sx * sx + B * sx * sy + C * sy * sy,
            2 * A * sx * zx + B * (sy * zx + sx * zy) + 2 * C * sy * zy,
            A * zx * zx + B * zx * zy + C * zy * zy,
            A * hs[0] + B * hs[1] + C * hs[2] + D * sx + E * sy,
            A * hz[0] + B * hz[1] + C * hz[2] + D * zx + E * zy};
}

/// `image` is the profile of the mapped upper boundary when the caller already has it.
inline TransformedProblem push_operator(const CoefficientSet& c, const PlaneMap& m, const BoundaryProfile& profile,
                                        const BoundaryProfile* image = nullptr)
{
    auto cs = std::make_shared<CoefficientSet>(c);
    auto map = std::make_shared<PlaneMap>(m);
    auto component = [cs, map](int which) -> Scalar2 {
        return [cs, map, which](double s, double z) {
            const Point p = map->inverse({s, z});
            const auto k = pushed_coefficients(*cs, map->forward_jet(p), p.x, p.y);
            switch (which) {
            case 0: return k.A1;
            case 1: return k.B1;
            case 2: return k.C1;
            case 3: return k.D1;
            default: return k.E1;
            }
        };
    };
    CoefficientSet out = c;
    out.A = component(0);
    out.B = component(1);
    out.C = component(2);
    out.D = component(3);
    out.E = component(4);
    out.name = c.name + "@" + m.tag;

    // u_y + G u_x = (s_y + G s_x) u_s + (z_y + G z_x) u_z on the lower boundary.
    Scalar1 g1 = [cs, map](double s) {
        const Point p = map->inverse({s, 0.0});
        const MapJet j = map->forward_jet({p.x, 0.0});
        const double G = cs->G.f(p.x);
        return (j.jac[0][1] + G * j.jac[0][0]) / (j.jac[1][1] + G * j.jac[1][0]);
    };
    constexpr double h = 1e-4;
    out.G = {g1, [g1](double s) { return (g1(s + h) - g1(s - h)) / (2 * h); },
             [g1](double s) { return (g1(s + h) - 2 * g1(s) + g1(s - h)) / (h * h); }};

    TransformedProblem t{out, image ? *image : mapped_profile(profile, m), m.tag, m, profile.c_f(), INFINITY};
    constexpr int nx = 64, ny = 16;
    for (int i = 1; i < nx; ++i)
        for (int jn = 0; jn <= ny; ++jn) {
            const double x = double(i) / nx;
            const double y = profile(x) * jn / ny;
            const auto k = pushed_coefficients(c, m.forward_jet({x, y}), x, y);
            t.lambda1 = std::min(t.lambda1, std::get<0>(min_quadratic_form(k.A1, k.B1, k.C1)));
        }
    t.coefficients.lambda = t.lambda1;
    return t;
}

struct RWeightedReport {
    double sup_rD1 = 0.0;
    double sup_rE1 = 0.0;
    Point argmax_D{}, argmax_E{};
    double bound = 0.0;
    bool passed = false;
};

/// sup of r|D1| and r|E1|, r = |(s, z)|, over samples of the mapped domain.
inline RWeightedReport check_rweighted_bounds(const TransformedProblem& t, double c_bar, int nx = 256, int ny = 32)
{
    RWeightedReport r;
    for (int i = 1; i < nx; ++i) {
        const double s = double(i) / nx;
        const double top = t.profile(s);
        for (int j = 0; j <= ny; ++j) {
            const double z = top * j / ny;
            const double rad = std::hypot(s, z);
            const double d = rad * std::abs(t.coefficients.D(s, z));
            const double e = rad * std::abs(t.coefficients.E(s, z));
            if (d > r.sup_rD1) {
                r.sup_rD1 = d;
                r.argmax_D = {s, z};
            }
            if (e > r.sup_rE1) {
                r.sup_rE1 = e;
                r.argmax_E = {s, z};
            }
        }
    }
    r.bound = c_bar * (1 + t.source_c_f) * (1 + t.source_c_f);
    r.passed = std::isfinite(r.sup_rD1) && std::isfinite(r.sup_rE1) && r.sup_rD1 <= r.bound && r.sup_rE1 <= r.bound;
    return r;
}

} // namespace thinlab
