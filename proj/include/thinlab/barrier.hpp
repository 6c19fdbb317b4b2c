#pragma once

// Corner barriers Y = r^-alpha cos(k theta) and H, the quadratic corrector
// P_{x0}, and sampled certificates of the differential inequalities they satisfy.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "thinlab/coefficients.hpp"
#include "thinlab/core.hpp"
#include "thinlab/geometry.hpp"
#include "thinlab/norms1d.hpp"
#include "thinlab/solver.hpp"

namespace thinlab {

struct BarrierParams {
    double slope = 0.0;  ///< f'(0), opening of the wedge
    double k = 0.0;      ///< pi / (8 f'(0))
    double M = 0.0;      ///< 100 Lambda / lambda
    double alpha = 0.0;  ///< +-k / M
    double r0 = 0.0;     ///< |(x0, f(x0))| on the straight corner
    double x0 = 0.0;
    double fx0 = 0.0;
    double gamma = 0.5;
    double m = 0.0;      ///< weight order, 0 for the plain barrier
    double lambda = 1.0;

    bool weighted_admissible() const { return k / (4 * M) >= m + 2 + gamma; }
};

inline BarrierParams make_barrier_params(double slope, double lambda, double Lambda, double x0, double fx0,
                                         double gamma, double m = 0.0, int sign = +1)
{
    if (!(slope > 0.0))
        throw Error(ErrorKind::Config, "barrier needs f'(0) > 0");
    BarrierParams p;
    p.slope = slope;
    p.k = pi / (8 * slope);
    p.M = 100 * Lambda / lambda;
    p.alpha = (sign >= 0 ? 1.0 : -1.0) * p.k / p.M;
    p.r0 = std::sqrt(1 + slope * slope) * fx0 / slope;
    p.x0 = x0;
    p.fx0 = fx0;
    p.gamma = gamma;
    p.m = m;
    p.lambda = lambda;
    return p;
}

inline BarrierParams make_barrier_params(const BoundaryProfile& f, const CoefficientSet& c, double x0, double m = 0.0,
                                         int sign = +1)
{
    return make_barrier_params(f.slope0(), c.lambda, c.Lambda, x0, f(x0), c.gamma, m, sign);
}

namespace detail {

struct Polar {
    double r, theta;
};

inline Polar polar(Point p) { return {std::hypot(p.x, p.y), std::atan2(p.y, p.x)}; }

inline void require_wedge(const BarrierParams& p, Point at)
{
    const auto q = polar(at);
    if (!(q.r > 0.0) || std::abs(q.theta) > p.slope * (1 + 1e-12))
        throw Error(ErrorKind::OutOfWedge, "(" + std::to_string(at.x) + ", " + std::to_string(at.y) +
                                               ") outside |theta| <= f'(0)");
}

/// r^(alpha+2) L(r^-alpha cos(k theta)) in polar form.
inline double LY_scaled(const CoefficientSet& c, double alpha, double k, Point at)
{
    const auto [r, t] = polar(at);
    const double A = c.A(at.x, at.y), B = c.B(at.x, at.y), C = c.C(at.x, at.y);
    const double D = c.D(at.x, at.y), E = c.E(at.x, at.y);
    const double s = std::sin(t), co = std::cos(t), s2 = std::sin(2 * t), c2 = std::cos(2 * t);
    const double ck = std::cos(k * t), sk = std::sin(k * t);
    const double radial = A * co * co + B * s * co + C * s * s;
    const double angular = A * s * s - B * s * co + C * co * co;
    return alpha * (alpha + 1) * radial * ck + alpha * k * ((C - A) * s2 + B * c2) * sk - k * k * angular * ck -
           alpha * (angular + D * r * co + E * r * s) * ck - k * ((A - C) * s2 - B * c2 - D * r * s + E * r * co) * sk;
}

} // namespace detail

inline double eval_Y(const BarrierParams& p, Point at)
{
    detail::require_wedge(p, at);
    const auto q = detail::polar(at);
    return std::pow(q.r, -p.alpha) * std::cos(p.k * q.theta);
}

/// L Y from its closed-form polar expansion.
inline double eval_LY_closed_form(const CoefficientSet& c, const BarrierParams& p, Point at)
{
    detail::require_wedge(p, at);
    const double r = std::hypot(at.x, at.y);
    return std::pow(r, -p.alpha - 2) * detail::LY_scaled(c, p.alpha, p.k, at);
}

struct SignedMargin {
    double alpha = 0.0;
    double min_margin = INFINITY;
    Point argmin{};
};

struct YSupersolutionReport {
    std::vector<SignedMargin> per_sign; ///< alpha = +k/M and alpha = -k/M
    double min_margin = INFINITY;
    bool passed = false;
};

struct WedgeSampling {
    int n_r = 256;
    int n_theta = 64;
    double r_lo = 0.0; ///< defaults to r0 / 8
    double r_hi = 0.0; ///< defaults to 8 r0
};

/// min over wedge samples of (-L Y) r^(alpha+2) / (lambda k^2 / 8), for both signs of alpha.
inline YSupersolutionReport verify_Y_supersolution(const CoefficientSet& c, const BarrierParams& base,
                                                   const WedgeSampling& ws = {})
{
    YSupersolutionReport rep;
    const double r_lo = ws.r_lo > 0 ? ws.r_lo : base.r0 / 8;
    const double r_hi = ws.r_hi > 0 ? ws.r_hi : 8 * base.r0;
    const double scale = base.lambda * base.k * base.k / 8;
    for (int sign : {+1, -1}) {
        SignedMargin sm;
        sm.alpha = sign * std::abs(base.alpha);
        for (int i = 0; i < ws.n_r; ++i) {
            const double r = r_lo * std::pow(r_hi / r_lo, double(i) / (ws.n_r - 1));
            for (int j = 0; j < ws.n_theta; ++j) {
                const double t = base.slope * double(j) / (ws.n_theta - 1);
                const Point at{r * std::cos(t), r * std::sin(t)};
                if (at.x > 1.0 || at.y > 1.0)
                    continue;
                const double m = -detail::LY_scaled(c, sm.alpha, base.k, at) / scale;
                if (m < sm.min_margin) {
                    sm.min_margin = m;
                    sm.argmin = at;
                }
            }
        }
        rep.min_margin = std::min(rep.min_margin, sm.min_margin);
        rep.per_sign.push_back(sm);
    }
    rep.passed = rep.min_margin >= 1.0;
    return rep;
}

/// Prefactor of H: f(x0)^(2+gamma), times x0^-(m+2+gamma) in the weighted case.
inline double barrier_prefactor(const BarrierParams& p)
{
    double F = std::pow(p.fx0, 2 + p.gamma);
    if (p.m > 0.0)
        F *= std::pow(p.x0, -(p.m + 2 + p.gamma));
    return F;
}

/// H = F ((r/r0)^|alpha| + (r/r0)^-|alpha|) cos(k theta), even in y.
inline double eval_H(const BarrierParams& p, Point at)
{
    const auto q = detail::polar({at.x, std::abs(at.y)});
    const double a = std::abs(p.alpha);
    const double rho = q.r / p.r0;
    return barrier_prefactor(p) * (std::pow(rho, a) + std::pow(rho, -a)) * std::cos(p.k * q.theta);
}

inline double eval_LH(const CoefficientSet& c, const BarrierParams& p, Point at)
{
    const double a = std::abs(p.alpha);
    const double r = std::hypot(at.x, at.y);
    // (r/r0)^a = r0^-a r^a is the Y barrier with exponent -a, and vice versa.
    const double up = std::pow(p.r0, -a) * std::pow(r, a - 2) * detail::LY_scaled(c, -a, p.k, at);
    const double down = std::pow(p.r0, a) * std::pow(r, -a - 2) * detail::LY_scaled(c, a, p.k, at);
    return barrier_prefactor(p) * (up + down);
}

enum class HCase { Near = 0, Right = 1, Left = 2, Inner = 3 };

inline const char* to_string(HCase c)
{
    switch (c) {
    case HCase::Near: return "near";
    case HCase::Right: return "right";
    case HCase::Left: return "left";
    case HCase::Inner: return "inner";
    }
    return "?";
}

struct CaseMargin {
    HCase which;
    double min_margin = INFINITY;
    Point argmin{};
    int samples = 0;
};

struct HBoundsReport {
    std::array<CaseMargin, 4> interior{CaseMargin{HCase::Near}, CaseMargin{HCase::Right}, CaseMargin{HCase::Left},
                                       CaseMargin{HCase::Inner}};
    double interior_min = INFINITY;  ///< (a) over all cases
    double boundary_min = INFINITY;  ///< (b) min H / |x - x0|^(2+gamma) on the upper boundary
    Point boundary_argmin{};
    double window_sup = 0.0;         ///< (c) sup over the unit window of H / f(x0)^(2+gamma)
    bool passed = false;
};

/// Sampled certificates for H:
///  (a) -L H / |(x,y) - (x0, f(x0))|^gamma split into the cases |x-x0| <= f(x0),
///      x - x0 >= f(x0), x - x0 <= -f(x0), and (weighted) x <= x0/2 where the
///      weight x^-(m+2+gamma) replaces x0^-(m+2+gamma);
///  (b) H / |x - x0|^(2+gamma) on the upper boundary (times x0^(m+2+gamma) when weighted);
///  (c) H / f(x0)^(2+gamma) on the window |x - x0| < f(x0) (times x0^(m+2+gamma) when weighted).
inline HBoundsReport verify_H_bounds(const CoefficientSet& c, const BarrierParams& p, const BoundaryProfile& f,
                                     const WedgeSampling& ws = {})
{
    HBoundsReport rep;
    const bool weighted = p.m > 0.0;
    const double wexp = p.m + 2 + p.gamma;
    double r_lo = ws.r_lo > 0 ? ws.r_lo : p.r0 / 8;
    if (weighted && ws.r_lo <= 0)
        r_lo = std::min(r_lo, p.x0 / 64);
    const double r_hi = ws.r_hi > 0 ? ws.r_hi : 8 * p.r0;
    const Point p0{p.x0, p.fx0};
    const double theta_top = std::atan(p.slope);

    auto classify = [&](Point at) {
        if (at.x <= 0.0 || at.x > 1.0 || at.y > f(at.x) * (1 + 1e-12) + 1e-15)
            return;
        const double d = distance(at, p0);
        if (d < 1e-14)
            return;
        HCase which = HCase::Near;
        if (weighted && at.x <= p.x0 / 2)
            which = HCase::Inner;
        else if (at.x - p.x0 >= p.fx0)
            which = HCase::Right;
        else if (at.x - p.x0 <= -p.fx0)
            which = HCase::Left;
        double weight = 1.0;
        if (weighted)
            weight = which == HCase::Inner ? std::pow(at.x, -wexp) : std::pow(p.x0, -wexp);
        const double m = -eval_LH(c, p, at) / (weight * std::pow(d, p.gamma));
        auto& cm = rep.interior[int(which)];
        ++cm.samples;
        if (m < cm.min_margin) {
            cm.min_margin = m;
            cm.argmin = at;
        }
    };
    for (int i = 0; i < ws.n_r; ++i) {
        const double r = r_lo * std::pow(r_hi / r_lo, double(i) / (ws.n_r - 1));
        for (int j = 0; j < ws.n_theta; ++j) {
            const double t = theta_top * double(j) / (ws.n_theta - 1);
            classify({r * std::cos(t), r * std::sin(t)});
        }
    }
    // the window |x - x0| <= f(x0) is far thinner than the polar spacing
    for (int i = 0; i <= ws.n_theta; ++i) {
        const double x = p.x0 - p.fx0 + 2 * p.fx0 * double(i) / ws.n_theta;
        for (int j = 0; j <= ws.n_theta / 2; ++j)
            classify({x, f(x) * double(j) / (ws.n_theta / 2)});
    }
    for (const auto& cm : rep.interior)
        if (cm.samples > 0)
            rep.interior_min = std::min(rep.interior_min, cm.min_margin);

    const double bweight = weighted ? std::pow(p.x0, wexp) : 1.0;
    constexpr int nb = 4096;
    for (int i = 1; i <= nb; ++i) {
        const double x = double(i) / nb;
        const Point at{x, f(x)};
        const double r = std::hypot(at.x, at.y);
        if (r < r_lo || r > r_hi || std::abs(x - p.x0) < 1e-12)
            continue;
        const double v = bweight * eval_H(p, at) / std::pow(std::abs(x - p.x0), 2 + p.gamma);
        if (v < rep.boundary_min) {
            rep.boundary_min = v;
            rep.boundary_argmin = at;
        }
    }

    constexpr int nw = 64, nh = 32;
    const double norm = bweight / std::pow(p.fx0, 2 + p.gamma);
    for (int i = 0; i <= nw; ++i) {
        const double x = p.x0 - p.fx0 + 2 * p.fx0 * double(i) / nw;
        if (x <= 0.0 || x >= 1.0)
            continue;
        for (int j = 0; j <= nh; ++j) {
            const Point at{x, f(x) * double(j) / nh};
            rep.window_sup = std::max(rep.window_sup, norm * eval_H(p, at));
        }
    }
    rep.passed = rep.interior_min > 0.0 && rep.boundary_min > 0.0 && rep.window_sup > 0.0 &&
                 std::isfinite(rep.window_sup);
    return rep;
}

/// P_{x0} = N [ (f(x0)^2 - y^2) + (f^2)'(x0)(x - x0) + (f^2)''(x0)(x - x0)^2 / 2 ].
struct CorrectorPolynomial {
    double x0 = 0.0;
    double fx0 = 0.0;
    double d1 = 0.0; ///< (f^2)'(x0)
    double d2 = 0.0; ///< (f^2)''(x0)
    double N = 0.0;
    double L_phi = 0.0;   ///< L phi at (x0, f(x0))
    double L_p0 = 0.0;    ///< L p at (x0, f(x0))
    double Lp_min = 0.0;  ///< sampled range of L p over the domain
    double Lp_max = 0.0;

    double p(double x, double y) const
    {
        const double t = x - x0;
        return (fx0 * fx0 - y * y) + d1 * t + 0.5 * d2 * t * t;
    }
    Jet2 p_jet(double x, double y) const
    {
        const double t = x - x0;
        return {p(x, y), d1 + d2 * t, -2 * y, d2, 0.0, -2.0};
    }
    double operator()(double x, double y) const { return N * p(x, y); }
    Jet2 jet(double x, double y) const
    {
        Jet2 j = p_jet(x, y);
        j.u *= N;
        j.ux *= N;
        j.uy *= N;
        j.uxx *= N;
        j.uxy *= N;
        j.uyy *= N;
        return j;
    }
};

/// Builds P_{x0} so that L P_{x0} = L phi at (x0, f(x0)). Throws RangeViolation if
/// L p leaves [-10 Lambda, -lambda] on the sampled domain.
inline CorrectorPolynomial build_corrector(const BVPSpec& spec, double x0, int nx = 128, int ny = 16)
{
    if (!(x0 > 0.0 && x0 < 1.0))
        throw Error(ErrorKind::Config, "corrector center must lie in (0, 1)");
    const auto& f = *spec.profile;
    const auto& c = spec.coefficients;
    CorrectorPolynomial P;
    P.x0 = x0;
    P.fx0 = f(x0);
    const double f1 = f.eval_d1(x0), f2 = f.eval_d2(x0);
    P.d1 = 2 * P.fx0 * f1;
    P.d2 = 2 * (f1 * f1 + P.fx0 * f2);
    const double y0 = P.fx0;
    P.L_phi = c.A(x0, y0) * spec.phi.d2(x0) + c.D(x0, y0) * spec.phi.d1(x0);
    P.L_p0 = c.apply(P.p_jet(x0, y0), x0, y0);
    P.N = -P.L_phi / P.L_p0;

    P.Lp_min = INFINITY;
    P.Lp_max = -INFINITY;
    for (int i = 1; i < nx; ++i) {
        const double x = double(i) / nx;
        for (int j = 0; j <= ny; ++j) {
            const double y = f(x) * j / ny;
            const double v = c.apply(P.p_jet(x, y), x, y);
            P.Lp_min = std::min(P.Lp_min, v);
            P.Lp_max = std::max(P.Lp_max, v);
        }
    }
    if (P.Lp_min < -10 * c.Lambda || P.Lp_max > -c.lambda)
        throw Error(ErrorKind::RangeViolation, "L p ranges over [" + std::to_string(P.Lp_min) + ", " +
                                                   std::to_string(P.Lp_max) + "], outside [-10 Lambda, -lambda]");
    return P;
}

/// sup over boundary samples of |P(x, f(x))| / (|phi| |f|^2 |x - x0|^(2+gamma)).
inline double corrector_taylor_constant(const CorrectorPolynomial& P, const BoundaryProfile& f, double phi_norm,
                                        int samples = 4096)
{
    const double fn = f.sigma();
    double best = 0.0;
    for (int i = 1; i < samples; ++i) {
        const double x = double(i) / samples;
        const double d = std::abs(x - P.x0);
        if (d < 1e-9)
            continue;
        best = std::max(best, std::abs(P(x, f(x))) / (phi_norm * fn * fn * std::pow(d, 2 + f.gamma())));
    }
    return best;
}

enum class Corner { Left, Right };

struct ComparisonReport {
    double x0 = 0.0;
    Corner corner = Corner::Left;
    double lemma_constant = 0.0;  ///< sup over the unit window of |v - P| / f(x0)^(2+gamma) (weighted: * x0^(m+2+gamma))
    Point lemma_argmax{};
    double barrier_ratio = 0.0;   ///< sup |v - P| / H over the admissible region
    double cut_floor = INFINITY;  ///< right corner: min of H on x = 1/3
    double N = 0.0;
};

namespace detail {

/// Cubic Lagrange interpolation of column data along xi at fixed eta row j.
inline double interpolate_row(const DiscreteSolution& u, const std::vector<double>& w, double xi, int j)
{
    const auto& g = u.grid();
    const int nx = g.nx();
    int i0 = std::clamp(int(std::floor(xi * nx)) - 1, 0, nx - 3);
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
        double l = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a)
                l *= (xi - g.xi(i0 + b)) / (g.xi(i0 + a) - g.xi(i0 + b));
        s += l * w[g.index(i0 + a, j)];
    }
    return s;
}

} // namespace detail

/// Compares v = u - phi against the corrector and the barrier. The window is the
/// set |x - x0| < f(x0) below the boundary; v is interpolated in x (cubic) on
/// each grid row, then P is subtracted exactly. Right corner: coordinates are
/// reflected through x -> 1 - x and the region is cut at x = 1/3.
inline ComparisonReport comparison_check(const DiscreteSolution& u, const BVPSpec& spec, double x0, double m = 0.0,
                                         Corner corner = Corner::Left, int window_samples = 33)
{
    ComparisonReport rep;
    rep.x0 = x0;
    rep.corner = corner;
    const auto& g = u.grid();
    const auto& f = *spec.profile;
    std::vector<double> v(g.size());
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            v[g.index(i, j)] = u.value(i, j) - spec.phi(g.xi(i));

    const CorrectorPolynomial P = build_corrector(spec, x0);
    rep.N = P.N;
    const double fx0 = f(x0);
    const double gamma = spec.coefficients.gamma;
    double scale = std::pow(fx0, 2 + gamma);
    if (m > 0.0)
        scale /= std::pow(corner == Corner::Left ? x0 : 1.0 - x0, m + 2 + gamma);

    for (int a = 0; a < window_samples; ++a) {
        const double x = x0 - fx0 + 2 * fx0 * double(a) / (window_samples - 1);
        if (x <= 0.0 || x >= 1.0)
            continue;
        for (int j = 0; j <= g.ny(); ++j) {
            const double y = g.eta(j) * f(x);
            const double w = std::abs(detail::interpolate_row(u, v, x, j) - P(x, y)) / scale;
            if (w > rep.lemma_constant) {
                rep.lemma_constant = w;
                rep.lemma_argmax = {x, y};
            }
        }
    }

    // Barrier ratio on grid nodes; the barrier lives at the corner being analysed.
    const double xc = corner == Corner::Left ? x0 : 1.0 - x0;
    const double slope = corner == Corner::Left ? f.slope0() : -f.eval_d1(1.0);
    const BarrierParams bp = make_barrier_params(slope, spec.coefficients.lambda, spec.coefficients.Lambda, xc, fx0,
                                                 gamma, m);
    auto local = [&](Point q) { return corner == Corner::Left ? q : Point{1.0 - q.x, q.y}; };
    for (int i = 1; i < g.nx(); ++i) {
        const double x = g.xi(i);
        if (corner == Corner::Right && x < 1.0 / 3)
            continue;
        for (int j = 0; j <= g.ny(); ++j) {
            const Point q = local(u.point(i, j));
            const double t = std::atan2(q.y, q.x);
            if (bp.k * t >= 0.5 * pi * 0.999)
                continue;
            const double H = eval_H(bp, q);
            rep.barrier_ratio = std::max(rep.barrier_ratio, std::abs(v[g.index(i, j)] - P(x, u.point(i, j).y)) / H);
        }
    }
    if (corner == Corner::Right) {
        const double xcut = 1.0 / 3;
        for (int j = 0; j <= 32; ++j) {
            const Point q = local({xcut, f(xcut) * j / 32.0});
            const double t = std::atan2(q.y, q.x);
            if (bp.k * t < 0.5 * pi)
                rep.cut_floor = std::min(rep.cut_floor, eval_H(bp, q));
        }
    }
    return rep;
}

} // namespace thinlab
