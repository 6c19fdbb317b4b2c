#pragma once

// Coefficients of  L u = A u_xx + B u_xy + C u_yy + D u_x + E u_y
// and the oblique boundary coefficient G.

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "thinlab/core.hpp"
#include "thinlab/norms1d.hpp"

namespace thinlab {

/// Polynomial in (x, y): sum of c * x^px * y^py.
struct Polynomial2 {
    struct Term {
        double c;
        int px;
        int py;
    };
    std::vector<Term> terms;

    static Polynomial2 constant(double c) { return {{{c, 0, 0}}}; }

    double operator()(double x, double y) const
    {
        double s = 0.0;
        for (const auto& t : terms)
            s += t.c * std::pow(x, t.px) * std::pow(y, t.py);
        return s;
    }
};

/// Polynomial in x with coefficients c[0] + c[1] x + ...
inline Function1 polynomial1(std::vector<double> c)
{
    auto eval = [c](double x, int order) {
        double s = 0.0;
        for (std::size_t i = c.size(); i-- > std::size_t(order);) {
            double coef = c[i];
            for (int o = 0; o < order; ++o)
                coef *= double(i - o);
            s = s * x + coef;
        }
        return s;
    };
    return {[eval](double x) { return eval(x, 0); }, [eval](double x) { return eval(x, 1); },
            [eval](double x) { return eval(x, 2); }};
}

struct CoefficientSet {
    Scalar2 A, B, C, D, E;
    Function1 G;
    double lambda = 1.0;
    double Lambda = 2.0;
    double gamma = 0.5;
    std::string name = "custom";

    static CoefficientSet constant(double a, double b, double c, double d, double e, double lambda,
                                   double Lambda, double gamma = 0.5)
    {
        CoefficientSet s;
        s.A = [a](double, double) { return a; };
        s.B = [b](double, double) { return b; };
        s.C = [c](double, double) { return c; };
        s.D = [d](double, double) { return d; };
        s.E = [e](double, double) { return e; };
        s.G = Function1::constant(0.0);
        s.lambda = lambda;
        s.Lambda = Lambda;
        s.gamma = gamma;
        s.name = "constant";
        return s;
    }

    static CoefficientSet laplace(double lambda = 1.0, double Lambda = 2.0, double gamma = 0.5)
    {
        auto s = constant(1, 0, 1, 0, 0, lambda, Lambda, gamma);
        s.name = "laplace";
        return s;
    }

    static CoefficientSet polynomial(const Polynomial2& a, const Polynomial2& b, const Polynomial2& c,
                                     const Polynomial2& d, const Polynomial2& e, double lambda,
                                     double Lambda, double gamma = 0.5)
    {
        CoefficientSet s;
        s.A = a;
        s.B = b;
        s.C = c;
        s.D = d;
        s.E = e;
        s.G = Function1::constant(0.0);
        s.lambda = lambda;
        s.Lambda = Lambda;
        s.gamma = gamma;
        s.name = "polynomial";
        return s;
    }

    /// First-order terms of size dc / r, r = |(x, y)|. Only r|D| + r|E| stays bounded.
    CoefficientSet with_radial_drift(double dc, double ec) const
    {
        CoefficientSet s = *this;
        s.D = [dc](double x, double y) { return dc / std::max(std::hypot(x, y), 1e-300); };
        s.E = [ec](double x, double y) { return ec / std::max(std::hypot(x, y), 1e-300); };
        s.name = name + "+radial_drift";
        return s;
    }

    CoefficientSet with_G(Function1 g) const
    {
        CoefficientSet s = *this;
        s.G = std::move(g);
        return s;
    }

    double apply(const Jet2& j, double x, double y) const
    {
        return A(x, y) * j.uxx + B(x, y) * j.uxy + C(x, y) * j.uyy + D(x, y) * j.ux + E(x, y) * j.uy;
    }
};

/// Minimum of A xi1^2 + B xi1 xi2 + C xi2^2 over unit xi; returns (value, xi1, xi2).
inline std::tuple<double, double, double> min_quadratic_form(double a, double b, double c)
{
    const double mean = 0.5 * (a + c);
    const double rad = std::hypot(0.5 * (a - c), 0.5 * b);
    const double lmin = mean - rad;
    // eigenvector of [[a, b/2], [b/2, c]] for lmin
    double vx = 0.5 * b, vy = lmin - a;
    if (std::hypot(vx, vy) < 1e-300) {
        vx = lmin - c;
        vy = 0.5 * b;
    }
    if (std::hypot(vx, vy) < 1e-300) {
        vx = a <= c ? 1.0 : 0.0;
        vy = a <= c ? 0.0 : 1.0;
    }
    const double n = std::hypot(vx, vy);
    return {lmin, vx / n, vy / n};
}

struct EllipticityReport {
    bool passed = false;
    double min_quotient = INFINITY;
    Point witness{};
    double xi1 = 0.0, xi2 = 0.0;
    double min_C = INFINITY;
    double holder_sum = 0.0; ///< sampled sum of coefficient norms, compared with Lambda
    bool holder_bounded = false;
};

namespace detail {

inline double sampled_holder_2d(const Scalar2& g, int n, double gamma)
{
    std::vector<Point> pts;
    std::vector<double> v;
    double sup = 0.0;
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const Point p{double(i) / n, double(j) / n};
            pts.push_back(p);
            v.push_back(g(p.x, p.y));
            sup = std::max(sup, std::abs(v.back()));
        }
    double semi = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b)
            semi = std::max(semi, std::abs(v[a] - v[b]) / std::pow(distance(pts[a], pts[b]), gamma));
    return sup + semi;
}

} // namespace detail

/// Sampled ellipticity check. Throws EllipticityViolation with the witness on failure.
inline EllipticityReport validate_ellipticity(const CoefficientSet& c, int density = 32)
{
    if (density < 16)
        throw Error(ErrorKind::Config, "ellipticity sample density must be >= 16 per axis");
    EllipticityReport r;
    constexpr int directions = 64;
    for (int i = 0; i <= density; ++i)
        for (int j = 0; j <= density; ++j) {
            const double x = double(i) / density, y = double(j) / density;
            const double a = c.A(x, y), b = c.B(x, y), cc = c.C(x, y);
            r.min_C = std::min(r.min_C, cc);
            auto consider = [&](double q, double x1, double x2) {
                if (q < r.min_quotient) {
                    r.min_quotient = q;
                    r.witness = {x, y};
                    r.xi1 = x1;
                    r.xi2 = x2;
                }
            };
            for (int k = 0; k < directions; ++k) {
                const double t = pi * k / directions;
                const double x1 = std::cos(t), x2 = std::sin(t);
                consider(a * x1 * x1 + b * x1 * x2 + cc * x2 * x2, x1, x2);
            }
            const auto [lmin, e1, e2] = min_quadratic_form(a, b, cc);
            consider(lmin, e1, e2);
        }
    r.passed = r.min_quotient >= c.lambda * (1.0 - 1e-9);
    if (!r.passed)
        throw Error(ErrorKind::EllipticityViolation,
                    "min quotient " + std::to_string(r.min_quotient) + " < lambda " + std::to_string(c.lambda) +
                        " at (" + std::to_string(r.witness.x) + ", " + std::to_string(r.witness.y) + "), xi = (" +
                        std::to_string(r.xi1) + ", " + std::to_string(r.xi2) + ")");

    const int hn = 16;
    for (const Scalar2* g : {&c.A, &c.B, &c.C, &c.D, &c.E})
        r.holder_sum += detail::sampled_holder_2d(*g, hn, c.gamma);
    r.holder_sum += holder_norm_1d(Sampled1D::sample(c.G, -1.0, 2.0, 769), 2, c.gamma).value;
    r.holder_bounded = r.holder_sum <= c.Lambda;
    return r;
}

inline double apply_operator(const CoefficientSet& c, const Field2& u, Point at)
{
    if (!(at.x >= 0.0 && at.x <= 1.0 && at.y >= 0.0 && at.y <= 1.0))
        throw Error(ErrorKind::OutOfDomain,
                    "(" + std::to_string(at.x) + ", " + std::to_string(at.y) + ") outside [0,1]^2");
    return c.apply(u(at.x, at.y), at.x, at.y);
}

} // namespace thinlab
