#pragma once

// Limit state on the segment [0,1] x {0} as the domain collapses, and the
// deviation of a computed solution from it.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "thinlab/coefficients.hpp"
#include "thinlab/core.hpp"
#include "thinlab/solver.hpp"

namespace thinlab {

struct AsymptoticState {
    std::vector<double> x;
    std::vector<double> ustar, ux, uy, uxx, uxy, uyy;
    std::string coefficients; ///< name of the coefficient set used at y = 0

    std::size_t size() const { return x.size(); }
    Jet2 jet(std::size_t i) const { return {ustar[i], ux[i], uy[i], uxx[i], uxy[i], uyy[i]}; }
};

/// Triangular solve of the six limit relations at each x: the trace gives u, u_x, u_xx;
/// the oblique condition and its tangential derivative give u_y, u_xy; the equation gives u_yy.
inline AsymptoticState solve_asymptotic(const CoefficientSet& c, const Function1& G, const Function1& phi,
                                        const std::vector<double>& grid)
{
    AsymptoticState a;
    a.x = grid;
    a.coefficients = c.name;
    const std::size_t n = grid.size();
    for (auto* v : {&a.ustar, &a.ux, &a.uy, &a.uxx, &a.uxy, &a.uyy})
        v->resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double x = grid[i];
        const double Cv = c.C(x, 0.0);
        if (std::abs(Cv) < 1e-12)
            throw Error(ErrorKind::DegenerateC, "C(" + std::to_string(x) + ", 0) vanishes");
        const double g = G(x), g1 = G.d1(x);
        a.ustar[i] = phi(x);
        a.ux[i] = phi.d1(x);
        a.uxx[i] = phi.d2(x);
        a.uy[i] = -g * a.ux[i];
        a.uxy[i] = -g * a.uxx[i] - g1 * a.ux[i];
        a.uyy[i] = -(c.A(x, 0.0) * a.uxx[i] + c.B(x, 0.0) * a.uxy[i] + c.D(x, 0.0) * a.ux[i] +
                     c.E(x, 0.0) * a.uy[i]) /
                   Cv;
    }
    return a;
}

inline std::vector<double> uniform_grid(int n)
{
    std::vector<double> x(n + 1);
    for (int i = 0; i <= n; ++i)
        x[i] = double(i) / n;
    return x;
}

struct DeviationReport {
    std::array<double, 3> sup{};        ///< order 0, 1, 2
    std::array<Point, 3> witness{};
    std::array<double, 3> normalized{}; ///< sup / (sigma^gamma |phi|)
    bool resampled = false;
};

namespace detail {

/// Cubic Lagrange interpolation of a tabulated array at x.
inline double cubic_at(const std::vector<double>& xs, const std::vector<double>& v, double x)
{
    const int n = int(xs.size());
    auto it = std::upper_bound(xs.begin(), xs.end(), x);
    int i0 = std::clamp(int(it - xs.begin()) - 2, 0, n - 4);
    double s = 0.0;
    for (int a = 0; a < 4; ++a) {
        double l = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a)
                l *= (x - xs[i0 + b]) / (xs[i0 + a] - xs[i0 + b]);
        s += l * v[i0 + a];
    }
    return s;
}

inline AsymptoticState resample(const AsymptoticState& a, const std::vector<double>& xs)
{
    if (a.size() < 4)
        throw Error(ErrorKind::GridMismatch, "asymptotic grid too coarse to resample");
    AsymptoticState r;
    r.x = xs;
    r.coefficients = a.coefficients;
    std::vector<double> AsymptoticState::*const fields[] = {&AsymptoticState::ustar, &AsymptoticState::ux,
                                                            &AsymptoticState::uy,    &AsymptoticState::uxx,
                                                            &AsymptoticState::uxy,   &AsymptoticState::uyy};
    for (auto f : fields) {
        auto& out = r.*f;
        out.resize(xs.size());
        for (std::size_t i = 0; i < xs.size(); ++i)
            out[i] = cubic_at(a.x, a.*f, xs[i]);
    }
    return r;
}

} // namespace detail

/// sup over grid nodes of |grad^i u(x, y) - grad^i u*(x, 0)|, i = 0, 1, 2.
/// Throws GridMismatch when grids differ unless resampling is allowed.
inline DeviationReport deviation(const DiscreteSolution& u, const AsymptoticState& a, double sigma, double gamma,
                                 double phi_norm, bool allow_resample = false)
{
    const auto& g = u.grid();
    DeviationReport rep;
    bool same = int(a.size()) == g.nx() + 1;
    for (int i = 0; same && i <= g.nx(); ++i)
        same = std::abs(a.x[i] - g.xi(i)) <= 1e-14;
    AsymptoticState local;
    const AsymptoticState* s = &a;
    if (!same) {
        if (!allow_resample)
            throw Error(ErrorKind::GridMismatch, "asymptotic grid does not match the solution grid");
        local = detail::resample(a, uniform_grid(g.nx()));
        s = &local;
        rep.resampled = true;
    }
    for (int i = 0; i <= g.nx(); ++i) {
        const Jet2 ref = s->jet(i);
        const int jmax = g.corner_column(i) ? 0 : g.ny();
        for (int j = 0; j <= jmax; ++j) {
            const Jet2& v = u.jet(i, j);
            const double d[3] = {std::abs(v.u - ref.u), std::max(std::abs(v.ux - ref.ux), std::abs(v.uy - ref.uy)),
                                 std::max({std::abs(v.uxx - ref.uxx), std::abs(v.uxy - ref.uxy),
                                           std::abs(v.uyy - ref.uyy)})};
            for (int o = 0; o < 3; ++o)
                if (d[o] > rep.sup[o]) {
                    rep.sup[o] = d[o];
                    rep.witness[o] = u.point(i, j);
                }
        }
    }
    const double scale = std::pow(sigma, gamma) * phi_norm;
    for (int o = 0; o < 3; ++o)
        rep.normalized[o] = scale > 0 ? rep.sup[o] / scale : 0.0;
    return rep;
}

/// Sup residuals of the differentiated boundary relations.
struct DerivativeListReport {
    double trace = 0.0;       ///< u - phi on the upper boundary
    double tangential1 = 0.0; ///< u_x + f' u_y - phi'
    double tangential2 = 0.0; ///< u_xx + 2 f' u_xy + f'^2 u_yy + f'' u_y - phi''
    double oblique = 0.0;     ///< u_y + G u_x on y = 0
    double oblique_d = 0.0;   ///< u_xy + G u_xx + G' u_x on y = 0
    double equation = 0.0;    ///< L u at interior nodes
    double max() const { return std::max({trace, tangential1, tangential2, oblique, oblique_d, equation}); }
};

inline DerivativeListReport derivative_list_residuals(const DiscreteSolution& u, const BVPSpec& spec)
{
    DerivativeListReport r;
    const auto& g = u.grid();
    const auto& f = *spec.profile;
    const auto& c = spec.coefficients;
    for (int i = 1; i < g.nx(); ++i) {
        const double x = g.xi(i);
        const double f1 = f.eval_d1(x), f2 = f.eval_d2(x);
        const Jet2& t = u.jet(i, g.ny());
        r.trace = std::max(r.trace, std::abs(t.u - spec.phi(x)));
        r.tangential1 = std::max(r.tangential1, std::abs(t.ux + f1 * t.uy - spec.phi.d1(x)));
        r.tangential2 = std::max(r.tangential2, std::abs(t.uxx + 2 * f1 * t.uxy + f1 * f1 * t.uyy + f2 * t.uy -
                                                         spec.phi.d2(x)));
        const Jet2& b = u.jet(i, 0);
        const double G = c.G(x), G1 = c.G.d1(x);
        r.oblique = std::max(r.oblique, std::abs(b.uy + G * b.ux - spec.psi(x)));
        r.oblique_d = std::max(r.oblique_d, std::abs(b.uxy + G * b.uxx + G1 * b.ux));
        for (int j = 1; j < g.ny(); ++j) {
            const Point p = u.point(i, j);
            r.equation = std::max(r.equation, std::abs(c.apply(u.jet(i, j), p.x, p.y) - spec.source(p.x, p.y)));
        }
    }
    return r;
}

} // namespace thinlab
