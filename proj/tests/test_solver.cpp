#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "thinlab/schauder.hpp"
#include "thinlab/solver.hpp"

using namespace thinlab;

namespace {

std::shared_ptr<const BoundaryProfile> sine(double a)
{
    return std::make_shared<const BoundaryProfile>(make_profile({"sine", a, {}, 0.5}));
}

Function1 cospi(double k = 1.0)
{
    const double w = pi * k;
    return {[w](double x) { return std::cos(w * x); }, [w](double x) { return -w * std::sin(w * x); },
            [w](double x) { return -w * w * std::cos(w * x); }};
}

BVPSpec laplace_spec(std::shared_ptr<const BoundaryProfile> f, Function1 phi)
{
    BVPSpec s;
    s.coefficients = CoefficientSet::laplace();
    s.profile = std::move(f);
    s.phi = std::move(phi);
    return s;
}

// u = cosh(pi y) cos(pi x), harmonic with u_y = 0 on y = 0
BVPSpec harmonic_spec(std::shared_ptr<const BoundaryProfile> f)
{
    Function1 phi{[f](double x) { return std::cosh(pi * (*f)(x)) * std::cos(pi * x); }, nullptr, nullptr};
    // derivatives of phi are not used by the solver
    phi.d1 = [](double) { return 0.0; };
    phi.d2 = [](double) { return 0.0; };
    return laplace_spec(std::move(f), phi);
}

double harmonic_error(const DiscreteSolution& u)
{
    const auto& g = u.grid();
    double e = 0.0;
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j) {
            const Point p = u.point(i, j);
            e = std::max(e, std::abs(u.value(i, j) - std::cosh(pi * p.y) * std::cos(pi * p.x)));
        }
    return e;
}

} // namespace

TEST(Solver, GridNodes)
{
    const FittedGrid g(sine(0.1), 16, 8);
    EXPECT_EQ(g.size(), 17 * 9);
    EXPECT_EQ(g.physical(0, 8).x, 0.0);
    EXPECT_EQ(g.physical(0, 8).y, 0.0);
    EXPECT_EQ(g.physical(16, 5).y, 0.0);
    EXPECT_NEAR(g.physical(8, 8).y, 0.1, 1e-15);
    EXPECT_THROW(FittedGrid(sine(0.1), 4, 8), Error);
}

TEST(Solver, ConstantsAreExact)
{
    const auto u = solve_bvp(laplace_spec(sine(0.05), Function1::constant(1.0)), 32, 16);
    for (double v : u.values())
        EXPECT_NEAR(v, 1.0, 1e-13);
    // mapped stencil weights carry 1/(f h)^2, so roundoff in the residual scales with them
    EXPECT_LE(u.residual, 1e-11);
}

TEST(Solver, QuadraticWithSourceIsExact)
{
    auto s = laplace_spec(sine(0.05), Function1{[](double x) { return x * x; }, [](double x) { return 2 * x; },
                                                [](double) { return 2.0; }});
    s.source = [](double, double) { return 2.0; };
    const auto u = solve_bvp(s, 32, 16);
    const auto& g = u.grid();
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= g.ny(); ++j)
            EXPECT_NEAR(u.value(i, j), g.xi(i) * g.xi(i), 1e-10);
}

TEST(Solver, ManufacturedHarmonicSecondOrder)
{
    const auto spec = harmonic_spec(sine(0.05));
    const double e64 = harmonic_error(solve_bvp(spec, 64, 64));
    const double e128 = harmonic_error(solve_bvp(spec, 128, 128));
    EXPECT_GE(e64 / e128, 3.4);
    EXPECT_LE(e64 / e128, 4.6);
}

TEST(Solver, SingularCoefficientGate)
{
    try {
        discretize(laplace_spec(sine(1e-16), Function1::constant(1.0)), FittedGrid(sine(1e-16), 8, 8));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::SingularCoefficient);
    }
}

TEST(Solver, IndefiniteOperatorStoppedByValidation)
{
    auto s = laplace_spec(sine(0.05), cospi());
    s.coefficients = CoefficientSet::constant(1, 3, 1, 0, 0, 0.1, 5);
    // the gate fires before any system is assembled
    EXPECT_THROW(validate_ellipticity(s.coefficients), Error);
}

TEST(Solver, MaximumPrinciple)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> amp(-1.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Function1 phi = Function1::constant(amp(rng));
        for (int k = 1; k <= 3; ++k)
            phi = phi + amp(rng) * cospi(k);
        const auto u = solve_bvp(laplace_spec(sine(0.05), phi), 64, 32);
        double lo = INFINITY, hi = -INFINITY, sup = 0.0;
        for (int i = 0; i <= 4096; ++i) {
            const double v = phi(i / 4096.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sup = std::max(sup, std::abs(v));
        }
        for (double v : u.values()) {
            EXPECT_GE(v, lo - 1e-6 * sup);
            EXPECT_LE(v, hi + 1e-6 * sup);
        }
    }
}

TEST(Solver, LinearInData)
{
    const auto f = sine(0.04);
    const auto a = laplace_spec(f, cospi(1)), b = laplace_spec(f, cospi(2));
    auto ab = laplace_spec(f, 2.0 * cospi(1) + -0.5 * cospi(2));
    const auto ua = solve_bvp(a, 32, 16), ub = solve_bvp(b, 32, 16), uab = solve_bvp(ab, 32, 16);
    for (std::size_t n = 0; n < ua.values().size(); ++n)
        EXPECT_NEAR(uab.values()[n], 2.0 * ua.values()[n] - 0.5 * ub.values()[n], 1e-10);
}

TEST(Solver, Deterministic)
{
    const auto s = laplace_spec(sine(0.03), cospi());
    const auto a = solve_bvp(s, 48, 16), b = solve_bvp(s, 48, 16);
    EXPECT_EQ(a.values(), b.values());
}

TEST(Solver, IterativePathAgrees)
{
    const auto s = laplace_spec(sine(0.05), cospi());
    const auto sys = discretize(s, FittedGrid(s.profile, 32, 16));
    const auto direct = solve(sys);
    SolveOptions opt;
    opt.direct_limit = 0.0;
    const auto iter = solve(sys, opt);
    EXPECT_EQ(direct.method, "sparse-lu");
    EXPECT_EQ(iter.method, "bicgstab-ilut");
    for (std::size_t n = 0; n < direct.values().size(); ++n)
        EXPECT_NEAR(iter.values()[n], direct.values()[n], 1e-8);
}

TEST(Solver, InjectedJetsSecondOrder)
{
    // u = x^2 y + y^2 - x y
    auto exact = [](double x, double y) {
        return Jet2{x * x * y + y * y - x * y, 2 * x * y - y, x * x + 2 * y - x, 2 * y, 2 * x - 1, 2.0};
    };
    auto err = [&](int n) {
        const FittedGrid g(sine(0.2), n, n);
        const auto u = DiscreteSolution::inject(g, [&](double x, double y) { return exact(x, y).u; });
        double e = 0.0;
        // away from the pinch: the 1/f factors in the mapped jets cost an order near the corners
        for (int i = n / 4; i <= 3 * n / 4; ++i)
            for (int j = 0; j <= n; ++j) {
                const Point p = u.point(i, j);
                const Jet2 a = u.jet(i, j), b = exact(p.x, p.y);
                e = std::max({e, std::abs(a.ux - b.ux), std::abs(a.uy - b.uy), std::abs(a.uxy - b.uxy)});
            }
        return e;
    };
    const double ratio = err(32) / err(64);
    EXPECT_GT(ratio, 3.0);
}

TEST(Solver, SchauderConstantForConstantData)
{
    const auto s = laplace_spec(sine(0.05), Function1::constant(1.0));
    const auto r = local_schauder_check(solve_bvp(s, 32, 16), s);
    // roundoff in second differences near the corners, nothing structural
    EXPECT_NEAR(r.local_ratio, 1.0, 1e-6);
    EXPECT_NEAR(r.global_ratio, 1.0, 1e-6);
}
