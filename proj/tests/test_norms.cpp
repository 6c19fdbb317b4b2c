#include <cmath>

#include <gtest/gtest.h>

#include "thinlab/norms.hpp"

using namespace thinlab;

namespace {

Function1 power(double p)
{
    return {[p](double x) { return std::pow(x, p); }, [p](double x) { return p * std::pow(x, p - 1); },
            [p](double x) { return p * (p - 1) * std::pow(x, p - 2); }};
}

// straight double loop over all sample pairs, no shortcuts
double brute_weighted(const Sampled1D& s, int k, double gamma, double m)
{
    const std::vector<double>* d[3] = {&s.v, &s.d1, &s.d2};
    double sup = 0.0;
    for (int i = 0; i <= k; ++i)
        for (std::size_t n = 0; n < s.size(); ++n)
            if (s.x[n] > 0)
                sup = std::max(sup, std::pow(s.x[n], m + i) * std::abs((*d[i])[n]));
    double semi = 0.0;
    const double h = s.x[1] - s.x[0];
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = 0; b < s.size(); ++b) {
            if (b == a || s.x[a] <= 0 || s.x[b] <= 0 || std::abs(s.x[a] - s.x[b]) < 2 * h * (1 - 1e-12))
                continue;
            const double x1 = std::min(s.x[a], s.x[b]);
            semi = std::max(semi, std::pow(x1, m + k + gamma) * std::abs((*d[k])[a] - (*d[k])[b]) /
                                      std::pow(std::abs(s.x[a] - s.x[b]), gamma));
        }
    return sup + semi;
}

std::shared_ptr<const BoundaryProfile> sine(double a)
{
    return std::make_shared<const BoundaryProfile>(make_profile({"sine", a, {}, 0.5}));
}

// harmonic jets evaluated exactly at the nodes of a fitted grid
NodeCloud harmonic_cloud(const FittedGrid& g)
{
    NodeCloud c;
    c.h = g.hx();
    for (int i = 0; i <= g.nx(); ++i)
        for (int j = 0; j <= (g.corner_column(i) ? 0 : g.ny()); ++j) {
            const Point p = g.physical(i, j);
            const double ch = std::cosh(pi * p.y), sh = std::sinh(pi * p.y);
            const double cx = std::cos(pi * p.x), sx = std::sin(pi * p.x);
            c.points.push_back(p);
            c.jets.push_back({ch * cx, -pi * ch * sx, pi * sh * cx, -pi * pi * ch * cx, -pi * pi * sh * sx,
                              pi * pi * ch * cx});
        }
    return c;
}

} // namespace

TEST(Norms, LinearFunctionPlainNorm)
{
    const auto r = holder_norm_1d(Sampled1D::sample(power(1), 0.0, 1.0, 257), 1, 0.5);
    EXPECT_NEAR(r.value, 2.0, 1e-12);
    EXPECT_EQ(r.aggregation, Aggregation::Sum);
    EXPECT_NEAR(r.seminorm, 0.0, 1e-12);
}

TEST(Norms, SquareRootSeminorm)
{
    const auto s = Sampled1D::sample([](double x) { return std::sqrt(x); }, 0.0, 1.0, 1024);
    const auto r = holder_norm_1d(s, 0, 0.5);
    EXPECT_NEAR(r.seminorm, 1.0, 0.05);
}

TEST(Norms, ZeroIsZero)
{
    const auto r = holder_norm_1d(Sampled1D::sample([](double) { return 0.0; }, 0.0, 1.0, 128), 2, 0.5);
    EXPECT_EQ(r.value, 0.0);
}

TEST(Norms, FiniteDifferenceDerivatives)
{
    const auto s = Sampled1D::sample([](double x) { return x * x * x; }, 0.0, 1.0, 129);
    const auto r = holder_norm_1d(s, 2, 0.5);
    EXPECT_NEAR(r.sup_terms[1], 3.0, 1e-3);
    EXPECT_NEAR(r.sup_terms[2], 6.0, 1e-3);
}

TEST(Norms, WeightedInverse)
{
    const auto r = weighted_norm_1d(Sampled1D::sample(power(-1), 0.0, 1.0, 4096), 2, 0.5, 1.0);
    ASSERT_EQ(r.sup_terms.size(), 3u);
    EXPECT_NEAR(r.sup_terms[0], 1.0, 1e-6);
    EXPECT_NEAR(r.sup_terms[1], 1.0, 1e-6);
    EXPECT_NEAR(r.sup_terms[2], 2.0, 1e-6);
}

TEST(Norms, WeightedConstant)
{
    const auto r = weighted_norm_1d(Sampled1D::sample(power(0), 0.0, 1.0, 512), 0, 0.5, 1.0);
    EXPECT_NEAR(r.value, 1.0, 1e-14);
    EXPECT_EQ(r.seminorm, 0.0);
}

TEST(Norms, WeightedInverseRootMatchesBruteForce)
{
    const auto s = Sampled1D::sample(power(-0.5), 0.0, 1.0, 400);
    for (int k = 0; k <= 2; ++k) {
        const auto r = weighted_norm_1d(s, k, 0.5, 1.0);
        EXPECT_TRUE(std::isfinite(r.value));
        EXPECT_NEAR(r.value, brute_weighted(s, k, 0.5, 1.0), 1e-12) << "k = " << k;
    }
}

TEST(Norms, ProfileNormScalesLinearly)
{
    const auto a = profile_weighted_norm(*sine(0.04), 0.5);
    const auto b = profile_weighted_norm(*sine(0.01), 0.5);
    EXPECT_NEAR(a.value() / b.value(), 4.0, 4e-6);
    EXPECT_NEAR(a.embedding_lhs() / b.embedding_lhs(), 4.0, 4e-6);
    const auto tiny = profile_weighted_norm(*sine(1e-12), 0.5);
    EXPECT_LT(tiny.value(), 1e-10);
}

TEST(Norms, ProfileNormAgainstDirectSampling)
{
    const double s = 0.05;
    const auto r = profile_weighted_norm(*sine(s), 0.5);
    // max_x x |f''| = s pi^2 max x sin(pi x)
    double m = 0.0;
    for (int i = 0; i <= 100000; ++i) {
        const double x = i / 100000.0;
        m = std::max(m, x * std::sin(pi * x));
    }
    EXPECT_NEAR(r.weighted.sup_terms[2], s * pi * pi * m, 1e-6);
    EXPECT_GE(r.value(), r.weighted.sup_terms[2]);
}

TEST(Norms, EmbeddingAndProductBounds)
{
    for (const char* kind : {"sine", "poly", "corner"}) {
        const BoundaryProfile f = make_profile({kind, 0.05, {}, 0.5});
        const auto r = profile_weighted_norm(f, 0.5);
        EXPECT_LE(r.embedding_lhs(), 10.0 * r.value()) << kind;
        EXPECT_LE(product_quotient(f, 0.5), 10.0 * r.value() * r.value()) << kind;
    }
}

TEST(Norms, FieldNormExamples)
{
    const FittedGrid g(sine(0.1), 16, 8);
    const auto c = DiscreteSolution::inject(g, [](double, double) { return -0.7; });
    EXPECT_NEAR(holder_norm_2d(c, 2, 0.5).value, 0.7, 1e-8); // mapped second differences pick up roundoff near the corners
    const auto x = DiscreteSolution::inject(g, [](double x, double) { return x; });
    EXPECT_NEAR(holder_norm_2d(x, 2, 0.5).value, 2.0, 1e-10);
}

TEST(Norms, FieldNormAgainstFinerOracle)
{
    const auto f = sine(0.05);
    const FittedGrid coarse(f, 32, 16), fine(f, 128, 64);
    const auto u = DiscreteSolution::inject(
        coarse, [](double x, double y) { return std::cosh(pi * y) * std::cos(pi * x); });
    const double got = holder_norm_2d(u, 2, 0.5).value;
    const double oracle = holder_norm_2d(harmonic_cloud(fine), 2, 0.5).value;
    EXPECT_NEAR(got / oracle, 1.0, 0.05);
}

TEST(Norms, HomogeneityAndRegionMonotonicity)
{
    const FittedGrid g(sine(0.05), 24, 12);
    auto u = [](double x, double y) { return std::sin(2 * x) + x * y * y; };
    const auto a = DiscreteSolution::inject(g, u);
    const auto b = DiscreteSolution::inject(g, [&](double x, double y) { return -3.0 * u(x, y); });
    const double full = holder_norm_2d(a, 2, 0.5).value;
    EXPECT_NEAR(holder_norm_2d(b, 2, 0.5).value, 3.0 * full, 1e-12 * full);
    EXPECT_LE(holder_norm_2d(a, 2, 0.5, 0.0, 0.0, 2.0 / 3.0).value, full);
    EXPECT_LE(holder_norm_2d(a, 2, 0.5, 1.0, 0.0, 0.5).value, holder_norm_2d(a, 2, 0.5, 1.0).value);
}

TEST(Norms, DensityDoublingStable)
{
    auto f = [](double x) { return std::cos(3 * x) + x * x * x; };
    const double a = holder_norm_1d(Sampled1D::sample(f, 0.0, 1.0, 256), 2, 0.5).value;
    const double b = holder_norm_1d(Sampled1D::sample(f, 0.0, 1.0, 512), 2, 0.5).value;
    EXPECT_NEAR(a / b, 1.0, 0.05);
}
