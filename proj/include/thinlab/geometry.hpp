#pragma once

// Crescent domain {0 < x < 1, 0 < y < f(x)} and its boundary profile f.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "thinlab/core.hpp"
#include "thinlab/norms1d.hpp"

namespace thinlab {

/// Natural cubic spline through uniformly spaced samples on [0, 1].
class UniformSpline {
public:
    explicit UniformSpline(std::vector<double> values) : y_(std::move(values))
    {
        const std::size_t n = y_.size();
        if (n < 3)
            throw Error(ErrorKind::Config, "table profile needs at least 3 values");
        h_ = 1.0 / double(n - 1);
        m_.assign(n, 0.0);
        // Thomas algorithm for the interior second derivatives (natural ends).
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double rhs = 6.0 * (y_[i + 1] - 2 * y_[i] + y_[i - 1]) / (h_ * h_);
            const double denom = 4.0 - (i > 1 ? c[i - 1] : 0.0);
            c[i] = 1.0 / denom;
            d[i] = (rhs - (i > 1 ? d[i - 1] : 0.0)) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1)
                break;
        }
    }

    double value(double x) const { return eval(x, 0); }
    double d1(double x) const { return eval(x, 1); }
    double d2(double x) const { return eval(x, 2); }

private:
    double eval(double x, int order) const
    {
        const std::size_t n = y_.size();
        const double t = std::clamp(x, 0.0, 1.0) / h_;
        std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), n - 2);
        const double a = double(i + 1) - t; // weight of left node
        const double b = t - double(i);
        const double h = h_;
        switch (order) {
        case 0:
            return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
        case 1:
            return (y_[i + 1] - y_[i]) / h + (-(3 * a * a - 1) * m_[i] + (3 * b * b - 1) * m_[i + 1]) * h / 6.0;
        default:
            return a * m_[i] + b * m_[i + 1];
        }
    }

    std::vector<double> y_;
    std::vector<double> m_;
    double h_ = 0.0;
};

struct ProfileDescriptor {
    std::string kind = "sine"; ///< sine | poly | corner | table
    double amplitude = 0.1;
    std::vector<double> params;
    double gamma = 0.5;
};

/// Upper boundary y = f(x) with its non-degeneracy constants.
///   pi_const = inf f(x)/sin(pi x),  pi_bar = max(sup|f|, sup|f'|, sup|f''|),
///   c_f = pi_bar / pi_const,  sigma = discrete C^{2,gamma} norm (sum convention).
class BoundaryProfile {
public:
    BoundaryProfile(Function1 f, double gamma, std::string kind = "custom")
        : f_(std::move(f)), gamma_(gamma), kind_(std::move(kind))
    {
        compute_constants();
    }

    double eval(double x) const { return f_.f(x); }
    double eval_d1(double x) const { return f_.d1(x); }
    double eval_d2(double x) const { return f_.d2(x); }
    double operator()(double x) const { return f_.f(x); }
    const Function1& function() const { return f_; }

    double gamma() const { return gamma_; }
    double pi_const() const { return pi_const_; }
    double pi_bar() const { return pi_bar_; }
    double c_f() const { return pi_bar_ / pi_const_; }
    double sigma() const { return sigma_; }
    double max_value() const { return sup_f_; }
    double slope0() const { return f_.d1(0.0); }
    const std::string& kind() const { return kind_; }

private:
    static double golden_max(const Scalar1& g, double a, double b)
    {
        const double r = (std::sqrt(5.0) - 1) / 2;
        double c = b - r * (b - a), d = a + r * (b - a);
        double gc = g(c), gd = g(d);
        for (int it = 0; it < 80; ++it) {
            if (gc > gd) {
                b = d;
                d = c;
                gd = gc;
                c = b - r * (b - a);
                gc = g(c);
            } else {
                a = c;
                c = d;
                gc = gd;
                d = a + r * (b - a);
                gd = g(d);
            }
        }
        return std::max({gc, gd, g(a), g(b)});
    }

    /// Dense sampling followed by a local refinement around the best node.
    static double refined_sup(const Scalar1& g, int n)
    {
        double best = -INFINITY;
        int at = 0;
        for (int i = 0; i <= n; ++i) {
            const double v = g(double(i) / n);
            if (v > best) {
                best = v;
                at = i;
            }
        }
        const double a = double(std::max(at - 1, 0)) / n;
        const double b = double(std::min(at + 1, n)) / n;
        return std::max(best, golden_max(g, a, b));
    }

    void compute_constants()
    {
        if (std::abs(f_.f(0.0)) > 1e-12 || std::abs(f_.f(1.0)) > 1e-12)
            throw Error(ErrorKind::EndpointViolation,
                        "f(0) = " + std::to_string(f_.f(0.0)) + ", f(1) = " + std::to_string(f_.f(1.0)));
        constexpr int n = 4096;
        for (int i = 1; i < 2 * n; ++i) {
            const double x = double(i) / (2 * n);
            if (!(f_.f(x) > 0.0))
                throw Error(ErrorKind::NonPositiveProfile, "f(" + std::to_string(x) + ") <= 0");
        }
        // f / sin(pi x) has removable 0/0 limits at both ends.
        const Scalar1 neg_ratio = [this](double x) {
            if (x <= 0.0)
                return -f_.d1(0.0) / pi;
            if (x >= 1.0)
                return f_.d1(1.0) / pi;
            return -f_.f(x) / std::sin(pi * x);
        };
        const double coarse = -refined_sup(neg_ratio, n);
        const double fine = -refined_sup(neg_ratio, 2 * n);
        pi_const_ = std::min(coarse, fine);
        if (!(pi_const_ > 0.0))
            throw Error(ErrorKind::NonPositiveProfile, "inf f/sin(pi x) is not positive");

        sup_f_ = refined_sup([this](double x) { return std::abs(f_.f(x)); }, 2 * n);
        const double s1 = refined_sup([this](double x) { return std::abs(f_.d1(x)); }, 2 * n);
        const double s2 = refined_sup([this](double x) { return std::abs(f_.d2(x)); }, 2 * n);
        pi_bar_ = std::max({sup_f_, s1, s2});

        const auto samples = Sampled1D::sample(f_, 0.0, 1.0, 2049);
        sigma_ = holder_norm_1d(samples, 2, gamma_).value;
    }

    Function1 f_;
    double gamma_;
    std::string kind_;
    double pi_const_ = 0.0;
    double pi_bar_ = 0.0;
    double sup_f_ = 0.0;
    double sigma_ = 0.0;
};

/// Linear on [0, 3/4] with slope `slope`, then a concave cubic downturn
/// reaching zero at x = 1. C^2 across x = 3/4.
inline Function1 straight_corner_function(double slope)
{
    constexpr double knee = 0.75;
    const double c = 64.0 * slope; // c (1/4)^3 = slope
    return {[=](double x) { return x <= knee ? slope * x : slope * x - c * std::pow(x - knee, 3); },
            [=](double x) { return x <= knee ? slope : slope - 3 * c * std::pow(x - knee, 2); },
            [=](double x) { return x <= knee ? 0.0 : -6 * c * (x - knee); }};
}

inline BoundaryProfile make_profile(const ProfileDescriptor& d)
{
    if (!std::isfinite(d.amplitude) || !(d.amplitude > 0.0))
        throw Error(ErrorKind::NonPositiveProfile, "amplitude must be finite and positive");
    for (double p : d.params)
        if (!std::isfinite(p))
            throw Error(ErrorKind::Config, "profile params must be finite");
    if (!(d.gamma > 0.0 && d.gamma < 1.0))
        throw Error(ErrorKind::Config, "gamma must lie in (0, 1)");
    const double a = d.amplitude;

    if (d.kind == "sine") {
        const double w = pi * (d.params.empty() ? 1.0 : d.params[0]);
        return BoundaryProfile({[=](double x) { return a * std::sin(w * x); },
                                [=](double x) { return a * w * std::cos(w * x); },
                                [=](double x) { return -a * w * w * std::sin(w * x); }},
                               d.gamma, "sine");
    }
    if (d.kind == "poly") {
        // a x (1 - x) q(x), q(x) = 1 + p0 x + p1 x^2 + ...
        std::vector<double> q{1.0};
        q.insert(q.end(), d.params.begin(), d.params.end());
        // coefficients of x(1-x) q(x)
        std::vector<double> c(q.size() + 2, 0.0);
        for (std::size_t i = 0; i < q.size(); ++i) {
            c[i + 1] += q[i];
            c[i + 2] -= q[i];
        }
        auto horner = [c, a](double x, int order) {
            double s = 0.0;
            for (std::size_t i = c.size(); i-- > std::size_t(order);) {
                double coef = c[i];
                for (int o = 0; o < order; ++o)
                    coef *= double(i - o);
                s = s * x + coef;
            }
            return a * s;
        };
        return BoundaryProfile({[=](double x) { return horner(x, 0); },
                                [=](double x) { return horner(x, 1); },
                                [=](double x) { return horner(x, 2); }},
                               d.gamma, "poly");
    }
    if (d.kind == "corner")
        return BoundaryProfile(straight_corner_function(a), d.gamma, "corner");
    if (d.kind == "table") {
        std::vector<double> v = d.params;
        for (double& t : v)
            t *= a;
        auto spline = std::make_shared<UniformSpline>(std::move(v));
        return BoundaryProfile({[spline](double x) { return spline->value(x); },
                                [spline](double x) { return spline->d1(x); },
                                [spline](double x) { return spline->d2(x); }},
                               d.gamma, "table");
    }
    throw Error(ErrorKind::Config, "unknown profile kind '" + d.kind + "'");
}

class CrescentDomain {
public:
    explicit CrescentDomain(BoundaryProfile p) : profile_(std::move(p)) {}

    const BoundaryProfile& profile() const { return profile_; }

    bool contains(double x, double y) const { return x > 0.0 && x < 1.0 && y > 0.0 && y < profile_(x); }
    bool on_dirichlet_boundary(double x, double y, double tol = 1e-12) const
    {
        return x >= 0.0 && x <= 1.0 && std::abs(y - profile_(x)) <= tol;
    }
    bool on_oblique_boundary(double x, double y, double tol = 1e-12) const
    {
        return x >= 0.0 && x <= 1.0 && std::abs(y) <= tol;
    }

    /// Straight corner condition: f' constant on [0, 3/4] and f(x) <= f'(0) x.
    bool straight_corner(int samples = 4096, double tol = 1e-12) const
    {
        const double s0 = profile_.slope0();
        if (!(s0 > 0.0))
            return false;
        for (int i = 0; i <= samples; ++i) {
            const double x = double(i) / samples;
            if (x <= 0.75 && std::abs(profile_.eval_d1(x) - s0) > tol)
                return false;
            if (profile_(x) > s0 * x + tol)
                return false;
        }
        return true;
    }

private:
    BoundaryProfile profile_;
};

struct SmallnessReport {
    bool passed = false;
    double norm = 0.0;          ///< discrete C^{2,gamma} norm of f (sum convention)
    double sigma0 = 0.0;
    bool constants_finite = false;
    double pi_const = 0.0;
    double pi_bar = 0.0;
    double c_f = 0.0;
};

inline SmallnessReport validate_smallness(const BoundaryProfile& p, double sigma0)
{
    if (!(sigma0 > 0.0))
        throw Error(ErrorKind::Config, "sigma0 must be positive");
    SmallnessReport r;
    r.sigma0 = sigma0;
    r.norm = p.sigma();
    r.pi_const = p.pi_const();
    r.pi_bar = p.pi_bar();
    r.c_f = p.c_f();
    r.constants_finite = std::isfinite(r.pi_const) && std::isfinite(r.pi_bar) && r.pi_const > 0.0;
    r.passed = r.constants_finite && r.norm <= sigma0;
    return r;
}

} // namespace thinlab
