#pragma once

// JSON experiment configuration and the presets it can name.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"

#include "thinlab/coefficients.hpp"
#include "thinlab/core.hpp"
#include "thinlab/geometry.hpp"

namespace thinlab {

using json = nlohmann::json;

namespace detail {

inline Error config_error(const std::string& key, const std::string& what)
{
    return Error(ErrorKind::Config, "config key '" + key + "': " + what);
}

template <class T>
T get_or(const json& j, const std::string& key, const T& fallback, const std::string& path = "")
{
    const std::string full = path.empty() ? key : path + "." + key;
    if (!j.is_object())
        throw config_error(path.empty() ? "<root>" : path, "expected an object");
    auto it = j.find(key);
    if (it == j.end() || it->is_null())
        return fallback;
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw config_error(full, e.what());
    }
}

template <class T>
T require(const json& j, const std::string& key, const std::string& path = "")
{
    const std::string full = path.empty() ? key : path + "." + key;
    if (!j.is_object() || !j.contains(key))
        throw config_error(full, "missing");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw config_error(full, e.what());
    }
}

} // namespace detail

/// Boundary data presets:
///   {"kind": "cos", "freq": k}                  cos(k pi x)
///   {"kind": "trig", "terms": [[a, k], ...]}    sum a cos(k pi x)
///   {"kind": "poly", "coeffs": [c0, c1, ...]}
///   {"kind": "constant", "value": c}
///   {"kind": "harmonic"}                        trace of cosh(pi y) cos(pi x) on the upper boundary
inline Function1 make_phi(const json& j, std::shared_ptr<const BoundaryProfile> profile, const std::string& path = "phi")
{
    const auto kind = detail::get_or<std::string>(j, "kind", "cos", path);
    if (kind == "cos") {
        const double w = pi * detail::get_or<double>(j, "freq", 1.0, path);
        return {[w](double x) { return std::cos(w * x); }, [w](double x) { return -w * std::sin(w * x); },
                [w](double x) { return -w * w * std::cos(w * x); }};
    }
    if (kind == "trig") {
        const auto terms = detail::require<std::vector<std::array<double, 2>>>(j, "terms", path);
        Function1 s = Function1::constant(0.0);
        for (const auto& [a, k] : terms) {
            const double w = pi * k;
            s = s + a * Function1{[w](double x) { return std::cos(w * x); },
                                  [w](double x) { return -w * std::sin(w * x); },
                                  [w](double x) { return -w * w * std::cos(w * x); }};
        }
        return s;
    }
    if (kind == "poly")
        return polynomial1(detail::require<std::vector<double>>(j, "coeffs", path));
    if (kind == "constant")
        return Function1::constant(detail::get_or<double>(j, "value", 1.0, path));
    if (kind == "harmonic") {
        if (!profile)
            throw detail::config_error(path + ".kind", "harmonic data needs a profile");
        // g(x) = cosh(pi f(x)) cos(pi x)
        return {[profile](double x) { return std::cosh(pi * (*profile)(x)) * std::cos(pi * x); },
                [profile](double x) {
                    const double f = (*profile)(x), f1 = profile->eval_d1(x);
                    return pi * f1 * std::sinh(pi * f) * std::cos(pi * x) - pi * std::cosh(pi * f) * std::sin(pi * x);
                },
                [profile](double x) {
                    const double f = (*profile)(x), f1 = profile->eval_d1(x), f2 = profile->eval_d2(x);
                    const double ch = std::cosh(pi * f), sh = std::sinh(pi * f);
                    const double c = std::cos(pi * x), s = std::sin(pi * x);
                    return (pi * f2 * sh + pi * pi * f1 * f1 * ch) * c - 2 * pi * pi * f1 * sh * s -
                           pi * pi * ch * c;
                }};
    }
    throw detail::config_error(path + ".kind", "unknown boundary data kind '" + kind + "'");
}

inline Polynomial2 make_polynomial2(const json& j, const std::string& path)
{
    if (j.is_number())
        return Polynomial2::constant(j.get<double>());
    Polynomial2 p;
    try {
        for (const auto& t : j)
            p.terms.push_back({t.at(0).get<double>(), t.at(1).get<int>(), t.at(2).get<int>()});
    } catch (const json::exception& e) {
        throw detail::config_error(path, std::string("expected number or [[c, px, py], ...]: ") + e.what());
    }
    return p;
}

/// {"preset": "laplace" | "constant" | "polynomial", ...,
///  "lambda", "Lambda", "gamma", "G": [g0, g1, ...], "radial_drift": [dc, ec]}
inline CoefficientSet make_coefficients(const json& j, const std::string& path = "coefficients")
{
    const auto preset = detail::get_or<std::string>(j, "preset", "laplace", path);
    const double lambda = detail::get_or<double>(j, "lambda", 1.0, path);
    const double Lambda = detail::get_or<double>(j, "Lambda", 2.0, path);
    const double gamma = detail::get_or<double>(j, "gamma", 0.5, path);
    if (!(lambda > 0.0) || !(Lambda >= lambda))
        throw detail::config_error(path + ".Lambda", "need 0 < lambda <= Lambda");
    if (!(gamma > 0.0 && gamma < 1.0))
        throw detail::config_error(path + ".gamma", "must lie in (0, 1)");
    CoefficientSet c;
    if (preset == "laplace") {
        c = CoefficientSet::laplace(lambda, Lambda, gamma);
    } else if (preset == "constant") {
        auto v = [&](const char* k, double d) { return detail::get_or<double>(j, k, d, path); };
        c = CoefficientSet::constant(v("A", 1), v("B", 0), v("C", 1), v("D", 0), v("E", 0), lambda, Lambda, gamma);
    } else if (preset == "polynomial") {
        auto p = [&](const char* k, double d) {
            return j.contains(k) ? make_polynomial2(j.at(k), path + "." + k) : Polynomial2::constant(d);
        };
        c = CoefficientSet::polynomial(p("A", 1), p("B", 0), p("C", 1), p("D", 0), p("E", 0), lambda, Lambda, gamma);
    } else {
        throw detail::config_error(path + ".preset", "unknown preset '" + preset + "'");
    }
    if (j.contains("radial_drift")) {
        const auto rd = detail::require<std::array<double, 2>>(j, "radial_drift", path);
        c = c.with_radial_drift(rd[0], rd[1]);
    }
    if (j.contains("G"))
        c = c.with_G(polynomial1(detail::require<std::vector<double>>(j, "G", path)));
    return c;
}

inline ProfileDescriptor make_descriptor(const json& j, double amplitude, const std::string& path = "profile")
{
    ProfileDescriptor d;
    d.kind = detail::get_or<std::string>(j, "kind", "sine", path);
    d.params = detail::get_or<std::vector<double>>(j, "params", {}, path);
    d.gamma = detail::get_or<double>(j, "gamma", 0.5, path);
    d.amplitude = amplitude;
    return d;
}

struct Tolerances {
    double ratio_spread = 2.0;      ///< max/min of family constants
    double negative_growth = 4.0;   ///< growth of the negative control over the family
    double slope_margin = 0.1;      ///< fitted slope >= gamma - margin
    double order_lo = 1.8, order_hi = 2.2;
    double roundtrip = 1e-9;
    double halving_ratio = 1.5;
    double embed_cbar = 10.0;
};

struct ExperimentConfig {
    std::string name = "run";
    std::string kind;
    json profile = json::object();
    std::vector<double> sigmas;
    json coefficients = json::object();
    json phi = json::object();
    json negative_control;                 ///< null, or {"bottom": "dirichlet", "psi": <phi preset>}
    int nx = 64, ny = 64;
    std::vector<double> x0;
    double m = 0.0;
    std::vector<std::string> transforms{"p1", "p2", "p3"};
    std::vector<std::string> checks{"barrier"};
    Tolerances tol;
    std::uint64_t seed = 1;
    std::string output = "out";
};

inline const std::vector<std::string>& experiment_kinds()
{
    static const std::vector<std::string> k{"shrink_study",    "barrier_report",  "asymptotic_study",
                                            "transform_audit", "weighted_study", "mms_convergence"};
    return k;
}

inline ExperimentConfig parse_config(const json& j)
{
    using detail::get_or;
    if (!j.is_object())
        throw detail::config_error("<root>", "expected an object");
    ExperimentConfig c;
    c.kind = detail::require<std::string>(j, "kind");
    if (std::find(experiment_kinds().begin(), experiment_kinds().end(), c.kind) == experiment_kinds().end())
        throw detail::config_error("kind", "unknown experiment kind '" + c.kind + "'");
    c.name = get_or<std::string>(j, "name", c.kind);
    c.profile = get_or<json>(j, "profile", json::object());
    c.sigmas = detail::require<std::vector<double>>(j, "sigmas");
    if (c.sigmas.empty())
        throw detail::config_error("sigmas", "empty");
    for (std::size_t i = 0; i < c.sigmas.size(); ++i) {
        if (!(c.sigmas[i] > 0.0) || !std::isfinite(c.sigmas[i]))
            throw detail::config_error("sigmas", "entries must be positive and finite");
        if (i > 0 && !(c.sigmas[i] < c.sigmas[i - 1]))
            throw detail::config_error("sigmas", "must be strictly decreasing");
    }
    c.coefficients = get_or<json>(j, "coefficients", json::object());
    c.phi = get_or<json>(j, "phi", json::object());
    c.negative_control = get_or<json>(j, "negative_control", json());
    if (j.contains("grid")) {
        c.nx = get_or<int>(j["grid"], "nx", 64, "grid");
        c.ny = get_or<int>(j["grid"], "ny", c.nx, "grid");
    }
    if (c.nx < 8 || c.ny < 8)
        throw detail::config_error("grid", "nx and ny must be >= 8");
    c.x0 = get_or<std::vector<double>>(j, "x0", {});
    for (double x : c.x0)
        if (!(x > 0.0 && x < 1.0))
            throw detail::config_error("x0", "entries must lie in (0, 1)");
    c.m = get_or<double>(j, "m", 0.0);
    if (c.m < 0.0)
        throw detail::config_error("m", "must be >= 0");
    c.transforms = get_or<std::vector<std::string>>(j, "transforms", c.transforms);
    for (const auto& t : c.transforms)
        if (t != "p1" && t != "p2" && t != "p3")
            throw detail::config_error("transforms", "unknown map '" + t + "'");
    c.checks = get_or<std::vector<std::string>>(j, "checks", c.checks);
    for (const auto& t : c.checks)
        if (t != "barrier" && t != "corrector")
            throw detail::config_error("checks", "unknown check '" + t + "'");
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        auto& o = c.tol;
        o.ratio_spread = get_or<double>(t, "ratio_spread", o.ratio_spread, "tolerances");
        o.negative_growth = get_or<double>(t, "negative_growth", o.negative_growth, "tolerances");
        o.slope_margin = get_or<double>(t, "slope_margin", o.slope_margin, "tolerances");
        o.order_lo = get_or<double>(t, "order_lo", o.order_lo, "tolerances");
        o.order_hi = get_or<double>(t, "order_hi", o.order_hi, "tolerances");
        o.roundtrip = get_or<double>(t, "roundtrip", o.roundtrip, "tolerances");
        o.halving_ratio = get_or<double>(t, "halving_ratio", o.halving_ratio, "tolerances");
        o.embed_cbar = get_or<double>(t, "embed_cbar", o.embed_cbar, "tolerances");
    }
    c.seed = get_or<std::uint64_t>(j, "seed", 1);
    c.output = get_or<std::string>(j, "output", "out");

    // fail early on presets that cannot be built
    make_coefficients(c.coefficients);
    make_profile(make_descriptor(c.profile, c.sigmas.front()));
    return c;
}

} // namespace thinlab
