#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

namespace thinlab {

inline constexpr double pi = std::numbers::pi;

/// Error classes. The CLI maps these onto exit codes.
enum class ErrorKind {
    Config,
    NonPositiveProfile,
    EndpointViolation,
    EllipticityViolation,
    OutOfDomain,
    NonInvertible,
    DegenerateRatio,
    SingularCoefficient,
    NoConvergence,
    RangeViolation,
    OutOfWedge,
    DegenerateC,
    GridMismatch,
};

inline const char* to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::NonPositiveProfile: return "NonPositiveProfile";
    case ErrorKind::EndpointViolation: return "EndpointViolation";
    case ErrorKind::EllipticityViolation: return "EllipticityViolation";
    case ErrorKind::OutOfDomain: return "OutOfDomain";
    case ErrorKind::NonInvertible: return "NonInvertible";
    case ErrorKind::DegenerateRatio: return "DegenerateRatio";
    case ErrorKind::SingularCoefficient: return "SingularCoefficient";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::RangeViolation: return "RangeViolation";
    case ErrorKind::OutOfWedge: return "OutOfWedge";
    case ErrorKind::DegenerateC: return "DegenerateC";
    case ErrorKind::GridMismatch: return "GridMismatch";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Value and derivatives up to order two of a planar field at one point.
struct Jet2 {
    double u = 0.0;
    double ux = 0.0;
    double uy = 0.0;
    double uxx = 0.0;
    double uxy = 0.0;
    double uyy = 0.0;

    std::array<double, 2> grad() const { return {ux, uy}; }
    std::array<double, 3> hess() const { return {uxx, uxy, uyy}; }
};

using Field2 = std::function<Jet2(double, double)>;
using Scalar2 = std::function<double(double, double)>;
using Scalar1 = std::function<double(double)>;

/// A real function on an interval together with its first two derivatives.
struct Function1 {
    Scalar1 f;
    Scalar1 d1;
    Scalar1 d2;

    double operator()(double x) const { return f(x); }

    static Function1 constant(double c)
    {
        return {[c](double) { return c; }, [](double) { return 0.0; }, [](double) { return 0.0; }};
    }
};

inline Function1 operator+(Function1 a, Function1 b)
{
    return {[a, b](double x) { return a.f(x) + b.f(x); },
            [a, b](double x) { return a.d1(x) + b.d1(x); },
            [a, b](double x) { return a.d2(x) + b.d2(x); }};
}

inline Function1 operator*(double s, Function1 a)
{
    return {[s, a](double x) { return s * a.f(x); },
            [s, a](double x) { return s * a.d1(x); },
            [s, a](double x) { return s * a.d2(x); }};
}

} // namespace thinlab
