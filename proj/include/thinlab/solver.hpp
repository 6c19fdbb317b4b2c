#pragma once

// Finite differences for the mixed Dirichlet/oblique problem on the crescent,
// discretized on the rectangle (xi, eta) = (x, y / f(x)) in [0,1]^2.

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "thinlab/coefficients.hpp"
#include "thinlab/core.hpp"
#include "thinlab/geometry.hpp"

namespace thinlab {

class FittedGrid {
public:
    FittedGrid(std::shared_ptr<const BoundaryProfile> profile, int nx, int ny)
        : profile_(std::move(profile)), nx_(nx), ny_(ny)
    {
        if (nx < 8 || ny < 8)
            throw Error(ErrorKind::Config, "grid needs nx, ny >= 8");
        f_.resize(nx + 1);
        f1_.resize(nx + 1);
        f2_.resize(nx + 1);
        for (int i = 0; i <= nx; ++i) {
            const double x = xi(i);
            f_[i] = (i == 0 || i == nx) ? 0.0 : profile_->eval(x);
            f1_[i] = profile_->eval_d1(x);
            f2_[i] = profile_->eval_d2(x);
        }
    }

    FittedGrid(const BoundaryProfile& profile, int nx, int ny)
        : FittedGrid(std::make_shared<const BoundaryProfile>(profile), nx, ny)
    {
    }

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int size() const { return (nx_ + 1) * (ny_ + 1); }
    int index(int i, int j) const { return i * (ny_ + 1) + j; }
    double hx() const { return 1.0 / nx_; }
    double heta() const { return 1.0 / ny_; }
    double xi(int i) const { return double(i) / nx_; }
    double eta(int j) const { return double(j) / ny_; }
    Point physical(int i, int j) const { return {xi(i), eta(j) * f_[i]}; }
    double f(int i) const { return f_[i]; }
    double f1(int i) const { return f1_[i]; }
    double f2(int i) const { return f2_[i]; }
    bool corner_column(int i) const { return i == 0 || i == nx_; }
    const BoundaryProfile& profile() const { return *profile_; }
    std::shared_ptr<const BoundaryProfile> profile_ptr() const { return profile_; }

private:
    std::shared_ptr<const BoundaryProfile> profile_;
    int nx_, ny_;
    std::vector<double> f_, f1_, f2_;
};

enum class BottomCondition {
    Oblique,   ///< u_y + G u_x = psi
    Dirichlet, ///< u = psi (incompatible control case)
};

struct BVPSpec {
    CoefficientSet coefficients;
    std::shared_ptr<const BoundaryProfile> profile;
    Function1 phi;
    Scalar1 psi = [](double) { return 0.0; };
    Scalar2 source = [](double, double) { return 0.0; };
    BottomCondition bottom = BottomCondition::Oblique;
};

struct LinearSystem {
    std::shared_ptr<const FittedGrid> grid;
    Eigen::SparseMatrix<double> matrix;
    Eigen::VectorXd rhs;
};

/// Chain-rule factors of eta = y / f(x) at a node.
struct MappedFactors {
    double eta_x, eta_y, eta_xx, eta_xy;

    static MappedFactors at(const FittedGrid& g, int i, double eta)
    {
        const double f = g.f(i), f1 = g.f1(i), f2 = g.f2(i);
        return {-eta * f1 / f, 1.0 / f, eta * (2 * f1 * f1 - f * f2) / (f * f), -f1 / (f * f)};
    }
};

inline LinearSystem discretize(const BVPSpec& spec, const FittedGrid& grid_in)
{
    auto grid = std::make_shared<const FittedGrid>(grid_in);
    const FittedGrid& g = *grid;
    const int nx = g.nx(), ny = g.ny();
    const double hx = g.hx(), he = g.heta();
    const auto& c = spec.coefficients;

    for (int i = 1; i < nx; ++i)
        if (!(g.f(i) > 0.0) || 1.0 / g.f(i) > 1e14)
            throw Error(ErrorKind::SingularCoefficient, "1/f(x_" + std::to_string(i) + ") exceeds 1e14");

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(std::size_t(g.size()) * 9);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(g.size());

    auto dirichlet = [&](int i, int j, double value) {
        trip.emplace_back(g.index(i, j), g.index(i, j), 1.0);
        rhs[g.index(i, j)] = value;
    };

    for (int j = 0; j <= ny; ++j) {
        dirichlet(0, j, spec.phi(0.0));
        dirichlet(nx, j, spec.phi(1.0));
    }

    for (int i = 1; i < nx; ++i) {
        const double x = g.xi(i);
        const double f = g.f(i);
        dirichlet(i, ny, spec.phi(x));

        const int row0 = g.index(i, 0);
        if (spec.bottom == BottomCondition::Dirichlet) {
            dirichlet(i, 0, spec.psi(x));
        } else {
            // U_eta + f G U_xi = f psi
            const double fg = f * c.G(x);
            trip.emplace_back(row0, g.index(i, 0), -3.0 / (2 * he));
            trip.emplace_back(row0, g.index(i, 1), 4.0 / (2 * he));
            trip.emplace_back(row0, g.index(i, 2), -1.0 / (2 * he));
            trip.emplace_back(row0, g.index(i + 1, 0), fg / (2 * hx));
            trip.emplace_back(row0, g.index(i - 1, 0), -fg / (2 * hx));
            rhs[row0] = f * spec.psi(x);
        }

        for (int j = 1; j < ny; ++j) {
            const double eta = g.eta(j);
            const double y = eta * f;
            const auto m = MappedFactors::at(g, i, eta);
            const double A = c.A(x, y), B = c.B(x, y), C = c.C(x, y), D = c.D(x, y), E = c.E(x, y);
            // Rows are scaled by f^2 so that the eta-eta coefficient stays O(1).
            const double s = f * f;
            const double a_xx = s * A;
            const double a_xe = s * (2 * A * m.eta_x + B * m.eta_y);
            const double a_ee = s * (A * m.eta_x * m.eta_x + B * m.eta_x * m.eta_y + C * m.eta_y * m.eta_y);
            const double b_x = s * D;
            const double b_e = s * (A * m.eta_xx + B * m.eta_xy + D * m.eta_x + E * m.eta_y);

            const int row = g.index(i, j);
            auto add = [&](int ii, int jj, double v) {
                if (v != 0.0)
                    trip.emplace_back(row, g.index(ii, jj), v);
            };
            add(i, j, -2 * a_xx / (hx * hx) - 2 * a_ee / (he * he));
            add(i + 1, j, a_xx / (hx * hx) + b_x / (2 * hx));
            add(i - 1, j, a_xx / (hx * hx) - b_x / (2 * hx));
            add(i, j + 1, a_ee / (he * he) + b_e / (2 * he));
            add(i, j - 1, a_ee / (he * he) - b_e / (2 * he));
            const double mix = a_xe / (4 * hx * he);
            add(i + 1, j + 1, mix);
            add(i - 1, j - 1, mix);
            add(i + 1, j - 1, -mix);
            add(i - 1, j + 1, -mix);
            rhs[row] = s * spec.source(x, y);
        }
    }

    LinearSystem sys;
    sys.grid = grid;
    sys.matrix.resize(g.size(), g.size());
    sys.matrix.setFromTriplets(trip.begin(), trip.end());
    sys.matrix.makeCompressed();
    sys.rhs = std::move(rhs);
    return sys;
}

/// Grid function on a fitted grid with physical-coordinate derivative accessors.
class DiscreteSolution {
public:
    DiscreteSolution(std::shared_ptr<const FittedGrid> grid, std::vector<double> values)
        : grid_(std::move(grid)), values_(std::move(values))
    {
        build_jets();
    }

    /// Samples an analytic field at the grid nodes.
    static DiscreteSolution inject(const FittedGrid& grid, const Scalar2& u)
    {
        auto g = std::make_shared<const FittedGrid>(grid);
        std::vector<double> v(g->size());
        for (int i = 0; i <= g->nx(); ++i)
            for (int j = 0; j <= g->ny(); ++j) {
                const Point p = g->physical(i, j);
                v[g->index(i, j)] = u(p.x, p.y);
            }
        return DiscreteSolution(g, std::move(v));
    }

    const FittedGrid& grid() const { return *grid_; }
    std::shared_ptr<const FittedGrid> grid_ptr() const { return grid_; }
    const std::vector<double>& values() const { return values_; }
    double value(int i, int j) const { return values_[grid_->index(i, j)]; }
    const Jet2& jet(int i, int j) const { return jets_[grid_->index(i, j)]; }
    Point point(int i, int j) const { return grid_->physical(i, j); }

    double residual = 0.0;
    double rhs_norm = 0.0;
    std::string method;

private:
    double U(int i, int j) const { return values_[grid_->index(i, j)]; }

    double d_eta(int i, int j) const
    {
        const int ny = grid_->ny();
        const double h = grid_->heta();
        if (j == 0)
            return (-3 * U(i, 0) + 4 * U(i, 1) - U(i, 2)) / (2 * h);
        if (j == ny)
            return (3 * U(i, ny) - 4 * U(i, ny - 1) + U(i, ny - 2)) / (2 * h);
        return (U(i, j + 1) - U(i, j - 1)) / (2 * h);
    }

    double d_eta_eta(int i, int j) const
    {
        const int ny = grid_->ny();
        const double h = grid_->heta();
        if (j == 0)
            return (2 * U(i, 0) - 5 * U(i, 1) + 4 * U(i, 2) - U(i, 3)) / (h * h);
        if (j == ny)
            return (2 * U(i, ny) - 5 * U(i, ny - 1) + 4 * U(i, ny - 2) - U(i, ny - 3)) / (h * h);
        return (U(i, j + 1) - 2 * U(i, j) + U(i, j - 1)) / (h * h);
    }

    void build_jets()
    {
        const FittedGrid& g = *grid_;
        const int nx = g.nx(), ny = g.ny();
        const double hx = g.hx();
        jets_.assign(g.size(), Jet2{});
        for (int i = 1; i < nx; ++i)
            for (int j = 0; j <= ny; ++j) {
                const double Ux = (U(i + 1, j) - U(i - 1, j)) / (2 * hx);
                const double Uxx = (U(i + 1, j) - 2 * U(i, j) + U(i - 1, j)) / (hx * hx);
                const double Ue = d_eta(i, j);
                const double Uee = d_eta_eta(i, j);
                const double Uxe = (d_eta(i + 1, j) - d_eta(i - 1, j)) / (2 * hx);
                const auto m = MappedFactors::at(g, i, g.eta(j));
                Jet2& J = jets_[g.index(i, j)];
                J.u = U(i, j);
                J.ux = Ux + m.eta_x * Ue;
                J.uy = m.eta_y * Ue;
                J.uxx = Uxx + 2 * m.eta_x * Uxe + m.eta_x * m.eta_x * Uee + m.eta_xx * Ue;
                J.uxy = m.eta_y * Uxe + m.eta_x * m.eta_y * Uee + m.eta_xy * Ue;
                J.uyy = m.eta_y * m.eta_y * Uee;
            }
        // Every node of a corner column is the pinch point itself; its derivatives
        // are extrapolated quadratically along the lower boundary.
        auto extrapolate = [&](int c, int i1, int i2, int i3) {
            const Jet2 &a = jets_[g.index(i1, 0)], &b = jets_[g.index(i2, 0)], &d = jets_[g.index(i3, 0)];
            Jet2 J;
            auto ex = [](double p, double q, double r) { return 3 * p - 3 * q + r; };
            J.ux = ex(a.ux, b.ux, d.ux);
            J.uy = ex(a.uy, b.uy, d.uy);
            J.uxx = ex(a.uxx, b.uxx, d.uxx);
            J.uxy = ex(a.uxy, b.uxy, d.uxy);
            J.uyy = ex(a.uyy, b.uyy, d.uyy);
            for (int j = 0; j <= ny; ++j) {
                J.u = U(c, j);
                jets_[g.index(c, j)] = J;
            }
        };
        extrapolate(0, 1, 2, 3);
        extrapolate(nx, nx - 1, nx - 2, nx - 3);
    }

    std::shared_ptr<const FittedGrid> grid_;
    std::vector<double> values_;
    std::vector<Jet2> jets_;
};

struct SolveOptions {
    double rel_tol = 1e-10;
    double direct_limit = 2e8; ///< bandwidth * size above which the iterative path is used
};

inline DiscreteSolution solve(const LinearSystem& sys, const SolveOptions& opt = {})
{
    const auto& A = sys.matrix;
    const double bnorm = sys.rhs.norm();
    const double bandwidth = 2.0 * (sys.grid->ny() + 1) + 1;
    Eigen::VectorXd x;
    std::string method;
    if (bandwidth * double(A.rows()) <= opt.direct_limit) {
        Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
        lu.compute(A);
        if (lu.info() != Eigen::Success)
            throw Error(ErrorKind::NoConvergence, "sparse LU factorization failed");
        x = lu.solve(sys.rhs);
        // Two steps of iterative refinement.
        for (int it = 0; it < 2; ++it) {
            const Eigen::VectorXd r = sys.rhs - A * x;
            if (r.norm() <= opt.rel_tol * bnorm * 1e-3)
                break;
            x += lu.solve(r);
        }
        method = "sparse-lu";
    } else {
        Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
        it.setTolerance(opt.rel_tol * 1e-2);
        it.setMaxIterations(20000);
        it.compute(A);
        x = it.solve(sys.rhs);
        method = "bicgstab-ilut";
    }
    const double res = (sys.rhs - A * x).norm();
    if (!(res <= opt.rel_tol * std::max(bnorm, 1e-300)) && !(bnorm == 0.0 && res == 0.0))
        throw Error(ErrorKind::NoConvergence, "final residual " + std::to_string(res) + " vs rhs norm " +
                                                  std::to_string(bnorm));
    DiscreteSolution u(sys.grid, std::vector<double>(x.data(), x.data() + x.size()));
    u.residual = res;
    u.rhs_norm = bnorm;
    u.method = method;
    return u;
}

inline DiscreteSolution solve_bvp(const BVPSpec& spec, int nx, int ny)
{
    return solve(discretize(spec, FittedGrid(spec.profile, nx, ny)));
}

} // namespace thinlab
