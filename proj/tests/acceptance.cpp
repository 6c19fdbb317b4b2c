// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "thinlab/experiments.hpp"

namespace fs = std::filesystem;
using namespace thinlab;

namespace {

int failures = 0;
std::map<std::string, std::string> first_csv; // config name -> aggregate from the first run

void report(int id, const char* title, bool ok, const std::string& detail)
{
    std::printf("[%s] %2d %-34s %s\n", ok ? "PASS" : "FAIL", id, title, detail.c_str());
    std::fflush(stdout);
    if (!ok)
        ++failures;
}

std::string fmt(const char* f, double a)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

ExperimentConfig load(const std::string& file)
{
    std::ifstream in(fs::path(THINLAB_CONFIGS) / file);
    return parse_config(json::parse(in));
}

Outcome run_config(const ExperimentConfig& cfg)
{
    Outcome o = run_experiment(cfg, 4);
    first_csv[cfg.name] = aggregate_csv(o);
    return o;
}

double col(const SubRun& r, const std::string& key) { return detail::column(r, key); }

std::vector<double> cols(const Outcome& o, const std::string& key) { return detail::column(o.runs, key); }

double spread(const std::vector<double>& v) { return detail::spread(v); }

std::shared_ptr<const BoundaryProfile> sine(double a)
{
    return std::make_shared<const BoundaryProfile>(make_profile({"sine", a, {}, 0.5}));
}

void criterion1()
{
    const auto t0 = std::chrono::steady_clock::now();
    const auto o = run_config(load("mms_harmonic.json"));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double ratio = col(o.runs.front(), "ratio");
    report(1, "manufactured convergence", ratio >= 3.4 && ratio <= 4.6 && secs < 30.0,
           "error ratio 64/128 = " + fmt("%.4f", ratio) + ", " + fmt("%.2f s", secs));
}

void criterion2()
{
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double worst = -INFINITY;
    for (int trial = 0; trial < 20; ++trial) {
        // random trigonometric polynomial plus a random cubic
        std::vector<std::array<double, 2>> terms;
        for (int k = 0; k <= 4; ++k)
            terms.push_back({coef(rng) / (1 + k), double(k)});
        const std::vector<double> cubic{0.0, coef(rng), coef(rng), coef(rng)};
        const Function1 phi = make_phi(json{{"kind", "trig"}, {"terms", terms}}, nullptr) + polynomial1(cubic);
        BVPSpec s;
        s.coefficients = CoefficientSet::laplace();
        s.profile = sine(0.02 + 0.06 * (trial % 5) / 4.0);
        s.phi = phi;
        const auto u = solve_bvp(s, 64, 32);
        double lo = INFINITY, hi = -INFINITY, sup = 0.0;
        for (int i = 0; i <= 8192; ++i) {
            const double v = phi(i / 8192.0);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            sup = std::max(sup, std::abs(v));
        }
        for (double v : u.values())
            worst = std::max(worst, std::max(lo - v, v - hi) / sup);
    }
    report(2, "discrete maximum principle", worst <= 1e-6,
           "20 random data, worst normalized overshoot " + fmt("%.3e", std::max(worst, 0.0)));
}

void criterion3()
{
    const auto o = run_config(load("shrink_laplace.json"));
    const double sp = spread(cols(o, "ratio"));
    const auto neg = cols(o, "negative_ratio");
    const double growth = neg.back() / neg.front();
    report(3, "uniform Schauder ratio", sp <= 2.0 && growth >= 4.0,
           "ratio max/min " + fmt("%.4f", sp) + ", negative control growth " + fmt("%.2fx", growth));
}

void criterion4()
{
    const auto cfg = load("barrier_corner.json");
    const auto o = run_config(cfg);
    bool ok = true;
    std::string detail;
    for (const auto& r : o.runs)
        ok = ok && make_profile(make_descriptor(cfg.profile, r.sigma)).slope0() <= 0.05;
    for (const char* key : {"Y_margin", "H_near", "H_right", "H_left"}) {
        const auto v = cols(o, key);
        bool positive = !v.empty();
        for (double m : v)
            positive = positive && m > 0.0 && std::isfinite(m);
        const double sp = spread(v);
        ok = ok && positive && v.size() == cfg.sigmas.size() && sp <= 2.0;
        detail += std::string(key) + " min " + fmt("%.3g", *std::min_element(v.begin(), v.end())) + " spread " +
                  fmt("%.2f", sp) + "; ";
    }
    const auto b = cols(o, "H_boundary");
    for (double m : b)
        ok = ok && m > 0.0;
    detail += "boundary min>0 " + std::string(ok ? "yes" : "no");
    report(4, "barrier certificates", ok, detail);
}

void criterion5()
{
    const auto cfg = load("corrector_sine.json");
    const auto o = run_config(cfg);
    bool ok = true;
    std::string detail;
    for (double x0 : cfg.x0) {
        const auto v = cols(o, "lemma@" + detail::fmt(x0));
        const double sp = spread(v);
        ok = ok && sp <= 2.0;
        detail += "x0=" + detail::fmt(x0) + " [" + fmt("%.3g", v.front()) + " .. " + fmt("%.3g", v.back()) +
                  "] spread " + fmt("%.2f", sp) + "; ";
    }
    report(5, "corrector growth constant", ok, detail);
}

void criterion6()
{
    const auto f = make_profile({"sine", 0.05, {}, 0.5});
    const Function1 G = polynomial1({0.0, 1.0});
    const auto m = p1_flatten(G, f);
    double closed = 0.0;
    for (int i = 1; i < 64; ++i)
        for (int j = 0; j <= 16; ++j) {
            const double x = i / 64.0, y = f(x) * j / 16.0;
            closed = std::max(closed, std::abs(m.forward({x, y}).x - x * std::exp(-y)));
        }
    const auto o = run_config(load("transform_audit.json"));
    double rt = 0.0, ident = 0.0;
    for (const auto& r : o.runs) {
        for (const auto& [k, v] : r.row)
            if (k.rfind("roundtrip_", 0) == 0)
                rt = std::max(rt, v);
        ident = std::max(ident, col(r, "identity_error"));
    }
    const double hD = o.summary["halving_ratio"]["sup_rD1"], hE = o.summary["halving_ratio"]["sup_rE1"];
    bool finite = true;
    for (const char* k : {"sup_rD1", "sup_rE1"})
        for (double v : cols(o, k))
            finite = finite && std::isfinite(v);
    const bool ok = closed <= 1e-8 && rt <= 1e-9 && ident <= 1e-8 && finite && hD <= 1.5 && hE <= 1.5;
    report(6, "transform exactness", ok,
           "P1 closed form " + fmt("%.2e", closed) + ", round-trip " + fmt("%.2e", rt) + ", identity " +
               fmt("%.2e", ident) + ", halving rD1 " + fmt("%.3f", hD) + " rE1 " + fmt("%.3f", hE));
}

void criterion7()
{
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int preset = 0; preset < 10; ++preset) {
        Polynomial2 A{{{2.0 + 0.5 * u(rng), 0, 0}, {0.3 * u(rng), 1, 0}}};
        Polynomial2 B{{{0.5 * u(rng), 0, 0}, {0.2 * u(rng), 1, 0}}};
        Polynomial2 C{{{1.5 + 0.4 * u(rng), 0, 0}, {0.2 * u(rng), 1, 0}}};
        Polynomial2 D{{{u(rng), 0, 0}}}, E{{{u(rng), 0, 0}, {u(rng), 1, 0}}};
        const auto c = CoefficientSet::polynomial(A, B, C, D, E, 0.5, 10);
        const Function1 G = polynomial1({0.5 * u(rng), 0.5 * u(rng), 0.2 * u(rng)});
        const Function1 phi = make_phi(json{{"kind", "trig"}, {"terms", {{u(rng), 1.0}, {u(rng), 2.0}}}}, nullptr) +
                              polynomial1({u(rng), u(rng)});
        const auto grid = uniform_grid(64);
        const auto a = solve_asymptotic(c, G, phi, grid);
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double x = grid[i];
            Eigen::Matrix<double, 6, 6> M = Eigen::Matrix<double, 6, 6>::Zero();
            Eigen::Matrix<double, 6, 1> b = Eigen::Matrix<double, 6, 1>::Zero();
            // rows: trace, tangential, second tangential, oblique, its derivative, equation
            M(0, 0) = 1, b(0) = phi(x);
            M(1, 1) = 1, b(1) = phi.d1(x);
            M(2, 3) = 1, b(2) = phi.d2(x);
            M(3, 2) = 1, M(3, 1) = G(x);
            M(4, 4) = 1, M(4, 3) = G(x), M(4, 1) = G.d1(x);
            M(5, 3) = c.A(x, 0), M(5, 4) = c.B(x, 0), M(5, 5) = c.C(x, 0), M(5, 1) = c.D(x, 0), M(5, 2) = c.E(x, 0);
            const Eigen::Matrix<double, 6, 1> ref = M.fullPivLu().solve(b);
            const Jet2 j = a.jet(i);
            const double got[6] = {j.u, j.ux, j.uy, j.uxx, j.uxy, j.uyy};
            for (int k = 0; k < 6; ++k)
                worst = std::max(worst, std::abs(got[k] - ref(k)) / std::max(1.0, std::abs(ref(k))));
        }
    }
    // closed-form examples
    const auto lap = CoefficientSet::laplace();
    const auto grid = uniform_grid(32);
    const Function1 sq = polynomial1({0, 0, 1});
    const Function1 sn{[](double x) { return std::sin(pi * x); }, [](double x) { return pi * std::cos(pi * x); },
                       [](double x) { return -pi * pi * std::sin(pi * x); }};
    const auto e1 = solve_asymptotic(lap, Function1::constant(0), sq, grid);
    const auto e2 = solve_asymptotic(lap, polynomial1({0, 1}), sq, grid);
    const auto e3 = solve_asymptotic(lap, Function1::constant(0), sn, grid);
    bool exact = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double x = grid[i];
        exact = exact && e1.ustar[i] == x * x && e1.ux[i] == 2 * x && e1.uy[i] == 0 && e1.uxx[i] == 2 &&
                e1.uxy[i] == 0 && e1.uyy[i] == -2;
        exact = exact && e2.uy[i] == -2 * x * x && e2.uxy[i] == -4 * x && e2.uyy[i] == -2;
        exact = exact && std::abs(e3.uyy[i] - pi * pi * std::sin(pi * x)) <= 1e-13;
    }
    report(7, "asymptotic state oracle", worst <= 1e-12 && exact,
           "max rel. difference to 6x6 solve " + fmt("%.2e", worst) + ", closed forms " + (exact ? "exact" : "off"));
}

void criterion8()
{
    const auto o = run_config(load("asymptotic_laplace.json"));
    bool ok = true;
    std::string detail;
    for (int k = 0; k < 3; ++k) {
        const bool mono = o.summary["monotone"][k];
        const double slope = o.summary["slope"][k];
        ok = ok && mono && slope >= 0.4;
        detail += "order " + std::to_string(k) + " slope " + fmt("%.3f", slope) + (mono ? " monotone; " : " NOT monotone; ");
    }
    report(8, "asymptotic convergence", ok, detail);
}

void criterion9()
{
    const Function1 inv{[](double x) { return 1 / x; }, [](double x) { return -1 / (x * x); },
                        [](double x) { return 2 / (x * x * x); }};
    const auto w = weighted_norm_1d(Sampled1D::sample(inv, 0.0, 1.0, 4096), 2, 0.5, 1.0);
    const double terms_err = std::max({std::abs(w.sup_terms[0] - 1), std::abs(w.sup_terms[1] - 1),
                                       std::abs(w.sup_terms[2] - 2)});
    std::vector<ProfileDescriptor> presets{
        {"sine", 0.1, {}, 0.5},         {"sine", 0.01, {}, 0.5},       {"poly", 0.1, {}, 0.5},
        {"poly", 0.05, {0.5}, 0.5},     {"poly", 0.05, {0.5, -0.3}, 0.5}, {"poly", 0.02, {-0.5}, 0.5},
        {"corner", 0.05, {}, 0.5},      {"corner", 0.01, {}, 0.5},     {"sine", 0.05, {}, 0.3},
    };
    std::vector<double> table(33);
    for (int i = 0; i <= 32; ++i)
        table[i] = std::sin(pi * i / 32.0) * (1 + 0.3 * i / 32.0);
    presets.push_back({"table", 0.05, table, 0.5});
    double cbar = 0.0;
    for (const auto& d : presets) {
        const auto f = make_profile(d);
        const auto r = profile_weighted_norm(f, d.gamma);
        cbar = std::max(cbar, r.embedding_lhs() / r.value());
    }
    report(9, "weighted norms", terms_err <= 1e-6 && cbar <= 10.0,
           "x^-1 sup terms error " + fmt("%.2e", terms_err) + ", embedding C = " + fmt("%.3f", cbar) +
               " over 10 presets");
}

void criterion10()
{
    bool ok = true;
    for (const auto& entry : fs::directory_iterator(THINLAB_CONFIGS)) {
        std::ifstream in(entry.path());
        const auto cfg = parse_config(json::parse(in));
        auto it = first_csv.find(cfg.name);
        const std::string a = it != first_csv.end() ? it->second : aggregate_csv(run_experiment(cfg, 4));
        const std::string b = aggregate_csv(run_experiment(cfg, 1));
        ok = ok && !a.empty() && a == b;
    }
    report(10, "determinism", ok, std::to_string(std::distance(fs::directory_iterator(THINLAB_CONFIGS),
                                                               fs::directory_iterator())) +
                                      " configs rerun with 1 vs 4 workers, CSV byte-identical: " + (ok ? "yes" : "no"));
}

} // namespace

int main()
{
    void (*criteria[])() = {criterion1, criterion2, criterion3, criterion4, criterion5,
                            criterion6, criterion7, criterion8, criterion9, criterion10};
    int id = 1;
    for (auto c : criteria) {
        try {
            c();
        } catch (const std::exception& e) {
            report(id, "(error)", false, e.what());
        }
        ++id;
    }
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
