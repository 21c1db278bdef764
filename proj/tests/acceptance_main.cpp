// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Tolerances are fixed here; nothing is calibrated at run time.

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "wulff/diagnostics.hpp"
#include "wulff/isoperimetry.hpp"
#include "wulff/mesh.hpp"
#include "wulff/rng.hpp"
#include "wulff/solver.hpp"

using namespace wulff;

namespace {

const double kPi = 3.14159265358979323846;
int g_failures = 0;

void report(const char* name, bool pass, const std::string& detail) {
    std::printf("[%s] %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct GeomConfig {
    const char* name;
    NormSpec H;
    WeightSpec w;
    ConeSpec cone;
};

struct SolveCase {
    const char* name;
    ProblemSpec prob;
    double h;
    double (*exact)(Vec2, const ProblemSpec&);
    Mesh mesh;
    Solution sol;
    LevelTable table;
    double constant = 0.0;
};

// Wulff-radial closed form for f = 1 on B_R with R = 1:
// u = (p-1)/p D^{-1/(p-1)} (1 - H0(x)^{p/(p-1)}).
double radial_exact(double p, double D, double rho) {
    return (p - 1.0) / p * std::pow(1.0 / D, 1.0 / (p - 1.0)) *
           (1.0 - std::pow(rho, p / (p - 1.0)));
}

double exact_torsion(Vec2 x, const ProblemSpec&) { return (1.0 - norm2(x)) / 4.0; }
double exact_p3(Vec2 x, const ProblemSpec& pr) { return radial_exact(pr.p, 2.0, norm(x)); }
double exact_ellipse(Vec2 x, const ProblemSpec& pr) {
    return (1.0 - std::pow(dual_norm(pr.H, x), 2.0)) / 4.0;
}
double exact_p15(Vec2 x, const ProblemSpec& pr) { return radial_exact(pr.p, 2.0, norm(x)); }
double exact_weighted(Vec2 x, const ProblemSpec&) { return (1.0 - norm2(x)) / 8.0; }

double linf_error(const SolveCase& c) {
    double worst = 0.0;
    for (std::size_t v = 0; v < c.mesh.vertices.size(); ++v)
        worst = std::max(worst, std::abs(c.sol.u[v] - c.exact(c.mesh.vertices[v], c.prob)));
    return worst;
}

double min_u(const SolveCase& c) {
    double m = 1e300;
    for (double v : c.sol.u) m = std::min(m, v);
    return m;
}

// Finite-difference divergence oracle: checks that the Wulff-radial ansatz
// satisfies -div(H(grad u)^{p-1} grad_xi H(grad u)) = 1 for the ellipse norm.
double ellipse_ansatz_divergence_error(const NormSpec& H) {
    auto flux = [&H](Vec2 x) {
        // u = (1 - H0(x)^2)/4, grad u = -(A^{-1} x)/2 for the ellipse norm.
        const double det = H.a11 * H.a22 - H.a12 * H.a12;
        const Vec2 ainv_x{(H.a22 * x.x - H.a12 * x.y) / det,
                          (-H.a12 * x.x + H.a11 * x.y) / det};
        const Vec2 g = -0.5 * ainv_x;
        return eval_norm(H, g) * grad_norm(H, g); // p = 2
    };
    double worst = 0.0;
    const double d = 1e-5;
    for (int i = -4; i <= 4; ++i) {
        for (int j = -4; j <= 4; ++j) {
            const Vec2 x{0.3 * i / 4.0, 0.15 * j / 4.0};
            if (dual_norm(H, x) < 0.05) continue;
            const double div = (flux(x + Vec2{d, 0}).x - flux(x - Vec2{d, 0}).x) / (2 * d) +
                               (flux(x + Vec2{0, d}).y - flux(x - Vec2{0, d}).y) / (2 * d);
            worst = std::max(worst, std::abs(div + 1.0));
        }
    }
    return worst;
}

// Radial substitution oracle for p = 3: -(1/r)(r |u'|^{p-2} u')' = 1.
double p3_ode_residual() {
    auto g = [](double r) {
        const double up = -std::pow(r / 2.0, 0.5); // u' for p = 3, D = 2
        return r * std::abs(up) * up;              // r |u'|^{p-2} u'
    };
    double worst = 0.0;
    const double d = 1e-6;
    for (double r : {0.2, 0.4, 0.6, 0.8}) {
        const double lhs = -(g(r + d) - g(r - d)) / (2 * d) / r;
        worst = std::max(worst, std::abs(lhs - 1.0));
    }
    return worst;
}

} // namespace

int main() {
    const NormSpec eu = make_euclidean();
    const NormSpec el = make_ellipse(4.0, 0.0, 1.0);
    const NormSpec sq = make_smoothed_q(3.0, 0.05);
    const WeightSpec one = make_constant_weight();
    const WeightSpec xy = make_monomial_weight(1.0, 1.0);
    const ConeSpec full = make_full_plane();
    const ConeSpec half = make_half_plane(0.5 * kPi);
    const ConeSpec quad = make_sector(0.0, 0.5 * kPi);

    // ---- 1. Finsler kernel ------------------------------------------------
    {
        bool pass = true;
        std::string detail;
        const NormSpec kinds[] = {eu, el, sq};
        const char* names[] = {"euclid", "ellipse", "smoothed-q"};
        Rng rng(2024);
        for (int k = 0; k < 3; ++k) {
            const NormSpec& H = kinds[k];
            const double bid = bidual_check(H, 100);
            double euler = 0.0, cs_slack = 0.0;
            for (int i = 0; i < 100; ++i) {
                const Vec2 xi = std::exp(rng.uniform(-1, 1)) * unit_dir(rng.uniform(0, 2 * kPi));
                const Vec2 x = std::exp(rng.uniform(-1, 1)) * unit_dir(rng.uniform(0, 2 * kPi));
                euler = std::max(euler, std::abs(dot(grad_norm(H, xi), xi) - eval_norm(H, xi)) /
                                            eval_norm(H, xi));
                cs_slack = std::min(cs_slack,
                                    eval_norm(H, xi) * dual_norm(H, x) - std::abs(dot(xi, x)));
            }
            pass = pass && bid <= 1e-6 && euler <= 1e-8 && cs_slack >= -1e-10;
            detail += std::string(names[k]) + " bidual " + fmt(bid) + " euler " + fmt(euler) +
                      " cs " + fmt(cs_slack) + "; ";
        }
        report("1 finsler kernel", pass, detail);
    }

    const GeomConfig geoms[] = {
        {"eu/1/full", eu, one, full},   {"eu/1/half", eu, one, half},
        {"eu/xy/quad", eu, xy, quad},   {"el/1/quad", el, one, quad},
        {"el/xy/quad", el, xy, quad},   {"sq/1/full", sq, one, full},
    };

    // ---- 2. Perimeter-volume relation -------------------------------------
    {
        bool pass = true;
        std::string detail;
        for (const GeomConfig& g : geoms) {
            const PolygonalSet B = wulff_sector_polygon(g.H, g.cone, 1.0, 4096);
            const double P = weighted_perimeter(g.H, g.w, B, g.cone);
            const double V = weighted_volume(g.w, B, g.cone);
            const double D = 2.0 + g.w.lambda;
            const double rel = std::abs(P - D * V) / P;
            pass = pass && rel <= 1e-3;
            detail += std::string(g.name) + " " + fmt(rel) + "; ";
        }
        report("2 perimeter-volume", pass, detail);
    }

    // ---- 3. Isoperimetric inequality ---------------------------------------
    {
        bool pass = true;
        std::string detail;
        for (const GeomConfig& g : geoms) {
            const double c = optimal_constant(g.H, g.w, g.cone, 4096);
            const PolygonalSet B = wulff_sector_polygon(g.H, g.cone, 1.0, 4096);
            const double wulff_margin = isoperimetric_quotient(g.H, g.w, g.cone, B) - c;
            double min_margin = wulff_margin;
            for (int s = 0; s < 50; ++s) {
                const PolygonalSet E =
                    random_star_set(g.H, g.cone, 42 + static_cast<std::uint64_t>(s), 512);
                min_margin =
                    std::min(min_margin, isoperimetric_quotient(g.H, g.w, g.cone, E) - c);
            }
            pass = pass && min_margin >= -1e-6 * c && std::abs(wulff_margin) <= 1e-3 * c;
            detail += std::string(g.name) + " min " + fmt(min_margin / c) + " B " +
                      fmt(wulff_margin / c) + "; ";
        }
        report("3 isoperimetric inequality", pass, detail);
    }

    // ---- shared solves ------------------------------------------------------
    SourceSpec f1 = make_constant_source(1.0);
    SourceSpec f_b15 = f1;
    f_b15.phi_s = {0.0, 1.0};
    f_b15.phi_v = {1.0 / 6.0, 1.0 / 6.0}; // upper bound Dp/(D-p) phi = 1 exactly
    SourceSpec f_b_weighted = f1;
    f_b_weighted.phi_s = {0.0, 1.0};
    f_b_weighted.phi_v = {0.25, 0.25}; // D = 4, p = 2: Dp/(D-p) = 4

    std::vector<SolveCase> runs;
    runs.push_back({"torsion", make_problem(2.0, eu, one, full, 1.0, f1), 0.01, exact_torsion});
    runs.push_back({"p3", make_problem(3.0, eu, one, full, 1.0, f1), 0.01, exact_p3});
    runs.push_back({"ellipse", make_problem(2.0, el, one, full, 1.0, f1), 0.01, exact_ellipse});
    runs.push_back({"p1.5-condb", make_problem(1.5, eu, one, full, 1.0, f_b15, true), 0.01,
                    exact_p15});
    runs.push_back({"weighted-D4",
                    make_problem(2.0, eu, xy, quad, 1.0, f_b_weighted, true), 0.01,
                    exact_weighted});

    for (SolveCase& c : runs) {
        c.mesh = generate_mesh(c.prob.cone, c.prob.H, c.prob.R, c.h);
        c.sol = solve(c.prob, c.mesh);
        c.table = distribution_table(c.prob, c.mesh, c.sol, 32);
        c.constant = optimal_constant(c.prob.H, c.prob.w, c.prob.cone, 4096);
    }

    // ---- 4. Solver accuracy -------------------------------------------------
    {
        // torsion at the stated h = 0.02, plus the finer acceptance solves
        SolveCase pinned{"torsion-h02", make_problem(2.0, eu, one, full, 1.0, f1), 0.02,
                         exact_torsion};
        pinned.mesh = generate_mesh(full, eu, 1.0, 0.02);
        pinned.sol = solve(pinned.prob, pinned.mesh);
        const double e_torsion = linf_error(pinned);
        const double e_p3 = linf_error(runs[1]);
        const double e_el = linf_error(runs[2]);
        const double div_err = ellipse_ansatz_divergence_error(el);
        const double ode_err = p3_ode_residual();
        const bool pass = e_torsion <= 5e-3 && std::abs(pinned.sol.max_value - 0.25) <= 5e-3 &&
                          e_p3 <= 1e-2 && e_el <= 1e-2 && div_err <= 1e-4 && ode_err <= 1e-4;
        report("4 solver accuracy", pass,
               "torsion(h=0.02) " + fmt(e_torsion) + " M " + fmt(pinned.sol.max_value) + " p3 " +
                   fmt(e_p3) + " ellipse " + fmt(e_el) + " oracle(div " + fmt(div_err) + ", ode " +
                   fmt(ode_err) + ")");
    }

    // ---- 5. Pohozaev identity -----------------------------------------------
    {
        bool pass = true;
        std::string detail;
        for (const SolveCase& c : runs) {
            const double res = pohozaev_residual(c.prob, c.mesh, c.sol);
            pass = pass && res <= 3e-2;
            detail += std::string(c.name) + " " + fmt(res) + "; ";
        }
        const PohozaevTerms t = pohozaev_terms(runs[0].prob, runs[0].mesh, runs[0].sol);
        const bool analytic = std::abs(t.bulk - kPi / 4.0) <= 1e-2 * (kPi / 4.0) &&
                              std::abs(t.boundary - kPi / 4.0) <= 1e-2 * (kPi / 4.0);
        pass = pass && analytic;
        detail += "torsion pi/4: bulk " + fmt(t.bulk) + " boundary " + fmt(t.boundary);
        report("5 pohozaev identity", pass, detail);
    }

    // ---- 6. Level equality chain on every level --------------------------------
    {
        bool pass = true;
        std::string detail;
        for (const SolveCase& c : runs) {
            int usable = 0;
            double holder_abs = 0.0;
            const double D = c.prob.effective_dimension();
            for (const LevelRecord& r : c.table.levels) {
                if (!r.usable) continue;
                ++usable;
                const double lhs = std::pow(r.source, 1.0 / c.prob.p) *
                                   std::pow(r.surf_w_over_grad, (c.prob.p - 1.0) / c.prob.p);
                const double rhs = c.constant * std::pow(r.mu, (D - 1.0) / D);
                holder_abs = std::max(holder_abs, std::abs(lhs - rhs) / rhs);
            }
            const double gg = gauss_green_worst(c.table);
            const double qw = quotient_worst(c.table, c.constant);
            const double cv = grad_cv_max(c.table);
            const bool ok =
                usable == 32 && gg <= 2e-2 && holder_abs <= 2e-2 && qw <= 2e-2 && cv <= 3e-2;
            pass = pass && ok;
            detail += std::string(c.name) + "(gg " + fmt(gg) + ", hold " + fmt(holder_abs) +
                      ", q " + fmt(qw) + ", cv " + fmt(cv) + "); ";
        }
        report("6 level equality chain", pass, detail);
    }

    // ---- 7. Distribution-function monotonicities ------------------------------
    {
        bool pass = true;
        std::string detail;
        for (const SolveCase& c : runs) {
            const double kinc = check_K_monotone(c.table);
            const double slack = mu_derivative_check(c.table);
            pass = pass && kinc <= 2e-2 && slack >= -2e-2;
            detail += std::string(c.name) + "(K " + fmt(kinc) + ", mu " + fmt(slack) + "); ";
        }
        report("7 K and mu monotonicity", pass, detail);
    }

    // ---- 8. Symmetry at mesh scale --------------------------------------------
    {
        bool pass = true;
        std::string detail;
        for (const SolveCase& c : runs) {
            const RadialFit fit = radial_fit(c.prob, c.mesh, c.sol, c.table);
            const LinealityDecomposition lin = lineality_decomposition(c.prob.cone);
            bool ok = fit.max_deviation <= 1e-2 * c.sol.max_value &&
                      fit.nesting_max_slack <= 2.0 * c.mesh.h;
            if (lin.k == 0) ok = ok && fit.center_vertex_distance <= 2.0 * c.mesh.h;
            pass = pass && ok;
            detail += std::string(c.name) + "(dev " + fmt(fit.max_deviation / c.sol.max_value) +
                      "M, nest " + fmt(fit.nesting_max_slack) +
                      (lin.k == 0 ? ", vertex " + fmt(fit.center_vertex_distance) : "") + "); ";
        }
        report("8 wulff-radial symmetry", pass, detail);
    }

    // ---- 9. Maximum principle ---------------------------------------------------
    {
        bool pass = true;
        std::string detail;
        for (const SolveCase& c : runs) {
            const double m = min_u(c);
            pass = pass && m >= -1e-10;
            detail += std::string(c.name) + " " + fmt(m) + "; ";
        }
        report("9 maximum principle", pass, detail);
    }

    // ---- 10. Gradient correctness -------------------------------------------------
    {
        const Mesh m = generate_mesh(full, eu, 1.0, 0.1);
        Rng rng(99);
        double worst = 0.0;
        for (int state = 0; state < 20; ++state) {
            const SourceSpec f = state % 2 == 0 ? f1 : make_power_source(2.0);
            const ProblemSpec prob = make_problem(state % 3 == 0 ? 3.0 : 2.0, eu, one, full, 1.0, f);
            std::vector<double> u(m.vertices.size(), 0.0);
            for (std::size_t v = 0; v < u.size(); ++v)
                if (!m.vertex_on_gamma0[v]) u[v] = 0.2 * rng.next_double();
            const std::vector<double> g = energy_gradient(prob, m, u, 0.1);
            double err2 = 0.0, ref2 = 0.0;
            const double d = 1e-6;
            for (std::size_t v = 0; v < u.size(); ++v) {
                if (m.vertex_on_gamma0[v]) continue;
                std::vector<double> up = u, um = u;
                up[v] += d;
                um[v] -= d;
                const double fd = (energy(prob, m, up, 0.1) - energy(prob, m, um, 0.1)) / (2 * d);
                err2 += (fd - g[v]) * (fd - g[v]);
                ref2 += fd * fd;
            }
            worst = std::max(worst, std::sqrt(err2 / ref2));
        }
        report("10 gradient vs finite differences", worst <= 1e-5, "rel err " + fmt(worst));
    }

    std::printf("%s (%d criterion failures)\n", g_failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
                g_failures);
    return g_failures == 0 ? 0 : 1;
}
