#include "wulff/solver.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <functional>
#include <string>

#include "wulff/errors.hpp"
#include "wulff/parallel.hpp"
#include "wulff/quadrature.hpp"

namespace wulff {

namespace {

// Per-triangle assembly data, fixed for a given mesh and weight.
struct Assembly {
    struct Tri {
        int v[3];
        Vec2 grad_phi[3];
        double weight_integral; // int_T w
    };
    std::vector<Tri> tris;
    std::vector<int> free_index; // vertex -> free dof id, -1 on Gamma0
    std::vector<int> free_verts; // free dof id -> vertex
};

Assembly build_assembly(const ProblemSpec& problem, const Mesh& mesh) {
    Assembly a;
    a.tris.resize(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        const Vec2 A = mesh.vertices[static_cast<std::size_t>(tri[0])];
        const Vec2 B = mesh.vertices[static_cast<std::size_t>(tri[1])];
        const Vec2 C = mesh.vertices[static_cast<std::size_t>(tri[2])];
        Assembly::Tri& at = a.tris[t];
        at.v[0] = tri[0];
        at.v[1] = tri[1];
        at.v[2] = tri[2];
        const double area2 = cross(B - A, C - A);
        at.grad_phi[0] = perp_left(C - B) / area2;
        at.grad_phi[1] = perp_left(A - C) / area2;
        at.grad_phi[2] = perp_left(B - A) / area2;
        at.weight_integral =
            integrate_triangle(A, B, C, [&](Vec2 x) { return weight_eval(problem.w, x); });
    }
    a.free_index.assign(mesh.vertices.size(), -1);
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
        if (!mesh.vertex_on_gamma0[v]) {
            a.free_index[v] = static_cast<int>(a.free_verts.size());
            a.free_verts.push_back(static_cast<int>(v));
        }
    }
    return a;
}

double psi_eps(double t, double p, double eps) {
    if (eps == 0.0) return std::pow(t, p) / p;
    return (std::pow(eps * eps + t * t, 0.5 * p) - std::pow(eps, p)) / p;
}

double psi_eps_prime(double t, double p, double eps) {
    if (t == 0.0) return 0.0;
    if (p == 2.0) return t; // (eps^2 + t^2)^0 == 1
    return t * std::pow(eps * eps + t * t, 0.5 * p - 1.0);
}

Vec2 p1_gradient(const Assembly::Tri& at, const std::vector<double>& u) {
    return u[static_cast<std::size_t>(at.v[0])] * at.grad_phi[0] +
           u[static_cast<std::size_t>(at.v[1])] * at.grad_phi[1] +
           u[static_cast<std::size_t>(at.v[2])] * at.grad_phi[2];
}

double mean_primitive(const SourceSpec& f, double u0, double u1, double u2) {
    return (source_primitive(f, 0.5 * (u0 + u1)) + source_primitive(f, 0.5 * (u1 + u2)) +
            source_primitive(f, 0.5 * (u2 + u0))) / 3.0;
}

// Load vector of the Picard-frozen source: l_i = sum_T W_T (f(m_ij)+f(m_ik))/6.
std::vector<double> frozen_load(const ProblemSpec& problem, const Assembly& a,
                                const std::vector<double>& u_frozen) {
    std::vector<double> load(a.free_verts.size(), 0.0);
    for (const auto& at : a.tris) {
        const double u0 = u_frozen[static_cast<std::size_t>(at.v[0])];
        const double u1 = u_frozen[static_cast<std::size_t>(at.v[1])];
        const double u2 = u_frozen[static_cast<std::size_t>(at.v[2])];
        const double f01 = source_eval(problem.f, 0.5 * (u0 + u1));
        const double f12 = source_eval(problem.f, 0.5 * (u1 + u2));
        const double f20 = source_eval(problem.f, 0.5 * (u2 + u0));
        const double c = at.weight_integral / 6.0;
        const double contrib[3] = {c * (f01 + f20), c * (f01 + f12), c * (f12 + f20)};
        for (int k = 0; k < 3; ++k) {
            const int fi = a.free_index[static_cast<std::size_t>(at.v[k])];
            if (fi >= 0) load[static_cast<std::size_t>(fi)] += contrib[k];
        }
    }
    return load;
}

// Inner objective: Phi(x) = sum_T psi_eps(H(grad u)) W_T - <load, x>,
// over free dofs x (u is the scattered full field). Assembly is
// data-parallel over fixed triangle chunks; the chunk partials are merged
// in chunk order, so the result is independent of the thread schedule.
class InnerProblem {
public:
    InnerProblem(const ProblemSpec& problem, const Assembly& a, std::vector<double> load,
                 double eps)
        : problem_(problem), a_(a), load_(std::move(load)), eps_(eps) {
        const std::size_t chunk_size = 8192;
        n_chunks_ = (a.tris.size() + chunk_size - 1) / chunk_size;
        const unsigned workers = std::min<std::size_t>(max_threads(), n_chunks_);
        use_threads_ = workers > 1 && a.tris.size() > 2 * chunk_size;
        chunks_.reserve(n_chunks_);
        for (std::size_t c = 0; c < n_chunks_; ++c)
            chunks_.push_back({c * chunk_size, std::min(a.tris.size(), (c + 1) * chunk_size)});
        chunk_energy_.assign(n_chunks_, 0.0);
        if (use_threads_) chunk_grad_.assign(n_chunks_, std::vector<double>());
    }

    void scatter(const std::vector<double>& x, std::vector<double>& u_full) const {
        for (std::size_t i = 0; i < a_.free_verts.size(); ++i)
            u_full[static_cast<std::size_t>(a_.free_verts[i])] = x[i];
    }

    double value(const std::vector<double>& x, std::vector<double>& u_scratch) const {
        scatter(x, u_scratch);
        run_chunks([&](std::size_t c) {
            double e = 0.0;
            for (std::size_t t = chunks_[c].first; t < chunks_[c].second; ++t) {
                const auto& at = a_.tris[t];
                const Vec2 g = p1_gradient(at, u_scratch);
                e += psi_eps(eval_norm(problem_.H, g), problem_.p, eps_) * at.weight_integral;
            }
            chunk_energy_[c] = e;
        });
        double e = 0.0;
        for (std::size_t c = 0; c < n_chunks_; ++c) e += chunk_energy_[c];
        for (std::size_t i = 0; i < x.size(); ++i) e -= load_[i] * x[i];
        return e;
    }

    // Returns the objective value; fills grad.
    double value_and_gradient(const std::vector<double>& x, std::vector<double>& grad,
                              std::vector<double>& u_scratch) const {
        scatter(x, u_scratch);
        const std::size_t n = grad.size();
        run_chunks([&](std::size_t c) {
            std::vector<double>* local = nullptr;
            if (use_threads_) {
                chunk_grad_[c].assign(n, 0.0);
                local = &chunk_grad_[c];
            } else {
                if (c == 0) std::fill(grad.begin(), grad.end(), 0.0);
                local = &grad;
            }
            double e = 0.0;
            for (std::size_t t = chunks_[c].first; t < chunks_[c].second; ++t) {
                const auto& at = a_.tris[t];
                const Vec2 g = p1_gradient(at, u_scratch);
                const double hg = eval_norm(problem_.H, g);
                e += psi_eps(hg, problem_.p, eps_) * at.weight_integral;
                if (hg == 0.0) continue;
                const double coeff = psi_eps_prime(hg, problem_.p, eps_) * at.weight_integral;
                const Vec2 dh = grad_norm(problem_.H, g);
                for (int k = 0; k < 3; ++k) {
                    const int fi = a_.free_index[static_cast<std::size_t>(at.v[k])];
                    if (fi >= 0)
                        (*local)[static_cast<std::size_t>(fi)] += coeff * dot(dh, at.grad_phi[k]);
                }
            }
            chunk_energy_[c] = e;
        });
        if (use_threads_) {
            parallel_for(n, [&](std::size_t i) {
                double s = 0.0;
                for (std::size_t c = 0; c < n_chunks_; ++c) s += chunk_grad_[c][i];
                grad[i] = s;
            });
        }
        double e = 0.0;
        for (std::size_t c = 0; c < n_chunks_; ++c) e += chunk_energy_[c];
        for (std::size_t i = 0; i < x.size(); ++i) {
            e -= load_[i] * x[i];
            grad[i] -= load_[i];
        }
        return e;
    }

private:
    void run_chunks(const std::function<void(std::size_t)>& body) const {
        if (use_threads_)
            parallel_for(n_chunks_, body);
        else
            for (std::size_t c = 0; c < n_chunks_; ++c) body(c);
    }

    const ProblemSpec& problem_;
    const Assembly& a_;
    std::vector<double> load_;
    double eps_;
    std::size_t n_chunks_ = 1;
    bool use_threads_ = false;
    std::vector<std::pair<std::size_t, std::size_t>> chunks_;
    mutable std::vector<double> chunk_energy_;
    mutable std::vector<std::vector<double>> chunk_grad_;
};

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Lumped diagonal of the regularized operator at the current iterate:
// D_i = sum_T W_T (eps^2 + H(grad u)^2)^{p/2 - 1} |grad phi_i|^2.
std::vector<double> precond_diagonal(const ProblemSpec& problem, const Assembly& a,
                                     const std::vector<double>& u_full, double eps) {
    std::vector<double> diag(a.free_verts.size(), 0.0);
    const double floor_eps = eps > 0.0 ? eps : 1e-8;
    for (const auto& at : a.tris) {
        const Vec2 g = p1_gradient(at, u_full);
        const double hg = eval_norm(problem.H, g);
        const double scale =
            std::pow(floor_eps * floor_eps + hg * hg, 0.5 * problem.p - 1.0) * at.weight_integral;
        for (int k = 0; k < 3; ++k) {
            const int fi = a.free_index[static_cast<std::size_t>(at.v[k])];
            if (fi >= 0) diag[static_cast<std::size_t>(fi)] += scale * norm2(at.grad_phi[k]);
        }
    }
    double dmax = 0.0;
    for (double v : diag) dmax = std::max(dmax, v);
    for (double& v : diag) v = std::max(v, 1e-12 * dmax);
    return diag;
}

struct LbfgsResult {
    double value = 0.0;
    double grad_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Limited-memory BFGS with Armijo backtracking and a diagonal initial
// inverse Hessian (the assembled second-derivative scale of the energy,
// which varies by orders of magnitude across the degenerate-gradient
// region for p != 2). Appends accepted energies to `history` (they
// decrease monotonically by the line-search guarantee).
LbfgsResult lbfgs_minimize(const InnerProblem& inner, std::vector<double>& x, double tol,
                           int max_iter, int memory, std::size_t n_vertices,
                           const std::vector<double>& precond, std::vector<double>* history) {
    const std::size_t n = x.size();
    std::vector<double> u_scratch(n_vertices, 0.0);
    std::vector<double> g(n), g_new(n), d(n), x_new(n);
    std::deque<std::pair<std::vector<double>, std::vector<double>>> pairs; // (s, y)
    std::deque<double> rho;

    double fx = inner.value_and_gradient(x, g, u_scratch);
    LbfgsResult res;
    for (int it = 0; it < max_iter; ++it) {
        res.grad_norm = max_abs(g);
        if (res.grad_norm <= tol * (1.0 + std::abs(fx))) {
            res.converged = true;
            break;
        }
        // Two-loop recursion.
        d = g;
        std::vector<double> alpha(pairs.size());
        for (std::size_t k = pairs.size(); k-- > 0;) {
            double s_dot_d = 0.0;
            for (std::size_t i = 0; i < n; ++i) s_dot_d += pairs[k].first[i] * d[i];
            alpha[k] = rho[k] * s_dot_d;
            for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * pairs[k].second[i];
        }
        if (!pairs.empty()) {
            double sy = 0.0, yhy = 0.0;
            const auto& last = pairs.back();
            for (std::size_t i = 0; i < n; ++i) {
                sy += last.first[i] * last.second[i];
                yhy += last.second[i] * last.second[i] / precond[i];
            }
            const double gamma = sy / yhy;
            for (std::size_t i = 0; i < n; ++i) d[i] *= gamma / precond[i];
        } else {
            for (std::size_t i = 0; i < n; ++i) d[i] /= precond[i];
        }
        for (std::size_t k = 0; k < pairs.size(); ++k) {
            double y_dot_d = 0.0;
            for (std::size_t i = 0; i < n; ++i) y_dot_d += pairs[k].second[i] * d[i];
            const double beta = rho[k] * y_dot_d;
            for (std::size_t i = 0; i < n; ++i) d[i] += (alpha[k] - beta) * pairs[k].first[i];
        }
        for (double& v : d) v = -v;

        double gd = 0.0;
        for (std::size_t i = 0; i < n; ++i) gd += g[i] * d[i];
        if (gd >= 0.0) { // not a descent direction: restart from steepest descent
            pairs.clear();
            rho.clear();
            for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
            gd = 0.0;
            for (std::size_t i = 0; i < n; ++i) gd += g[i] * d[i];
        }

        // Armijo backtracking.
        double step = 1.0;
        double f_new = fx;
        bool accepted = false;
        for (int bt = 0; bt < 60; ++bt) {
            for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
            f_new = inner.value(x_new, u_scratch);
            if (f_new <= fx + 1e-4 * step * gd) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        ++res.iterations;
        if (!accepted) break; // line search stalled at round-off scale

        inner.value_and_gradient(x_new, g_new, u_scratch);
        std::vector<double> s(n), y(n);
        double sy = 0.0, ss = 0.0, yy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
            sy += s[i] * y[i];
            ss += s[i] * s[i];
            yy += y[i] * y[i];
        }
        if (sy > 1e-12 * std::sqrt(ss * yy)) {
            pairs.emplace_back(std::move(s), std::move(y));
            rho.push_back(1.0 / sy);
            if (static_cast<int>(pairs.size()) > memory) {
                pairs.pop_front();
                rho.pop_front();
            }
        }
        x.swap(x_new);
        g.swap(g_new);
        fx = f_new;
        if (history) history->push_back(fx);
    }
    res.value = fx;
    if (!res.converged) res.grad_norm = max_abs(g);
    return res;
}

} // namespace

double energy(const ProblemSpec& problem, const Mesh& mesh, const std::vector<double>& u,
              double eps) {
    const Assembly a = build_assembly(problem, mesh);
    double e = 0.0;
    for (const auto& at : a.tris) {
        const Vec2 g = p1_gradient(at, u);
        const double u0 = u[static_cast<std::size_t>(at.v[0])];
        const double u1 = u[static_cast<std::size_t>(at.v[1])];
        const double u2 = u[static_cast<std::size_t>(at.v[2])];
        e += (psi_eps(eval_norm(problem.H, g), problem.p, eps) -
              mean_primitive(problem.f, u0, u1, u2)) * at.weight_integral;
    }
    return e;
}

std::vector<double> energy_gradient(const ProblemSpec& problem, const Mesh& mesh,
                                    const std::vector<double>& u, double eps) {
    const Assembly a = build_assembly(problem, mesh);
    std::vector<double> grad(mesh.vertices.size(), 0.0);
    for (const auto& at : a.tris) {
        const Vec2 g = p1_gradient(at, u);
        const double hg = eval_norm(problem.H, g);
        const double u0 = u[static_cast<std::size_t>(at.v[0])];
        const double u1 = u[static_cast<std::size_t>(at.v[1])];
        const double u2 = u[static_cast<std::size_t>(at.v[2])];
        const double f01 = source_eval(problem.f, 0.5 * (u0 + u1));
        const double f12 = source_eval(problem.f, 0.5 * (u1 + u2));
        const double f20 = source_eval(problem.f, 0.5 * (u2 + u0));
        const double coeff =
            hg > 0.0 ? psi_eps_prime(hg, problem.p, eps) * at.weight_integral : 0.0;
        const Vec2 dh = hg > 0.0 ? grad_norm(problem.H, g) : Vec2{};
        const double fsum[3] = {f01 + f20, f01 + f12, f12 + f20};
        for (int k = 0; k < 3; ++k) {
            grad[static_cast<std::size_t>(at.v[k])] +=
                coeff * dot(dh, at.grad_phi[k]) - at.weight_integral * fsum[k] / 6.0;
        }
    }
    for (std::size_t v = 0; v < mesh.vertices.size(); ++v)
        if (mesh.vertex_on_gamma0[v]) grad[v] = 0.0;
    return grad;
}

Solution solve(const ProblemSpec& problem, const Mesh& mesh, const SolverConfig& config) {
    const Assembly a = build_assembly(problem, mesh);
    Solution sol;
    sol.u.assign(mesh.vertices.size(), 0.0);

    std::vector<double> x(a.free_verts.size(), 0.0);
    std::vector<double> schedule = config.eps_schedule;
    if (schedule.empty()) schedule = {0.0};
    // For p = 2 the regularization cancels exactly; one stage suffices.
    if (problem.p == 2.0) schedule = {schedule.back()};

    int budget = config.max_iter;
    double last_grad_norm = 0.0;
    bool converged = false;
    const bool source_depends_on_u = problem.f.kind != SourceKind::Constant;

    for (std::size_t stage = 0; stage < schedule.size(); ++stage) {
        const bool final_stage = stage + 1 == schedule.size();
        const double stage_tol = final_stage ? config.tol : std::max(config.tol, 1e-6);
        converged = false;
        for (int outer = 0; outer < config.max_outer; ++outer) {
            InnerProblem inner(problem, a, frozen_load(problem, a, sol.u), schedule[stage]);
            std::vector<double> x_prev = x;
            const std::vector<double> precond =
                precond_diagonal(problem, a, sol.u, schedule[stage]);
            const LbfgsResult r = lbfgs_minimize(inner, x, stage_tol, budget,
                                                 config.lbfgs_memory, mesh.vertices.size(),
                                                 precond, &sol.energy_history);
            budget -= r.iterations;
            sol.iterations += r.iterations;
            inner.scatter(x, sol.u);
            last_grad_norm = r.grad_norm;
            if (budget <= 0 && !r.converged)
                throw SolverError("solve: iteration budget exhausted (grad norm " +
                                  std::to_string(r.grad_norm) + " after " +
                                  std::to_string(sol.iterations) + " iterations)");
            double outer_change = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                outer_change = std::max(outer_change, std::abs(x[i] - x_prev[i]));
            outer_change /= 1.0 + max_abs(x);
            if (r.converged && (!source_depends_on_u || outer_change <= config.tol || outer > 0)) {
                // For u-dependent sources require one extra confirming pass.
                if (!source_depends_on_u || outer_change <= config.tol) {
                    converged = true;
                    break;
                }
            }
        }
        if (!converged)
            throw SolverError("solve: Picard loop did not settle at eps = " +
                              std::to_string(schedule[stage]));
    }

    sol.final_eps = schedule.back();
    sol.converged = converged;
    sol.gradient_norm = last_grad_norm;
    sol.energy_value = energy(problem, mesh, sol.u, sol.final_eps);
    sol.gradients = triangle_gradients(mesh, sol.u);
    sol.max_value = *std::max_element(sol.u.begin(), sol.u.end());

    const LinealityDecomposition lin = lineality_decomposition(problem.cone);
    if (lin.k < 2) {
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const auto& tri = mesh.triangles[t];
            const Vec2 c = (mesh.vertices[static_cast<std::size_t>(tri[0])] +
                            mesh.vertices[static_cast<std::size_t>(tri[1])] +
                            mesh.vertices[static_cast<std::size_t>(tri[2])]) / 3.0;
            if (norm(c) < mesh.R / 8.0)
                sol.vertex_zone_max_gradient =
                    std::max(sol.vertex_zone_max_gradient, norm(sol.gradients[t]));
        }
    }
    return sol;
}

double weak_residual(const ProblemSpec& problem, const Mesh& mesh, const Solution& solution) {
    const Assembly a = build_assembly(problem, mesh);
    std::vector<double> flux(a.free_verts.size(), 0.0);
    const std::vector<double> load = frozen_load(problem, a, solution.u);
    for (const auto& at : a.tris) {
        const Vec2 g = p1_gradient(at, solution.u);
        const double hg = eval_norm(problem.H, g);
        if (hg == 0.0) continue;
        const double coeff = std::pow(hg, problem.p - 1.0) * at.weight_integral;
        const Vec2 dh = grad_norm(problem.H, g);
        for (int k = 0; k < 3; ++k) {
            const int fi = a.free_index[static_cast<std::size_t>(at.v[k])];
            if (fi >= 0) flux[static_cast<std::size_t>(fi)] += coeff * dot(dh, at.grad_phi[k]);
        }
    }
    double worst = 0.0, load_scale = 0.0;
    for (std::size_t i = 0; i < flux.size(); ++i) {
        worst = std::max(worst, std::abs(flux[i] - load[i]));
        load_scale = std::max(load_scale, std::abs(load[i]));
    }
    return load_scale > 0.0 ? worst / load_scale : worst;
}

} // namespace wulff
