#include "wulff/problem.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wulff/errors.hpp"

namespace wulff {

SourceSpec make_constant_source(double c0) {
    if (!(c0 >= 0.0)) throw ConfigError("constant source: c0 must be nonnegative");
    SourceSpec f;
    f.kind = SourceKind::Constant;
    f.c0 = c0;
    return f;
}

SourceSpec make_power_source(double q) {
    if (!(q >= 0.0)) throw ConfigError("power source: exponent must be nonnegative");
    SourceSpec f;
    f.kind = SourceKind::Power;
    f.q = q;
    return f;
}

SourceSpec make_step_source(double a, double b, double s) {
    if (!(a >= b) || !(b >= 0.0) || !(s > 0.0))
        throw ConfigError("step source: need a >= b >= 0 and jump location s > 0");
    SourceSpec f;
    f.kind = SourceKind::Step;
    f.a = a;
    f.b = b;
    f.s = s;
    return f;
}

double source_eval(const SourceSpec& f, double u) {
    switch (f.kind) {
    case SourceKind::Constant:
        return f.c0;
    case SourceKind::Power:
        return u <= 0.0 ? 0.0 : std::pow(u, f.q);
    case SourceKind::Step:
        return u < f.s ? f.a : f.b; // right limit at the jump
    }
    return 0.0;
}

double source_primitive(const SourceSpec& f, double u) {
    switch (f.kind) {
    case SourceKind::Constant:
        return f.c0 * u;
    case SourceKind::Power:
        return u <= 0.0 ? 0.0 : std::pow(u, f.q + 1.0) / (f.q + 1.0);
    case SourceKind::Step:
        return u < f.s ? f.a * u : f.a * f.s + f.b * (u - f.s);
    }
    return 0.0;
}

ProblemSpec make_problem(double p, NormSpec H, WeightSpec w, ConeSpec cone, double R,
                         SourceSpec f, bool condition_b_declared) {
    if (!(p > 1.0) || !std::isfinite(p)) throw ConfigError("problem: p must lie in (1, inf)");
    if (!(R > 0.0)) throw ConfigError("problem: R must be positive");
    validate_weight_cone(w, cone);
    ProblemSpec prob{p, std::move(H), std::move(w), cone, R, std::move(f), condition_b_declared};
    if (condition_b_declared && !validate_condition_b(prob, prob.effective_dimension()))
        throw ConfigError("problem: condition (b) certificate failed");
    return prob;
}

bool validate_condition_b(const ProblemSpec& problem, double D) {
    if (problem.p >= D)
        throw std::invalid_argument("validate_condition_b: requires p < D");
    const SourceSpec& f = problem.f;
    if (f.phi_s.size() < 2 || f.phi_s.size() != f.phi_v.size())
        throw std::invalid_argument("validate_condition_b: phi table with >= 2 nodes required");

    // phi must be tabulated on increasing nodes and be nonincreasing.
    for (std::size_t i = 0; i + 1 < f.phi_s.size(); ++i) {
        if (!(f.phi_s[i] < f.phi_s[i + 1])) return false;
        if (f.phi_v[i + 1] > f.phi_v[i] + 1e-12 * (1.0 + std::abs(f.phi_v[i]))) return false;
    }
    for (double v : f.phi_v)
        if (!(v >= 0.0)) return false;

    auto phi_at = [&f](double s) {
        if (s <= f.phi_s.front()) return f.phi_v.front();
        if (s >= f.phi_s.back()) return f.phi_v.back();
        auto it = std::upper_bound(f.phi_s.begin(), f.phi_s.end(), s);
        const std::size_t i = static_cast<std::size_t>(it - f.phi_s.begin());
        const double t = (s - f.phi_s[i - 1]) / (f.phi_s[i] - f.phi_s[i - 1]);
        return f.phi_v[i - 1] + t * (f.phi_v[i] - f.phi_v[i - 1]);
    };

    const double ratio = D * problem.p / (D - problem.p);
    const double lo = f.phi_s.front(), hi = f.phi_s.back();
    const int n = 256;
    for (int i = 0; i <= n; ++i) {
        const double s = lo + (hi - lo) * i / n;
        const double fv = source_eval(f, s);
        const double pv = phi_at(s);
        const double slack = 1e-12 * (1.0 + fv);
        if (fv < pv - slack) return false;
        if (fv > ratio * pv + slack) return false;
    }
    // Also check exactly at the tabulated nodes (covers step jumps there).
    for (std::size_t i = 0; i < f.phi_s.size(); ++i) {
        const double fv = source_eval(f, f.phi_s[i]);
        const double slack = 1e-12 * (1.0 + fv);
        if (fv < f.phi_v[i] - slack || fv > ratio * f.phi_v[i] + slack) return false;
    }
    return true;
}

} // namespace wulff
