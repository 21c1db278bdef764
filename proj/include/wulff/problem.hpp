#pragma once

#include <vector>

#include "wulff/cone.hpp"
#include "wulff/norm.hpp"
#include "wulff/weight.hpp"

namespace wulff {

enum class SourceKind { Constant, Power, Step };

/// Nonnegative source nonlinearity f(u) with closed-form primitive F.
/// The step kind is discontinuous and nonincreasing (a >= b >= 0); its
/// value at the jump point is the right limit b.
struct SourceSpec {
    SourceKind kind = SourceKind::Constant;
    double c0 = 1.0;          // constant value
    double q = 1.0;           // power exponent, f(u) = u^q
    double a = 1.0, b = 0.0;  // step levels
    double s = 0.5;           // step location
    // Optional nonincreasing comparison function for condition (b),
    // tabulated at the nodes phi_s.
    std::vector<double> phi_s;
    std::vector<double> phi_v;
};

SourceSpec make_constant_source(double c0);
SourceSpec make_power_source(double q);
SourceSpec make_step_source(double a, double b, double s);

double source_eval(const SourceSpec& f, double u);
double source_primitive(const SourceSpec& f, double u); // F(s) = int_0^s f

/// The boundary value problem on cone n B_R:
///   -div( w H(grad u)^{p-1} grad_xi H(grad u) ) = f(u) w,
/// with u = 0 on Gamma0 and the conormal condition on Gamma1.
struct ProblemSpec {
    double p = 2.0;
    NormSpec H;
    WeightSpec w;
    ConeSpec cone;
    double R = 1.0;
    SourceSpec f;
    bool condition_b_declared = false;

    double effective_dimension() const { return 2.0 + w.lambda; } // D = N + lambda
};

ProblemSpec make_problem(double p, NormSpec H, WeightSpec w, ConeSpec cone, double R,
                         SourceSpec f, bool condition_b_declared = false);

/// Checks condition (b): p < D and phi <= f <= (D p / (D - p)) phi on a
/// value grid, with phi nonincreasing. The grid is the union of the phi
/// table nodes and a uniform 256-point refinement of their span.
/// Throws std::invalid_argument when p >= D or no phi table is present.
bool validate_condition_b(const ProblemSpec& problem, double D);

} // namespace wulff
