// Multiplicity machinery: the lambda(a) curve obtained by rescaling regular
// profiles against the singular solution, level-crossing counts, and
// regular/singular intersection numbers.
#pragma once

#include <vector>

#include "khess/common.hpp"
#include "khess/solver.hpp"

namespace khess {

struct BifurcationPoint {
    double a = 0;
    double lambda = 0;
};

struct BifurcationCurve {
    std::vector<BifurcationPoint> points;  // a strictly increasing
    double lambda_tilde = 0;
    ProblemParams params;
    double a_min = 0, a_max = 0;
    int count = 0;
};

class Bifurcation {
  public:
    Bifurcation(ProblemParams p, WeightSpec wt, IntegratorConfig cfg = {});

    double lambda_tilde() const { return lambda_tilde_; }

    // lambda(a) = lambda_tilde (-w(1, a))^{q-k}: the unique parameter value
    // for which the rescaled profile with center value -a satisfies the unit
    // boundary condition.
    double lambda_of_a(double a) const;

    // lambda(a) on a geometric grid; points are independent and evaluated by
    // `jobs` worker threads with order-preserving assembly.
    BifurcationCurve sweep(double a_min, double a_max, int count, int jobs = 1) const;

    // Number of roots of lambda(a) = lambda_query along the curve, each
    // bracketed sign change refined by bisection on a (relative width 1e-6).
    int count_solutions(const BifurcationCurve& curve, double lambda_query) const;

    const RadialSolution& singular_profile() const { return singular_.profile; }

  private:
    ProblemParams params_;
    WeightSpec weight_;
    IntegratorConfig cfg_;
    SingularSolution singular_;
    double lambda_tilde_ = 0;
};

// Sign changes of (singular - regular) on the overlap of the two sample
// ranges intersected with [r_lo, r_hi]; crossings are refined on the Hermite
// interpolants of both profiles.
int intersection_count(const RadialSolution& singular, const RadialSolution& regular, double r_lo,
                       double r_hi);

// (F_a w)(r) = w(r / a^gs) / a with gs = (q-k)/(2k+l0).
RadialSolution rescale_Fa(const RadialSolution& sol, double a, double l0);

}  // namespace khess
