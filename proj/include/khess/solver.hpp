// Numerical integration: the radial IVP, direct Lotka-Volterra orbit
// propagation, singular-solution construction from the interior stationary
// point, the maximal-solution iteration, and lambda* bracketing.
#pragma once

#include <cstddef>
#include <optional>

#include "khess/common.hpp"
#include "khess/transform.hpp"
#include "khess/weights.hpp"

namespace khess {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double r_start = 1e-6;
    double t_min = -40;
    double t_max = 40;
    std::size_t max_steps = 4'000'000;
    std::size_t output_points = 2000;
    double singular_T = 30;        // how far before t=0 the singular orbit is seeded
    double singular_t_end = 10;    // forward end of the singular orbit
    bool compute_residual = true;  // fill stats.max_residual on solve_ivp output
    double blowup_threshold = 1e12;

    void validate() const {
        if (!(rel_tol > 0) || !(abs_tol >= 0))
            throw domain_error("integrator: tolerances must be positive");
        if (!(r_start > 0)) throw domain_error("integrator: r_start must be positive");
    }
};

// Regular solution of (r^{n-k}(w')^k)' = lambda c_{n,k}^{-1} r^{n-1} rho (-w)^q,
// w(0) = w0 < 0, w'(0) = 0, integrated in (w, Phi) with Phi = r^{n-k}(w')^k
// from a two-term series start at r_start. Output on a geometric r-grid.
RadialSolution solve_ivp(const ProblemParams& p, const WeightSpec& wt, double w0, double r_max,
                         const IntegratorConfig& cfg = {});

// Direct orbit propagation from init.t to t_end (backward if t_end < init.t;
// samples are always returned with t increasing). Interior orbits are
// integrated in (ln x, ln y); the coordinate axes are invariant and handled
// exactly. Finite-time blow-up truncates the orbit with a report.
Orbit solve_orbit(const LVField& field, const PhasePoint& init, double t_end,
                  const IntegratorConfig& cfg = {});

// Orbit seeded exactly at the interior stationary point of the r->0 limit
// system at t = -T; the non-autonomous drift is the only trigger for
// departure, so pure-power weights legitimately yield the constant orbit.
Orbit singular_orbit(const ProblemParams& p, const WeightSpec& wt, double T,
                     const IntegratorConfig& cfg = {});

struct SingularSolution {
    double lambda_tilde = 0;
    RadialSolution profile;  // w-profile at lambda = lambda_tilde
    Orbit orbit;
};

// lambda_tilde = c_{n,k} x(0) y(0)^k / rho(1) and the singular profile
// recovered through the inverse transform.
SingularSolution singular_solution(const ProblemParams& p, const WeightSpec& wt,
                                   const IntegratorConfig& cfg = {});

struct IterationResult {
    RadialSolution profile;  // w = u - 1 on the quadrature grid
    bool converged = false;
    int iterations = 0;
    double final_change = 0;
    double max_monotonicity_violation = 0;  // positive value = an iterate moved up
    double min_u = 0;
    std::string reason;  // set when not converged
};

// Picard iteration u_0 = 0, u_i from the nested quadrature form of the
// boundary problem on [0, 1]; converges (decreasingly) iff lambda is below
// the breakdown threshold.
IterationResult maximal_solution_iterate(const ProblemParams& p, const WeightSpec& wt,
                                         double tol = 1e-10, int max_iter = 400,
                                         double divergence_threshold = 1e8);

struct LambdaStarBracket {
    double lower = 0;
    double upper = 0;
    double analytic_lower = 0;
    enum class Status { bracketed, unbounded, lower_failed } status = Status::bracketed;
};

// Bisection on lambda with iteration convergence as the predicate. The
// initial bracket starts at the analytic lower bound
// binom(n,k) ((q-k)/q)^q (2k/(q-k))^k / max_{[0,1]} rho.
LambdaStarBracket estimate_lambda_star(const ProblemParams& p, const WeightSpec& wt,
                                       double rel_width = 1e-3, double iterate_tol = 1e-9,
                                       int max_iter = 600, double bracket_growth = 1048576.0);

// Analytic lower bound used to seed the bracket.
double lambda_star_lower_bound(const ProblemParams& p, const WeightSpec& wt);

}  // namespace khess
