// Omega-limit classification of Lotka-Volterra orbits with the predicted
// asymptotic constants, region membership, graph-slope checks, and decay
// fits.
#pragma once

#include <optional>
#include <string>

#include "khess/common.hpp"
#include "khess/transform.hpp"

namespace khess {

enum class Verdict { P2, P3plus_fast, P3plus_slow, P4plus, undetermined };

std::string to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::undetermined;
    double limit_x = 0, limit_y = 0;
    double delta = 0;

    // predicted constants; which are set depends on the verdict
    std::optional<double> c1, c2, c3, c4;
    std::optional<double> fitted_c;  // e^{gamma t} x (P2) or e^{delta t} y (fast P3+)

    std::optional<double> fitted_decay_exponent;  // power of -w (or of w' for fast P3+)
    double fit_residual = 0;
    std::string fit_variable;  // what the decay exponent refers to

    std::optional<double> first_G_minus_time;
    std::optional<double> first_W_minus_time;
    std::optional<double> slow_ty;  // terminal t*y(t) for slow decay
    double terminal_distance = 0;
    bool boundary_q_flag = false;  // q == q*(k, l0) within tolerance
    std::string reason;            // diagnostics when undetermined
};

struct RegionValues {
    double G = 0;
    double W = 0;
    double S = 0;
};

// G = x + (n-2k)(q+1)/(k+1) (k/(n-2k) y - 1); W = -(n-2k)/k + x/k + y;
// S = nu(t) - x - q y.
RegionValues region_values(double t, double x, double y, const LVField& field);

struct ClassifyOptions {
    double proximity_tol = 1e-4;   // sustained terminal distance
    double window_fraction = 0.1;  // trailing fraction of the t-span used for proximity
    double fit_r_lo = 1e2;         // decay fits measured on r in [fit_r_lo, fit_r_hi]
    double fit_r_hi = 1e4;         // (falls back to the trailing quarter if not covered)
    double slow_rel_tol = 0.1;     // acceptance for the t*y(t) -> k/(q-k) law
};

Classification classify_orbit(const Orbit& orb, const ProblemParams& p, const WeightSpec& wt,
                              const ClassifyOptions& opt = {});

struct SlopeReport {
    std::string which;  // which graph slope was checked
    double fitted = 0;
    double predicted = 0;
    double rel_dev = 0;
    // refined x(t) representation check for fast P3+ under the tail assumption
    std::optional<double> x_repr_fitted, x_repr_predicted, x_repr_rel_dev;
};

SlopeReport slope_checks(const Orbit& orb, const Classification& cls, const ProblemParams& p,
                         const WeightSpec& wt);

// Forward invariance of the G-negative region: once a sample has G <= 0 all
// later samples must have G < tol.
bool check_inward_invariance(const Orbit& orb, const ProblemParams& p, const WeightSpec& wt,
                             double tol = 1e-9);

// True iff no sample has G <= -slack (the orbit-never-enters-G_- criterion).
bool stays_in_G_plus(const Orbit& orb, const ProblemParams& p, const WeightSpec& wt,
                     double slack = 1e-9);

}  // namespace khess
