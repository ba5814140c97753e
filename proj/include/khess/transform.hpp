// Milne-type change of variables between radial profiles and Lotka-Volterra
// orbits, the LV vector field, and the integral-form residual of the radial
// k-Hessian equation.
#pragma once

#include <vector>

#include "khess/common.hpp"
#include "khess/weights.hpp"

namespace khess {

struct PhasePoint {
    double t = 0;  // t = ln r
    double x = 0;
    double y = 0;
};

struct RadialSample {
    double r = 0;
    double w = 0;
    double wprime = 0;
};

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    double max_residual = 0;
};

struct RadialSolution {
    std::vector<RadialSample> samples;
    double w0 = 0;  // w at r = 0
    ProblemParams params;
    WeightSpec weight;
    IntegratorStats stats;
    bool truncated = false;       // did not reach the requested right endpoint
    std::string truncation_reason;
};

enum class OrbitProvenance { from_profile, direct_lv, singular_from_p4 };

struct OrbitSample {
    double t = 0;
    double x = 0;
    double y = 0;
};

struct Orbit {
    std::vector<OrbitSample> samples;
    OrbitProvenance provenance = OrbitProvenance::direct_lv;
    ProblemParams params;
    WeightSpec weight;
    bool end_truncated = false;    // forward end not reached (blow-up / breakdown)
    bool start_truncated = false;  // for backward runs: requested start not reached
    std::string truncation_reason;
};

// c_{n,k} = binom(n,k)/n as an exact rational.
Rational c_nk(int n, int k);

// (w, w', r) -> (t, x, y); requires w < 0, w' > 0, r > 0.
PhasePoint forward(double w_val, double w_deriv, double r, const ProblemParams& p,
                   const WeightSpec& wt);

struct InverseResult {
    double w = 0;
    double wprime = 0;  // w' = -w y / r
};

// (t, x, y) -> (w, w'); requires x > 0, y > 0.
InverseResult inverse(const PhasePoint& pt, const ProblemParams& p, const WeightSpec& wt);

// Non-autonomous LV field: x' = x(nu(t) - x - q y), y' = y(-(n-2k)/k + x/k + y).
struct LVField {
    ProblemParams params;
    WeightSpec weight;

    // nu(t) = n + R(e^t), clamped to the limits for |t| > 700 to avoid
    // exp overflow.
    double nu(double t) const;
};

std::pair<double, double> lv_rhs(double t, double x, double y, const LVField& field);

struct ResidualReport {
    double max_rel = 0;
    double l2_rel = 0;
    std::vector<double> residual;  // per sample, relative
};

// Residual of the integral identity
//   c_{n,k} r^{n-k} (w')^k = lambda int_0^r s^{n-1} rho(s) (-w)^q ds,
// evaluated with cubic Hermite reconstruction of w between samples. Avoids
// differentiating sampled data.
ResidualReport hessian_residual(const RadialSolution& sol, const ProblemParams& p,
                                const WeightSpec& wt);

// Maps every sample of a radial profile through the forward transform.
Orbit orbit_from_profile(const RadialSolution& sol, const ProblemParams& p, const WeightSpec& wt);

}  // namespace khess
