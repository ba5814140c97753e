// Weight functions rho(r) for the k-Hessian source term, their logarithmic
// derivative R(r) = r rho'(r)/rho(r), and the structural assumptions the
// phase-plane machinery needs (limits l0, l_inf, tail rate, boundedness of
// K(r) = r^{-l0} rho(r)).
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "khess/common.hpp"

namespace khess {

enum class WeightKind { constant, power, rational, matukuma, example1, custom_from_r, tabulated };

std::string to_string(WeightKind k);

struct WeightSpec {
    WeightKind kind = WeightKind::constant;
    std::function<double(double)> rho;       // r > 0 -> rho(r) > 0
    std::function<double(double)> logderiv;  // r > 0 -> R(r) = r rho'(r)/rho(r)
    double l0 = 0;                           // limit of R at 0+
    double l_inf = 0;                        // limit of R at +inf
    std::optional<double> vartheta;          // tail rate: R(r) - l_inf = O(r^-vartheta)
    double K0 = 1;                           // limit of r^-l0 rho(r) at 0+
    double c_rho = 1;                        // limit of r^-l_inf rho(r) at +inf
    bool bounded_K = true;                   // K(r) <= K0 expected on (0, inf)
    std::string describe;                    // short human-readable tag

    double eval_rho(double r) const;  // validates r > 0, positivity, finiteness
    double eval_R(double r) const;
};

namespace weights {

WeightSpec constant(double c = 1.0);
// rho = c r^sigma
WeightSpec power(double sigma, double c = 1.0);
// rho = a r^beta / (atilde + r^gamma)
WeightSpec rational(double a, double atilde, double beta, double gamma);
// rho = r^(mu-2) (1 + r^2)^(-mu/2)
WeightSpec matukuma(double mu);
// the weight for which w = -(1+r^2)^(-(n-2k)/(2k)) solves S_k(D^2 w) = rho (-w)^q
// with q = k n/(n-2k): rho = binom(n,k) ((n-2k)/k)^k / (1+r^2)
WeightSpec example1(int n, int k);
// rho reconstructed from a prescribed logarithmic derivative:
// rho(r) = K0 r^l0 exp( int_0^r (R(s)-l0)/s ds )
WeightSpec from_R(std::function<double(double)> Rfun, double l0, double K0);
// log-linear interpolation through (r_i, rho_i); r strictly increasing, rho > 0
WeightSpec tabulated(std::vector<std::pair<double, double>> samples);

// q for which example1(n,k)'s closed form solves the equation
double example1_q(int n, int k);

}  // namespace weights

// Centered log-derivative estimate of R with relative step h in ln r.
double numeric_R(const std::function<double(double)>& rho, double r, double h = 1e-6);

// Richardson/Aitken-extrapolated limits of R over geometric grids
// r = 10^-2..10^-8 and r = 10^2..10^8. Throws estimation_error if the
// accelerated levels disagree by more than 1e-4.
std::pair<double, double> estimate_limits(const WeightSpec& w);

enum class AssumptionStatus { holds, fails, unchecked };

struct Witness {
    double r = 0;
    double value = 0;
};

struct AssumptionEntry {
    AssumptionStatus status = AssumptionStatus::unchecked;
    std::optional<Witness> witness;  // populated whenever status == fails
    std::string note;
};

struct AssumptionReport {
    AssumptionEntry rho1, rho2, rho3, rho4, rho5, rho6;
    bool rho2_case1 = false;  // l0 > R strictly and q >= q*(k, l0)
    bool rho2_case2 = false;  // l0 >= R and q > q*(k, l0)
    bool rho4_case1 = false;
    bool rho4_case2 = false;
    bool rho6_case1 = false;  // delta <= vartheta branch
    bool rho6_case2 = false;
    bool boundary_q_equals_qstar = false;
    double q_star_l0 = 0;
    std::optional<double> fitted_vartheta;
    double grid_rmin = 0, grid_rmax = 0;
    int grid_points = 0;

    // assumptions required by the asymptotic classification
    bool passes_for_classification() const {
        return rho1.status == AssumptionStatus::holds && rho2.status == AssumptionStatus::holds &&
               rho4.status == AssumptionStatus::holds && rho5.status == AssumptionStatus::holds;
    }
};

AssumptionReport check_assumptions(const WeightSpec& w, const ProblemParams& p,
                                   int grid_points = 2000, double grid_rmin = 1e-6,
                                   double grid_rmax = 1e6);

}  // namespace khess
