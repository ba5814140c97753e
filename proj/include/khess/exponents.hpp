// Critical exponents and stationary-point algebra of the limit
// Lotka-Volterra systems.
#pragma once

#include <array>
#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "khess/common.hpp"

namespace khess {

// Tso-type critical exponent q*(k, sigma) = ((n+2)k + sigma(k+1)) / (n-2k).
double q_star(int k, double sigma, int n);

// Joseph-Lundgren-type exponent; +infinity when 2k < n <= 2k + 8 + 4 sigma/k.
double q_jl(int k, double sigma, int n);

// delta = -(2k + l_inf)/k; sign separates fast/slow P3+ decay from P4+.
double delta_param(int k, double l_inf);

// gamma = (q/k)(n-2k) - (n + l_inf), the P2 x-decay rate; must be positive.
double p2_rate(const ProblemParams& p, double l_inf);

struct Mu12 {
    int k = 1;
    double q = 2;
    double mu1 = 0, mu2 = 0;

    struct Bounds {
        double below = 0, above = 0;  // node iff l_inf < below or l_inf > above
    };
    // interior-point node condition on l_inf for dimension n
    Bounds node_bounds(int n) const;
    bool is_node(int n, double l_inf) const {
        const auto b = node_bounds(n);
        return l_inf < b.below || l_inf > b.above;
    }
};

// mu_{1,2} = 2q/k - 1 -/+ 2 sqrt((q/k)^2 - q/k); the induced node condition
// on l_inf is exposed through Mu12::node_bounds.
Mu12 mu12(int k, double q);

enum class PointKind {
    saddle,
    stable_node,
    unstable_node,
    stable_focus,
    unstable_focus,
    saddle_node,
    degenerate_node,
};

std::string to_string(PointKind k);

struct StationaryPoint {
    enum class Label { P1, P2, P3, P4 } label;
    double x = 0, y = 0;
    double nu = 0;  // n + l used for this limit system
    std::array<std::array<double, 2>, 2> jacobian{};
    std::complex<double> eig1, eig2;
    std::optional<std::array<double, 2>> eigvec1, eigvec2;  // present for real spectra
    PointKind kind = PointKind::saddle;
    bool in_closed_quadrant = true;
    bool coincident = false;  // merged with another stationary point (saddle-node columns)
};

std::string to_string(StationaryPoint::Label l);

// Stationary points of the autonomous system with nu = n + l: P1(0,0),
// P2(0,(n-2k)/k), P3(n+l,0), P4 interior, each with its linearization and a
// classification. Saddle-node detection uses exact equality (tolerance 1e-12)
// on l+2k and l+n.
std::vector<StationaryPoint> stationary_points(const ProblemParams& p, double l);

}  // namespace khess
