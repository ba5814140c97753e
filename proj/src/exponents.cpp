#include "khess/exponents.hpp"

#include <cmath>
#include <limits>

namespace khess {

double q_star(int k, double sigma, int n) {
    if (k < 1 || n <= 2 * k) throw domain_error("q_star: require 1 <= k and n > 2k");
    return ((n + 2.0) * k + sigma * (k + 1.0)) / (n - 2.0 * k);
}

double q_jl(int k, double sigma, int n) {
    if (k < 1 || n <= 2 * k) throw domain_error("q_jl: require 1 <= k and n > 2k");
    if (n <= 2 * k + 8 + 4.0 * sigma / k) return std::numeric_limits<double>::infinity();
    const double kk = k;
    const double radicand = kk * (2 * kk + sigma) * ((kk + 1) * n - kk * (2 - sigma));
    if (radicand < 0) throw numeric_error("q_jl: negative radicand");
    const double root = 2 * std::sqrt(radicand);
    const double num = kk * (kk + 1) * n - kk * kk * (2 - sigma) + 2 * kk + sigma - root;
    const double den = kk * (kk + 1) * n - 2 * kk * kk * (kk + 3) - 2 * kk * sigma - root;
    return kk * num / den;
}

double delta_param(int k, double l_inf) {
    if (k < 1) throw domain_error("delta_param: require k >= 1");
    return -(2.0 * k + l_inf) / k;
}

double p2_rate(const ProblemParams& p, double l_inf) {
    p.validate();
    const double g = p.q / p.k * (p.n - 2.0 * p.k) - (p.n + l_inf);
    if (!(g > 0)) throw domain_error("p2_rate: gamma = (q/k)(n-2k) - (n+l_inf) is not positive");
    return g;
}

Mu12 mu12(int k, double q) {
    if (k < 1 || !(q > k)) throw domain_error("mu12: require k >= 1 and q > k");
    const double s = q / static_cast<double>(k);
    const double root = 2 * std::sqrt(s * s - s);
    Mu12 m;
    m.k = k;
    m.q = q;
    m.mu1 = 2 * s - 1 - root;
    m.mu2 = 2 * s - 1 + root;
    return m;
}

Mu12::Bounds Mu12::node_bounds(int n) const {
    // the interior point is a node iff x/y lies outside [mu1, mu2];
    // x/y = mu corresponds to l = (q(n-2k) - k(n+2mu)) / (k+mu)
    auto bound = [&](double mu) { return (q * (n - 2.0 * k) - k * (n + 2.0 * mu)) / (k + mu); };
    return {bound(mu2), bound(mu1)};
}

namespace {

std::array<std::array<double, 2>, 2> jacobian_at(const ProblemParams& p, double l, double a,
                                                 double b) {
    const double k = p.k;
    return {{{p.n + l - 2 * a - p.q * b, -p.q * a},
             {b / k, a / k + 2 * b - (p.n - 2.0 * k) / k}}};
}

void eigensystem(StationaryPoint& sp) {
    const auto& A = sp.jacobian;
    const double tr = A[0][0] + A[1][1];
    const double det = A[0][0] * A[1][1] - A[0][1] * A[1][0];
    const double disc = tr * tr - 4 * det;
    if (disc >= 0) {
        const double root = std::sqrt(disc);
        // order by real part, eig1 >= eig2
        sp.eig1 = std::complex<double>(0.5 * (tr + root), 0);
        sp.eig2 = std::complex<double>(0.5 * (tr - root), 0);
        auto vec = [&](double lam) -> std::array<double, 2> {
            // pick the better-scaled row of (A - lam I)
            const double r1x = A[0][0] - lam, r1y = A[0][1];
            const double r2x = A[1][0], r2y = A[1][1] - lam;
            double vx, vy;
            if (std::abs(r1x) + std::abs(r1y) >= std::abs(r2x) + std::abs(r2y)) {
                vx = -r1y;
                vy = r1x;
            } else {
                vx = -r2y;
                vy = r2x;
            }
            const double nrm = std::hypot(vx, vy);
            if (nrm == 0) return {1, 0};
            if (vx < 0 || (vx == 0 && vy < 0)) return {-vx / nrm, -vy / nrm};
            return {vx / nrm, vy / nrm};
        };
        sp.eigvec1 = vec(sp.eig1.real());
        sp.eigvec2 = vec(sp.eig2.real());
    } else {
        const double root = std::sqrt(-disc);
        sp.eig1 = std::complex<double>(0.5 * tr, 0.5 * root);
        sp.eig2 = std::complex<double>(0.5 * tr, -0.5 * root);
    }
}

PointKind classify_from_spectrum(const StationaryPoint& sp) {
    const double tr = sp.jacobian[0][0] + sp.jacobian[1][1];
    const double det =
        sp.jacobian[0][0] * sp.jacobian[1][1] - sp.jacobian[0][1] * sp.jacobian[1][0];
    const double disc = tr * tr - 4 * det;
    const double scale = std::abs(sp.jacobian[0][0]) + std::abs(sp.jacobian[0][1]) +
                         std::abs(sp.jacobian[1][0]) + std::abs(sp.jacobian[1][1]) + 1.0;
    if (std::abs(det) <= 1e-12 * scale * scale) return PointKind::saddle_node;
    if (det < 0) return PointKind::saddle;
    if (std::abs(disc) <= 1e-12 * scale * scale)
        return PointKind::degenerate_node;  // stable when tr < 0
    if (disc > 0) return tr < 0 ? PointKind::stable_node : PointKind::unstable_node;
    return tr < 0 ? PointKind::stable_focus : PointKind::unstable_focus;
}

}  // namespace

std::string to_string(PointKind k) {
    switch (k) {
        case PointKind::saddle: return "saddle";
        case PointKind::stable_node: return "stable node";
        case PointKind::unstable_node: return "unstable node";
        case PointKind::stable_focus: return "stable focus";
        case PointKind::unstable_focus: return "unstable focus";
        case PointKind::saddle_node: return "saddle-node";
        case PointKind::degenerate_node: return "degenerate node";
    }
    return "?";
}

std::string to_string(StationaryPoint::Label l) {
    switch (l) {
        case StationaryPoint::Label::P1: return "P1";
        case StationaryPoint::Label::P2: return "P2";
        case StationaryPoint::Label::P3: return "P3";
        case StationaryPoint::Label::P4: return "P4";
    }
    return "?";
}

std::vector<StationaryPoint> stationary_points(const ProblemParams& p, double l) {
    p.validate();
    const double k = p.k, n = p.n, q = p.q;
    const double merge_tol = 1e-12;
    const bool merge_34 = std::abs(l + 2 * k) <= merge_tol * (1 + std::abs(l));
    const bool merge_13 = std::abs(l + n) <= merge_tol * (1 + std::abs(l));

    std::vector<StationaryPoint> out;
    auto add = [&](StationaryPoint::Label lab, double x, double y) -> StationaryPoint& {
        StationaryPoint sp;
        sp.label = lab;
        sp.x = x;
        sp.y = y;
        sp.nu = n + l;
        sp.jacobian = jacobian_at(p, l, x, y);
        eigensystem(sp);
        sp.kind = classify_from_spectrum(sp);
        sp.in_closed_quadrant = x >= -merge_tol && y >= -merge_tol;
        out.push_back(sp);
        return out.back();
    };

    auto& p1 = add(StationaryPoint::Label::P1, 0.0, 0.0);
    add(StationaryPoint::Label::P2, 0.0, (n - 2 * k) / k);
    auto& p3 = add(StationaryPoint::Label::P3, n + l, 0.0);
    const double x4 = (q * (n - 2 * k) - k * (n + l)) / (q - k);
    const double y4 = (2 * k + l) / (q - k);
    auto& p4 = add(StationaryPoint::Label::P4, x4, y4);

    if (merge_34) {
        p3.kind = PointKind::saddle_node;
        p4.kind = PointKind::saddle_node;
        p3.coincident = p4.coincident = true;
    }
    if (merge_13) {
        p1.kind = PointKind::saddle_node;
        p3.kind = PointKind::saddle_node;
        p1.coincident = p3.coincident = true;
    }

    // interior point: resolve the node/focus split through mu_{1,2} so that
    // the label agrees with the advertised l_inf inequality exactly
    if (!merge_34 && p4.y != 0 && p4.kind != PointKind::saddle &&
        p4.kind != PointKind::saddle_node) {
        const auto b = mu12(p.k, p.q).node_bounds(p.n);
        const double disc_scale = 1e-12 * (1 + std::abs(l));
        if (std::abs(l - b.below) > disc_scale && std::abs(l - b.above) > disc_scale) {
            if (l < b.below || l > b.above) {
                const double tr = p4.jacobian[0][0] + p4.jacobian[1][1];
                p4.kind = tr < 0 ? PointKind::stable_node : PointKind::unstable_node;
            }
        }
    }
    return out;
}

}  // namespace khess
