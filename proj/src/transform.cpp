#include "khess/transform.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "khess/numerics.hpp"

namespace khess {

Rational c_nk(int n, int k) {
    if (k < 1 || k > n) throw domain_error("c_nk: require 1 <= k <= n");
    if (n > 62) throw domain_error("c_nk: n too large for exact evaluation");
    long long b = 1;
    const int kk = std::min(k, n - k);
    for (int i = 1; i <= kk; ++i) b = b * (n - kk + i) / i;
    return Rational::reduced(b, n);
}

PhasePoint forward(double w_val, double w_deriv, double r, const ProblemParams& p,
                   const WeightSpec& wt) {
    if (!(r > 0)) throw domain_error("forward: r must be positive");
    if (!(w_val < 0) || !(w_deriv > 0))
        throw domain_error("forward: transform requires w < 0 and w' > 0");
    const double c = c_nk(p.n, p.k).value();
    PhasePoint pt;
    pt.t = std::log(r);
    pt.x = std::pow(r, p.k) * p.lambda * wt.eval_rho(r) * std::pow(-w_val, p.q) /
           (c * std::pow(w_deriv, p.k));
    pt.y = r * w_deriv / (-w_val);
    return pt;
}

InverseResult inverse(const PhasePoint& pt, const ProblemParams& p, const WeightSpec& wt) {
    if (!(pt.x > 0) || !(pt.y > 0)) throw domain_error("inverse: requires x > 0 and y > 0");
    const double r = std::exp(pt.t);
    const double c = c_nk(p.n, p.k).value();
    const double front = p.lambda / c * std::pow(r, 2.0 * p.k) * wt.eval_rho(r);
    InverseResult res;
    res.w = -std::pow(front, -1.0 / (p.q - p.k)) *
            std::pow(pt.x * std::pow(pt.y, p.k), 1.0 / (p.q - p.k));
    res.wprime = -res.w * pt.y / r;
    return res;
}

double LVField::nu(double t) const {
    if (t < -700) return params.n + weight.l0;
    if (t > 700) return params.n + weight.l_inf;
    return params.n + weight.eval_R(std::exp(t));
}

std::pair<double, double> lv_rhs(double t, double x, double y, const LVField& field) {
    const auto& p = field.params;
    const double dx = x * (field.nu(t) - x - p.q * y);
    const double dy = y * (-(p.n - 2.0 * p.k) / p.k + x / p.k + y);
    return {dx, dy};
}

namespace {

// -w reconstructed on [r0, r1] by cubic Hermite from endpoint data.
struct HermitePiece {
    double r0, r1, w0, w1, d0, d1;
    double operator()(double s) const { return num::hermite(s, r0, r1, w0, w1, d0, d1); }
};

}  // namespace

ResidualReport hessian_residual(const RadialSolution& sol, const ProblemParams& p,
                                const WeightSpec& wt) {
    const auto& s = sol.samples;
    if (s.size() < 5) throw input_error("hessian_residual: need at least 5 samples");
    for (std::size_t i = 1; i < s.size(); ++i)
        if (!(s[i].r > s[i - 1].r)) throw input_error("hessian_residual: r must be increasing");
    if (!(s.front().r > 0)) throw input_error("hessian_residual: r must be positive");

    const double c = c_nk(p.n, p.k).value();
    const double q = p.q;

    // Head integral over [0, r_1]. The local log-slope eps = r1 w'(r1)/w(r1)
    // separates the two admissible behaviours at the origin: regular profiles
    // (eps ~ 0) follow the series w(s) = w(r1) + (w'(r1) r1/beta)((s/r1)^beta - 1)
    // with beta = (l0+2k)/k, singular ones follow the power w(r1)(s/r1)^eps.
    // The substitution v = (s/r1)^pwr flattens the algebraic endpoint factor.
    const double r1 = s.front().r;
    const double beta = (wt.l0 + 2.0 * p.k) / p.k;
    const double eps_head = r1 * s.front().wprime / s.front().w;
    const bool singular_head = eps_head < -1e-3;
    const double pwr =
        p.n + wt.l0 + (singular_head ? q * eps_head : 0.0);
    if (!(pwr > 0))
        throw domain_error("hessian_residual: head integral diverges (n + l0 + q eps <= 0)");
    auto w_head = [&](double sr) {
        if (singular_head) return s.front().w * std::pow(sr / r1, eps_head);
        if (beta > 0)
            return s.front().w + s.front().wprime * r1 / beta * (std::pow(sr / r1, beta) - 1.0);
        return s.front().w;
    };
    auto integrand = [&](double sr, double wv) {
        return std::pow(sr, p.n - 1.0) * wt.eval_rho(sr) * std::pow(std::max(-wv, 0.0), q);
    };
    double head = 0;
    {
        const int panels = 16;
        for (int i = 0; i < panels; ++i) {
            const double va = static_cast<double>(i) / panels, vb = (i + 1.0) / panels;
            head += num::gauss5(
                [&](double v) {
                    const double sr = r1 * std::pow(v, 1.0 / pwr);
                    return integrand(sr, w_head(sr)) * std::pow(v, 1.0 / pwr - 1.0) * r1 / pwr;
                },
                va, vb);
        }
    }

    ResidualReport rep;
    rep.residual.resize(s.size());
    double acc = head;
    double l2 = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
        if (j > 0) {
            const HermitePiece piece{s[j - 1].r, s[j].r, s[j - 1].w, s[j].w, s[j - 1].wprime,
                                     s[j].wprime};
            acc += num::gauss5([&](double sr) { return integrand(sr, piece(sr)); }, s[j - 1].r,
                               s[j].r);
        }
        const double lhs = c * std::pow(s[j].r, p.n - static_cast<double>(p.k)) *
                           std::pow(s[j].wprime, p.k);
        const double rhs = p.lambda * acc;
        const double rel = std::abs(lhs - rhs) / std::max(std::abs(rhs), 1e-300);
        rep.residual[j] = rel;
        rep.max_rel = std::max(rep.max_rel, rel);
        l2 += rel * rel;
    }
    rep.l2_rel = std::sqrt(l2 / s.size());
    return rep;
}

Orbit orbit_from_profile(const RadialSolution& sol, const ProblemParams& p, const WeightSpec& wt) {
    Orbit orb;
    orb.provenance = OrbitProvenance::from_profile;
    orb.params = p;
    orb.weight = wt;
    orb.samples.reserve(sol.samples.size());
    for (const auto& sm : sol.samples) {
        if (!(sm.w < 0) || !(sm.wprime > 0)) {
            orb.end_truncated = true;
            std::ostringstream os;
            os << "chart breakdown at r=" << sm.r << " (w=" << sm.w << ", w'=" << sm.wprime << ")";
            orb.truncation_reason = os.str();
            break;
        }
        const PhasePoint pt = forward(sm.w, sm.wprime, sm.r, p, wt);
        orb.samples.push_back({pt.t, pt.x, pt.y});
    }
    if (sol.truncated) {
        orb.end_truncated = true;
        if (orb.truncation_reason.empty()) orb.truncation_reason = sol.truncation_reason;
    }
    return orb;
}

}  // namespace khess
