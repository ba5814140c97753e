// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "khess/bifurcation.hpp"
#include "khess/classify.hpp"
#include "khess/exponents.hpp"
#include "khess/numerics.hpp"
#include "khess/solver.hpp"

using namespace khess;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond) {
            ok = false;
            detail << " [failed: " << what << "]";
        }
    }
    void note(const std::string& s) { detail << " " << s; }
};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

IntegratorConfig long_range_cfg() {
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-16;
    cfg.output_points = 4000;
    return cfg;
}

Orbit profile_orbit(const ProblemParams& p, const WeightSpec& w, double w0, double t_end) {
    const auto sol = solve_ivp(p, w, w0, std::exp(t_end), long_range_cfg());
    return orbit_from_profile(sol, p, w);
}

Orbit backward_p2_orbit(const ProblemParams& p, const WeightSpec& w, double t_end,
                        double eps = 1e-7) {
    const LVField field{p, w};
    const double g = p2_rate(p, w.l_inf);
    const double slope = -(p.n - 2.0 * p.k) / (p.k * p.k * g + p.k * (p.n - 2.0 * p.k));
    const double nrm = std::hypot(1.0, slope);
    const PhasePoint init{t_end, eps / nrm, (p.n - 2.0 * p.k) / p.k + eps * slope / nrm};
    return solve_orbit(field, init, t_end - 40.0, long_range_cfg());
}

RadialSolution closed_form_profile(const ProblemParams& p, const WeightSpec& wt, double amp,
                                   std::size_t count, double rlo, double rhi) {
    RadialSolution sol;
    sol.params = p;
    sol.weight = wt;
    sol.w0 = -amp;
    for (double r : num::log_grid(rlo, rhi, count))
        sol.samples.push_back(
            {r, -amp / std::sqrt(1 + r * r), amp * r * std::pow(1 + r * r, -1.5)});
    return sol;
}

const StationaryPoint& pt_of(const std::vector<StationaryPoint>& pts, StationaryPoint::Label l) {
    for (const auto& sp : pts)
        if (sp.label == l) return sp;
    throw std::logic_error("missing stationary point");
}

bool nodeish(PointKind k) {
    return k == PointKind::stable_node || k == PointKind::unstable_node ||
           k == PointKind::degenerate_node;
}

// ---------------------------------------------------------------------------

void criterion_1(Check& c) {
    const ProblemParams p{3, 1, 3.0, 1.0};
    const auto wt = weights::example1(3, 1);
    const auto sol = solve_ivp(p, wt, -1.0, 10.0);
    double max_err = std::abs(sol.w0 + 1.0);
    for (const auto& s : sol.samples)
        max_err = std::max(max_err, std::abs(s.w + 1.0 / std::sqrt(1 + s.r * s.r)));
    c.note("ivp max err " + fmt(max_err));
    c.expect(max_err < 1e-6, "profile matches -(1+r^2)^{-1/2} to 1e-6");

    const auto closed = closed_form_profile(p, wt, 1.0, 1000, 1e-3, 10.0);
    const double resid = hessian_residual(closed, p, wt).max_rel;
    c.note("closed-form residual " + fmt(resid));
    c.expect(resid < 1e-8, "closed-form residual < 1e-8");
}

void criterion_2(Check& c) {
    const ProblemParams p{3, 1, 5.0, 1.0};
    const auto wc = weights::constant(1.0);
    const double K = std::pow(3.0, 0.25);
    const auto sol = solve_ivp(p, wc, -K, 10.0);
    double max_err = 0;
    for (const auto& s : sol.samples)
        max_err = std::max(max_err, std::abs(s.w + K / std::sqrt(1 + s.r * s.r)));
    c.note("ivp max err " + fmt(max_err));
    c.expect(max_err < 1e-6, "profile matches the Bliss closed form to 1e-6");

    const auto orb = profile_orbit(p, wc, -K, 20.0);
    const auto cls = classify_orbit(orb, p, wc);
    c.note("verdict " + to_string(cls.verdict));
    c.expect(cls.verdict == Verdict::P2, "verdict P2");
    c.expect(cls.fitted_decay_exponent.has_value(), "decay fit available");
    if (cls.fitted_decay_exponent) {
        c.note("decay exp " + fmt(*cls.fitted_decay_exponent));
        c.expect(std::abs(*cls.fitted_decay_exponent + 1.0) < 0.01,
                 "decay exponent -1 within 1%");
    }
}

void criterion_3(Check& c) {
    c.expect(std::abs(q_star(1, 0, 3) - 5.0) < 1e-12, "q*(1,0,3) = 5");
    c.expect(std::abs(q_star(2, 2, 7) - 8.0) < 1e-12, "q*(2,2,7) = 8");
    for (int k : {1, 2, 3})
        c.expect(std::abs(q_star(k, -2.0 * k, 4 * k + 1) - k) < 1e-12, "q*(k,-2k,n) = k");
    c.note("q_jl(1,0,11) = " + fmt(q_jl(1, 0, 11)));
    c.expect(std::abs(q_jl(1, 0, 11) - 6.92198) < 1e-4, "q_jl(1,0,11) = 6.92198 +/- 1e-4");
    c.expect(std::isinf(q_jl(1, 0, 10)), "q_jl(1,0,10) = inf");
}

void criterion_4(Check& c) {
    const ProblemParams p{3, 1, 6.0, 1.0};
    const auto pts = stationary_points(p, 0.0);
    const auto& p4 = pt_of(pts, StationaryPoint::Label::P4);
    c.expect(std::abs(p4.x - 0.6) < 1e-14 && std::abs(p4.y - 0.4) < 1e-14, "P4 = (0.6, 0.4)");
    c.expect(p4.kind == PointKind::stable_focus, "P4 is a stable focus");
    c.expect(std::abs(p4.eig1.real() + 0.1) < 1e-12 && std::abs(p4.eig2.real() + 0.1) < 1e-12,
             "real part -0.1 +/- 1e-12");

    // five-column label scan at l in {-n-1, -n, midpoint, -2k, -2k+1}
    auto kinds = [&](double l) { return stationary_points(p, l); };
    {
        const auto v = kinds(-4.0);
        c.expect(nodeish(pt_of(v, StationaryPoint::Label::P1).kind), "col1: P1 node");
        c.expect(pt_of(v, StationaryPoint::Label::P2).kind == PointKind::saddle, "col1: P2 saddle");
        c.expect(pt_of(v, StationaryPoint::Label::P3).kind == PointKind::saddle &&
                     !pt_of(v, StationaryPoint::Label::P3).in_closed_quadrant,
                 "col1: P3 saddle outside quadrant");
        c.expect(pt_of(v, StationaryPoint::Label::P4).kind == PointKind::saddle &&
                     !pt_of(v, StationaryPoint::Label::P4).in_closed_quadrant,
                 "col1: P4 saddle outside quadrant");
    }
    {
        const auto v = kinds(-3.0);
        c.expect(pt_of(v, StationaryPoint::Label::P1).kind == PointKind::saddle_node &&
                     pt_of(v, StationaryPoint::Label::P3).kind == PointKind::saddle_node,
                 "col2: P1 = P3 saddle-node");
        c.expect(pt_of(v, StationaryPoint::Label::P2).kind == PointKind::saddle, "col2: P2 saddle");
    }
    {
        const auto v = kinds(-2.5);
        c.expect(pt_of(v, StationaryPoint::Label::P1).kind == PointKind::saddle, "col3: P1 saddle");
        c.expect(pt_of(v, StationaryPoint::Label::P2).kind == PointKind::saddle, "col3: P2 saddle");
        c.expect(nodeish(pt_of(v, StationaryPoint::Label::P3).kind), "col3: P3 node");
        c.expect(pt_of(v, StationaryPoint::Label::P4).kind == PointKind::saddle &&
                     !pt_of(v, StationaryPoint::Label::P4).in_closed_quadrant,
                 "col3: P4 saddle outside quadrant");
    }
    {
        const auto v = kinds(-2.0);
        c.expect(pt_of(v, StationaryPoint::Label::P3).kind == PointKind::saddle_node &&
                     pt_of(v, StationaryPoint::Label::P4).kind == PointKind::saddle_node,
                 "col4: P3 = P4 saddle-node");
        c.expect(pt_of(v, StationaryPoint::Label::P1).kind == PointKind::saddle &&
                     pt_of(v, StationaryPoint::Label::P2).kind == PointKind::saddle,
                 "col4: P1, P2 saddles");
    }
    {
        const auto v = kinds(-1.0);
        c.expect(pt_of(v, StationaryPoint::Label::P1).kind == PointKind::saddle &&
                     pt_of(v, StationaryPoint::Label::P2).kind == PointKind::saddle &&
                     pt_of(v, StationaryPoint::Label::P3).kind == PointKind::saddle,
                 "col5: P1, P2, P3 saddles");
        const auto& q4 = pt_of(v, StationaryPoint::Label::P4);
        c.expect(q4.in_closed_quadrant &&
                     (nodeish(q4.kind) || q4.kind == PointKind::stable_focus),
                 "col5: P4 node or focus in the quadrant");
    }
}

void criterion_5(Check& c) {
    // finite differences of a transformed constant-weight orbit vs the field
    const ProblemParams p{3, 1, 5.0, 1.0};
    const auto wc = weights::constant(1.0);
    RadialSolution prof;
    prof.params = p;
    prof.weight = wc;
    const double K = std::pow(3.0, 0.25);
    for (double t = -2.0; t <= 2.0 + 1e-12; t += 1e-3) {
        const double r = std::exp(t);
        prof.samples.push_back({r, -K / std::sqrt(1 + r * r), K * r * std::pow(1 + r * r, -1.5)});
    }
    const auto orb = orbit_from_profile(prof, p, wc);
    const LVField field{p, wc};
    double worst = 0;
    for (std::size_t i = 1; i + 1 < orb.samples.size(); ++i) {
        const double h = orb.samples[i + 1].t - orb.samples[i - 1].t;
        const double fdx = (orb.samples[i + 1].x - orb.samples[i - 1].x) / h;
        const double fdy = (orb.samples[i + 1].y - orb.samples[i - 1].y) / h;
        const auto [dx, dy] = lv_rhs(orb.samples[i].t, orb.samples[i].x, orb.samples[i].y, field);
        worst = std::max({worst, std::abs(fdx - dx), std::abs(fdy - dy)});
    }
    c.note("FD-vs-field max dev " + fmt(worst));
    c.expect(worst < 1e-5, "finite-difference derivative matches the field to 1e-5");

    // forward/inverse round trip
    const auto wt = weights::matukuma(2.0);
    const ProblemParams pr{5, 1, 4.0, 0.7};
    double worst_rt = 0;
    for (int i = 0; i < 100; ++i) {
        const double w = -0.01 - 0.03 * i;
        const double wp = 0.05 + 0.02 * i;
        const double r = std::exp(-3.0 + 0.06 * i);
        const auto fw = forward(w, wp, r, pr, wt);
        const auto iv = inverse(fw, pr, wt);
        worst_rt = std::max(worst_rt, std::abs(iv.w - w) / std::abs(w));
        worst_rt = std::max(worst_rt, std::abs(iv.wprime - wp) / wp);
    }
    c.note("round-trip rel dev " + fmt(worst_rt));
    c.expect(worst_rt < 1e-12, "forward/inverse round trip to 1e-12 relative");
}

void criterion_6(Check& c) {
    struct Instance {
        ProblemParams p;
        WeightSpec w;
        const char* name;
    };
    const Instance fleet[] = {
        {{3, 1, 3.0, 1.0}, weights::example1(3, 1), "closed-form"},
        {{3, 1, 5.0, 1.0}, weights::constant(1.0), "constant"},
        {{5, 1, 3.0, 1.0}, weights::rational(1, 1, 0, 3), "rational"},
    };
    IntegratorConfig cfg;
    for (const auto& inst : fleet) {
        const auto sol = solve_ivp(inst.p, inst.w, -1.0, 10.0, cfg);
        const auto orb = orbit_from_profile(sol, inst.p, inst.w);
        const double nu0 = inst.p.n + inst.w.l0;
        auto dist_at = [&](double t) {
            double best = 1e300, d = 0;
            for (const auto& s : orb.samples)
                if (std::abs(s.t - t) < best) {
                    best = std::abs(s.t - t);
                    d = std::hypot(s.x - nu0, s.y);
                }
            return d;
        };
        const double t_probe = std::log(cfg.r_start) + 5.0;
        const double d0 = dist_at(t_probe), d1 = dist_at(t_probe + 1.5),
                     d2 = dist_at(t_probe + 3.0);
        c.note(std::string(inst.name) + " d=" + fmt(d0));
        c.expect(d0 < 1e-3, std::string(inst.name) + ": start distance < 1e-3");
        c.expect(d0 < d1 && d1 < d2, std::string(inst.name) + ": monotone backwards");
    }
}

void criterion_7(Check& c) {
    const ProblemParams p{3, 1, 6.0, 1.0};
    const auto wc = weights::constant(1.0);
    const auto sing = singular_solution(p, wc);
    c.note("lambda_tilde " + fmt(sing.lambda_tilde));
    c.expect(std::abs(sing.lambda_tilde - 0.24) < 1e-10, "lambda_tilde = 0.24 +/- 1e-10");

    double w1 = 0, best = 1e300;
    for (const auto& s : sing.profile.samples)
        if (std::abs(s.r - 1.0) < best) {
            best = std::abs(s.r - 1.0);
            w1 = s.w;
        }
    c.note("w(1) " + fmt(w1));
    c.expect(std::abs(w1 + 1.0) < 1e-10, "w(1) = -1 +/- 1e-10");

    std::vector<double> lx, ly;
    for (const auto& s : sing.profile.samples)
        if (s.r >= 1e-8 && s.r <= 1e-5) {
            lx.push_back(std::log(s.r));
            ly.push_back(std::log(-s.w));
        }
    const auto fit = num::linear_fit(lx, ly);
    c.note("decay exp " + fmt(fit.slope));
    c.expect(std::abs(fit.slope + 0.4) < 0.004, "decay exponent -0.4 within 1%");

    const auto oA = singular_orbit(p, wc, 30.0);
    const auto oB = singular_orbit(p, wc, 60.0);
    double sup = 0;
    for (const auto& s : oA.samples) {
        if (s.t < -15.0) continue;
        double bd = 1e300, bx = 0, by = 0;
        for (const auto& s2 : oB.samples)
            if (std::abs(s2.t - s.t) < bd) {
                bd = std::abs(s2.t - s.t);
                bx = s2.x;
                by = s2.y;
            }
        if (bd < 1e-9) sup = std::max(sup, std::hypot(s.x - bx, s.y - by));
    }
    c.note("T-doubling sup " + fmt(sup));
    c.expect(sup < 1e-6, "T-doubling stability < 1e-6");
}

void criterion_8(Check& c) {
    const ProblemParams p{3, 1, 6.0, 1.0};
    const auto wc = weights::constant(1.0);
    Bifurcation bif(p, wc);
    ProblemParams pt = p;
    pt.lambda = bif.lambda_tilde();
    IntegratorConfig cfg = long_range_cfg();
    cfg.output_points = 6000;

    const auto U = solve_ivp(pt, wc, -1.0, 1e6, cfg);
    RadialSolution sing;
    sing.params = pt;
    sing.weight = wc;
    for (const auto& s : U.samples)
        sing.samples.push_back({s.r, -std::pow(s.r, -0.4), 0.4 * std::pow(s.r, -1.4)});
    const int z_inf = intersection_count(sing, U, 1e-6, 1e6);
    c.note("Z(0,1e6] = " + std::to_string(z_inf));
    c.expect(z_inf >= 5, "regular/singular intersections >= 5 on (0, 1e6]");

    int prev = -1;
    bool nondecreasing = true;
    std::ostringstream zs;
    for (double a : {10.0, 1e2, 1e3, 1e4}) {
        const auto reg = solve_ivp(pt, wc, -a, 1.0, cfg);
        const int z = intersection_count(bif.singular_profile(), reg, 1e-9, 1.0);
        zs << " " << z;
        if (z < prev) nondecreasing = false;
        prev = z;
    }
    c.note("Z_[0,1] along a:" + zs.str());
    c.expect(nondecreasing, "Z_[0,1] nondecreasing along a in {10,1e2,1e3,1e4}");
}

void criterion_9(Check& c) {
    const ProblemParams p{3, 1, 6.0, 1.0};
    const auto wc = weights::constant(1.0);
    Bifurcation bif(p, wc);
    const double la = bif.lambda_of_a(1e4);
    const double gap = std::abs(la - 0.24) / 0.24;
    c.note("lambda(1e4) = " + fmt(la) + " rel gap " + fmt(gap));
    c.expect(gap < 0.02, "lambda(a) -> 0.24 within 2% at a = 1e4");

    const auto curve = bif.sweep(1.0, 1e4, 48);
    const int count = bif.count_solutions(curve, 0.24);
    c.note("count_solutions(0.24) = " + std::to_string(count));
    c.expect(count >= 3, "count_solutions(curve, 0.24) >= 3");
}

void criterion_10(Check& c) {
    struct Member {
        const char* name;
        ProblemParams p;
        WeightSpec w;
        Orbit orb;
        Verdict expected;
        double rate;  // predicted decay rate for the fitted exponent
    };
    const ProblemParams pA{5, 1, 3.0, 1.0};
    const auto wA = weights::rational(1, 1, 0, 3);
    const ProblemParams pC{3, 1, 6.0, 1.0};
    const auto wC = weights::matukuma(2.0);
    const ProblemParams pE{5, 1, 5.0, 1.0};
    const auto wE = weights::rational(1, 1, 3, 1);

    // slow member: seeded on the centre-manifold crawl so the 1/t law has
    // matured by t = 40
    Orbit slow_orb;
    {
        const double t0 = 8.0;
        const double y0 = 1.0 / ((pC.q - pC.k) * t0);
        const double x0 = (pC.n - 2.0 * pC.k) - pC.q * y0;
        slow_orb = solve_orbit(LVField{pC, wC}, {t0, x0, y0}, 40.0, long_range_cfg());
    }

    std::vector<Member> fleet;
    fleet.push_back({"A fast(profile)", pA, wA, profile_orbit(pA, wA, -1.0, 25.0),
                     Verdict::P3plus_fast, -2.0});
    fleet.push_back(
        {"B P2(backward)", pA, wA, backward_p2_orbit(pA, wA, 40.0), Verdict::P2, -3.0});
    fleet.push_back(
        {"D P2(backward)", pC, wC, backward_p2_orbit(pC, wC, 40.0), Verdict::P2, -1.0});
    fleet.push_back({"G slow(direct)", pC, wC, slow_orb, Verdict::P3plus_slow, -0.2});
    fleet.push_back({"E P4(profile)", pE, wE, profile_orbit(pE, wE, -1.0, 25.0),
                     Verdict::P4plus, -1.0});
    fleet.push_back(
        {"F P2(backward)", pE, wE, backward_p2_orbit(pE, wE, 40.0), Verdict::P2, -3.0});

    bool delta_span_neg = false, delta_span_zero = false, delta_span_pos = false;
    for (auto& m : fleet) {
        const auto rep = check_assumptions(m.w, m.p);
        c.expect(rep.passes_for_classification(),
                 std::string(m.name) + ": assumptions hold");
        const auto cls = classify_orbit(m.orb, m.p, m.w);
        c.expect(cls.verdict == m.expected,
                 std::string(m.name) + ": verdict " + to_string(m.expected) + " (got " +
                     to_string(cls.verdict) + ")");

        // verdict P2 <=> the orbit never enters G_-
        const bool in_gplus = stays_in_G_plus(m.orb, m.p, m.w, 1e-9);
        c.expect((cls.verdict == Verdict::P2) == in_gplus,
                 std::string(m.name) + ": P2 iff orbit never enters G-");

        // delta gating
        const double dl = delta_param(m.p.k, m.w.l_inf);
        if (cls.verdict == Verdict::P3plus_fast || cls.verdict == Verdict::P3plus_slow)
            c.expect(dl >= -1e-12, std::string(m.name) + ": P3+ gated by delta >= 0");
        if (cls.verdict == Verdict::P4plus)
            c.expect(dl < 0, std::string(m.name) + ": P4+ gated by delta < 0");
        if (dl > 1e-9) delta_span_pos = true;
        if (dl < -1e-9) delta_span_neg = true;
        if (std::abs(dl) <= 1e-9) delta_span_zero = true;

        // decay fit within 5% of the predicted rate
        if (cls.fitted_decay_exponent) {
            const double dev = std::abs(*cls.fitted_decay_exponent - m.rate) / std::abs(m.rate);
            c.note(std::string(m.name) + " exp=" + fmt(*cls.fitted_decay_exponent));
            c.expect(dev < 0.05, std::string(m.name) + ": decay exponent within 5%");
        } else {
            c.expect(false, std::string(m.name) + ": decay fit available");
        }

        if (cls.verdict == Verdict::P3plus_slow) {
            c.expect(cls.slow_ty.has_value(), "slow member reports t*y");
            if (cls.slow_ty) {
                const double target = m.p.k / (m.p.q - m.p.k);
                c.note("t*y(40)=" + fmt(*cls.slow_ty));
                c.expect(std::abs(*cls.slow_ty - target) < 0.1 * target,
                         "slow member: t*y(40) within 10% of k/(q-k)");
            }
        }
    }
    c.expect(delta_span_neg && delta_span_zero && delta_span_pos,
             "fleet spans delta < 0, = 0, > 0");
    c.expect(fleet.size() >= 6, "fleet has >= 6 members");
}

void criterion_11(Check& c) {
    // P2 slope: assumption-passing instance with (n,k,q) = (3,1,3), l_inf = -2
    {
        const ProblemParams p{3, 1, 3.0, 1.0};
        const auto wt = weights::rational(1.0, 1.0, -1.5, 0.5);  // l0 = -1.5, l_inf = -2
        const auto rep = check_assumptions(wt, p);
        c.expect(rep.passes_for_classification(), "P2 slope instance passes assumptions");
        const auto orb = backward_p2_orbit(p, wt, 40.0);
        const auto cls = classify_orbit(orb, p, wt);
        c.expect(cls.verdict == Verdict::P2, "P2 slope instance classified P2");
        const auto sr = slope_checks(orb, cls, p, wt);
        c.note("y'(0) fitted " + fmt(sr.fitted) + " predicted " + fmt(sr.predicted));
        c.expect(std::abs(sr.predicted + 1.0 / 3.0) < 1e-12, "predicted slope -1/3");
        c.expect(sr.rel_dev < 0.02, "P2 slope within 2%");
    }
    // slow-decay slope: y'(n-2k) = -1/q within 5%
    {
        const ProblemParams p{3, 1, 6.0, 1.0};
        const auto wt = weights::matukuma(2.0);
        const auto orb = profile_orbit(p, wt, -1.0, 40.0);
        const auto cls = classify_orbit(orb, p, wt);
        c.expect(cls.verdict == Verdict::P3plus_slow, "slow slope instance classified slow");
        if (cls.verdict == Verdict::P3plus_slow) {
            const auto sr = slope_checks(orb, cls, p, wt);
            c.note("y'(n-2k) fitted " + fmt(sr.fitted) + " predicted " + fmt(sr.predicted));
            c.expect(sr.rel_dev < 0.05, "slow slope within 5%");
        }
    }
}

void criterion_12(Check& c) {
    const ProblemParams p{3, 1, 3.0, 1.0};
    const auto wc = weights::constant(1.0);
    const auto br = estimate_lambda_star(p, wc);
    c.note("bracket [" + fmt(br.lower) + ", " + fmt(br.upper) + "]");
    c.expect(br.status == LambdaStarBracket::Status::bracketed, "bracketed");
    c.expect(br.lower >= 8.0 / 9.0 - 1e-12, "lower end >= 8/9");

    ProblemParams pl = p;
    pl.lambda = 0.5;
    const auto itr = maximal_solution_iterate(pl, wc);
    c.expect(itr.converged, "iteration converges at lambda = 0.5");
    c.note("monotonicity violation " + fmt(itr.max_monotonicity_violation));
    c.expect(itr.max_monotonicity_violation <= 1e-12,
             "iterates pointwise decreasing (1e-12 slack)");

    const auto br2 = estimate_lambda_star(p, weights::constant(2.0));
    c.note("2rho bracket [" + fmt(br2.lower) + ", " + fmt(br2.upper) + "]");
    c.expect(std::abs(br2.lower - 0.5 * br.lower) <= 1e-6 * br.lower &&
                 std::abs(br2.upper - 0.5 * br.upper) <= 1e-6 * br.upper,
             "doubling rho halves the bracket");
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        std::function<void(Check&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "closed-form oracle (entire-space profile)", criterion_1},
        {2, "closed-form oracle (Bliss profile)", criterion_2},
        {3, "exponent table", criterion_3},
        {4, "stationary points and label scan", criterion_4},
        {5, "transform consistency", criterion_5},
        {6, "orbit start at the boundary point", criterion_6},
        {7, "singular machinery", criterion_7},
        {8, "spiral / intersections", criterion_8},
        {9, "multiplicity sweep", criterion_9},
        {10, "classification equivalences", criterion_10},
        {11, "slope checks", criterion_11},
        {12, "breakdown-parameter bounds", criterion_12},
    };

    int failures = 0;
    for (const auto& cr : criteria) {
        Check chk;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(chk);
        } catch (const std::exception& e) {
            chk.ok = false;
            chk.detail << " [exception: " << e.what() << "]";
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %02d %-45s (%.1fs)%s\n", chk.ok ? "PASS" : "FAIL", cr.id, cr.name, secs,
                    chk.detail.str().c_str());
        std::fflush(stdout);
        if (!chk.ok) ++failures;
    }
    if (failures) std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
