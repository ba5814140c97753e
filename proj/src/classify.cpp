#include "khess/classify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "khess/exponents.hpp"
#include "khess/numerics.hpp"

namespace khess {

std::string to_string(Verdict v) {
    switch (v) {
        case Verdict::P2: return "P2";
        case Verdict::P3plus_fast: return "P3plus_fast";
        case Verdict::P3plus_slow: return "P3plus_slow";
        case Verdict::P4plus: return "P4plus";
        case Verdict::undetermined: return "undetermined";
    }
    return "?";
}

RegionValues region_values(double t, double x, double y, const LVField& field) {
    const auto& p = field.params;
    const double nm2k = p.n - 2.0 * p.k;
    RegionValues rv;
    rv.G = x + nm2k * (p.q + 1) / (p.k + 1) * (p.k / nm2k * y - 1.0);
    rv.W = -nm2k / p.k + x / p.k + y;
    rv.S = field.nu(t) - x - p.q * y;
    return rv;
}

namespace {

struct FitWindow {
    std::vector<double> t;  // sample times
    std::vector<std::size_t> idx;
};

FitWindow fit_window(const Orbit& orb, double r_lo, double r_hi) {
    FitWindow w;
    const double t_lo = std::log(r_lo), t_hi = std::log(r_hi);
    for (std::size_t i = 0; i < orb.samples.size(); ++i) {
        const double t = orb.samples[i].t;
        if (t >= t_lo && t <= t_hi) {
            w.t.push_back(t);
            w.idx.push_back(i);
        }
    }
    if (w.idx.size() < 10) {
        // fall back to the trailing quarter of the samples
        w.t.clear();
        w.idx.clear();
        const std::size_t n = orb.samples.size();
        for (std::size_t i = (3 * n) / 4; i < n; ++i) {
            w.t.push_back(orb.samples[i].t);
            w.idx.push_back(i);
        }
    }
    return w;
}

double window_mean(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / v.size();
}

}  // namespace

Classification classify_orbit(const Orbit& orb, const ProblemParams& p, const WeightSpec& wt,
                              const ClassifyOptions& opt) {
    p.validate();
    Classification cls;
    cls.delta = delta_param(p.k, wt.l_inf);
    {
        const double qs = q_star(p.k, wt.l0, p.n);
        cls.boundary_q_flag = std::abs(p.q - qs) <= 1e-9 * (1 + std::abs(qs));
    }
    if (orb.samples.size() < 16) {
        cls.reason = "orbit has too few samples";
        return cls;
    }
    if (orb.end_truncated) {
        cls.reason = "orbit truncated: " + orb.truncation_reason;
        return cls;
    }

    const LVField field{p, wt};
    const double nm2k_k = (p.n - 2.0 * p.k) / p.k;
    const double nu_plus = p.n + wt.l_inf;
    const double x4 = (p.q * (p.n - 2.0 * p.k) - p.k * nu_plus) / (p.q - p.k);
    const double y4 = (2.0 * p.k + wt.l_inf) / (p.q - p.k);

    // region history
    for (const auto& s : orb.samples) {
        const auto rv = region_values(s.t, s.x, s.y, field);
        if (!cls.first_G_minus_time && rv.G < -1e-9) cls.first_G_minus_time = s.t;
        if (!cls.first_W_minus_time && rv.W < -1e-9) cls.first_W_minus_time = s.t;
        if (cls.first_G_minus_time && cls.first_W_minus_time) break;
    }

    const double t_first = orb.samples.front().t, t_end = orb.samples.back().t;
    const double span = t_end - t_first;
    const double t_window = t_end - opt.window_fraction * span;

    double dP2 = 0, dP3 = 0, dP4 = 0;
    std::size_t in_window = 0;
    for (const auto& s : orb.samples) {
        if (s.t < t_window) continue;
        ++in_window;
        dP2 = std::max(dP2, std::hypot(s.x - 0.0, s.y - nm2k_k));
        dP3 = std::max(dP3, std::hypot(s.x - nu_plus, s.y - 0.0));
        dP4 = std::max(dP4, std::hypot(s.x - x4, s.y - y4));
    }
    const auto& last = orb.samples.back();

    const double dtol = 1e-9;
    Verdict v = Verdict::undetermined;
    if (in_window >= 4 && dP2 < opt.proximity_tol) {
        v = Verdict::P2;
        cls.limit_x = 0;
        cls.limit_y = nm2k_k;
        cls.terminal_distance = std::hypot(last.x, last.y - nm2k_k);
    } else if (cls.delta > dtol && in_window >= 4 && dP3 < opt.proximity_tol) {
        v = Verdict::P3plus_fast;
        cls.limit_x = nu_plus;
        cls.limit_y = 0;
        cls.terminal_distance = std::hypot(last.x - nu_plus, last.y);
    } else if (cls.delta < -dtol && in_window >= 4 && dP4 < opt.proximity_tol) {
        v = Verdict::P4plus;
        cls.limit_x = x4;
        cls.limit_y = y4;
        cls.terminal_distance = std::hypot(last.x - x4, last.y - y4);
    } else if (std::abs(cls.delta) <= dtol && t_end > 1) {
        // Slow saddle-node crawl: proximity alone cannot certify it. The law
        // 1/y = ((q-k)/k)(t - t0) carries a phase-dependent offset t0, so the
        // slope of 1/y against t over the trailing half is the robust
        // observable for t*y -> k/(q-k).
        cls.slow_ty = last.t * last.y;
        std::vector<double> ft, fy;
        for (const auto& s : orb.samples)
            if (s.t >= t_end - 0.5 * span && s.y > 0) {
                ft.push_back(s.t);
                fy.push_back(1.0 / s.y);
            }
        const double x_gap = std::abs(last.x - (p.n - 2.0 * p.k));
        const double x_allow =
            std::max(5.0 * p.q * p.k / (p.q - p.k) / t_end, 0.05 * (p.n - 2.0 * p.k));
        if (ft.size() >= 10 && x_gap <= x_allow) {
            const auto crawl = num::linear_fit(ft, fy);
            const double slope_target = (p.q - p.k) / p.k;
            if (std::abs(crawl.slope - slope_target) <= opt.slow_rel_tol * slope_target) {
                v = Verdict::P3plus_slow;
                cls.limit_x = p.n - 2.0 * p.k;
                cls.limit_y = 0;
                cls.terminal_distance = std::hypot(last.x - cls.limit_x, last.y);
            }
        }
    }
    cls.verdict = v;
    if (v == Verdict::undetermined) {
        std::ostringstream os;
        os << "no sustained limit: window distances P2=" << dP2 << " P3+=" << dP3 << " P4+=" << dP4
           << " (tol " << opt.proximity_tol << "), delta=" << cls.delta;
        cls.reason = os.str();
        return cls;
    }

    const double c = c_nk(p.n, p.k).value();
    const double qk = p.q - p.k;

    // trailing-window samples for constant fits
    const double gamma_raw = p.q / p.k * (p.n - 2.0 * p.k) - (p.n + wt.l_inf);
    std::vector<double> cfit;
    for (const auto& s : orb.samples) {
        if (s.t < t_window) continue;
        if (v == Verdict::P2 && s.x > 0 && gamma_raw > 0) {
            cfit.push_back(std::exp(gamma_raw * s.t + std::log(s.x)));
        } else if (v == Verdict::P3plus_fast && s.y > 0) {
            cfit.push_back(std::exp(cls.delta * s.t + std::log(s.y)));
        }
    }

    switch (v) {
        case Verdict::P2: {
            if (gamma_raw <= 0 || cfit.empty()) break;  // rate assumption violated; no constants
            const double g = gamma_raw;
            const double c1 = window_mean(cfit);
            cls.fitted_c = c1;
            cls.c1 = c1;
            cls.c2 = c1 * (p.k * p.k * g / (p.n - 2.0 * p.k) - p.k);
            const double base = c * c1 / wt.c_rho;
            cls.c3 = std::pow(base, 1.0 / qk) * std::pow(nm2k_k, p.k / qk);
            cls.c4 = std::pow(base, 1.0 / qk) * std::pow(nm2k_k, p.q / qk);
            break;
        }
        case Verdict::P3plus_fast: {
            const double cc = window_mean(cfit);
            cls.fitted_c = cc;
            cls.c1 = std::pow(nu_plus * c * std::pow(cc, p.k) / wt.c_rho, 1.0 / qk);
            cls.c2 = std::pow(nu_plus * c * std::pow(cc, p.q) / wt.c_rho, 1.0 / qk);
            break;
        }
        case Verdict::P3plus_slow: {
            const double base = c / wt.c_rho * (p.n - 2.0 * p.k);
            cls.c3 = std::pow(base * std::pow(p.k / qk, p.k), 1.0 / qk);
            cls.c4 = std::pow(base * std::pow(p.k / qk, p.q), 1.0 / qk);
            break;
        }
        case Verdict::P4plus: {
            cls.c3 = std::pow(c / wt.c_rho * x4 * std::pow(y4, p.k), 1.0 / qk);
            cls.c4 = std::pow(c / wt.c_rho * x4 * std::pow(y4, p.q), 1.0 / qk);
            break;
        }
        default: break;
    }

    // decay-rate fit through the inverse transform
    const auto win = fit_window(orb, opt.fit_r_lo, opt.fit_r_hi);
    if (win.idx.size() >= 10) {
        std::vector<double> ax, ay;
        for (std::size_t i : win.idx) {
            const auto& s = orb.samples[i];
            if (!(s.x > 0) || !(s.y > 0)) continue;
            const auto iv = inverse(PhasePoint{s.t, s.x, s.y}, p, wt);
            switch (v) {
                case Verdict::P2:
                case Verdict::P4plus:
                    ax.push_back(s.t);
                    ay.push_back(std::log(-iv.w));
                    break;
                case Verdict::P3plus_fast:
                    ax.push_back(s.t);
                    ay.push_back(std::log(iv.wprime));
                    break;
                case Verdict::P3plus_slow:
                    if (s.t > 0) {
                        ax.push_back(std::log(s.t));
                        ay.push_back(std::log(-iv.w));
                    }
                    break;
                default: break;
            }
        }
        if (ax.size() >= 10) {
            const auto fit = num::linear_fit(ax, ay);
            cls.fitted_decay_exponent = fit.slope;
            cls.fit_residual = fit.residual;
            cls.fit_variable = (v == Verdict::P3plus_fast)  ? "w' vs r"
                               : (v == Verdict::P3plus_slow) ? "-w vs ln r (log-log in ln r)"
                                                             : "-w vs r";
        }
    }
    return cls;
}

SlopeReport slope_checks(const Orbit& orb, const Classification& cls, const ProblemParams& p,
                         const WeightSpec& wt) {
    if (cls.verdict == Verdict::undetermined)
        throw domain_error("slope_checks: classification is undetermined");
    SlopeReport rep;
    const double nm2k_k = (p.n - 2.0 * p.k) / p.k;
    const double nu_plus = p.n + wt.l_inf;

    const std::size_t n = orb.samples.size();
    const std::size_t lo = (9 * n) / 10;
    // coordinate differences against an O(1) limit bottom out at the ulp of
    // the limit; samples below that floor carry no slope information
    const double res_floor = 1e-13 * (1 + std::abs(nu_plus) + nm2k_k);
    auto through_origin = [&](auto fx, auto fy, double floor_x, double floor_y) {
        double sxx = 0, sxy = 0;
        std::size_t cnt = 0;
        for (std::size_t i = lo; i < n; ++i) {
            const auto& s = orb.samples[i];
            const double X = fx(s), Y = fy(s);
            if (!std::isfinite(X) || !std::isfinite(Y)) continue;
            if (std::abs(X) < floor_x || std::abs(Y) < floor_y) continue;
            sxx += X * X;
            sxy += X * Y;
            ++cnt;
        }
        if (cnt < 4 || sxx == 0)
            throw fit_error(
                "slope_checks: too few resolvable samples near the limit (deviations at "
                "roundoff level; shorten the orbit range)");
        return sxy / sxx;
    };

    switch (cls.verdict) {
        case Verdict::P2: {
            const double g = p2_rate(p, wt.l_inf);
            rep.which = "y'(0) at P2";
            rep.fitted = through_origin([](const OrbitSample& s) { return s.x; },
                                        [&](const OrbitSample& s) { return s.y - nm2k_k; }, 0.0,
                                        res_floor);
            rep.predicted = -(p.n - 2.0 * p.k) / (p.k * p.k * g + p.k * (p.n - 2.0 * p.k));
            break;
        }
        case Verdict::P3plus_slow: {
            rep.which = "y'(n-2k) at P3+";
            rep.fitted =
                through_origin([&](const OrbitSample& s) { return s.x - (p.n - 2.0 * p.k); },
                               [](const OrbitSample& s) { return s.y; }, res_floor, 0.0);
            rep.predicted = -1.0 / p.q;
            break;
        }
        case Verdict::P3plus_fast: {
            const double delta = cls.delta;
            std::optional<double> theta = wt.vartheta;
            const LVField field{p, wt};
            auto zeta = [&](double t) { return field.nu(t) - nu_plus; };
            const double zeta_probe = std::abs(zeta(20.0)) + std::abs(zeta(30.0));
            const bool exact_tail = zeta_probe < 1e-13;
            const bool case1 = exact_tail || (theta && delta < *theta - 1e-9) ||
                               (theta && std::abs(delta - *theta) <= 1e-9);
            const double cc = cls.fitted_c.value_or(0.0);
            if (case1) {
                // kappa = lim e^{delta t} zeta(t): 0 when the tail decays faster
                double kappa = 0;
                if (theta && std::abs(delta - *theta) <= 1e-9 && !exact_tail) {
                    std::vector<double> seq;
                    for (double t : {14.0, 17.0, 20.0, 23.0, 26.0})
                        seq.push_back(std::exp(delta * t) * zeta(t));
                    kappa = num::aitken_limit(seq);
                }
                rep.which = "x'(0) at P3+ (finite-limit tail)";
                rep.fitted = through_origin([](const OrbitSample& s) { return s.y; },
                                            [&](const OrbitSample& s) { return s.x - nu_plus; },
                                            0.0, res_floor);
                rep.predicted = (kappa / cc - p.q) * nu_plus / (nu_plus - delta);
                // refined x(t) representation
                double acc = 0;
                std::size_t cnt = 0;
                for (std::size_t i = lo; i < n; ++i) {
                    const auto& s = orb.samples[i];
                    if (std::abs(s.x - nu_plus) < res_floor) continue;
                    acc += std::exp(delta * s.t) * (s.x - nu_plus);
                    ++cnt;
                }
                if (cnt >= 4) rep.x_repr_fitted = acc / cnt;
                rep.x_repr_predicted = (kappa - p.q * cc) * nu_plus / (nu_plus - delta);
                if (rep.x_repr_fitted)
                    rep.x_repr_rel_dev = std::abs(*rep.x_repr_fitted - *rep.x_repr_predicted) /
                                         std::max(std::abs(*rep.x_repr_predicted), 1e-300);
            } else {
                rep.which = "y'(nu+) at P3+ (dominant tail)";
                rep.fitted = through_origin([&](const OrbitSample& s) { return s.x - nu_plus; },
                                            [](const OrbitSample& s) { return s.y; }, res_floor,
                                            0.0);
                rep.predicted = 0.0;
                // nu_hat = lim -zeta'/zeta via centered differences
                std::vector<double> seq;
                for (double t : {14.0, 17.0, 20.0, 23.0, 26.0}) {
                    const double h = 1e-4;
                    seq.push_back(-(zeta(t + h) - zeta(t - h)) / (2 * h) / zeta(t));
                }
                const double nu_hat = num::aitken_limit(seq);
                double acc = 0;
                std::size_t cnt = 0;
                for (std::size_t i = lo; i < n; ++i) {
                    const auto& s = orb.samples[i];
                    if (std::abs(s.x - nu_plus) < res_floor) continue;
                    acc += (s.x - nu_plus) / zeta(s.t);
                    ++cnt;
                }
                if (cnt >= 4) rep.x_repr_fitted = acc / cnt;
                rep.x_repr_predicted = nu_plus / (nu_plus - nu_hat);
                if (rep.x_repr_fitted)
                    rep.x_repr_rel_dev = std::abs(*rep.x_repr_fitted - *rep.x_repr_predicted) /
                                         std::max(std::abs(*rep.x_repr_predicted), 1e-300);
            }
            break;
        }
        case Verdict::P4plus:
            rep.which = "P4+ (no graph slope prescribed; oscillatory approach when a focus)";
            rep.fitted = rep.predicted = 0;
            return rep;
        default: break;
    }
    const double denom = std::abs(rep.predicted) > 1e-12 ? std::abs(rep.predicted) : 1.0;
    rep.rel_dev = std::abs(rep.fitted - rep.predicted) / denom;
    return rep;
}

bool check_inward_invariance(const Orbit& orb, const ProblemParams& p, const WeightSpec& wt,
                             double tol) {
    const LVField field{p, wt};
    bool entered = false;
    for (const auto& s : orb.samples) {
        const double G = region_values(s.t, s.x, s.y, field).G;
        if (entered && !(G < tol)) return false;
        if (G <= 0) entered = true;
    }
    return true;
}

bool stays_in_G_plus(const Orbit& orb, const ProblemParams& p, const WeightSpec& wt,
                     double slack) {
    const LVField field{p, wt};
    for (const auto& s : orb.samples) {
        if (region_values(s.t, s.x, s.y, field).G <= -slack) return false;
    }
    return true;
}

}  // namespace khess
