#include "khess/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "khess/exponents.hpp"
#include "khess/numerics.hpp"

namespace khess {

namespace {

double binom_val(int n, int k) {
    return c_nk(n, k).value() * n;  // binom(n,k) = n c_{n,k}
}

}  // namespace

RadialSolution solve_ivp(const ProblemParams& p, const WeightSpec& wt, double w0, double r_max,
                         const IntegratorConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!(w0 < 0)) throw domain_error("solve_ivp: w0 must be negative");
    if (!(r_max > cfg.r_start)) throw domain_error("solve_ivp: r_max must exceed r_start");
    if (!(p.n + wt.l0 > 0)) throw domain_error("solve_ivp: require n + l0 > 0");
    if (!(wt.l0 > -2.0 * p.k))
        throw domain_error("solve_ivp: regular profiles require l0 > -2k");

    const double c = c_nk(p.n, p.k).value();
    const double k = p.k, n = p.n, q = p.q;

    // two-term series start: Phi(r) ~ lambda K0 (-w0)^q r^{n+l0} / (c (n+l0))
    const double phi_coef = p.lambda * wt.K0 * std::pow(-w0, q) / (c * (n + wt.l0));
    const double A = std::pow(phi_coef, 1.0 / k);  // w' ~ A r^{(l0+k)/k}
    const double beta = (wt.l0 + 2.0 * k) / k;

    // keep the first series correction below 1e-8 |w0|: large-amplitude starts
    // concentrate the profile near 0 and need an earlier start radius
    double rs = cfg.r_start;
    const double corr = std::abs(A * k / (wt.l0 + 2.0 * k)) * std::pow(rs, beta);
    const double corr_target = 1e-8 * std::abs(w0);
    if (corr > corr_target) rs *= std::pow(corr_target / corr, 1.0 / beta);

    // Integrate in (ln(-w), ln Phi): w approaches 0 through many decades on
    // long ranges and additive state updates would drown it in roundoff; log
    // coordinates keep the control purely multiplicative. w < 0 and Phi > 0
    // strictly, so the chart is global.
    std::array<double, 2> y{};  // (ln(-w), ln Phi)
    y[0] = std::log(-w0 - A * k / (wt.l0 + 2.0 * k) * std::pow(rs, beta));
    y[1] = std::log(phi_coef) + (n + wt.l0) * std::log(rs);

    auto rhs = [&](double r, const std::array<double, 2>& s, std::array<double, 2>& ds) {
        const double lnwp = (s[1] + (k - n) * std::log(r)) / k;
        ds[0] = -std::exp(lnwp - s[0]);
        ds[1] = p.lambda / c * std::pow(r, n - 1.0) * wt.rho(r) * std::exp(q * s[0] - s[1]);
    };

    RadialSolution sol;
    sol.w0 = w0;
    sol.params = p;
    sol.weight = wt;

    const double out_lo = std::min(std::max(10.0 * rs, rs * (1 + 1e-9)), 0.5 * (rs + r_max));
    const auto grid = num::log_grid(out_lo, r_max, std::max<std::size_t>(cfg.output_points, 8));
    num::OdeOptions opt{cfg.rel_tol, cfg.abs_tol, cfg.max_steps};
    num::OdeStats stats;
    const double floor_lnw = std::log(-w0) - 500.0;
    auto halt = [&](double, const std::array<double, 2>& s) { return s[0] < floor_lnw; };
    const auto status = num::rk45_path<2>(
        rhs, y, rs, grid,
        [&](double r, const std::array<double, 2>& s) {
            const double wp = std::exp((s[1] + (k - n) * std::log(r)) / k);
            sol.samples.push_back({r, -std::exp(s[0]), wp});
        },
        opt, stats, halt);

    sol.stats.steps = stats.steps;
    sol.stats.rejected = stats.rejected;
    if (status == num::OdeStatus::halted) {
        sol.truncated = true;
        sol.truncation_reason = "w collapsed towards 0 before r_max";
    } else if (status == num::OdeStatus::step_underflow) {
        throw numeric_error("solve_ivp: step-size underflow");
    } else if (status == num::OdeStatus::max_steps) {
        throw numeric_error("solve_ivp: step budget exhausted");
    }
    if (cfg.compute_residual && !sol.samples.empty() && !sol.truncated) {
        try {
            sol.stats.max_residual = hessian_residual(sol, p, wt).max_rel;
        } catch (const error&) {
            sol.stats.max_residual = std::numeric_limits<double>::quiet_NaN();
        }
    }
    return sol;
}

namespace {

// t-grid containing both endpoints and, when the span covers it, t = 0.
std::vector<double> time_grid(double t0, double t1, std::size_t approx_points) {
    const double span = std::abs(t1 - t0);
    const std::size_t total = std::max<std::size_t>(approx_points, 16);
    std::vector<double> g;
    const double lo = std::min(t0, t1), hi = std::max(t0, t1);
    if (lo < 0 && hi > 0) {
        const std::size_t n_lo =
            std::max<std::size_t>(2, static_cast<std::size_t>(total * (-lo) / span));
        const std::size_t n_hi = std::max<std::size_t>(2, total - n_lo);
        auto a = num::uniform_grid(lo, 0.0, n_lo + 1);
        auto b = num::uniform_grid(0.0, hi, n_hi + 1);
        g = std::move(a);
        g.insert(g.end(), b.begin() + 1, b.end());
    } else {
        g = num::uniform_grid(lo, hi, total);
    }
    if (t1 < t0) std::reverse(g.begin(), g.end());
    return g;
}

}  // namespace

Orbit solve_orbit(const LVField& field, const PhasePoint& init, double t_end,
                  const IntegratorConfig& cfg) {
    field.params.validate();
    cfg.validate();
    if (init.x < 0 || init.y < 0)
        throw domain_error("solve_orbit: init must lie in the closed first quadrant");

    const auto& p = field.params;
    const double nm2k_k = (p.n - 2.0 * p.k) / p.k;
    const bool backward = t_end < init.t;
    const double blow = std::log(cfg.blowup_threshold);

    Orbit orb;
    orb.provenance = OrbitProvenance::direct_lv;
    orb.params = p;
    orb.weight = field.weight;

    const auto grid = time_grid(init.t, t_end, cfg.output_points);
    num::OdeOptions opt{cfg.rel_tol, cfg.abs_tol, cfg.max_steps};
    num::OdeStats stats;
    num::OdeStatus status = num::OdeStatus::ok;

    if (init.x > 0 && init.y > 0) {
        auto rhs = [&](double t, const std::array<double, 2>& s, std::array<double, 2>& ds) {
            const double x = std::exp(s[0]), yv = std::exp(s[1]);
            ds[0] = field.nu(t) - x - p.q * yv;
            ds[1] = -nm2k_k + x / p.k + yv;
        };
        std::array<double, 2> s{std::log(init.x), std::log(init.y)};
        auto halt = [&](double, const std::array<double, 2>& v) {
            return v[0] > blow || v[1] > blow;
        };
        status = num::rk45_path<2>(
            rhs, s, init.t, grid,
            [&](double t, const std::array<double, 2>& v) {
                orb.samples.push_back({t, std::exp(v[0]), std::exp(v[1])});
            },
            opt, stats, halt);
    } else if (init.x == 0 && init.y == 0) {
        for (double t : grid) orb.samples.push_back({t, 0.0, 0.0});
    } else if (init.x == 0) {
        auto rhs = [&](double, const std::array<double, 1>& s, std::array<double, 1>& ds) {
            ds[0] = -nm2k_k + std::exp(s[0]);
        };
        std::array<double, 1> s{std::log(init.y)};
        auto halt = [&](double, const std::array<double, 1>& v) { return v[0] > blow; };
        status = num::rk45_path<1>(
            rhs, s, init.t, grid,
            [&](double t, const std::array<double, 1>& v) {
                orb.samples.push_back({t, 0.0, std::exp(v[0])});
            },
            opt, stats, halt);
    } else {  // init.y == 0
        auto rhs = [&](double t, const std::array<double, 1>& s, std::array<double, 1>& ds) {
            ds[0] = field.nu(t) - std::exp(s[0]);
        };
        std::array<double, 1> s{std::log(init.x)};
        auto halt = [&](double, const std::array<double, 1>& v) { return v[0] > blow; };
        status = num::rk45_path<1>(
            rhs, s, init.t, grid,
            [&](double t, const std::array<double, 1>& v) {
                orb.samples.push_back({t, std::exp(v[0]), 0.0});
            },
            opt, stats, halt);
    }

    if (status == num::OdeStatus::halted) {
        std::ostringstream os;
        os << "orbit blow-up: |x|+|y| exceeded " << cfg.blowup_threshold;
        orb.truncation_reason = os.str();
        (backward ? orb.start_truncated : orb.end_truncated) = true;
    } else if (status == num::OdeStatus::step_underflow || status == num::OdeStatus::max_steps) {
        orb.truncation_reason = "integrator stalled";
        (backward ? orb.start_truncated : orb.end_truncated) = true;
    }
    if (backward) std::reverse(orb.samples.begin(), orb.samples.end());
    return orb;
}

Orbit singular_orbit(const ProblemParams& p, const WeightSpec& wt, double T,
                     const IntegratorConfig& cfg) {
    p.validate();
    if (!(T > 0)) throw domain_error("singular_orbit: T must be positive");
    const double xhat = (p.q * (p.n - 2.0 * p.k) - p.k * (p.n + wt.l0)) / (p.q - p.k);
    const double yhat = (2.0 * p.k + wt.l0) / (p.q - p.k);
    if (!(xhat > 0) || !(yhat > 0)) {
        std::ostringstream os;
        os << "singular_orbit: interior stationary point outside the open quadrant (q <= "
           << p.k * (p.n + wt.l0) / (p.n - 2.0 * p.k) << " or l0 <= -2k)";
        throw domain_error(os.str());
    }
    LVField field{p, wt};
    Orbit orb = solve_orbit(field, PhasePoint{-T, xhat, yhat}, cfg.singular_t_end, cfg);
    orb.provenance = OrbitProvenance::singular_from_p4;
    return orb;
}

SingularSolution singular_solution(const ProblemParams& p, const WeightSpec& wt,
                                   const IntegratorConfig& cfg) {
    SingularSolution out;
    out.orbit = singular_orbit(p, wt, cfg.singular_T, cfg);
    if (out.orbit.end_truncated) throw numeric_error("singular_solution: orbit truncated");

    // sample at t = 0 is on the grid by construction
    const auto it = std::min_element(
        out.orbit.samples.begin(), out.orbit.samples.end(),
        [](const OrbitSample& a, const OrbitSample& b) { return std::abs(a.t) < std::abs(b.t); });
    if (std::abs(it->t) > 1e-12) throw numeric_error("singular_solution: t=0 not on orbit grid");
    const double c = c_nk(p.n, p.k).value();
    out.lambda_tilde = c * it->x * std::pow(it->y, p.k) / wt.eval_rho(1.0);

    ProblemParams pl = p;
    pl.lambda = out.lambda_tilde;
    out.profile.params = pl;
    out.profile.weight = wt;
    out.profile.w0 = -std::numeric_limits<double>::infinity();
    out.profile.samples.reserve(out.orbit.samples.size());
    for (const auto& s : out.orbit.samples) {
        const auto iv = inverse(PhasePoint{s.t, s.x, s.y}, pl, wt);
        out.profile.samples.push_back({std::exp(s.t), iv.w, iv.wprime});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Maximal-solution iteration on a Clenshaw-Curtis-style grid on [0, 1].

namespace {

struct CCGrid {
    std::vector<double> r;  // 0 = r_0 < ... < r_N = 1, clustered at both ends

    explicit CCGrid(int N) {
        r.resize(N + 1);
        for (int j = 0; j <= N; ++j) r[j] = 0.5 * (1.0 - std::cos(num::pi * j / N));
        r.front() = 0.0;
        r.back() = 1.0;
    }

    // local cubic Lagrange interpolation of nodal values
    double interp(const std::vector<double>& u, double s) const {
        const std::size_t m = r.size();
        if (s <= r.front()) return u.front();
        if (s >= r.back()) return u.back();
        std::size_t lo = 0, hi = m - 1;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if (r[mid] <= s)
                lo = mid;
            else
                hi = mid;
        }
        std::size_t i0 = (lo == 0) ? 0 : lo - 1;
        if (i0 + 3 >= m) i0 = m - 4;
        double acc = 0;
        for (std::size_t a = i0; a < i0 + 4; ++a) {
            double l = 1;
            for (std::size_t b = i0; b < i0 + 4; ++b)
                if (b != a) l *= (s - r[b]) / (r[a] - r[b]);
            acc += u[a] * l;
        }
        return acc;
    }
};

}  // namespace

IterationResult maximal_solution_iterate(const ProblemParams& p, const WeightSpec& wt, double tol,
                                         int max_iter, double divergence_threshold) {
    p.validate();
    if (!(p.n + wt.l0 > 0)) throw domain_error("maximal_solution_iterate: require n + l0 > 0");
    const int N = 256;
    const CCGrid grid(N);
    const double c = c_nk(p.n, p.k).value();
    const double k = p.k, n = p.n, q = p.q;
    const double Klam = std::pow(p.lambda / c, 1.0 / k);
    const double pwr = n + wt.l0;

    std::vector<double> u(N + 1, 0.0), unew(N + 1, 0.0), G(N + 1, 0.0), wprime(N + 1, 0.0);

    auto H = [&](double s) {
        return std::pow(s, n - 1.0) * wt.rho(s) * std::pow(1.0 - grid.interp(u, s), q);
    };
    // inner integral on [0, b]: substitution v = (s/b)^(n+l0) flattens the
    // algebraic endpoint factor
    auto head_integral = [&](double b) {
        double acc = 0;
        for (int i = 0; i < 4; ++i) {
            const double va = i / 4.0, vb = (i + 1) / 4.0;
            acc += num::gauss5(
                [&](double v) {
                    const double s = b * std::pow(v, 1.0 / pwr);
                    return H(s) * std::pow(v, 1.0 / pwr - 1.0) * b / pwr;
                },
                va, vb);
        }
        return acc;
    };
    auto G_at = [&](double tau, std::size_t seg) {
        // G(tau) for tau in [r_seg, r_seg+1]
        if (seg == 0) return head_integral(tau);
        return G[seg] + num::gauss5(H, grid.r[seg], tau);
    };

    IterationResult res;
    res.min_u = 0;
    double change = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < max_iter; ++it) {
        // cumulative inner integral at the nodes
        G[0] = 0;
        G[1] = head_integral(grid.r[1]);
        for (int j = 2; j <= N; ++j) G[j] = G[j - 1] + num::gauss5(H, grid.r[j - 1], grid.r[j]);

        // outer integrand g(tau) = tau^{(k-n)/k} G(tau)^{1/k}, accumulated from 1 down
        auto g_outer = [&](double tau, std::size_t seg) {
            return std::pow(tau, (k - n) / k) * std::pow(std::max(G_at(tau, seg), 0.0), 1.0 / k);
        };
        unew[N] = 0;
        for (int j = N - 1; j >= 0; --j) {
            const double part = num::gauss5(
                [&](double tau) { return g_outer(tau, static_cast<std::size_t>(j)); }, grid.r[j],
                grid.r[j + 1]);
            unew[j] = unew[j + 1] - Klam * part;  // -K_lam int_r^1 g dtau
        }

        change = 0;
        double worst_up = 0, minu = 0;
        for (int j = 0; j <= N; ++j) {
            change = std::max(change, std::abs(unew[j] - u[j]));
            worst_up = std::max(worst_up, unew[j] - u[j]);
            minu = std::min(minu, unew[j]);
        }
        res.max_monotonicity_violation = std::max(res.max_monotonicity_violation, worst_up);
        res.min_u = std::min(res.min_u, minu);
        u.swap(unew);

        if (res.min_u < -divergence_threshold) {
            res.reason = "iterates unbounded below";
            break;
        }
        if (change < tol) {
            res.converged = true;
            break;
        }
    }
    res.iterations = std::min(it + 1, max_iter);
    res.final_change = change;
    if (!res.converged && res.reason.empty()) res.reason = "no convergence within max_iter";

    // assemble the profile (w = u - 1, w' = K_lam g(r))
    G[0] = 0;
    G[1] = head_integral(grid.r[1]);
    for (int j = 2; j <= N; ++j) G[j] = G[j - 1] + num::gauss5(H, grid.r[j - 1], grid.r[j]);
    wprime[0] = 0;
    for (int j = 1; j <= N; ++j)
        wprime[j] = Klam * std::pow(grid.r[j], (k - n) / k) * std::pow(std::max(G[j], 0.0), 1.0 / k);

    res.profile.params = p;
    res.profile.weight = wt;
    res.profile.w0 = u[0] - 1.0;
    res.profile.samples.reserve(N + 1);
    for (int j = 0; j <= N; ++j) res.profile.samples.push_back({grid.r[j], u[j] - 1.0, wprime[j]});
    res.profile.truncated = !res.converged;
    res.profile.truncation_reason = res.reason;
    return res;
}

double lambda_star_lower_bound(const ProblemParams& p, const WeightSpec& wt) {
    p.validate();
    double C = 0;
    for (double r : num::log_grid(1e-12, 1.0, 2001)) C = std::max(C, wt.rho(r));
    const double k = p.k, q = p.q;
    return binom_val(p.n, p.k) * std::pow((q - k) / q, q) * std::pow(2 * k / (q - k), k) / C;
}

LambdaStarBracket estimate_lambda_star(const ProblemParams& p, const WeightSpec& wt,
                                       double rel_width, double iterate_tol, int max_iter,
                                       double bracket_growth) {
    LambdaStarBracket br;
    br.analytic_lower = lambda_star_lower_bound(p, wt);

    auto converges = [&](double lam) {
        ProblemParams pl = p;
        pl.lambda = lam;
        return maximal_solution_iterate(pl, wt, iterate_tol, max_iter).converged;
    };

    double lo = br.analytic_lower;
    if (!converges(lo)) {
        // should not happen for weights obeying the bound; search downward
        int tries = 0;
        while (tries++ < 20 && !converges(lo)) lo /= 2;
        if (tries >= 20) {
            br.status = LambdaStarBracket::Status::lower_failed;
            br.lower = br.upper = lo;
            return br;
        }
    }
    double hi = lo * 64;
    while (converges(hi)) {
        hi *= 2;
        if (hi > br.analytic_lower * bracket_growth) {
            br.status = LambdaStarBracket::Status::unbounded;
            br.lower = lo;
            br.upper = hi;
            return br;
        }
        lo = std::max(lo, hi / 2);
    }
    while (hi - lo >= rel_width * lo) {
        const double mid = 0.5 * (lo + hi);
        if (converges(mid))
            lo = mid;
        else
            hi = mid;
    }
    br.lower = lo;
    br.upper = hi;
    br.status = LambdaStarBracket::Status::bracketed;
    return br;
}

}  // namespace khess
