#include "khess/weights.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "khess/exponents.hpp"
#include "khess/numerics.hpp"

namespace khess {

std::string to_string(WeightKind k) {
    switch (k) {
        case WeightKind::constant: return "constant";
        case WeightKind::power: return "power";
        case WeightKind::rational: return "rational";
        case WeightKind::matukuma: return "matukuma";
        case WeightKind::example1: return "example1";
        case WeightKind::custom_from_r: return "custom-from-R";
        case WeightKind::tabulated: return "tabulated";
    }
    return "?";
}

double WeightSpec::eval_rho(double r) const {
    if (!(r > 0)) throw domain_error("rho: r must be positive");
    const double v = rho(r);
    if (!std::isfinite(v) || v <= 0) {
        std::ostringstream os;
        os << "rho: non-positive or non-finite value " << v << " at r=" << r;
        throw numeric_error(os.str());
    }
    return v;
}

double WeightSpec::eval_R(double r) const {
    if (!(r > 0)) throw domain_error("R: r must be positive");
    return logderiv(r);
}

double numeric_R(const std::function<double(double)>& rho, double r, double h) {
    const double up = rho(r * std::exp(h)), dn = rho(r * std::exp(-h));
    if (!(up > 0) || !(dn > 0)) throw numeric_error("numeric_R: rho must be positive");
    return (std::log(up) - std::log(dn)) / (2 * h);
}

namespace weights {

namespace {

long long binom_ll(int n, int k) {
    if (k < 0 || k > n) throw domain_error("binom: k out of range");
    if (n > 62) throw domain_error("binom: n too large for exact evaluation");
    long long c = 1;
    k = std::min(k, n - k);
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
}

}  // namespace

WeightSpec constant(double c) {
    if (!(c > 0)) throw domain_error("constant weight: c must be positive");
    WeightSpec w;
    w.kind = WeightKind::constant;
    w.rho = [c](double) { return c; };
    w.logderiv = [](double) { return 0.0; };
    w.l0 = 0;
    w.l_inf = 0;
    w.K0 = c;
    w.c_rho = c;
    w.bounded_K = true;
    w.describe = "constant";
    return w;
}

WeightSpec power(double sigma, double c) {
    if (!(c > 0)) throw domain_error("power weight: c must be positive");
    WeightSpec w;
    w.kind = sigma == 0.0 ? WeightKind::constant : WeightKind::power;
    w.rho = [c, sigma](double r) { return c * std::pow(r, sigma); };
    w.logderiv = [sigma](double) { return sigma; };
    w.l0 = sigma;
    w.l_inf = sigma;
    w.K0 = c;
    w.c_rho = c;
    w.bounded_K = true;
    w.describe = "power";
    return w;
}

WeightSpec rational(double a, double atilde, double beta, double gamma) {
    if (!(a > 0) || !(atilde > 0) || !(gamma > 0))
        throw domain_error("rational weight: need a, atilde, gamma > 0");
    WeightSpec w;
    w.kind = WeightKind::rational;
    w.rho = [=](double r) { return a * std::pow(r, beta) / (atilde + std::pow(r, gamma)); };
    w.logderiv = [=](double r) {
        const double rg = std::pow(r, gamma);
        return beta - gamma * rg / (atilde + rg);
    };
    w.l0 = beta;
    w.l_inf = beta - gamma;
    w.vartheta = gamma;  // R - l_inf = gamma*atilde/(atilde + r^gamma)
    w.K0 = a / atilde;
    w.c_rho = a;
    w.bounded_K = true;
    w.describe = "rational";
    return w;
}

WeightSpec matukuma(double mu) {
    if (!(mu > 0)) throw domain_error("matukuma weight: mu must be positive");
    WeightSpec w;
    w.kind = WeightKind::matukuma;
    w.rho = [mu](double r) { return std::pow(r, mu - 2) * std::pow(1 + r * r, -mu / 2); };
    w.logderiv = [mu](double r) {
        const double r2 = r * r;
        return (mu - 2) - mu * r2 / (1 + r2);
    };
    w.l0 = mu - 2;
    w.l_inf = -2;
    w.vartheta = 2;  // R - l_inf = mu/(1+r^2)
    w.K0 = 1;
    w.c_rho = 1;
    w.bounded_K = true;
    w.describe = "matukuma";
    return w;
}

double example1_q(int n, int k) { return static_cast<double>(k) * n / (n - 2 * k); }

WeightSpec example1(int n, int k) {
    if (k < 1 || n <= 2 * k) throw domain_error("example1 weight: require 1 <= k, n > 2k");
    const double C = static_cast<double>(binom_ll(n, k)) *
                     std::pow(static_cast<double>(n - 2 * k) / k, k);
    WeightSpec w;
    w.kind = WeightKind::example1;
    w.rho = [C](double r) { return C / (1 + r * r); };
    w.logderiv = [](double r) {
        const double r2 = r * r;
        return -2 * r2 / (1 + r2);
    };
    w.l0 = 0;
    w.l_inf = -2;
    w.vartheta = 2;
    w.K0 = C;
    w.c_rho = C;
    w.bounded_K = true;
    w.describe = "example1";
    return w;
}

WeightSpec from_R(std::function<double(double)> Rfun, double l0, double K0) {
    if (!(K0 > 0)) throw domain_error("from_R: K0 must be positive");

    // Cumulative integral E(u) = int_{u_min}^{u} (R(e^s) - l0) ds on a fixed
    // grid in u = ln r; rho(r) = K0 r^l0 exp(E(ln r)) once the tail of the
    // integral below u_min is verified negligible.
    const double u_min = -120.0, u_max = 60.0, du = 0.02;
    const auto g = [&Rfun, l0](double u) { return Rfun(std::exp(u)) - l0; };

    // tail convergence: block integrals must die out approaching r -> 0
    double prev_block = 0;
    bool first = true;
    for (double lo = u_min; lo < -60.0; lo += 20.0) {
        const double b = num::gauss5(g, lo, lo + 20.0);
        const double bb = std::abs(b);
        if (!first && bb > 0.5 * std::abs(prev_block) + 1e-12 && bb > 1e-10) {
            throw construction_error("from_R: integral of (R - l0)/s does not converge at 0");
        }
        prev_block = b;
        first = false;
    }
    if (std::abs(prev_block) > 1e-5)
        throw construction_error("from_R: integral of (R - l0)/s has a non-negligible tail at 0");

    const std::size_t npts = static_cast<std::size_t>(std::round((u_max - u_min) / du)) + 1;
    auto table = std::make_shared<std::vector<std::array<double, 2>>>();  // (E, g) per node
    table->reserve(npts);
    double acc = 0;
    table->push_back({acc, g(u_min)});
    for (std::size_t i = 1; i < npts; ++i) {
        const double a = u_min + du * (i - 1), b = u_min + du * i;
        acc += num::gauss5(g, a, b);
        table->push_back({acc, g(b)});
    }

    auto Evalue = [table, u_min, u_max, du](double u) {
        if (u <= u_min) return (*table).front()[0];
        if (u >= u_max) {
            // linear extension with the boundary slope
            return (*table).back()[0] + (u - u_max) * (*table).back()[1];
        }
        const double s = (u - u_min) / du;
        const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(s), table->size() - 2);
        const double x0 = u_min + du * i, x1 = x0 + du;
        return num::hermite(u, x0, x1, (*table)[i][0], (*table)[i + 1][0], (*table)[i][1],
                            (*table)[i + 1][1]);
    };

    WeightSpec w;
    w.kind = WeightKind::custom_from_r;
    w.rho = [Evalue, K0, l0](double r) { return K0 * std::pow(r, l0) * std::exp(Evalue(std::log(r))); };
    w.logderiv = Rfun;
    w.l0 = l0;
    w.K0 = K0;
    w.bounded_K = true;
    w.describe = "custom-from-R";

    // limit at infinity from the prescribed R itself
    std::vector<double> seq;
    for (int e = 2; e <= 8; ++e) seq.push_back(Rfun(std::pow(10.0, e)));
    double spread = 0;
    w.l_inf = num::aitken_limit(seq, &spread);
    if (spread > 1e-4) w.l_inf = seq.back();
    w.c_rho = std::pow(1e8, -w.l_inf) * w.rho(1e8);
    return w;
}

WeightSpec tabulated(std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw input_error("tabulated weight: need >= 2 samples");
    auto pts = std::make_shared<std::vector<std::array<double, 2>>>();  // (ln r, ln rho)
    pts->reserve(samples.size());
    double prev_r = 0;
    for (const auto& [r, rho] : samples) {
        if (!(r > prev_r)) throw input_error("tabulated weight: r must be strictly increasing");
        if (!(rho > 0)) throw input_error("tabulated weight: rho must be positive");
        pts->push_back({std::log(r), std::log(rho)});
        prev_r = r;
    }
    const std::size_t m = pts->size();
    auto slope = [pts](std::size_t i) {
        return ((*pts)[i + 1][1] - (*pts)[i][1]) / ((*pts)[i + 1][0] - (*pts)[i][0]);
    };
    auto segment = [pts, m](double lr) {
        std::size_t lo = 0, hi = m - 1;
        if (lr <= (*pts)[0][0]) return std::size_t{0};
        if (lr >= (*pts)[m - 2][0]) return m - 2;
        while (hi - lo > 1) {
            const std::size_t mid = (lo + hi) / 2;
            if ((*pts)[mid][0] <= lr)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    };

    WeightSpec w;
    w.kind = WeightKind::tabulated;
    w.rho = [pts, segment, slope](double r) {
        const double lr = std::log(r);
        const std::size_t i = segment(lr);
        const double s = slope(i);
        return std::exp((*pts)[i][1] + s * (lr - (*pts)[i][0]));
    };
    w.logderiv = [segment, slope](double r) { return slope(segment(std::log(r))); };
    w.l0 = slope(0);
    w.l_inf = slope(m - 2);
    w.K0 = std::exp((*pts)[0][1] - w.l0 * (*pts)[0][0]);
    w.c_rho = std::exp((*pts)[m - 1][1] - w.l_inf * (*pts)[m - 1][0]);
    w.bounded_K = false;  // no structural guarantee for user tables
    w.describe = "tabulated";
    return w;
}

}  // namespace weights

std::pair<double, double> estimate_limits(const WeightSpec& w) {
    std::vector<double> near, far;
    for (int e = 2; e <= 8; ++e) {
        near.push_back(w.eval_R(std::pow(10.0, -e)));
        far.push_back(w.eval_R(std::pow(10.0, e)));
    }
    double s0 = 0, s1 = 0;
    const double l0 = num::aitken_limit(near, &s0);
    const double li = num::aitken_limit(far, &s1);
    if (s0 > 1e-4 || s1 > 1e-4) {
        std::ostringstream os;
        os << "estimate_limits: extrapolation spread " << std::max(s0, s1)
           << " exceeds 1e-4 (limit of R may not exist)";
        throw estimation_error(os.str());
    }
    return {l0, li};
}

AssumptionReport check_assumptions(const WeightSpec& w, const ProblemParams& p, int grid_points,
                                   double grid_rmin, double grid_rmax) {
    p.validate();
    AssumptionReport rep;
    rep.grid_rmin = grid_rmin;
    rep.grid_rmax = grid_rmax;
    rep.grid_points = grid_points;

    const auto grid = num::log_grid(grid_rmin, grid_rmax, static_cast<std::size_t>(grid_points));
    const double tol = 1e-12 * (1 + std::abs(w.l0));

    // (rho.1): positivity on the grid
    rep.rho1.status = AssumptionStatus::holds;
    for (double r : grid) {
        const double v = w.rho(r);
        if (!std::isfinite(v) || v <= 0) {
            rep.rho1.status = AssumptionStatus::fails;
            rep.rho1.witness = Witness{r, v};
            rep.rho1.note = "rho not positive on grid";
            break;
        }
    }

    // scan R once
    double min_gap = std::numeric_limits<double>::infinity();  // min of l0 - R
    Witness worst{0, 0};
    for (double r : grid) {
        const double gap = w.l0 - w.eval_R(r);
        if (gap < min_gap) {
            min_gap = gap;
            worst = Witness{r, w.eval_R(r)};
        }
    }
    const bool strict = min_gap > 0;
    const bool weak = min_gap >= -tol;

    rep.q_star_l0 = q_star(p.k, w.l0, p.n);
    const double qtol = 1e-9 * (1 + std::abs(rep.q_star_l0));
    const bool q_ge = p.q >= rep.q_star_l0 - qtol;
    const bool q_gt = p.q > rep.q_star_l0 + qtol;
    const bool q_eq = std::abs(p.q - rep.q_star_l0) <= qtol;

    // (rho.2)
    rep.rho2_case1 = strict && q_ge;
    rep.rho2_case2 = weak && q_gt;
    rep.boundary_q_equals_qstar = q_eq;
    if (rep.rho2_case1 || rep.rho2_case2) {
        rep.rho2.status = AssumptionStatus::holds;
        rep.rho2.note = "holds on grid";
    } else if (weak && q_eq) {
        rep.rho2.status = AssumptionStatus::holds;
        rep.rho2.note = "boundary case q = q*(k,l0); holds on grid up to the boundary";
    } else if (!weak) {
        rep.rho2.status = AssumptionStatus::fails;
        rep.rho2.witness = worst;
        rep.rho2.note = "R(r) exceeds l0 on grid";
    } else {
        rep.rho2.status = AssumptionStatus::fails;
        rep.rho2.witness = Witness{0, rep.q_star_l0};
        rep.rho2.note = "q below q*(k,l0)";
    }

    // (rho.3): K(r) = r^-l0 rho(r) bounded by K(0)
    rep.rho3.status = AssumptionStatus::holds;
    for (double r : grid) {
        const double K = std::pow(r, -w.l0) * w.rho(r);
        if (!(K > 0) || K > w.K0 * (1 + 1e-9)) {
            rep.rho3.status = AssumptionStatus::fails;
            rep.rho3.witness = Witness{r, K};
            rep.rho3.note = "K(r) exceeds K(0) (or is not positive)";
            break;
        }
    }

    // (rho.4)
    const double ltol = 1e-12 * (1 + std::abs(w.l0) + std::abs(w.l_inf));
    rep.rho4_case1 = (w.l_inf < w.l0 - ltol) && q_ge;
    rep.rho4_case2 = (w.l_inf <= w.l0 + ltol) && q_gt;
    if (rep.rho4_case1 || rep.rho4_case2) {
        rep.rho4.status = AssumptionStatus::holds;
    } else if (w.l_inf > w.l0 + ltol) {
        rep.rho4.status = AssumptionStatus::fails;
        rep.rho4.witness = Witness{grid_rmax, w.l_inf};
        rep.rho4.note = "l_inf exceeds l0";
    } else {
        rep.rho4.status = AssumptionStatus::fails;
        rep.rho4.witness = Witness{0, rep.q_star_l0};
        rep.rho4.note = q_eq ? "boundary case q = q*(k,l0) with l_inf = l0"
                             : "q below the required threshold";
    }

    // (rho.5): algebraic tail rate of R towards l_inf, fitted on r in [1e2, 1e4]
    {
        const auto tail = num::log_grid(1e2, 1e4, 64);
        std::vector<double> lx, ly;
        double max_dev = 0;
        for (double r : tail) {
            const double d = std::abs(w.eval_R(r) - w.l_inf);
            max_dev = std::max(max_dev, d);
            if (d > 1e-300) {
                lx.push_back(std::log(r));
                ly.push_back(std::log(d));
            }
        }
        if (max_dev < 1e-13) {
            rep.rho5.status = AssumptionStatus::holds;
            rep.rho5.note = "R - l_inf vanishes identically on the tail grid";
        } else if (lx.size() >= 8) {
            const auto fit = num::linear_fit(lx, ly);
            if (fit.residual < 0.05 && fit.slope < 0) {
                rep.rho5.status = AssumptionStatus::holds;
                rep.fitted_vartheta = -fit.slope;
            } else {
                rep.rho5.status = AssumptionStatus::fails;
                rep.rho5.witness = Witness{tail.back(), w.eval_R(tail.back()) - w.l_inf};
                rep.rho5.note = "no algebraic decay rate found (fit residual too large)";
            }
        } else {
            rep.rho5.status = AssumptionStatus::fails;
            rep.rho5.witness = Witness{tail.back(), max_dev};
            rep.rho5.note = "tail of R - l_inf too irregular to fit";
        }
    }

    // (rho.6) via the operational corollaries on psi(r) = r^vartheta |R - l_inf|
    {
        const double delta = delta_param(p.k, w.l_inf);
        const double nu_plus = p.n + w.l_inf;
        std::optional<double> theta = w.vartheta ? w.vartheta : rep.fitted_vartheta;
        const bool exact_tail = rep.rho5.status == AssumptionStatus::holds && !rep.fitted_vartheta &&
                                !w.vartheta;
        if (exact_tail) {
            // zeta == 0: limit of e^{delta t} zeta(t) is 0
            rep.rho6_case1 = true;
            rep.rho6.status = nu_plus > delta ? AssumptionStatus::holds : AssumptionStatus::fails;
            if (rep.rho6.status == AssumptionStatus::fails) {
                rep.rho6.witness = Witness{0, nu_plus - delta};
                rep.rho6.note = "nu_+ <= delta";
            }
        } else if (theta) {
            // stay on radii where R - l_inf is resolvable above roundoff
            const auto tail = num::log_grid(1e2, 1e4, 16);
            double psi_min = std::numeric_limits<double>::infinity(), psi_max = 0;
            int usable = 0;
            for (double r : tail) {
                const double dev = std::abs(w.eval_R(r) - w.l_inf);
                if (dev < 1e-12 * (1 + std::abs(w.l_inf))) continue;
                const double psi = std::pow(r, *theta) * dev;
                psi_min = std::min(psi_min, psi);
                psi_max = std::max(psi_max, psi);
                ++usable;
            }
            if (usable < 5 || !(psi_min > 0)) {
                rep.rho6.status = AssumptionStatus::unchecked;
                rep.rho6.note = "psi vanishes on tail grid";
            } else if (std::abs(delta - *theta) > 1e-9 * (1 + std::abs(delta))) {
                rep.rho6_case1 = delta < *theta;
                rep.rho6_case2 = delta > *theta;
                rep.rho6.status = nu_plus > std::min(delta, *theta) ? AssumptionStatus::holds
                                                                    : AssumptionStatus::fails;
                if (rep.rho6.status == AssumptionStatus::fails) {
                    rep.rho6.witness = Witness{0, nu_plus};
                    rep.rho6.note = "nu_+ <= min(delta, vartheta)";
                }
            } else {
                rep.rho6_case1 = true;  // delta = vartheta sits in the finite-limit branch
                const bool psi_settled = (psi_max - psi_min) <= 0.1 * psi_max;
                if (!psi_settled) {
                    rep.rho6.status = AssumptionStatus::unchecked;
                    rep.rho6.note = "psi has no visible limit on tail grid";
                } else {
                    rep.rho6.status = delta < static_cast<double>(p.n - 2 * p.k) / (p.k + 1)
                                          ? AssumptionStatus::holds
                                          : AssumptionStatus::fails;
                    if (rep.rho6.status == AssumptionStatus::fails) {
                        rep.rho6.witness = Witness{0, delta};
                        rep.rho6.note = "delta >= (n-2k)/(k+1)";
                    }
                }
            }
        } else {
            rep.rho6.status = AssumptionStatus::unchecked;
            rep.rho6.note = "no tail rate available";
        }
    }

    return rep;
}

}  // namespace khess
