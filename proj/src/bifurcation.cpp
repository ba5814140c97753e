#include "khess/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "khess/numerics.hpp"

namespace khess {

namespace {

// cubic Hermite evaluation of a sampled profile
double eval_profile(const RadialSolution& sol, double r) {
    const auto& s = sol.samples;
    if (s.empty()) throw input_error("profile evaluation: empty profile");
    if (r <= s.front().r) return s.front().w;
    if (r >= s.back().r) return s.back().w;
    std::size_t lo = 0, hi = s.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (s[mid].r <= r)
            lo = mid;
        else
            hi = mid;
    }
    return num::hermite(r, s[lo].r, s[hi].r, s[lo].w, s[hi].w, s[lo].wprime, s[hi].wprime);
}

}  // namespace

Bifurcation::Bifurcation(ProblemParams p, WeightSpec wt, IntegratorConfig cfg)
    : params_(std::move(p)), weight_(std::move(wt)), cfg_(cfg) {
    params_.validate();
    singular_ = singular_solution(params_, weight_, cfg_);
    lambda_tilde_ = singular_.lambda_tilde;
}

double Bifurcation::lambda_of_a(double a) const {
    if (!(a > 0)) throw domain_error("lambda_of_a: a must be positive");
    ProblemParams p = params_;
    p.lambda = lambda_tilde_;
    IntegratorConfig cfg = cfg_;
    cfg.output_points = 32;
    cfg.compute_residual = false;
    const RadialSolution sol = solve_ivp(p, weight_, -a, 1.0, cfg);
    if (sol.truncated || sol.samples.empty())
        throw domain_error("lambda_of_a: profile left the chart (w reached 0) before r = 1");
    const double w1 = sol.samples.back().w;
    return lambda_tilde_ * std::pow(-w1, params_.q - params_.k);
}

BifurcationCurve Bifurcation::sweep(double a_min, double a_max, int count, int jobs) const {
    if (count < 16) throw domain_error("sweep: need count >= 16");
    if (!(0 < a_min && a_min < a_max)) throw domain_error("sweep: need 0 < a_min < a_max");
    BifurcationCurve curve;
    curve.params = params_;
    curve.lambda_tilde = lambda_tilde_;
    curve.a_min = a_min;
    curve.a_max = a_max;
    curve.count = count;

    const auto grid = num::log_grid(a_min, a_max, static_cast<std::size_t>(count));
    curve.points.resize(grid.size());

    jobs = std::max(1, jobs);
    std::exception_ptr first_error;
    std::mutex err_mutex;
    auto worker = [&](int w) {
        for (std::size_t i = w; i < grid.size(); i += jobs) {
            try {
                curve.points[i] = {grid[i], lambda_of_a(grid[i])};
            } catch (...) {
                std::scoped_lock lk(err_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    if (jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (int w = 0; w < jobs; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);
    return curve;
}

int Bifurcation::count_solutions(const BifurcationCurve& curve, double lambda_query) const {
    if (curve.points.empty()) throw input_error("count_solutions: empty curve");
    double max_lambda = 0;
    for (const auto& pt : curve.points) max_lambda = std::max(max_lambda, pt.lambda);
    if (lambda_query < 0 || lambda_query > max_lambda) return 0;

    int count = 0;
    for (std::size_t i = 0; i + 1 < curve.points.size(); ++i) {
        const double f0 = curve.points[i].lambda - lambda_query;
        const double f1 = curve.points[i + 1].lambda - lambda_query;
        if (f0 == 0) {
            ++count;
            continue;
        }
        if (f0 * f1 >= 0) continue;
        // refine on a (each probe is one integration)
        double lo = curve.points[i].a, hi = curve.points[i + 1].a;
        double flo = f0;
        for (int it = 0; it < 60 && (hi - lo) >= 1e-6 * lo; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double fm = lambda_of_a(mid) - lambda_query;
            if (fm == 0) break;
            if (flo * fm < 0) {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        ++count;
    }
    // exact zero at the last grid point
    if (curve.points.back().lambda == lambda_query) ++count;
    return count;
}

int intersection_count(const RadialSolution& singular, const RadialSolution& regular, double r_lo,
                       double r_hi) {
    if (singular.samples.empty() || regular.samples.empty())
        throw input_error("intersection_count: empty profile");
    const double lo =
        std::max({r_lo, singular.samples.front().r, regular.samples.front().r});
    const double hi = std::min({r_hi, singular.samples.back().r, regular.samples.back().r});
    if (!(lo < hi)) throw input_error("intersection_count: profiles do not overlap the interval");

    // merged grid of both profiles' abscissae inside [lo, hi]
    std::vector<double> grid;
    grid.push_back(lo);
    for (const auto& s : singular.samples)
        if (s.r > lo && s.r < hi) grid.push_back(s.r);
    for (const auto& s : regular.samples)
        if (s.r > lo && s.r < hi) grid.push_back(s.r);
    grid.push_back(hi);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    auto diff = [&](double r) { return eval_profile(singular, r) - eval_profile(regular, r); };

    int count = 0;
    double prev_r = grid.front();
    double prev_d = diff(prev_r);
    int prev_sign = (prev_d > 0) - (prev_d < 0);
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double d = diff(grid[i]);
        const int sign = (d > 0) - (d < 0);
        if (sign != 0 && prev_sign != 0 && sign != prev_sign) {
            // confirm by bisection on the interpolants
            double a = prev_r, b = grid[i];
            double fa = prev_d;
            for (int it = 0; it < 60 && (b - a) > 1e-6 * std::max(1e-12, a); ++it) {
                const double m = 0.5 * (a + b);
                const double fm = diff(m);
                if (fa * fm <= 0)
                    b = m;
                else {
                    a = m;
                    fa = fm;
                }
            }
            ++count;
        }
        if (sign != 0) {
            prev_sign = sign;
            prev_d = d;
            prev_r = grid[i];
        }
    }
    return count;
}

RadialSolution rescale_Fa(const RadialSolution& sol, double a, double l0) {
    if (!(a > 0)) throw domain_error("rescale_Fa: a must be positive");
    const double gs = (sol.params.q - sol.params.k) / (2.0 * sol.params.k + l0);
    const double scale_r = std::pow(a, gs);
    RadialSolution out = sol;
    out.w0 = sol.w0 / a;
    for (auto& s : out.samples) {
        s.r *= scale_r;
        s.w /= a;
        s.wprime /= a * scale_r;
    }
    return out;
}

}  // namespace khess
