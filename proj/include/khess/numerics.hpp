// Numerical kernels: embedded Runge-Kutta integration, adaptive quadrature,
// sequence acceleration, least-squares line fits, cubic Hermite interpolation.
#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "khess/common.hpp"

namespace khess::num {

inline constexpr double pi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Least-squares line fit. residual is the rms misfit.
struct LineFit {
    double slope = 0;
    double intercept = 0;
    double residual = 0;
};

LineFit linear_fit(std::span<const double> x, std::span<const double> y);

// Aitken delta-squared acceleration of a convergent sequence. Returns the
// accelerated limit; *spread receives the spread of the final accelerated
// values (diagnostic for "did the sequence actually settle").
double aitken_limit(std::span<const double> seq, double* spread = nullptr);

// ---------------------------------------------------------------------------
// Adaptive Simpson quadrature with Richardson correction.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12, double abs_tol = 1e-300);

// Fixed 5-point Gauss-Legendre rule on [a, b].
template <class F>
double gauss5(F&& f, double a, double b) {
    static constexpr double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                     0.5384693101056831, 0.9061798459386640};
    static constexpr double ws[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                     0.4786286704993665, 0.2369268850561891};
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double s = 0;
    for (int i = 0; i < 5; ++i) s += ws[i] * f(c + h * xs[i]);
    return s * h;
}

// ---------------------------------------------------------------------------
// Cubic Hermite interpolation on [x0, x1] from endpoint values and slopes.
inline double hermite(double x, double x0, double x1, double y0, double y1, double d0, double d1) {
    const double h = x1 - x0;
    const double s = (x - x0) / h;
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * h * d0 + (-2 * s3 + 3 * s2) * y1 +
           (s3 - s2) * h * d1;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4) with PI-free classic step control.
struct OdeOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    std::size_t max_steps = 4'000'000;
};

enum class OdeStatus { ok, halted, step_underflow, max_steps };

struct OdeStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
};

namespace detail {
template <std::size_t N, class F>
void eval(F& f, double t, const std::array<double, N>& y, std::array<double, N>& dy) {
    f(t, y, dy);
}
}  // namespace detail

// Integrates y' = f(t, y) from t0 to t1 (either direction). After every
// accepted step halt(t, y) is consulted; returning true stops the run with
// status halted and y holding the state at the halt point.
template <std::size_t N, class F, class Halt>
OdeStatus rk45(F&& f, std::array<double, N>& y, double t0, double t1, const OdeOptions& opt,
               OdeStats& stats, Halt&& halt) {
    using V = std::array<double, N>;
    if (t0 == t1) return OdeStatus::ok;
    const double dir = (t1 > t0) ? 1.0 : -1.0;

    V k1, k2, k3, k4, k5, k6, k7, ytmp, ynew;
    double t = t0;
    detail::eval<N>(f, t, y, k1);

    double h = dir * std::min(std::abs(t1 - t0), std::max(1e-8, 1e-3 * std::abs(t1 - t0)));
    bool have_k1 = true;

    const double ulp = 16 * std::numeric_limits<double>::epsilon();
    while (dir * (t1 - t) > 0) {
        if (stats.steps + stats.rejected > opt.max_steps) return OdeStatus::max_steps;
        if (dir * (t + h) > dir * t1) h = t1 - t;
        if (std::abs(h) < ulp * std::abs(t) + 1e-300) return OdeStatus::step_underflow;
        if (!have_k1) detail::eval<N>(f, t, y, k1);
        have_k1 = true;

        for (std::size_t i = 0; i < N; ++i) ytmp[i] = y[i] + h * (0.2 * k1[i]);
        detail::eval<N>(f, t + 0.2 * h, ytmp, k2);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (3.0 / 40 * k1[i] + 9.0 / 40 * k2[i]);
        detail::eval<N>(f, t + 0.3 * h, ytmp, k3);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (44.0 / 45 * k1[i] - 56.0 / 15 * k2[i] + 32.0 / 9 * k3[i]);
        detail::eval<N>(f, t + 0.8 * h, ytmp, k4);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (19372.0 / 6561 * k1[i] - 25360.0 / 2187 * k2[i] +
                                  64448.0 / 6561 * k3[i] - 212.0 / 729 * k4[i]);
        detail::eval<N>(f, t + 8.0 / 9 * h, ytmp, k5);
        for (std::size_t i = 0; i < N; ++i)
            ytmp[i] = y[i] + h * (9017.0 / 3168 * k1[i] - 355.0 / 33 * k2[i] +
                                  46732.0 / 5247 * k3[i] + 49.0 / 176 * k4[i] -
                                  5103.0 / 18656 * k5[i]);
        detail::eval<N>(f, t + h, ytmp, k6);
        for (std::size_t i = 0; i < N; ++i)
            ynew[i] = y[i] + h * (35.0 / 384 * k1[i] + 500.0 / 1113 * k3[i] + 125.0 / 192 * k4[i] -
                                  2187.0 / 6784 * k5[i] + 11.0 / 84 * k6[i]);
        detail::eval<N>(f, t + h, ynew, k7);

        // embedded 4th-order error estimate
        double err = 0;
        for (std::size_t i = 0; i < N; ++i) {
            const double e =
                h * (71.0 / 57600 * k1[i] - 71.0 / 16695 * k3[i] + 71.0 / 1920 * k4[i] -
                     17253.0 / 339200 * k5[i] + 22.0 / 525 * k6[i] - 1.0 / 40 * k7[i]);
            const double sc =
                opt.abs_tol + opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            if (sc > 0) {
                const double r = e / sc;
                err += r * r;
            }
        }
        err = std::sqrt(err / N);

        if (err <= 1.0 || std::abs(h) <= 2 * ulp * std::abs(t)) {
            t += h;
            y = ynew;
            k1 = k7;  // FSAL
            ++stats.steps;
            if (halt(t, y)) return OdeStatus::halted;
        } else {
            ++stats.rejected;
            have_k1 = true;  // k1 still valid at unchanged (t, y)
        }
        const double fac =
            (err == 0) ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2)));
        h *= fac;
    }
    return OdeStatus::ok;
}

template <std::size_t N, class F>
OdeStatus rk45(F&& f, std::array<double, N>& y, double t0, double t1, const OdeOptions& opt,
               OdeStats& stats) {
    return rk45<N>(std::forward<F>(f), y, t0, t1, opt, stats,
                   [](double, const std::array<double, N>&) { return false; });
}

// Integrate across an ordered set of output abscissae, invoking
// out(t_out[i], y) at each one. Output points must be monotone in the
// direction of integration and start at or after t0.
template <std::size_t N, class F, class Out, class Halt>
OdeStatus rk45_path(F&& f, std::array<double, N> y, double t0, std::span<const double> t_out,
                    Out&& out, const OdeOptions& opt, OdeStats& stats, Halt&& halt) {
    double t = t0;
    for (double target : t_out) {
        if (target == t) {
            out(t, y);
            if (halt(t, y)) return OdeStatus::halted;
            continue;
        }
        const OdeStatus st = rk45<N>(f, y, t, target, opt, stats, halt);
        if (st != OdeStatus::ok) return st;
        t = target;
        out(t, y);
        if (halt(t, y)) return OdeStatus::halted;
    }
    return OdeStatus::ok;
}

// Geometric grid with `count` points from a to b inclusive (a, b > 0).
std::vector<double> log_grid(double a, double b, std::size_t count);

// Uniform grid with `count` points from a to b inclusive.
std::vector<double> uniform_grid(double a, double b, std::size_t count);

}  // namespace khess::num
