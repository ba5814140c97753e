#include "khess/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace khess::num {

LineFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw fit_error("linear_fit: need >= 2 samples");
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0) throw fit_error("linear_fit: degenerate abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (f.intercept + f.slope * x[i]);
        ss += e * e;
    }
    f.residual = std::sqrt(ss / n);
    return f;
}

double aitken_limit(std::span<const double> seq, double* spread) {
    if (seq.size() < 3) throw estimation_error("aitken: need >= 3 terms");
    std::vector<double> acc;
    for (std::size_t i = 0; i + 2 < seq.size(); ++i) {
        const double d1 = seq[i + 1] - seq[i];
        const double d2 = seq[i + 2] - seq[i + 1];
        const double den = d2 - d1;
        const double scale = std::abs(seq[i + 2]) + std::abs(seq[i + 1]) + 1.0;
        if (std::abs(den) < 1e-14 * scale) {
            // sequence already flat at this tail
            acc.push_back(seq[i + 2]);
        } else {
            acc.push_back(seq[i + 2] - d2 * d2 / den);
        }
    }
    const std::size_t m = acc.size();
    const std::size_t take = std::min<std::size_t>(3, m);
    double lo = acc[m - take], hi = acc[m - take];
    for (std::size_t i = m - take; i < m; ++i) {
        lo = std::min(lo, acc[i]);
        hi = std::max(hi, acc[i]);
    }
    if (spread) *spread = hi - lo;
    return acc.back();
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4 * fm + fb);
}

double adapt(const std::function<double(double)>& f, double a, double fa, double b, double fb,
             double m, double fm, double whole, double rel_tol, double abs_tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    const double tol = std::max(abs_tol, rel_tol * std::abs(left + right));
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adapt(f, a, fa, m, fm, lm, flm, left, rel_tol, 0.5 * abs_tol, depth - 1) +
           adapt(f, m, fm, b, fb, rm, frm, right, rel_tol, 0.5 * abs_tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                 double abs_tol) {
    if (a == b) return 0.0;
    const double m = 0.5 * (a + b);
    const double fa = f(a), fb = f(b), fm = f(m);
    if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
        throw numeric_error("integrate: non-finite integrand");
    const double whole = simpson(a, fa, b, fb, fm);
    return adapt(f, a, fa, b, fb, m, fm, whole, rel_tol, abs_tol, 48);
}

std::vector<double> log_grid(double a, double b, std::size_t count) {
    if (!(a > 0) || !(b > 0)) throw domain_error("log_grid: endpoints must be positive");
    if (count < 2) throw domain_error("log_grid: need >= 2 points");
    std::vector<double> g(count);
    const double la = std::log(a), lb = std::log(b);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = std::exp(la + (lb - la) * static_cast<double>(i) / (count - 1));
    g.front() = a;
    g.back() = b;
    return g;
}

std::vector<double> uniform_grid(double a, double b, std::size_t count) {
    if (count < 2) throw domain_error("uniform_grid: need >= 2 points");
    std::vector<double> g(count);
    for (std::size_t i = 0; i < count; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / (count - 1);
    g.back() = b;
    return g;
}

}  // namespace khess::num
