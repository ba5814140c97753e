#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "khess/bifurcation.hpp"
#include "khess/numerics.hpp"

using namespace khess;

namespace {

const ProblemParams canonical{3, 1, 6.0, 1.0};

const Bifurcation& canonical_bif() {
    static Bifurcation bif(canonical, weights::constant(1.0));
    return bif;
}

}  // namespace

TEST_CASE("lambda(a) endpoints and fixture") {
    const auto& bif = canonical_bif();
    CHECK(bif.lambda_tilde() == doctest::Approx(0.24).epsilon(1e-10));
    // a -> 0+: the rescaled level collapses
    CHECK(bif.lambda_of_a(1e-3) < 1e-10);
    CHECK(bif.lambda_of_a(1e-3) > 0);
    // regression fixture, first recorded 2026-08 (2% tolerance)
    CHECK(bif.lambda_of_a(1.0) == doctest::Approx(0.198419).epsilon(0.02));
    CHECK_THROWS_AS(bif.lambda_of_a(-1.0), domain_error);
}

TEST_CASE("sweep: structure, continuity, initial monotone branch") {
    const auto& bif = canonical_bif();
    const auto curve = bif.sweep(1e-3, 1e4, 64);
    REQUIRE(curve.points.size() == 64);
    double max_lambda = 0;
    for (std::size_t i = 0; i < curve.points.size(); ++i) {
        CHECK(curve.points[i].lambda > 0);
        if (i) CHECK(curve.points[i].a > curve.points[i - 1].a);
        max_lambda = std::max(max_lambda, curve.points[i].lambda);
    }
    CHECK(bif.lambda_of_a(1.0) < max_lambda);
    // continuity sanity: no jump exceeds 10x the neighbouring secants
    for (std::size_t i = 1; i + 2 < curve.points.size(); ++i) {
        const double d0 = std::abs(curve.points[i].lambda - curve.points[i - 1].lambda);
        const double d1 = std::abs(curve.points[i + 1].lambda - curve.points[i].lambda);
        const double d2 = std::abs(curve.points[i + 2].lambda - curve.points[i + 1].lambda);
        CHECK(d1 <= 10.0 * (d0 + d2) + 1e-12);
    }
    // small-amplitude branch is increasing
    for (std::size_t i = 1; i < curve.points.size() && curve.points[i].a <= 1e-1; ++i)
        CHECK(curve.points[i].lambda > curve.points[i - 1].lambda);
    CHECK(curve.lambda_tilde == doctest::Approx(0.24).epsilon(1e-10));

    CHECK_THROWS_AS(bif.sweep(1.0, 1e4, 8), domain_error);
    CHECK_THROWS_AS(bif.sweep(2.0, 1.0, 32), domain_error);
}

TEST_CASE("sweep is deterministic and job-count independent") {
    const auto& bif = canonical_bif();
    const auto c1 = bif.sweep(1.0, 100.0, 24, 1);
    const auto c4 = bif.sweep(1.0, 100.0, 24, 4);
    REQUIRE(c1.points.size() == c4.points.size());
    for (std::size_t i = 0; i < c1.points.size(); ++i) {
        CHECK(c1.points[i].a == c4.points[i].a);
        CHECK(c1.points[i].lambda == c4.points[i].lambda);
    }
}

TEST_CASE("count_solutions") {
    const auto& bif = canonical_bif();
    const auto curve = bif.sweep(1.0, 1e4, 48);
    // regression fixture, first recorded 2026-08: exactly 8 crossings of the
    // singular level on this grid
    const int at_level = bif.count_solutions(curve, 0.24);
    CHECK(at_level >= 3);
    CHECK(at_level == 8);
    CHECK(bif.count_solutions(curve, 1.0) == 0);    // above the curve
    CHECK(bif.count_solutions(curve, -0.1) == 0);   // outside [0, max]
    // lower semicontinuity away from extrema: perturbed level keeps crossings
    CHECK(bif.count_solutions(curve, 0.24 + 1e-6) >= 3);
    CHECK(bif.count_solutions(curve, 0.24 - 1e-6) >= 3);
    // a level slightly below the first local maximum is crossed at least twice
    std::size_t first_max = 0;
    for (std::size_t i = 1; i + 1 < curve.points.size(); ++i) {
        if (curve.points[i].lambda > curve.points[i - 1].lambda &&
            curve.points[i].lambda > curve.points[i + 1].lambda) {
            first_max = i;
            break;
        }
    }
    REQUIRE(first_max > 0);
    CHECK(bif.count_solutions(curve, 0.999 * curve.points[first_max].lambda) >= 2);
}

TEST_CASE("lambda(a) approaches the singular level along decades") {
    // the spiral envelope decays like a^{-0.25}; decade values are nearly
    // phase-locked, so the gaps themselves decrease decade over decade
    const auto& bif = canonical_bif();
    const double g2 = std::abs(bif.lambda_of_a(1e2) - 0.24);
    const double g3 = std::abs(bif.lambda_of_a(1e3) - 0.24);
    const double g4 = std::abs(bif.lambda_of_a(1e4) - 0.24);
    CHECK(g3 < g2);
    CHECK(g4 < g3);
    CHECK(g4 / g3 == doctest::Approx(std::pow(10.0, -0.25)).epsilon(0.05));
}

TEST_CASE("intersection counting: identical and disjoint profiles") {
    RadialSolution a;
    a.params = canonical;
    a.weight = weights::constant(1.0);
    for (double r : num::log_grid(0.1, 10.0, 50))
        a.samples.push_back({r, -1.0 / r, 1.0 / (r * r)});
    CHECK(intersection_count(a, a, 0.1, 10.0) == 0);
    RadialSolution b = a;
    for (auto& s : b.samples) s.w -= 0.5;  // strictly below: no crossings
    CHECK(intersection_count(a, b, 0.1, 10.0) == 0);
    RadialSolution far = a;
    for (auto& s : far.samples) s.r += 100.0;
    CHECK_THROWS_AS(intersection_count(a, far, 0.1, 10.0), input_error);
}

TEST_CASE("intersections between regular and singular profiles grow with a") {
    const auto& bif = canonical_bif();
    ProblemParams pt = canonical;
    pt.lambda = bif.lambda_tilde();
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-16;
    cfg.output_points = 6000;
    const auto wc = weights::constant(1.0);
    int prev = -1;
    // regression fixtures, first recorded 2026-08
    const int expected[] = {2, 4, 6, 7};
    int idx = 0;
    for (double a : {10.0, 1e2, 1e3, 1e4}) {
        const auto reg = solve_ivp(pt, wc, -a, 1.0, cfg);
        const int z = intersection_count(bif.singular_profile(), reg, 1e-9, 1.0);
        CHECK(z >= prev);  // nondecreasing along a
        CHECK(z == expected[idx++]);
        prev = z;
    }
}

TEST_CASE("intersections of the scale-invariant pair grow with the interval") {
    // regular vs singular solution of the limiting equation: crossings
    // accumulate as the right endpoint grows
    const auto& bif = canonical_bif();
    ProblemParams pt = canonical;
    pt.lambda = bif.lambda_tilde();
    const auto wc = weights::constant(1.0);
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-16;
    cfg.output_points = 6000;
    const auto U = solve_ivp(pt, wc, -1.0, 1e6, cfg);
    RadialSolution sing;
    sing.params = pt;
    sing.weight = wc;
    for (const auto& s : U.samples)
        sing.samples.push_back({s.r, -std::pow(s.r, -0.4), 0.4 * std::pow(s.r, -1.4)});
    int prev = 0;
    for (double R : {1e2, 1e4, 1e6}) {
        const int z = intersection_count(sing, U, 1e-6, R);
        CHECK(z >= prev);
        prev = z;
    }
    CHECK(prev >= 5);
}

TEST_CASE("amplitude rescaling") {
    RadialSolution sol;
    sol.params = canonical;  // q-k = 5, 2k+l0 = 2 -> gs = 5/2
    sol.weight = weights::constant(1.0);
    sol.w0 = -1;
    for (double r : num::log_grid(0.01, 100.0, 64))
        sol.samples.push_back({r, -std::pow(r, -0.4), 0.4 * std::pow(r, -1.4)});

    // identity at a = 1
    const auto id = rescale_Fa(sol, 1.0, 0.0);
    CHECK(id.samples[10].r == doctest::Approx(sol.samples[10].r));
    CHECK(id.samples[10].w == doctest::Approx(sol.samples[10].w));

    // scale invariance of the pure-power profile: -C r^{-1/gs} is fixed
    const auto sc = rescale_Fa(sol, 7.0, 0.0);
    for (std::size_t i = 0; i < sc.samples.size(); i += 9) {
        const double r = sc.samples[i].r;
        CHECK(sc.samples[i].w == doctest::Approx(-std::pow(r, -0.4)).epsilon(1e-12));
        CHECK(sc.samples[i].wprime == doctest::Approx(0.4 * std::pow(r, -1.4)).epsilon(1e-12));
    }
}

namespace {

double profile_value_at(const RadialSolution& s, double r) {
    std::size_t lo = 0, hi = s.samples.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        (s.samples[mid].r <= r ? lo : hi) = mid;
    }
    const auto &a = s.samples[lo], &b = s.samples[hi];
    return num::hermite(r, a.r, b.r, a.w, b.w, a.wprime, b.wprime);
}

}  // namespace

TEST_CASE("rescaled regular profiles: exact invariance for the pure power") {
    // K(r) is constant for the canonical weight, so the rescaled profile IS
    // the limiting one for every a; the sup distance is pure integration noise
    const auto& bif = canonical_bif();
    ProblemParams pt = canonical;
    pt.lambda = bif.lambda_tilde();
    const auto wc = weights::constant(1.0);
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-16;
    cfg.output_points = 4000;
    const auto U = solve_ivp(pt, wc, -1.0, 10.0, cfg);
    for (double a : {10.0, 1e2, 1e3}) {
        const auto w = solve_ivp(pt, wc, -a, 1.0, cfg);
        const auto resc = rescale_Fa(w, a, 0.0);
        double sup = 0;
        for (double r : num::uniform_grid(0.1, 2.0, 60))
            sup = std::max(sup, std::abs(profile_value_at(resc, r) - profile_value_at(U, r)));
        CHECK(sup < 1e-6);
    }
}

TEST_CASE("rescaled regular profiles converge for a genuinely varying K") {
    // matukuma weight: K(r) = (1+r^2)^{-1} varies, so the convergence towards
    // the power-weight limit profile is genuine and monotone in a
    const ProblemParams p{3, 1, 6.0, 1.0};
    const auto wm = weights::matukuma(2.0);
    IntegratorConfig cfg;
    cfg.abs_tol = 1e-16;
    cfg.output_points = 4000;
    Bifurcation bif(p, wm, cfg);
    ProblemParams pt = p;
    pt.lambda = bif.lambda_tilde();
    // limiting problem: power weight K(0) r^{l0} = 1 at the same parameter
    const auto U = solve_ivp(pt, weights::constant(1.0), -1.0, 10.0, cfg);
    double prev = 1e300;
    for (double a : {10.0, 1e2, 1e3}) {
        const auto w = solve_ivp(pt, wm, -a, 1.0, cfg);
        const auto resc = rescale_Fa(w, a, wm.l0);
        double sup = 0;
        for (double r : num::uniform_grid(0.1, 2.0, 60))
            sup = std::max(sup, std::abs(profile_value_at(resc, r) - profile_value_at(U, r)));
        CHECK(sup < prev);
        prev = sup;
    }
    CHECK(prev < 5e-3);
}
