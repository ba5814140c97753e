// Shared error taxonomy and small value types.
#pragma once

#include <numeric>
#include <stdexcept>
#include <string>

namespace khess {

// Base of all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid inputs to a mathematically defined operation (preconditions violated).
struct domain_error : error {
    using error::error;
};

// Numerical failure: non-convergent quadrature, step-size underflow, bad radicand.
struct numeric_error : error {
    using error::error;
};

// Limit extrapolation did not settle.
struct estimation_error : numeric_error {
    using numeric_error::numeric_error;
};

// Weight construction from R failed (divergent integral).
struct construction_error : numeric_error {
    using numeric_error::numeric_error;
};

// Malformed user data (CSV tables, sample arrays).
struct input_error : error {
    using error::error;
};

// Not enough usable samples for a requested fit.
struct fit_error : numeric_error {
    using numeric_error::numeric_error;
};

// Config file problems (reported separately so the CLI can exit with EX_NOINPUT).
struct config_error : error {
    using error::error;
};

// Exact small rational, used for c_{n,k} = binom(n,k)/n.
struct Rational {
    long long num = 0;
    long long den = 1;

    constexpr double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    static Rational reduced(long long n, long long d) {
        const long long g = std::gcd(n, d);
        return {n / g, d / g};
    }
};

// Problem data (n, k, q, lambda) for S_k(D^2 u) = lambda rho(|x|) (1-u)^q.
struct ProblemParams {
    int n = 3;
    int k = 1;
    double q = 3.0;
    double lambda = 1.0;

    void validate() const {
        if (k < 1) throw domain_error("params: k must be a positive integer");
        if (n <= 2 * k) throw domain_error("params: require n > 2k");
        if (!(q > k)) throw domain_error("params: require q > k");
        if (!(lambda > 0)) throw domain_error("params: require lambda > 0");
    }
};

}  // namespace khess
