// Shared error types and small utilities for the toolkit.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace levy {

using cplx = std::complex<double>;

// Parameter outside the supported domain (bad input, inadmissible spec).
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Evaluation started but could not reach the requested accuracy
// (series non-convergence, quadrature tolerance miss, overflow risk).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver-specific failure: the solution norm grew past the abort threshold.
struct BlowUpError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Requested feature is declared out of scope (not a bad input: the parameter
// combination is meaningful but deliberately unsupported).
struct NotImplementedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kSqrtPi = 1.77245385090551602729816748334114518;
inline constexpr double kSqrt2Pi = 2.50662827463100050241576528481104525;

inline bool near_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) < tol;
}

inline bool is_nonpositive_integer(double x, double tol = 1e-12) {
    return x < 0.5 && near_integer(x, tol);
}

}  // namespace levy
