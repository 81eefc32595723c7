// Scalar special-function kernels: log-gamma and its identities, Pochhammer
// symbols, generalized hypergeometric series, Delta parameter lists, and the
// parabolic-cylinder / modified-Bessel / Whittaker evaluators.
#pragma once

#include <vector>

#include "levy/common.hpp"

namespace levy {

// ---------------------------------------------------------------------------
// Series plumbing

// Truncation control shared by every series evaluator. A series stops once
// `tail_window` consecutive terms fall below abs_tol + rel_tol*|partial sum|.
struct SeriesControl {
    int max_terms = 4000;
    double abs_tol = 1e-16;
    double rel_tol = 1e-14;
    int tail_window = 3;

    void validate() const;
};

struct SeriesResult {
    cplx value{0.0, 0.0};
    int n_terms = 0;
    double err_est = 0.0;  // magnitude of the last accepted term
};

// Upper (a_1..a_p) and lower (b_1..b_q) parameter lists of a pFq series.
struct ParamLists {
    std::vector<cplx> upper;
    std::vector<cplx> lower;
};

// ---------------------------------------------------------------------------
// Gamma-function kernels

// Principal-branch log-gamma for complex argument (Lanczos approximation,
// reflection for Re z < 1/2). Poles at z = 0, -1, -2, ... raise DomainError.
cplx ln_gamma(cplx z);

// 1/Gamma(x) for real x; returns 0 at the poles instead of raising.
double rgamma(double x);

// Gamma(x) for real non-pole x (sign-corrected exp of log-gamma).
double gamma_real(double x);

// Relative residual of Gamma(z)Gamma(1-z) = pi/sin(pi z); self-test hook.
double reflection_check(cplx z);

// Relative residual of the multiplication formula
// Gamma(n a) = (2 pi)^{(1-n)/2} n^{n a - 1/2} prod_{j=0}^{n-1} Gamma(a + j/n).
double gauss_legendre_check(cplx a, int n);

// Pochhammer symbol (a)_n as an n-fold product (valid at gamma poles too).
cplx pochhammer(cplx a, int n);

// The parameter list Delta(n, a) = {a/n, (a+1)/n, ..., (a+n-1)/n}.
std::vector<double> delta_list(int n, double a);

// Generalized hypergeometric series pFq(upper; lower; x), summed with the
// multiplicative term recurrence. Negative-integer upper parameters terminate
// the series exactly. Throws NumericError when max_terms is exhausted and
// DomainError for a non-positive-integer lower parameter.
SeriesResult phyper(const ParamLists& params, cplx x, const SeriesControl& ctrl);

// ---------------------------------------------------------------------------
// Named special functions (implemented on the parameter ranges the kernel
// formulas need; out-of-range requests raise DomainError).

// Parabolic cylinder function D_nu(z), nu in [-1, 40], |z| <= 37.
double parabolic_cylinder_D(double nu, double z);

// Modified Bessel function of the second kind K_nu(z), nu in [0, 2], z > 0.
double bessel_K(double nu, double z);

// Confluent hypergeometric function of the second kind U(a, b, z) for
// a > 0, non-integer b, z > 0 (helper shared by whittaker_W and tests).
double tricomi_U(double a, double b, double z);

// Whittaker W_{kappa,mu}(z) for z > 0 and non-integer 1 + 2 mu.
double whittaker_W(double kappa, double mu, double z);

}  // namespace levy
