// Two-scale kernel evaluators: the explicit series / hypergeometric /
// Meijer-G representations of the two-sided kernel H(t,x) and the one-sided
// kernel h(t,x), plus the closed-form example catalog.
#pragma once

#include <string>

#include "levy/oracle.hpp"
#include "levy/stable.hpp"

namespace levy {

/// Rational parameters of a two-component kernel, alpha1 = l/k with skew
/// integer a (beta1 = (l-2a)/k) and alpha2 = p/q with skew integer b, plus
/// the derived quantities every series formula shares.  (u, v) follow the
/// larger-exponent rule: u is the skew ratio a/k (resp. b/q) of the larger
/// alpha, v the one of the smaller.
struct TwoScaleRational {
    RationalExponent first;   // (l, k, a)
    RationalExponent second;  // (p, q, b)

    double m = 0.0;   // min(alpha1, alpha2)
    double M = 0.0;   // max(alpha1, alpha2)
    long m1 = 0;      // min(kp, lq)
    long M1 = 0;      // max(kp, lq)
    long lp = 0;      // l*p; equals M*m1 exactly
    double u = 0.0;   // skew ratio of the larger-exponent component
    double v = 0.0;   // skew ratio of the smaller-exponent component
    long u_m1 = 0;    // m1*u, always an integer

    /// Build from two admissible components with unit scale (gamma = 1).
    /// Throws DomainError for inadmissible parameters, non-unit gamma, or
    /// exponents with no small-denominator rational form.
    static TwoScaleRational make(const StableComponent& c1, const StableComponent& c2);

    void validate() const;
};

enum class KernelFormula {
    caseA,            // inverse-power double series / finite-hyper pair, max alpha < 1
    caseB,            // x-power double series / finite-hyper pair, max alpha > 1
    onesided_double,  // one-sided double series in 1/x powers
    onesided_hyper,   // one-sided finite hypergeometric sum (wide precision)
    meijer,           // one-sided Meijer-G single sum (residue expansion)
    catalog,          // closed/semi-closed example form or the 2t reduction
    oracle,           // Fourier-inversion fallback (equal alpha, different beta)
};

const char* to_string(KernelFormula f);

struct KernelResult {
    double value = 0.0;
    int n_terms_outer = 0;  // outer sweeps (anti-diagonals or rows)
    int n_terms_inner = 0;  // innermost terms accumulated in total
    double err_est = 0.0;
    KernelFormula formula_id = KernelFormula::caseA;
};

/// Two-sided kernel H(t,x) of the two-component law, gamma = 1 on both
/// components.  Dispatch: equal (alpha, beta) pairs reduce to the
/// single-scale density at 2t; equal alpha with different beta falls back
/// to Fourier inversion; otherwise the case-A series (both alpha < 1,
/// x^m >= t) or the case-B series (max alpha > 1, any x) is used, with
/// x < 0 handled by the skew-flip identity and x = 0 by the pure t-series
/// column.  Throws NumericError when x falls outside every series regime.
KernelResult kernel_H(const StableComponent& c1, const StableComponent& c2, double t,
                      double x, const SeriesControl& ctrl = {});

/// Case-A evaluation (both exponents below one, x > 0 with x^m >= t):
/// the inverse-power double series cross-checked against the finite
/// hypergeometric resummation; the two must agree within combined err_est.
KernelResult kernel_H_caseA(const TwoScaleRational& rat, double t, double x,
                            const SeriesControl& ctrl = {});

/// Case-B evaluation (max exponent above one, x >= 0): the x-power double
/// series cross-checked against the finite hypergeometric resummation.
KernelResult kernel_H_caseB(const TwoScaleRational& rat, double t, double x,
                            const SeriesControl& ctrl = {});

/// One-sided kernel h(t,x), both exponents in (0,1), x > 0.  Symmetric in
/// (alpha1, alpha2) by construction.  Regime dispatch: double series where
/// double precision holds, the wide-precision hypergeometric sum closer to
/// the origin, and the decay envelope (value 0, err_est = bound) once the
/// bound itself is below double noise.
KernelResult kernel_h_onesided(double alpha1, double alpha2, double t, double x,
                               const SeriesControl& ctrl = {});

/// Same kernel through one named representation (onesided_double,
/// onesided_hyper, or meijer); used by the cross-agreement checks.
KernelResult kernel_h_onesided_form(double alpha1, double alpha2, double t, double x,
                                    KernelFormula form, const SeriesControl& ctrl = {});

/// Closed/semi-closed catalog: biGauss, gaussLevy, gaussThreeHalf,
/// halfHalf, halfThird, thirdTwoThirds.  Unknown names raise DomainError.
double catalog_kernel(const std::string& name, double t, double x);

/// Tabulate kernel_H on the oracle's symmetric grid layout.  formula_id in
/// the profile header records the dispatch target ("mixed" if it varies
/// across the grid).
DensityProfile kernel_profile(const StableComponent& c1, const StableComponent& c2,
                              double t, double length, int n,
                              const SeriesControl& ctrl = {});

}  // namespace levy
