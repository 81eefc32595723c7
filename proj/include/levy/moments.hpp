// Moment sequences of the one-sided two-scale kernels, the induced
// Stieltjes weight, Carleman-condition diagnostics, and the convexity
// probe of the log-weight.
#pragma once

#include <vector>

#include "levy/multiscale.hpp"

namespace levy {

enum class MomentVerdict {
    unique,                // Carleman terms decay no faster than 1/n
    non_unique_candidate,  // summable terms plus a convex log-weight
    inconclusive,          // summable terms but convexity not verified
};

const char* to_string(MomentVerdict v);

/// Which rho(n) the Stieltjes-order helpers evaluate.  `series` is the
/// module's own moment evaluation (the alternating series; Stieltjes
/// orders go through the equivalent exponential-transform integral, which
/// has a positive integrand and therefore no cancellation ceiling).
/// `catalog` is the closed Gamma-ratio table for the (1/2,1/2) and
/// (2/3,1/3) pairs.  For (2/3,1/3) the catalog entry disagrees with
/// quadrature of the kernel by orders of magnitude; both bases stay
/// exposed so either diagnostic can be reproduced, and `automatic`
/// prefers the catalog entry when one exists.
enum class MomentBasis { series, catalog, automatic };

/// Moments rho(mu) = int_0^inf x^mu h(t,x) dx over a list of orders.
/// Orders at or above min(alpha1, alpha2) diverge; their entries are NaN.
struct MomentSequence {
    std::vector<double> mu_values;
    std::vector<double> rho;
    double t = 1.0;
    TwoScaleRational spec;
};

struct CarlemanReport {
    std::vector<double> terms;         // rho(n)^{-1/(2n)}, n = 1..N
    std::vector<double> partial_sums;  // running sums of `terms`
    double fitted_decay = 0.0;         // s in terms ~ c n^{-s}, fitted on [N/10, N]
    MomentBasis basis_used = MomentBasis::series;
    MomentVerdict verdict = MomentVerdict::inconclusive;
};

/// Second derivative of psi(y) = -ln W(t, e^y) on a grid.  Entries where
/// the weight vanished (kernel at or below its decay envelope) are NaN and
/// excluded from the flags.
struct ConvexityReport {
    std::vector<double> y;
    std::vector<double> second;
    bool all_positive = false;   // every finite entry positive
    double window_start = 0.0;   // least y whose suffix stays positive; NaN if none
};

/// The alternating moment series
///   rho(mu) = (1/M) sum_r (-1)^r/r! Gamma((m r - mu)/M)/Gamma(-mu)
///             t^{(1 - m/M) r + mu/M},
/// m = min(alpha1, alpha2), M = max.  mu = 0 returns 1 exactly (the
/// Gamma-pole ratio limit).  Equal exponents collapse the pair to one
/// component at doubled time, where the series degenerates and the moment
/// is the closed Gamma ratio (2t)^{mu/alpha} G(1-mu/alpha)/G(1-mu).
/// Throws DomainError for non-one-sided components, t <= 0, or mu >= m
/// (divergent order); NumericError when alternation exhausts the working
/// precision (deep Stieltjes orders; use stieltjes_rho instead).
double moment_series(const TwoScaleRational& spec, double mu, double t,
                     const SeriesControl& ctrl = {});

/// moment_series over a list of orders; divergent orders become NaN
/// entries instead of throwing.
MomentSequence moment_sequence(const TwoScaleRational& spec,
                               const std::vector<double>& mu_values, double t,
                               const SeriesControl& ctrl = {});

/// True when the pair has a closed catalog moment formula.
bool has_catalog_moments(const TwoScaleRational& spec);

/// Closed catalog rho(n): 2 (2t)^{-2n} G(2n)/G(n) for (1/2,1/2) and
/// 3 t^{-6n} G(6n)/G(2n) for (2/3,1/3); n = 0 returns 1.  DomainError for
/// pairs without an entry.
double catalog_moment(const TwoScaleRational& spec, int n, double t);

/// Stieltjes-order moment rho(n) = rho(-lp n) of the weight W below.
/// NumericError if the value overflows double; use stieltjes_rho_ln then.
double stieltjes_rho(const TwoScaleRational& spec, int n, double t,
                     MomentBasis basis = MomentBasis::automatic,
                     const SeriesControl& ctrl = {});

/// ln rho(n); finite for every representable order.
double stieltjes_rho_ln(const TwoScaleRational& spec, int n, double t,
                        MomentBasis basis = MomentBasis::automatic,
                        const SeriesControl& ctrl = {});

/// The Stieltjes weight W(t,x) = (1/lp) x^{-1-1/lp} h(t, x^{-1/lp}), x > 0;
/// its integer moments are stieltjes_rho.  Zero where the kernel sits
/// below its decay envelope.
double stieltjes_weight(const TwoScaleRational& spec, double t, double x);

/// Carleman diagnostic over n = 1..n_terms (n_terms >= 10): terms
/// rho(n)^{-1/(2n)}, their partial sums, and the decay exponent fitted by
/// least squares on the last decade.  Verdict: `unique` when the fitted
/// exponent is <= 1 (the term series cannot converge), otherwise
/// `non_unique_candidate` when convexity_check passes on [-2, 2] and
/// `inconclusive` when it does not.  A finite-term heuristic, not a proof.
CarlemanReport carleman_diagnostic(const TwoScaleRational& spec, double t, int n_terms,
                                   MomentBasis basis = MomentBasis::automatic,
                                   const SeriesControl& ctrl = {});

/// psi''(y) for psi(y) = -ln W(t, e^y) = ln(lp) + y (1 + 1/lp)
/// - ln h(t, e^{-y/lp}), by central differences (step 1e-3, one Richardson
/// stage).  Throws NumericError when no grid point is evaluable.
ConvexityReport convexity_check(const TwoScaleRational& spec, double t,
                                const std::vector<double>& y_grid);

}  // namespace levy
