#pragma once

#include <string>
#include <vector>

#include "levy/specfun.hpp"

namespace levy {

/// One (alpha, beta, gamma) triple defining a single-scale stable law with
/// characteristic function exp[-t gamma |w|^alpha e^{(i pi/2) beta sgn w}].
struct StableComponent {
    double alpha = 2.0;
    double beta = 0.0;
    double gamma = 1.0;

    /// Throws DomainError unless 0 < alpha <= 2, alpha != 1, gamma > 0, and
    /// |beta| <= alpha (alpha < 1) resp. |beta| <= 2 - alpha (alpha > 1).
    void validate() const;
};

/// Rational form alpha = num/den, beta = (num - 2 skew_num)/den.
struct RationalExponent {
    int num = 0;       // l (or p)
    int den = 1;       // k (or q)
    int skew_num = 0;  // a (or b)

    double alpha() const { return static_cast<double>(num) / den; }
    double beta() const { return static_cast<double>(num - 2 * skew_num) / den; }
};

/// Best rational approximation with den <= 64; DomainError if no fraction
/// matches alpha within 1e-9, or beta does not yield an integer skew_num.
RationalExponent rationalize(double alpha, double beta);

/// beta -> -beta; density at -x under the original equals density at x here.
StableComponent reflect(const StableComponent& c);

/// Self-similar time scaling: v(t,x) = t^{-1/alpha} v(1, x t^{-1/alpha}).
/// `v1` is the density already evaluated at (1, x t^{-1/alpha}).
double rescale(double v1, double alpha, double t, double x);

/// Closed-form catalog: "gauss" (2,0), "levy_smirnov" (1/2,-1/2),
/// "three_half" (3/2,-1/2), "one_third" (1/3,-1/3), "two_thirds" (2/3,-2/3).
/// One-sided entries return 0 for x <= 0.
double density_closed(const std::string& name, double t, double x);

/// One-sided density v_alpha(t,x), 0 < alpha < 1, x > 0, via the power
/// series in Gamma(1+alpha r)/x^{1+alpha r}.  Below the small-x regime
/// switch (x^alpha < t/2) the series is abandoned for the asymptotic
/// envelope and *low_precision is set.  `term_log`, when given, receives
/// the magnitude of every accumulated term (diagnostic for decay checks).
double one_sided_series(double alpha, double t, double x, const SeriesControl& ctl,
                        bool* low_precision = nullptr,
                        std::vector<double>* term_log = nullptr);

/// Saddle-point envelope of the one-sided density as x -> 0+:
/// K t^{1/(2(1-alpha))} x^{-(2-alpha)/(2-2alpha)} exp(-A t^{1/(1-alpha)}
/// x^{-alpha/(1-alpha)}).  A decay/positivity guard, not a precision value.
double small_x_asymptotic(double alpha, double t, double x);

}  // namespace levy
