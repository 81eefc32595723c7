#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "levy/common.hpp"
#include "levy/stable.hpp"

namespace levy {

/// Ordered list of stable components; the process is their independent sum,
/// so the log-characteristic function is the sum of the components'.
struct MultiscaleSpec {
    std::vector<StableComponent> components;

    /// Throws DomainError unless the list is nonempty, every component is
    /// admissible, and the alphas are strictly increasing.
    void validate() const;
};

/// Tuning for the Fourier-inversion quadrature.  `omega_max` caps the
/// frequency cutoff, `panels` caps the total Gauss-Legendre panel count,
/// `tol` is the absolute-error target per evaluated point.
struct QuadControl {
    double omega_max = 1.0e6;
    int panels = 4000;
    double tol = 1.0e-8;

    void validate() const;
};

/// Uniformly sampled density curve: n points x_i = -length + i * step on
/// [-length, length), step = 2 length / n, with provenance metadata.
/// Grid-level operations refuse inputs whose (length, n) disagree.
struct DensityProfile {
    double length = 0.0;
    int n = 0;
    double t = 0.0;
    std::string fingerprint;  // component list or derivation trail
    std::string formula_id;   // which evaluator produced the values
    std::vector<double> value;

    double step() const { return 2.0 * length / n; }
    double x_at(int i) const { return -length + i * step(); }
    /// Throws DomainError unless n >= 2, n even, length > 0, and
    /// value.size() == n.
    void validate() const;
};

/// "a=<alpha> b=<beta> g=<gamma>" per component, joined by "; ".  Stable
/// under round-trip at 17 significant digits; used as profile provenance
/// and for grid-compatibility checks.
std::string spec_fingerprint(const MultiscaleSpec& spec);

/// Log-characteristic function psi(w) = sum_j -gamma_j |w|^{alpha_j}
/// e^{(i pi/2) beta_j sgn w}; psi(0) = 0 exactly and psi(-w) = conj(psi(w)).
cplx char_exponent(const MultiscaleSpec& spec, double omega);

/// Density at (t, x) by direct inversion,
///   (1/pi) Re int_0^inf e^{-i x w} exp(t psi(w)) dw,
/// with x < 0 routed through the beta-flip reflection.  Oscillation-keyed
/// Gauss-Legendre panels up to a finite cutoff plus a three-term analytic
/// integration-by-parts tail.  `err_out`, when given, receives the internal
/// absolute-error estimate.  Throws NumericError (message includes the
/// achieved estimate) if the target q.tol cannot be certified within the
/// q.omega_max / q.panels budget.
double invert_fourier(const MultiscaleSpec& spec, double t, double x,
                      const QuadControl& q, double* err_out = nullptr);

/// Tabulates invert_fourier on the uniform grid of (length, n) at time t.
DensityProfile inversion_profile(const MultiscaleSpec& spec, double t,
                                 double length, int n, const QuadControl& q);

/// Discrete linear convolution scaled by the grid step, restricted to the
/// common grid (mass beyond [-length, length) is truncated; a stderr
/// warning fires when the inputs carry visible edge mass).  Throws
/// DomainError when the grids disagree.
DensityProfile convolve_grid(const DensityProfile& f, const DensityProfile& g);

/// Trapezoidal mass step * sum(value) (the periodic-grid Riemann sum).
double profile_mass(const DensityProfile& p);

/// CSV serialization: '#'-prefixed header lines carrying t, the grid, the
/// fingerprint and formula id, then rows "x,value" at 17 significant
/// digits (bit-exact round-trip through read_profile_csv).
void write_profile_csv(std::ostream& os, const DensityProfile& p);
DensityProfile read_profile_csv(std::istream& is);

}  // namespace levy
