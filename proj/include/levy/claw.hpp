#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "levy/common.hpp"
#include "levy/oracle.hpp"

namespace levy {

/// Flux law g(u) = c * u * |u|^{r-1}.  When `custom` is set it replaces the
/// power law entirely and r, c are ignored.  c = 0 switches the nonlinear
/// term off (pure linear evolution).
struct Nonlinearity {
    double r = 2.0;
    double c = 1.0;
    std::function<double(double)> custom;

    double flux(double u) const;
    bool zero() const { return !custom && c == 0.0; }
};

/// Periodic pseudospectral run description on [-L, L) with N grid points.
/// The linear operator is the Fourier multiplier of `spec`; the time stepper
/// treats it exactly, so dt is constrained only by the nonlinear term.
struct SolverConfig {
    double half_width = 40.0;  // L
    int n_modes = 1024;        // N, power of two, >= 64
    double dt = 0.01;
    double t_end = 1.0;
    MultiscaleSpec spec;
    Nonlinearity g;
    bool dealias = true;
    /// Estimated mass of the linear kernel at t_end beyond [-L, L) must stay
    /// below this; raise it deliberately for heavy-tailed long runs.
    double tail_budget = 1e-8;
    /// Snapshot times, strictly increasing, within (0, t_end].  t = 0 and
    /// t_end are always recorded; an empty list records only those two.
    std::vector<double> output_times;

    void validate() const;  // throws DomainError, message names the field
    double min_alpha() const;
    /// r > max(min_alpha, 1): the regime where the long-time behavior is
    /// expected to be linear-dominated.  False when a custom flux is set.
    bool supercritical() const;
};

/// Leading-order estimate of the linear kernel's mass outside [-L, L) at
/// time t: exact Gaussian tail for alpha = 2 components, the power-law
/// envelope 2 t gamma Gamma(alpha) sin(pi alpha / 2) / pi * L^{-alpha}
/// otherwise, summed over components.  An order-of-magnitude guard, not a
/// sharp bound.
double linear_tail_mass(const MultiscaleSpec& spec, double t, double L);

struct SnapshotStats {
    double mass = 0.0;
    double l1 = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double min = 0.0;
    double max = 0.0;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<std::vector<double>> snapshots;
    std::vector<SnapshotStats> stats;
    double dx = 0.0;
    /// Largest fraction of spectral energy seen in the top third of the
    /// frequency range at any recorded time; above 1e-6 the grid is flagged
    /// as under-resolved.
    double tail_energy_peak = 0.0;
    bool aliasing_warning = false;
};

/// Grid points x_j = -L + j * (2L/N), j = 0..N-1.
std::vector<double> grid_points(int n_modes, double L);

/// Discrete L^p norm (dx * sum |u|^p)^{1/p}; p = INFINITY gives max |u|.
/// Throws DomainError for p < 1.
double grid_norm(const std::vector<double>& u, double dx, double p);

/// Unit-integral Gaussian bump scaled to the given mass, sampled on the grid.
std::vector<double> gaussian_bump(int n_modes, double L, double mass,
                                  double width, double center = 0.0);

/// exp(tau * psi(omega_k)) on the half-spectrum omega_k = pi k / L,
/// k = 0..N/2 (the layout of a real-to-complex transform).  The k = 0 entry
/// is exactly 1.
std::vector<cplx> linear_propagator(const MultiscaleSpec& spec, double tau,
                                    int n_modes, double L);

/// Exponential time differencing (second order, two-stage) realization of
/// the integral form of du/dt + A u + d/dx g(u) = 0: the semigroup factor is
/// applied exactly in Fourier space, the flux divergence pseudospectrally
/// with optional 2/3-rule dealiasing.  u0 must live on the grid of cfg and
/// carry negligible mass near the domain edges (< 1e-8 of its total).
/// Throws BlowUpError when max|u| exceeds twice its initial value.
Trajectory solve(const std::vector<double>& u0, const SolverConfig& cfg);

struct AsymptoticsReport {
    double p = 2.0;  // norm index; INFINITY for the sup norm
    /// Reporting times (trajectory times with t > 0).
    std::vector<double> times;
    /// t^{(1-1/p)/alpha} * ||u(t) - linear(t)||_p, alpha = min exponent.
    /// For the critical variant the comparison field is the closed-form
    /// source solution instead of the linear evolution.
    std::vector<double> scaled_gap;
    /// ||u(t)||_p at the reporting times.
    std::vector<double> norms;
    /// Least-squares slope of ln ||u||_p against ln(1 + t) over times
    /// >= fit_t_min, and the predicted decay exponent -(1-1/p)/alpha.
    double decay_fit = 0.0;
    double decay_reference = 0.0;
};

/// Scaled distance between the trajectory and the exact linear evolution of
/// its own initial snapshot.  Requires the trajectory to start at t = 0.
AsymptoticsReport asymptotics_report(const Trajectory& traj,
                                     const SolverConfig& cfg, double p,
                                     double fit_t_min = 5.0);

enum class BurgersVariant { printed, hopf_cole };

/// Sharp-source solution of u_t + (u^2)_x = u_xx with initial mass M at the
/// origin.  `hopf_cole` is the exact closed form
///   U(x,t) = (1 - e^{-M}) G_t(x) / (e^{-M} + (1 - e^{-M}) erfc(x/(2 sqrt t))/2),
/// G_t the heat kernel; its mass is M for every t.  `printed` is the variant
///   U(x,t) = t^{-1/2} e^{-x^2/4t} / (K(M) - (1/2) int_0^{x/(2 sqrt t)} e^{-w^2/4} dw)
/// with K(M) fixed by the t = 1 mass constraint; it is self-similar but not
/// identical to the exact form, and only masses below a finite cap are
/// representable (the denominator must stay positive).  Both variants
/// satisfy U(x,t) = t^{-1/2} U(x t^{-1/2}, 1) identically.
double burgers_source(double mass, double t, double x, BurgersVariant variant);

/// Normalization constant of the `printed` variant (root of the t = 1 mass
/// constraint).  Throws DomainError when the mass is outside (0, cap).
double burgers_source_k(double mass);

/// Largest mass the `printed` variant can represent.
double burgers_source_mass_cap();

/// Scaled distance between the trajectory and the sharp-source solution at
/// matched mass (taken from the t = 0 snapshot).  Only the classical
/// configuration (single component (2, 0, 1) with flux u^2) is supported;
/// anything else throws NotImplementedError.  `source_time_offset` shifts
/// the comparison time: a run started from the source profile at time t0
/// should be compared against the source at t + t0.
AsymptoticsReport critical_asymptotics_report(const Trajectory& traj,
                                              const SolverConfig& cfg, double p,
                                              double source_time_offset = 0.0);

/// What a run-configuration file describes: the solver setup, the initial
/// bump, and which report to produce.
struct RunPlan {
    SolverConfig cfg;
    std::string u0_kind = "gaussian";
    double u0_mass = 1.0;
    double u0_width = 1.0;
    double u0_center = 0.0;
    std::string report = "none";  // none | supercritical | critical
    std::vector<double> report_p = {1.0, 2.0,
                                    std::numeric_limits<double>::infinity()};
    double fit_t_min = 5.0;

    std::vector<double> build_initial() const;
};

/// Key = value configuration reader (''#'' comments, blank lines ignored).
/// Keys: half_width, n_modes, dt, t_end, dealias, tail_budget, components
/// (comma-separated alpha:beta:gamma triplets, fractions allowed), flux_r,
/// flux_c, u0_kind, u0_mass, u0_width, u0_center, output_times, report,
/// report_p, fit_t_min.  Throws DomainError with the offending line number
/// for malformed input, unknown keys, or duplicates; semantic violations
/// surface through SolverConfig::validate.
RunPlan parse_run_config(std::istream& is);
RunPlan parse_run_config_file(const std::string& path);

}  // namespace levy
