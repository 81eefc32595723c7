// Two-scale kernel evaluation: double series, finite hypergeometric
// resummations, Meijer-G residue expansion, and the closed-form catalog.

#include "levy/multiscale.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "levy/specfun.hpp"
#include "wide.hpp"

namespace levy {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// sin(pi n/d) with exact structural zeros whenever d | n.
double sin_pi_rational(long long n, long long d) {
    const long long r = n % (2 * d);
    if (r % d == 0) return 0.0;
    return std::sin(kPi * static_cast<double>(r) / static_cast<double>(d));
}

// sin(pi y) for real y; near-integer y snaps to the structural zero.
double sin_pi_real(double y) {
    const double r = std::fmod(y, 2.0);
    if (std::fabs(r - std::round(r)) < 1e-13) return 0.0;
    return std::sin(kPi * r);
}

double cos_pi_real(double y) { return sin_pi_real(y + 0.5); }

// ln|Gamma(y)| with the sign of Gamma(y); y must not be a non-positive
// integer (callers detect those exactly and treat the factor as dead).
double ln_abs_gamma_signed(double y, int* sign) {
    if (y > 0.0) {
        *sign = 1;
        return std::lgamma(y);
    }
    const double s = sin_pi_real(y);
    if (s == 0.0) throw NumericError("ln_abs_gamma_signed: argument at a pole");
    *sign = s > 0.0 ? 1 : -1;
    return std::log(kPi / std::fabs(s)) - std::lgamma(1.0 - y);
}

struct SeriesOut {
    double value = 0.0;
    double err = 0.0;
    int outer = 0;
    int inner = 0;
};

// Anti-diagonal sweep of a double series term(r, n), r + n = d.  Stops only
// after tail_window consecutive diagonals sit below tolerance: structurally
// zero diagonals recur (sine factors), so a single small diagonal proves
// nothing.  err carries the trailing-window magnitude plus the cancellation
// noise floor peak * eps.
template <class Term>
SeriesOut antidiagonal_sum(Term&& term, const SeriesControl& ctrl) {
    ctrl.validate();
    double acc = 0.0;
    double peak = 0.0;
    double win_max = 0.0;
    int below = 0;
    int total = 0;
    for (int d = 0; d < ctrl.max_terms; ++d) {
        double diag = 0.0;
        for (int r = 0; r <= d; ++r) {
            const double w = term(r, d - r);
            acc += w;
            diag += std::fabs(w);
            ++total;
        }
        peak = std::max(peak, diag);
        if (diag > 1e80 * (std::fabs(acc) + 1.0)) {
            throw NumericError("two-scale series: terms diverge at this (t, x)");
        }
        const double thr = std::max(ctrl.abs_tol, ctrl.rel_tol * std::fabs(acc));
        if (diag <= thr) {
            win_max = below == 0 ? diag : std::max(win_max, diag);
            if (++below >= ctrl.tail_window) {
                // rounding noise compounds across the sweeps, not only at the peak
                return {acc, win_max + peak * kEps * (d + 1), d + 1, total};
            }
        } else {
            below = 0;
        }
    }
    throw NumericError("two-scale series did not settle within max_terms sweeps");
}

// Row sweep (outer index r, finite inner sum supplied by row(r)) with the
// same windowed stop.  row(r) returns the signed row value and stores the
// row's absolute-term sum and inner count through the out-parameters.
template <class Row>
SeriesOut row_sum(Row&& row, const SeriesControl& ctrl) {
    ctrl.validate();
    double acc = 0.0;
    double peak = 0.0;
    double win_max = 0.0;
    int below = 0;
    int total = 0;
    for (int r = 0; r < ctrl.max_terms; ++r) {
        double row_abs = 0.0;
        int row_terms = 0;
        acc += row(r, &row_abs, &row_terms);
        total += row_terms;
        peak = std::max(peak, row_abs);
        if (row_abs > 1e80 * (std::fabs(acc) + 1.0)) {
            throw NumericError("two-scale series: terms diverge at this (t, x)");
        }
        const double thr = std::max(ctrl.abs_tol, ctrl.rel_tol * std::fabs(acc));
        if (row_abs <= thr) {
            win_max = below == 0 ? row_abs : std::max(win_max, row_abs);
            if (++below >= ctrl.tail_window) {
                return {acc, win_max + peak * kEps * (r + 1), r + 1, total};
            }
        } else {
            below = 0;
        }
    }
    throw NumericError("two-scale series did not settle within max_terms sweeps");
}

ParamLists make_params(const std::vector<double>& up, const std::vector<double>& low) {
    ParamLists p;
    p.upper.reserve(up.size());
    p.lower.reserve(low.size());
    for (double a : up) p.upper.emplace_back(a, 0.0);
    for (double b : low) p.lower.emplace_back(b, 0.0);
    return p;
}

const SeriesControl& inner_ctrl() {
    static const SeriesControl c{2000, 1e-17, 1e-15, 3};
    return c;
}

// Canonical larger-exponent-first view of the rational pair.
struct Canon {
    long long L, K, A;  // larger exponent: alpha = L/K, skew integer A
    long long P, Q, B;  // smaller exponent
    double M, m;
    long long m1, lp;
    long long u_m1;
};

Canon canon_of(const TwoScaleRational& rat) {
    rat.validate();
    const bool first_big = rat.first.alpha() >= rat.second.alpha();
    const RationalExponent& big = first_big ? rat.first : rat.second;
    const RationalExponent& small = first_big ? rat.second : rat.first;
    return {big.num,   big.den,   big.skew_num, small.num, small.den, small.skew_num,
            rat.M,     rat.m,     rat.m1,       rat.lp,    rat.u_m1};
}

// ---------------------------------------------------------------------------
// Single-scale series (for the equal-exponent reduction)
// ---------------------------------------------------------------------------

// v_{alpha,beta}(t, 0): (1/pi) Re Gamma(1 + 1/alpha) (t e^{i pi beta/2})^{-1/alpha}.
double single_scale_origin(double alpha, double beta, double t) {
    return std::exp(std::lgamma(1.0 + 1.0 / alpha)) * cos_pi_real(0.5 * beta / alpha) /
           (kPi * std::pow(t, 1.0 / alpha));
}

// Convergent series for v_{alpha,beta}(t, x).  beta may be irrational in the
// skew numerator (it arises as a component average), so sines go through the
// real-argument path.  For alpha < 1 requires x > 0 inside the power regime;
// the caller handles reflection, the origin, and the regime fallback.
double single_scale_series(double alpha, double beta, double t, double x,
                           const SeriesControl& ctrl, double* err, int* n_terms) {
    const double s = 0.5 * (alpha - beta);
    const double lnt = std::log(t);
    double acc = 0.0, peak = 0.0, win_max = 0.0;
    int below = 0;
    if (alpha > 1.0) {
        const double lnax = std::log(std::fabs(x));
        for (int n = 0; n < ctrl.max_terms; ++n) {
            const double sn = sin_pi_real(s * (1.0 + n) / alpha);
            double w = 0.0;
            if (sn != 0.0 && !(x == 0.0 && n > 0)) {
                const double ln = std::lgamma((1.0 + n) / alpha) - std::lgamma(n + 1.0) -
                                  (1.0 + n) / alpha * lnt + (n > 0 ? n * lnax : 0.0);
                const int sg = (x > 0.0 && (n % 2)) ? -1 : 1;
                w = sg * sn * std::exp(ln) / (kPi * alpha);
            }
            acc += w;
            const double mag = std::fabs(w);
            peak = std::max(peak, mag);
            const double thr = std::max(ctrl.abs_tol, ctrl.rel_tol * std::fabs(acc));
            if (mag <= thr) {
                win_max = below == 0 ? mag : std::max(win_max, mag);
                if (++below >= ctrl.tail_window) {
                    if (err) *err = win_max + peak * kEps;
                    if (n_terms) *n_terms = n + 1;
                    return acc;
                }
            } else {
                below = 0;
            }
        }
        throw NumericError("single-scale series did not settle within max_terms");
    }
    // alpha < 1: inverse-power series, r >= 1
    const double lnx = std::log(x);
    for (int r = 1; r < ctrl.max_terms; ++r) {
        const double sr = sin_pi_real(s * r);
        double w = 0.0;
        if (sr != 0.0) {
            const double ln = std::lgamma(1.0 + alpha * r) - std::lgamma(r + 1.0) +
                              r * lnt - (1.0 + alpha * r) * lnx;
            const int sg = (r % 2) ? 1 : -1;
            w = sg * sr * std::exp(ln) / kPi;
        }
        acc += w;
        const double mag = std::fabs(w);
        peak = std::max(peak, mag);
        const double thr = std::max(ctrl.abs_tol, ctrl.rel_tol * std::fabs(acc));
        if (mag <= thr) {
            win_max = below == 0 ? mag : std::max(win_max, mag);
            if (++below >= ctrl.tail_window) {
                if (err) *err = win_max + peak * kEps;
                if (n_terms) *n_terms = r;
                return acc;
            }
        } else {
            below = 0;
        }
    }
    throw NumericError("single-scale series did not settle within max_terms");
}

// Equal exponents: the characteristic exponents add to a single component
// with beta_c = (beta1 + beta2)/2 and effective time 2 t cos(pi (beta1 -
// beta2)/4), so the kernel is exactly a single-scale density.
KernelResult equal_exponent_reduction(const StableComponent& c1, const StableComponent& c2,
                                      double t, double x, const SeriesControl& ctrl) {
    const double alpha = c1.alpha;
    const double beta_c = 0.5 * (c1.beta + c2.beta);
    const double t_eff = 2.0 * t * cos_pi_real(0.25 * (c1.beta - c2.beta));
    KernelResult res;
    res.formula_id = KernelFormula::catalog;
    double xx = x, bc = beta_c;
    if (x < 0.0) {
        xx = -x;
        bc = -bc;
    }
    if (alpha < 1.0) {
        if (std::fabs(bc - alpha) < 1e-12 && xx > 0.0) {
            // mirror one-sided: no mass on this half-line
            return res;
        }
        if (xx == 0.0) {
            res.value = single_scale_origin(alpha, bc, t_eff);
            res.err_est = std::fabs(res.value) * 8.0 * kEps;
            res.n_terms_outer = 1;
            return res;
        }
        if (std::pow(xx, alpha) >= 0.5 * t_eff) {
            res.value = single_scale_series(alpha, bc, t_eff, xx, ctrl, &res.err_est,
                                            &res.n_terms_outer);
            res.n_terms_inner = res.n_terms_outer;
            return res;
        }
        // below the series regime: fall back to Fourier inversion of the
        // reduced single component
        MultiscaleSpec spec;
        spec.components.push_back({alpha, beta_c, 2.0 * cos_pi_real(0.25 * (c1.beta - c2.beta))});
        QuadControl q;
        q.tol = 1e-9;
        res.value = invert_fourier(spec, t, x, q, &res.err_est);
        res.formula_id = KernelFormula::oracle;
        return res;
    }
    res.value =
        single_scale_series(alpha, bc, t_eff, xx, ctrl, &res.err_est, &res.n_terms_outer);
    res.n_terms_inner = res.n_terms_outer;
    return res;
}

// ---------------------------------------------------------------------------
// One-sided kernel machinery
// ---------------------------------------------------------------------------

double kappa_log(const Canon& c, double t, double x) {
    const double lpd = static_cast<double>(c.lp), m1d = static_cast<double>(c.m1);
    return lpd * std::log(lpd) - m1d * std::log(m1d) +
           c.lp * (std::log(t) / c.M - std::log(x));
}

// Decay envelope of the one-sided kernel near the origin; an upper bound on
// |h|, used once the bound itself certifies the value below tolerance.
double onesided_envelope(const Canon& c, double t, double x) {
    const double kl = kappa_log(c, t, x);
    const double gap = static_cast<double>(c.m1 - c.lp);
    const double root = std::exp(kl / gap);
    const double expo = 1.0 - 1.0 / c.m1 + (0.5 - c.M) / gap;
    const double ln_bound = std::log(static_cast<double>(c.m1)) + std::log(t) / c.M +
                            expo * kl - (gap + std::pow(t / c.m1, c.m / c.M)) * root;
    return ln_bound < -744.0 ? 0.0 : std::exp(ln_bound);
}

bool envelope_regime(const Canon& c, double t, double x) {
    const double gap = static_cast<double>(c.m1 - c.lp);
    return gap * std::exp(kappa_log(c, t, x) / gap) >= 30.0;
}

KernelResult onesided_double_series(const Canon& c, double t, double x,
                                    const SeriesControl& ctrl) {
    const double lnt = std::log(t), lnx = std::log(x);
    auto term = [&](int n, int r) -> double {
        const double s =
            sin_pi_rational(c.L * c.Q * n + c.P * c.K * r, c.K * c.Q);
        if (s == 0.0) return 0.0;
        const double e = c.M * n + c.m * r;
        const double ln = std::lgamma(1.0 + e) - std::lgamma(n + 1.0) -
                          std::lgamma(r + 1.0) + (n + r) * lnt - (1.0 + e) * lnx;
        const int sg = ((n + r) % 2) ? 1 : -1;
        return sg * s * std::exp(ln) / kPi;
    };
    const SeriesOut out = antidiagonal_sum(term, ctrl);
    KernelResult res;
    res.value = out.value;
    res.err_est = std::max(out.err, std::fabs(out.value) * 2.0 * kEps);
    res.n_terms_outer = out.outer;
    res.n_terms_inner = out.inner;
    res.formula_id = KernelFormula::onesided_double;
    return res;
}

// Finite hypergeometric resummation in wide precision; the cancellation-
// robust route close to the origin.
KernelResult onesided_hyper_sum(const Canon& c, double t, double x,
                                const SeriesControl& ctrl) {
    using wide::quad;
    ctrl.validate();
    const quad qt = t, qx = x;
    const quad qpi = M_PIq;
    const quad kap = expq(static_cast<quad>(c.lp) * logq(static_cast<quad>(c.lp)) -
                          static_cast<quad>(c.m1) * logq(static_cast<quad>(c.m1)) +
                          static_cast<quad>(c.lp) *
                              (logq(qt) * c.K / c.L - logq(qx)));
    const quad zq = ((c.m1 - c.lp) % 2) ? -kap : kap;
    quad acc = 0, peak = 0, win_max = 0;
    int below = 0, total = 0;
    std::vector<quad> up, low;
    for (int r = 0; r < ctrl.max_terms; ++r) {
        quad row_abs = 0;
        for (long long n = 0; n < c.m1; ++n) {
            const double s =
                sin_pi_rational(c.L * c.Q * n + c.P * c.K * r, c.K * c.Q);
            ++total;
            if (s == 0.0) continue;
            const quad e = (static_cast<quad>(c.L) * n) / c.K + (static_cast<quad>(c.P) * r) / c.Q;
            quad mag = tgammaq(1 + e) * powq(qt, n + r) /
                       (tgammaq(static_cast<quad>(n + 1)) * tgammaq(static_cast<quad>(r + 1)));
            mag *= powq(qx, -1 - e);
            up.clear();
            low.clear();
            up.push_back(1);
            for (long long i = 0; i < c.lp; ++i) up.push_back((1 + e + i) / c.lp);
            for (long long i = 0; i < c.m1; ++i)
                low.push_back(static_cast<quad>(1 + n + i) / c.m1);
            const quad f = wide::phyper_q(up, low, zq);
            const int sg = ((n + r) % 2) ? 1 : -1;
            const quad w = sg * static_cast<quad>(s) * mag * f / qpi;
            acc += w;
            row_abs += wide::qabs(w);
        }
        if (row_abs > peak) peak = row_abs;
        const quad thr = 1e-35 + 1e-30 * wide::qabs(acc);
        if (row_abs <= thr) {
            win_max = (below == 0 || row_abs > win_max) ? row_abs : win_max;
            if (++below >= ctrl.tail_window) {
                KernelResult res;
                res.value = static_cast<double>(acc);
                res.err_est = static_cast<double>(win_max + peak * 1e-33) +
                              std::fabs(res.value) * 2.0 * kEps;
                res.n_terms_outer = r + 1;
                res.n_terms_inner = total;
                res.formula_id = KernelFormula::onesided_hyper;
                return res;
            }
        } else {
            below = 0;
        }
    }
    throw NumericError("one-sided resummation did not settle within max_terms rows");
}

// Meijer-G route: residue (Slater) expansion of G^{m1,0}_{lp,m1} at kappa,
// summed over the outer index with supergeometric decay.
KernelResult onesided_meijer_sum(const Canon& c, double t, double x,
                                 const SeriesControl& ctrl) {
    ctrl.validate();
    const long long m1 = c.m1, lp = c.lp;
    const double kl = kappa_log(c, t, x);
    const double kap = std::exp(kl);
    const double lnt = std::log(t);
    const double mM = c.m / c.M;
    const double zF = ((m1 - lp) % 2) ? -kap : kap;
    // Gamma(b_j - b_k) = Gamma((j - k)/m1), independent of the outer index
    std::vector<double> lnGb(m1, 0.0);
    std::vector<int> sgGb(m1, 1);
    for (long long k = 0; k < m1; ++k) {
        double ln = 0.0;
        int sg = 1, si = 0;
        for (long long j = 0; j < m1; ++j) {
            if (j == k) continue;
            ln += ln_abs_gamma_signed(static_cast<double>(j - k) / m1, &si);
            sg *= si;
        }
        lnGb[k] = ln;
        sgGb[k] = sg;
    }
    const double ln_pref = std::log(static_cast<double>(m1)) + 0.5 * std::log(c.M) -
                           0.5 * (m1 - lp) * std::log(2.0 * kPi) - std::log(x);
    double acc = 0.0, peak = 0.0, noise = 0.0, win_max = 0.0;
    int below = 0, total = 0;
    std::vector<double> up, low;
    for (int r = 0; r < ctrl.max_terms; ++r) {
        // b_k = r/(Q L) + k/m1 exactly
        std::vector<double> lnterm;
        std::vector<int> sgterm;
        lnterm.reserve(m1);
        sgterm.reserve(m1);
        const long long bden = c.Q * c.L * m1;
        for (long long k = 0; k < m1; ++k) {
            const long long bnum = r * m1 + k * c.Q * c.L;
            const double bk = static_cast<double>(bnum) / bden;
            double lnC = lnGb[k];
            int sgC = sgGb[k];
            bool dead = false;
            for (long long j = 0; j < lp && !dead; ++j) {
                // a_j - b_k = j/lp - bnum/bden
                const long long num = j * bden - lp * bnum;
                const long long den = lp * bden;
                if (num % den == 0) {
                    const long long v = num / den;
                    if (v <= 0) {
                        dead = true;  // 1/Gamma at a pole kills the residue
                    } else {
                        lnC -= std::lgamma(static_cast<double>(v));
                    }
                } else {
                    int si = 0;
                    lnC -= ln_abs_gamma_signed(static_cast<double>(num) / den, &si);
                    sgC *= si;
                }
            }
            if (dead) continue;
            up.clear();
            low.clear();
            for (long long j = 0; j < lp; ++j)
                up.push_back(1.0 + bk - static_cast<double>(j) / lp);
            for (long long j = 0; j < m1; ++j) {
                if (j == k) continue;
                low.push_back(1.0 + static_cast<double>(k - j) / m1);
            }
            const SeriesResult f = phyper(make_params(up, low), cplx(zF, 0.0), inner_ctrl());
            total += f.n_terms;
            const double fv = f.value.real();
            if (fv == 0.0) continue;
            lnterm.push_back(lnC + bk * kl + std::log(std::fabs(fv)));
            sgterm.push_back(fv > 0.0 ? sgC : -sgC);
        }
        double row = 0.0;
        if (!lnterm.empty()) {
            const double lmax = *std::max_element(lnterm.begin(), lnterm.end());
            double ssum = 0.0, asum = 0.0;
            for (size_t i = 0; i < lnterm.size(); ++i) {
                const double e = std::exp(lnterm[i] - lmax);
                ssum += sgterm[i] * e;
                asum += e;
            }
            const double ln_out = r * lnt - std::lgamma(r + 1.0) +
                                  mM * r * (std::log(static_cast<double>(m1)) - lnt);
            const int sg_out = (r % 2) ? -1 : 1;
            const double scale = std::exp(ln_out + lmax);
            row = sg_out * scale * ssum;
            // intra-row cancellation noise: the k-terms were added at scale
            // asum, the hypergeometric members at up to exp(2 sqrt(|z|))
            noise = std::max(noise, scale * asum * std::exp(2.0 * std::sqrt(std::fabs(zF))) * kEps);
        }
        acc += row;
        peak = std::max(peak, std::fabs(row));
        const double thr = std::max(ctrl.abs_tol, ctrl.rel_tol * std::fabs(acc));
        if (std::fabs(row) <= thr) {
            win_max = below == 0 ? std::fabs(row) : std::max(win_max, std::fabs(row));
            if (++below >= ctrl.tail_window) {
                const double pref = std::exp(ln_pref);
                KernelResult res;
                res.value = pref * acc;
                res.err_est = pref * (win_max + (peak + noise) * kEps + noise) +
                              std::fabs(res.value) * 2.0 * kEps;
                res.n_terms_outer = r + 1;
                res.n_terms_inner = total;
                res.formula_id = KernelFormula::meijer;
                return res;
            }
        } else {
            below = 0;
        }
    }
    throw NumericError("Meijer-G sum did not settle within max_terms rows");
}

Canon onesided_canon(double alpha1, double alpha2) {
    if (!(alpha1 > 0.0 && alpha1 < 1.0 && alpha2 > 0.0 && alpha2 < 1.0)) {
        throw DomainError("one-sided kernel needs both exponents in (0, 1)");
    }
    const StableComponent c1{alpha1, -alpha1, 1.0};
    const StableComponent c2{alpha2, -alpha2, 1.0};
    return canon_of(TwoScaleRational::make(c1, c2));
}

// ---------------------------------------------------------------------------
// Two-sided case A / case B
// ---------------------------------------------------------------------------

KernelResult caseA_pair(const TwoScaleRational& rat, double t, double x,
                        const SeriesControl& ctrl) {
    const Canon c = canon_of(rat);
    const double lnt = std::log(t), lnx = std::log(x);
    // double series: r pairs with the first exponent, n with the second
    const long long k = rat.first.den, a = rat.first.skew_num;
    const long long q = rat.second.den, b = rat.second.skew_num;
    const double a1 = rat.first.alpha(), a2 = rat.second.alpha();
    auto term = [&](int r, int n) -> double {
        const double s = sin_pi_rational(static_cast<long long>(r) * a * q +
                                             static_cast<long long>(n) * b * k,
                                         k * q);
        if (s == 0.0) return 0.0;
        const double e = a1 * r + a2 * n;
        const double ln = std::lgamma(1.0 + e) - std::lgamma(r + 1.0) -
                          std::lgamma(n + 1.0) + (r + n) * lnt - (1.0 + e) * lnx;
        const int sg = ((r + n) % 2) ? 1 : -1;
        return sg * s * std::exp(ln) / kPi;
    };
    const SeriesOut ds = antidiagonal_sum(term, ctrl);

    // finite hypergeometric resummation over j = 0..m1-1
    const double zA = (((c.u_m1 - c.m1) % 2) ? -1.0 : 1.0) *
                      std::exp(c.m1 * lnt + c.lp * std::log(static_cast<double>(c.lp)) -
                               c.m1 * std::log(static_cast<double>(c.m1)) - c.lp * lnx);
    double hyp_abs = 0.0;
    auto row = [&](int r, double* row_abs, int* row_terms) -> double {
        double rv = 0.0;
        for (long long j = 0; j < c.m1; ++j) {
            const double s = sin_pi_rational(static_cast<long long>(r) * c.B * c.K +
                                                 j * c.A * c.Q,
                                             c.Q * c.K);
            ++*row_terms;
            if (s == 0.0) continue;
            const double g = 1.0 + c.M * j + c.m * r;
            std::vector<double> up{1.0};
            for (double d : delta_list(static_cast<int>(c.lp), g)) up.push_back(d);
            const std::vector<double> low =
                delta_list(static_cast<int>(c.m1), 1.0 + static_cast<double>(j));
            const SeriesResult f = phyper(make_params(up, low), cplx(zA, 0.0), inner_ctrl());
            const double ln = std::lgamma(g) - std::lgamma(r + 1.0) - std::lgamma(j + 1.0) +
                              (r + j) * lnt - g * lnx;
            const int sg = ((r + j) % 2) ? 1 : -1;
            const double w = sg * s * std::exp(ln) * f.value.real() / kPi;
            rv += w;
            *row_abs += std::fabs(w);
        }
        hyp_abs += *row_abs;
        return rv;
    };
    const SeriesOut hs = row_sum(row, ctrl);
    const double err_h = hs.err + hyp_abs * 1e-14;

    const double gap = std::fabs(ds.value - hs.value);
    const double allow =
        4.0 * (ds.err + err_h) + 1e-10 * (std::fabs(ds.value) + std::fabs(hs.value));
    if (gap > std::max(allow, 1e-15)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "case-A series and resummation disagree: %.17g vs %.17g", ds.value,
                      hs.value);
        throw NumericError(msg);
    }
    KernelResult res;
    res.value = hs.value;
    res.err_est = std::max(err_h, gap) + std::fabs(hs.value) * 2.0 * kEps;
    res.n_terms_outer = hs.outer;
    res.n_terms_inner = ds.inner + hs.inner;
    res.formula_id = KernelFormula::caseA;
    return res;
}

KernelResult caseB_pair(const TwoScaleRational& rat, double t, double x,
                        const SeriesControl& ctrl) {
    const Canon c = canon_of(rat);
    const double lnt = std::log(t);
    const double lnx = x > 0.0 ? std::log(x) : 0.0;
    if (x > 0.0) {
        // far-field guard: both case-B resummations cancel like
        // exp(|z|^{1/(lp-m1)}) with z ~ x^lp / t^m1, which double precision
        // stops supporting well before max_terms runs out
        const double zb_ln = c.m1 * std::log(static_cast<double>(c.m1)) -
                             c.lp * std::log(static_cast<double>(c.lp)) + c.lp * lnx -
                             c.m1 * lnt;
        if (zb_ln > std::log(60.0) * (c.lp - c.m1)) {
            throw NumericError(
                "case-B series loses all precision this far from the origin; "
                "the far tail needs the inverse-power regime");
        }
    }
    const double mM = c.m / c.M;
    const long long sin_shift = c.B * c.L - c.A * c.P;
    auto term = [&](int r, int n) -> double {
        if (x == 0.0 && n > 0) return 0.0;
        const double s = sin_pi_rational(c.A * c.Q * (1 + n) -
                                             static_cast<long long>(r) * sin_shift,
                                         c.Q * c.L);
        if (s == 0.0) return 0.0;
        const double g = (1.0 + n) / c.M + mM * r;
        const double ln = std::lgamma(g) - std::lgamma(r + 1.0) - std::lgamma(n + 1.0) +
                          n * lnx - ((1.0 + n) / c.M + (mM - 1.0) * r) * lnt;
        const int sg = ((r + n) % 2) ? -1 : 1;
        return sg * s * std::exp(ln) / (kPi * c.M);
    };
    const SeriesOut ds = antidiagonal_sum(term, ctrl);

    const double zB = (((c.u_m1 + c.lp) % 2) ? -1.0 : 1.0) *
                      (x == 0.0 ? 0.0
                                : std::exp(c.m1 * std::log(static_cast<double>(c.m1)) -
                                           c.lp * std::log(static_cast<double>(c.lp)) +
                                           c.lp * lnx - c.m1 * lnt));
    double hyp_abs = 0.0;
    auto row = [&](int r, double* row_abs, int* row_terms) -> double {
        double rv = 0.0;
        for (long long j = 0; j < c.lp; ++j) {
            if (x == 0.0 && j > 0) break;
            const double s = sin_pi_rational(c.A * c.Q * (1 + j) -
                                                 static_cast<long long>(r) * sin_shift,
                                             c.Q * c.L);
            ++*row_terms;
            if (s == 0.0) continue;
            const double g = (1.0 + j) / c.M + mM * r;
            const std::vector<double> low =
                delta_list(static_cast<int>(c.lp), 1.0 + static_cast<double>(j));
            std::vector<double> up{1.0};
            for (double d : delta_list(static_cast<int>(c.m1), g)) up.push_back(d);
            const SeriesResult f = phyper(make_params(up, low), cplx(zB, 0.0), inner_ctrl());
            const double ln = std::lgamma(g) - std::lgamma(r + 1.0) - std::lgamma(j + 1.0) +
                              j * lnx - ((1.0 + j) / c.M + (mM - 1.0) * r) * lnt;
            const int sg = ((r + j) % 2) ? -1 : 1;
            const double w = sg * s * std::exp(ln) * f.value.real() / (kPi * c.M);
            rv += w;
            *row_abs += std::fabs(w);
        }
        hyp_abs += *row_abs;
        return rv;
    };
    const SeriesOut hs = row_sum(row, ctrl);
    const double err_h = hs.err + hyp_abs * 1e-14;

    const double gap = std::fabs(ds.value - hs.value);
    const double allow =
        4.0 * (ds.err + err_h) + 1e-10 * (std::fabs(ds.value) + std::fabs(hs.value));
    if (gap > std::max(allow, 1e-15)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "case-B series and resummation disagree: %.17g vs %.17g", ds.value,
                      hs.value);
        throw NumericError(msg);
    }
    KernelResult res;
    res.value = hs.value;
    res.err_est = std::max(err_h, gap) + std::fabs(hs.value) * 2.0 * kEps;
    res.n_terms_outer = hs.outer;
    res.n_terms_inner = ds.inner + hs.inner;
    res.formula_id = KernelFormula::caseB;
    return res;
}

bool is_onesided(const StableComponent& c) { return std::fabs(c.beta + c.alpha) < 1e-12; }
bool is_mirror_onesided(const StableComponent& c) {
    return std::fabs(c.beta - c.alpha) < 1e-12;
}

KernelResult oracle_eval(const StableComponent& c1, const StableComponent& c2, double t,
                         double x) {
    MultiscaleSpec spec;
    if (c1.alpha <= c2.alpha) {
        spec.components = {c1, c2};
    } else {
        spec.components = {c2, c1};
    }
    QuadControl q;
    q.tol = 1e-9;
    KernelResult res;
    res.value = invert_fourier(spec, t, x, q, &res.err_est);
    res.formula_id = KernelFormula::oracle;
    return res;
}

KernelResult kernel_H_pos(const StableComponent& c1, const StableComponent& c2, double t,
                          double x, const SeriesControl& ctrl) {
    if (std::fabs(c1.alpha - c2.alpha) < 1e-12) {
        return equal_exponent_reduction(c1, c2, t, x, ctrl);
    }
    if (is_onesided(c1) && is_onesided(c2)) {
        if (x <= 0.0) {
            KernelResult res;
            res.formula_id = KernelFormula::onesided_double;
            return res;  // support is the positive half-line
        }
        return kernel_h_onesided(c1.alpha, c2.alpha, t, x, ctrl);
    }
    if (is_mirror_onesided(c1) && is_mirror_onesided(c2) && x >= 0.0) {
        KernelResult res;
        res.formula_id = KernelFormula::onesided_double;
        return res;
    }
    const TwoScaleRational rat = TwoScaleRational::make(c1, c2);
    if (rat.M > 1.0) {
        return caseB_pair(rat, t, x, ctrl);
    }
    if (x == 0.0) {
        return oracle_eval(c1, c2, t, 0.0);
    }
    if (std::pow(x, rat.m) < t) {
        throw NumericError(
            "kernel_H: x is below the series regime switch x^m >= t for exponents "
            "under one; use the Fourier-inversion oracle there");
    }
    return caseA_pair(rat, t, x, ctrl);
}

}  // namespace

// ---------------------------------------------------------------------------
// Public surface
// ---------------------------------------------------------------------------

TwoScaleRational TwoScaleRational::make(const StableComponent& c1,
                                        const StableComponent& c2) {
    c1.validate();
    c2.validate();
    if (c1.gamma != 1.0 || c2.gamma != 1.0) {
        throw DomainError("two-scale kernel series require unit scale on both components");
    }
    TwoScaleRational r;
    r.first = rationalize(c1.alpha, c1.beta);
    r.second = rationalize(c2.alpha, c2.beta);
    const long long l = r.first.num, k = r.first.den;
    const long long p = r.second.num, q = r.second.den;
    r.m = std::min(r.first.alpha(), r.second.alpha());
    r.M = std::max(r.first.alpha(), r.second.alpha());
    r.m1 = std::min(k * p, l * q);
    r.M1 = std::max(k * p, l * q);
    r.lp = l * p;
    const bool first_big = r.first.alpha() >= r.second.alpha();
    if (first_big) {
        r.u = static_cast<double>(r.first.skew_num) / k;
        r.v = static_cast<double>(r.second.skew_num) / q;
        r.u_m1 = static_cast<long>(r.first.skew_num) * p;
    } else {
        r.u = static_cast<double>(r.second.skew_num) / q;
        r.v = static_cast<double>(r.first.skew_num) / k;
        r.u_m1 = static_cast<long>(r.second.skew_num) * l;
    }
    r.validate();
    return r;
}

void TwoScaleRational::validate() const {
    if (first.num <= 0 || first.den <= 0 || second.num <= 0 || second.den <= 0) {
        throw DomainError("TwoScaleRational: exponents must be positive rationals");
    }
    if (!(m <= M) || m1 > M1 || m1 < 1) {
        throw DomainError("TwoScaleRational: ordering of derived quantities is broken");
    }
    if (lp != static_cast<long>(first.num) * second.num) {
        throw DomainError("TwoScaleRational: lp must equal the product of the numerators");
    }
    if (std::llround(m1 * u) != u_m1) {
        throw DomainError("TwoScaleRational: m1 * u must be the stored integer");
    }
}

const char* to_string(KernelFormula f) {
    switch (f) {
        case KernelFormula::caseA: return "caseA";
        case KernelFormula::caseB: return "caseB";
        case KernelFormula::onesided_double: return "onesided_double";
        case KernelFormula::onesided_hyper: return "onesided_hyper";
        case KernelFormula::meijer: return "meijer";
        case KernelFormula::catalog: return "catalog";
        case KernelFormula::oracle: return "oracle";
    }
    return "unknown";
}

KernelResult kernel_H(const StableComponent& c1, const StableComponent& c2, double t,
                      double x, const SeriesControl& ctrl) {
    c1.validate();
    c2.validate();
    if (c1.gamma != 1.0 || c2.gamma != 1.0) {
        throw DomainError("kernel_H requires unit scale on both components");
    }
    if (!(t > 0.0)) throw DomainError("kernel_H: t must be positive");
    ctrl.validate();
    if (x < 0.0) {
        const StableComponent f1{c1.alpha, -c1.beta, 1.0};
        const StableComponent f2{c2.alpha, -c2.beta, 1.0};
        return kernel_H_pos(f1, f2, t, -x, ctrl);
    }
    return kernel_H_pos(c1, c2, t, x, ctrl);
}

KernelResult kernel_H_caseA(const TwoScaleRational& rat, double t, double x,
                            const SeriesControl& ctrl) {
    rat.validate();
    if (!(rat.M < 1.0)) throw DomainError("case-A form needs both exponents below one");
    if (!(t > 0.0)) throw DomainError("case A: t must be positive");
    if (!(x > 0.0)) throw DomainError("case A: x must be positive");
    ctrl.validate();
    if (std::pow(x, rat.m) < t) {
        throw NumericError(
            "case-A series loses all precision below the regime switch x^m >= t");
    }
    return caseA_pair(rat, t, x, ctrl);
}

KernelResult kernel_H_caseB(const TwoScaleRational& rat, double t, double x,
                            const SeriesControl& ctrl) {
    rat.validate();
    if (!(rat.M > 1.0)) throw DomainError("case-B form needs the larger exponent above one");
    if (!(t > 0.0)) throw DomainError("case B: t must be positive");
    if (!(x >= 0.0)) throw DomainError("case B: x must be non-negative (reflect first)");
    ctrl.validate();
    return caseB_pair(rat, t, x, ctrl);
}

KernelResult kernel_h_onesided(double alpha1, double alpha2, double t, double x,
                               const SeriesControl& ctrl) {
    if (!(t > 0.0)) throw DomainError("one-sided kernel: t must be positive");
    if (!(x > 0.0)) throw DomainError("one-sided kernel: x must be positive");
    ctrl.validate();
    const Canon c = onesided_canon(alpha1, alpha2);
    if (envelope_regime(c, t, x)) {
        KernelResult res;
        res.err_est = onesided_envelope(c, t, x);
        res.formula_id = KernelFormula::onesided_hyper;
        return res;
    }
    if (std::pow(x, c.m) < t) {
        return onesided_hyper_sum(c, t, x, ctrl);
    }
    return onesided_double_series(c, t, x, ctrl);
}

KernelResult kernel_h_onesided_form(double alpha1, double alpha2, double t, double x,
                                    KernelFormula form, const SeriesControl& ctrl) {
    if (!(t > 0.0)) throw DomainError("one-sided kernel: t must be positive");
    if (!(x > 0.0)) throw DomainError("one-sided kernel: x must be positive");
    ctrl.validate();
    const Canon c = onesided_canon(alpha1, alpha2);
    switch (form) {
        case KernelFormula::onesided_double: return onesided_double_series(c, t, x, ctrl);
        case KernelFormula::onesided_hyper: return onesided_hyper_sum(c, t, x, ctrl);
        case KernelFormula::meijer: return onesided_meijer_sum(c, t, x, ctrl);
        default: break;
    }
    throw DomainError("kernel_h_onesided_form: not a one-sided representation");
}

// ---------------------------------------------------------------------------
// Catalog
// ---------------------------------------------------------------------------

namespace {

double catalog_bi_gauss(double t, double x) {
    return std::exp(-x * x / (8.0 * t)) / (2.0 * std::sqrt(2.0 * kPi * t));
}

double catalog_half_half(double t, double x) {
    if (x <= 0.0) return 0.0;
    return t * std::exp(-t * t / x) / (kSqrtPi * x * std::sqrt(x));
}

// Parabolic-cylinder sum shared by the (2, 1/2) and (1/2, 1/3) entries.
// Zero terms recur structurally (D_nu(0) vanishes for odd nu), so the stop
// demands four consecutive small terms.
double catalog_gauss_levy(double t, double x) {
    const double z = -x / std::sqrt(2.0 * t);
    const double pref = std::exp(-x * x / (8.0 * t)) / (2.0 * std::sqrt(kPi * t));
    const double base = std::pow(t * t * t / 2.0, 0.25);
    double acc = 0.0, fac = 1.0, pw = 1.0;
    int below = 0;
    for (int n = 0; n < 400; ++n) {
        if (n > 0) {
            fac *= n;
            pw *= base;
        }
        const double w = (n % 2 ? -1.0 : 1.0) * pw / fac *
                         parabolic_cylinder_D(0.5 * n, z);
        acc += w;
        if (std::fabs(w) <= 1e-18 + 1e-15 * std::fabs(acc)) {
            if (++below >= 4) return pref * acc;
        } else {
            below = 0;
        }
    }
    throw NumericError("gaussLevy catalog sum did not settle");
}

double catalog_half_third(double t, double x) {
    if (x <= 0.0) return 0.0;
    const double z = t / std::sqrt(2.0 * x);
    const double pref = std::exp(-t * t / (8.0 * x)) / (kSqrt2Pi * x);
    const double base = std::pow(2.0 * x, -1.0 / 3.0);
    double acc = 0.0, fac = 1.0, pw = 1.0;
    int below = 0;
    for (int r = 0; r < 400; ++r) {
        if (r > 0) {
            fac *= r;
            pw *= t * base;
        }
        const double w = (r % 2 ? -1.0 : 1.0) * pw / fac *
                         parabolic_cylinder_D(1.0 + 2.0 * r / 3.0, z);
        acc += w;
        if (std::fabs(w) <= 1e-18 + 1e-15 * std::fabs(acc)) {
            if (++below >= 4) return pref * acc;
        } else {
            below = 0;
        }
    }
    throw NumericError("halfThird catalog sum did not settle");
}

double catalog_gauss_three_half(double t, double x) {
    static const TwoScaleRational pos =
        TwoScaleRational::make({2.0, 0.0, 1.0}, {1.5, -0.5, 1.0});
    static const TwoScaleRational neg =
        TwoScaleRational::make({2.0, 0.0, 1.0}, {1.5, 0.5, 1.0});
    const SeriesControl ctrl;
    return caseB_pair(x >= 0.0 ? pos : neg, t, std::fabs(x), ctrl).value;
}

// (1/3, 2/3) pair: three interleaved 2F2 sums; each drops every third term
// through the reciprocal-Gamma pole, so those do not count toward the stop.
double catalog_third_two_thirds(double t, double x) {
    if (x <= 0.0) return 0.0;
    const double z = -4.0 * t * t * t / (27.0 * x * x);
    const double x3 = std::pow(x, 1.0 / 3.0);
    struct Block {
        int shift;        // power of (-t) in front
        double coef;      // constant prefactor
        double xpow;      // leading power of 1/x
        double rg_shift;  // reciprocal-Gamma argument offset
        double up0, up1, low0, low1;
    };
    const Block blocks[3] = {
        {0, 1.0, 1.0, 0.0, 0.5, 1.0, 1.0 / 3.0, 2.0 / 3.0},
        {1, 1.0, 5.0 / 3.0, -2.0 / 3.0, 5.0 / 6.0, 4.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0},
        {2, 0.5, 7.0 / 3.0, -4.0 / 3.0, 7.0 / 6.0, 5.0 / 3.0, 4.0 / 3.0, 5.0 / 3.0},
    };
    double total = 0.0;
    for (const Block& bl : blocks) {
        double acc = 0.0, fac = 1.0, tp = 1.0;
        int below = 0;
        for (int n = 0; n < 400; ++n) {
            if (n > 0) {
                fac *= n;
                tp *= t;
            }
            const double rg = rgamma(bl.rg_shift - n / 3.0);
            if (rg == 0.0) continue;
            const SeriesResult f =
                phyper(make_params({bl.up0 + n / 6.0, bl.up1 + n / 6.0}, {bl.low0, bl.low1}),
                       cplx(z, 0.0), inner_ctrl());
            const double w = (n % 2 ? -1.0 : 1.0) * tp / fac *
                             std::pow(x3, -3.0 * bl.xpow - n) * rg * f.value.real();
            acc += w;
            if (std::fabs(w) <= 1e-18 + 1e-15 * std::fabs(acc)) {
                if (++below >= 3) break;
            } else {
                below = 0;
            }
        }
        const double front = (bl.shift % 2 ? -1.0 : 1.0) * bl.coef * std::pow(t, bl.shift);
        total += front * acc;
    }
    return total;
}

}  // namespace

double catalog_kernel(const std::string& name, double t, double x) {
    if (!(t > 0.0)) throw DomainError("catalog_kernel: t must be positive");
    if (name == "biGauss") return catalog_bi_gauss(t, x);
    if (name == "gaussLevy") return catalog_gauss_levy(t, x);
    if (name == "gaussThreeHalf") return catalog_gauss_three_half(t, x);
    if (name == "halfHalf") return catalog_half_half(t, x);
    if (name == "halfThird") return catalog_half_third(t, x);
    if (name == "thirdTwoThirds") return catalog_third_two_thirds(t, x);
    throw DomainError("catalog_kernel: unknown catalog entry '" + name + "'");
}

DensityProfile kernel_profile(const StableComponent& c1, const StableComponent& c2,
                              double t, double length, int n, const SeriesControl& ctrl) {
    MultiscaleSpec spec;
    if (std::fabs(c1.alpha - c2.alpha) < 1e-12) {
        // the pair reduces to one component; fingerprint the reduced law
        spec.components.push_back(
            {c1.alpha, 0.5 * (c1.beta + c2.beta),
             2.0 * cos_pi_real(0.25 * (c1.beta - c2.beta))});
    } else if (c1.alpha < c2.alpha) {
        spec.components = {c1, c2};
    } else {
        spec.components = {c2, c1};
    }
    spec.validate();
    DensityProfile p;
    p.length = length;
    p.n = n;
    p.t = t;
    p.fingerprint = spec_fingerprint(spec);
    p.value.assign(n > 0 ? n : 0, 0.0);
    p.validate();
    std::string tag;
    bool mixed = false;
    for (int i = 0; i < n; ++i) {
        const KernelResult r = kernel_H(c1, c2, t, p.x_at(i), ctrl);
        p.value[i] = r.value;
        const char* s = to_string(r.formula_id);
        if (tag.empty()) {
            tag = s;
        } else if (tag != s) {
            mixed = true;
        }
    }
    p.formula_id = mixed ? "mixed" : tag;
    return p;
}

}  // namespace levy
