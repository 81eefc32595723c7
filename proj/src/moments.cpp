#include "levy/moments.hpp"

#include <quadmath.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "levy/quadrature.hpp"
#include "wide.hpp"

namespace levy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEqTol = 1e-12;

struct OneSidedShape {
    double m = 0.0;  // min exponent
    double M = 0.0;  // max exponent
    long lp = 0;
};

OneSidedShape onesided_shape(const TwoScaleRational& spec, double t) {
    if (!(t > 0.0)) throw DomainError("moments: t must be positive");
    if (spec.first.skew_num != spec.first.num || spec.second.skew_num != spec.second.num)
        throw DomainError("moments: both components must be one-sided (beta = -alpha)");
    return {spec.m, spec.M, spec.lp};
}

bool is_pair(const OneSidedShape& s, double a, double b) {
    return std::fabs(s.m - a) < kEqTol && std::fabs(s.M - b) < kEqTol;
}

struct LnValue {
    double ln = 0.0;
    int sign = 1;
};

// Equal exponents: the pair is one component at doubled time, and the
// moment is the Gamma ratio (2t)^{mu/alpha} G(1 - mu/alpha)/G(1 - mu).
LnValue equal_ln(double alpha, double mu, double t) {
    double ln = mu / alpha * std::log(2.0 * t) + std::lgamma(1.0 - mu / alpha) -
                std::lgamma(1.0 - mu);
    return {ln, 1};
}

// The alternating series in wide precision.  Terms are alternating with a
// single log-magnitude peak; summation runs smallest-first from the first
// term 95 e-folds below the peak.  The surviving fraction of the peak is
// the cancellation budget; below 1e-28 the result has lost too many
// digits to trust.
LnValue series_ln(const OneSidedShape& s, double mu, double t, const SeriesControl& ctrl) {
    using wide::quad;
    const quad mq = s.m, Mq = s.M, muq = mu;
    const quad lnt = logq(quad(t));

    quad ln_gneg;  // ln |Gamma(-mu)|
    int sign_gneg;
    if (mu < 0.0) {
        ln_gneg = lgammaq(-muq);
        sign_gneg = 1;
    } else {
        // reflection through G(-mu) G(1+mu) = -pi / sin(pi mu); -mu in (-1,0)
        ln_gneg = logq(quad(M_PIq) / fabsq(sinq(quad(M_PIq) * muq))) - lgammaq(1 + muq);
        sign_gneg = -1;
    }

    auto term_ln = [&](long r) {
        return lgammaq((mq * r - muq) / Mq) - lgammaq(quad(r) + 1) +
               ((1 - mq / Mq) * r + muq / Mq) * lnt;
    };
    // Gamma((m r - mu)/M) is negative only when the argument lands in
    // (-1, 0), which can happen at r = 0 alone (0 < mu < m).
    auto term_sign = [&](long r) { return (s.m * r - mu < 0.0) ? -1 : 1; };

    quad peak = term_ln(0);
    long r_end = -1;
    for (long r = 1; r < ctrl.max_terms; ++r) {
        quad a = term_ln(r);
        if (a > peak) {
            peak = a;
        } else if (a < peak - 95) {
            r_end = r;
            break;
        }
    }
    if (r_end < 0) throw NumericError("moment series did not decay within the term budget");

    quad sum = 0;
    for (long r = r_end; r >= 0; --r) {
        quad w = expq(term_ln(r) - peak);
        int sg = ((r & 1) ? -1 : 1) * term_sign(r);
        sum += sg < 0 ? -w : w;
    }
    if (fabsq(sum) < quad(1e-28))
        throw NumericError("moment series cancellation exhausted the working precision");

    int sign = sign_gneg * (sum < 0 ? -1 : 1);
    double ln = static_cast<double>(peak + logq(fabsq(sum)) - ln_gneg) - std::log(s.M);
    return {ln, sign};
}

// ln rho(-q), q > 0, from the exponential transform of the kernel:
// rho(-q) = (1/Gamma(q)) int_0^inf s^{q-1} e^{-t(s^m + s^M)} ds.  After
// s = e^u the exponent f(u) = q u - t(e^{mu} + e^{Mu}) is strictly
// concave with one maximum; the integrand is positive, so the route has
// no cancellation and works at every order.
double transform_ln(const OneSidedShape& s, double q, double t) {
    const double m = s.m, M = s.M;
    auto fprime = [&](double u) {
        return q - t * (m * std::exp(m * u) + M * std::exp(M * u));
    };
    double lo = std::min(0.0, std::log(q / (t * (m + M))) / m) - 60.0 / m;
    double hi = (std::log(q / (t * M) + 10.0) + 5.0) / M;
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        (fprime(mid) > 0.0 ? lo : hi) = mid;
    }
    const double u0 = 0.5 * (lo + hi);
    const double f0 = q * u0 - t * (std::exp(m * u0) + std::exp(M * u0));
    const double sigma = 1.0 / std::sqrt(t * (m * m * std::exp(m * u0) + M * M * std::exp(M * u0)));

    auto g = [&](double u) {
        return std::exp(q * u - t * (std::exp(m * u) + std::exp(M * u)) - f0);
    };
    // Core: +-12 sigma (Gaussian falloff); left strip: the exponent decays
    // at least linearly at rate q there, so 95/q more covers the rest.
    double integral = gl16_composite(g, u0 - 12.0 * sigma, u0 + 14.0 * sigma, 64) +
                      gl16_composite(g, u0 - 12.0 * sigma - 95.0 / q, u0 - 12.0 * sigma, 48);
    return f0 + std::log(integral) - std::lgamma(q);
}

enum class CatalogMoment { none, half_half, third_two_thirds };

CatalogMoment catalog_entry(const OneSidedShape& s) {
    if (is_pair(s, 0.5, 0.5)) return CatalogMoment::half_half;
    if (is_pair(s, 1.0 / 3.0, 2.0 / 3.0)) return CatalogMoment::third_two_thirds;
    return CatalogMoment::none;
}

double catalog_ln(CatalogMoment which, int n, double t) {
    if (n == 0) return 0.0;
    if (which == CatalogMoment::half_half)
        return std::log(2.0) - 2.0 * n * std::log(2.0 * t) + std::lgamma(2.0 * n) -
               std::lgamma(static_cast<double>(n));
    return std::log(3.0) - 6.0 * n * std::log(t) + std::lgamma(6.0 * n) -
           std::lgamma(2.0 * n);
}

double rho_ln_resolved(const OneSidedShape& s, int n,
                       double t, MomentBasis basis, MomentBasis* used) {
    if (n < 0) throw DomainError("stieltjes_rho: order must be non-negative");
    CatalogMoment entry = catalog_entry(s);
    if (basis == MomentBasis::automatic)
        basis = entry != CatalogMoment::none ? MomentBasis::catalog : MomentBasis::series;
    if (used) *used = basis;
    if (basis == MomentBasis::catalog) {
        if (entry == CatalogMoment::none)
            throw DomainError("stieltjes_rho: no catalog moment formula for this pair");
        return catalog_ln(entry, n, t);
    }
    if (n == 0) return 0.0;
    if (std::fabs(s.M - s.m) < kEqTol)
        return equal_ln(s.m, -static_cast<double>(s.lp) * n, t).ln;

    return transform_ln(s, static_cast<double>(s.lp) * n, t);
}

double psi_log_weight(const TwoScaleRational& spec, const OneSidedShape& s, double t,
                      double y) {
    const double lp = static_cast<double>(s.lp);
    KernelResult h = kernel_h_onesided(spec.first.alpha(), spec.second.alpha(), t,
                                       std::exp(-y / lp));
    if (!(h.value > 0.0)) return kNaN;
    return std::log(lp) + y * (1.0 + 1.0 / lp) - std::log(h.value);
}

}  // namespace

const char* to_string(MomentVerdict v) {
    switch (v) {
        case MomentVerdict::unique: return "unique";
        case MomentVerdict::non_unique_candidate: return "non_unique_candidate";
        case MomentVerdict::inconclusive: return "inconclusive";
    }
    return "unknown";
}

double moment_series(const TwoScaleRational& spec, double mu, double t,
                     const SeriesControl& ctrl) {
    ctrl.validate();
    OneSidedShape s = onesided_shape(spec, t);
    if (mu == 0.0) return 1.0;
    if (mu >= s.m - 1e-15)
        throw DomainError("moment_series: the moment diverges at orders >= min(alpha)");
    LnValue v = std::fabs(s.M - s.m) < kEqTol ? equal_ln(s.m, mu, t) : series_ln(s, mu, t, ctrl);
    if (v.sign <= 0)
        throw NumericError("moment_series: alternation destroyed the sign; value not trusted");
    if (v.ln > 709.0) throw NumericError("moment_series: value overflows double");
    return std::exp(v.ln);
}

MomentSequence moment_sequence(const TwoScaleRational& spec,
                               const std::vector<double>& mu_values, double t,
                               const SeriesControl& ctrl) {
    OneSidedShape s = onesided_shape(spec, t);
    MomentSequence seq;
    seq.mu_values = mu_values;
    seq.t = t;
    seq.spec = spec;
    seq.rho.reserve(mu_values.size());
    for (double mu : mu_values)
        seq.rho.push_back(mu >= s.m - 1e-15 ? kNaN : moment_series(spec, mu, t, ctrl));
    return seq;
}

bool has_catalog_moments(const TwoScaleRational& spec) {
    return catalog_entry(onesided_shape(spec, 1.0)) != CatalogMoment::none;
}

double catalog_moment(const TwoScaleRational& spec, int n, double t) {
    OneSidedShape s = onesided_shape(spec, t);
    if (n < 0) throw DomainError("catalog_moment: order must be non-negative");
    CatalogMoment entry = catalog_entry(s);
    if (entry == CatalogMoment::none)
        throw DomainError("catalog_moment: no catalog moment formula for this pair");
    double ln = catalog_ln(entry, n, t);
    if (ln > 709.0) throw NumericError("catalog_moment: value overflows double");
    return std::exp(ln);
}

double stieltjes_rho(const TwoScaleRational& spec, int n, double t, MomentBasis basis,
                     const SeriesControl& ctrl) {
    double ln = stieltjes_rho_ln(spec, n, t, basis, ctrl);
    if (ln > 709.0) throw NumericError("stieltjes_rho: value overflows double");
    return std::exp(ln);
}

double stieltjes_rho_ln(const TwoScaleRational& spec, int n, double t, MomentBasis basis,
                        const SeriesControl& ctrl) {
    ctrl.validate();
    OneSidedShape s = onesided_shape(spec, t);
    return rho_ln_resolved(s, n, t, basis, nullptr);
}

double stieltjes_weight(const TwoScaleRational& spec, double t, double x) {
    OneSidedShape s = onesided_shape(spec, t);
    if (!(x > 0.0)) throw DomainError("stieltjes_weight: x must be positive");
    const double lp = static_cast<double>(s.lp);
    KernelResult h = kernel_h_onesided(spec.first.alpha(), spec.second.alpha(), t,
                                       std::pow(x, -1.0 / lp));
    return h.value / lp * std::pow(x, -1.0 - 1.0 / lp);
}

CarlemanReport carleman_diagnostic(const TwoScaleRational& spec, double t, int n_terms,
                                   MomentBasis basis, const SeriesControl& ctrl) {
    ctrl.validate();
    OneSidedShape s = onesided_shape(spec, t);
    if (n_terms < 10) throw DomainError("carleman_diagnostic: need at least 10 terms");

    CarlemanReport rep;
    rep.terms.reserve(n_terms);
    rep.partial_sums.reserve(n_terms);
    double running = 0.0;
    for (int n = 1; n <= n_terms; ++n) {
        double ln = rho_ln_resolved(s, n, t, basis, n == 1 ? &rep.basis_used : nullptr);
        double c = std::exp(-ln / (2.0 * n));
        rep.terms.push_back(c);
        running += c;
        rep.partial_sums.push_back(running);
    }

    // least-squares slope of ln c_n against ln n over the last decade
    const int n0 = std::max(1, n_terms / 10);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (int n = n0; n <= n_terms; ++n) {
        double lx = std::log(static_cast<double>(n));
        double ly = std::log(rep.terms[n - 1]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++cnt;
    }
    rep.fitted_decay = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);

    if (rep.fitted_decay <= 1.0) {
        rep.verdict = MomentVerdict::unique;
    } else {
        std::vector<double> grid;
        for (int i = 0; i <= 40; ++i) grid.push_back(-2.0 + 0.1 * i);
        ConvexityReport conv = convexity_check(spec, t, grid);
        rep.verdict = conv.all_positive ? MomentVerdict::non_unique_candidate
                                        : MomentVerdict::inconclusive;
    }
    return rep;
}

ConvexityReport convexity_check(const TwoScaleRational& spec, double t,
                                const std::vector<double>& y_grid) {
    OneSidedShape s = onesided_shape(spec, t);
    if (y_grid.empty()) throw DomainError("convexity_check: empty grid");

    const double h = 1e-3;
    ConvexityReport rep;
    rep.y = y_grid;
    rep.second.reserve(y_grid.size());
    for (double y : y_grid) {
        double p0 = psi_log_weight(spec, s, t, y);
        double pp1 = psi_log_weight(spec, s, t, y + h);
        double pm1 = psi_log_weight(spec, s, t, y - h);
        double pp2 = psi_log_weight(spec, s, t, y + 2.0 * h);
        double pm2 = psi_log_weight(spec, s, t, y - 2.0 * h);
        if (std::isnan(p0) || std::isnan(pp1) || std::isnan(pm1) || std::isnan(pp2) ||
            std::isnan(pm2)) {
            rep.second.push_back(kNaN);
            continue;
        }
        double d1 = (pp1 - 2.0 * p0 + pm1) / (h * h);
        double d2 = (pp2 - 2.0 * p0 + pm2) / (4.0 * h * h);
        rep.second.push_back((4.0 * d1 - d2) / 3.0);
    }

    bool any = false, all = true;
    for (double v : rep.second) {
        if (std::isnan(v)) continue;
        any = true;
        if (!(v > 0.0)) all = false;
    }
    if (!any) throw NumericError("convexity_check: no evaluable grid points");
    rep.all_positive = all;

    rep.window_start = kNaN;
    size_t i = rep.second.size();
    while (i > 0 && std::isnan(rep.second[i - 1])) --i;  // skip the vanished far edge
    while (i > 0 && rep.second[i - 1] > 0.0) {
        rep.window_start = rep.y[i - 1];
        --i;
    }
    return rep;
}

}  // namespace levy
