// Single-scale stable densities: closed-form catalog, one-sided series,
// and the scaling/reflection identities.
#include "levy/stable.hpp"

#include <quadmath.h>

#include <cmath>
#include <string>
#include <vector>

#include "levy/common.hpp"
#include "wide.hpp"

namespace levy {

namespace {

using wide::quad;

double hyp1f1_pos(double a, double b, double w) {
    ParamLists p;
    p.upper = {cplx(a)};
    p.lower = {cplx(b)};
    SeriesControl ctl;
    return phyper(p, cplx(w), ctl).value.real();
}

// Prefactors of the (3/2, -1/2) closed form, shared by the double and quad
// branches so the pair cancellation sees one consistent value.
const quad& three_half_c1q() {
    static const quad v = powq(2, quad(2) / 3) / (3 * sqrtq(M_PIq)) *
                          tgammaq(quad(5) / 6) / tgammaq(quad(2) / 3);
    return v;
}

const quad& three_half_c2q() {
    static const quad v = powq(2, quad(4) / 3) / (9 * sqrtq(M_PIq)) *
                          tgammaq(quad(7) / 6) / tgammaq(quad(4) / 3);
    return v;
}

// v_{3/2,-1/2}(1, xi); general t is an exact rescale of this profile.
//
// The printed 1F1 pair has argument z = -4 xi^3/27.  Both branches are
// rewritten so the series members carry a positive argument w = |z| and
// no internal sign changes: for xi >= 0 via the Kummer transformation
// (pair then carries the light tail e^{-w}), for xi < 0 directly (pair
// cancels like e^{w} down to the algebraic |xi|^{-5/2} tail).  The pair
// combination, prefactors included, runs in quad once that cancellation
// exceeds double headroom, and the deep algebraic tail switches to the
// asymptotic series in |xi| truncated at its least term.
double three_half_reduced(double xi) {
    static const double kC1 = static_cast<double>(three_half_c1q());
    static const double kC2 = static_cast<double>(three_half_c2q());
    const double w = 4.0 * std::abs(xi) * xi * xi / 27.0;
    if (xi >= 0.0) {
        if (w > 120.0) return 0.0;  // below e^{-120}
        if (w <= 9.0) {
            double m1 = hyp1f1_pos(-1.0 / 6.0, 2.0 / 3.0, w);
            double m2 = hyp1f1_pos(1.0 / 6.0, 4.0 / 3.0, w);
            return std::exp(-w) * (kC1 * m1 + kC2 * xi * m2);
        }
        const quad xq = xi;
        const quad wq = 4 * xq * xq * xq / 27;
        quad s = three_half_c1q() * wide::phyper_q({-quad(1) / 6}, {quad(2) / 3}, wq) +
                 three_half_c2q() * xq * wide::phyper_q({quad(1) / 6}, {quad(4) / 3}, wq);
        return static_cast<double>(expq(-wq) * s);
    }
    const double r = -xi;
    if (r >= 6.5) {
        // Tail series: sum over odd n of +-Gamma(1+3n/2)/(pi n!) r^{-1-3n/2}.
        double sum = 0.0, prev = HUGE_VAL;
        for (int n = 1; n < 400; n += 2) {
            double mag = std::exp(std::lgamma(1.0 + 1.5 * n) - std::lgamma(n + 1.0) -
                                  (1.0 + 1.5 * n) * std::log(r)) / kPi;
            if (mag >= prev) break;  // least term reached; the series is asymptotic
            sum += (n % 4 == 1) ? mag : -mag;
            prev = mag;
            if (mag < 1e-22 * std::abs(sum)) break;
        }
        return sum;
    }
    if (w <= 9.0) {
        double m1 = hyp1f1_pos(5.0 / 6.0, 2.0 / 3.0, w);
        double m2 = hyp1f1_pos(7.0 / 6.0, 4.0 / 3.0, w);
        return kC1 * m1 + kC2 * xi * m2;
    }
    const quad xq = xi;
    const quad wq = -4 * xq * xq * xq / 27;
    quad s = three_half_c1q() * wide::phyper_q({quad(5) / 6}, {quad(2) / 3}, wq) +
             three_half_c2q() * xq * wide::phyper_q({quad(7) / 6}, {quad(4) / 3}, wq);
    return static_cast<double>(s);
}

}  // namespace

void StableComponent::validate() const {
    if (!(alpha > 0.0) || alpha > 2.0) {
        throw DomainError("StableComponent: alpha must lie in (0, 2]");
    }
    if (alpha == 1.0) {
        throw DomainError("StableComponent: alpha = 1 is not supported");
    }
    if (!(gamma > 0.0)) {
        throw DomainError("StableComponent: gamma must be > 0");
    }
    const double skew_max = (alpha < 1.0) ? alpha : 2.0 - alpha;
    if (std::abs(beta) > skew_max + 1e-12) {
        throw DomainError("StableComponent: skewness outside the admissible range");
    }
}

RationalExponent rationalize(double alpha, double beta) {
    if (!(alpha > 0.0) || alpha > 2.0) {
        throw DomainError("rationalize: alpha must lie in (0, 2]");
    }
    // Continued-fraction convergents p/q with q <= 64; convergents are
    // automatically in lowest terms.
    long p0 = 1, q0 = 0;
    long p1 = static_cast<long>(std::floor(alpha)), q1 = 1;
    double frac = alpha - std::floor(alpha);
    long num = -1, den = -1;
    for (int it = 0; it < 40 && q1 <= 64; ++it) {
        if (std::abs(alpha - static_cast<double>(p1) / q1) <= 1e-9) {
            num = p1;
            den = q1;
            break;
        }
        if (frac < 1e-12) break;
        const double inv = 1.0 / frac;
        const long step = static_cast<long>(std::floor(inv));
        frac = inv - std::floor(inv);
        const long p2 = step * p1 + p0, q2 = step * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    if (den < 0) {
        throw DomainError("rationalize: no fraction with denominator <= 64 matches alpha to 1e-9");
    }
    const double skew_exact = (num - den * beta) / 2.0;
    const long skew = std::lround(skew_exact);
    if (std::abs(skew_exact - skew) > 1e-6) {
        throw DomainError("rationalize: beta is not of the form (num - 2 skew)/den");
    }
    StableComponent check;
    check.alpha = static_cast<double>(num) / den;
    check.beta = static_cast<double>(num - 2 * skew) / den;
    check.validate();
    RationalExponent out;
    out.num = static_cast<int>(num);
    out.den = static_cast<int>(den);
    out.skew_num = static_cast<int>(skew);
    return out;
}

StableComponent reflect(const StableComponent& c) {
    c.validate();
    StableComponent out = c;
    out.beta = -c.beta;
    return out;
}

double rescale(double v1, double alpha, double t, double x) {
    (void)x;
    return std::pow(t, -1.0 / alpha) * v1;
}

double density_closed(const std::string& name, double t, double x) {
    if (!(t > 0.0)) throw DomainError("density_closed: t must be > 0");
    if (name == "gauss") {
        return std::exp(-x * x / (4.0 * t)) / (2.0 * std::sqrt(kPi * t));
    }
    if (name == "levy_smirnov") {
        if (x <= 0.0) return 0.0;
        return t * std::exp(-t * t / (4.0 * x)) / (2.0 * kSqrtPi * x * std::sqrt(x));
    }
    if (name == "three_half") {
        const double s = std::pow(t, 2.0 / 3.0);
        return three_half_reduced(x / s) / s;
    }
    if (name == "one_third") {
        if (x <= 0.0) return 0.0;
        const double t32 = t * std::sqrt(t);
        const double arg = 2.0 * t32 / (3.0 * std::sqrt(3.0 * x));
        return t32 / (3.0 * kPi * x * std::sqrt(x)) * bessel_K(1.0 / 3.0, arg);
    }
    if (name == "two_thirds") {
        if (x <= 0.0) return 0.0;
        const double z = 4.0 * t * t * t / (27.0 * x * x);
        return std::sqrt(3.0 / kPi) * std::exp(-0.5 * z) / x * whittaker_W(0.5, 1.0 / 6.0, z);
    }
    throw DomainError("density_closed: unknown catalog id '" + name + "'");
}

double one_sided_series(double alpha, double t, double x, const SeriesControl& ctl,
                        bool* low_precision, std::vector<double>* term_log) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw DomainError("one_sided_series: alpha must lie in (0, 1)");
    }
    if (!(t > 0.0)) throw DomainError("one_sided_series: t must be > 0");
    if (!(x > 0.0)) throw DomainError("one_sided_series: x must be > 0");
    ctl.validate();
    if (low_precision) *low_precision = false;
    if (std::pow(x, alpha) < 0.5 * t) {
        // Cancellation regime: the alternating terms exceed the value by a
        // factor growing like exp(c (t/x^alpha)^{1/(1-alpha)}).
        if (low_precision) *low_precision = true;
        return small_x_asymptotic(alpha, t, x);
    }
    const quad aq = alpha;
    const quad lt = logq(quad(t));
    const quad lx = logq(quad(x));
    quad sum = 0, peak = 0;
    int below = 0;
    for (int r = 1; r <= ctl.max_terms; ++r) {
        const quad rq = r;
        const quad ln_mag = lgammaq(1 + aq * rq) - lgammaq(rq + 1) + rq * lt - (1 + aq * rq) * lx;
        quad term = expq(ln_mag) * sinq(M_PIq * aq * rq);
        if (r % 2) term = -term;
        sum += term;
        const quad mag = wide::qabs(term);
        if (term_log) term_log->push_back(static_cast<double>(mag));
        if (mag > peak) peak = mag;
        // Stop relative to the largest term, not the (cancelled) sum.
        if (mag == 0 || mag <= peak * quad(1e-33)) {
            if (++below >= ctl.tail_window) return static_cast<double>(-sum / M_PIq);
        } else {
            below = 0;
        }
    }
    throw NumericError("one_sided_series: series did not settle");
}

double small_x_asymptotic(double alpha, double t, double x) {
    const double om = 1.0 - alpha;
    const double a = om * std::pow(alpha, alpha / om);
    const double k = std::pow(alpha, 1.0 / (2.0 * om)) / std::sqrt(2.0 * kPi * om);
    return k * std::pow(t, 1.0 / (2.0 * om)) * std::pow(x, -(2.0 - alpha) / (2.0 * om)) *
           std::exp(-a * std::pow(t, 1.0 / om) * std::pow(x, -alpha / om));
}

}  // namespace levy
