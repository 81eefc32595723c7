// Parabolic cylinder D, modified Bessel K, Tricomi U, and Whittaker W.
//
// D and U are built from confluent-hypergeometric pairs whose combination
// cancels like e^{w}; the mid-range branches therefore accumulate in
// __float128 before the subtraction, and the far ranges switch to the
// standard large-argument expansions where the pairs become unusable.

#include <quadmath.h>

#include <cstdlib>

#include "levy/specfun.hpp"

namespace levy {

namespace {

// Reciprocal gamma, square root, and power in the accumulator's own
// precision.  The pair subtractions below cancel ten or more digits, so a
// double-rounded prefactor would waste the widened accumulation; worse, any
// inconsistency between parameters derived separately in double (a-b+1
// versus b-1, say) is amplified by the full e^z of the cancellation.  All
// derived quantities therefore stay in T end to end.
template <typename T>
T rgamma_t(T x);
template <>
double rgamma_t<double>(double x) {
    return rgamma(x);
}
template <>
__float128 rgamma_t<__float128>(__float128 x) {
    if (x <= 0 && near_integer(static_cast<double>(x))) return 0;
    return __float128(1) / tgammaq(x);
}

template <typename T>
T sqrt2_t();
template <>
double sqrt2_t<double>() {
    return std::sqrt(2.0);
}
template <>
__float128 sqrt2_t<__float128>() {
    return sqrtq(__float128(2));
}

template <typename T>
T pow_t(T x, T p);
template <>
double pow_t<double>(double x, double p) {
    return std::pow(x, p);
}
template <>
__float128 pow_t<__float128>(__float128 x, __float128 p) {
    return powq(x, p);
}

// 1F1(a; b; w) by term recurrence, w >= 0, accumulated in T.  The callers
// subtract two of these sums with cancellation down to e^{-w} of their size,
// so the series runs until terms fall below the accumulator's own epsilon
// relative to the LARGEST term seen: only then is the truncation tail no
// bigger than the roundoff already inherent in the summation.
template <typename T>
T kummer_1f1(T a, T b, T w, int max_terms = 4000) {
    const T eps = (sizeof(T) > 8) ? T(1e-36) : T(1e-18);
    T term = 1.0;
    T sum = 1.0;
    T peak = 1.0;
    int below = 0;
    for (int n = 0; n < max_terms; ++n) {
        term *= (a + T(n)) / (b + T(n)) * w / (T(n) + T(1));
        sum += term;
        T mag = term < T(0) ? -term : term;
        if (mag > peak) peak = mag;
        if (mag <= eps * peak) {
            if (++below >= 3) return sum;
        } else {
            below = 0;
        }
    }
    throw NumericError("kummer_1f1: no convergence");
}

// Bracket of the parabolic-cylinder Kummer pair, accumulated in T.
template <typename T>
double pcd_bracket(double nu_d, double z_d) {
    const T nu = nu_d, z = z_d, half = T(1) / T(2);
    T w = z * z / T(2);
    T f1 = kummer_1f1<T>(-nu * half, half, w);
    T f2 = kummer_1f1<T>((T(1) - nu) * half, T(3) * half, w);
    T bracket = f1 * rgamma_t<T>((T(1) - nu) * half) -
                sqrt2_t<T>() * z * f2 * rgamma_t<T>(-nu * half);
    return static_cast<double>(bracket);
}

// U(a, b, z) via the Kummer connection, accumulated in T.
template <typename T>
double tricomi_kummer(double a_d, double b_d, double z_d) {
    const T a = a_d, b = b_d, z = z_d;
    T f1 = kummer_1f1<T>(a, b, z);
    T f2 = kummer_1f1<T>(a - b + T(1), T(2) - b, z);
    T g1 = rgamma_t<T>(T(1) - b);  // 1 / Gamma(1-b), never a pole here
    T p1 = (g1 == T(0)) ? T(0) : rgamma_t<T>(a - b + T(1)) / g1;
    T g2 = rgamma_t<T>(b - T(1));
    T p2 = (g2 == T(0)) ? T(0) : rgamma_t<T>(a) / g2 * pow_t<T>(z, T(1) - b);
    T sum = p1 * f1 + p2 * f2;
    return static_cast<double>(sum);
}

}  // namespace

double parabolic_cylinder_D(double nu, double z) {
    if (!(nu >= -1.0 && nu <= 40.0)) {
        throw DomainError("parabolic_cylinder_D: nu outside [-1, 40]");
    }
    if (!(std::abs(z) <= 37.0)) {
        throw DomainError("parabolic_cylinder_D: |z| > 37 risks overflow");
    }
    if (z >= 10.0) {
        // D_nu(z) ~ e^{-z^2/4} z^nu (1 - nu(nu-1)/(2z^2) + ...).
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 60; ++k) {
            double next = term * (nu - 2.0 * k + 2.0) * (nu - 2.0 * k + 1.0) /
                          (2.0 * k * z * z) * (-1.0);
            if (std::abs(next) >= std::abs(term)) break;  // past the optimal cut
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return std::exp(-z * z / 4.0) * std::pow(z, nu) * sum;
    }
    // The Kummer-pair bracket cancels like e^{z^2/2} for z > 0; widen the
    // accumulator in the window where double precision runs out of digits.
    double bracket = (z > 5.0) ? pcd_bracket<__float128>(nu, z)
                               : pcd_bracket<double>(nu, z);
    return std::pow(2.0, nu / 2.0) * kSqrtPi * std::exp(-z * z / 4.0) * bracket;
}

double bessel_K(double nu, double z) {
    if (!(z > 0.0)) throw DomainError("bessel_K: z must be > 0");
    if (!(nu >= 0.0 && nu <= 2.0)) throw DomainError("bessel_K: nu outside [0, 2]");
    if (z > 700.0) return 0.0;  // below double underflow of e^{-z}
    // K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt; the trapezoid rule is
    // spectrally accurate for this even analytic integrand.
    double tmax = std::log(2.0 * (50.0 + 40.0) / z) + 2.0;
    if (tmax < 3.0) tmax = 3.0;
    const int n = 1 + static_cast<int>(tmax / 0.05);
    const double h = tmax / n;
    double sum = 0.5 * 1.0 * std::exp(-z);  // t = 0 endpoint, cosh(0) = 1
    for (int i = 1; i <= n; ++i) {
        double t = h * i;
        double e = -z * std::cosh(t);
        if (e < -746.0) break;
        sum += std::exp(e) * std::cosh(nu * t);
    }
    return h * sum;
}

double tricomi_U(double a, double b, double z) {
    if (!(z > 0.0)) throw DomainError("tricomi_U: z must be > 0");
    if (near_integer(b)) throw DomainError("tricomi_U: integer b not supported");
    if (z >= 40.0) {
        // U(a,b,z) ~ z^{-a} 2F0(a, a-b+1;; -1/z), truncated at the least term.
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < 100; ++k) {
            double next = term * (a + k) * (a - b + 1.0 + k) * (-1.0 / z) / (k + 1.0);
            if (std::abs(next) >= std::abs(term)) break;
            term = next;
            sum += term;
            if (std::abs(term) < 1e-17 * std::abs(sum)) break;
        }
        return std::pow(z, -a) * sum;
    }
    return (z > 8.0) ? tricomi_kummer<__float128>(a, b, z)
                     : tricomi_kummer<double>(a, b, z);
}

double whittaker_W(double kappa, double mu, double z) {
    if (!(z > 0.0)) throw DomainError("whittaker_W: z must be > 0");
    double a = mu - kappa + 0.5;
    double b = 1.0 + 2.0 * mu;
    return std::exp(-z / 2.0) * std::pow(z, mu + 0.5) * tricomi_U(a, b, z);
}

}  // namespace levy
