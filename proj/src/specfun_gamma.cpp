// Log-gamma (Lanczos), reciprocal gamma, and the two gamma-identity residuals.

#include <array>

#include "levy/specfun.hpp"

namespace levy {

namespace {

// Lanczos coefficients, g = 7, 9 terms.
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

cplx ln_gamma_core(cplx z) {
    // Valid for Re z >= 0.5.
    cplx acc = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) {
        acc += kLanczos[k] / (z - 1.0 + static_cast<double>(k));
    }
    cplx t = z + 6.5;  // z + g - 0.5
    return 0.5 * std::log(2.0 * kPi) + (z - 0.5) * std::log(t) - t + std::log(acc);
}

}  // namespace

cplx ln_gamma(cplx z) {
    if (z.imag() == 0.0 && is_nonpositive_integer(z.real())) {
        throw DomainError("ln_gamma: pole at non-positive integer");
    }
    if (z.real() >= 0.5) {
        return ln_gamma_core(z);
    }
    // Reflection: log Gamma(z) = log(pi / sin(pi z)) - log Gamma(1 - z).
    // The branch is principal for the real arguments this library feeds here;
    // accuracy of exp(ln_gamma) is what the self-tests pin down.
    cplx s = std::sin(kPi * z);
    return std::log(kPi) - std::log(s) - ln_gamma_core(1.0 - z);
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    if (x >= 0.5) {
        return std::exp(-ln_gamma_core(cplx(x, 0.0)).real());
    }
    // 1/Gamma(x) = sin(pi x) Gamma(1 - x) / pi.
    return std::sin(kPi * x) * std::exp(ln_gamma_core(cplx(1.0 - x, 0.0)).real()) / kPi;
}

double gamma_real(double x) {
    if (is_nonpositive_integer(x)) {
        throw DomainError("gamma_real: pole at non-positive integer");
    }
    if (x >= 0.5) return std::exp(ln_gamma_core(cplx(x, 0.0)).real());
    double r = rgamma(x);
    if (r == 0.0) throw DomainError("gamma_real: pole");
    return 1.0 / r;
}

double reflection_check(cplx z) {
    cplx s = std::sin(kPi * z);
    if (std::abs(s) < 1e-300) throw DomainError("reflection_check: sin(pi z) = 0");
    cplx lhs = std::exp(ln_gamma(z) + ln_gamma(1.0 - z));
    cplx rhs = kPi / s;
    return std::abs(lhs - rhs) / std::abs(rhs);
}

double gauss_legendre_check(cplx a, int n) {
    if (n < 1) throw DomainError("gauss_legendre_check: n must be >= 1");
    cplx na = static_cast<double>(n) * a;
    cplx lhs = ln_gamma(na);
    cplx rhs = 0.5 * (1.0 - n) * std::log(2.0 * kPi) +
               (na - 0.5) * std::log(static_cast<double>(n));
    for (int j = 0; j < n; ++j) {
        rhs += ln_gamma(a + static_cast<double>(j) / n);
    }
    // Compare in log space so huge values of Gamma(n a) cannot overflow.
    return std::abs(std::exp(lhs - rhs) - 1.0);
}

cplx pochhammer(cplx a, int n) {
    if (n < 0) throw DomainError("pochhammer: n must be >= 0");
    cplx p = 1.0;
    for (int k = 0; k < n; ++k) p *= a + static_cast<double>(k);
    return p;
}

std::vector<double> delta_list(int n, double a) {
    if (n < 1) throw DomainError("delta_list: n must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = (a + j) / n;
    return out;
}

}  // namespace levy
