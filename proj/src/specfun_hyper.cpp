// Generalized hypergeometric series with the shared truncation rule.

#include "levy/specfun.hpp"

namespace levy {

void SeriesControl::validate() const {
    if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
    if (abs_tol < 0.0 || rel_tol < 0.0 || (abs_tol == 0.0 && rel_tol == 0.0)) {
        throw DomainError("SeriesControl: need a positive tolerance");
    }
    if (tail_window < 1) throw DomainError("SeriesControl: tail_window must be >= 1");
}

SeriesResult phyper(const ParamLists& params, cplx x, const SeriesControl& ctrl) {
    ctrl.validate();
    for (const cplx& b : params.lower) {
        if (b.imag() == 0.0 && is_nonpositive_integer(b.real())) {
            throw DomainError("phyper: lower parameter is a non-positive integer");
        }
    }
    // A non-positive-integer upper parameter makes the series a polynomial.
    long long poly_stop = -1;
    for (const cplx& a : params.upper) {
        if (a.imag() == 0.0 && is_nonpositive_integer(a.real())) {
            long long stop = static_cast<long long>(std::llround(-a.real()));
            if (poly_stop < 0 || stop < poly_stop) poly_stop = stop;
        }
    }

    cplx term = 1.0;
    cplx sum = 1.0;
    int below = 0;
    for (int n = 0; n < ctrl.max_terms; ++n) {
        if (poly_stop >= 0 && n >= poly_stop) {
            return {sum, n + 1, 0.0};
        }
        cplx ratio = x / static_cast<double>(n + 1);
        for (const cplx& a : params.upper) ratio *= a + static_cast<double>(n);
        for (const cplx& b : params.lower) ratio /= b + static_cast<double>(n);
        term *= ratio;
        sum += term;
        double mag = std::abs(term);
        if (mag < ctrl.abs_tol + ctrl.rel_tol * std::abs(sum)) {
            if (++below >= ctrl.tail_window) {
                return {sum, n + 2, mag};
            }
        } else {
            below = 0;
        }
    }
    throw NumericError("phyper: series did not converge within max_terms");
}

}  // namespace levy
