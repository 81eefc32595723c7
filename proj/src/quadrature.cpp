#include "levy/quadrature.hpp"

namespace levy {

namespace {

// Abscissae (positive half) and weights of the 16-point Gauss-Legendre rule.
constexpr double kNodes[8] = {
    0.09501250983763744019, 0.28160355077925891323, 0.45801677765722738634,
    0.61787624440264374845, 0.75540440835500303390, 0.86563120238783174388,
    0.94457502307323257608, 0.98940093499164993260,
};
constexpr double kWeights[8] = {
    0.18945061045506849629, 0.18260341504492358887, 0.16915651939500253819,
    0.14959598881657673208, 0.12462897125553387205, 0.09515851168249278481,
    0.06225352393864789286, 0.02715245941175409485,
};

}  // namespace

double gl16_panel(const std::function<double(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double d = half * kNodes[i];
        sum += kWeights[i] * (f(mid - d) + f(mid + d));
    }
    return half * sum;
}

cplx gl16_panel_c(const std::function<cplx(double)>& f, double a, double b) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    cplx sum = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double d = half * kNodes[i];
        sum += kWeights[i] * (f(mid - d) + f(mid + d));
    }
    return half * sum;
}

double gl16_composite(const std::function<double(double)>& f, double a, double b,
                      int panels) {
    if (panels < 1) throw DomainError("gl16_composite: panels must be >= 1");
    const double w = (b - a) / panels;
    double sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        sum += gl16_panel(f, a + i * w, a + (i + 1) * w);
    }
    return sum;
}

cplx gl16_composite_c(const std::function<cplx(double)>& f, double a, double b,
                      int panels) {
    if (panels < 1) throw DomainError("gl16_composite_c: panels must be >= 1");
    const double w = (b - a) / panels;
    cplx sum = 0.0;
    for (int i = 0; i < panels; ++i) {
        sum += gl16_panel_c(f, a + i * w, a + (i + 1) * w);
    }
    return sum;
}

double gl16_geometric_tail(const std::function<double(double)>& f, double a,
                           double first_width, double growth, double tol,
                           int max_panels) {
    if (!(first_width > 0.0) || !(growth >= 1.0)) {
        throw DomainError("gl16_geometric_tail: bad panel geometry");
    }
    double lo = a;
    double width = first_width;
    double total = 0.0;
    int calm = 0;
    for (int i = 0; i < max_panels; ++i) {
        const double piece = gl16_panel(f, lo, lo + width);
        total += piece;
        if (std::abs(piece) <= tol * (std::abs(total) + 1e-300)) {
            if (++calm >= 2) return total;
        } else {
            calm = 0;
        }
        lo += width;
        width *= growth;
    }
    throw NumericError("gl16_geometric_tail: tail did not settle");
}

}  // namespace levy
