#pragma once

#include <functional>

#include "levy/common.hpp"

namespace levy {

/// 16-point Gauss-Legendre rule on [a, b].
double gl16_panel(const std::function<double(double)>& f, double a, double b);
cplx gl16_panel_c(const std::function<cplx(double)>& f, double a, double b);

/// Composite rule: [a, b] split into `panels` equal pieces.
double gl16_composite(const std::function<double(double)>& f, double a, double b,
                      int panels);
cplx gl16_composite_c(const std::function<cplx(double)>& f, double a, double b,
                      int panels);

/// Semi-infinite integral of a decaying integrand over [a, inf): panels of
/// geometrically growing width, stopped once two consecutive panels fall
/// below tol relative to the accumulated total.
double gl16_geometric_tail(const std::function<double(double)>& f, double a,
                           double first_width, double growth = 2.0,
                           double tol = 1e-15, int max_panels = 80);

}  // namespace levy
