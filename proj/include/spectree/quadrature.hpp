#pragma once

#include <functional>

#include "spectree/potential.hpp"

namespace spectree {

/// Adaptive Gauss-Kronrod (7,15) quadrature of f over [a, b] to the given
/// relative tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-9);

/// int_a^{Q(lambda)} sqrt(lambda - V(t)) dt with the square-root turning
/// point at t = Q(lambda) handled by the substitution t = Q - tau^2.
/// Returns 0 when the classically allowed region is empty.
double j_integral(const Potential& potential, double a, double lambda,
                  double rel_tol = 1e-9);

}  // namespace spectree
