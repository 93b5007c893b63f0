#include "spectree/quadrature.hpp"

#include <cmath>

namespace spectree {

namespace {

// Gauss-Kronrod (7,15) nodes and weights on [-1, 1].
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
  double integral = 0.0;
  double error = 0.0;
};

Panel gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double hw = 0.5 * (b - a);
  const double fc = f(c);
  double res_k = kWgk[7] * fc;
  double res_g = kWg[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = hw * kXgk[i];
    const double fs = f(c - x) + f(c + x);
    res_k += kWgk[i] * fs;
    if (i % 2 == 1) res_g += kWg[i / 2] * fs;
  }
  Panel p;
  p.integral = res_k * hw;
  const double diff = std::abs(res_k - res_g) * hw;
  p.error = std::pow(200.0 * diff, 1.5);
  if (p.error > diff) p.error = diff;
  return p;
}

double adapt(const std::function<double(double)>& f, double a, double b,
             double abs_tol, int depth) {
  const Panel p = gk15(f, a, b);
  if (p.error <= abs_tol || depth >= 48) return p.integral;
  const double c = 0.5 * (a + b);
  return adapt(f, a, c, 0.5 * abs_tol, depth + 1) +
         adapt(f, c, b, 0.5 * abs_tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  if (!(b > a)) return 0.0;
  const Panel first = gk15(f, a, b);
  const double scale = std::max(std::abs(first.integral), 1e-300);
  return adapt(f, a, b, rel_tol * scale, 0);
}

double j_integral(const Potential& potential, double a, double lambda,
                  double rel_tol) {
  if (!potential.has_inverse())
    throw NotApplicable("turning-point integral needs the potential inverse");
  if (lambda <= potential(a)) return 0.0;
  const double Q = potential.inverse(lambda);
  if (!(Q > a)) return 0.0;

  const auto f = [&](double t) {
    const double w2 = lambda - potential(t);
    return w2 > 0.0 ? std::sqrt(w2) : 0.0;
  };
  // keep the sqrt singularity inside the substituted panel
  const double delta = std::min(0.25 * (Q - a), 1.0);
  const double body = integrate(f, a, Q - delta, rel_tol);
  const auto g = [&](double tau) {
    const double w2 = lambda - potential(Q - tau * tau);
    return w2 > 0.0 ? 2.0 * tau * std::sqrt(w2) : 0.0;
  };
  const double tip = integrate(g, 0.0, std::sqrt(delta), rel_tol);
  return body + tip;
}

}  // namespace spectree
