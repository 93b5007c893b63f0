#pragma once

#include <functional>
#include <vector>

#include "spectree/errors.hpp"

namespace spectree {

enum class PotentialForm { zero, power, table, custom };

/// Symmetric potential V(|x|) on the tree, as a function of the distance
/// to the root.  Carries a certified lower bound and, when V is strictly
/// increasing and unbounded, its inverse Q (so Q(V(t)) = t).
class Potential {
 public:
  static Potential zero();
  /// V(t) = c * t^gamma.  For c > 0, gamma > 0 the inverse is attached
  /// automatically.
  static Potential power(double c, double gamma);
  /// Piecewise-linear interpolation through (t_i, v_i); constant beyond the
  /// last knot.
  static Potential table(std::vector<double> t, std::vector<double> v);
  /// Counting samples V at the edge scale, so the evaluator should vary
  /// smoothly there; rapidly oscillating potentials may be under-resolved.
  static Potential custom(std::function<double(double)> f, double lower_bound,
                          std::function<double(double)> inverse = {},
                          bool increasing_unbounded = false);

  double operator()(double t) const;

  PotentialForm form() const { return form_; }
  double lower_bound() const { return lower_bound_; }
  bool is_zero() const { return form_ == PotentialForm::zero; }

  /// True when V is strictly increasing and unbounded (so the Schroedinger
  /// operator on an infinite-radius tree still has discrete spectrum).
  bool increasing_unbounded() const { return increasing_unbounded_; }

  bool has_inverse() const { return static_cast<bool>(inverse_); }
  /// Q(lambda) with V(Q(lambda)) = lambda, for lambda > V(0).
  double inverse(double lambda) const;

  // power-form parameters, for configuration round trips
  double coefficient() const { return c_; }
  double exponent() const { return gamma_; }

 private:
  Potential() = default;

  PotentialForm form_ = PotentialForm::zero;
  double c_ = 0.0;
  double gamma_ = 1.0;
  std::vector<double> knots_t_;
  std::vector<double> knots_v_;
  std::function<double(double)> eval_;
  std::function<double(double)> inverse_;
  double lower_bound_ = 0.0;
  bool increasing_unbounded_ = false;
};

}  // namespace spectree
