#include "spectree/potential.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spectree {

Potential Potential::zero() {
  Potential p;
  p.form_ = PotentialForm::zero;
  p.lower_bound_ = 0.0;
  return p;
}

Potential Potential::power(double c, double gamma) {
  if (gamma <= 0.0) throw ValidationError("power potential needs gamma > 0");
  Potential p;
  p.form_ = PotentialForm::power;
  p.c_ = c;
  p.gamma_ = gamma;
  p.lower_bound_ = std::min(0.0, c);  // on t >= 0, min is at t=0 (c>0) or t->inf
  if (c > 0.0) {
    p.increasing_unbounded_ = true;
    p.lower_bound_ = 0.0;
    p.inverse_ = [c, gamma](double lambda) {
      return lambda <= 0.0 ? 0.0 : std::pow(lambda / c, 1.0 / gamma);
    };
  } else if (c < 0.0) {
    p.lower_bound_ = -std::numeric_limits<double>::infinity();
  }
  return p;
}

Potential Potential::table(std::vector<double> t, std::vector<double> v) {
  if (t.size() != v.size() || t.size() < 2)
    throw ValidationError("table potential needs matching knot arrays, length >= 2");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1]))
      throw ValidationError("table potential knots must be strictly increasing");
  Potential p;
  p.form_ = PotentialForm::table;
  p.lower_bound_ = *std::min_element(v.begin(), v.end());
  p.knots_t_ = std::move(t);
  p.knots_v_ = std::move(v);
  return p;
}

Potential Potential::custom(std::function<double(double)> f, double lower_bound,
                            std::function<double(double)> inverse,
                            bool increasing_unbounded) {
  if (!f) throw ValidationError("custom potential needs an evaluator");
  Potential p;
  p.form_ = PotentialForm::custom;
  p.eval_ = std::move(f);
  p.lower_bound_ = lower_bound;
  p.inverse_ = std::move(inverse);
  p.increasing_unbounded_ = increasing_unbounded;
  return p;
}

double Potential::operator()(double t) const {
  switch (form_) {
    case PotentialForm::zero:
      return 0.0;
    case PotentialForm::power:
      if (gamma_ == 1.0) return c_ * t;
      if (gamma_ == 2.0) return c_ * t * t;
      return c_ * std::pow(t, gamma_);
    case PotentialForm::table: {
      if (t <= knots_t_.front()) return knots_v_.front();
      if (t >= knots_t_.back()) return knots_v_.back();
      const auto it = std::upper_bound(knots_t_.begin(), knots_t_.end(), t);
      const std::size_t i = static_cast<std::size_t>(it - knots_t_.begin());
      const double w = (t - knots_t_[i - 1]) / (knots_t_[i] - knots_t_[i - 1]);
      return knots_v_[i - 1] + w * (knots_v_[i] - knots_v_[i - 1]);
    }
    case PotentialForm::custom:
      return eval_(t);
  }
  return 0.0;
}

double Potential::inverse(double lambda) const {
  if (!inverse_) throw NotApplicable("potential has no attached inverse");
  return inverse_(lambda);
}

}  // namespace spectree
