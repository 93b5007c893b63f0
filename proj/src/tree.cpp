#include "spectree/tree.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace spectree {

namespace {

[[noreturn]] void bad(const std::string& what) { throw InvalidSequence(what); }

}  // namespace

TreeSpec TreeSpec::homogeneous(int b) {
  if (b < 2) bad("homogeneous tree needs branching number b >= 2");
  TreeSpec s;
  s.kind_ = TreeKind::homogeneous;
  s.b_ = b;
  s.radius_ = kInf;
  return s;
}

TreeSpec TreeSpec::geometric(double q, int b) {
  if (!(q > 0.0 && q < 1.0)) bad("geometric tree needs q in (0,1)");
  if (b < 2) bad("geometric tree needs branching number b >= 2");
  TreeSpec s;
  s.kind_ = TreeKind::geometric;
  s.q_ = q;
  s.b_ = b;
  s.radius_ = 1.0;
  return s;
}

TreeSpec TreeSpec::explicit_prefix(std::vector<double> t, std::vector<int> b) {
  if (t.size() < 2) bad("explicit tree needs at least two vertex distances");
  if (t.front() != 0.0) bad("explicit tree needs t_0 = 0");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) bad("vertex distances must be strictly increasing");
  if (b.empty() || b.front() != 1) bad("branching prefix must start with b_0 = 1");
  if (b.size() > t.size()) bad("branching prefix longer than distance prefix");
  for (std::size_t i = 1; i < b.size(); ++i)
    if (b[i] < 2) bad("branching numbers must be >= 2 for k >= 1");
  if (b.size() == 1) bad("explicit tree needs at least one branching number >= 2");
  TreeSpec s;
  s.kind_ = TreeKind::explicit_prefix;
  s.t_prefix_ = std::move(t);
  s.b_prefix_ = std::move(b);
  s.tail_edge_ = s.t_prefix_[s.t_prefix_.size() - 1] - s.t_prefix_[s.t_prefix_.size() - 2];
  s.tail_b_ = s.b_prefix_.back();
  s.radius_ = kInf;
  return s;
}

double TreeSpec::t(std::size_t k) const {
  switch (kind_) {
    case TreeKind::homogeneous:
      return static_cast<double>(k);
    case TreeKind::geometric:
      return 1.0 - std::pow(q_, static_cast<double>(k));
    case TreeKind::explicit_prefix:
      if (k < t_prefix_.size()) return t_prefix_[k];
      return t_prefix_.back() +
             static_cast<double>(k - (t_prefix_.size() - 1)) * tail_edge_;
  }
  return 0.0;
}

int TreeSpec::b(std::size_t k) const {
  if (k == 0) return 1;
  switch (kind_) {
    case TreeKind::homogeneous:
    case TreeKind::geometric:
      return b_;
    case TreeKind::explicit_prefix:
      if (k < b_prefix_.size()) return b_prefix_[k];
      return tail_b_;
  }
  return 1;
}

double TreeSpec::total_length() const {
  switch (kind_) {
    case TreeKind::homogeneous:
      return kInf;  // summands b^k diverge
    case TreeKind::geometric: {
      // |Gamma| = (1-q) sum (bq)^k, finite iff bq < 1.  q carries one
      // rounding, so the critical family q = 1/b can land an ulp off 1 in
      // either direction; classify with a matching guard band.
      const double bq = static_cast<double>(b_) * q_;
      return (bq < 1.0 - 32.0 * std::numeric_limits<double>::epsilon())
                 ? (1.0 - q_) / (1.0 - bq)
                 : kInf;
    }
    case TreeKind::explicit_prefix:
      break;
  }
  // No closed form: partial sums with the divergence rule (cap at 1e12, or
  // per-generation increments non-decreasing over 64 consecutive generations).
  double sum = 0.0;
  double prev_inc = -1.0;
  int nondecreasing_run = 0;
  double weight = 1.0;
  for (std::size_t k = 0;; ++k) {
    const double inc = weight * edge_length(k);
    sum += inc;
    if (sum > 1e12) return kInf;
    if (inc >= prev_inc) {
      if (++nondecreasing_run >= 64) return kInf;
    } else {
      nondecreasing_run = 0;
    }
    prev_inc = inc;
    weight *= static_cast<double>(b(k + 1));
  }
}

double TreeSpec::tilde_radius() const {
  if (!finite_radius()) return kInf;
  // geometric kind is the only finite-radius family: sum q^k = 1/(1-q)
  return 1.0 / (1.0 - q_);
}

std::uint64_t TreeSpec::branching_product(std::size_t k) const {
  std::uint64_t p = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::uint64_t f = static_cast<std::uint64_t>(b(i));
    if (p > std::numeric_limits<std::uint64_t>::max() / f)
      throw OverflowError("branching product b_1...b_k exceeds 64-bit range");
    p *= f;
  }
  return p;
}

double TreeSpec::branching_product_dbl(std::size_t k) const {
  double p = 1.0;
  for (std::size_t i = 1; i <= k; ++i) p *= static_cast<double>(b(i));
  return p;
}

std::int64_t TreeSpec::reduced_multiplicity(std::size_t k) const {
  if (k == 0) return 1;
  std::int64_t m = 1;
  for (std::size_t i = 1; i + 1 <= k; ++i) {
    if (__builtin_mul_overflow(m, static_cast<std::int64_t>(b(i)), &m))
      throw OverflowError("reduced multiplicity exceeds 64-bit range");
  }
  if (__builtin_mul_overflow(m, static_cast<std::int64_t>(b(k) - 1), &m))
    throw OverflowError("reduced multiplicity exceeds 64-bit range");
  return m;
}

std::uint64_t TreeSpec::branching_function(std::size_t k, double x) const {
  if (x < 0.0) throw OutOfRange("branching function argument must be >= 0");
  if (finite_radius() && x >= radius_)
    throw OutOfRange("branching function argument past the tree radius");
  if (x < t(k)) return 0;
  std::uint64_t g = 1;
  for (std::size_t n = k + 1; x > t(n); ++n) {
    const std::uint64_t f = static_cast<std::uint64_t>(b(n));
    if (g > std::numeric_limits<std::uint64_t>::max() / f)
      throw OverflowError("branching function exceeds 64-bit range");
    g *= f;
  }
  return g;
}

double TreeSpec::branching_function_dbl(std::size_t k, double x) const {
  if (x < 0.0) throw OutOfRange("branching function argument must be >= 0");
  if (finite_radius() && x >= radius_)
    throw OutOfRange("branching function argument past the tree radius");
  if (x < t(k)) return 0.0;
  double g = 1.0;
  for (std::size_t n = k + 1; x > t(n); ++n) g *= static_cast<double>(b(n));
  return g;
}

std::size_t TreeSpec::generation_count(double x) const {
  if (x < 0.0) throw OutOfRange("generation count argument must be >= 0");
  if (x <= 0.0) return 0;
  if (finite_radius() && x >= radius_)
    throw OutOfRange("generation count is infinite at or past the tree radius");
  switch (kind_) {
    case TreeKind::homogeneous: {
      // #{k : k < x}
      const double c = std::ceil(x);
      return static_cast<std::size_t>(c == x ? x : c);
    }
    case TreeKind::geometric:
    case TreeKind::explicit_prefix: {
      std::size_t n = 0;
      while (t(n) < x) ++n;
      return n;
    }
  }
  return 0;
}

std::size_t TreeSpec::last_generation_below(double x) const {
  const std::size_t n = generation_count(x);
  if (n == 0) throw OutOfRange("no generation below the given coordinate");
  return n - 1;
}

}  // namespace spectree
