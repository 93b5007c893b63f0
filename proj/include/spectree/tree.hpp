#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "spectree/errors.hpp"

namespace spectree {

enum class TreeKind { homogeneous, geometric, explicit_prefix };

/// A regular rooted metric tree, given by the vertex distances t_0 < t_1 < ...
/// and branching numbers b_0 = 1, b_k >= 2.  All accessors are pure and
/// O(1); instances are immutable and safe to share across threads.
///
/// The explicit kind stores a finite user prefix and continues it forever by
/// repeating the last edge length and the last branching number, so every
/// tree here has infinitely many generations.
class TreeSpec {
 public:
  static TreeSpec homogeneous(int b);
  static TreeSpec geometric(double q, int b);
  static TreeSpec explicit_prefix(std::vector<double> t, std::vector<int> b);

  TreeKind kind() const { return kind_; }

  /// Vertex distance t_k.
  double t(std::size_t k) const;
  /// Branching number b_k (b_0 = 1).
  int b(std::size_t k) const;
  /// Edge length t_{k+1} - t_k of a generation-k edge.
  double edge_length(std::size_t k) const { return t(k + 1) - t(k); }

  /// sup t_k; +infinity for trees of unbounded depth reach.
  double radius() const { return radius_; }
  bool finite_radius() const { return radius_ < kInf; }

  /// Total edge length |Gamma| = sum over edges; +infinity when divergent.
  double total_length() const;

  /// sum_k (R - t_k); always +infinity when the radius is infinite.
  double tilde_radius() const;

  /// Product b_1 ... b_k as an exact integer; throws OverflowError past
  /// the 64-bit range.
  std::uint64_t branching_product(std::size_t k) const;
  /// Same product in floating point (no overflow below ~1e308).
  double branching_product_dbl(std::size_t k) const;

  /// Multiplicity m_k of the generation-k reduced operator in the
  /// orthogonal decomposition: m_0 = 1, m_k = b_1...b_{k-1}(b_k - 1).
  std::int64_t reduced_multiplicity(std::size_t k) const;

  /// Branching function g_k(t) of a generation-k subtree: 0 below t_k,
  /// 1 on [t_k, t_{k+1}], then b_{k+1}...b_n on (t_n, t_{n+1}].
  /// Requires 0 <= t < radius for finite-radius trees.
  std::uint64_t branching_function(std::size_t k, double t) const;
  double branching_function_dbl(std::size_t k, double t) const;

  /// Psi(x) = #{k >= 0 : t_k < x}.  k = 0 is included, so Psi(x) >= 1 for
  /// every x > 0.  Throws OutOfRange when x exceeds a finite radius (the
  /// count would be infinite).
  std::size_t generation_count(double x) const;

  /// Index of the deepest generation with t_k < x (requires x > 0 and,
  /// for finite-radius trees, x <= radius).
  std::size_t last_generation_below(double x) const;

  // Constructor parameters, for configuration round trips.
  double q() const { return q_; }
  int b_param() const { return b_; }
  const std::vector<double>& t_prefix() const { return t_prefix_; }
  const std::vector<int>& b_prefix() const { return b_prefix_; }

 private:
  TreeSpec() = default;

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  TreeKind kind_ = TreeKind::homogeneous;
  int b_ = 2;        // homogeneous / geometric branching number
  double q_ = 0.0;   // geometric ratio
  std::vector<double> t_prefix_;
  std::vector<int> b_prefix_;
  double tail_edge_ = 0.0;  // explicit kind: repeated edge length
  int tail_b_ = 2;          // explicit kind: repeated branching number
  double radius_ = kInf;
};

}  // namespace spectree
