#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "spectree/potential.hpp"
#include "spectree/tree.hpp"

namespace spectree {

/// 2x2 propagator of the half-density state (y, y') across one constant
/// piece or one vertex interface; determinant 1 in exact arithmetic.
struct Propagator {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  /// Closed form on a constant-potential piece of length len:
  /// rotation for lambda > v, hyperbolic for lambda < v, shear for equal.
  static Propagator edge(double lambda, double v, double len);
  /// diag(sqrt(b), 1/sqrt(b)) at a vertex of branching number b.
  static Propagator interface(int b);

  double det() const { return a * d - b * c; }
  void apply(double& y, double& yp) const {
    const double y1 = a * y + b * yp;
    yp = c * y + d * yp;
    y = y1;
  }
};

enum class RightBC { dirichlet, neumann };

/// Explicit cut of the interval at coordinate T with a fixed condition;
/// makes the problem exactly finite (no truncation brackets).
struct CutoffSpec {
  double T = 0.0;
  RightBC bc = RightBC::dirichlet;
};

struct TruncationPolicy {
  int max_generation = 64;    // deepest admissible cut generation
  double phase_margin = 0.1;  // accept cut when sqrt(lambda)*(R - t_K) < margin
};

struct SamplingPolicy {
  double max_phase_step = 0.5;        // |omega| * h bound per sampled piece
  double phase_error_target = 1e-10;  // local midpoint-sampling phase error
  std::size_t max_steps = 400000000;  // safety budget for one sweep
};

/// How the right end of the interval is closed.
enum class RightEnd {
  cutoff,              // finite problem, user-specified cut
  truncated_at_R,      // finite radius, boundary condition at R approximated
                       // by cuts at t_K (Dirichlet/Neumann bracketing)
  forced_dirichlet_R,  // finite radius, infinite total length: u(R-) = 0 holds
                       // automatically and the truncation brackets close
  barrier              // infinite radius, growing potential: cut under the
                       // classically forbidden barrier
};

/// The weighted one-dimensional problem for the generation-k reduced
/// operator: interval (t_k, R), weight g_k with jumps b_{k+1}, b_{k+2}, ...
/// at the vertex coordinates, Dirichlet condition at the left end.
class ReducedProblem {
 public:
  const TreeSpec& tree() const { return tree_; }
  std::size_t generation() const { return k_; }
  const Potential& potential() const { return potential_; }
  RightEnd right_end() const { return right_end_; }
  RightBC right_bc() const { return right_bc_; }
  const std::optional<CutoffSpec>& cutoff() const { return cutoff_; }
  const TruncationPolicy& truncation() const { return truncation_; }
  const SamplingPolicy& sampling() const { return sampling_; }
  double left() const { return tree_.t(k_); }

 private:
  friend ReducedProblem build_reduced_problem(const TreeSpec&, std::size_t,
                                              const Potential&,
                                              std::optional<RightBC>,
                                              std::optional<CutoffSpec>,
                                              const TruncationPolicy&,
                                              const SamplingPolicy&);
  TreeSpec tree_ = TreeSpec::homogeneous(2);
  std::size_t k_ = 0;
  Potential potential_ = Potential::zero();
  RightEnd right_end_ = RightEnd::cutoff;
  RightBC right_bc_ = RightBC::dirichlet;
  std::optional<CutoffSpec> cutoff_;
  TruncationPolicy truncation_;
  SamplingPolicy sampling_;
};

/// Resolves the right end per the tree geometry: finite radius with
/// infinite total length forces u(R-) = 0; finite total length admits the
/// requested condition (Dirichlet by default); infinite radius needs either
/// an unbounded increasing potential or an explicit cutoff, otherwise the
/// spectrum is not discrete.
ReducedProblem build_reduced_problem(
    const TreeSpec& tree, std::size_t k, const Potential& potential,
    std::optional<RightBC> right_bc_request = {},
    std::optional<CutoffSpec> cutoff = {},
    const TruncationPolicy& truncation = {},
    const SamplingPolicy& sampling = {});

struct CountResult {
  std::int64_t count = 0;   // eigenvalues strictly below lambda
  int bracket_width = 0;    // 0 when the truncation brackets agree
};

/// Exact eigenvalue count below lambda by oscillation (Pruefer phase)
/// counting of the half-density system.  Throws EigenvalueAtThreshold when
/// lambda is numerically indistinguishable from an eigenvalue and
/// BadTruncation when the cut budget is exhausted.
CountResult oscillation_count(const ReducedProblem& problem, double lambda);

/// Dirichlet/Neumann counts for a cut at generation K (finite-radius trees)
/// -- the raw truncation bracket, exposed for diagnostics and tests.
std::pair<std::int64_t, std::int64_t> truncation_bracket(
    const ReducedProblem& problem, double lambda, int K);

/// All eigenvalues below lambda_max (at most n_max), each bracketed by
/// bisection on the counting function to the given relative width.
std::vector<double> eigenvalues_below(const ReducedProblem& problem,
                                      double lambda_max, std::size_t n_max,
                                      double rel_tol = 1e-10);

/// Image of the weighted problem under s = int dt / w: interval [0, L),
/// piecewise-constant profile W(s) = w^2(t(s)), knots at the images of the
/// vertex coordinates.  Stores the profile up to a finite horizon; L is the
/// converged full limit.
struct STransformed {
  double L = 0.0;                  // total transformed length (limit)
  double left = 0.0;               // t_k, for reference
  std::vector<double> s_knots;     // images s(t_n), starting at s(t_k) = 0
  std::vector<double> ds;          // piece lengths within the horizon
  std::vector<double> W;           // piece values W = w^2
  double horizon_t = 0.0;          // t-coordinate the profile reaches
  double horizon_s = 0.0;          // its image
};

/// Transform the weight of the problem; the profile is tabulated up to
/// `horizon_generations` past k (default: the truncation policy cap).
STransformed s_transform(const ReducedProblem& problem,
                         int horizon_generations = -1);

/// Eigenvalues of the transformed problem -y'' = lambda W(s) y on (0, L),
/// computed independently of the t-coordinate sweep (no interface jumps in
/// s).  Used as the second route of the spectral cross-check.
std::vector<double> eigenvalues_via_s_transform(const ReducedProblem& problem,
                                                double lambda_max,
                                                std::size_t n_max,
                                                double rel_tol = 1e-10);

/// lambda + 1e-9 * max(1, |lambda|): the caller-side nudge when counting
/// reports a threshold hit.
double perturb_lambda(double lambda);

namespace detail {

/// Locates the first n_max transition points of a monotone integer-valued
/// counting function by cached bisection.  Shared by the reduced solver and
/// the finite-difference oracle.
std::vector<double> bisect_eigenvalues(
    const std::function<std::int64_t(double)>& count, double lo_seed,
    double lambda_max, std::size_t n_max, double rel_tol);

}  // namespace detail

}  // namespace spectree
