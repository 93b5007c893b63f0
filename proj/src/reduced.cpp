#include "spectree/reduced.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

namespace spectree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// max(1, x) rounded up to a multiple of 2^(e-4) (overshoot < 1/16).
/// Sampling grids and barrier cuts are derived from this quantized value so
/// that they are piecewise constant in lambda; counts then stay exactly
/// monotone under bisection.
double dyadic_ceiling(double x) {
  const double v = std::max(1.0, std::abs(x));
  int e = 0;
  std::frexp(v, &e);
  const double g = std::ldexp(1.0, e - 4);
  return std::ceil(v / g) * g;
}

/// Half-density state (y, y') swept across constant-coefficient pieces and
/// vertex interfaces.  `crossings` counts the zeros of y in half-open pieces
/// (start, end]; zeros can only be crossed upward in phase, so the counter
/// never decreases.
struct SweepState {
  double y = 0.0;
  double yp = 1.0;  // Dirichlet start
  std::int64_t crossings = 0;
  bool end_on_zero = false;

  void renormalize() {
    const double m = std::max(std::abs(y), std::abs(yp));
    if (m > 1e100 || (m > 0.0 && m < 1e-100)) {
      y /= m;
      yp /= m;
    }
  }

  void jump(int b) {
    const double r = std::sqrt(static_cast<double>(b));
    y *= r;
    yp /= r;
  }

  // At most one sign change can occur on pieces handled here.
  void count_single(double y1) {
    if (y == 0.0) return;  // moving off an already-counted zero
    if (y1 == 0.0) {
      ++crossings;
      end_on_zero = true;
      return;
    }
    if ((y > 0.0) != (y1 > 0.0)) ++crossings;
  }

  void advance(double w2, double len) {
    end_on_zero = false;
    const double x2 = std::abs(w2) * len * len;
    if (x2 < 1e-10) {
      // shear limit; phase advance << pi, at most one zero
      const double a = 1.0 - 0.5 * w2 * len * len;
      const double bl = len * (1.0 - w2 * len * len / 6.0);
      const double y1 = a * y + bl * yp;
      const double yp1 = -w2 * bl * y + a * yp;
      count_single(y1);
      y = y1;
      yp = yp1;
    } else if (w2 > 0.0 && w2 * len * len < 9.0) {
      // short oscillatory piece (phase advance < pi): exact rotation in
      // Cartesian form, at most one zero
      const double w = std::sqrt(w2);
      const double c = std::cos(w * len);
      const double s = std::sin(w * len) / w;
      const double y1 = c * y + s * yp;
      const double yp1 = -w2 * s * y + c * yp;
      count_single(y1);
      y = y1;
      yp = yp1;
    } else if (w2 > 0.0) {
      // long oscillatory piece: the scaled Pruefer phase advances exactly by
      // omega * len, and zeros of y are the multiples of pi it crosses
      const double w = std::sqrt(w2);
      double th0 = std::atan2(w * y, yp);
      if (th0 < 0.0) th0 += kPi;  // flip (y,y') -> (-y,-y'), zeros unchanged
      if (th0 >= kPi) th0 -= kPi;
      const double r = std::hypot(w * y, yp);
      const double x = th0 + w * len;
      double n = std::floor(x / kPi);
      double th1 = x - n * kPi;
      if (th1 < 0.0) {
        th1 += kPi;
        n -= 1.0;
      } else if (th1 >= kPi) {
        th1 -= kPi;
        n += 1.0;
      }
      crossings += static_cast<std::int64_t>(n);
      y = (r / w) * std::sin(th1);
      yp = r * std::cos(th1);
      if (y == 0.0) end_on_zero = true;
    } else {
      // barrier piece: y = A e^{kp t} + B e^{-kp t}, at most one zero;
      // the growing factor is divided out to avoid overflow
      const double kp = std::sqrt(-w2);
      const double E = std::exp(-2.0 * kp * len);
      const double p = y + yp / kp;
      const double m = y - yp / kp;
      const double y1 = p + E * m;
      const double yp1 = kp * (p - E * m);
      count_single(y1);
      y = y1;
      yp = yp1;
    }
    renormalize();
  }

  std::int64_t dirichlet_count() const {
    return crossings - (end_on_zero ? 1 : 0);
  }
  std::int64_t neumann_count() const {
    const bool extra = !end_on_zero && y != 0.0 && yp != 0.0 &&
                       ((y > 0.0) != (yp > 0.0));
    return crossings + (extra ? 1 : 0);
  }
};

struct SweepOutcome {
  std::int64_t d = 0;
  std::int64_t n = 0;
  bool end_on_zero = false;
  bool end_neumann_zero = false;
};

/// Sub-step width for midpoint sampling of V on [x0, x1]: bounds the phase
/// advance per step by max_phase_step and the local phase error (which is
/// |V''| h^3 / 24 for midpoint sampling) by the policy target.  Derived
/// from the quantized lambda so it is piecewise constant in lambda.
double sampling_step(const Potential& V, const SamplingPolicy& pol,
                     double lambda_q, double x0, double x1) {
  const double len = x1 - x0;
  const double v0 = V(x0);
  const double v1 = V(x1);
  const double vm = V(0.5 * (x0 + x1));
  const double w2b =
      lambda_q + std::max({std::abs(v0), std::abs(v1), std::abs(vm)});
  double h = pol.max_phase_step / std::max(1.0, std::sqrt(w2b));
  const double vpp = std::abs(v0 - 2.0 * vm + v1) * 4.0 / (len * len);
  if (vpp > 0.0)
    h = std::min(h, std::cbrt(24.0 * pol.phase_error_target / vpp));
  return std::max(h, len * 2e-7);  // keep one edge below ~5e6 steps
}

/// Sweep the half-density system across (t_k, T).  The potential is sampled
/// piecewise-constant at sub-step midpoints; the zero potential uses one
/// exact piece per edge.
SweepOutcome run_sweep(const ReducedProblem& pr, double lambda, double T) {
  const TreeSpec& tree = pr.tree();
  const Potential& V = pr.potential();
  const std::size_t k = pr.generation();
  const double lambda_q = dyadic_ceiling(lambda);
  std::size_t steps = 0;

  SweepState st;
  for (std::size_t j = k;; ++j) {
    const double x0 = tree.t(j);
    const double x1 = std::min(tree.t(j + 1), T);
    const double len = x1 - x0;
    if (len > 0.0) {
      if (V.is_zero()) {
        st.advance(lambda, len);
        ++steps;
      } else {
        const double hs = sampling_step(V, pr.sampling(), lambda_q, x0, x1);
        const auto nsub =
            static_cast<std::size_t>(std::max(1.0, std::ceil(len / hs)));
        if (steps + nsub > pr.sampling().max_steps)
          throw BadTruncation("potential sampling budget exhausted");
        const double h = len / static_cast<double>(nsub);
        for (std::size_t i = 0; i < nsub; ++i) {
          const double v = V(x0 + (static_cast<double>(i) + 0.5) * h);
          st.advance(lambda - v, h);
        }
        steps += nsub;
      }
    }
    if (tree.t(j + 1) >= T) break;
    st.jump(tree.b(j + 1));
  }

  SweepOutcome out;
  out.d = st.dirichlet_count();
  out.n = st.neumann_count();
  out.end_on_zero = st.end_on_zero;
  out.end_neumann_zero = (st.yp == 0.0);
  return out;
}

int first_cut_generation(const ReducedProblem& pr, double lambda) {
  const TreeSpec& tree = pr.tree();
  const double R = tree.radius();
  const double s = std::sqrt(std::max(lambda, 1.0));
  int K = static_cast<int>(pr.generation()) + 1;
  while (K < pr.truncation().max_generation &&
         s * (R - tree.t(static_cast<std::size_t>(K))) >= pr.truncation().phase_margin)
    ++K;
  return K;
}

CountResult count_cutoff(const ReducedProblem& pr, double lambda) {
  const CutoffSpec& cut = *pr.cutoff();
  const SweepOutcome out = run_sweep(pr, lambda, cut.T);
  if (cut.bc == RightBC::dirichlet) {
    if (out.end_on_zero)
      throw EigenvalueAtThreshold("lambda lands on a Dirichlet eigenvalue; perturb it");
    return {out.d, 0};
  }
  if (out.end_neumann_zero)
    throw EigenvalueAtThreshold("lambda lands on a Neumann eigenvalue; perturb it");
  return {out.n, 0};
}

CountResult count_truncated(const ReducedProblem& pr, double lambda) {
  const TreeSpec& tree = pr.tree();
  const bool limit_circle = (pr.right_end() == RightEnd::truncated_at_R);
  std::int64_t prev_d = -1, prev_n = -1;
  bool have_prev = false;
  for (int K = first_cut_generation(pr, lambda);
       K <= pr.truncation().max_generation; K += 4) {
    const SweepOutcome out = run_sweep(pr, lambda, tree.t(static_cast<std::size_t>(K)));
    if (have_prev && out.d == prev_d && out.n == prev_n) {
      if (out.d == out.n) return {out.d, 0};
      if (limit_circle) {
        if (out.n - out.d > 1)
          throw EigenvalueAtThreshold(
              "truncation brackets stay apart: lambda is at an eigenvalue "
              "within resolution; perturb it");
        // Finite total length: the conditions at R are genuinely different
        // operators, and lambda sits between a Neumann and a Dirichlet
        // eigenvalue.  Report the resolved side with the observed bracket.
        const std::int64_t c = (pr.right_bc() == RightBC::neumann) ? out.n : out.d;
        return {c, static_cast<int>(out.n - out.d)};
      }
      // Infinite total length (u(R-) = 0 forced): the Neumann cut carries
      // exactly one spurious boundary mode whose eigenvalue decays with the
      // cut volume, so a stable gap of one certifies the Dirichlet side.
      if (out.n - out.d == 1) return {out.d, 0};
      throw EigenvalueAtThreshold(
          "truncation brackets stay apart: lambda is at an eigenvalue "
          "within resolution; perturb it");
    }
    prev_d = out.d;
    prev_n = out.n;
    have_prev = true;
  }
  throw BadTruncation("truncation brackets failed to settle within max_generation");
}

CountResult count_barrier(const ReducedProblem& pr, double lambda) {
  const Potential& V = pr.potential();
  const double left = pr.left();
  if (lambda <= V(left)) return {0, 0};  // below the bottom of the potential
  const double lambda_q = dyadic_ceiling(lambda);
  double margin = 10.0 * std::sqrt(lambda_q);
  for (int attempt = 0; attempt < 3; ++attempt) {
    const double T = V.inverse(lambda_q + margin);
    if (T <= left) return {0, 0};
    const SweepOutcome out = run_sweep(pr, lambda, T);
    if (out.d == out.n) return {out.d, 0};
    margin *= 4.0;  // push the cut deeper under the barrier
  }
  throw EigenvalueAtThreshold(
      "Dirichlet/Neumann cuts under the barrier disagree: lambda is at an "
      "eigenvalue within resolution; perturb it");
}

}  // namespace

Propagator Propagator::edge(double lambda, double v, double len) {
  const double w2 = lambda - v;
  Propagator p;
  if (w2 > 0.0) {
    const double w = std::sqrt(w2);
    const double c = std::cos(w * len);
    const double s = std::sin(w * len);
    p.a = c;
    p.b = s / w;
    p.c = -w * s;
    p.d = c;
  } else if (w2 < 0.0) {
    const double kp = std::sqrt(-w2);
    const double ch = std::cosh(kp * len);
    const double sh = std::sinh(kp * len);
    p.a = ch;
    p.b = sh / kp;
    p.c = kp * sh;
    p.d = ch;
  } else {
    p.a = 1.0;
    p.b = len;
    p.c = 0.0;
    p.d = 1.0;
  }
  return p;
}

Propagator Propagator::interface(int b) {
  const double r = std::sqrt(static_cast<double>(b));
  Propagator p;
  p.a = r;
  p.b = 0.0;
  p.c = 0.0;
  p.d = 1.0 / r;
  return p;
}

ReducedProblem build_reduced_problem(const TreeSpec& tree, std::size_t k,
                                     const Potential& potential,
                                     std::optional<RightBC> right_bc_request,
                                     std::optional<CutoffSpec> cutoff,
                                     const TruncationPolicy& truncation,
                                     const SamplingPolicy& sampling) {
  ReducedProblem pr;
  pr.tree_ = tree;
  pr.k_ = k;
  pr.potential_ = potential;
  pr.truncation_ = truncation;
  pr.sampling_ = sampling;

  if (cutoff) {
    if (!(cutoff->T > tree.t(k)))
      throw ValidationError("cutoff position must lie right of the interval start");
    // the vertex coordinates accumulate at R, so the cut must sit strictly
    // inside; the condition at R itself is handled by truncation brackets
    if (tree.finite_radius() && cutoff->T >= tree.radius())
      throw ValidationError("cutoff position must lie strictly inside the radius");
    pr.right_end_ = RightEnd::cutoff;
    pr.cutoff_ = cutoff;
    pr.right_bc_ = cutoff->bc;
    return pr;
  }

  if (tree.finite_radius()) {
    if (tree.total_length() == kInf) {
      // u(R-) = 0 is forced; any requested condition resolves to Dirichlet
      pr.right_end_ = RightEnd::forced_dirichlet_R;
      pr.right_bc_ = RightBC::dirichlet;
    } else {
      pr.right_end_ = RightEnd::truncated_at_R;
      pr.right_bc_ = right_bc_request.value_or(RightBC::dirichlet);
    }
    return pr;
  }

  if (potential.increasing_unbounded() && potential.has_inverse()) {
    pr.right_end_ = RightEnd::barrier;
    pr.right_bc_ = RightBC::dirichlet;
    return pr;
  }

  throw NotDiscrete(
      "infinite radius without an unbounded increasing potential or an "
      "explicit cutoff: the spectrum fills [0,inf) and counting is undefined");
}

CountResult oscillation_count(const ReducedProblem& problem, double lambda) {
  switch (problem.right_end()) {
    case RightEnd::cutoff:
      return count_cutoff(problem, lambda);
    case RightEnd::truncated_at_R:
    case RightEnd::forced_dirichlet_R:
      return count_truncated(problem, lambda);
    case RightEnd::barrier:
      return count_barrier(problem, lambda);
  }
  return {0, 0};
}

std::pair<std::int64_t, std::int64_t> truncation_bracket(
    const ReducedProblem& problem, double lambda, int K) {
  if (K < static_cast<int>(problem.generation()) + 1)
    throw OutOfRange("cut generation must exceed the problem generation");
  const SweepOutcome out =
      run_sweep(problem, lambda, problem.tree().t(static_cast<std::size_t>(K)));
  return {out.d, out.n};
}

double perturb_lambda(double lambda) {
  return lambda + 1e-9 * std::max(1.0, std::abs(lambda));
}

namespace detail {

std::vector<double> bisect_eigenvalues(
    const std::function<std::int64_t(double)>& count, double lo_seed,
    double lambda_max, std::size_t n_max, double rel_tol) {
  rel_tol = std::max(rel_tol, 1e-12);
  std::map<double, std::int64_t> cache;
  const std::int64_t total = count(lambda_max);
  cache.emplace(lambda_max, total);
  if (total <= 0 || n_max == 0) return {};
  const auto m = std::min<std::size_t>(static_cast<std::size_t>(total), n_max);

  double lo = lo_seed;
  while (count(lo) > 0) lo -= std::max(1.0, std::abs(lo));
  cache.emplace(lo, 0);

  std::vector<double> out;
  out.reserve(m);
  for (std::size_t j = 1; j <= m; ++j) {
    const auto want = static_cast<std::int64_t>(j);
    // bracket from the probe cache
    double a = lo, b = lambda_max;
    for (const auto& [lam, c] : cache) {
      if (c < want) a = std::max(a, lam);
      if (c >= want) {
        b = lam;
        break;
      }
    }
    while (b - a > rel_tol * std::max(1.0, std::abs(b))) {
      const double mid = a + 0.5 * (b - a);
      if (mid <= a || mid >= b) break;  // at floating resolution
      const std::int64_t c = count(mid);
      cache.emplace(mid, c);
      if (c >= want)
        b = mid;
      else
        a = mid;
    }
    out.push_back(a + 0.5 * (b - a));
  }
  return out;
}

}  // namespace detail

namespace {

/// Retries a counting call across threshold hits by nudging lambda upward.
std::int64_t robust_count(const std::function<CountResult(double)>& raw,
                          double lambda) {
  for (int tries = 0;; ++tries) {
    try {
      return raw(lambda).count;
    } catch (const EigenvalueAtThreshold&) {
      if (tries >= 8) throw;
      lambda = perturb_lambda(lambda);
    }
  }
}

}  // namespace

std::vector<double> eigenvalues_below(const ReducedProblem& problem,
                                      double lambda_max, std::size_t n_max,
                                      double rel_tol) {
  const auto raw = [&problem](double lam) { return oscillation_count(problem, lam); };
  const auto cnt = [&raw](double lam) { return robust_count(raw, lam); };
  double lo = problem.potential().lower_bound();
  if (!std::isfinite(lo)) lo = std::min(0.0, lambda_max) - 1.0;
  return detail::bisect_eigenvalues(cnt, lo, lambda_max, n_max, rel_tol);
}

STransformed s_transform(const ReducedProblem& problem, int horizon_generations) {
  if (horizon_generations < 0)
    horizon_generations = problem.truncation().max_generation;
  const TreeSpec& tree = problem.tree();
  const std::size_t k = problem.generation();
  const double Tcut = problem.cutoff() ? problem.cutoff()->T : kInf;

  STransformed st;
  st.left = tree.t(k);
  st.s_knots.push_back(0.0);
  double s = 0.0;
  double w = 1.0;
  double reached_t = st.left;
  bool cut_reached = false;
  for (std::size_t j = k; j < k + static_cast<std::size_t>(horizon_generations); ++j) {
    const double x1 = std::min(tree.t(j + 1), Tcut);
    const double len = x1 - tree.t(j);
    if (len > 0.0) {
      st.ds.push_back(len / w);
      st.W.push_back(w * w);
      s += len / w;
      st.s_knots.push_back(s);
    }
    reached_t = x1;
    if (tree.t(j + 1) >= Tcut) {
      cut_reached = true;
      break;
    }
    w *= static_cast<double>(tree.b(j + 1));
  }
  st.horizon_s = s;
  st.horizon_t = reached_t;

  double L = s;
  if (!cut_reached) {
    // w currently holds the weight on the first edge past the horizon
    std::size_t j = k + static_cast<std::size_t>(horizon_generations);
    for (std::size_t it = 0; it < 500000; ++it, ++j) {
      const double term = tree.edge_length(j) / w;
      L += term;
      if (term < 1e-18 * L) break;
      w *= static_cast<double>(tree.b(j + 1));
    }
  }
  st.L = L;
  return st;
}

std::vector<double> eigenvalues_via_s_transform(const ReducedProblem& problem,
                                                double lambda_max,
                                                std::size_t n_max,
                                                double rel_tol) {
  if (!problem.potential().is_zero())
    throw NotApplicable("the s-coordinate route is defined for the Laplacian");

  // counts of -y'' = lambda W(s) y on (0, L), Dirichlet at 0, with the
  // profile tabulated to a finite horizon and bracketed at its end
  const auto sweep_s = [&problem](double lambda, int horizon) {
    const STransformed st = s_transform(problem, horizon);
    if (problem.cutoff() && st.horizon_t < problem.cutoff()->T)
      throw BadTruncation("s-route horizon does not reach the cutoff");
    SweepState sw;
    for (std::size_t i = 0; i < st.ds.size(); ++i)
      sw.advance(lambda * st.W[i], st.ds[i]);
    SweepOutcome out;
    out.d = sw.dirichlet_count();
    out.n = sw.neumann_count();
    return out;
  };

  const bool cutoff = problem.right_end() == RightEnd::cutoff;
  const bool limit_circle = problem.right_end() == RightEnd::truncated_at_R;
  const auto raw = [&](double lambda) -> CountResult {
    if (cutoff) {
      const SweepOutcome out =
          sweep_s(lambda, problem.truncation().max_generation);
      return {problem.right_bc() == RightBC::neumann ? out.n : out.d, 0};
    }
    std::int64_t prev_d = -1, prev_n = -1;
    bool have_prev = false;
    const TreeSpec& tree = problem.tree();
    const double R = tree.radius();
    const double sq = std::sqrt(std::max(lambda, 1.0));
    int K0 = static_cast<int>(problem.generation()) + 1;
    if (std::isfinite(R)) {
      while (K0 < problem.truncation().max_generation &&
             sq * (R - tree.t(static_cast<std::size_t>(K0))) >=
                 problem.truncation().phase_margin)
        ++K0;
    }
    for (int K = K0; K <= problem.truncation().max_generation; K += 4) {
      const SweepOutcome out =
          sweep_s(lambda, K - static_cast<int>(problem.generation()));
      if (have_prev && out.d == prev_d && out.n == prev_n) {
        if (out.d == out.n) return {out.d, 0};
        if (limit_circle) {
          if (out.n - out.d > 1)
            throw EigenvalueAtThreshold("s-route brackets stay apart; perturb lambda");
          return {problem.right_bc() == RightBC::neumann ? out.n : out.d,
                  static_cast<int>(out.n - out.d)};
        }
        if (out.n - out.d == 1) return {out.d, 0};  // spurious Neumann cut mode
        throw EigenvalueAtThreshold("s-route brackets stay apart; perturb lambda");
      }
      prev_d = out.d;
      prev_n = out.n;
      have_prev = true;
    }
    throw BadTruncation("s-route brackets failed to settle within max_generation");
  };

  const auto cnt = [&raw](double lam) { return robust_count(raw, lam); };
  return detail::bisect_eigenvalues(cnt, 0.0, lambda_max, n_max, rel_tol);
}

}  // namespace spectree
