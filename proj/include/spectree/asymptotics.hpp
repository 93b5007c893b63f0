#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spectree/assembly.hpp"
#include "spectree/reduced.hpp"

namespace spectree {

/// pi * N(lambda; A_k) / sqrt(lambda): tends to R - t_k for finite-radius
/// trees.
double weyl_component_ratio(const ReducedProblem& problem, double lambda);

struct WeylRow {
  double lambda = 0.0;
  double ratio = 0.0;
  double target = 0.0;
};

enum class WeylMode { full, tilde };

/// pi * N / sqrt(lambda) (full) or pi * N_tilde / sqrt(lambda) (tilde) over
/// a lambda list, with the limit constant |Gamma| or R~ attached.  Throws
/// NotApplicable when the respective constant diverges.
std::vector<WeylRow> weyl_total_check(const TreeSpec& tree,
                                      const Potential& potential,
                                      const std::vector<double>& lambdas,
                                      WeylMode mode,
                                      const AssemblyOptions& options = {});

/// Spectrum of the Laplacian on the homogeneous tree with branching b:
/// bands [(pi(l-1)+theta)^2, (pi l-theta)^2] and point eigenvalues (pi l)^2,
/// with theta = arccos(2/(sqrt(b)+1/sqrt(b))).
struct BandStructure {
  int b = 2;
  double theta = 0.0;
  struct Band {
    double lower = 0.0;
    double upper = 0.0;
  };
  std::vector<Band> bands;                    // closed form
  std::vector<Band> bands_from_discriminant;  // recovered from |Delta| = 1
  std::vector<double> point_eigenvalues;      // (pi l)^2 below lambda_max
  std::vector<std::pair<double, double>> discriminant_samples;

  std::string bands_csv() const;  // header l,lower,upper
};

/// Discriminant Delta(lambda) = cos(sqrt(lambda)) * (sqrt(b)+1/sqrt(b))/2;
/// |Delta| <= 1 characterizes the bands.
double band_discriminant(int b, double lambda);

BandStructure band_structure(int b, double lambda_max,
                             std::size_t n_samples = 0);

/// Numerical supremum of B(t) = int_0^t g * int_t^inf 1/g for trees of
/// infinite radius: finite iff the Laplacian is positive definite.  The two
/// factors are accumulated in closed form per edge; the maximum over each
/// edge is exact (B is quadratic there).
struct HardyReport {
  double sup_estimate = 0.0;
  bool finite = false;
  int horizon_generations = 0;
  std::vector<std::pair<double, double>> samples;  // (t, B(t)) on the grid

  std::string verdict() const { return finite ? "finite" : "divergent"; }
};

HardyReport hardy_functional(const TreeSpec& tree, double t_horizon,
                             std::size_t grid_resolution = 256);

/// Scale-invariant profile Phi(mu) = lambda^{-beta/2} N(lambda) of the
/// self-similar counting function, mu = ln lambda, for bq > 1; converges to
/// a periodic function of period eta = ln(1/q^2).
struct RenewalProfile {
  double q = 0.0;
  int b = 0;
  double beta = 0.0;
  double eta = 0.0;
  std::vector<double> mu;
  std::vector<double> phi;
  std::array<double, 64> folded_median{};  // per-bin medians over mu mod eta
  double periodicity_residual = 0.0;       // max |Phi(mu) - Phi(mu+eta)|
  double median_phi = 0.0;
  double min_phi = 0.0;
  double max_phi = 0.0;

  std::string to_csv() const;  // header mu,phi,folded_bin,psi_estimate
};

RenewalProfile renewal_profile(double q, int b, double mu_lo, double mu_hi,
                               std::size_t samples,
                               const AssemblyOptions& options = {});

/// pi * N(lambda) / (sqrt(lambda) ln lambda) for the bq = 1 family
/// (geometric(1/b, b)); the limit constant is (1-q)/(2 ln b).
std::vector<WeylRow> log_weyl_check(int b, const std::vector<double>& lambdas,
                                    const AssemblyOptions& options = {});

/// Semiclassical check for growing potentials on infinite-radius trees:
/// J_sum = sum_k int_{t_k} (lambda - V)_+^{1/2}, compared against
/// pi * N_tilde(lambda).
struct GrowingReport {
  double lambda = 0.0;
  double j_sum = 0.0;
  std::int64_t n_tilde = 0;
  double ratio = 0.0;  // pi * N_tilde / J_sum

  // empirical doubling diagnostics for the admissibility conditions
  double q_doubling_sup = 0.0;        // sup Q(2l)/Q(l)
  double psi_q_doubling_sup = 0.0;    // sup Psi(Q(2l))/Psi(Q(l))
  std::vector<std::pair<double, double>> growth_margin;  // (t, Psi/(t sqrt V))
  bool growth_margin_decreasing = false;

  std::string to_json() const;
};

GrowingReport growing_potential_check(const TreeSpec& tree,
                                      const Potential& potential, double lambda,
                                      const AssemblyOptions& options = {});

}  // namespace spectree
