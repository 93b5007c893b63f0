#include "spectree/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "spectree/csv.hpp"
#include "spectree/quadrature.hpp"

namespace spectree {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double robust_count_value(const ReducedProblem& pr, double lambda) {
  for (int tries = 0;; ++tries) {
    try {
      return static_cast<double>(oscillation_count(pr, lambda).count);
    } catch (const EigenvalueAtThreshold&) {
      if (tries >= 8) throw;
      lambda = perturb_lambda(lambda);
    }
  }
}

std::int64_t robust_assembled(const TreeSpec& tree, const Potential& V,
                              double lambda, const AssemblyOptions& opt,
                              bool tilde) {
  for (int tries = 0;; ++tries) {
    try {
      return tilde ? tilde_counting(tree, V, lambda, opt).n
                   : counting_function(tree, V, lambda, opt).n;
    } catch (const EigenvalueAtThreshold&) {
      if (tries >= 8) throw;
      lambda = perturb_lambda(lambda);
    }
  }
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return (v.size() % 2 == 1) ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

double weyl_component_ratio(const ReducedProblem& problem, double lambda) {
  if (!problem.tree().finite_radius() &&
      problem.right_end() != RightEnd::cutoff &&
      problem.right_end() != RightEnd::barrier)
    throw NotDiscrete("component Weyl ratio needs a discrete problem");
  if (!(lambda > 0.0)) throw OutOfRange("component Weyl ratio needs lambda > 0");
  return kPi * robust_count_value(problem, lambda) / std::sqrt(lambda);
}

std::vector<WeylRow> weyl_total_check(const TreeSpec& tree,
                                      const Potential& potential,
                                      const std::vector<double>& lambdas,
                                      WeylMode mode,
                                      const AssemblyOptions& options) {
  double target = 0.0;
  if (mode == WeylMode::full) {
    target = tree.total_length();
    if (!std::isfinite(target))
      throw NotApplicable("total length diverges: the full Weyl law does not apply");
  } else {
    target = tree.tilde_radius();
    if (!std::isfinite(target))
      throw NotApplicable("tilde radius diverges: the reduced Weyl law does not apply");
  }
  std::vector<WeylRow> rows;
  rows.reserve(lambdas.size());
  for (const double lam : lambdas) {
    const auto n = static_cast<double>(
        robust_assembled(tree, potential, lam, options, mode == WeylMode::tilde));
    rows.push_back({lam, kPi * n / std::sqrt(lam), target});
  }
  return rows;
}

double band_discriminant(int b, double lambda) {
  const double rb = std::sqrt(static_cast<double>(b));
  const double amp = 0.5 * (rb + 1.0 / rb);
  const double x = lambda >= 0.0 ? std::sqrt(lambda) : 0.0;
  return amp * std::cos(x);
}

namespace {

/// Root of cos(x) = target on [a, b] where cos is strictly monotone.
double cos_root(double target, double a, double b) {
  double fa = std::cos(a) - target;
  for (int it = 0; it < 200; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = std::cos(m) - target;
    if ((fa <= 0.0) == (fm <= 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
    if (b - a < 1e-15 * std::max(1.0, b)) break;
  }
  return 0.5 * (a + b);
}

}  // namespace

BandStructure band_structure(int b, double lambda_max, std::size_t n_samples) {
  if (b < 2) throw ValidationError("band structure needs branching number b >= 2");
  BandStructure bs;
  bs.b = b;
  const double rb = std::sqrt(static_cast<double>(b));
  const double ct = 2.0 / (rb + 1.0 / rb);
  bs.theta = std::acos(ct);

  for (int l = 1;; ++l) {
    const double lo = kPi * (l - 1) + bs.theta;
    const double hi = kPi * l - bs.theta;
    if (lo * lo >= lambda_max) break;
    bs.bands.push_back({lo * lo, hi * hi});

    // the same edges recovered from |Delta(lambda)| = 1: on
    // [(l-1)pi, (l-1)pi + pi/2] and [l pi - pi/2, l pi] the cosine is
    // monotone and the crossing value is +-cos(theta)
    const double sign = (l % 2 == 1) ? 1.0 : -1.0;
    const double xlo = cos_root(sign * ct, kPi * (l - 1), kPi * (l - 1) + 0.5 * kPi);
    const double xhi = cos_root(-sign * ct, kPi * l - 0.5 * kPi, kPi * l);
    bs.bands_from_discriminant.push_back({xlo * xlo, xhi * xhi});

    const double ev = (kPi * l) * (kPi * l);
    if (ev < lambda_max) bs.point_eigenvalues.push_back(ev);
  }

  for (std::size_t i = 0; i < n_samples; ++i) {
    const double lam = lambda_max * static_cast<double>(i + 1) /
                       static_cast<double>(n_samples);
    bs.discriminant_samples.emplace_back(lam, band_discriminant(b, lam));
  }
  return bs;
}

std::string BandStructure::bands_csv() const {
  CsvWriter csv;
  csv.header({"l", "lower", "upper"});
  for (std::size_t i = 0; i < bands.size(); ++i) {
    csv.field(static_cast<std::int64_t>(i + 1));
    csv.field(bands[i].lower);
    csv.field(bands[i].upper);
    csv.end_row();
  }
  return csv.str();
}

HardyReport hardy_functional(const TreeSpec& tree, double t_horizon,
                             std::size_t grid_resolution) {
  if (tree.finite_radius())
    throw NotApplicable("the positivity criterion addresses infinite-radius trees");

  HardyReport rep;

  // tail integral int_t^inf ds/g from generation n onward, by per-edge
  // closed-form terms len_j / (b_1...b_j); divergence is declared when the
  // term ratio fails over 64 consecutive edges.  The supremum is always
  // scanned to at least 64 generations so the stabilization verdict has a
  // doubling window; t_horizon controls the sampled output grid.
  const std::size_t horizon =
      std::max<std::size_t>(tree.generation_count(t_horizon), 64);
  std::vector<double> len(horizon), weight(horizon);
  {
    double w = 1.0;
    for (std::size_t j = 0; j < horizon; ++j) {
      len[j] = tree.edge_length(j);
      weight[j] = w;
      w *= static_cast<double>(tree.b(j + 1));
    }
  }

  double tail_total = 0.0;
  {
    double w = 1.0;
    double term_prev = -1.0;
    int nondecr = 0;
    double partial = 0.0;
    std::size_t j = 0;
    for (; j < 2000000; ++j) {
      const double lj = j < horizon ? len[j] : tree.edge_length(j);
      const double term = lj / w;
      partial += term;
      if (term >= term_prev && term_prev >= 0.0) {
        if (++nondecr >= 64) {
          rep.finite = false;
          rep.sup_estimate = kInf;
          rep.horizon_generations = static_cast<int>(horizon);
          return rep;
        }
      } else {
        nondecr = 0;
      }
      term_prev = term;
      w *= static_cast<double>(tree.b(j + 1));
      if (j >= horizon && term < 1e-18 * partial) break;
    }
    tail_total = partial;
  }

  // B restricted to edge n is quadratic in the offset x:
  // (c_n + G_n x)(tau_n - x/G_n); its maximum is exact
  double cum = 0.0;        // int_0^{t_n} g
  double tail = tail_total;  // int_{t_n}^inf 1/g
  double sup = 0.0;
  double sup_half_horizon = 0.0;
  for (std::size_t n = 0; n < horizon; ++n) {
    const double G = weight[n];
    const double l = len[n];
    const double x_star = std::clamp(0.5 * (G * tail - cum / G), 0.0, l);
    for (const double x : {0.0, x_star, l}) {
      const double B = (cum + G * x) * (tail - x / G);
      sup = std::max(sup, B);
    }
    if (n == horizon / 2) sup_half_horizon = sup;
    cum += G * l;
    tail -= l / G;
  }
  rep.sup_estimate = sup;
  rep.horizon_generations = static_cast<int>(horizon);
  // convergent tail and a supremum that stabilized across the last horizon
  // doubling
  rep.finite = (sup - sup_half_horizon) <= 1e-6 * std::max(1.0, sup);

  if (grid_resolution > 0) {
    const double t_max = std::min(t_horizon, tree.t(horizon));
    double cum2 = 0.0, tail2 = tail_total;
    std::size_t gen = 0;
    for (std::size_t i = 0; i <= grid_resolution; ++i) {
      const double t = t_max * static_cast<double>(i) /
                       static_cast<double>(grid_resolution);
      while (gen + 1 < horizon && tree.t(gen + 1) <= t) {
        cum2 += weight[gen] * len[gen];
        tail2 -= len[gen] / weight[gen];
        ++gen;
      }
      const double x = t - tree.t(gen);
      const double B = (cum2 + weight[gen] * x) * (tail2 - x / weight[gen]);
      rep.samples.emplace_back(t, B);
    }
  }
  return rep;
}

RenewalProfile renewal_profile(double q, int b, double mu_lo, double mu_hi,
                               std::size_t samples,
                               const AssemblyOptions& options) {
  if (!(q > 0.0 && q < 1.0) || b < 2)
    throw ValidationError("renewal profile needs q in (0,1) and b >= 2");
  // guard band around the critical family q = 1/b (one rounding in q)
  if (static_cast<double>(b) * q <=
      1.0 + 32.0 * std::numeric_limits<double>::epsilon())
    throw NotApplicable("renewal regime needs bq > 1");
  if (!(mu_hi > mu_lo) || samples < 2)
    throw ValidationError("renewal profile needs a nonempty mu window");

  RenewalProfile prof;
  prof.q = q;
  prof.b = b;
  prof.beta = -std::log(static_cast<double>(b)) / std::log(q);
  prof.eta = -2.0 * std::log(q);

  const TreeSpec tree = TreeSpec::geometric(q, b);
  const Potential V = Potential::zero();
  const auto phi_at = [&](double mu) {
    const double lam = std::exp(mu);
    const auto n = static_cast<double>(
        robust_assembled(tree, V, lam, options, false));
    return std::pow(lam, -0.5 * prof.beta) * n;
  };

  prof.mu.reserve(samples);
  prof.phi.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const double mu = mu_lo + (mu_hi - mu_lo) * static_cast<double>(i) /
                                  static_cast<double>(samples - 1);
    prof.mu.push_back(mu);
    prof.phi.push_back(phi_at(mu));
  }

  prof.median_phi = median_of(prof.phi);
  prof.min_phi = *std::min_element(prof.phi.begin(), prof.phi.end());
  prof.max_phi = *std::max_element(prof.phi.begin(), prof.phi.end());

  // periodicity residual: compare Phi at mu and mu + eta while both stay
  // inside the window
  double resid = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double mu2 = prof.mu[i] + prof.eta;
    if (mu2 > mu_hi) break;
    resid = std::max(resid, std::abs(phi_at(mu2) - prof.phi[i]));
  }
  prof.periodicity_residual = resid;

  // fold over mu mod eta into 64 bins, per-bin medians
  std::array<std::vector<double>, 64> bins;
  for (std::size_t i = 0; i < samples; ++i) {
    const double frac = std::fmod(prof.mu[i], prof.eta) / prof.eta;
    auto bin = static_cast<std::size_t>(frac * 64.0);
    if (bin >= 64) bin = 63;
    bins[bin].push_back(prof.phi[i]);
  }
  for (std::size_t i = 0; i < 64; ++i)
    prof.folded_median[i] = median_of(bins[i]);

  return prof;
}

std::string RenewalProfile::to_csv() const {
  CsvWriter csv;
  csv.header({"mu", "phi", "folded_bin", "psi_estimate"});
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double frac = std::fmod(mu[i], eta) / eta;
    auto bin = static_cast<std::size_t>(frac * 64.0);
    if (bin >= 64) bin = 63;
    csv.field(mu[i]);
    csv.field(phi[i]);
    csv.field(static_cast<std::int64_t>(bin));
    csv.field(folded_median[bin]);
    csv.end_row();
  }
  return csv.str();
}

std::vector<WeylRow> log_weyl_check(int b, const std::vector<double>& lambdas,
                                    const AssemblyOptions& options) {
  if (b < 2) throw ValidationError("log-Weyl check needs b >= 2");
  const double q = 1.0 / static_cast<double>(b);
  const TreeSpec tree = TreeSpec::geometric(q, b);
  const Potential V = Potential::zero();
  const double target = (1.0 - q) / (2.0 * std::log(static_cast<double>(b)));
  std::vector<WeylRow> rows;
  rows.reserve(lambdas.size());
  for (const double lam : lambdas) {
    double ratio = 0.0;
    if (lam > 1.0) {
      const auto n =
          static_cast<double>(robust_assembled(tree, V, lam, options, false));
      ratio = kPi * n / (std::sqrt(lam) * std::log(lam));
    }
    rows.push_back({lam, ratio, target});
  }
  return rows;
}

GrowingReport growing_potential_check(const TreeSpec& tree,
                                      const Potential& potential, double lambda,
                                      const AssemblyOptions& options) {
  if (tree.finite_radius())
    throw NotApplicable("growing-potential asymptotics address infinite-radius trees");
  if (!potential.increasing_unbounded() || !potential.has_inverse())
    throw NotApplicable("growing-potential asymptotics need an increasing "
                        "unbounded potential with an inverse");

  GrowingReport rep;
  rep.lambda = lambda;

  const double Q = potential.inverse(lambda);
  double j_sum = 0.0;
  for (std::size_t k = 0; tree.t(k) < Q; ++k)
    j_sum += j_integral(potential, tree.t(k), lambda);
  rep.j_sum = j_sum;

  rep.n_tilde = robust_assembled(tree, potential, lambda, options, true);
  rep.ratio = j_sum > 0.0 ? kPi * static_cast<double>(rep.n_tilde) / j_sum : 0.0;

  // doubling diagnostics, sampled from lambda down to the potential floor
  double dsup = 0.0, psup = 0.0;
  for (double l = lambda; l > std::max(4.0, 4.0 * potential(0.0)); l *= 0.5) {
    const double q1 = potential.inverse(0.5 * l);
    const double q2 = potential.inverse(l);
    if (q1 > 0.0) dsup = std::max(dsup, q2 / q1);
    const auto p1 = static_cast<double>(tree.generation_count(q1));
    const auto p2 = static_cast<double>(tree.generation_count(q2));
    if (p1 > 0.0) psup = std::max(psup, p2 / p1);
  }
  rep.q_doubling_sup = dsup;
  rep.psi_q_doubling_sup = psup;

  bool decreasing = true;
  double prev = kInf;
  for (double t = std::max(1.0, potential.inverse(4.0)); t <= Q * 4.0; t *= 2.0) {
    const double v = potential(t);
    const double margin =
        static_cast<double>(tree.generation_count(t)) / (t * std::sqrt(v));
    rep.growth_margin.emplace_back(t, margin);
    if (margin > prev) decreasing = false;
    prev = margin;
  }
  rep.growth_margin_decreasing = decreasing;
  return rep;
}

std::string GrowingReport::to_json() const {
  nlohmann::json j;
  j["lambda"] = lambda;
  j["J_sum"] = j_sum;
  j["N_tilde"] = n_tilde;
  j["ratio"] = ratio;
  j["q_doubling_sup"] = q_doubling_sup;
  j["psi_q_doubling_sup"] = psi_q_doubling_sup;
  nlohmann::json gm = nlohmann::json::array();
  for (const auto& [t, m] : growth_margin) gm.push_back({{"t", t}, {"margin", m}});
  j["growth_margin"] = gm;
  j["growth_margin_decreasing"] = growth_margin_decreasing;
  return j.dump(2);
}

}  // namespace spectree
