// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Run times are desk-scale; the growing-potential criterion dominates.

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "spectree/assembly.hpp"
#include "spectree/asymptotics.hpp"
#include "spectree/oracle.hpp"
#include "spectree/quadrature.hpp"

using namespace spectree;

namespace {

constexpr double kPi = std::numbers::pi;
int failures = 0;

void report(int id, const std::string& name, bool ok, const std::string& detail) {
  std::printf("%s criterion %2d: %s (%s)\n", ok ? "PASS" : "FAIL", id,
              name.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof(buf), f, ap);
  va_end(ap);
  return buf;
}

std::vector<double> log_grid(double lo, double hi, std::size_t n) {
  std::vector<double> g;
  g.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    g.push_back(lo * std::pow(hi / lo, static_cast<double>(i) /
                                           static_cast<double>(n - 1)));
  return g;
}

// ---- 1: exact integer identities -----------------------------------------

void criterion_1() {
  bool ok = true;
  std::string detail = "all identities exact";

  // weight relation on 100-point coordinate grids
  const TreeSpec trees[] = {TreeSpec::geometric(0.5, 2), TreeSpec::homogeneous(2)};
  for (const auto& tree : trees) {
    const double span = tree.finite_radius() ? tree.radius() * 0.999 : 10.0;
    for (int i = 1; i <= 100 && ok; ++i) {
      const double t = span * i / 100.0;
      for (std::size_t k = 1; k <= 5; ++k) {
        if (t <= tree.t(k)) continue;
        if (tree.branching_function(k, t) * tree.branching_product(k) !=
            tree.branching_function(0, t)) {
          ok = false;
          detail = fmt("weight relation broken at t=%.6f k=%zu", t, k);
        }
      }
    }
  }

  // assembled count = sum of multiplicity-weighted component counts,
  // with every component recomputed independently
  const auto check_assembly = [&](const TreeSpec& tree, const AssemblyOptions& opt,
                                  const char* label) {
    for (const double lam : log_grid(2.0, 2.0e4, 100)) {
      const AssembledCount c = counting_function(tree, Potential::zero(), lam, opt);
      std::int64_t sum = 0;
      for (std::size_t k = 0; k < c.per_generation.size(); ++k) {
        const ReducedProblem pr = build_reduced_problem(
            tree, k, Potential::zero(), opt.right_bc_request, opt.cutoff,
            opt.truncation, opt.sampling);
        const std::int64_t nk = oscillation_count(pr, lam).count;
        sum += tree.reduced_multiplicity(k) * nk;
        if (c.per_generation[k] != tree.reduced_multiplicity(k) * nk) ok = false;
      }
      if (c.n != sum) {
        ok = false;
        detail = fmt("%s assembly mismatch at lambda=%.3f", label, lam);
      }
    }
  };
  check_assembly(TreeSpec::geometric(0.5, 2), {}, "geometric");
  AssemblyOptions cut;
  cut.cutoff = CutoffSpec{3.0, RightBC::dirichlet};
  check_assembly(TreeSpec::homogeneous(2), cut, "truncated homogeneous");

  report(1, "exact weight relation and integer assembly", ok, detail);
}

// ---- 2: analytic sanity ---------------------------------------------------

void criterion_2() {
  const ReducedProblem unit = build_reduced_problem(
      TreeSpec::homogeneous(2), 0, Potential::zero(), {},
      CutoffSpec{1.0, RightBC::dirichlet});
  const std::vector<double> ev =
      eigenvalues_below(unit, 20.5 * 20.5 * kPi * kPi, 20, 1e-12);
  bool ok = ev.size() == 20;
  double worst = 0.0;
  for (std::size_t n = 1; n <= ev.size(); ++n) {
    const double exact = kPi * kPi * static_cast<double>(n * n);
    worst = std::max(worst, std::abs(ev[n - 1] - exact) / exact);
  }
  ok = ok && worst < 1e-8;

  const Propagator half = Propagator::edge(kPi * kPi, 0.0, 1.0);
  const double dev =
      std::max({std::abs(half.a + 1.0), std::abs(half.b), std::abs(half.c),
                std::abs(half.d + 1.0)});
  ok = ok && dev < 1e-12;
  report(2, "unit interval spectrum and half-period propagator", ok,
         fmt("max eigenvalue rel err %.2e, |P+I| = %.2e", worst, dev));
}

// ---- 3: self-similarity ---------------------------------------------------

void criterion_3() {
  const TreeSpec tree = TreeSpec::geometric(0.5, 2);
  const ReducedProblem a0 = build_reduced_problem(tree, 0, Potential::zero());
  const ReducedProblem a1 = build_reduced_problem(tree, 1, Potential::zero());
  const std::vector<double> e0 = eigenvalues_below(a0, 1.0e5, 20, 1e-12);
  const std::vector<double> e1 = eigenvalues_below(a1, 4.0e5, 20, 1e-12);
  bool ok = e0.size() == 20 && e1.size() == 20;
  double worst = 0.0;
  for (std::size_t j = 0; ok && j < 20; ++j)
    worst = std::max(worst, std::abs(e1[j] - 4.0 * e0[j]) / (4.0 * e0[j]));
  ok = ok && worst < 1e-8;
  report(3, "self-similar eigenvalue scaling lambda_j(A_1) = 4 lambda_j(A_0)",
         ok, fmt("max rel dev %.2e over 20 eigenvalues", worst));
}

// ---- 4: oracle equivalence ------------------------------------------------

void criterion_4() {
  const double h = 1e-3;
  const AssemblyCheck chk =
      assembly_check(TreeSpec::homogeneous(2), Potential::zero(), 3, h, 10);
  bool ok = chk.values_match && chk.multiplicity_match && chk.pass;

  const AssemblyCheck bad = assembly_check(
      TreeSpec::homogeneous(2), Potential::zero(), 3, 5e-3, 10, 5.0,
      std::vector<std::int64_t>{1, 1, 3});
  ok = ok && !bad.pass && !bad.multiplicity_match;

  report(4, "assembled spectrum matches the mesh oracle, corruption detected",
         ok,
         fmt("max rel dev %.2e (cap 5h^2*lambda), clusters %s, corruption %s",
             chk.max_rel_dev, chk.multiplicity_match ? "match" : "differ",
             bad.pass ? "missed" : "flagged"));
}

// ---- 5: Weyl law ------------------------------------------------------------

void criterion_5() {
  const TreeSpec tree = TreeSpec::geometric(0.25, 2);
  const Potential V = Potential::zero();
  const double lam = 1e6;
  const double full =
      kPi * static_cast<double>(counting_function(tree, V, lam).n) / std::sqrt(lam);
  const double tilde =
      kPi * static_cast<double>(tilde_counting(tree, V, lam).n) / std::sqrt(lam);
  const double r0 =
      weyl_component_ratio(build_reduced_problem(tree, 0, V), lam);
  const double r1 =
      weyl_component_ratio(build_reduced_problem(tree, 1, V), lam);

  const bool ok = std::abs(full - 1.5) < 0.075 &&
                  std::abs(tilde - 4.0 / 3.0) < 0.05 * (4.0 / 3.0) &&
                  std::abs(r0 - 1.0) < 0.05 && std::abs(r1 - 0.25) < 0.05 * 0.25;
  report(5, "Weyl ratios at lambda = 1e6", ok,
         fmt("full %.4f (target 1.5), tilde %.4f (target %.4f), k=0 %.4f, "
             "k=1 %.4f",
             full, tilde, 4.0 / 3.0, r0, r1));
}

// ---- 6: band structure ------------------------------------------------------

void criterion_6() {
  const BandStructure bs = band_structure(2, 120.0);
  const double theta_exact = std::acos(2.0 * std::sqrt(2.0) / 3.0);
  bool ok = std::abs(bs.theta - theta_exact) < 1e-10;

  double worst = 0.0;
  for (std::size_t l = 0; l < 3; ++l) {
    worst = std::max(worst,
                     std::abs(bs.bands[l].lower - bs.bands_from_discriminant[l].lower));
    worst = std::max(worst,
                     std::abs(bs.bands[l].upper - bs.bands_from_discriminant[l].upper));
  }
  ok = ok && worst < 1e-10;

  for (int l = 1; l <= 3; ++l) {
    const double ev = (kPi * l) * (kPi * l);
    ok = ok && ev > bs.bands[static_cast<std::size_t>(l - 1)].upper &&
         ev < bs.bands[static_cast<std::size_t>(l)].lower;
  }
  report(6, "band structure for b = 2", ok,
         fmt("theta dev %.2e, edge recovery dev %.2e, (pi l)^2 in gaps",
             std::abs(bs.theta - theta_exact), worst));
}

// ---- 7: renewal regime ------------------------------------------------------

void criterion_7() {
  const double mu_lo = std::log(1e4);
  const double mu_hi = std::log(1e8);
  const RenewalProfile prof = renewal_profile(0.5, 3, mu_lo, mu_hi, 257);
  const double rel_resid = prof.periodicity_residual / prof.median_phi;
  bool ok = rel_resid <= 0.05;
  ok = ok && prof.max_phi <= 2.0 * prof.median_phi &&
       prof.min_phi >= 0.5 * prof.median_phi;

  const RenewalProfile shifted = renewal_profile(
      0.5, 3, mu_lo + 2.0 * prof.eta, mu_hi + 2.0 * prof.eta, 257);
  const double rel_shifted = shifted.periodicity_residual / shifted.median_phi;
  ok = ok && rel_shifted < rel_resid;

  report(7, "renewal profile for geometric(0.5, 3)", ok,
         fmt("residual/median %.4f (cap 0.05), bounded within [%.3f, %.3f] "
             "of median, shifted residual %.4f",
             rel_resid, prof.min_phi / prof.median_phi,
             prof.max_phi / prof.median_phi, rel_shifted));
}

// ---- 8: logarithmic regime --------------------------------------------------

void criterion_8() {
  const auto rows = log_weyl_check(2, {1e4, 1e8});
  const double target = rows[0].target;
  const double d4 = std::abs(rows[0].ratio - target);
  const double d8 = std::abs(rows[1].ratio - target);
  const bool ok = d8 < 0.2 * target && d8 < d4;
  report(8, "logarithmic Weyl ratio for bq = 1", ok,
         fmt("ratio(1e8) = %.5f vs target %.5f (dev %.1f%%), dev(1e4) %.1f%%",
             rows[1].ratio, target, 100.0 * d8 / target, 100.0 * d4 / target));
}

// ---- 9: positivity criterion ------------------------------------------------

void criterion_9() {
  const HardyReport hom = hardy_functional(TreeSpec::homogeneous(2), 64.0, 0);
  bool ok = hom.finite && hom.sup_estimate >= 2.2 && hom.sup_estimate <= 2.25;

  std::vector<double> t{0.0};
  std::vector<int> b{1};
  for (int k = 1; k <= 80; ++k) {
    t.push_back(std::pow(2.0, k) - 1.0);
    b.push_back(2);
  }
  const HardyReport path = hardy_functional(TreeSpec::explicit_prefix(t, b), 64.0, 0);
  ok = ok && !path.finite;

  report(9, "positivity functional: homogeneous finite, stretched tree divergent",
         ok,
         fmt("sup %.6f in [2.2, 2.25] verdict %s; pathological verdict %s",
             hom.sup_estimate, hom.verdict().c_str(), path.verdict().c_str()));
}

// ---- 10: growing potential ---------------------------------------------------

void criterion_10() {
  const double j4 = j_integral(Potential::power(1.0, 2.0), 0.0, 4.0);
  bool ok = std::abs(j4 - kPi) < 1e-9;

  std::vector<double> t;
  std::vector<int> b;
  for (int k = 0; k <= 220; ++k) {
    t.push_back(static_cast<double>(k) * k);
    b.push_back(k ? 2 : 1);
  }
  const TreeSpec tree = TreeSpec::explicit_prefix(t, b);
  const Potential V = Potential::power(1.0, 1.0);
  const GrowingReport r3 = growing_potential_check(tree, V, 1e3);
  const GrowingReport r4 = growing_potential_check(tree, V, 1e4);
  ok = ok && std::abs(r4.ratio - 1.0) < 0.15 &&
       std::abs(r4.ratio - 1.0) < std::abs(r3.ratio - 1.0);

  report(10, "semiclassical ratio for t_k = k^2, V = t", ok,
         fmt("J(4) err %.1e; ratio(1e4) = %.6f, ratio(1e3) = %.6f",
             std::abs(j4 - kPi), r4.ratio, r3.ratio));
}

// ---- 11: property suites ------------------------------------------------------

void criterion_11() {
  bool ok = true;
  std::string detail = "all properties hold";

  // determinant = 1 under 1e4 randomized draws
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> lam(-30.0, 1000.0);
  std::uniform_real_distribution<double> pot(-30.0, 30.0);
  std::uniform_real_distribution<double> len(0.01, 1.0);
  std::uniform_int_distribution<int> branch(2, 9);
  for (int i = 0; i < 10000 && ok; ++i) {
    const double l = lam(rng);
    const double v = pot(rng);
    double el = len(rng);
    if (v > l) el = std::min(el, 4.0 / std::sqrt(v - l));
    if (std::abs(Propagator::edge(l, v, el).det() - 1.0) >= 1e-12 ||
        std::abs(Propagator::interface(branch(rng)).det() - 1.0) >= 1e-12) {
      ok = false;
      detail = "determinant drift";
    }
  }

  // monotone counts, interlacing, Dirichlet <= Neumann
  const TreeSpec geo = TreeSpec::geometric(0.5, 2);
  const TreeSpec gamma2 = TreeSpec::homogeneous(2);
  std::uniform_real_distribution<double> lgrid(0.5, 5000.0);
  std::vector<double> probes;
  for (int i = 0; i < 40; ++i) probes.push_back(lgrid(rng));
  std::sort(probes.begin(), probes.end());

  std::int64_t prev = -1;
  for (const double l : probes) {
    const std::int64_t c =
        oscillation_count(build_reduced_problem(geo, 0, Potential::zero()), l).count;
    if (c < prev) {
      ok = false;
      detail = "count not monotone in lambda";
    }
    prev = c;
  }

  for (const double l : probes) {
    std::int64_t prior =
        oscillation_count(build_reduced_problem(geo, 0, Potential::zero()), l).count;
    for (std::size_t k = 1; k <= 4; ++k) {
      const std::int64_t c =
          oscillation_count(build_reduced_problem(geo, k, Potential::zero()), l)
              .count;
      if (c > prior) {
        ok = false;
        detail = "interlacing violated (geometric)";
      }
      prior = c;
    }
    std::int64_t prior2 = oscillation_count(
        build_reduced_problem(gamma2, 0, Potential::power(1.0, 2.0)), l).count;
    for (std::size_t k = 1; k <= 3; ++k) {
      const std::int64_t c = oscillation_count(
          build_reduced_problem(gamma2, k, Potential::power(1.0, 2.0)), l).count;
      if (c > prior2) {
        ok = false;
        detail = "interlacing violated (Schroedinger)";
      }
      prior2 = c;
    }
  }

  for (const auto& tree :
       {TreeSpec::geometric(0.5, 2), TreeSpec::geometric(0.25, 2),
        TreeSpec::geometric(0.5, 3)}) {
    const ReducedProblem pr = build_reduced_problem(tree, 0, Potential::zero());
    for (int K = 2; K <= 12; K += 2) {
      for (const double l : probes) {
        const auto [d, n] = truncation_bracket(pr, l, K);
        if (d > n) {
          ok = false;
          detail = "Dirichlet cut count above Neumann";
        }
      }
    }
  }

  // s-transform identities to 1e-10 for k <= 8 on three tree kinds
  const TreeSpec kinds[] = {TreeSpec::homogeneous(2), TreeSpec::geometric(0.5, 2),
                            TreeSpec::explicit_prefix({0.0, 0.5, 2.0}, {1, 3, 2})};
  for (const auto& tree : kinds) {
    for (std::size_t k = 0; k <= 8; ++k) {
      const ReducedProblem pr =
          tree.finite_radius()
              ? build_reduced_problem(tree, k, Potential::zero())
              : build_reduced_problem(tree, k, Potential::zero(), {},
                                      CutoffSpec{tree.t(k + 12), RightBC::dirichlet});
      const STransformed st = s_transform(pr, 10);
      double lhs1 = 0.0, lhs2 = 0.0;
      for (std::size_t i = 0; i < st.W.size(); ++i) {
        lhs1 += st.W[i] * st.ds[i];
        lhs2 += std::sqrt(st.W[i]) * st.ds[i];
      }
      double rhs1 = 0.0, w = 1.0;
      for (std::size_t j = k; j < k + st.W.size(); ++j) {
        rhs1 += w * tree.edge_length(j);
        w *= static_cast<double>(tree.b(j + 1));
      }
      const double rhs2 = st.horizon_t - tree.t(k);
      if (std::abs(lhs1 - rhs1) > 1e-10 * std::max(1.0, std::abs(rhs1)) ||
          std::abs(lhs2 - rhs2) > 1e-10 * std::max(1.0, std::abs(rhs2))) {
        ok = false;
        detail = fmt("s-transform identity drift at k=%zu", k);
      }
    }
  }

  report(11, "property suites", ok, detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (failures == 0)
    std::printf("acceptance: all 11 criteria passed\n");
  else
    std::printf("acceptance: %d criterion(s) FAILED\n", failures);
  return failures;
}
