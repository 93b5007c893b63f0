#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "spectree/assembly.hpp"
#include "spectree/oracle.hpp"

using namespace spectree;

TEST_CASE("assembled count vanishes below the ground state") {
  const TreeSpec tree = TreeSpec::geometric(0.5, 2);
  const Potential V = Potential::zero();
  CHECK(counting_function(tree, V, 0.0).n == 0);
  CHECK(counting_function(tree, V, -3.0).n == 0);
  CHECK(tilde_counting(tree, V, 1.0).n == 0);
}

TEST_CASE("one eigenvalue between the first thresholds of A_0 and A_1") {
  const TreeSpec tree = TreeSpec::geometric(0.5, 2);
  const Potential V = Potential::zero();
  const ReducedProblem a0 = build_reduced_problem(tree, 0, V);
  const double l1 = eigenvalues_below(a0, 1e3, 1).at(0);
  // lambda_1(A_1) = 4 lambda_1(A_0): anything in between counts exactly one
  const double lam = 2.0 * l1;
  CHECK(counting_function(tree, V, lam).n == 1);
  CHECK(tilde_counting(tree, V, lam).n == 1);
}

TEST_CASE("assembled total equals the sum of per-generation contributions") {
  const TreeSpec tree = TreeSpec::geometric(0.5, 2);
  const Potential V = Potential::zero();
  for (double lam = 3.3; lam < 3.0e4; lam *= 2.9) {
    const AssembledCount c = counting_function(tree, V, lam);
    std::int64_t sum = 0;
    for (const auto v : c.per_generation) sum += v;
    CHECK(c.n == sum);
    // and each contribution is m_k times an independently recomputed count
    for (std::size_t k = 0; k < c.per_generation.size(); ++k) {
      const ReducedProblem pr = build_reduced_problem(tree, k, V);
      CHECK(c.per_generation[k] ==
            tree.reduced_multiplicity(k) * oscillation_count(pr, lam).count);
    }
  }
}

TEST_CASE("self-similar rewrite of the assembly is an integer identity") {
  // N(lambda) = N_0(lambda) + (1 - 1/b) sum b^k N_0(lambda q^{2k}) for the
  // geometric family, with the right-hand side taken from A_0 alone
  const double q = 0.5;
  for (const int b : {2, 3}) {
    const TreeSpec tree = TreeSpec::geometric(q, b);
    const Potential V = Potential::zero();
    const ReducedProblem a0 = build_reduced_problem(tree, 0, V);
    for (double lam = 2.7; lam < 1.0e5; lam *= 1.9) {
      const std::int64_t lhs = counting_function(tree, V, lam).n;
      std::int64_t rhs = oscillation_count(a0, lam).count;
      double scale = 0.25;  // q^2, exact binary
      for (std::size_t k = 1;; ++k, scale *= 0.25) {
        const std::int64_t nk = oscillation_count(a0, lam * scale).count;
        if (nk == 0) break;
        rhs += tree.reduced_multiplicity(k) * nk;
      }
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("tilde count never exceeds the full count; both non-decreasing") {
  const TreeSpec tree = TreeSpec::geometric(0.5, 3);
  const Potential V = Potential::zero();
  const std::vector<double> grid = {1.0, 5.0, 20.0, 80.0, 320.0, 1280.0, 5120.0};
  const CountingReport rep = counting_report(tree, V, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(rep.n_tilde[i] <= rep.n[i]);
    if (i) {
      CHECK(rep.n[i] >= rep.n[i - 1]);
      CHECK(rep.n_tilde[i] >= rep.n_tilde[i - 1]);
    }
  }
}

TEST_CASE("assembled count of the truncated tree equals the mesh count") {
  const TreeSpec tree = TreeSpec::homogeneous(2);
  const Potential V = Potential::zero();
  AssemblyOptions opt;
  opt.cutoff = CutoffSpec{3.0, RightBC::dirichlet};

  // probe in the middle of a spectral gap so the O(h^2) mesh shift cannot
  // move an eigenvalue across the probe
  const ReducedProblem a0 =
      build_reduced_problem(tree, 0, V, {}, CutoffSpec{3.0, RightBC::dirichlet});
  const std::vector<double> ev = eigenvalues_below(a0, 120.0, 30);
  for (const double around : {30.0, 50.0, 100.0}) {
    double lo = 0.0, hi = 1e9;
    for (const double e : ev) {
      if (e < around) lo = std::max(lo, e);
      if (e > around) hi = std::min(hi, e);
    }
    const double lam = 0.5 * (lo + hi);
    const std::int64_t assembled = counting_function(tree, V, lam, opt).n;
    CHECK(assembled == oracle_count(tree, V, 3, 2e-3, lam));
  }
  // lambda = 50 itself sits ~4.2 away from the spectrum, far beyond the
  // O(h^2 lambda^2) mesh shift
  CHECK(counting_function(tree, V, 50.0, opt).n == oracle_count(tree, V, 3, 2e-3, 50.0));
}

TEST_CASE("counting report CSV layout") {
  const TreeSpec tree = TreeSpec::geometric(0.5, 2);
  const CountingReport rep =
      counting_report(tree, Potential::zero(), {1.0, 10.0, 100.0}, {}, true);
  const std::string csv = rep.to_csv(true);
  CHECK(csv.rfind("lambda,N,N_tilde,bracket_width", 0) == 0);
  CHECK(csv.find("k0") != std::string::npos);
  const std::string plain = rep.to_csv(false);
  CHECK(plain.rfind("lambda,N,N_tilde,bracket_width\n", 0) == 0);
}

TEST_CASE("grid sweeps are independent of the thread count") {
  const TreeSpec tree = TreeSpec::geometric(0.5, 2);
  std::vector<double> grid;
  for (double lam = 1.0; lam < 2.0e4; lam *= 1.618) grid.push_back(lam);
  AssemblyOptions serial;
  AssemblyOptions parallel;
  parallel.threads = 4;
  const std::string a =
      counting_report(tree, Potential::zero(), grid, serial, true).to_csv(true);
  const std::string b =
      counting_report(tree, Potential::zero(), grid, parallel, true).to_csv(true);
  CHECK(a == b);
}

TEST_CASE("boundaryless counting brackets") {
  const TreeSpec tree = TreeSpec::geometric(0.5, 2);
  const Potential V = Potential::zero();
  const ReducedProblem a0 = build_reduced_problem(tree, 0, V);
  const double l1 = eigenvalues_below(a0, 1e3, 1).at(0);

  const auto [lo0, hi0] = boundaryless_counting(tree, 3, V, l1 / 2.0);
  CHECK(lo0 == 0);
  CHECK(hi0 == 1);

  const double lam = 2.0 * l1;  // rooted count is 1 here
  const auto [lo, hi] = boundaryless_counting(tree, 3, V, lam);
  CHECK(lo == 3);
  CHECK(hi == 4);

  // rooted count 5 -> bracket (15, 16) at degree 3
  AssemblyOptions opt;
  const std::vector<double> ev = eigenvalues_below(a0, 1e4, 12);
  double lam5 = 0.0;
  for (double probe = ev[0]; probe < 1e4; probe *= 1.03) {
    if (counting_function(tree, V, probe, opt).n == 5) {
      lam5 = probe;
      break;
    }
  }
  REQUIRE(lam5 > 0.0);
  const auto [lo5, hi5] = boundaryless_counting(tree, 3, V, lam5);
  CHECK(lo5 == 15);
  CHECK(hi5 == 16);

  CHECK_THROWS_AS(boundaryless_counting(tree, 1, V, lam), ValidationError);
  CHECK_THROWS_AS(
      boundaryless_counting(TreeSpec::homogeneous(2), 3, V, lam), NotDiscrete);
}

TEST_CASE("assembly propagates NotDiscrete") {
  CHECK_THROWS_AS(
      counting_function(TreeSpec::homogeneous(2), Potential::zero(), 10.0),
      NotDiscrete);
}
