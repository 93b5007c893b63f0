#include <doctest.h>

#include <cmath>
#include <numbers>

#include "spectree/oracle.hpp"

using namespace spectree;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("single edge mesh reproduces the unit interval spectrum") {
  // K = 1 truncates the homogeneous tree to one unit edge, Dirichlet ends
  const TreeSpec tree = TreeSpec::homogeneous(2);
  const Potential V = Potential::zero();
  const OracleResult coarse = full_tree_eigenvalues(tree, V, 1, 1e-2, 3);
  const OracleResult fine = full_tree_eigenvalues(tree, V, 1, 5e-3, 3);
  for (std::size_t n = 1; n <= 3; ++n) {
    const double exact = kPi * kPi * static_cast<double>(n * n);
    const double ec = std::abs(coarse.eigenvalues[n - 1] - exact);
    const double ef = std::abs(fine.eigenvalues[n - 1] - exact);
    CHECK(ec / exact < 1e-3);
    // second order: halving h divides the error by about four
    CHECK(ec / ef > 3.0);
    CHECK(ec / ef < 5.0);
  }
}

TEST_CASE("Richardson guard flags a coarse mesh") {
  const TreeSpec tree = TreeSpec::homogeneous(2);
  CHECK_THROWS_AS(
      full_tree_eigenvalues(tree, Potential::zero(), 1, 5e-2, 5, 1e-12),
      MeshTooCoarse);
  // attainable accuracy passes
  CHECK_NOTHROW(full_tree_eigenvalues(tree, Potential::zero(), 1, 1e-2, 5, 1e-2));
}

TEST_CASE("truncated homogeneous tree carries pi^2 with multiplicity >= 2") {
  const OracleResult res =
      full_tree_eigenvalues(TreeSpec::homogeneous(2), Potential::zero(), 3, 2e-3, 10);
  std::size_t mult = 0;
  for (const double lam : res.eigenvalues)
    if (std::abs(lam - kPi * kPi) < 1e-2) ++mult;
  CHECK(mult >= 2);
}

TEST_CASE("kirchhoff flux imbalance stays at the discretization level") {
  const OracleResult res =
      full_tree_eigenvalues(TreeSpec::homogeneous(2), Potential::zero(), 3, 5e-3, 10);
  CHECK(res.max_kirchhoff_residual < 10.0 * res.h * res.h);
}

TEST_CASE("assembly check against the oracle, homogeneous tree") {
  const AssemblyCheck chk =
      assembly_check(TreeSpec::homogeneous(2), Potential::zero(), 3, 5e-3, 10);
  CHECK(chk.values_match);
  CHECK(chk.multiplicity_match);
  CHECK(chk.pass);
  CHECK(chk.max_rel_dev < 5.0 * 5e-3 * 5e-3 * chk.oracle.back());
}

TEST_CASE("assembly check against the oracle, geometric tree") {
  const AssemblyCheck chk =
      assembly_check(TreeSpec::geometric(0.5, 2), Potential::zero(), 4, 1e-3, 8);
  CHECK(chk.pass);
}

TEST_CASE("corrupted multiplicity is detected") {
  // m_2 = 2 for the homogeneous tree; forcing 3 must break the multiset
  const AssemblyCheck chk = assembly_check(
      TreeSpec::homogeneous(2), Potential::zero(), 3, 5e-3, 10, 5.0,
      std::vector<std::int64_t>{1, 1, 3});
  CHECK(!chk.pass);
  CHECK(!chk.multiplicity_match);
}

TEST_CASE("oracle with a potential") {
  // unit interval with V = t^2: ground state rises above pi^2
  const OracleResult res = full_tree_eigenvalues(
      TreeSpec::homogeneous(2), Potential::power(1.0, 2.0), 1, 2e-3, 2);
  CHECK(res.eigenvalues[0] > kPi * kPi);
  CHECK(res.eigenvalues[0] < kPi * kPi + 1.0);  // perturbation is below sup V = 1
}

TEST_CASE("oracle rejects bad meshes") {
  CHECK_THROWS_AS(
      full_tree_eigenvalues(TreeSpec::homogeneous(2), Potential::zero(), 0, 1e-2, 3),
      ValidationError);
  CHECK_THROWS_AS(
      full_tree_eigenvalues(TreeSpec::homogeneous(2), Potential::zero(), 1, -1.0, 3),
      ValidationError);
  // one unknown cannot yield ten eigenvalues
  CHECK_THROWS_AS(
      full_tree_eigenvalues(TreeSpec::homogeneous(2), Potential::zero(), 1, 0.6, 10),
      ValidationError);
}
