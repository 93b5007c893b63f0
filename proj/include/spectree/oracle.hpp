#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectree/potential.hpp"
#include "spectree/tree.hpp"

namespace spectree {

/// Spectrum of the truncated tree computed by direct discretization:
/// the validation oracle for the orthogonal-sum assembly.
struct OracleResult {
  double h = 0.0;                      // requested mesh step
  int K = 0;                           // truncation generation (Dirichlet cut)
  std::size_t unknowns = 0;            // mesh size actually used
  std::vector<double> eigenvalues;     // sorted, repeated per multiplicity
  std::vector<std::size_t> clusters;   // multiplicity pattern of `eigenvalues`
  double max_kirchhoff_residual = 0.0; // over vertices and computed modes
};

/// Lowest n eigenvalues of -Delta + V on the tree truncated at generation K
/// (continuity and flux balance at interior vertices, Dirichlet at the root
/// and at the cut).  Piecewise-linear elements with lumped mass on a mesh of
/// step ~h per edge; eigenvalues located by Sylvester inertia bisection on
/// the tree-ordered factorization, which resolves multiplicities exactly.
/// When `requested_accuracy` is set, a Richardson h/2 comparison must
/// confirm it, otherwise MeshTooCoarse is thrown.
OracleResult full_tree_eigenvalues(const TreeSpec& tree, const Potential& potential,
                                   int K, double h, std::size_t n,
                                   std::optional<double> requested_accuracy = {});

/// Eigenvalue count of the discretized truncated tree below lambda
/// (negative inertia of A - lambda M); the direct-discretization
/// counterpart of the assembled counting function.
std::int64_t oracle_count(const TreeSpec& tree, const Potential& potential,
                          int K, double h, double lambda);

/// Comparison of the assembled spectrum (reduced problems cut at t_K with
/// multiplicities m_k) against the oracle.
struct AssemblyCheck {
  std::vector<double> assembled;   // first n, multiplicities expanded
  std::vector<double> oracle;      // first n from the discretized tree
  std::vector<double> rel_dev;     // |a - o| / o elementwise
  double max_rel_dev = 0.0;
  double tolerance_factor = 5.0;   // pass when rel_dev < factor * h^2 * lambda
  bool values_match = false;
  bool multiplicity_match = false;
  std::vector<std::size_t> assembled_clusters;
  std::vector<std::size_t> oracle_clusters;
  bool pass = false;

  std::string to_json(int K, double h) const;
};

/// `multiplicity_override`, when given, replaces m_k for the listed
/// generations -- the fault-injection hook used by the negative control.
AssemblyCheck assembly_check(
    const TreeSpec& tree, const Potential& potential, int K, double h,
    std::size_t n, double tolerance_factor = 5.0,
    const std::optional<std::vector<std::int64_t>>& multiplicity_override = {});

}  // namespace spectree
