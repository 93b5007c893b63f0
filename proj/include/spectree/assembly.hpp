#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spectree/reduced.hpp"

namespace spectree {

/// Shared solver knobs for whole-tree assemblies.
struct AssemblyOptions {
  TruncationPolicy truncation;
  SamplingPolicy sampling;
  std::optional<RightBC> right_bc_request;  // finite total length only
  std::optional<CutoffSpec> cutoff;         // truncate the tree itself
  std::size_t max_components = 10000;       // hard cap on the generation sum
  int threads = 1;                          // grid sweeps only; results are
                                            // independent of this setting
};

/// One assembled count: N = sum_k m_k N_k with exact 64-bit arithmetic.
struct AssembledCount {
  std::int64_t n = 0;
  std::int64_t bracket_width = 0;              // sum of m_k * width_k
  std::vector<std::int64_t> per_generation;    // m_k * N_k, k = 0,1,...
};

/// Eigenvalue count of the whole-tree operator below lambda, assembled from
/// the reduced problems with multiplicities m_0 = 1, m_k = b_1...b_{k-1}(b_k-1).
/// The generation sum stops at the first vanishing component, which is safe
/// because the component counts interlace.
AssembledCount counting_function(const TreeSpec& tree, const Potential& potential,
                                 double lambda, const AssemblyOptions& options = {});

/// The multiplicity-free count: sum_k N_k (same stopping rule).
AssembledCount tilde_counting(const TreeSpec& tree, const Potential& potential,
                              double lambda, const AssemblyOptions& options = {});

/// Counts over a lambda grid, serializable as CSV
/// `lambda,N,N_tilde,bracket_width` plus optional per-generation columns.
struct CountingReport {
  std::vector<double> lambda;
  std::vector<std::int64_t> n;
  std::vector<std::int64_t> n_tilde;
  std::vector<std::int64_t> bracket_width;
  std::vector<std::vector<std::int64_t>> per_generation;  // row-aligned
  std::size_t generation_columns = 0;

  std::string to_csv(bool with_generations = false) const;
};

CountingReport counting_report(const TreeSpec& tree, const Potential& potential,
                               const std::vector<double>& grid,
                               const AssemblyOptions& options = {},
                               bool per_generation = false);

/// Counting bounds for the boundaryless tree built from d rooted copies:
/// inserting the Dirichlet condition at the junction is a codimension-one
/// restriction, so the count lies in [d*N_rooted, d*N_rooted + 1].
std::pair<std::int64_t, std::int64_t> boundaryless_counting(
    const TreeSpec& tree, int degree, const Potential& potential, double lambda,
    const AssemblyOptions& options = {});

}  // namespace spectree
