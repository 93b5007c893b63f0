#include "spectree/assembly.hpp"

#include <atomic>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>

#include "spectree/csv.hpp"

namespace spectree {

namespace {

AssembledCount assemble(const TreeSpec& tree, const Potential& potential,
                        double lambda, const AssemblyOptions& options,
                        bool with_multiplicities) {
  AssembledCount total;
  for (std::size_t k = 0;; ++k) {
    if (k >= options.max_components)
      throw BadTruncation("generation sum did not terminate within max_components");
    std::optional<CutoffSpec> cut = options.cutoff;
    if (cut && !(cut->T > tree.t(k))) break;  // truncated tree exhausted
    const ReducedProblem pr =
        build_reduced_problem(tree, k, potential, options.right_bc_request, cut,
                              options.truncation, options.sampling);
    const CountResult r = oscillation_count(pr, lambda);
    if (r.count == 0) break;  // interlacing: all deeper components vanish too
    std::int64_t m = 1;
    if (with_multiplicities) m = tree.reduced_multiplicity(k);
    std::int64_t contrib = 0;
    if (__builtin_mul_overflow(m, r.count, &contrib))
      throw OverflowError("assembled count exceeds 64-bit range");
    if (__builtin_add_overflow(total.n, contrib, &total.n))
      throw OverflowError("assembled count exceeds 64-bit range");
    total.bracket_width += m * static_cast<std::int64_t>(r.bracket_width);
    total.per_generation.push_back(contrib);
  }
  return total;
}

}  // namespace

AssembledCount counting_function(const TreeSpec& tree, const Potential& potential,
                                 double lambda, const AssemblyOptions& options) {
  return assemble(tree, potential, lambda, options, true);
}

AssembledCount tilde_counting(const TreeSpec& tree, const Potential& potential,
                              double lambda, const AssemblyOptions& options) {
  return assemble(tree, potential, lambda, options, false);
}

namespace {

/// Static index sharding over a grid; the output slots are pre-sized, so the
/// result is identical for any thread count.
void parallel_grid(std::size_t n, int threads,
                   const std::function<void(std::size_t)>& work) {
  const int t = std::max(1, threads);
  if (t == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) work(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(t));
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < t; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          work(i);
        } catch (...) {
          const std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

CountingReport counting_report(const TreeSpec& tree, const Potential& potential,
                               const std::vector<double>& grid,
                               const AssemblyOptions& options,
                               bool per_generation) {
  CountingReport rep;
  rep.lambda = grid;
  rep.n.resize(grid.size());
  rep.n_tilde.resize(grid.size());
  rep.bracket_width.resize(grid.size());
  if (per_generation) rep.per_generation.resize(grid.size());

  parallel_grid(grid.size(), options.threads, [&](std::size_t i) {
    const AssembledCount full =
        counting_function(tree, potential, grid[i], options);
    const AssembledCount tilde = tilde_counting(tree, potential, grid[i], options);
    rep.n[i] = full.n;
    rep.n_tilde[i] = tilde.n;
    // the multiplicity-weighted width of N also bounds the width of N_tilde
    rep.bracket_width[i] = full.bracket_width;
    if (per_generation) rep.per_generation[i] = full.per_generation;
  });

  if (per_generation)
    for (const auto& row : rep.per_generation)
      rep.generation_columns = std::max(rep.generation_columns, row.size());
  return rep;
}

std::string CountingReport::to_csv(bool with_generations) const {
  CsvWriter csv;
  std::vector<std::string> header = {"lambda", "N", "N_tilde", "bracket_width"};
  if (with_generations)
    for (std::size_t j = 0; j < generation_columns; ++j)
      header.push_back("k" + std::to_string(j));
  csv.header(header);
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    csv.field(lambda[i]);
    csv.field(n[i]);
    csv.field(n_tilde[i]);
    csv.field(bracket_width[i]);
    if (with_generations) {
      const auto& row = per_generation.empty() ? std::vector<std::int64_t>{}
                                               : per_generation[i];
      for (std::size_t j = 0; j < generation_columns; ++j)
        csv.field(j < row.size() ? row[j] : 0);
    }
    csv.end_row();
  }
  return csv.str();
}

std::pair<std::int64_t, std::int64_t> boundaryless_counting(
    const TreeSpec& tree, int degree, const Potential& potential, double lambda,
    const AssemblyOptions& options) {
  if (degree < 2)
    throw ValidationError("boundaryless junction needs degree >= 2");
  const AssembledCount rooted = counting_function(tree, potential, lambda, options);
  std::int64_t lower = 0;
  if (__builtin_mul_overflow(static_cast<std::int64_t>(degree), rooted.n, &lower))
    throw OverflowError("boundaryless count exceeds 64-bit range");
  return {lower, lower + 1};
}

}  // namespace spectree
