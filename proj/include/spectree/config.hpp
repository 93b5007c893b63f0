#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spectree/assembly.hpp"
#include "spectree/potential.hpp"
#include "spectree/reduced.hpp"
#include "spectree/tree.hpp"

namespace spectree {

/// Validated run configuration: tree and potential descriptions, solver
/// knobs, and the per-command parameter blocks.
struct RunConfig {
  // [tree]
  std::string tree_kind = "homogeneous";
  int tree_b = 2;
  double tree_q = 0.5;
  std::vector<double> t_prefix;
  std::vector<std::int64_t> b_prefix;

  // [potential]
  std::string potential_form = "zero";
  double potential_c = 1.0;
  double potential_gamma = 1.0;
  std::vector<double> knots_t;
  std::vector<double> knots_v;

  // [solver]
  double tolerance = 1e-10;
  int max_generation = 64;
  double phase_margin = 0.1;
  double max_phase_step = 0.5;
  std::string right_bc = "dirichlet";

  // [grid]
  double lambda_min = 1.0;
  double lambda_max = 100.0;
  int lambda_steps = 16;

  // [cutoff] (optional truncation of the tree itself)
  std::optional<double> cutoff_T;
  std::string cutoff_bc = "dirichlet";

  // [spectrum]
  int spectrum_k = 0;
  int spectrum_n = 10;

  // [oracle]
  int oracle_generations = 3;
  double oracle_mesh = 1e-2;
  int oracle_count = 10;

  // [bands]
  int bands_b = 2;
  double bands_lambda_max = 100.0;

  // [hardy]
  double hardy_horizon = 64.0;
  int hardy_grid = 256;

  // [renewal]
  double renewal_mu_min = 9.21034037197618;   // ln 1e4
  double renewal_mu_max = 18.4206807439524;   // ln 1e8
  int renewal_samples = 129;

  // [growing]
  double growing_lambda = 1e4;

  // [boundaryless]
  int boundaryless_degree = 3;

  TreeSpec tree() const;
  Potential potential() const;
  TruncationPolicy truncation() const;
  SamplingPolicy sampling_policy() const;
  AssemblyOptions assembly_options() const;
  std::vector<double> lambda_grid() const;  // log-spaced, strictly increasing
};

RunConfig parse_config(const std::string& toml_text);
RunConfig parse_config_file(const std::string& path);
std::string serialize(const RunConfig& config);

}  // namespace spectree
