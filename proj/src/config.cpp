#include "spectree/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spectree/csv.hpp"
#include "spectree/toml.hpp"

namespace spectree {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

const TomlValue* find(const TomlTable& t, const std::string& key) {
  const auto it = t.find(key);
  return it == t.end() ? nullptr : &it->second;
}

}  // namespace

RunConfig parse_config(const std::string& toml_text) {
  const TomlDocument doc = parse_toml(toml_text);
  RunConfig cfg;

  const auto tree_it = doc.find("tree");
  require(tree_it != doc.end(), "missing [tree] section");
  {
    const TomlTable& t = tree_it->second;
    const TomlValue* kind = find(t, "kind");
    require(kind != nullptr, "missing tree.kind");
    cfg.tree_kind = kind->as_string("tree.kind");
    require(cfg.tree_kind == "homogeneous" || cfg.tree_kind == "geometric" ||
                cfg.tree_kind == "explicit",
            "tree.kind must be homogeneous|geometric|explicit");
    if (const TomlValue* v = find(t, "b"))
      cfg.tree_b = static_cast<int>(v->as_int("tree.b"));
    if (const TomlValue* v = find(t, "q")) cfg.tree_q = v->as_double("tree.q");
    if (const TomlValue* v = find(t, "t_prefix"))
      cfg.t_prefix = v->as_double_array("tree.t_prefix");
    if (const TomlValue* v = find(t, "b_prefix"))
      cfg.b_prefix = v->as_int_array("tree.b_prefix");
    if (cfg.tree_kind != "explicit")
      require(cfg.tree_b >= 2, "tree.b must be >= 2");
    if (cfg.tree_kind == "geometric")
      require(cfg.tree_q > 0.0 && cfg.tree_q < 1.0, "tree.q must lie in (0,1)");
    if (cfg.tree_kind == "explicit")
      require(!cfg.t_prefix.empty() && !cfg.b_prefix.empty(),
              "explicit tree needs t_prefix and b_prefix");
  }

  if (const auto it = doc.find("potential"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "form")) {
      cfg.potential_form = v->as_string("potential.form");
      require(cfg.potential_form == "zero" || cfg.potential_form == "power" ||
                  cfg.potential_form == "table",
              "potential.form must be zero|power|table");
    }
    if (const TomlValue* v = find(t, "c"))
      cfg.potential_c = v->as_double("potential.c");
    if (const TomlValue* v = find(t, "gamma")) {
      cfg.potential_gamma = v->as_double("potential.gamma");
      require(cfg.potential_gamma > 0.0, "potential.gamma must be > 0");
    }
    if (const TomlValue* v = find(t, "knots_t"))
      cfg.knots_t = v->as_double_array("potential.knots_t");
    if (const TomlValue* v = find(t, "knots_v"))
      cfg.knots_v = v->as_double_array("potential.knots_v");
  }

  if (const auto it = doc.find("solver"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "tolerance")) {
      cfg.tolerance = v->as_double("solver.tolerance");
      require(cfg.tolerance > 0.0, "solver.tolerance must be positive");
    }
    if (const TomlValue* v = find(t, "max_generation")) {
      cfg.max_generation = static_cast<int>(v->as_int("solver.max_generation"));
      require(cfg.max_generation >= 2, "solver.max_generation must be >= 2");
    }
    if (const TomlValue* v = find(t, "phase_margin")) {
      cfg.phase_margin = v->as_double("solver.phase_margin");
      require(cfg.phase_margin > 0.0, "solver.phase_margin must be positive");
    }
    if (const TomlValue* v = find(t, "max_phase_step")) {
      cfg.max_phase_step = v->as_double("solver.max_phase_step");
      require(cfg.max_phase_step > 0.0 && cfg.max_phase_step < 3.0,
              "solver.max_phase_step must lie in (0,3)");
    }
    if (const TomlValue* v = find(t, "right_bc")) {
      cfg.right_bc = v->as_string("solver.right_bc");
      require(cfg.right_bc == "dirichlet" || cfg.right_bc == "neumann",
              "solver.right_bc must be dirichlet|neumann");
    }
  }

  if (const auto it = doc.find("grid"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "lambda_min"))
      cfg.lambda_min = v->as_double("grid.lambda_min");
    if (const TomlValue* v = find(t, "lambda_max"))
      cfg.lambda_max = v->as_double("grid.lambda_max");
    if (const TomlValue* v = find(t, "lambda_steps"))
      cfg.lambda_steps = static_cast<int>(v->as_int("grid.lambda_steps"));
    require(cfg.lambda_min > 0.0, "grid.lambda_min must be positive");
    require(cfg.lambda_max > cfg.lambda_min,
            "grid.lambda_max must exceed grid.lambda_min");
    require(cfg.lambda_steps >= 1, "grid.lambda_steps must be >= 1");
  }

  if (const auto it = doc.find("cutoff"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "T")) {
      cfg.cutoff_T = v->as_double("cutoff.T");
      require(*cfg.cutoff_T > 0.0, "cutoff.T must be positive");
    }
    if (const TomlValue* v = find(t, "bc")) {
      cfg.cutoff_bc = v->as_string("cutoff.bc");
      require(cfg.cutoff_bc == "dirichlet" || cfg.cutoff_bc == "neumann",
              "cutoff.bc must be dirichlet|neumann");
    }
  }

  if (const auto it = doc.find("spectrum"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "k"))
      cfg.spectrum_k = static_cast<int>(v->as_int("spectrum.k"));
    if (const TomlValue* v = find(t, "n"))
      cfg.spectrum_n = static_cast<int>(v->as_int("spectrum.n"));
    require(cfg.spectrum_k >= 0, "spectrum.k must be >= 0");
    require(cfg.spectrum_n >= 1, "spectrum.n must be >= 1");
  }

  if (const auto it = doc.find("oracle"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "generations"))
      cfg.oracle_generations = static_cast<int>(v->as_int("oracle.generations"));
    if (const TomlValue* v = find(t, "mesh"))
      cfg.oracle_mesh = v->as_double("oracle.mesh");
    if (const TomlValue* v = find(t, "count"))
      cfg.oracle_count = static_cast<int>(v->as_int("oracle.count"));
    require(cfg.oracle_generations >= 1, "oracle.generations must be >= 1");
    require(cfg.oracle_mesh > 0.0, "oracle.mesh must be positive");
    require(cfg.oracle_count >= 1, "oracle.count must be >= 1");
  }

  if (const auto it = doc.find("bands"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "b"))
      cfg.bands_b = static_cast<int>(v->as_int("bands.b"));
    if (const TomlValue* v = find(t, "lambda_max"))
      cfg.bands_lambda_max = v->as_double("bands.lambda_max");
    require(cfg.bands_b >= 2, "bands.b must be >= 2");
    require(cfg.bands_lambda_max > 0.0, "bands.lambda_max must be positive");
  }

  if (const auto it = doc.find("hardy"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "t_horizon"))
      cfg.hardy_horizon = v->as_double("hardy.t_horizon");
    if (const TomlValue* v = find(t, "grid"))
      cfg.hardy_grid = static_cast<int>(v->as_int("hardy.grid"));
    require(cfg.hardy_horizon > 0.0, "hardy.t_horizon must be positive");
    require(cfg.hardy_grid >= 2, "hardy.grid must be >= 2");
  }

  if (const auto it = doc.find("renewal"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "mu_min"))
      cfg.renewal_mu_min = v->as_double("renewal.mu_min");
    if (const TomlValue* v = find(t, "mu_max"))
      cfg.renewal_mu_max = v->as_double("renewal.mu_max");
    if (const TomlValue* v = find(t, "samples"))
      cfg.renewal_samples = static_cast<int>(v->as_int("renewal.samples"));
    require(cfg.renewal_mu_max > cfg.renewal_mu_min,
            "renewal.mu_max must exceed renewal.mu_min");
    require(cfg.renewal_samples >= 2, "renewal.samples must be >= 2");
  }

  if (const auto it = doc.find("growing"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "lambda"))
      cfg.growing_lambda = v->as_double("growing.lambda");
    require(cfg.growing_lambda > 0.0, "growing.lambda must be positive");
  }

  if (const auto it = doc.find("boundaryless"); it != doc.end()) {
    const TomlTable& t = it->second;
    if (const TomlValue* v = find(t, "degree"))
      cfg.boundaryless_degree = static_cast<int>(v->as_int("boundaryless.degree"));
    require(cfg.boundaryless_degree >= 2, "boundaryless.degree must be >= 2");
  }

  cfg.tree();       // surface InvalidSequence on bad prefixes now
  cfg.potential();  // surface bad potential parameters now
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

TreeSpec RunConfig::tree() const {
  if (tree_kind == "homogeneous") return TreeSpec::homogeneous(tree_b);
  if (tree_kind == "geometric") return TreeSpec::geometric(tree_q, tree_b);
  std::vector<int> bp;
  bp.reserve(b_prefix.size());
  for (const auto b : b_prefix) bp.push_back(static_cast<int>(b));
  return TreeSpec::explicit_prefix(t_prefix, bp);
}

Potential RunConfig::potential() const {
  if (potential_form == "zero") return Potential::zero();
  if (potential_form == "power")
    return Potential::power(potential_c, potential_gamma);
  return Potential::table(knots_t, knots_v);
}

TruncationPolicy RunConfig::truncation() const {
  return {max_generation, phase_margin};
}

SamplingPolicy RunConfig::sampling_policy() const {
  SamplingPolicy s;
  s.max_phase_step = max_phase_step;
  return s;
}

AssemblyOptions RunConfig::assembly_options() const {
  AssemblyOptions opt;
  opt.truncation = truncation();
  opt.sampling = sampling_policy();
  if (right_bc == "neumann") opt.right_bc_request = RightBC::neumann;
  if (cutoff_T)
    opt.cutoff = CutoffSpec{*cutoff_T, cutoff_bc == "neumann"
                                           ? RightBC::neumann
                                           : RightBC::dirichlet};
  return opt;
}

std::vector<double> RunConfig::lambda_grid() const {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(lambda_steps) + 1);
  const double lmin = std::log(lambda_min);
  const double lmax = std::log(lambda_max);
  for (int i = 0; i <= lambda_steps; ++i) {
    const double f = static_cast<double>(i) / static_cast<double>(lambda_steps);
    grid.push_back(std::exp(lmin + f * (lmax - lmin)));
  }
  grid.front() = lambda_min;
  grid.back() = lambda_max;
  return grid;
}

namespace {

void emit(std::string& out, const std::string& key, double v) {
  out += key + " = " + format_double(v) + "\n";
}
void emit(std::string& out, const std::string& key, int v) {
  out += key + " = " + std::to_string(v) + "\n";
}
void emit(std::string& out, const std::string& key, const std::string& v) {
  out += key + " = \"" + v + "\"\n";
}
void emit_array(std::string& out, const std::string& key,
                const std::vector<double>& v) {
  out += key + " = [";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  out += "]\n";
}
void emit_array(std::string& out, const std::string& key,
                const std::vector<std::int64_t>& v) {
  out += key + " = [";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(v[i]);
  }
  out += "]\n";
}

}  // namespace

std::string serialize(const RunConfig& c) {
  std::string out;
  out += "[tree]\n";
  emit(out, "kind", c.tree_kind);
  emit(out, "b", c.tree_b);
  emit(out, "q", c.tree_q);
  if (!c.t_prefix.empty()) emit_array(out, "t_prefix", c.t_prefix);
  if (!c.b_prefix.empty()) emit_array(out, "b_prefix", c.b_prefix);

  out += "\n[potential]\n";
  emit(out, "form", c.potential_form);
  emit(out, "c", c.potential_c);
  emit(out, "gamma", c.potential_gamma);
  if (!c.knots_t.empty()) emit_array(out, "knots_t", c.knots_t);
  if (!c.knots_v.empty()) emit_array(out, "knots_v", c.knots_v);

  out += "\n[solver]\n";
  emit(out, "tolerance", c.tolerance);
  emit(out, "max_generation", c.max_generation);
  emit(out, "phase_margin", c.phase_margin);
  emit(out, "max_phase_step", c.max_phase_step);
  emit(out, "right_bc", c.right_bc);

  out += "\n[grid]\n";
  emit(out, "lambda_min", c.lambda_min);
  emit(out, "lambda_max", c.lambda_max);
  emit(out, "lambda_steps", c.lambda_steps);

  if (c.cutoff_T) {
    out += "\n[cutoff]\n";
    emit(out, "T", *c.cutoff_T);
    emit(out, "bc", c.cutoff_bc);
  }

  out += "\n[spectrum]\n";
  emit(out, "k", c.spectrum_k);
  emit(out, "n", c.spectrum_n);

  out += "\n[oracle]\n";
  emit(out, "generations", c.oracle_generations);
  emit(out, "mesh", c.oracle_mesh);
  emit(out, "count", c.oracle_count);

  out += "\n[bands]\n";
  emit(out, "b", c.bands_b);
  emit(out, "lambda_max", c.bands_lambda_max);

  out += "\n[hardy]\n";
  emit(out, "t_horizon", c.hardy_horizon);
  emit(out, "grid", c.hardy_grid);

  out += "\n[renewal]\n";
  emit(out, "mu_min", c.renewal_mu_min);
  emit(out, "mu_max", c.renewal_mu_max);
  emit(out, "samples", c.renewal_samples);

  out += "\n[growing]\n";
  emit(out, "lambda", c.growing_lambda);

  out += "\n[boundaryless]\n";
  emit(out, "degree", c.boundaryless_degree);
  return out;
}

}  // namespace spectree
