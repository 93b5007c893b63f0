#include "spectree/commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "spectree/asymptotics.hpp"
#include "spectree/csv.hpp"
#include "spectree/oracle.hpp"

namespace spectree {

namespace {

int env_thread_cap() {
  if (const char* s = std::getenv("SPECTREE_THREADS")) {
    const int t = std::atoi(s);
    if (t >= 1 && t <= 256) return t;
  }
  return 1;
}

void write_file(const std::filesystem::path& dir, const std::string& name,
                const std::string& content) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / name, std::ios::binary);
  if (!out) throw Error("cannot write artifact '" + (dir / name).string() + "'");
  out << content;
}

void cmd_info(const RunConfig& cfg, const std::filesystem::path& out) {
  const TreeSpec tree = cfg.tree();
  nlohmann::json j;
  j["kind"] = cfg.tree_kind;
  j["b"] = cfg.tree_b;
  if (cfg.tree_kind == "geometric") j["q"] = cfg.tree_q;
  j["radius"] = tree.finite_radius() ? nlohmann::json(tree.radius())
                                     : nlohmann::json("inf");
  const double len = tree.total_length();
  j["total_length"] = std::isfinite(len) ? nlohmann::json(len) : nlohmann::json("inf");
  const double tr = tree.tilde_radius();
  j["tilde_radius"] = std::isfinite(tr) ? nlohmann::json(tr) : nlohmann::json("inf");
  nlohmann::json mults = nlohmann::json::array();
  for (std::size_t k = 0; k <= 8; ++k)
    mults.push_back(tree.reduced_multiplicity(k));
  j["multiplicities"] = mults;
  nlohmann::json ts = nlohmann::json::array();
  for (std::size_t k = 0; k <= 8; ++k) ts.push_back(tree.t(k));
  j["t"] = ts;
  write_file(out, "info.json", j.dump(2) + "\n");
}

void cmd_spectrum(const RunConfig& cfg, const std::filesystem::path& out) {
  const TreeSpec tree = cfg.tree();
  const AssemblyOptions opt = cfg.assembly_options();
  const ReducedProblem pr = build_reduced_problem(
      tree, static_cast<std::size_t>(cfg.spectrum_k), cfg.potential(),
      opt.right_bc_request, opt.cutoff, opt.truncation, opt.sampling);
  const std::vector<double> ev =
      eigenvalues_below(pr, cfg.lambda_max,
                        static_cast<std::size_t>(cfg.spectrum_n), cfg.tolerance);
  CsvWriter csv;
  csv.header({"j", "lambda"});
  for (std::size_t i = 0; i < ev.size(); ++i) {
    csv.field(static_cast<std::int64_t>(i + 1));
    csv.field(ev[i]);
    csv.end_row();
  }
  write_file(out, "spectrum.csv", csv.str());
}

void cmd_count(const RunConfig& cfg, const std::filesystem::path& out) {
  AssemblyOptions opt = cfg.assembly_options();
  opt.threads = env_thread_cap();
  const CountingReport rep = counting_report(cfg.tree(), cfg.potential(),
                                             cfg.lambda_grid(), opt, true);
  write_file(out, "count.csv", rep.to_csv(true));
}

void cmd_oracle_check(const RunConfig& cfg, const std::filesystem::path& out) {
  const AssemblyCheck chk = assembly_check(
      cfg.tree(), cfg.potential(), cfg.oracle_generations, cfg.oracle_mesh,
      static_cast<std::size_t>(cfg.oracle_count));
  write_file(out, "oracle_check.json",
             chk.to_json(cfg.oracle_generations, cfg.oracle_mesh) + "\n");
}

void cmd_weyl(const RunConfig& cfg, const std::filesystem::path& out) {
  const TreeSpec tree = cfg.tree();
  AssemblyOptions opt = cfg.assembly_options();
  opt.threads = env_thread_cap();
  const std::vector<double> grid = cfg.lambda_grid();
  const auto to_csv = [](const std::vector<WeylRow>& rows) {
    CsvWriter csv;
    csv.header({"lambda", "ratio", "target"});
    for (const auto& r : rows) {
      csv.field(r.lambda);
      csv.field(r.ratio);
      csv.field(r.target);
      csv.end_row();
    }
    return csv.str();
  };
  bool any = false;
  if (std::isfinite(tree.total_length())) {
    write_file(out, "weyl_full.csv",
               to_csv(weyl_total_check(tree, cfg.potential(), grid,
                                       WeylMode::full, opt)));
    any = true;
  }
  if (std::isfinite(tree.tilde_radius())) {
    write_file(out, "weyl_tilde.csv",
               to_csv(weyl_total_check(tree, cfg.potential(), grid,
                                       WeylMode::tilde, opt)));
    any = true;
  }
  if (!any)
    throw NotApplicable(
        "neither the total length nor the tilde radius is finite");
}

void cmd_bands(const RunConfig& cfg, const std::filesystem::path& out) {
  const BandStructure bs = band_structure(cfg.bands_b, cfg.bands_lambda_max, 512);
  write_file(out, "bands.csv", bs.bands_csv());
  CsvWriter pts;
  pts.header({"l", "lambda"});
  for (std::size_t i = 0; i < bs.point_eigenvalues.size(); ++i) {
    pts.field(static_cast<std::int64_t>(i + 1));
    pts.field(bs.point_eigenvalues[i]);
    pts.end_row();
  }
  write_file(out, "band_points.csv", pts.str());
  CsvWriter disc;
  disc.header({"lambda", "delta"});
  for (const auto& [lam, d] : bs.discriminant_samples) {
    disc.field(lam);
    disc.field(d);
    disc.end_row();
  }
  write_file(out, "discriminant.csv", disc.str());
}

void cmd_hardy(const RunConfig& cfg, const std::filesystem::path& out) {
  const HardyReport rep =
      hardy_functional(cfg.tree(), cfg.hardy_horizon,
                       static_cast<std::size_t>(cfg.hardy_grid));
  nlohmann::json j;
  j["sup_estimate"] = std::isfinite(rep.sup_estimate)
                          ? nlohmann::json(rep.sup_estimate)
                          : nlohmann::json("inf");
  j["verdict"] = rep.verdict();
  j["horizon_generations"] = rep.horizon_generations;
  write_file(out, "hardy.json", j.dump(2) + "\n");
  CsvWriter csv;
  csv.header({"t", "B"});
  for (const auto& [t, b] : rep.samples) {
    csv.field(t);
    csv.field(b);
    csv.end_row();
  }
  write_file(out, "hardy.csv", csv.str());
}

void cmd_renewal(const RunConfig& cfg, const std::filesystem::path& out) {
  if (cfg.tree_kind != "geometric")
    throw NotApplicable("the renewal profile addresses geometric trees");
  AssemblyOptions opt = cfg.assembly_options();
  opt.threads = env_thread_cap();
  const RenewalProfile prof = renewal_profile(
      cfg.tree_q, cfg.tree_b, cfg.renewal_mu_min, cfg.renewal_mu_max,
      static_cast<std::size_t>(cfg.renewal_samples), opt);
  write_file(out, "renewal.csv", prof.to_csv());
  nlohmann::json j;
  j["beta"] = prof.beta;
  j["eta"] = prof.eta;
  j["periodicity_residual"] = prof.periodicity_residual;
  j["median_phi"] = prof.median_phi;
  j["min_phi"] = prof.min_phi;
  j["max_phi"] = prof.max_phi;
  write_file(out, "renewal.json", j.dump(2) + "\n");
}

void cmd_logweyl(const RunConfig& cfg, const std::filesystem::path& out) {
  AssemblyOptions opt = cfg.assembly_options();
  opt.threads = env_thread_cap();
  const std::vector<WeylRow> rows =
      log_weyl_check(cfg.tree_b, cfg.lambda_grid(), opt);
  CsvWriter csv;
  csv.header({"lambda", "ratio", "target"});
  for (const auto& r : rows) {
    csv.field(r.lambda);
    csv.field(r.ratio);
    csv.field(r.target);
    csv.end_row();
  }
  write_file(out, "logweyl.csv", csv.str());
}

void cmd_growing(const RunConfig& cfg, const std::filesystem::path& out) {
  const GrowingReport rep = growing_potential_check(
      cfg.tree(), cfg.potential(), cfg.growing_lambda, cfg.assembly_options());
  CsvWriter csv;
  csv.header({"lambda", "J_sum", "N_tilde", "ratio"});
  csv.field(rep.lambda);
  csv.field(rep.j_sum);
  csv.field(rep.n_tilde);
  csv.field(rep.ratio);
  csv.end_row();
  write_file(out, "growing.csv", csv.str());
  write_file(out, "growing.json", rep.to_json() + "\n");
}

void cmd_boundaryless(const RunConfig& cfg, const std::filesystem::path& out) {
  const auto [lo, hi] =
      boundaryless_counting(cfg.tree(), cfg.boundaryless_degree, cfg.potential(),
                            cfg.lambda_max, cfg.assembly_options());
  nlohmann::json j;
  j["lambda"] = cfg.lambda_max;
  j["degree"] = cfg.boundaryless_degree;
  j["lower"] = lo;
  j["upper"] = hi;
  write_file(out, "boundaryless.json", j.dump(2) + "\n");
}

}  // namespace

void run_command(const std::string& command, const RunConfig& config,
                 const std::string& out_dir) {
  const std::filesystem::path out(out_dir);
  if (command == "info") return cmd_info(config, out);
  if (command == "spectrum") return cmd_spectrum(config, out);
  if (command == "count") return cmd_count(config, out);
  if (command == "oracle-check") return cmd_oracle_check(config, out);
  if (command == "weyl") return cmd_weyl(config, out);
  if (command == "bands") return cmd_bands(config, out);
  if (command == "hardy") return cmd_hardy(config, out);
  if (command == "renewal") return cmd_renewal(config, out);
  if (command == "logweyl") return cmd_logweyl(config, out);
  if (command == "growing") return cmd_growing(config, out);
  if (command == "boundaryless") return cmd_boundaryless(config, out);
  throw ValidationError("unknown command '" + command + "'");
}

int run_command_exit_code(const std::string& command, const RunConfig& config,
                          const std::string& out_dir) {
  try {
    run_command(command, config, out_dir);
    return 0;
  } catch (const NotApplicable& e) {
    std::cerr << "NotApplicable: " << e.what() << "\n";
    return 2;
  } catch (const NotDiscrete& e) {
    std::cerr << "NotDiscrete: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace spectree
