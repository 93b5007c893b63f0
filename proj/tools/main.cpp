#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "spectree/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"spectra of Laplace and Schroedinger operators on regular metric trees"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<double> lambda_min, lambda_max, mesh;
  std::optional<int> lambda_steps, generations;
  std::optional<std::string> bc;
  std::optional<int> bands_b;

  std::vector<CLI::App*> subs;
  for (const char* name : spectree::kCommands) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "run configuration (TOML)");
    sub->add_option("--out", out_dir, "artifact directory");
    sub->add_option("--lambda-min", lambda_min, "grid start (log-spaced)");
    sub->add_option("--lambda-max", lambda_max, "grid end");
    sub->add_option("--lambda-steps", lambda_steps, "grid step count");
    sub->add_option("--generations,-K", generations, "oracle truncation generation");
    sub->add_option("--mesh", mesh, "oracle mesh step h");
    sub->add_option("--bc", bc, "right boundary condition: dirichlet|neumann")
        ->check(CLI::IsMember({"dirichlet", "neumann"}));
    sub->add_option("--b", bands_b, "branching number (bands/logweyl)");
    subs.push_back(sub);
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    spectree::RunConfig cfg;
    if (!config_path.empty()) {
      cfg = spectree::parse_config_file(config_path);
    } else if (command != "bands") {
      std::cerr << "error: --config is required for '" << command << "'\n";
      return 1;
    }
    if (lambda_min) cfg.lambda_min = *lambda_min;
    if (lambda_max) cfg.lambda_max = *lambda_max;
    if (lambda_steps) cfg.lambda_steps = *lambda_steps;
    if (generations) cfg.oracle_generations = *generations;
    if (mesh) cfg.oracle_mesh = *mesh;
    if (bc) cfg.right_bc = *bc;
    if (bands_b) {
      cfg.bands_b = *bands_b;
      cfg.tree_b = *bands_b;
    }
    return spectree::run_command_exit_code(command, cfg, out_dir);
  } catch (const spectree::ParseError& e) {
    std::cerr << "ParseError: " << e.what() << "\n";
    return 1;
  } catch (const spectree::ValidationError& e) {
    std::cerr << "ValidationError: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
