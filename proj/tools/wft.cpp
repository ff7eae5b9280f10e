// Command-line front end: wft run|sweep|validate <scenario>
//
// Output goes to $WFT_OUTPUT_ROOT/<output.dir> (default root: ./wft_out), or to the
// directory given with --output-root.

#include "wft/driver.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

int main(int argc, char** argv) {
  CLI::App app{"Wave-front tracking for 1D balance laws"};
  app.require_subcommand(1);
  std::string scenario_path;
  std::string output_root;
  app.add_option("--output-root", output_root, "Output root (overrides WFT_OUTPUT_ROOT)");

  auto* run_cmd = app.add_subcommand("run", "Run a scenario and write logs and reports");
  auto* sweep_cmd = app.add_subcommand("sweep", "Run the refinement sweep of a scenario");
  auto* validate_cmd = app.add_subcommand("validate", "Check the structural assumptions only");
  for (auto* cmd : {run_cmd, sweep_cmd, validate_cmd})
    cmd->add_option("scenario", scenario_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (output_root.empty()) {
    const char* env = std::getenv("WFT_OUTPUT_ROOT");
    output_root = env && *env ? env : "wft_out";
  }

  wft::Scenario sc;
  try {
    sc = wft::load_scenario(scenario_path);
  } catch (const wft::Error& e) {
    std::cerr << scenario_path << ": " << e.what() << "\n";
    return 1;
  }

  const wft::Mode mode = run_cmd->parsed()     ? wft::Mode::Run
                         : sweep_cmd->parsed() ? wft::Mode::Sweep
                                               : wft::Mode::Validate;
  wft::RunOutcome out;
  try {
    out = wft::run_scenario(sc, output_root, mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  (out.exit_code == 0 ? std::cout : std::cerr) << out.message << "\n";
  for (const auto& f : out.files) std::cout << "  wrote " << f << "\n";
  return out.exit_code;
}
