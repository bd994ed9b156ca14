#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qmem/config.hpp"
#include "qmem/run.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quantum memory kernel, eigenmode and squeezing-transfer calculator", "qmem"};
  std::string config_path;
  std::optional<std::string> outdir;
  int grid_scale = 1;
  app.add_option("config", config_path, "key=value configuration file")->required();
  app.add_option("--outdir", outdir, "output directory (overrides outdir in the config)");
  app.add_option("--grid-scale", grid_scale, "multiply all grid counts by K")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string(qmem::version()));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? qmem::kExitOk : qmem::kExitUsage;
  }

  qmem::RunConfig config;
  try {
    config = qmem::load_config(config_path);
  } catch (const std::exception& e) {
    std::cerr << config_path << ": " << e.what() << "\n";
    return qmem::kExitUsage;
  }
  qmem::RunOptions options;
  options.outdir = outdir;
  options.grid_scale = grid_scale;
  const qmem::RunOutcome outcome = qmem::run(config, options, std::cerr);
  for (const auto& f : outcome.files) std::cout << f << "\n";
  return outcome.exit_code;
}
