#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

#include <CLI11.hpp>

#include "fuzzy_l1/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy-tuned L1 adaptive control experiments"};
  app.require_subcommand(1);

  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  const std::pair<const char*, const char*> commands[] = {
      {"simulate", "Run one closed-loop simulation and write its trajectory CSV"},
      {"tune", "Tune the fuzzy output sets with the particle swarm"},
      {"compare", "Run constant and fuzzy gain side by side and write a summary"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Run configuration (JSON)")->required();
    sub->add_option("--seed", seed, "RNG seed for tuning");
    sub->add_option("--out-dir", out_dir, "Output directory");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : fuzzy_l1::kExitConfigError;
  }

  std::optional<std::filesystem::path> dir;
  if (out_dir) dir = *out_dir;
  try {
    return fuzzy_l1::run_command(app.get_subcommands().front()->get_name(), config, seed, dir, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return fuzzy_l1::kExitConfigError;
  }
}
