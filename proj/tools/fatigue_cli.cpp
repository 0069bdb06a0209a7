#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <omp.h>

#include "fatigue/app/run.hpp"
#include "fatigue/errors.hpp"

using namespace fatigue;

namespace {

struct Flags {
  std::string config;
  std::string data;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string out = "results";
  std::string manifest;
};

int run_command(const std::string& command, const Flags& f) {
  app::RunConfig config = f.config.empty() ? app::parse_config_text("") : app::parse_config(f.config);
  if (f.seed) config.seed = *f.seed;
  if (!f.data.empty()) {
    if (!std::filesystem::exists(f.data)) throw ConfigError("--data: file not found: " + f.data);
    config.calibration.data = std::filesystem::absolute(f.data).lexically_normal().string();
  }
  const auto outcome = app::run_and_write(command, config, f.out);
  std::cout << command << ": " << outcome.summary << '\n';
  return 0;
}

int run_replay(const Flags& f) {
  const auto report = app::replay(f.manifest, f.out);
  std::cout << "replay: " << report.outcome.summary << '\n';
  if (!report.mismatches.empty()) {
    for (const auto& name : report.mismatches) std::cerr << "replay: output differs from manifest: " << name << '\n';
    return 4;
  }
  std::cout << "replay: outputs match the manifest\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App cli{"Fatigue life prediction under uncertainty"};
  cli.require_subcommand(1);
  Flags f;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", f.seed, "Random seed, overrides [run] seed");
    sub->add_option("--threads", f.threads, "Worker thread cap")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  };

  for (auto name : app::kCommands) {
    auto* sub = cli.add_subcommand(std::string(name));
    sub->add_option("--config", f.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--data", f.data, "Fatigue test dataset CSV");
    add_common(sub);
  }
  auto* rep = cli.add_subcommand("replay", "Re-run a recorded manifest");
  rep->add_option("--manifest", f.manifest, "manifest.json of an earlier run")->required()->check(CLI::ExistingFile);
  add_common(rep);

  try {
    cli.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = cli.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (f.threads > 0) omp_set_num_threads(f.threads);

  const std::string command = cli.get_subcommands().front()->get_name();
  try {
    return command == "replay" ? run_replay(f) : run_command(command, f);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return app::exit_code_for(e);
  }
}
