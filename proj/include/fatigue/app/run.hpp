#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fatigue/app/config.hpp"

namespace fatigue::app {

inline constexpr std::string_view kCommands[] = {"simulate",   "sensitivity", "calibrate", "calibrate-det",
                                                 "sn-curve",   "life-dist",   "design"};

struct OutputFile {
  std::string name;
  std::string content;
};

struct RunOutcome {
  std::vector<OutputFile> files;
  std::string summary;  ///< short human-readable result for stdout
};

/// Run one command. Nothing touches the disk; paths in the config are only read.
RunOutcome execute(std::string_view command, const RunConfig& config);

std::string sha256_hex(std::string_view data);
std::string file_sha256(const std::filesystem::path& path);

/// JSON manifest: command, seed, effective config text and its hash, input and
/// output hashes, library versions.
std::string make_manifest(std::string_view command, const RunConfig& config, const std::vector<OutputFile>& files);

/// Write every file to a temporary name in `dir`, then rename them into place.
void commit(const std::filesystem::path& dir, const std::vector<OutputFile>& files);

/// Execute and commit outputs plus manifest.json. Returns the outcome.
RunOutcome run_and_write(std::string_view command, const RunConfig& config, const std::filesystem::path& out_dir);

struct ReplayReport {
  RunOutcome outcome;
  std::vector<std::string> mismatches;  ///< outputs whose hash differs from the manifest
};

/// Re-run a manifest's command with its stored configuration into `out_dir`.
/// Throws DataError when a recorded input no longer matches its hash.
ReplayReport replay(const std::filesystem::path& manifest, const std::filesystem::path& out_dir);

/// Exit code for an exception: 2 configuration, 3 data, 4 numerical.
int exit_code_for(const std::exception& e);

}  // namespace fatigue::app
