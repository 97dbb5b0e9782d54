#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fbosc/fbosc.hpp"

namespace fbosc::cli {

// Exit codes are a stable interface.
enum Exit : int { kOk = 0, kVerifyFailed = 1, kConfig = 2, kGrid = 3, kSimulation = 4, kFit = 5 };

int exit_code_for(ErrorCode code);

/// Identity of one invocation. The hash covers everything that determines
/// the outputs (tool version, command, parameters, seed, config hash) and
/// nothing that varies between identical runs.
class RunManifest {
 public:
  RunManifest(std::string command, std::string config_hash);

  void param(const std::string& key, const std::string& value);
  void param(const std::string& key, double value);
  void set_seed(std::uint64_t seed);
  void add_output(const std::string& path) { outputs_.push_back(path); }

  std::string hash() const;
  /// "# key value" lines every CSV starts with.
  std::vector<std::string> csv_header(const std::string& units, const std::string& columns) const;
  /// Writes <path>.manifest.json with outputs and wall time.
  void write(const std::string& path) const;

 private:
  std::string identity_json() const;

  std::string command_;
  std::string config_hash_;
  std::vector<std::pair<std::string, std::string>> params_;
  std::int64_t seed_ = -1;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point started_ = std::chrono::steady_clock::now();
};

std::string tool_version();
std::string utc_timestamp();
/// FBOSC_SEED, when set, replaces the seed given on the command line.
std::uint64_t resolve_seed(std::uint64_t flag_value);

struct BuiltinFixture {
  std::string name;
  OscillatorConfig config;
};
/// Reference configurations: vacuum, 12 dB squeezed, 12 dB EPR and pure
/// phase-sensitive at eta = 0.25, plus EPR at eta = 0.5 with rE = ln 0.5.
std::vector<BuiltinFixture> builtin_fixtures();

}  // namespace fbosc::cli
