#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace fbosc::cli {

struct GlobalOptions {
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Squeezing overrides in dB, applied on top of the loaded config.
struct SqueezeOverrides {
  std::optional<double> r0_db, rg_db, re_db;
};

struct GridOptions {
  double omega_min = 1e-3;
  double omega_max = 3.0;
  int points = 512;
  bool linear = false;
  bool absolute = false;
  bool one_sided = false;
};

struct InspectOptions {
  std::string config;
  std::string covariance_out;
};

struct SpectrumOptions {
  std::string config;
  GridOptions grid;
  SqueezeOverrides squeeze;
  std::string out;
};

struct SimulateOptions {
  std::string config;
  int dt_div = 16;
  std::int64_t steps = 1 << 20;
  std::uint64_t seed = 1;
  std::uint32_t stream = 0;
  bool psd = false;
  bool series = false;
  bool binary = false;
  bool linewidth = false;
  bool startup = false;
  int runs = 12;
  std::string out;
};

struct VerifyOptions {
  std::string config;
  bool all_builtin = false;
  std::uint64_t seed = 1;
};

struct DecomposeOptions {
  double big_g = 0.0;
  double small_g = 0.0;
};

struct SweepOptions {
  std::string config;
  std::string param;
  double from = 0.0;
  double to = 0.0;
  int count = 2;
  GridOptions grid;
  std::string out_dir;
};

// Each returns a process exit code; library errors propagate as fbosc::Error.
int cmd_inspect(const InspectOptions& opt, const GlobalOptions& global);
int cmd_spectrum(const SpectrumOptions& opt, const GlobalOptions& global);
int cmd_simulate(const SimulateOptions& opt, const GlobalOptions& global);
int cmd_verify(const VerifyOptions& opt, const GlobalOptions& global);
int cmd_decompose(const DecomposeOptions& opt);
int cmd_sweep(const SweepOptions& opt, const GlobalOptions& global);

}  // namespace fbosc::cli
