#include <CLI11.hpp>

#include <exception>
#include <iostream>

#include "commands.hpp"
#include "run_context.hpp"

using namespace fbosc::cli;

namespace {

void add_grid_flags(CLI::App* cmd, GridOptions& g) {
  cmd->add_option("--omega-min", g.omega_min, "Lowest frequency, rad/s")->capture_default_str();
  cmd->add_option("--omega-max", g.omega_max, "Highest frequency, rad/s")->capture_default_str();
  cmd->add_option("--points", g.points, "Number of grid points")->capture_default_str();
  auto* lin = cmd->add_flag("--linear", g.linear, "Linear spacing");
  cmd->add_flag("--log", "Logarithmic spacing (default)")->excludes(lin);
  cmd->add_flag("--absolute", g.absolute, "Frequencies are absolute rather than offsets from the carrier");
  cmd->add_flag("--one-sided", g.one_sided, "Double sqq and spp into one-sided densities (flagged in the header)");
}

void add_squeeze_flags(CLI::App* cmd, SqueezeOverrides& s) {
  const char* note = " in dB, r = ln(10^(dB/20)), so 12 dB gives r = 1.3816";
  cmd->add_option("--r0-db", s.r0_db, std::string("Squeezing of the in-coupled mode") + note);
  cmd->add_option("--rg-db", s.rg_db, std::string("Squeezing of the ancillary mode") + note);
  cmd->add_option("--re-db", s.re_db, std::string("Two-mode squeezing between them") + note);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum-noise spectra, linewidths and uncertainty bounds of feedback oscillators"};
  app.set_version_flag("--version", tool_version());
  app.require_subcommand(1);
  GlobalOptions global;
  app.add_option("--threads", global.threads, "Worker threads, 0 for all cores")->capture_default_str();

  InspectOptions inspect;
  auto* c_inspect = app.add_subcommand("inspect", "Validate a config and print derived quantities");
  c_inspect->add_option("config", inspect.config, "JSON config")->required();
  c_inspect->add_option("--covariance-out", inspect.covariance_out, "Write the 4x4 input covariance as CSV");

  SpectrumOptions spectrum;
  auto* c_spectrum = app.add_subcommand("spectrum", "Write output quadrature spectra and bounds as CSV");
  c_spectrum->add_option("config", spectrum.config, "JSON config")->required();
  add_grid_flags(c_spectrum, spectrum.grid);
  add_squeeze_flags(c_spectrum, spectrum.squeeze);
  c_spectrum->add_option("--out", spectrum.out, "Output CSV path")->required();

  SimulateOptions simulate;
  auto* c_simulate = app.add_subcommand("simulate", "Run the time-domain delay-loop simulation");
  c_simulate->add_option("config", simulate.config, "JSON config")->required();
  c_simulate->add_option("--dt-div", simulate.dt_div, "Samples per round trip (>= 8)")->capture_default_str();
  c_simulate->add_option("--steps", simulate.steps, "Total time steps including warmup")->capture_default_str();
  c_simulate->add_option("--seed", simulate.seed, "RNG seed (FBOSC_SEED overrides)")->capture_default_str();
  c_simulate->add_option("--stream", simulate.stream, "RNG stream within the seed")->capture_default_str();
  c_simulate->add_flag("--psd", simulate.psd, "Estimate quadrature PSDs and compare with the analytic spectra");
  c_simulate->add_flag("--series", simulate.series, "Write the output time series");
  c_simulate->add_flag("--binary", simulate.binary, "Write the series as a binary dump instead of CSV");
  c_simulate->add_flag("--linewidth", simulate.linewidth, "Fit the field linewidth and compare with Gamma_ST");
  c_simulate->add_option("--runs", simulate.runs, "Trajectories averaged for --linewidth")->capture_default_str();
  c_simulate->add_flag("--startup", simulate.startup, "Classical amplitude startup instead of fluctuations");
  c_simulate->add_option("--out", simulate.out, "Output path prefix")->required();

  VerifyOptions verify;
  auto* c_verify = app.add_subcommand("verify", "Run the invariant checks and print a pass/fail table");
  c_verify->add_option("config", verify.config, "JSON config");
  c_verify->add_flag("--all-builtin", verify.all_builtin, "Check every built-in reference configuration");
  c_verify->add_option("--seed", verify.seed, "RNG seed for sampled frequencies (FBOSC_SEED overrides)")
      ->capture_default_str();

  DecomposeOptions decompose;
  auto* c_decompose =
      app.add_subcommand("decompose", "Split a phase-sensitive amplifier into gain followed by a squeezer");
  c_decompose->add_option("--big-g", decompose.big_g, "Gain G applied to the signal")->required();
  c_decompose->add_option("--small-g", decompose.small_g, "Conjugate gain g, 0 <= g < G")->required();

  SweepOptions sweep;
  auto* c_sweep = app.add_subcommand("sweep", "Spectra over a parameter range, one CSV per value");
  c_sweep->add_option("config", sweep.config, "JSON config")->required();
  c_sweep->add_option("--param", sweep.param, "eta, tau, alpha_sq, r0_db, rg_db, re_db or r_s")->required();
  c_sweep->add_option("--from", sweep.from, "First value")->required();
  c_sweep->add_option("--to", sweep.to, "Last value")->required();
  c_sweep->add_option("--count", sweep.count, "Number of values")->capture_default_str();
  add_grid_flags(c_sweep, sweep.grid);
  c_sweep->add_option("--out-dir", sweep.out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (*c_inspect) return cmd_inspect(inspect, global);
    if (*c_spectrum) return cmd_spectrum(spectrum, global);
    if (*c_simulate) return cmd_simulate(simulate, global);
    if (*c_verify) return cmd_verify(verify, global);
    if (*c_decompose) return cmd_decompose(decompose);
    if (*c_sweep) return cmd_sweep(sweep, global);
  } catch (const fbosc::Error& e) {
    std::cerr << "error [" << fbosc::to_string(e.code()) << "]: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
