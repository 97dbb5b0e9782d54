#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "run_context.hpp"

namespace fbosc::cli {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSamples = 2000;
constexpr double kHeisenbergTol = 1e-9;
constexpr double kIdentityTol = 1e-12;

struct Check {
  std::string name;
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), pattern, a, b);
  return buf;
}

/// Round-trip phases in (0, 2 pi) at least 1e-6 away from the pole at pi.
std::vector<double> sample_phases(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
  std::vector<double> out;
  while (static_cast<int>(out.size()) < n) {
    const double theta = u(rng);
    if (std::abs(theta - kPi) > 1e-6 && theta > 0.0) out.push_back(theta);
  }
  return out;
}

Check check_covariance(const OscillatorConfig& c) {
  try {
    const auto validity = covariance_validity(effective_covariance(c.input));
    std::string detail = fmt("min eigenvalue of v + i Sigma / 2 = %.3e", validity.min_eigenvalue);
    if (validity.warning) detail += " (" + *validity.warning + ")";
    return {"covariance_validity", validity.valid, detail};
  } catch (const Error& e) {
    return {"covariance_validity", false, e.what()};
  }
}

Check check_commutator(const ValidatedConfig& cfg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u_eta(1e-3, 1.0);
  double worst = 0.0;
  const auto phases = sample_phases(rng, kSamples);
  for (std::size_t i = 0; i < phases.size(); ++i) {
    const double eta = (i % 2 == 0) ? cfg.eta() : u_eta(rng);
    worst = std::max(worst, std::abs(commutator_residual(eta, cfg.tau(), phases[i] / cfg.tau())));
  }
  return {"commutator", worst < kIdentityTol, fmt("max ||h0|^2 - |hg|^2 - 1| = %.2e (tol 1e-12)", worst)};
}

Check check_heisenberg(const std::vector<QuadratureSpectra>& spectra) {
  double lowest = INFINITY;
  for (const auto& s : spectra) lowest = std::min(lowest, s.product);
  return {"heisenberg", lowest >= 0.25 - kHeisenbergTol,
          fmt("min sqq spp = %.10f over %.0f frequencies", lowest, static_cast<double>(spectra.size()))};
}

/// product >= general always; general >= insensitive only holds when the two
/// input modes are uncorrelated, since the insensitive bound assumes so.
Check check_bound_ordering(const std::vector<QuadratureSpectra>& spectra, const InputCovariance& v) {
  const bool uncorrelated = v.block<2, 2>(0, 2).isZero(0.0);
  int violations = 0;
  for (const auto& s : spectra) {
    const double slack = kIdentityTol * std::max(1.0, s.product);
    const double general = s.bounds.general.value_or(s.bounds.insensitive);
    if (s.product < general - slack) ++violations;
    if (uncorrelated && general < s.bounds.insensitive - slack) ++violations;
  }
  return {"bound_ordering", violations == 0,
          fmt(uncorrelated ? "%.0f violations of product >= general >= insensitive over %.0f frequencies"
                           : "%.0f violations of product >= general over %.0f frequencies (correlated inputs)",
              violations, static_cast<double>(spectra.size()))};
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

/// Closed forms against composition through the transfer functions.
Check check_cross_path(const ValidatedConfig& cfg, std::mt19937_64& rng) {
  const auto phases = sample_phases(rng, kSamples);
  const InputCovariance vacuum = input_covariance({});
  const double eta = cfg.eta(), tau = cfg.tau();
  const auto& in = cfg.config().input;
  const bool pure_epr = !cfg.phase_sensitive() && !in.covariance && in.r0 == 0.0 && in.rG == 0.0;
  double worst = 0.0;
  for (double theta : phases) {
    const double omega = theta / tau;
    if (cfg.phase_sensitive()) {
      const auto closed = output_spectra_phase_sensitive_vacuum(eta, tau, cfg.squeeze(), omega);
      const auto composed = output_spectra_phase_sensitive(eta, tau, cfg.squeeze(), omega, vacuum);
      worst = std::max({worst, rel_diff(composed.sqq, closed.sqq), rel_diff(composed.spp, closed.spp)});
    } else {
      const auto closed = output_spectra_vacuum_closed_form(eta, tau, omega);
      const auto composed = output_spectra_general(transfer_insensitive(eta, tau, omega), vacuum);
      worst = std::max({worst, rel_diff(composed.sqq, closed.sqq), rel_diff(composed.spp, closed.spp)});
      if (pure_epr) {
        const auto epr = output_spectra_epr_exact(eta, tau, omega, in.rE);
        const auto from_cfg = output_spectra(cfg, omega);
        worst = std::max({worst, rel_diff(from_cfg.sqq, epr.sqq), rel_diff(from_cfg.spp, epr.spp)});
      }
    }
  }
  return {"cross_path", worst < kIdentityTol,
          fmt("max relative gap closed form vs composition = %.2e (tol 1e-12)", worst)};
}

/// Two-mode squeezing with rE = ln(eta) reaches the Heisenberg product at the
/// longitudinal-mode frequencies 2 pi n / tau.
Check check_epr_minimum(const ValidatedConfig& cfg) {
  const double eta = cfg.eta(), tau = cfg.tau();
  InputStateParams epr;
  epr.rE = std::log(eta);
  const InputCovariance v = input_covariance(epr);
  double lowest = INFINITY, gap = 0.0;
  for (int n = 0; n < 4; ++n) {
    const double omega = 2.0 * kPi * n / tau;
    const auto exact = output_spectra_epr_exact(eta, tau, omega, epr.rE);
    const auto composed = output_spectra_general(transfer_insensitive(eta, tau, omega), v);
    lowest = std::min({lowest, exact.product, composed.product});
    gap = std::max(gap, std::abs(exact.product - composed.product));
  }
  const bool pass = std::abs(lowest - 0.25) < kHeisenbergTol && gap < kIdentityTol;
  return {"epr_minimum", pass, fmt("min product %.4f at rE = ln eta, paths agree to %.1e", lowest, gap)};
}

Check check_decomposition(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double big = 1.0 + 100.0 * u01(rng);
    const double small = big * u01(rng);
    const auto d = decompose_phase_sensitive(big, small);
    worst = std::max({worst, std::abs(d.gain * std::cosh(d.squeeze) - big) / big,
                      std::abs(d.gain * std::sinh(d.squeeze) - small) / big});
  }
  const auto fixed = decompose_phase_sensitive(5.0, 3.0);
  const bool pass = worst < kIdentityTol && std::abs(fixed.gain - 4.0) < kIdentityTol &&
                    std::abs(fixed.squeeze - std::log(2.0)) < kIdentityTol;
  return {"decomposition", pass, fmt("round-trip max rel error %.2e; (5, 3) -> Gcal %.12g", worst, fixed.gain)};
}

Check check_saturation(const ValidatedConfig& cfg) {
  if (!std::holds_alternative<SaturatingTanh>(cfg.config().amplifier))
    return {"saturation", true, "n/a (amplifier is already linearized)"};
  const auto& model = cfg.config().amplifier;
  const auto ss = steady_state_amplitude(model, cfg.eta());
  const auto orbit = iterate_loop_map(model, cfg.eta(), 2.0 * ss.alpha_ss, 200);
  const double settle = std::abs(orbit.back() - ss.alpha_ss);
  const bool pass = ss.residual < 1e-10 && std::abs(ss.contraction) < 1.0 && settle < 1e-9;
  return {"saturation", pass,
          fmt("alpha_ss %.10f, loop map from 2 alpha_ss settles to %.1e", ss.alpha_ss, settle)};
}

bool run_suite(const std::string& label, const OscillatorConfig& c, std::uint64_t seed, unsigned threads) {
  const ValidatedConfig cfg = validate_config(c).value();
  std::mt19937_64 rng(seed);

  std::vector<double> omegas;
  for (double theta : sample_phases(rng, kSamples)) omegas.push_back(theta / cfg.tau());
  const auto spectra = output_spectra(cfg, omegas, threads);

  const std::vector<Check> checks{check_covariance(c),        check_commutator(cfg, rng),
                                  check_heisenberg(spectra),  check_bound_ordering(spectra, effective_covariance(c.input)),
                                  check_cross_path(cfg, rng), check_epr_minimum(cfg),
                                  check_decomposition(rng),   check_saturation(cfg)};
  std::printf("== %s (config %s, seed %llu)\n", label.c_str(), config_hash(c).c_str(),
              static_cast<unsigned long long>(seed));
  bool all = true;
  for (const auto& ch : checks) {
    std::printf("%-20s %s  %s\n", ch.name.c_str(), ch.pass ? "PASS" : "FAIL", ch.detail.c_str());
    all = all && ch.pass;
  }
  return all;
}

}  // namespace

int cmd_verify(const VerifyOptions& opt, const GlobalOptions& global) {
  const auto seed = resolve_seed(opt.seed);
  bool all = true;
  int suites = 0;
  if (opt.all_builtin) {
    for (const auto& fx : builtin_fixtures()) {
      all = run_suite(fx.name, fx.config, seed, global.threads) && all;
      ++suites;
    }
  }
  if (!opt.config.empty()) {
    all = run_suite(opt.config, load_config(opt.config), seed, global.threads) && all;
    ++suites;
  }
  if (suites == 0) throw Error(ErrorCode::InvalidArgument, "verify needs a config path or --all-builtin");
  std::printf("verify: %s\n", all ? "all checks passed" : "FAILED");
  return all ? kOk : kVerifyFailed;
}

}  // namespace fbosc::cli
