// One line per acceptance criterion: "[PASS|FAIL] <n> <name>: <measurements>".
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "fbosc/fbosc.hpp"

using namespace fbosc;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), pattern, args...);
  return buf;
}

int failures = 0;

void run(int id, const char* name, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("threw ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  failures += !out.pass;
  std::printf("[%s] %2d %s: %s (%.2f s)\n", out.pass ? "PASS" : "FAIL", id, name, out.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool outside_guard(double theta) { return std::abs(2.0 * std::sin((theta - kPi) / 2.0)) >= kPoleGuard; }

const InputCovariance kVacuum = InputCovariance::Identity() * 0.5;

// 1 --------------------------------------------------------------------------
Outcome commutator_identity() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u_eta(0.0, 1.0), u_theta(-50.0, 50.0), u_log(-8.0, 0.5);
  double worst = 0.0;
  int samples = 0;
  while (samples < 10000) {
    const double eta = 1.0 - u_eta(rng);  // (0, 1]
    // half uniform, half clustered toward the poles
    const double theta = samples % 2 ? u_theta(rng)
                                     : kPi + std::pow(10.0, u_log(rng)) * (samples % 4 ? 1.0 : -1.0);
    if (!outside_guard(theta)) continue;
    worst = std::max(worst, std::abs(commutator_residual(eta, 1.0, theta)));
    ++samples;
  }
  const double secs = elapsed_since(t0);
  return {worst < 1e-12 && secs < 1.0,
          fmt("max |(|h0|^2-|hg|^2)-1| = %.2e over %d samples (tol 1e-12), %.3f s (limit 1 s)", worst, samples, secs)};
}

// 2 --------------------------------------------------------------------------
Outcome vacuum_closed_form() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> u_eta(0.0, 1.0), u_theta(-50.0, 50.0);
  double worst = 0.0;
  int samples = 0;
  while (samples < 1000) {
    const double eta = 1.0 - u_eta(rng), theta = u_theta(rng);
    if (!outside_guard(theta)) continue;
    const auto closed = output_spectra_vacuum_closed_form(eta, 1.0, theta);
    const auto general = output_spectra_general(transfer_insensitive(eta, 1.0, theta), kVacuum);
    worst = std::max({worst, std::abs(general.sqq / closed.sqq - 1.0), std::abs(general.spp / closed.spp - 1.0)});
    ++samples;
  }
  const double spot = output_spectra_vacuum_closed_form(0.25, 1.0, kPi / 2).spp;
  return {worst < 1e-12 && std::abs(spot - 1.625) < 1e-12,
          fmt("max rel diff %.2e over %d points (tol 1e-12); S(eta=0.25, pi/2) = %.15g (expect 1.625)", worst,
              samples, spot)};
}

// 3 --------------------------------------------------------------------------
Outcome schawlow_townes_plateau() {
  const double tau = 1.0, alpha_sq = 1.0, x = kPlateauOmegaTau;
  double worst_st = 0.0, worst_exact = 0.0;
  for (double eta : {0.9, 0.99, 0.999}) {
    const double plateau = frequency_noise_plateau(eta, tau, alpha_sq, x);
    const double st = schawlow_townes(eta, tau, alpha_sq).s_phidot;
    const double exact = std::pow(std::sqrt(eta) - 1.0 / std::sqrt(eta), 2) / (2 * tau * tau * alpha_sq) +
                         x * x / (4 * tau * tau * alpha_sq);
    worst_st = std::max(worst_st, std::abs(plateau / st - 1.0));
    worst_exact = std::max(worst_exact, std::abs(plateau / exact - 1.0));
  }
  const double st = schawlow_townes(0.99, tau, alpha_sq).s_phidot;
  const double log_form = schawlow_townes_log_form(0.99, tau, alpha_sq).s_phidot;
  const double log_rel = std::abs(st / log_form - 1.0);
  const bool a = worst_st < 1e-6, b = log_rel < 1.0 - 0.99;
  return {a && b,
          fmt("(a) plateau vs (1-eta)^2/(2 tau^2 |alpha|^2): max rel %.3e (tol 1e-6) [%s]; plateau vs exact "
              "two-term form: max rel %.2e; (b) vs (ln eta)^2 form at eta=0.99: rel %.4e (tol 1e-2) [%s]",
              worst_st, a ? "pass" : "FAIL", worst_exact, log_rel, b ? "pass" : "FAIL")};
}

// 4 --------------------------------------------------------------------------
Outcome heisenberg_floor() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u01(0.0, 1.0), u_r(-3.0, 3.0), u_theta(-50.0, 50.0);
  double min_product = 1e300;
  int samples = 0, violations = 0;
  while (samples < 100000) {
    OscillatorConfig c;
    c.eta = 1.0 - u01(rng);
    c.tau = 0.1 + 10.0 * u01(rng);
    c.input = {u_r(rng), u_r(rng), u_r(rng), std::nullopt};
    switch (samples % 3) {
      case 0: c.amplifier = SaturatingTanh{2.0 / std::sqrt(c.eta), 1.0}; break;
      case 1: c.amplifier = LinearInsensitive{1.0 / std::sqrt(c.eta)}; break;
      default: {
        const double r = u01(rng) * max_squeeze(c.eta);
        c.amplifier = PhaseSensitive{std::exp(-r) / std::sqrt(c.eta), r, 0.0};
      }
    }
    const double theta = u_theta(rng);
    if (!outside_guard(theta)) continue;
    const auto cfg = validate_config(c).value();
    const double product = output_spectra(cfg, theta / c.tau).product;
    min_product = std::min(min_product, product);
    violations += product < 0.25 - 1e-9;
    ++samples;
  }
  // two-mode squeezing at rE = ln(eta), evaluated through the general composition
  double epr_worst = 0.0, epr_grid_min = 1e300;
  for (double eta : {0.1, 0.25, 0.5, 0.9}) {
    const auto v = input_covariance({0.0, 0.0, std::log(eta), std::nullopt});
    for (int n : {-2, 0, 1, 5}) {
      const double at = output_spectra_general(transfer_insensitive(eta, 1.0, 2.0 * kPi * n), v).product;
      epr_worst = std::max(epr_worst, std::abs(at - 0.25));
    }
    for (int k = 1; k < 2000; ++k) {
      const double theta = 2.0 * kPi * k / 2000.0;
      if (!outside_guard(theta)) continue;
      epr_grid_min = std::min(epr_grid_min, output_spectra_general(transfer_insensitive(eta, 1.0, theta), v).product);
    }
  }
  const double secs = elapsed_since(t0);
  const bool ok = violations == 0 && epr_worst < 1e-9 && epr_grid_min >= 0.25 - 1e-9 && secs < 30.0;
  return {ok, fmt("min product %.12f over %d configs, %d below 0.25-1e-9; EPR at Omega tau = 2 pi n: max |P-0.25| = "
                  "%.2e (tol 1e-9), grid minimum %.12f; %.1f s (limit 30 s)",
                  min_product, samples, violations, epr_worst, epr_grid_min, secs)};
}

// 5 --------------------------------------------------------------------------
Outcome bound_ordering() {
  // relative slack for rounding where the bounds touch, far below any physical gap
  constexpr double kSlack = 1e-12;
  int checked = 0, violations = 0;
  double tightest = 1e300;
  for (double eta : {0.01, 0.1, 0.25, 0.5, 0.75, 0.9, 0.99, 1.0}) {
    for (double frac : {0.0, 0.25, 0.5, 0.9, 1.0}) {
      const double r = frac * max_squeeze(eta);
      for (int k = 0; k < 2000; ++k) {
        const double theta = -3.0 * kPi + 6.0 * kPi * (k + 0.5) / 2000.0;
        if (!outside_guard(theta)) continue;
        const auto s = output_spectra_general(transfer_phase_sensitive(eta, 1.0, r, theta), kVacuum);
        const double general = *s.bounds.general;
        const bool ok = s.product >= general * (1.0 - kSlack) && general >= s.bounds.insensitive * (1.0 - kSlack);
        violations += !ok;
        if (general > 0.0) tightest = std::min(tightest, s.product / general - 1.0);
        ++checked;
      }
    }
  }
  return {violations == 0, fmt("%d points, %d violations of product >= general >= insensitive; closest approach "
                               "product/general - 1 = %.2e",
                               checked, violations, tightest)};
}

// 6 --------------------------------------------------------------------------
Outcome pure_phase_sensitive() {
  std::mt19937_64 rng(606);
  std::uniform_real_distribution<double> u_log(-6.0, -1.0), u_eta(0.05, 0.95);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double eta = u_eta(rng);
    const double x = std::pow(10.0, u_log(rng)) * (i % 2 ? 1.0 : -1.0);
    const auto s = output_spectra_phase_sensitive(eta, 1.0, max_squeeze(eta), kPi + x, kVacuum);
    const auto closed = output_spectra_phase_sensitive_vacuum(eta, 1.0, max_squeeze(eta), kPi + x);
    worst = std::max({worst, std::abs(s.product - 0.25), std::abs(closed.product - 0.25)});
  }
  return {worst < 1e-12, fmt("max |sqq spp - 1/4| = %.2e over 1000 near-carrier points (tol 1e-12)", worst)};
}

// 7 --------------------------------------------------------------------------
Outcome saturation() {
  const double eta = 0.25;
  const auto ss = steady_state_amplitude(TanhGain<>{4.0, 1.0}, eta);
  // independent bisection oracle
  double lo = 1e-6, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::tanh(4.0 * mid) > mid ? lo : hi) = mid;
  }
  const double oracle = 0.5 * (lo + hi);
  SimPlan plan;
  plan.dt_div = 16;
  plan.steps = 200LL * plan.dt_div;
  plan.seed = 1;
  plan.mode = SimMode::ClassicalStartup;
  const auto start = simulate_classical_startup(SaturatingTanh{4.0, 1.0}, eta, 1.0, plan);
  const bool ok = std::abs(ss.alpha_ss - 0.4788) < 1e-3 && std::abs(ss.alpha_ss - oracle) < 1e-10 &&
                  std::abs(ss.g_linear * std::sqrt(eta) - 1.0) < 1e-10 && std::abs(ss.contraction - 0.166) < 1e-3 &&
                  start.converged_at >= 0 && start.converged_at <= 200 &&
                  std::abs(start.final_amplitude - ss.alpha_ss) < 1e-9;
  return {ok, fmt("alpha_ss %.10f (bisection %.10f), g_lin sqrt(eta) - 1 = %.1e, contraction %.6f; startup from "
                  "%.1e converged at round trip %d to within %.1e",
                  ss.alpha_ss, oracle, ss.g_linear * std::sqrt(eta) - 1.0, ss.contraction, start.seed_amplitude,
                  start.converged_at, std::abs(start.final_amplitude - ss.alpha_ss))};
}

// 8 --------------------------------------------------------------------------
struct Fixture {
  const char* name;
  OscillatorConfig config;
};

std::vector<Fixture> variant_fixtures() {
  const double eta = 0.25, r12 = squeeze_from_db(12.0);
  OscillatorConfig base;
  base.eta = eta;
  base.tau = 1.0;
  base.amplifier = SaturatingTanh{4.0, 1.0};
  std::vector<Fixture> out{{"vacuum", base}, {"squeezed 12 dB", base}, {"EPR 12 dB", base}, {"phase-sensitive", base}};
  out[1].config.input.r0 = r12;
  out[1].config.input.rG = r12;
  out[2].config.input.rE = r12;
  out[3].config.amplifier = PhaseSensitive{1.0, max_squeeze(eta), 0.0};
  return out;
}

Outcome monte_carlo_agreement() {
  SimPlan plan;
  plan.dt_div = 16;
  plan.steps = 1 << 20;
  plan.seed = 20240101;
  const double lo = 10.0 * 2.0 * kPi * plan.dt_div / static_cast<double>(plan.steps);
  const double hi = 1.0;
  bool ok = true;
  std::string detail;
  for (const auto& fx : variant_fixtures()) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto cfg = validate_config(fx.config).value();
    const auto series = simulate_fluctuations(cfg, plan);
    PsdOptions opt;
    opt.segment_len = static_cast<std::size_t>(plan.steps / 32);
    opt.prewhiten_lag = 1;
    double rms[2];
    for (int qi = 0; qi < 2; ++qi) {
      const auto est = estimate_psd(series, qi ? Quadrature::Phase : Quadrature::Amplitude, opt);
      const auto cmp = compare_bands(
          est,
          [&](double w) {
            const auto s = output_spectra(cfg, cfg.carrier_omega() + w / cfg.tau());
            return qi ? s.spp : s.sqq;
          },
          lo / cfg.tau(), hi / cfg.tau(), 1.15, 20);
      rms[qi] = cmp.rms_rel_error;
    }
    const double secs = elapsed_since(t0);
    const bool pass = rms[0] < 0.1 && rms[1] < 0.1 && secs < 60.0;
    ok = ok && pass;
    detail += fmt("%s%s q %.3f p %.3f (%.1f s)", detail.empty() ? "" : "; ", fx.name, rms[0], rms[1], secs);
  }
  return {ok, "RMS band error (tol 0.10, 60 s each): " + detail};
}

// 9 --------------------------------------------------------------------------
Outcome linewidth() {
  const auto t0 = std::chrono::steady_clock::now();
  SimPlan plan;
  plan.dt_div = 8;
  plan.steps = 1 << 22;
  plan.seed = 1;
  OscillatorConfig c;
  c.eta = 0.97;
  c.tau = 1.0;
  c.amplifier = LinearInsensitive{1.0 / std::sqrt(c.eta)};
  const double run_time = static_cast<double>(plan.steps - plan.effective_warmup()) * plan.dt(c.tau);
  c.alpha_sq = linewidth_alpha_sq(c.eta, c.tau, run_time, 30.0);
  LinewidthOptions opt;
  opt.runs = 48;
  const auto res = estimate_linewidth(validate_config(c).value(), plan, opt);
  const double secs = elapsed_since(t0);
  const bool ok = std::abs(res.relative_error) < 0.1 && secs < 120.0;
  return {ok, fmt("fit fwhm %.5e rad/s vs 2 pi Gamma_ST %.5e: rel %+.4f (tol 0.10); Gamma T = %.1f, %d runs, fit "
                  "residual %.3f, %.1f s (limit 120 s)",
                  res.fit.fwhm, res.fwhm_schawlow_townes, res.relative_error, res.gamma_t_run, res.runs,
                  res.fit.residual, secs)};
}

// 10 -------------------------------------------------------------------------
Outcome decomposition() {
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double big = 1.0 + std::pow(10.0, 3.0 * u01(rng)) * u01(rng);
    const double small = big * u01(rng);
    const auto d = decompose_phase_sensitive(big, small);
    const double big_back = d.gain * std::cosh(d.squeeze), small_back = d.gain * std::sinh(d.squeeze);
    worst = std::max({worst, std::abs(big_back - big) / big, std::abs(small_back - small) / big});
  }
  const auto fx = decompose_phase_sensitive(5.0, 3.0);
  const bool ok = worst < 1e-12 && std::abs(fx.gain - 4.0) < 1e-12 && std::abs(fx.squeeze - std::log(2.0)) < 1e-12;
  return {ok, fmt("round-trip max rel error %.2e over 10^4 pairs (tol 1e-12); (5, 3) -> (%.15g, %.15g)", worst,
                  fx.gain, fx.squeeze)};
}

// 11 -------------------------------------------------------------------------
Outcome phase_sensitive_limits() {
  double worst_zero = 0.0, worst_max = 0.0;
  for (double eta : {0.05, 0.25, 0.5, 0.9, 0.999}) {
    for (int k = 0; k < 200; ++k) {
      const double theta = -2.0 * kPi + 4.0 * kPi * (k + 0.37) / 200.0;
      if (!outside_guard(theta)) continue;
      const auto a = transfer_phase_sensitive(eta, 1.0, 0.0, theta);
      const auto b = transfer_insensitive(eta, 1.0, theta);
      worst_zero = std::max({worst_zero, std::abs(a.h0q - b.h0), std::abs(a.hgq - b.hg), std::abs(a.h0p - b.h0),
                             std::abs(a.hgp - b.hg)});
      const auto m = transfer_phase_sensitive(eta, 1.0, max_squeeze(eta), theta);
      worst_max = std::max({worst_max, std::abs(m.hgq), std::abs(m.hgp)});
    }
  }
  return {worst_zero < 1e-12 && worst_max < 1e-12,
          fmt("r_s = 0 vs insensitive: max diff %.2e; r_s = r_max: max |hg| %.2e (tol 1e-12)", worst_zero, worst_max)};
}

}  // namespace

int main() {
  run(1, "commutator identity", commutator_identity);
  run(2, "vacuum spectrum closed form", vacuum_closed_form);
  run(3, "Schawlow-Townes plateau", schawlow_townes_plateau);
  run(4, "Heisenberg floor", heisenberg_floor);
  run(5, "bound ordering", bound_ordering);
  run(6, "pure phase-sensitive uncertainty", pure_phase_sensitive);
  run(7, "saturation and startup", saturation);
  run(8, "Monte Carlo spectra", monte_carlo_agreement);
  run(9, "linewidth end-to-end", linewidth);
  run(10, "gain/squeezer decomposition", decomposition);
  run(11, "phase-sensitive limits", phase_sensitive_limits);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures;
}
