#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "run_context.hpp"

namespace fbosc::cli {
namespace {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& header, const std::string& columns)
      : out_(path), path_(path) {
    if (!out_) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
    for (const auto& line : header) out_ << "# " << line << '\n';
    out_ << columns << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", values[i]);
      out_ << (i ? "," : "") << buf;
    }
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw Error(ErrorCode::Io, "failed writing " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

void apply_overrides(OscillatorConfig& c, const SqueezeOverrides& s) {
  if (s.r0_db) c.input.r0 = squeeze_from_db(*s.r0_db);
  if (s.rg_db) c.input.rG = squeeze_from_db(*s.rg_db);
  if (s.re_db) c.input.rE = squeeze_from_db(*s.re_db);
}

void print_warnings(const ValidatedConfig& cfg) {
  for (const auto& w : cfg.warnings()) std::cerr << "warning: " << w << '\n';
}

FrequencyGrid make_grid(const GridOptions& g) {
  return g.linear ? linear_grid(g.omega_min, g.omega_max, g.points, g.absolute)
                  : log_grid(g.omega_min, g.omega_max, g.points, g.absolute);
}

void record_grid(RunManifest& m, const GridOptions& g) {
  m.param("omega_min", g.omega_min);
  m.param("omega_max", g.omega_max);
  m.param("points", static_cast<double>(g.points));
  m.param("spacing", g.linear ? "linear" : "log");
  m.param("frequencies", g.absolute ? "absolute" : "carrier offset");
  m.param("one_sided", g.one_sided ? "true" : "false");
}

/// One row per grid point: the grid value as given, the absolute round-trip
/// phase Omega tau, spectra and bounds, and the frequency noise when the
/// carrier power is known.
void write_spectrum_csv(const std::string& path, const ValidatedConfig& cfg, const GridOptions& g,
                        const RunManifest& m, unsigned threads) {
  const auto grid = make_grid(g);
  check_grid(grid, cfg.tau(), cfg.config().carrier_index);
  const auto omegas = absolute_frequencies(grid, cfg.tau(), cfg.config().carrier_index);
  const auto spectra = output_spectra(cfg, omegas, threads);
  const bool with_noise = cfg.alpha_sq() > 0.0;
  const double scale = g.one_sided ? 2.0 : 1.0;

  std::string columns = "omega_rad_s,omega_tau,sqq,spp,product,bound_heisenberg,bound_insensitive,bound_general";
  if (with_noise) columns += ",s_phidot";
  auto header = m.csv_header(
      "omega rad/s (" + std::string(g.absolute ? "absolute" : "offset from carrier") +
          "), omega_tau rad (absolute), spectra per rad/s, s_phidot rad^2/s^2 per rad/s",
      columns);
  if (g.one_sided) header.push_back("one_sided sqq and spp doubled; product and bounds stay double-sided");
  CsvWriter csv(path, header, columns);
  for (std::size_t i = 0; i < spectra.size(); ++i) {
    const auto& s = spectra[i];
    std::vector<double> row{grid.values[i],    omegas[i] * cfg.tau(),      scale * s.sqq,
                            scale * s.spp,     s.product,                  s.bounds.heisenberg,
                            s.bounds.insensitive, s.bounds.general.value_or(NAN)};
    if (with_noise) {
      const double offset = omegas[i] - cfg.carrier_omega();
      row.push_back(frequency_noise_spectrum(s.spp, offset, cfg.alpha_sq()).s_phidot);
    }
    csv.row(row);
  }
  csv.close();
}

}  // namespace

int cmd_inspect(const InspectOptions& opt, const GlobalOptions&) {
  const auto c = load_config(opt.config);
  const auto result = validate_config(c);
  std::printf("config          %s\n", opt.config.c_str());
  std::printf("config hash     %s\n", config_hash(c).c_str());
  if (!result.ok()) {
    for (const auto& issue : result.errors)
      std::printf("validation      FAILED %s: %s\n", std::string(to_string(issue.code)).c_str(),
                  issue.message.c_str());
    result.value();  // rethrows the first issue
  }
  const auto& cfg = *result.config;
  std::printf("validation      ok\n");
  for (const auto& w : cfg.warnings()) std::printf("warning         %s\n", w.c_str());
  std::printf("amplifier       %s\n", std::string(amplifier_name(c.amplifier)).c_str());
  std::printf("eta = %.10g, tau = %.10g s, alpha_sq = %.10g /s\n", cfg.eta(), cfg.tau(), cfg.alpha_sq());
  std::printf("kappa = %.10g /s\n", cfg.kappa());
  std::printf("r_max = %.10g\n", cfg.r_max());
  std::printf("carrier omega = %.10g rad/s (index %d)\n", cfg.carrier_omega(), c.carrier_index);
  std::printf("loop gain = %.10g\n", cfg.loop_gain());
  if (cfg.phase_sensitive()) std::printf("r_s = %.10g\n", cfg.squeeze());

  if (std::holds_alternative<SaturatingTanh>(c.amplifier)) {
    const auto ss = steady_state_amplitude(c.amplifier, cfg.eta());
    std::printf("alpha_ss = %.10f\n", ss.alpha_ss);
    std::printf("g_linear = %.10f\n", ss.g_linear);
    std::printf("contraction = %.10f\n", ss.contraction);
    std::printf("zero-point growth = %.10f per round trip\n", zero_point_growth(c.amplifier, cfg.eta()));
    if (ss.roots.size() > 1) std::printf("note: %zu positive fixed points, the smallest is used\n", ss.roots.size());
  }

  if (cfg.eta() == 1.0) {
    std::printf("Gamma_ST = 0 Hz (lossless loop)\n");
  } else if (cfg.alpha_sq() > 0.0) {
    const auto st = schawlow_townes(cfg.eta(), cfg.tau(), cfg.alpha_sq());
    std::printf("Gamma_ST = %.10g Hz (S_phidot plateau %.10g rad^2/s)\n", st.linewidth_fwhm, st.s_phidot);
  } else {
    std::printf("Gamma_ST = n/a (alpha_sq not set)\n");
  }

  const auto v = effective_covariance(c.input);
  const auto validity = covariance_validity(v);
  std::printf("input covariance (q0, p0, qG, pG)%s:\n", c.input.covariance ? " [explicit]" : "");
  for (int i = 0; i < 4; ++i)
    std::printf("  % .10f % .10f % .10f % .10f\n", v(i, 0), v(i, 1), v(i, 2), v(i, 3));
  std::printf("covariance physical: %s (min eigenvalue %.3e)\n", validity.valid ? "yes" : "no",
              validity.min_eigenvalue);

  if (!opt.covariance_out.empty()) {
    RunManifest m("inspect", config_hash(c));
    m.param("covariance_out", opt.covariance_out);
    CsvWriter csv(opt.covariance_out, m.csv_header("quadrature variances, vacuum = 1/2", "c0,c1,c2,c3"),
                  "c0,c1,c2,c3");
    for (int i = 0; i < 4; ++i) csv.row({v(i, 0), v(i, 1), v(i, 2), v(i, 3)});
    csv.close();
    m.add_output(opt.covariance_out);
    m.write(opt.covariance_out);
  }
  return kOk;
}

int cmd_spectrum(const SpectrumOptions& opt, const GlobalOptions& global) {
  auto c = load_config(opt.config);
  apply_overrides(c, opt.squeeze);
  const ValidatedConfig cfg = validate_config(c).value();
  print_warnings(cfg);

  RunManifest m("spectrum", config_hash(c));
  record_grid(m, opt.grid);
  write_spectrum_csv(opt.out, cfg, opt.grid, m, global.threads);
  m.add_output(opt.out);
  m.write(opt.out);
  std::printf("wrote %d rows to %s (manifest %s)\n", opt.grid.points, opt.out.c_str(), m.hash().c_str());
  return kOk;
}

int cmd_sweep(const SweepOptions& opt, const GlobalOptions& global) {
  const auto base = load_config(opt.config);
  if (opt.count < 1) throw Error(ErrorCode::InvalidArgument, "--count must be at least 1");
  std::filesystem::create_directories(opt.out_dir);

  RunManifest m("sweep", config_hash(base));
  m.param("param", opt.param);
  m.param("from", opt.from);
  m.param("to", opt.to);
  m.param("count", static_cast<double>(opt.count));
  record_grid(m, opt.grid);

  for (int i = 0; i < opt.count; ++i) {
    const double value = opt.count == 1 ? opt.from : opt.from + (opt.to - opt.from) * i / (opt.count - 1);
    auto c = base;
    if (opt.param == "eta") c.eta = value;
    else if (opt.param == "tau") c.tau = value;
    else if (opt.param == "alpha_sq") c.alpha_sq = value;
    else if (opt.param == "r0_db") c.input.r0 = squeeze_from_db(value);
    else if (opt.param == "rg_db") c.input.rG = squeeze_from_db(value);
    else if (opt.param == "re_db") c.input.rE = squeeze_from_db(value);
    else if (opt.param == "r_s") {
      auto* ps = std::get_if<PhaseSensitive>(&c.amplifier);
      if (!ps) throw Error(ErrorCode::WrongVariant, "r_s sweeps need a phase_sensitive amplifier");
      ps->r_s = value;
    } else {
      throw Error(ErrorCode::InvalidArgument,
                  "unknown sweep parameter '" + opt.param + "' (eta, tau, alpha_sq, r0_db, rg_db, re_db, r_s)");
    }
    const ValidatedConfig cfg = validate_config(c).value();
    print_warnings(cfg);
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%03d.csv", opt.param.c_str(), i);
    const auto path = (std::filesystem::path(opt.out_dir) / name).string();
    write_spectrum_csv(path, cfg, opt.grid, m, global.threads);
    m.add_output(path);
    std::printf("%s = %.10g -> %s (config %s)\n", opt.param.c_str(), value, path.c_str(), config_hash(c).c_str());
  }
  m.write((std::filesystem::path(opt.out_dir) / "sweep").string());
  return kOk;
}

int cmd_simulate(const SimulateOptions& opt, const GlobalOptions& global) {
  const auto c = load_config(opt.config);
  const ValidatedConfig cfg = validate_config(c).value();
  print_warnings(cfg);

  SimPlan plan;
  plan.dt_div = opt.dt_div;
  plan.steps = opt.steps;
  plan.seed = resolve_seed(opt.seed);
  plan.stream = opt.stream;

  RunManifest m("simulate", config_hash(c));
  m.param("dt_div", static_cast<double>(plan.dt_div));
  m.param("steps", static_cast<double>(plan.steps));
  m.param("stream", static_cast<double>(plan.stream));
  m.set_seed(plan.seed);
  const std::string time_units = "t s, quadratures in sqrt(photons / s)";

  if (opt.startup) {
    m.param("mode", "classical startup");
    plan.mode = SimMode::ClassicalStartup;
    const auto ss = steady_state_amplitude(c.amplifier, cfg.eta());
    const auto res = simulate_classical_startup(c.amplifier, cfg.eta(), cfg.tau(), plan);
    const auto path = opt.out + "_startup.csv";
    CsvWriter csv(path, m.csv_header("k round trips, alpha_k in sqrt(photons)", "k,alpha_k"), "k,alpha_k");
    for (std::size_t k = 0; k < res.trajectory.size(); ++k) csv.row({static_cast<double>(k), res.trajectory[k]});
    csv.close();
    m.add_output(path);
    m.write(opt.out);
    std::printf("seed amplitude %.3e, converged at round trip %d: alpha = %.12f (alpha_ss %.12f)\n",
                res.seed_amplitude, res.converged_at, res.final_amplitude, ss.alpha_ss);
    return kOk;
  }

  check_plan(plan);
  if (opt.linewidth) {
    m.param("mode", "linewidth");
    m.param("runs", static_cast<double>(opt.runs));
    LinewidthOptions lw;
    lw.runs = opt.runs;
    lw.threads = global.threads;
    const auto res = estimate_linewidth(cfg, plan, lw);
    const auto path = opt.out + "_field_psd.csv";
    write_psd_csv(path, res.field_spectrum,
                  m.csv_header("omega rad/s offset from carrier, field PSD in s", "omega_rad_s,psd,stderr"));
    m.add_output(path);
    m.write(opt.out);
    std::printf("linewidth: fit fwhm %.6e rad/s vs 2 pi Gamma_ST %.6e rad/s, relative error %+.4f\n",
                res.fit.fwhm, res.fwhm_schawlow_townes, res.relative_error);
    std::printf("Gamma_ST T_run = %.2f, %d runs, phase step std %.3f rad, fit residual %.3f\n", res.gamma_t_run,
                res.runs, res.phase_step_std, res.fit.residual);
    return kOk;
  }

  m.param("mode", "linear fluctuations");
  const auto series = simulate_fluctuations(cfg, plan);
  const bool write_series = opt.series || !opt.psd;
  if (write_series) {
    const auto path = opt.out + (opt.binary ? "_series.bin" : "_series.csv");
    if (opt.binary) write_series_binary(path, series);
    else write_series_csv(path, series, m.csv_header(time_units, "t,q_out,p_out"));
    m.add_output(path);
  }
  if (opt.psd) {
    PsdOptions po;
    po.segment_len = static_cast<std::size_t>(std::max<std::int64_t>(256, plan.steps / 32));
    po.prewhiten_lag = 1;
    const double dt = plan.dt(cfg.tau());
    const double lo = 10.0 * 2.0 * std::numbers::pi / (static_cast<double>(po.segment_len) * dt);
    const double hi = 1.0 / cfg.tau();
    double rms[2];
    for (int qi = 0; qi < 2; ++qi) {
      const auto est = estimate_psd(series, qi ? Quadrature::Phase : Quadrature::Amplitude, po);
      const auto path = opt.out + (qi ? "_psd_p.csv" : "_psd_q.csv");
      write_psd_csv(path, est, m.csv_header("omega rad/s offset from carrier, PSD per rad/s", "omega_rad_s,psd,stderr"));
      m.add_output(path);
      const auto cmp = compare_bands(
          est,
          [&](double w) {
            const auto s = output_spectra(cfg, cfg.carrier_omega() + w);
            return qi ? s.spp : s.sqq;
          },
          lo, hi, 1.15, 20);
      rms[qi] = cmp.rms_rel_error;
    }
    std::printf("band RMS error vs analytic spectrum over [%.4g, %.4g] rad/s: q %.4f, p %.4f\n", lo, hi, rms[0],
                rms[1]);
  }
  m.write(opt.out);
  std::printf("simulated %lld steps (dt = %.6g s, seed %llu, manifest %s)\n", static_cast<long long>(plan.steps),
              plan.dt(cfg.tau()), static_cast<unsigned long long>(plan.seed), m.hash().c_str());
  return kOk;
}

int cmd_decompose(const DecomposeOptions& opt) {
  const auto d = decompose_phase_sensitive(opt.big_g, opt.small_g);
  std::printf("Gcal = %.12g\n", d.gain);
  std::printf("r = %.12g\n", d.squeeze);
  return kOk;
}

}  // namespace fbosc::cli
