#include "fbosc/lorentzian.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "fbosc/parallel.hpp"
#include "fbosc/spectra.hpp"

namespace fbosc {

LorentzianFit fit_lorentzian(const PsdEstimate& psd, double band_lo, double band_hi) {
  std::vector<double> x, y;
  for (std::size_t i = 0; i < psd.freqs.size(); ++i) {
    if (psd.freqs[i] >= band_lo && psd.freqs[i] <= band_hi) {
      x.push_back(psd.freqs[i]);
      y.push_back(psd.psd[i]);
    }
  }
  if (x.size() < 10) throw Error(ErrorCode::TooShort, "Lorentzian fit needs at least 10 bins in the band");
  if (*std::min_element(y.begin(), y.end()) <= 0.0)
    throw Error(ErrorCode::FitDiverged, "spectrum must be positive inside the fit band");

  // work in units where the data and frequency span are O(1)
  std::vector<double> sorted = y;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const double median = sorted[sorted.size() / 2];
  const std::size_t top = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
  const double y_max = y[top];
  if (y_max < 2.0 * median) throw Error(ErrorCode::FlatSpectrum, "no discernible peak in the fit band");
  const double x_scale = std::max(std::abs(band_lo), std::abs(band_hi));
  const double y_scale = y_max;
  const std::size_t n = x.size();
  Eigen::VectorXd xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = x[i] / x_scale;
    ys[i] = y[i] / y_scale;
  }

  // initial guess: floor from the band edges, width from the half-maximum crossings
  const double floor0 = std::min(ys[0], ys[n - 1]);
  const double half = floor0 + 0.5 * (1.0 - floor0);
  int above = 0;
  for (std::size_t i = 0; i < n; ++i) above += ys[i] >= half;
  const double spacing = (xs[n - 1] - xs[0]) / static_cast<double>(n - 1);
  double g = std::max(0.5 * above * spacing, spacing);
  Eigen::Vector3d p(std::max(1.0 - floor0, 1e-6) * g * g, g, floor0);

  auto residuals = [&](const Eigen::Vector3d& q) {
    Eigen::VectorXd r(n);
    for (std::size_t i = 0; i < n; ++i) r[i] = ys[i] - (q[0] / (xs[i] * xs[i] + q[1] * q[1]) + q[2]);
    return r;
  };

  double lambda = 1e-3;
  Eigen::VectorXd r = residuals(p);
  double cost = r.squaredNorm();
  int it = 0;
  bool converged = false;
  for (; it < 500 && !converged; ++it) {
    Eigen::MatrixXd jac(n, 3);
    for (std::size_t i = 0; i < n; ++i) {
      const double den = xs[i] * xs[i] + p[1] * p[1];
      jac(i, 0) = 1.0 / den;
      jac(i, 1) = -2.0 * p[0] * p[1] / (den * den);
      jac(i, 2) = 1.0;
    }
    const Eigen::Matrix3d jtj = jac.transpose() * jac;
    const Eigen::Vector3d jtr = jac.transpose() * r;
    bool accepted = false;
    while (!accepted && lambda < 1e12) {
      Eigen::Matrix3d a = jtj;
      a.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
      const Eigen::Vector3d step = a.ldlt().solve(jtr);
      const Eigen::Vector3d trial = p + step;
      if (trial[0] > 0.0 && trial[1] > 0.0 && step.allFinite()) {
        const Eigen::VectorXd r_trial = residuals(trial);
        const double c = r_trial.squaredNorm();
        if (c <= cost) {
          converged = step.cwiseAbs().cwiseQuotient(trial.cwiseAbs().cwiseMax(1e-12)).maxCoeff() < 1e-10 ||
                      cost - c <= 1e-14 * cost;
          p = trial;
          r = r_trial;
          cost = c;
          lambda = std::max(lambda / 10.0, 1e-15);
          accepted = true;
          continue;
        }
      }
      lambda *= 10.0;
    }
    if (!accepted) converged = true;  // no downhill step left: at a minimum
  }
  if (!p.allFinite() || !(p[1] > 0.0) || !(p[0] > 0.0) || !converged)
    throw Error(ErrorCode::FitDiverged, "Lorentzian least squares did not converge");

  LorentzianFit fit;
  fit.fwhm = 2.0 * p[1] * x_scale;
  fit.amplitude = p[0] * y_scale * x_scale * x_scale;
  fit.offset = p[2] * y_scale;
  fit.peak = fit.amplitude / (0.25 * fit.fwhm * fit.fwhm) + fit.offset;
  fit.residual = std::sqrt(cost / static_cast<double>(n)) * y_scale / fit.peak;
  fit.iterations = it;
  fit.bins = static_cast<int>(n);
  return fit;
}

double linewidth_alpha_sq(double eta, double tau, double run_time, double target) {
  // Gamma_ST = (1 - eta)^2 / (4 pi tau^2 alpha_sq)
  return (1.0 - eta) * (1.0 - eta) * run_time / (4.0 * std::numbers::pi * tau * tau * target);
}

namespace {

struct RunSpectrum {
  PsdEstimate est;
  double step_var_sum = 0.0;
  std::int64_t step_count = 0;
};

}  // namespace

LinewidthResult estimate_linewidth(const ValidatedConfig& cfg, const SimPlan& plan,
                                   const LinewidthOptions& options) {
  if (!(cfg.alpha_sq() > 0.0)) throw Error(ErrorCode::ZeroCarrier, "linewidth needs alpha_sq > 0");
  if (options.runs < 1) throw Error(ErrorCode::InvalidArgument, "runs must be >= 1");
  check_plan(plan);
  // the phase is read once per round trip: a boxcar over tau nulls the
  // neighbouring longitudinal modes at offsets 2 pi k / tau
  const std::int64_t per_trip = plan.dt_div;
  const std::int64_t trips = (plan.steps - plan.effective_warmup()) / per_trip;
  const std::int64_t block = trips / static_cast<std::int64_t>(options.decimated_len);
  if (block < 1) throw Error(ErrorCode::TooShort, "run is shorter than the decimated length");
  const std::int64_t kept = trips * per_trip;
  const double dt = plan.dt(cfg.tau());
  const double dt_dec = cfg.tau() * static_cast<double>(block);
  const double phase_scale = 1.0 / (std::sqrt(2.0 * cfg.alpha_sq()) * static_cast<double>(per_trip));

  auto run = [&](std::size_t r) {
    SimPlan sub = plan;
    sub.stream = plan.stream + static_cast<std::uint32_t>(r);
    std::vector<std::complex<double>> field;
    field.reserve(options.decimated_len);
    std::complex<double> acc = 0.0;
    std::int64_t in_block = 0, in_trip = 0;
    double p_sum = 0.0, prev_phi = 0.0;
    bool have_prev = false;
    RunSpectrum out;
    simulate_fluctuations(cfg, sub, [&](double, double p) {
      if (field.size() == options.decimated_len) return;
      p_sum += p;
      if (++in_trip < per_trip) return;
      const double phi = p_sum * phase_scale;
      p_sum = 0.0;
      in_trip = 0;
      if (have_prev) {
        out.step_var_sum += (phi - prev_phi) * (phi - prev_phi);
        ++out.step_count;
      }
      prev_phi = phi;
      have_prev = true;
      acc += std::polar(1.0, phi);
      if (++in_block == block) {
        field.push_back(acc / static_cast<double>(block));
        acc = 0.0;
        in_block = 0;
      }
    });
    PsdOptions popt;
    popt.segment_len = field.size();
    popt.window = Window::Hann;
    out.est = estimate_psd(field, dt_dec, popt);
    return out;
  };
  const auto spectra = parallel_map<RunSpectrum>(static_cast<std::size_t>(options.runs), run, options.threads);

  LinewidthResult result;
  result.runs = options.runs;
  result.field_spectrum = spectra.front().est;
  double var_sum = 0.0;
  std::int64_t var_count = 0;
  for (std::size_t r = 0; r < spectra.size(); ++r) {
    var_sum += spectra[r].step_var_sum;
    var_count += spectra[r].step_count;
    if (r == 0) continue;
    for (std::size_t k = 0; k < result.field_spectrum.psd.size(); ++k)
      result.field_spectrum.psd[k] += spectra[r].est.psd[k];
  }
  for (double& v : result.field_spectrum.psd) v /= static_cast<double>(options.runs);
  result.field_spectrum.n_segments = options.runs;
  for (double& e : result.field_spectrum.rel_stderr) e = 1.0 / std::sqrt(static_cast<double>(options.runs));
  result.phase_step_std = std::sqrt(var_sum / static_cast<double>(std::max<std::int64_t>(var_count, 1)));

  const auto st = schawlow_townes(cfg.eta(), cfg.tau(), cfg.alpha_sq());
  result.fwhm_schawlow_townes = 2.0 * std::numbers::pi * st.linewidth_fwhm;
  result.fwhm_plateau = frequency_noise_plateau(cfg.eta(), cfg.tau(), cfg.alpha_sq());
  result.gamma_t_run = st.linewidth_fwhm * dt * static_cast<double>(kept);
  const double nyquist = std::numbers::pi / dt_dec;
  const double band = std::min(options.band_in_fwhm * result.fwhm_schawlow_townes, nyquist);
  result.fit = fit_lorentzian(result.field_spectrum, -band, band);
  result.relative_error = result.fit.fwhm / result.fwhm_schawlow_townes - 1.0;
  return result;
}

}  // namespace fbosc
