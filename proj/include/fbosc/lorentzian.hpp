#pragma once

#include "fbosc/psd.hpp"
#include "fbosc/timedomain.hpp"

namespace fbosc {

/// psd(omega) ~ amplitude / (omega^2 + (fwhm/2)^2) + offset
struct LorentzianFit {
  double fwhm = 0.0;       // rad/s
  double peak = 0.0;       // model value at omega = 0
  double amplitude = 0.0;
  double offset = 0.0;
  double residual = 0.0;   // RMS of (data - model) / peak over the band
  int iterations = 0;
  int bins = 0;
};

/// Levenberg-Marquardt least squares over band_lo <= omega <= band_hi.
/// Throws TooShort below 10 bins, FlatSpectrum when the band shows no peak
/// above twice its median, FitDiverged when the iteration fails.
LorentzianFit fit_lorentzian(const PsdEstimate& psd, double band_lo, double band_hi);

struct LinewidthOptions {
  int runs = 12;                         // independent trajectories averaged
  std::size_t decimated_len = 1 << 14;   // field samples per run after block averaging
  double band_in_fwhm = 8.0;             // fit over |omega| <= band_in_fwhm * expected fwhm
  unsigned threads = 0;
};

struct LinewidthResult {
  LorentzianFit fit;
  double fwhm_schawlow_townes = 0.0;  // 2 pi Gamma_ST, rad/s
  double fwhm_plateau = 0.0;          // exact near-carrier frequency-noise level, rad/s
  double relative_error = 0.0;        // fit.fwhm / fwhm_schawlow_townes - 1
  double gamma_t_run = 0.0;           // Gamma_ST times the retained run length
  double phase_step_std = 0.0;        // std of the phase change per round trip, rad
  int runs = 0;
  PsdEstimate field_spectrum;         // averaged over runs, two-sided
};

/// Simulates options.runs trajectories (streams plan.stream + i), forms the
/// field exp(i phi) with phi = p_out / (sqrt(2) |alpha|) averaged over each
/// round trip, block-averages it to decimated_len samples, averages the Hann periodograms and fits a
/// Lorentzian. Needs alpha_sq > 0.
LinewidthResult estimate_linewidth(const ValidatedConfig& cfg, const SimPlan& plan,
                                   const LinewidthOptions& options = {});

/// alpha_sq giving Gamma_ST * run_time = target for a vacuum-fed loop.
double linewidth_alpha_sq(double eta, double tau, double run_time, double target = 30.0);

}  // namespace fbosc
