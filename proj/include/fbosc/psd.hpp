#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

#include "fbosc/timedomain.hpp"

namespace fbosc {

enum class Window { Hann, Rectangular };

struct PsdOptions {
  std::size_t segment_len = 0;  // 0 selects length / 8
  double overlap = 0.5;         // fraction of segment_len shared by neighbours
  Window window = Window::Hann;
  /// > 0: estimate the spectrum of x[n] - x[n - lag] and divide by
  /// 4 sin^2(omega lag dt / 2). Removes the leakage of a marginal pole at
  /// omega = 0; bins where the divisor vanishes are dropped.
  int prewhiten_lag = 0;
};

/// Double-sided, symmetrized PSD in the series' units^2 * s, normalized so a
/// white sequence of per-sample variance s2 has PSD s2 * dt. Real input is
/// stored for omega >= 0 only (the negative half is its mirror image);
/// complex input covers the full band in ascending frequency, with
/// exp(+i omega t) appearing at +omega.
struct PsdEstimate {
  std::vector<double> freqs;       // rad/s
  std::vector<double> psd;
  std::vector<double> rel_stderr;  // 1 / sqrt(n_segments) per bin
  int n_segments = 0;
  std::size_t segment_len = 0;
  double dt = 0.0;
  bool two_sided = false;    // true when negative frequencies are stored
  bool recolored = false;    // prewhitened then divided back
  double weighted_mean_square = 0.0;  // segment average of sum(w^2 x^2) / sum(w^2)
  double mean_square = 0.0;           // over the whole series
};

PsdEstimate estimate_psd(const std::vector<double>& x, double dt, const PsdOptions& options = {});
PsdEstimate estimate_psd(const std::vector<std::complex<double>>& x, double dt,
                         const PsdOptions& options = {});

enum class Quadrature { Amplitude, Phase };
PsdEstimate estimate_psd(const QuadTimeSeries& series, Quadrature which, const PsdOptions& options = {});

/// Integral of the PSD over the full band, d omega / (2 pi). Only defined for
/// estimates that were not recolored (InvalidArgument otherwise).
double psd_integral(const PsdEstimate& est);

/// psd_integral / weighted_mean_square, which is 1 up to rounding for any
/// series, or / mean_square, which is close to 1 only for stationary series.
double parseval_ratio(const PsdEstimate& est, bool window_weighted = true);

/// Averages of an estimate and a reference spectrum over log-spaced bands.
struct BandComparison {
  std::vector<double> center;     // rad/s, geometric mean of the band's bins
  std::vector<double> estimate;
  std::vector<double> reference;
  std::vector<double> rel_error;  // estimate / reference - 1
  std::vector<int> bins;
  double rms_rel_error = 0.0;
  double max_abs_rel_error = 0.0;
};

/// Bands start at omega_lo, close once they span a factor band_ratio and hold
/// at least min_bins bins, and stop at omega_hi. A short trailing band is
/// merged into its predecessor. TooShort when fewer than min_bins bins fall
/// in [omega_lo, omega_hi].
BandComparison compare_bands(const PsdEstimate& est, const std::function<double(double)>& reference,
                             double omega_lo, double omega_hi, double band_ratio = 1.15,
                             int min_bins = 6);

}  // namespace fbosc
