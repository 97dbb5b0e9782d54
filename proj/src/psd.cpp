#include "fbosc/psd.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace fbosc {

namespace {

std::vector<double> make_window(std::size_t n, Window w) {
  std::vector<double> out(n, 1.0);
  if (w == Window::Hann) {
    // periodic Hann, exact for 50% overlap
    for (std::size_t i = 0; i < n; ++i)
      out[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(n));
  }
  return out;
}

struct Segmentation {
  std::size_t len = 0;
  std::size_t hop = 0;
  int count = 0;
};

Segmentation plan_segments(std::size_t length, const PsdOptions& options) {
  Segmentation s;
  s.len = options.segment_len ? options.segment_len : length / 8;
  if (s.len < 4 || s.len > length)
    throw Error(ErrorCode::TooShort, "series of length " + std::to_string(length) +
                                         " cannot hold a segment of " + std::to_string(s.len));
  if (!(options.overlap >= 0.0 && options.overlap < 1.0))
    throw Error(ErrorCode::InvalidArgument, "overlap must lie in [0, 1)");
  s.hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(s.len * (1.0 - options.overlap))));
  s.count = static_cast<int>((length - s.len) / s.hop + 1);
  return s;
}

template <typename T>
std::vector<T> difference(const std::vector<T>& x, int lag) {
  if (lag <= 0) return x;
  if (static_cast<std::size_t>(lag) >= x.size()) throw Error(ErrorCode::TooShort, "series shorter than prewhitening lag");
  std::vector<T> y(x.size() - lag);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i + lag] - x[i];
  return y;
}

/// Averaged |FFT|^2 * dt / sum(w^2) over segments, full length-M spectrum.
template <typename T>
std::vector<double> welch_average(const std::vector<T>& x, double dt, const Segmentation& seg,
                                  Window window, double& weighted_ms) {
  const auto w = make_window(seg.len, window);
  double w2 = 0.0;
  for (double v : w) w2 += v * v;
  Eigen::FFT<double> fft;
  std::vector<double> acc(seg.len, 0.0);
  std::vector<std::complex<double>> buf(seg.len), spec;
  weighted_ms = 0.0;
  for (int s = 0; s < seg.count; ++s) {
    const std::size_t off = static_cast<std::size_t>(s) * seg.hop;
    double seg_ms = 0.0;
    for (std::size_t i = 0; i < seg.len; ++i) {
      buf[i] = std::complex<double>(x[off + i]) * w[i];
      seg_ms += std::norm(buf[i]);
    }
    weighted_ms += seg_ms / w2;
    fft.fwd(spec, buf);
    for (std::size_t k = 0; k < seg.len; ++k) acc[k] += std::norm(spec[k]);
  }
  const double scale = dt / (w2 * seg.count);
  for (double& v : acc) v *= scale;
  weighted_ms /= seg.count;
  return acc;
}

template <typename T>
double mean_square(const std::vector<T>& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(std::complex<double>(v));
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

double bin_frequency(std::size_t k, std::size_t m, double dt) {
  return 2.0 * std::numbers::pi * static_cast<double>(k) / (static_cast<double>(m) * dt);
}

/// Divides by 4 sin^2(omega lag dt / 2); returns false where that vanishes.
bool recolor(double& value, double omega, int lag, double dt) {
  const double s = std::sin(0.5 * omega * lag * dt);
  const double gain = 4.0 * s * s;
  if (gain < 1e-20) return false;
  value /= gain;
  return true;
}

template <typename T>
PsdEstimate estimate_impl(const std::vector<T>& x, double dt, const PsdOptions& options, bool complex_input) {
  if (!(dt > 0.0)) throw Error(ErrorCode::InvalidArgument, "dt must be positive");
  const auto y = difference(x, options.prewhiten_lag);
  const auto seg = plan_segments(y.size(), options);
  PsdEstimate est;
  est.dt = dt;
  est.segment_len = seg.len;
  est.n_segments = seg.count;
  est.two_sided = complex_input;
  est.recolored = options.prewhiten_lag > 0;
  est.mean_square = mean_square(x);
  const auto full = welch_average(y, dt, seg, options.window, est.weighted_mean_square);
  const double stderr_rel = 1.0 / std::sqrt(static_cast<double>(seg.count));

  auto emit = [&](double omega, double value) {
    if (est.recolored && !recolor(value, omega, options.prewhiten_lag, dt)) return;
    est.freqs.push_back(omega);
    est.psd.push_back(value);
    est.rel_stderr.push_back(stderr_rel);
  };
  const std::size_t m = seg.len;
  if (complex_input) {
    // negative frequencies first: bins m/2+1 .. m-1 map to -(m - k)
    for (std::size_t k = m / 2 + 1; k < m; ++k) emit(-bin_frequency(m - k, m, dt), full[k]);
    for (std::size_t k = 0; k <= m / 2; ++k) emit(bin_frequency(k, m, dt), full[k]);
  } else {
    for (std::size_t k = 0; k <= m / 2; ++k) emit(bin_frequency(k, m, dt), full[k]);
  }
  return est;
}

}  // namespace

PsdEstimate estimate_psd(const std::vector<double>& x, double dt, const PsdOptions& options) {
  return estimate_impl(x, dt, options, false);
}

PsdEstimate estimate_psd(const std::vector<std::complex<double>>& x, double dt, const PsdOptions& options) {
  return estimate_impl(x, dt, options, true);
}

PsdEstimate estimate_psd(const QuadTimeSeries& series, Quadrature which, const PsdOptions& options) {
  return estimate_psd(which == Quadrature::Amplitude ? series.q_out : series.p_out, series.dt, options);
}

double psd_integral(const PsdEstimate& est) {
  if (est.recolored) throw Error(ErrorCode::InvalidArgument, "a recolored estimate has no Parseval identity");
  if (est.freqs.empty()) return 0.0;
  const double bin = 2.0 * std::numbers::pi / (static_cast<double>(est.segment_len) * est.dt);
  double sum = 0.0;
  if (est.two_sided) {
    for (double v : est.psd) sum += v;
  } else {
    const std::size_t m = est.segment_len;
    for (std::size_t i = 0; i < est.psd.size(); ++i) {
      // DC and, for even m, Nyquist appear once; every other bin has a mirror
      const bool single = i == 0 || (m % 2 == 0 && i == m / 2);
      sum += (single ? 1.0 : 2.0) * est.psd[i];
    }
  }
  return sum * bin / (2.0 * std::numbers::pi);
}

double parseval_ratio(const PsdEstimate& est, bool window_weighted) {
  const double ms = window_weighted ? est.weighted_mean_square : est.mean_square;
  if (!(ms > 0.0)) throw Error(ErrorCode::InvalidArgument, "series has zero power");
  return psd_integral(est) / ms;
}

BandComparison compare_bands(const PsdEstimate& est, const std::function<double(double)>& reference,
                             double omega_lo, double omega_hi, double band_ratio, int min_bins) {
  if (!(omega_lo > 0.0) || !(omega_hi > omega_lo) || !(band_ratio > 1.0) || min_bins < 1)
    throw Error(ErrorCode::InvalidArgument,
                "band comparison needs 0 < omega_lo < omega_hi, ratio > 1, min_bins >= 1");
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < est.freqs.size(); ++i)
    if (est.freqs[i] >= omega_lo && est.freqs[i] <= omega_hi) idx.push_back(i);
  if (idx.size() < static_cast<std::size_t>(min_bins))
    throw Error(ErrorCode::TooShort, "fewer than min_bins bins inside the comparison band");

  std::vector<std::pair<std::size_t, std::size_t>> bands;  // [begin, end) into idx
  std::size_t begin = 0;
  for (std::size_t j = 0; j < idx.size(); ++j) {
    const double start = est.freqs[idx[begin]];
    const std::size_t count = j - begin + 1;
    if (count >= static_cast<std::size_t>(min_bins) && est.freqs[idx[j]] >= start * band_ratio) {
      bands.emplace_back(begin, j + 1);
      begin = j + 1;
    }
  }
  if (begin < idx.size()) {
    if (!bands.empty() && idx.size() - begin < static_cast<std::size_t>(min_bins))
      bands.back().second = idx.size();
    else
      bands.emplace_back(begin, idx.size());
  }

  BandComparison out;
  double sum_sq = 0.0;
  for (const auto& [b, e] : bands) {
    double est_sum = 0.0, ref_sum = 0.0, log_f = 0.0;
    for (std::size_t j = b; j < e; ++j) {
      const double f = est.freqs[idx[j]];
      est_sum += est.psd[idx[j]];
      ref_sum += reference(f);
      log_f += std::log(f);
    }
    const double n = static_cast<double>(e - b);
    const double err = est_sum / ref_sum - 1.0;
    out.center.push_back(std::exp(log_f / n));
    out.estimate.push_back(est_sum / n);
    out.reference.push_back(ref_sum / n);
    out.rel_error.push_back(err);
    out.bins.push_back(static_cast<int>(e - b));
    sum_sq += err * err;
    out.max_abs_rel_error = std::max(out.max_abs_rel_error, std::abs(err));
  }
  out.rms_rel_error = std::sqrt(sum_sq / static_cast<double>(bands.size()));
  return out;
}

}  // namespace fbosc
