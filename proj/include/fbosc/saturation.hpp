#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <vector>

#include "fbosc/config.hpp"

namespace fbosc {

/// A memoryless amplifier response usable by the steady-state solver. The
/// curve must be odd, strictly increasing and saturate at +-asymptote().
/// slope() is optional; a central difference is used when it is missing.
template <typename F>
concept GainCurve = requires(const F& f, double x) {
  { f(x) } -> std::convertible_to<double>;
  { f.asymptote() } -> std::convertible_to<double>;
};

template <typename Scalar = double>
struct TanhGain {
  Scalar g0;
  Scalar a_inf;

  Scalar operator()(Scalar x) const { return a_inf * std::tanh(g0 * x / a_inf); }
  Scalar slope(Scalar x) const {
    const Scalar c = std::cosh(g0 * x / a_inf);
    return g0 / (c * c);
  }
  Scalar asymptote() const { return a_inf; }
};

template <GainCurve F>
double gain_slope(const F& gain, double x) {
  if constexpr (requires { gain.slope(x); }) {
    return gain.slope(x);
  } else {
    const double h = 1e-6 * std::max(1.0, std::abs(x));
    return (gain(x + h) - gain(x - h)) / (2.0 * h);
  }
}

struct SteadyState {
  double alpha_ss = 0.0;     // in-loop steady amplitude
  double g_linear = 0.0;     // A(alpha_ss) / alpha_ss
  double contraction = 0.0;  // alpha A'(alpha) / A(alpha) at alpha_ss
  double residual = 0.0;     // |sqrt(eta) A(alpha_ss) - alpha_ss|
  /// Every positive fixed point found while bracketing, ascending. More than
  /// one entry means the gain curve admits several operating points;
  /// alpha_ss is the lowest, which is the one reached from a small seed.
  std::vector<double> roots;
};

inline constexpr double kDefaultFixedPointTol = 1e-10;

/// x -> a_inf tanh(g0 x / a_inf); WrongVariant for non-saturating models.
double evaluate_gain(const AmplifierModel& model, double x);
TanhGain<double> tanh_gain(const AmplifierModel& model);

namespace detail {

template <GainCurve F>
double refine_root(const F& gain, double sqrt_eta, double lo, double hi, double tol) {
  auto f = [&](double a) { return sqrt_eta * gain(a) - a; };
  double f_lo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if ((f_mid > 0.0) == (f_lo > 0.0)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  // secant polish, kept inside the final bracket
  double x0 = lo, x1 = hi, f0 = f(lo), f1 = f(hi);
  for (int it = 0; it < 8 && f1 != f0; ++it) {
    const double x2 = x1 - f1 * (x1 - x0) / (f1 - f0);
    if (!(x2 >= std::min(lo, hi) && x2 <= std::max(lo, hi))) break;
    x0 = x1;
    f0 = f1;
    x1 = x2;
    f1 = f(x2);
    if (std::abs(f1) <= 0.01 * tol) break;
  }
  const double best = std::abs(f(x1)) <= std::abs(f(0.5 * (lo + hi))) ? x1 : 0.5 * (lo + hi);
  if (std::abs(f(best)) > tol)
    throw Error(ErrorCode::ToleranceNotMet, "fixed-point residual above tolerance");
  return best;
}

}  // namespace detail

/// All positive roots of sqrt(eta) A(alpha) = alpha on (0, asymptote sqrt(eta)].
template <GainCurve F>
std::vector<double> fixed_point_roots(const F& gain, double eta, double tol = kDefaultFixedPointTol) {
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1]");
  const double sqrt_eta = std::sqrt(eta);
  const double upper = gain.asymptote() * sqrt_eta * (1.0 + 1e-6);
  auto f = [&](double a) { return sqrt_eta * gain(a) - a; };

  constexpr int kScan = 2048;
  const double log_lo = std::log(upper * 1e-12), log_hi = std::log(upper);
  std::vector<double> roots;
  double prev_x = std::exp(log_lo);
  double prev_f = f(prev_x);
  for (int i = 1; i <= kScan; ++i) {
    const double x = i == kScan ? upper : std::exp(log_lo + (log_hi - log_lo) * i / kScan);
    const double fx = f(x);
    if (fx == 0.0) {
      roots.push_back(x);
    } else if (prev_f != 0.0 && (fx > 0.0) != (prev_f > 0.0)) {
      roots.push_back(detail::refine_root(gain, sqrt_eta, prev_x, x, tol));
    }
    prev_x = x;
    prev_f = fx;
  }
  return roots;
}

template <GainCurve F>
double stability_margin(const F& gain, double alpha) {
  if (!(alpha > 0.0)) throw Error(ErrorCode::InvalidArgument, "stability margin needs alpha > 0");
  return alpha * gain_slope(gain, alpha) / gain(alpha);
}

template <GainCurve F>
SteadyState steady_state_amplitude(const F& gain, double eta, double tol = kDefaultFixedPointTol) {
  const double sqrt_eta = std::sqrt(eta);
  if (!(sqrt_eta * gain_slope(gain, 0.0) > 1.0))
    throw Error(ErrorCode::NoPositiveRoot, "small-signal gain does not exceed the out-coupling loss");
  SteadyState ss;
  ss.roots = fixed_point_roots(gain, eta, tol);
  if (ss.roots.empty()) throw Error(ErrorCode::NoPositiveRoot, "no positive fixed point bracketed");
  ss.alpha_ss = ss.roots.front();
  ss.g_linear = gain(ss.alpha_ss) / ss.alpha_ss;
  ss.contraction = stability_margin(gain, ss.alpha_ss);
  ss.residual = std::abs(sqrt_eta * gain(ss.alpha_ss) - ss.alpha_ss);
  return ss;
}

/// Per-round-trip growth sqrt(eta) A'(0) of an infinitesimal seed. Values
/// above one mean the empty loop is unstable and oscillation starts.
template <GainCurve F>
double zero_point_growth(const F& gain, double eta) {
  return std::sqrt(eta) * gain_slope(gain, 0.0);
}

/// |alpha_{k+1}| = sqrt(eta) |A(alpha_k)| for k = 0..n.
template <GainCurve F>
std::vector<double> iterate_loop_map(const F& gain, double eta, double alpha0, int n) {
  if (alpha0 < 0.0) throw Error(ErrorCode::InvalidArgument, "alpha0 must be >= 0");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(std::max(n, 0)) + 1);
  const double sqrt_eta = std::sqrt(eta);
  double a = alpha0;
  out.push_back(a);
  for (int k = 0; k < n; ++k) {
    a = sqrt_eta * std::abs(gain(a));
    out.push_back(a);
  }
  return out;
}

// AmplifierModel overloads; all require the SaturatingTanh variant.
SteadyState steady_state_amplitude(const AmplifierModel& model, double eta,
                                   double tol = kDefaultFixedPointTol);
double stability_margin(const AmplifierModel& model, double eta, double alpha);
double zero_point_growth(const AmplifierModel& model, double eta);
std::vector<double> iterate_loop_map(const AmplifierModel& model, double eta, double alpha0, int n);

}  // namespace fbosc
