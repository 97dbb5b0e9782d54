#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <string>
#include <type_traits>
#include <vector>

#include "fbosc/config.hpp"
#include "fbosc/parallel.hpp"

namespace fbosc {

inline constexpr double kPoleGuard = 1e-9;

/// Output response to the in-coupled (h0) and amplifier ancilla (hg) modes of
/// a phase-insensitive loop at absolute frequency omega.
template <typename Scalar = double>
struct InsensitiveTransfer {
  Scalar omega{};
  std::complex<Scalar> h0;
  std::complex<Scalar> hg;
};

/// Per-quadrature responses of a loop whose amplifier squeezes by r_s.
template <typename Scalar = double>
struct QuadTransfer {
  Scalar omega{};
  Scalar r_s{};
  std::complex<Scalar> h0q, hgq;
  std::complex<Scalar> h0p, hgp;
  /// Set by the near-resonance forms when |omega tau| is not small.
  std::optional<std::string> warning;
};

namespace detail {

template <typename Scalar>
void check_eta(Scalar eta) {
  if (!(eta > 0 && eta <= 1)) throw Error(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1]");
}

template <typename Scalar>
void check_squeeze(Scalar eta, Scalar r_s) {
  if (!(r_s >= 0)) throw Error(ErrorCode::InvalidAmplifier, "r_s must be >= 0");
  if (r_s > max_squeeze(static_cast<double>(eta)) + 1e-12)
    throw Error(ErrorCode::SqueezeExceedsRmax, "r_s exceeds -ln(eta)/2");
}

/// 1/eta - exp(2 r_s), computed without cancellation so it is exactly zero
/// at r_s = -ln(eta)/2 and never negative inside the admissible range.
template <typename Scalar>
Scalar squeeze_headroom(Scalar eta, Scalar r_s) {
  using std::expm1, std::log, std::max;
  return max(Scalar(0), -expm1(Scalar(2) * r_s + log(eta)) / eta);
}

/// Loop phase measured from the nearest resonance: theta = Omega tau = pi + u
/// (mod 2 pi) with u in [-pi, pi]. Every closed form below is written in u so
/// that near-carrier cancellations happen analytically rather than in e + 1.
template <typename Scalar>
struct LoopPhase {
  Scalar u;
  Scalar sin_half;  // sin(u / 2); |1 + exp(i theta)| = 2 |sin(u / 2)|
  Scalar cos_half;
};

template <typename Scalar>
LoopPhase<Scalar> loop_phase(Scalar omega, Scalar tau) {
  const Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  const Scalar u = std::remainder(omega * tau - std::numbers::pi_v<Scalar>, two_pi);
  return {u, std::sin(u / Scalar(2)), std::cos(u / Scalar(2))};
}

/// tan(theta / 2) = -cot(u / 2), the imaginary part of 1 - 2 / (1 + exp(i theta)).
template <typename Scalar>
Scalar half_tan(const LoopPhase<Scalar>& ph, Scalar guard) {
  if (std::abs(Scalar(2) * ph.sin_half) < guard)
    throw Error(ErrorCode::PoleFrequency, "frequency sits on a loop resonance exp(i Omega tau) = -1");
  return -ph.cos_half / ph.sin_half;
}

}  // namespace detail

/// h0 = (sqrt(eta) + e/sqrt(eta)) / (1 + e), hg = (1/sqrt(eta) - sqrt(eta)) / (1 + e)
/// with e = exp(i Omega tau), evaluated through 1/(1+e) = (1 - i tan(theta/2)) / 2.
template <typename Scalar>
InsensitiveTransfer<Scalar> transfer_insensitive(Scalar eta, Scalar tau, Scalar omega,
                                                 Scalar pole_guard = Scalar(kPoleGuard)) {
  detail::check_eta(eta);
  if (!(tau > 0)) throw Error(ErrorCode::NonPositiveTau, "tau must be positive");
  const Scalar t = detail::half_tan(detail::loop_phase(omega, tau), pole_guard);
  const Scalar s = std::sqrt(eta);
  const Scalar sum = (Scalar(1) / s + s) / Scalar(2);
  const Scalar diff = (Scalar(1) / s - s) / Scalar(2);
  return {omega, {sum, diff * t}, {diff, -diff * t}};
}

/// |a|^2 - |b|^2 evaluated as a difference of squares per component, which
/// stays accurate when both magnitudes are large and nearly equal.
template <typename Scalar>
Scalar modulus_sq_difference(std::complex<Scalar> a, std::complex<Scalar> b) {
  using std::abs;
  const Scalar re_a = abs(a.real()), re_b = abs(b.real());
  const Scalar im_a = abs(a.imag()), im_b = abs(b.imag());
  return (re_a - re_b) * (re_a + re_b) + (im_a - im_b) * (im_a + im_b);
}

/// |h0|^2 - |hg|^2 - 1, which vanishes for a bosonic output mode. Rounding h0
/// and hg to Scalar alone leaves about eps |h0|^2 ~ eps / (4 eta), so double
/// inputs are evaluated in long double (residual below 1e-12 down to eta ~ 1e-7).
template <typename Scalar>
Scalar commutator_residual(Scalar eta, Scalar tau, Scalar omega) {
  using Wide = std::conditional_t<std::is_same_v<Scalar, double>, long double, Scalar>;
  const auto tf = transfer_insensitive<Wide>(Wide(eta), Wide(tau), Wide(omega));
  return static_cast<Scalar>(modulus_sq_difference(tf.h0, tf.hg) - Wide(1));
}

/// Phase-quadrature responses only. Their denominator exp(2 r_s) + exp(i Omega tau)
/// vanishes only at r_s = 0, so this is defined on the q-channel resonances.
template <typename Scalar>
struct PhaseQuadratureTransfer {
  std::complex<Scalar> h0p, hgp;
};

template <typename Scalar>
PhaseQuadratureTransfer<Scalar> transfer_phase_quadrature(Scalar eta, Scalar tau, Scalar r_s,
                                                          Scalar omega,
                                                          Scalar pole_guard = Scalar(kPoleGuard)) {
  detail::check_eta(eta);
  detail::check_squeeze(eta, r_s);
  if (!(tau > 0)) throw Error(ErrorCode::NonPositiveTau, "tau must be positive");
  using C = std::complex<Scalar>;
  const auto ph = detail::loop_phase(omega, tau);
  const Scalar s = std::sqrt(eta);
  const Scalar headroom = detail::squeeze_headroom(eta, r_s);
  const Scalar ancilla = std::sqrt(headroom) * std::sqrt(Scalar(1) - eta);
  // 1 - cos u, exactly representable near the carrier
  const Scalar versine = Scalar(2) * ph.sin_half * ph.sin_half;
  const Scalar sin_u = std::sin(ph.u);
  // exp(2 r_s) + exp(i theta) and exp(i theta)/sqrt(eta) + exp(2 r_s) sqrt(eta)
  const C den(std::expm1(Scalar(2) * r_s) + versine, -sin_u);
  const C num(versine - eta * headroom, -sin_u);
  if (std::abs(den) < pole_guard)
    throw Error(ErrorCode::PoleFrequency, "frequency sits on a phase-quadrature pole");
  return {num / (s * den), ancilla / den};
}

/// Quadrature transfer functions of the phase-sensitive loop with the
/// insensitive gain pinned at exp(-r_s)/sqrt(eta). The q channel keeps the
/// resonances of the insensitive loop.
template <typename Scalar>
QuadTransfer<Scalar> transfer_phase_sensitive(Scalar eta, Scalar tau, Scalar r_s, Scalar omega,
                                              Scalar pole_guard = Scalar(kPoleGuard)) {
  detail::check_eta(eta);
  detail::check_squeeze(eta, r_s);
  const auto base = transfer_insensitive(eta, tau, omega, pole_guard);
  QuadTransfer<Scalar> out;
  out.omega = omega;
  out.r_s = r_s;
  out.h0q = base.h0;
  if (r_s == 0) {
    out.hgq = out.hgp = base.hg;
    out.h0p = base.h0;
    return out;
  }
  const Scalar s = std::sqrt(eta);
  const Scalar ancilla = std::sqrt(detail::squeeze_headroom(eta, r_s)) * std::sqrt(Scalar(1) - eta);
  // base.hg = (1/sqrt(eta) - sqrt(eta)) / (1 + e); rescale to the ancilla amplitude
  const Scalar hg_scale = Scalar(1) / s - s;
  out.hgq = hg_scale > 0 ? base.hg * (ancilla / hg_scale) : std::complex<Scalar>(0);
  const auto p = transfer_phase_quadrature(eta, tau, r_s, omega, pole_guard);
  out.h0p = p.h0p;
  out.hgp = p.hgp;
  return out;
}

/// Leading-order forms in omega tau about the carrier, omega an offset.
/// Sets warning when |omega tau| >= 0.1; throws PoleFrequency at omega = 0,
/// where the q channel diverges for every r_s.
template <typename Scalar>
QuadTransfer<Scalar> transfer_near_resonance(Scalar eta, Scalar tau, Scalar r_s, Scalar omega) {
  detail::check_eta(eta);
  detail::check_squeeze(eta, r_s);
  using C = std::complex<Scalar>;
  const Scalar x = omega * tau;
  const Scalar s = std::sqrt(eta);
  const Scalar headroom = detail::squeeze_headroom(eta, r_s);
  const Scalar ancilla = std::sqrt(headroom) * std::sqrt(Scalar(1) - eta);
  const Scalar e2r_m1 = std::expm1(Scalar(2) * r_s);
  const C ix(0, x);
  const C den_p = C(e2r_m1, -x);
  if (x == 0 || std::abs(den_p) == 0)
    throw Error(ErrorCode::PoleFrequency, "near-resonance forms are singular at omega = 0");

  QuadTransfer<Scalar> out;
  out.omega = omega;
  out.r_s = r_s;
  out.h0q = (Scalar(1) / s - s) / ix;
  out.hgq = -ancilla / ix;
  out.h0p = (C(-s * headroom, 0) - ix / s) / den_p;
  out.hgp = ancilla / den_p;
  if (std::abs(x) >= Scalar(0.1))
    out.warning = "|omega tau| = " + std::to_string(static_cast<double>(std::abs(x))) +
                  " is outside the near-resonance regime";
  return out;
}

/// Splits b = G a + g a^dag + (ancilla) into insensitive gain Gcal followed by
/// a squeezer r, with G = Gcal cosh r and g = Gcal sinh r.
template <typename Scalar = double>
struct PhaseSensitiveDecomposition {
  Scalar gain;     // Gcal = sqrt(G^2 - g^2)
  Scalar squeeze;  // r = atanh(g / G)
};

template <typename Scalar>
PhaseSensitiveDecomposition<Scalar> decompose_phase_sensitive(Scalar big_g, Scalar small_g) {
  if (!std::isfinite(big_g) || !std::isfinite(small_g) || small_g < 0 || !(big_g > small_g))
    throw Error(ErrorCode::NonAmplifier, "decomposition needs G > g >= 0");
  const Scalar gap = big_g - small_g;
  // atanh(g/G) = log1p(2g / (G - g)) / 2 keeps relative accuracy for small and near-unit g/G
  return {std::sqrt(gap * (big_g + small_g)), std::log1p(Scalar(2) * small_g / gap) / Scalar(2)};
}

/// Grid evaluation, ordered as the input frequencies.
template <typename Scalar>
std::vector<InsensitiveTransfer<Scalar>> transfer_insensitive(Scalar eta, Scalar tau,
                                                              const std::vector<Scalar>& omegas,
                                                              unsigned threads = 0) {
  return parallel_map<InsensitiveTransfer<Scalar>>(
      omegas.size(), [&](std::size_t i) { return transfer_insensitive(eta, tau, omegas[i]); },
      threads);
}

template <typename Scalar>
std::vector<QuadTransfer<Scalar>> transfer_phase_sensitive(Scalar eta, Scalar tau, Scalar r_s,
                                                           const std::vector<Scalar>& omegas,
                                                           unsigned threads = 0) {
  return parallel_map<QuadTransfer<Scalar>>(
      omegas.size(), [&](std::size_t i) { return transfer_phase_sensitive(eta, tau, r_s, omegas[i]); },
      threads);
}

/// Promotes an insensitive response to the quadrature form (r_s = 0).
template <typename Scalar>
QuadTransfer<Scalar> as_quadrature(const InsensitiveTransfer<Scalar>& tf) {
  QuadTransfer<Scalar> out;
  out.omega = tf.omega;
  out.r_s = 0;
  out.h0q = out.h0p = tf.h0;
  out.hgq = out.hgp = tf.hg;
  return out;
}

}  // namespace fbosc
