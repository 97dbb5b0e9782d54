#include "fbosc/spectra.hpp"

#include <cmath>
#include <numbers>

namespace fbosc {

namespace {

double sq(double x) { return x * x; }

QuadratureSpectra finish(double omega, double sqq, double spp) {
  QuadratureSpectra out;
  out.omega = omega;
  out.sqq = sqq;
  out.spp = spp;
  out.product = sqq * spp;
  return out;
}

/// sin(u/2) for Omega tau = pi + u, guarded against the loop resonance.
double resonance_sine(double omega, double tau) {
  if (!(tau > 0.0)) throw Error(ErrorCode::NonPositiveTau, "tau must be positive");
  const auto ph = detail::loop_phase(omega, tau);
  if (std::abs(2.0 * ph.sin_half) < kPoleGuard)
    throw Error(ErrorCode::PoleFrequency, "frequency sits on a loop resonance exp(i Omega tau) = -1");
  return ph.sin_half;
}

void require_eta(double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1]");
}

}  // namespace

SpectralBounds uncertainty_bounds(const QuadTransfer<double>& tf, bool cross_available,
                                  const InputCovariance& v) {
  SpectralBounds b;
  const double q_scale = std::abs(tf.h0q) * std::abs(tf.hgq);
  const double p_scale = std::abs(tf.h0p) * std::abs(tf.hgp);
  b.insensitive = q_scale * p_scale;
  if (cross_available) {
    const double q_factor =
        std::sqrt(v(quad::q0, quad::q0) * v(quad::qG, quad::qG)) - std::abs(v(quad::q0, quad::qG));
    const double p_factor =
        std::sqrt(v(quad::p0, quad::p0) * v(quad::pG, quad::pG)) - std::abs(v(quad::p0, quad::pG));
    b.general = 4.0 * q_scale * p_scale * q_factor * p_factor;
  }
  return b;
}

SpectralBounds uncertainty_bounds(const InsensitiveTransfer<double>& tf, bool cross_available,
                                  const InputCovariance& v) {
  return uncertainty_bounds(as_quadrature(tf), cross_available, v);
}

QuadratureSpectra output_spectra_general(const QuadTransfer<double>& tf, const InputCovariance& v) {
  using quad::p0, quad::pG, quad::q0, quad::qG;
  const double sqq = std::norm(tf.h0q) * v(q0, q0) + std::norm(tf.hgq) * v(qG, qG) +
                     2.0 * std::real(tf.h0q * std::conj(tf.hgq)) * v(q0, qG);
  const double spp = std::norm(tf.h0p) * v(p0, p0) + std::norm(tf.hgp) * v(pG, pG) -
                     2.0 * std::real(tf.h0p * std::conj(tf.hgp)) * v(p0, pG);
  QuadratureSpectra out = finish(tf.omega, sqq, spp);
  // q_out = h0q q0 + hgq qG, p_out = h0p p0 - hgp pG
  out.sqp_cross = tf.h0q * std::conj(tf.h0p) * v(q0, p0) - tf.h0q * std::conj(tf.hgp) * v(q0, pG) +
                  tf.hgq * std::conj(tf.h0p) * v(qG, p0) - tf.hgq * std::conj(tf.hgp) * v(qG, pG);
  out.bounds = uncertainty_bounds(tf, true, v);
  return out;
}

QuadratureSpectra output_spectra_general(const InsensitiveTransfer<double>& tf,
                                         const InputCovariance& v) {
  return output_spectra_general(as_quadrature(tf), v);
}

QuadratureSpectra output_spectra_vacuum_closed_form(double eta, double tau, double omega) {
  require_eta(eta);
  // cos^2(Omega tau / 2) = sin^2(u / 2)
  const double sh = resonance_sine(omega, tau);
  const double s = std::sqrt(eta);
  const double value = sq(s - 1.0 / s) / (4.0 * sh * sh) + 0.5;
  QuadratureSpectra out = finish(omega, value, value);
  out.bounds = uncertainty_bounds(transfer_insensitive(eta, tau, omega), false, InputCovariance::Identity() * 0.5);
  return out;
}

QuadratureSpectra output_spectra_sqz_epr_near_carrier(double eta, double tau, double omega,
                                                      const InputStateParams& p) {
  require_eta(eta);
  const double x = omega * tau;
  if (x == 0.0) throw Error(ErrorCode::PoleFrequency, "near-carrier forms are singular at omega = 0");
  const double s = std::sqrt(eta);
  const double h0_sq = sq((1.0 / s - s) / x);
  const double scale = 0.5 * std::exp(-p.rE) * h0_sq;
  return finish(omega, scale * (std::exp(2.0 * p.r0) + std::exp(2.0 * p.rG)),
                scale * (std::exp(-2.0 * p.r0) + std::exp(-2.0 * p.rG)));
}

QuadratureSpectra output_spectra_epr_exact(double eta, double tau, double omega, double r_e) {
  require_eta(eta);
  // tan(Omega tau / 2) = -cot(u / 2), sec^2(Omega tau / 2) = 1 / sin^2(u / 2)
  const double sh = resonance_sine(omega, tau);
  const double ch = detail::loop_phase(omega, tau).cos_half;
  const double sh2 = sh * sh;
  const double tan2 = ch * ch / sh2;
  const double value = std::exp(r_e) / (4.0 * eta) +
                       0.25 * std::exp(-r_e) * ((1.0 / eta - 2.0) * tan2 + eta / sh2);
  return finish(omega, value, value);
}

QuadratureSpectra output_spectra_phase_sensitive(double eta, double tau, double r_s, double omega,
                                                 const InputCovariance& v) {
  return output_spectra_general(transfer_phase_sensitive(eta, tau, r_s, omega), v);
}

QuadratureSpectra output_spectra_phase_sensitive_vacuum(double eta, double tau, double r_s,
                                                        double omega) {
  const auto tf = transfer_phase_sensitive(eta, tau, r_s, omega);
  const auto base = transfer_insensitive(eta, tau, omega);
  // (1 - eta e^{2 r_s}) / (1 - eta)
  const double ratio = eta < 1.0 ? eta * detail::squeeze_headroom(eta, r_s) / (1.0 - eta) : 0.0;
  const double sqq = 0.5 * std::norm(base.h0) + 0.5 * ratio * std::norm(base.hg);
  const double spp = 0.5 * std::norm(tf.h0p) + 0.5 * std::norm(tf.hgp);
  QuadratureSpectra out = finish(omega, sqq, spp);
  out.bounds = uncertainty_bounds(tf, false, InputCovariance::Identity() * 0.5);
  return out;
}

QuadratureSpectra output_spectra_near_resonance(double eta, double tau, double r_s, double omega) {
  require_eta(eta);
  detail::check_squeeze(eta, r_s);
  const double x2 = sq(omega * tau);
  if (x2 == 0.0) throw Error(ErrorCode::PoleFrequency, "near-resonance forms are singular at omega = 0");
  const double deficit = eta * detail::squeeze_headroom(eta, r_s);  // 1 - eta e^{2 r_s}
  const double loss = 1.0 - eta;
  const double sqq = (sq(loss) + deficit * loss) / (2.0 * eta * x2);
  const double spp = (sq(deficit) + x2 + deficit * loss) / (2.0 * eta * (sq(std::expm1(2.0 * r_s)) + x2));
  return finish(omega, sqq, spp);
}

FrequencyNoisePoint frequency_noise_spectrum(double spp, double omega, double alpha_sq) {
  if (!(alpha_sq > 0.0)) throw Error(ErrorCode::ZeroCarrier, "frequency noise needs alpha_sq > 0");
  return {omega, omega * omega * spp / (2.0 * alpha_sq)};
}

SchawlowTownes schawlow_townes(double eta, double tau, double alpha_sq, double n_th) {
  require_eta(eta);
  if (!(alpha_sq > 0.0)) throw Error(ErrorCode::ZeroCarrier, "Schawlow-Townes needs alpha_sq > 0");
  const double s = sq(1.0 - eta) / (2.0 * tau * tau * alpha_sq) * (1.0 + 2.0 * n_th);
  return {s, s / (2.0 * std::numbers::pi)};
}

SchawlowTownes schawlow_townes_log_form(double eta, double tau, double alpha_sq, double n_th) {
  require_eta(eta);
  if (!(alpha_sq > 0.0)) throw Error(ErrorCode::ZeroCarrier, "Schawlow-Townes needs alpha_sq > 0");
  const double s = sq(std::log(eta)) / (2.0 * tau * tau * alpha_sq) * (1.0 + 2.0 * n_th);
  return {s, s / (2.0 * std::numbers::pi)};
}

double frequency_noise_plateau(double eta, double tau, double alpha_sq, double omega_tau) {
  const double omega = omega_tau / tau;
  const double spp = output_spectra_vacuum_closed_form(eta, tau, carrier_frequency(tau, 0) + omega).spp;
  return frequency_noise_spectrum(spp, omega, alpha_sq).s_phidot;
}

QuadratureSpectra output_spectra(const ValidatedConfig& cfg, double omega) {
  const InputCovariance v = effective_covariance(cfg.config().input);
  if (cfg.phase_sensitive())
    return output_spectra_general(transfer_phase_sensitive(cfg.eta(), cfg.tau(), cfg.squeeze(), omega), v);
  return output_spectra_general(transfer_insensitive(cfg.eta(), cfg.tau(), omega), v);
}

std::vector<QuadratureSpectra> output_spectra(const ValidatedConfig& cfg,
                                              const std::vector<double>& omegas, unsigned threads) {
  return parallel_map<QuadratureSpectra>(
      omegas.size(), [&](std::size_t i) { return output_spectra(cfg, omegas[i]); }, threads);
}

}  // namespace fbosc
