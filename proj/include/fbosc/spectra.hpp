#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "fbosc/config.hpp"
#include "fbosc/gaussian_states.hpp"
#include "fbosc/transfer.hpp"

namespace fbosc {

// All spectra are symmetrized and double-sided; vacuum is 1/2 per quadrature.

struct SpectralBounds {
  double heisenberg = 0.25;
  double insensitive = 0.0;            // |h0 hg|^2, state independent
  std::optional<double> general;       // uses the input auto- and cross-spectra
};

struct QuadratureSpectra {
  double omega = 0.0;
  double sqq = 0.0;
  double spp = 0.0;
  std::optional<std::complex<double>> sqp_cross;
  double product = 0.0;
  SpectralBounds bounds;
};

struct FrequencyNoisePoint {
  double omega = 0.0;
  double s_phidot = 0.0;  // rad^2/s^2 per (rad/s), double-sided
};

struct SchawlowTownes {
  double s_phidot = 0.0;        // rad^2/s
  double linewidth_fwhm = 0.0;  // Hz, s_phidot / (2 pi)
};

/// Bounds for a quadrature response and input covariance. The insensitive
/// bound is |h0q hgq| |h0p hgp|, which reduces to |h0|^2 (|h0|^2 - 1) for a
/// phase-insensitive loop. The general bound is
/// 4 |h0q hgq| |h0p hgp| (sqrt(v_q0 v_qG) - |v_q0qG|)(sqrt(v_p0 v_pG) - |v_p0pG|).
SpectralBounds uncertainty_bounds(const QuadTransfer<double>& tf, bool cross_available,
                                  const InputCovariance& v);
SpectralBounds uncertainty_bounds(const InsensitiveTransfer<double>& tf, bool cross_available,
                                  const InputCovariance& v);

/// sqq = |h0q|^2 v_q0 + |hgq|^2 v_qG + 2 Re(h0q conj(hgq)) v_q0qG,
/// spp = |h0p|^2 v_p0 + |hgp|^2 v_pG - 2 Re(h0p conj(hgp)) v_p0pG.
QuadratureSpectra output_spectra_general(const QuadTransfer<double>& tf, const InputCovariance& v);
QuadratureSpectra output_spectra_general(const InsensitiveTransfer<double>& tf, const InputCovariance& v);

/// (sqrt(eta) - 1/sqrt(eta))^2 / (4 cos^2(Omega tau / 2)) + 1/2 for both quadratures.
QuadratureSpectra output_spectra_vacuum_closed_form(double eta, double tau, double omega);

/// Near-carrier squeezed/EPR spectra, omega an offset:
/// sqq = e^-rE (e^2r0 + e^2rG) |h0|^2 / 2 and spp with negated r0, rG,
/// where |h0| = (1/sqrt(eta) - sqrt(eta)) / |omega tau|.
QuadratureSpectra output_spectra_sqz_epr_near_carrier(double eta, double tau, double omega,
                                                      const InputStateParams& params);

/// Two-mode squeezed input, both quadratures:
/// e^rE / (4 eta) + e^-rE / 4 [(1/eta - 2) tan^2(Omega tau/2) + eta sec^2(Omega tau/2)].
QuadratureSpectra output_spectra_epr_exact(double eta, double tau, double omega, double r_e);

/// Composition through the phase-sensitive quadrature response.
QuadratureSpectra output_spectra_phase_sensitive(double eta, double tau, double r_s, double omega,
                                                 const InputCovariance& v);

/// Vacuum-input closed form of the phase-sensitive loop:
/// sqq = |H0|^2/2 + (1 - eta e^2r)/(1 - eta) |HG|^2/2, spp = |H0p|^2/2 + |HGp|^2/2.
/// At eta = 1 the ratio is 0/0 but multiplies HG = 0, so the term is dropped.
QuadratureSpectra output_spectra_phase_sensitive_vacuum(double eta, double tau, double r_s,
                                                        double omega);

/// Leading order in omega tau about the carrier with vacuum inputs, omega an offset:
/// sqq ~ [(1-eta)^2 + (1 - eta e^2r)(1-eta)] / (2 eta tau^2 omega^2),
/// spp ~ [(1 - eta e^2r)^2 + (omega tau)^2 + (1 - eta e^2r)(1-eta)] / (2 eta [(e^2r - 1)^2 + (omega tau)^2]).
QuadratureSpectra output_spectra_near_resonance(double eta, double tau, double r_s, double omega);

/// omega^2 spp / (2 alpha_sq). ZeroCarrier when alpha_sq <= 0.
FrequencyNoisePoint frequency_noise_spectrum(double spp, double omega, double alpha_sq);

/// (1 - eta)^2 / (2 tau^2 alpha_sq) (1 + 2 n_th), linewidth = s / (2 pi).
SchawlowTownes schawlow_townes(double eta, double tau, double alpha_sq, double n_th = 0.0);
/// The cavity-linewidth form (ln eta)^2 / (2 tau^2 alpha_sq) (1 + 2 n_th).
SchawlowTownes schawlow_townes_log_form(double eta, double tau, double alpha_sq, double n_th = 0.0);

inline constexpr double kPlateauOmegaTau = 1e-4;

/// omega^2 spp / (2 alpha_sq) of the exact vacuum spectrum at offset
/// omega = omega_tau / tau, the flat near-carrier level of the frequency noise.
double frequency_noise_plateau(double eta, double tau, double alpha_sq,
                               double omega_tau = kPlateauOmegaTau);

/// Spectra for a validated config at absolute frequency omega. Phase-
/// insensitive amplifiers use the insensitive response, phase-sensitive ones
/// the quadrature response; the input covariance comes from the config.
QuadratureSpectra output_spectra(const ValidatedConfig& cfg, double omega);
std::vector<QuadratureSpectra> output_spectra(const ValidatedConfig& cfg,
                                              const std::vector<double>& omegas,
                                              unsigned threads = 0);

}  // namespace fbosc
