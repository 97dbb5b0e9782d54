#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "fbosc/errors.hpp"

namespace fbosc {

/// Quadrature ordering of the joint (in-coupled, ancillary) input state.
/// Every 4x4 covariance in the library is laid out in this order.
namespace quad {
inline constexpr int q0 = 0;
inline constexpr int p0 = 1;
inline constexpr int qG = 2;
inline constexpr int pG = 3;
}  // namespace quad

/// A(x) = a_inf * tanh(g0 * x / a_inf): odd, monotone, slope g0 at the
/// origin and saturating at +-a_inf.
struct SaturatingTanh {
  double g0 = 0.0;
  double a_inf = 0.0;
};

/// Phase-insensitive amplifier already linearized about its operating point.
struct LinearInsensitive {
  double g = 1.0;
};

/// Phase-insensitive gain followed by a noiseless squeezer of strength r_s.
struct PhaseSensitive {
  double g = 1.0;
  double r_s = 0.0;
  double phi_s = 0.0;
};

using AmplifierModel = std::variant<SaturatingTanh, LinearInsensitive, PhaseSensitive>;

std::string_view amplifier_name(const AmplifierModel& model);

/// Squeezing applied to the in-coupled (r0) and ancillary (rG) modes, then a
/// two-mode squeeze (rE) between them. An explicit covariance, when present,
/// replaces the one generated from (r0, rG, rE).
struct InputStateParams {
  double r0 = 0.0;
  double rG = 0.0;
  double rE = 0.0;
  std::optional<Eigen::Matrix4d> covariance;
};

struct OscillatorConfig {
  double eta = 1.0;       // out-coupler power reflectivity, (0, 1]
  double tau = 1.0;       // loop delay [s]
  double alpha_sq = 0.0;  // mean output photon flux [1/s]
  AmplifierModel amplifier = LinearInsensitive{};
  InputStateParams input;
  int carrier_index = 0;  // carrier at (2n + 1) pi / tau
};

struct ConfigIssue {
  ErrorCode code;
  std::string message;
};

struct ValidationResult;

/// A configuration that has passed every invariant check, together with the
/// quantities derived from it.
class ValidatedConfig {
 public:
  const OscillatorConfig& config() const noexcept { return cfg_; }
  double eta() const noexcept { return cfg_.eta; }
  double tau() const noexcept { return cfg_.tau; }
  double alpha_sq() const noexcept { return cfg_.alpha_sq; }

  /// |ln(eta)| / tau
  double kappa() const noexcept { return kappa_; }
  double carrier_omega() const noexcept { return carrier_omega_; }
  double r_max() const noexcept { return r_max_; }
  /// Linear gain seen by fluctuations once the loop has saturated.
  double loop_gain() const noexcept { return loop_gain_; }
  /// Squeeze parameter of a phase-sensitive amplifier, 0 otherwise.
  double squeeze() const noexcept { return squeeze_; }
  bool phase_sensitive() const noexcept {
    return std::holds_alternative<PhaseSensitive>(cfg_.amplifier);
  }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  bool operator==(const ValidatedConfig&) const = default;

 private:
  friend ValidationResult validate_config(const OscillatorConfig& cfg);

  OscillatorConfig cfg_;
  double kappa_ = 0.0;
  double carrier_omega_ = 0.0;
  double r_max_ = 0.0;
  double loop_gain_ = 1.0;
  double squeeze_ = 0.0;
  std::vector<std::string> warnings_;
};

struct ValidationResult {
  std::optional<ValidatedConfig> config;
  std::vector<ConfigIssue> errors;

  bool ok() const noexcept { return config.has_value(); }
  /// Throws the first recorded issue if validation failed.
  const ValidatedConfig& value() const;
};

ValidationResult validate_config(const OscillatorConfig& cfg);
ValidationResult validate_config(const ValidatedConfig& cfg);

inline double carrier_frequency(double tau, int carrier_index) {
  return (2.0 * carrier_index + 1.0) * std::numbers::pi / tau;
}

/// Largest squeeze a loop with reflectivity eta can sustain, -ln(eta)/2.
inline double max_squeeze(double eta) { return -0.5 * std::log(eta); }

/// Squeeze parameter for a quoted squeezing level: r = ln(10^(dB/20)).
inline double squeeze_from_db(double db) { return std::log(10.0) * db / 20.0; }

bool operator==(const OscillatorConfig& a, const OscillatorConfig& b);
bool operator==(const InputStateParams& a, const InputStateParams& b);
bool operator==(const SaturatingTanh& a, const SaturatingTanh& b);
bool operator==(const LinearInsensitive& a, const LinearInsensitive& b);
bool operator==(const PhaseSensitive& a, const PhaseSensitive& b);

// ---------------------------------------------------------------------------
// Frequency grids

struct FrequencyGrid {
  std::vector<double> values;  // rad/s
  bool absolute = false;       // false: offsets from the carrier
};

FrequencyGrid linear_grid(double lo, double hi, int points, bool absolute = false);
FrequencyGrid log_grid(double lo, double hi, int points, bool absolute = false);

/// Throws InvalidGrid for non-increasing entries and PoleFrequency when an
/// entry falls within pole_guard of exp(i Omega tau) = -1 (unless allowed).
void check_grid(const FrequencyGrid& grid, double tau, int carrier_index,
                bool allow_poles = false, double pole_guard = 1e-9);

/// Absolute angular frequencies for every grid entry.
std::vector<double> absolute_frequencies(const FrequencyGrid& grid, double tau,
                                         int carrier_index);

// ---------------------------------------------------------------------------
// JSON documents

OscillatorConfig parse_config_json(std::string_view text);
OscillatorConfig load_config(const std::string& path);
std::string config_to_json(const OscillatorConfig& cfg, int indent = 2);

/// Stable 64-bit FNV-1a digest of the canonical JSON form, as 16 hex digits.
std::string config_hash(const OscillatorConfig& cfg);
std::string fnv1a_hex(std::string_view bytes);

}  // namespace fbosc
