#include "fbosc/config.hpp"

#include <algorithm>
#include <complex>
#include <sstream>

namespace fbosc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EtaOutOfRange: return "EtaOutOfRange";
    case ErrorCode::NonPositiveTau: return "NonPositiveTau";
    case ErrorCode::NegativeAlphaSq: return "NegativeAlphaSq";
    case ErrorCode::NonFiniteParameter: return "NonFiniteParameter";
    case ErrorCode::InvalidAmplifier: return "InvalidAmplifier";
    case ErrorCode::GainBelowLoss: return "GainBelowLoss";
    case ErrorCode::SqueezeExceedsRmax: return "SqueezeExceedsRmax";
    case ErrorCode::UnsupportedSqueezeAngle: return "UnsupportedSqueezeAngle";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ConfigParse: return "ConfigParse";
    case ErrorCode::WrongVariant: return "WrongVariant";
    case ErrorCode::NoPositiveRoot: return "NoPositiveRoot";
    case ErrorCode::ToleranceNotMet: return "ToleranceNotMet";
    case ErrorCode::PoleFrequency: return "PoleFrequency";
    case ErrorCode::NonAmplifier: return "NonAmplifier";
    case ErrorCode::NotSymmetric: return "NotSymmetric";
    case ErrorCode::ZeroCarrier: return "ZeroCarrier";
    case ErrorCode::InvalidPlan: return "InvalidPlan";
    case ErrorCode::UnstableLoop: return "UnstableLoop";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::FitDiverged: return "FitDiverged";
    case ErrorCode::FlatSpectrum: return "FlatSpectrum";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

std::string_view amplifier_name(const AmplifierModel& model) {
  struct Visitor {
    std::string_view operator()(const SaturatingTanh&) const { return "saturating_tanh"; }
    std::string_view operator()(const LinearInsensitive&) const { return "linear_insensitive"; }
    std::string_view operator()(const PhaseSensitive&) const { return "phase_sensitive"; }
  };
  return std::visit(Visitor{}, model);
}

bool operator==(const SaturatingTanh& a, const SaturatingTanh& b) {
  return a.g0 == b.g0 && a.a_inf == b.a_inf;
}
bool operator==(const LinearInsensitive& a, const LinearInsensitive& b) { return a.g == b.g; }
bool operator==(const PhaseSensitive& a, const PhaseSensitive& b) {
  return a.g == b.g && a.r_s == b.r_s && a.phi_s == b.phi_s;
}
bool operator==(const InputStateParams& a, const InputStateParams& b) {
  if (a.r0 != b.r0 || a.rG != b.rG || a.rE != b.rE) return false;
  if (a.covariance.has_value() != b.covariance.has_value()) return false;
  return !a.covariance || *a.covariance == *b.covariance;
}
bool operator==(const OscillatorConfig& a, const OscillatorConfig& b) {
  return a.eta == b.eta && a.tau == b.tau && a.alpha_sq == b.alpha_sq &&
         a.amplifier == b.amplifier && a.input == b.input &&
         a.carrier_index == b.carrier_index;
}

const ValidatedConfig& ValidationResult::value() const {
  if (config) return *config;
  if (errors.empty()) throw Error(ErrorCode::ConfigParse, "validation produced no config");
  throw Error(errors.front().code, errors.front().message);
}

namespace {

std::string fmt_double(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

ValidationResult validate_config(const OscillatorConfig& cfg) {
  ValidationResult result;
  auto fail = [&](ErrorCode code, std::string msg) {
    result.errors.push_back({code, std::move(msg)});
  };

  const bool eta_ok = std::isfinite(cfg.eta) && cfg.eta > 0.0 && cfg.eta <= 1.0;
  if (!eta_ok) fail(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1], got " + fmt_double(cfg.eta));
  if (!std::isfinite(cfg.tau) || cfg.tau <= 0.0)
    fail(ErrorCode::NonPositiveTau, "tau must be positive, got " + fmt_double(cfg.tau));
  if (!std::isfinite(cfg.alpha_sq))
    fail(ErrorCode::NonFiniteParameter, "alpha_sq is not finite");
  else if (cfg.alpha_sq < 0.0)
    fail(ErrorCode::NegativeAlphaSq, "alpha_sq must be >= 0, got " + fmt_double(cfg.alpha_sq));

  const auto& in = cfg.input;
  if (!std::isfinite(in.r0) || !std::isfinite(in.rG) || !std::isfinite(in.rE))
    fail(ErrorCode::NonFiniteParameter, "input squeeze parameters must be finite");
  if (in.covariance && !in.covariance->allFinite())
    fail(ErrorCode::NonFiniteParameter, "input covariance must be finite");

  const double r_max = eta_ok ? max_squeeze(cfg.eta) : 0.0;
  double loop_gain = eta_ok ? 1.0 / std::sqrt(cfg.eta) : 1.0;
  double squeeze = 0.0;
  std::vector<std::string> warnings;

  if (const auto* tanh_amp = std::get_if<SaturatingTanh>(&cfg.amplifier)) {
    if (!(tanh_amp->g0 > 0.0) || !(tanh_amp->a_inf > 0.0) || !std::isfinite(tanh_amp->g0) ||
        !std::isfinite(tanh_amp->a_inf)) {
      fail(ErrorCode::InvalidAmplifier, "saturating_tanh needs finite g0 > 0 and a_inf > 0");
    } else if (eta_ok && tanh_amp->g0 <= 1.0 / std::sqrt(cfg.eta)) {
      fail(ErrorCode::GainBelowLoss, "small-signal gain g0 = " + fmt_double(tanh_amp->g0) +
                                         " does not exceed 1/sqrt(eta) = " +
                                         fmt_double(1.0 / std::sqrt(cfg.eta)));
    }
  } else if (const auto* lin = std::get_if<LinearInsensitive>(&cfg.amplifier)) {
    if (!std::isfinite(lin->g) || lin->g < 1.0) {
      fail(ErrorCode::InvalidAmplifier, "linear gain must be >= 1, got " + fmt_double(lin->g));
    } else if (eta_ok && std::abs(lin->g * std::sqrt(cfg.eta) - 1.0) > 1e-9) {
      warnings.push_back("linear gain " + fmt_double(lin->g) +
                         " differs from the saturated loop gain 1/sqrt(eta); using 1/sqrt(eta)");
    }
  } else if (const auto* ps = std::get_if<PhaseSensitive>(&cfg.amplifier)) {
    if (!std::isfinite(ps->g) || ps->g < 1.0 || !std::isfinite(ps->r_s) || ps->r_s < 0.0) {
      fail(ErrorCode::InvalidAmplifier, "phase_sensitive needs g >= 1 and r_s >= 0");
    } else if (eta_ok && ps->r_s > r_max + 1e-12) {
      fail(ErrorCode::SqueezeExceedsRmax, "r_s = " + fmt_double(ps->r_s) +
                                              " exceeds r_max = " + fmt_double(r_max));
    } else if (eta_ok) {
      squeeze = std::min(ps->r_s, r_max);
      loop_gain = std::exp(-squeeze) / std::sqrt(cfg.eta);
      if (std::abs(ps->g - loop_gain) > 1e-9 * loop_gain)
        warnings.push_back("phase-insensitive gain " + fmt_double(ps->g) +
                           " differs from the saturated value exp(-r_s)/sqrt(eta); using the latter");
    }
    if (ps->phi_s != 0.0)
      fail(ErrorCode::UnsupportedSqueezeAngle, "only phi_s = 0 is supported");
  }

  if (!result.errors.empty()) return result;

  ValidatedConfig v;
  v.cfg_ = cfg;
  v.kappa_ = -std::log(cfg.eta) / cfg.tau;
  v.carrier_omega_ = carrier_frequency(cfg.tau, cfg.carrier_index);
  v.r_max_ = r_max;
  v.loop_gain_ = loop_gain;
  v.squeeze_ = squeeze;
  v.warnings_ = std::move(warnings);
  result.config = std::move(v);
  return result;
}

ValidationResult validate_config(const ValidatedConfig& cfg) {
  ValidationResult result;
  result.config = cfg;
  return result;
}

FrequencyGrid linear_grid(double lo, double hi, int points, bool absolute) {
  if (points < 1 || !(hi >= lo)) throw Error(ErrorCode::InvalidGrid, "linear grid needs points >= 1 and hi >= lo");
  FrequencyGrid grid{std::vector<double>(static_cast<std::size_t>(points)), absolute};
  for (int i = 0; i < points; ++i)
    grid.values[i] = points == 1 ? lo : lo + (hi - lo) * i / (points - 1);
  return grid;
}

FrequencyGrid log_grid(double lo, double hi, int points, bool absolute) {
  if (points < 1 || !(lo > 0.0) || !(hi >= lo))
    throw Error(ErrorCode::InvalidGrid, "log grid needs 0 < lo <= hi and points >= 1");
  FrequencyGrid grid{std::vector<double>(static_cast<std::size_t>(points)), absolute};
  const double a = std::log(lo), b = std::log(hi);
  for (int i = 0; i < points; ++i)
    grid.values[i] = points == 1 ? lo : std::exp(a + (b - a) * i / (points - 1));
  return grid;
}

std::vector<double> absolute_frequencies(const FrequencyGrid& grid, double tau, int carrier_index) {
  std::vector<double> out(grid.values);
  if (!grid.absolute) {
    const double carrier = carrier_frequency(tau, carrier_index);
    for (double& w : out) w += carrier;
  }
  return out;
}

void check_grid(const FrequencyGrid& grid, double tau, int carrier_index, bool allow_poles,
                double pole_guard) {
  if (grid.values.empty()) throw Error(ErrorCode::InvalidGrid, "empty frequency grid");
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    if (!std::isfinite(grid.values[i]))
      throw Error(ErrorCode::InvalidGrid, "grid entry is not finite");
    if (i > 0 && !(grid.values[i] > grid.values[i - 1]))
      throw Error(ErrorCode::InvalidGrid, "grid must be strictly increasing");
  }
  if (allow_poles) return;
  for (double omega : absolute_frequencies(grid, tau, carrier_index)) {
    if (std::abs(1.0 + std::polar(1.0, omega * tau)) < pole_guard)
      throw Error(ErrorCode::PoleFrequency,
                  "grid entry " + fmt_double(omega) + " rad/s sits on a loop resonance");
  }
}

}  // namespace fbosc
