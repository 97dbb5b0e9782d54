#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fbosc {

enum class ErrorCode {
  // configuration
  EtaOutOfRange,
  NonPositiveTau,
  NegativeAlphaSq,
  NonFiniteParameter,
  InvalidAmplifier,
  GainBelowLoss,
  SqueezeExceedsRmax,
  UnsupportedSqueezeAngle,
  InvalidGrid,
  InvalidArgument,
  ConfigParse,
  // model evaluation
  WrongVariant,
  NoPositiveRoot,
  ToleranceNotMet,
  PoleFrequency,
  NonAmplifier,
  NotSymmetric,
  ZeroCarrier,
  // simulation and estimation
  InvalidPlan,
  UnstableLoop,
  NotConverged,
  TooShort,
  FitDiverged,
  FlatSpectrum,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fbosc
