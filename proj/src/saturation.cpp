#include "fbosc/saturation.hpp"

namespace fbosc {

TanhGain<double> tanh_gain(const AmplifierModel& model) {
  const auto* amp = std::get_if<SaturatingTanh>(&model);
  if (!amp)
    throw Error(ErrorCode::WrongVariant,
                std::string("expected saturating_tanh, got ") + std::string(amplifier_name(model)));
  if (!(amp->g0 > 0.0) || !(amp->a_inf > 0.0))
    throw Error(ErrorCode::InvalidAmplifier, "saturating_tanh needs g0 > 0 and a_inf > 0");
  return {amp->g0, amp->a_inf};
}

double evaluate_gain(const AmplifierModel& model, double x) { return tanh_gain(model)(x); }

SteadyState steady_state_amplitude(const AmplifierModel& model, double eta, double tol) {
  return steady_state_amplitude(tanh_gain(model), eta, tol);
}

double stability_margin(const AmplifierModel& model, double /*eta*/, double alpha) {
  return stability_margin(tanh_gain(model), alpha);
}

double zero_point_growth(const AmplifierModel& model, double eta) {
  return zero_point_growth(tanh_gain(model), eta);
}

std::vector<double> iterate_loop_map(const AmplifierModel& model, double eta, double alpha0, int n) {
  return iterate_loop_map(tanh_gain(model), eta, alpha0, n);
}

}  // namespace fbosc
