#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fbosc/config.hpp"
#include "fbosc/gaussian_states.hpp"

namespace fbosc {

enum class SimMode { ClassicalStartup, LinearFluctuations };

/// Discretization of one simulation run. The delay line holds dt_div samples,
/// so dt = tau / dt_div exactly.
struct SimPlan {
  int dt_div = 16;
  std::int64_t steps = 1 << 20;
  std::uint64_t seed = 1;
  std::int64_t warmup = -1;  // < 0 selects 10 * dt_div
  SimMode mode = SimMode::LinearFluctuations;
  std::uint32_t stream = 0;     // independent trajectories share a seed, differ here
  double noise_scale = 1.0;     // 0 silences every input
  double seed_amplitude = 1e-6; // classical startup: RMS of the complex seed

  double dt(double tau) const { return tau / dt_div; }
  std::int64_t effective_warmup() const { return warmup < 0 ? 10LL * dt_div : warmup; }
};

/// Throws InvalidPlan for dt_div < 8 or warmup < 10 dt_div, TooShort when
/// nothing is left after the warmup.
void check_plan(const SimPlan& plan);

struct QuadTimeSeries {
  std::vector<double> q_out;
  std::vector<double> p_out;
  double dt = 0.0;
  std::string config_hash;
};

struct StartupResult {
  std::vector<double> trajectory;  // |alpha_k| per round trip, k = 0..
  int converged_at = -1;           // first round trip within tol of the fixed point
  double final_amplitude = 0.0;
  double seed_amplitude = 0.0;
};

/// Iterates alpha_{k+1} = sqrt(eta) A(|alpha_k|) alpha_k / |alpha_k| once per
/// round trip from a complex Gaussian seed of RMS plan.seed_amplitude drawn
/// from plan.seed. plan.steps / plan.dt_div round trips are allowed.
/// Converged means |sqrt(eta) A(alpha) - alpha| <= tol; a zero seed is
/// converged at k = 0. Throws NotConverged otherwise.
StartupResult simulate_classical_startup(const AmplifierModel& model, double eta, double tau,
                                         const SimPlan& plan, double tol = 1e-10);

/// Receives each retained output sample (q_out, p_out) in time order.
using SampleSink = std::function<void(double q, double p)>;

/// Linearized loop at baseband about the carrier. Per step of dt:
///   q_in = -q_plus[k - N]                          (carrier phase folded in)
///   q_minus = S (G q_in + sqrt(G^2 - 1) qG)        S = e^{r_s}, G = e^{-r_s}/sqrt(eta)
///   p_minus = (G p_in - sqrt(G^2 - 1) pG) / S
///   q_plus = -sqrt(eta) q_minus + sqrt(1 - eta) q0
///   q_out = sqrt(1 - eta) q_minus + sqrt(eta) q0   (same for p)
/// with (q0, p0, qG, pG) drawn per step as L z / sqrt(dt), L L^T = covariance.
/// Throws UnstableLoop if the state leaves the overflow guard.
void simulate_fluctuations(const ValidatedConfig& cfg, const SimPlan& plan, const SampleSink& sink);
QuadTimeSeries simulate_fluctuations(const ValidatedConfig& cfg, const SimPlan& plan);

/// The per-step input noise quadruples used by the simulator, one column per
/// step: L z / sqrt(dt) with z from (seed, stream, index).
Eigen::Matrix<double, 4, Eigen::Dynamic> generate_input_noise(const InputCovariance& v, double dt,
                                                              std::uint64_t seed, std::uint32_t stream,
                                                              std::int64_t count);

}  // namespace fbosc
