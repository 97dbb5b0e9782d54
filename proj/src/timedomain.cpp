#include "fbosc/timedomain.hpp"

#include <cmath>
#include <complex>

#include "fbosc/rng.hpp"
#include "fbosc/saturation.hpp"

namespace fbosc {

namespace {

constexpr double kOverflowGuard = 1e150;

// Stream ids reserved for the startup seed so it never aliases loop noise.
constexpr std::uint32_t kStartupStreamBase = 0x80000000u;

}  // namespace

void check_plan(const SimPlan& plan) {
  if (plan.dt_div < 8) throw Error(ErrorCode::InvalidPlan, "dt_div must be >= 8");
  if (plan.warmup >= 0 && plan.warmup < 10LL * plan.dt_div)
    throw Error(ErrorCode::InvalidPlan, "warmup must cover at least 10 round trips");
  if (!(plan.noise_scale >= 0.0) || !std::isfinite(plan.noise_scale))
    throw Error(ErrorCode::InvalidPlan, "noise_scale must be finite and >= 0");
  if (plan.steps <= plan.effective_warmup())
    throw Error(ErrorCode::TooShort, "steps must exceed the warmup of " +
                                         std::to_string(plan.effective_warmup()));
}

StartupResult simulate_classical_startup(const AmplifierModel& model, double eta, double tau,
                                         const SimPlan& plan, double tol) {
  const auto gain = tanh_gain(model);
  if (!(eta > 0.0 && eta <= 1.0)) throw Error(ErrorCode::EtaOutOfRange, "eta must lie in (0, 1]");
  if (!(tau > 0.0)) throw Error(ErrorCode::NonPositiveTau, "tau must be positive");
  if (plan.dt_div < 8) throw Error(ErrorCode::InvalidPlan, "dt_div must be >= 8");
  if (!(plan.seed_amplitude >= 0.0)) throw Error(ErrorCode::InvalidPlan, "seed amplitude must be >= 0");

  const std::int64_t round_trips = plan.steps / plan.dt_div;
  const double sqrt_eta = std::sqrt(eta);
  const auto z = CounterNormals(plan.seed, kStartupStreamBase | plan.stream)(0);
  // complex Gaussian with E|alpha|^2 = seed_amplitude^2
  std::complex<double> alpha = plan.seed_amplitude * std::complex<double>(z[0], z[1]) / std::sqrt(2.0);

  StartupResult out;
  out.seed_amplitude = std::abs(alpha);
  out.trajectory.push_back(std::abs(alpha));
  auto residual = [&](double a) { return std::abs(sqrt_eta * gain(a) - a); };
  if (std::abs(alpha) == 0.0 || residual(std::abs(alpha)) <= tol) out.converged_at = 0;
  for (std::int64_t k = 1; k <= round_trips && out.converged_at < 0; ++k) {
    const double a = std::abs(alpha);
    alpha = sqrt_eta * gain(a) * (alpha / a);
    const double next = std::abs(alpha);
    out.trajectory.push_back(next);
    if (residual(next) <= tol) out.converged_at = static_cast<int>(k);
  }
  out.final_amplitude = out.trajectory.back();
  if (out.converged_at < 0)
    throw Error(ErrorCode::NotConverged, "startup did not reach the fixed point in " +
                                             std::to_string(round_trips) + " round trips");
  return out;
}

Eigen::Matrix<double, 4, Eigen::Dynamic> generate_input_noise(const InputCovariance& v, double dt,
                                                              std::uint64_t seed, std::uint32_t stream,
                                                              std::int64_t count) {
  const Eigen::Matrix4d shape = noise_shaping_factor(v) / std::sqrt(dt);
  const CounterNormals normals(seed, stream);
  Eigen::Matrix<double, 4, Eigen::Dynamic> out(4, count);
  for (std::int64_t k = 0; k < count; ++k) {
    const auto z = normals(static_cast<std::uint64_t>(k));
    out.col(k) = shape * Eigen::Vector4d(z[0], z[1], z[2], z[3]);
  }
  return out;
}

void simulate_fluctuations(const ValidatedConfig& cfg, const SimPlan& plan, const SampleSink& sink) {
  check_plan(plan);
  const int n = plan.dt_div;
  const double eta = cfg.eta();
  const double dt = plan.dt(cfg.tau());
  const double r_s = cfg.squeeze();
  const double gain = std::exp(-r_s) / std::sqrt(eta);
  const double added = std::sqrt(std::max(0.0, gain * gain - 1.0));
  const double squeeze = std::exp(r_s);
  const double refl = std::sqrt(eta);
  const double trans = std::sqrt(1.0 - eta);
  const Eigen::Matrix4d shape =
      noise_shaping_factor(effective_covariance(cfg.config().input)) * (plan.noise_scale / std::sqrt(dt));
  const CounterNormals normals(plan.seed, plan.stream);

  std::vector<double> q_line(static_cast<std::size_t>(n), 0.0);
  std::vector<double> p_line(static_cast<std::size_t>(n), 0.0);
  const std::int64_t warmup = plan.effective_warmup();
  for (std::int64_t k = 0; k < plan.steps; ++k) {
    const auto z = normals(static_cast<std::uint64_t>(k));
    const Eigen::Vector4d in = shape * Eigen::Vector4d(z[0], z[1], z[2], z[3]);
    const std::size_t slot = static_cast<std::size_t>(k % n);
    const double q_in = -q_line[slot];
    const double p_in = -p_line[slot];
    const double q_minus = squeeze * (gain * q_in + added * in[quad::qG]);
    const double p_minus = (gain * p_in - added * in[quad::pG]) / squeeze;
    q_line[slot] = -refl * q_minus + trans * in[quad::q0];
    p_line[slot] = -refl * p_minus + trans * in[quad::p0];
    const double q_out = trans * q_minus + refl * in[quad::q0];
    const double p_out = trans * p_minus + refl * in[quad::p0];
    if (!(std::abs(q_line[slot]) < kOverflowGuard) || !(std::abs(p_line[slot]) < kOverflowGuard))
      throw Error(ErrorCode::UnstableLoop, "loop state left the overflow guard at step " + std::to_string(k));
    if (k >= warmup) sink(q_out, p_out);
  }
}

QuadTimeSeries simulate_fluctuations(const ValidatedConfig& cfg, const SimPlan& plan) {
  check_plan(plan);
  QuadTimeSeries out;
  out.dt = plan.dt(cfg.tau());
  out.config_hash = config_hash(cfg.config());
  const auto kept = static_cast<std::size_t>(plan.steps - plan.effective_warmup());
  out.q_out.reserve(kept);
  out.p_out.reserve(kept);
  simulate_fluctuations(cfg, plan, [&](double q, double p) {
    out.q_out.push_back(q);
    out.p_out.push_back(p);
  });
  return out;
}

}  // namespace fbosc
