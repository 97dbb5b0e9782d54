#include <doctest.h>

#include <cmath>

#include "fbosc/saturation.hpp"
#include "fbosc/timedomain.hpp"

using namespace fbosc;

namespace {

// plain bisection on sqrt(eta) a_inf tanh(g0 x / a_inf) - x, independent of the solver
double bisect_tanh_root(double g0, double a_inf, double eta) {
  auto f = [&](double x) { return std::sqrt(eta) * a_inf * std::tanh(g0 * x / a_inf) - x; };
  double lo = 1e-9 * a_inf, hi = a_inf;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Odd, increasing, with a second gain step at |x| = 2: three fixed points at eta = 1.
struct TwoStepGain {
  double operator()(double x) const {
    return std::tanh(4.0 * x) + 2.0 * (std::tanh(8.0 * (x - 2.0)) + std::tanh(8.0 * (x + 2.0)));
  }
  double asymptote() const { return 5.0; }
};

}  // namespace

TEST_CASE("reference fixture g0 = 4, a_inf = 1, eta = 0.25") {
  const auto ss = steady_state_amplitude(TanhGain<>{4.0, 1.0}, 0.25);
  const double oracle = bisect_tanh_root(4.0, 1.0, 0.25);
  CHECK(ss.alpha_ss == doctest::Approx(oracle).epsilon(1e-10));
  CHECK(ss.alpha_ss == doctest::Approx(0.4788).epsilon(1e-3));
  CHECK(std::abs(ss.g_linear * 0.5 - 1.0) < 1e-10);
  CHECK(ss.contraction == doctest::Approx(0.166).epsilon(1e-2));
  CHECK(ss.residual < 1e-12);
  CHECK(ss.roots.size() == 1);
}

TEST_CASE("solver agrees with bisection across parameters") {
  for (double eta : {0.05, 0.25, 0.5, 0.9, 0.999}) {
    for (double g0 : {1.5, 3.0, 10.0, 100.0}) {
      if (g0 * std::sqrt(eta) <= 1.0) continue;
      for (double a_inf : {1e-3, 1.0, 1e4}) {
        CAPTURE(eta);
        CAPTURE(g0);
        CAPTURE(a_inf);
        const auto ss = steady_state_amplitude(TanhGain<>{g0, a_inf}, eta);
        CHECK(ss.alpha_ss == doctest::Approx(bisect_tanh_root(g0, a_inf, eta)).epsilon(1e-9));
        // property: the saturated gain exactly balances the out-coupler
        CHECK(std::abs(ss.g_linear * std::sqrt(eta) - 1.0) < 1e-9);
        // property: a tanh operating point is always contracting
        CHECK(ss.contraction > 0.0);
        CHECK(ss.contraction < 1.0);
      }
    }
  }
}

TEST_CASE("gain below loss has no operating point") {
  CHECK_THROWS_AS(steady_state_amplitude(TanhGain<>{1.9, 1.0}, 0.25), Error);
  try {
    steady_state_amplitude(TanhGain<>{2.0, 1.0}, 0.25);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoPositiveRoot);
  }
  CHECK(zero_point_growth(TanhGain<>{2.0, 1.0}, 0.25) == doctest::Approx(1.0));
  CHECK(zero_point_growth(TanhGain<>{4.0, 1.0}, 0.25) == doctest::Approx(2.0));
}

TEST_CASE("several operating points are all reported, lowest selected") {
  const auto ss = steady_state_amplitude(TwoStepGain{}, 1.0);
  REQUIRE(ss.roots.size() == 3);
  CHECK(ss.alpha_ss == ss.roots.front());
  CHECK(ss.roots[0] < ss.roots[1]);
  CHECK(ss.roots[1] < ss.roots[2]);
  for (double r : ss.roots) CHECK(std::abs(TwoStepGain{}(r) - r) < 1e-9);
  // the middle root is the unstable one
  CHECK(stability_margin(TwoStepGain{}, ss.roots[1]) > 1.0);
  CHECK(stability_margin(TwoStepGain{}, ss.roots[0]) < 1.0);
}

TEST_CASE("gain_slope falls back to a central difference") {
  struct NoSlope {
    double operator()(double x) const { return 2.0 * std::tanh(x); }
    double asymptote() const { return 2.0; }
  };
  const TanhGain<> exact{2.0, 2.0};
  for (double x : {0.0, 0.3, 1.0, 3.0}) CHECK(gain_slope(NoSlope{}, x) == doctest::Approx(exact.slope(x)).epsilon(1e-8));
}

TEST_CASE("model overloads dispatch on the variant") {
  const AmplifierModel model = SaturatingTanh{4.0, 1.0};
  CHECK(evaluate_gain(model, 0.1) == doctest::Approx(std::tanh(0.4)));
  CHECK(steady_state_amplitude(model, 0.25).alpha_ss == doctest::Approx(bisect_tanh_root(4, 1, 0.25)));
  CHECK_THROWS_AS(evaluate_gain(AmplifierModel{LinearInsensitive{2.0}}, 0.1), Error);
  try {
    tanh_gain(AmplifierModel{PhaseSensitive{}});
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongVariant);
  }
}

TEST_CASE("loop map iterates toward the fixed point") {
  const auto traj = iterate_loop_map(TanhGain<>{4.0, 1.0}, 0.25, 1e-6, 60);
  CHECK(traj.front() == 1e-6);
  CHECK(traj.back() == doctest::Approx(bisect_tanh_root(4, 1, 0.25)).epsilon(1e-12));
  for (std::size_t k = 1; k < traj.size(); ++k) CHECK(traj[k] >= traj[k - 1] - 1e-15);
}

TEST_CASE("classical startup converges from a tiny seed") {
  SimPlan plan;
  plan.dt_div = 16;
  plan.steps = 200 * 16;
  plan.seed = 7;
  const auto res = simulate_classical_startup(SaturatingTanh{4.0, 1.0}, 0.25, 1.0, plan);
  CHECK(res.converged_at > 0);
  CHECK(res.converged_at <= 200);
  CHECK(std::abs(res.final_amplitude - bisect_tanh_root(4, 1, 0.25)) < 1e-9);
  CHECK(res.seed_amplitude > 0.0);
  CHECK(res.seed_amplitude < 1e-4);

  plan.steps = 3 * 16;
  CHECK_THROWS_AS(simulate_classical_startup(SaturatingTanh{4.0, 1.0}, 0.25, 1.0, plan), Error);
  plan.seed_amplitude = 0.0;
  const auto silent = simulate_classical_startup(SaturatingTanh{4.0, 1.0}, 0.25, 1.0, plan);
  CHECK(silent.converged_at == 0);
  CHECK(silent.final_amplitude == 0.0);
}
