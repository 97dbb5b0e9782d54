#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fbosc/lorentzian.hpp"
#include "fbosc/spectra.hpp"

using namespace fbosc;

namespace {

PsdEstimate lorentzian_estimate(double fwhm, double peak, double floor, double noise, unsigned seed) {
  PsdEstimate est;
  est.two_sided = true;
  est.dt = 1.0;
  est.segment_len = 801;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, noise);
  const double g = fwhm / 2;
  for (int k = -400; k <= 400; ++k) {
    const double w = 0.01 * k;
    est.freqs.push_back(w);
    est.psd.push_back((peak * g * g / (w * w + g * g) + floor) * (1.0 + nd(rng)));
  }
  return est;
}

}  // namespace

TEST_CASE("exact Lorentzian is recovered") {
  const auto est = lorentzian_estimate(0.3, 5.0, 0.1, 0.0, 1);
  const auto fit = fit_lorentzian(est, -4.0, 4.0);
  CHECK(fit.fwhm == doctest::Approx(0.3).epsilon(1e-8));
  CHECK(fit.peak == doctest::Approx(5.1).epsilon(1e-8));
  CHECK(fit.offset == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(fit.residual < 1e-10);
  CHECK(fit.bins == 801);
}

TEST_CASE("noisy Lorentzian is recovered within its scatter") {
  for (unsigned seed = 1; seed <= 5; ++seed) {
    const auto est = lorentzian_estimate(0.5, 1.0, 0.0, 0.1, seed);
    const auto fit = fit_lorentzian(est, -4.0, 4.0);
    CHECK(fit.fwhm == doctest::Approx(0.5).epsilon(0.05));
  }
}

TEST_CASE("fit failures are typed") {
  const auto est = lorentzian_estimate(0.3, 5.0, 0.1, 0.0, 1);
  try {
    fit_lorentzian(est, -0.02, 0.02);
    FAIL("expected TooShort");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooShort);
  }
  auto flat = est;
  for (double& v : flat.psd) v = 1.0;
  try {
    fit_lorentzian(flat, -4.0, 4.0);
    FAIL("expected FlatSpectrum");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FlatSpectrum);
  }
}

TEST_CASE("alpha_sq helper targets the requested Gamma * T") {
  const double eta = 0.97, tau = 1.0, run = 1e5;
  const double a2 = linewidth_alpha_sq(eta, tau, run, 30.0);
  CHECK(schawlow_townes(eta, tau, a2).linewidth_fwhm * run == doctest::Approx(30.0));
}

TEST_CASE("end-to-end linewidth on a short run") {
  OscillatorConfig c;
  c.eta = 0.97;
  c.tau = 1.0;
  c.amplifier = LinearInsensitive{1.0 / std::sqrt(0.97)};
  SimPlan plan;
  plan.dt_div = 8;
  plan.steps = 1 << 20;
  plan.seed = 3;
  const double run = static_cast<double>(plan.steps - plan.effective_warmup()) * plan.dt(1.0);
  c.alpha_sq = linewidth_alpha_sq(c.eta, c.tau, run);
  const auto cfg = validate_config(c).value();
  LinewidthOptions opt;
  opt.runs = 8;
  opt.decimated_len = 1 << 12;
  const auto res = estimate_linewidth(cfg, plan, opt);
  CHECK(res.gamma_t_run == doctest::Approx(30.0).epsilon(0.01));
  CHECK(res.fit.fwhm == doctest::Approx(res.fwhm_schawlow_townes).epsilon(0.3));
  CHECK(res.fwhm_plateau > res.fwhm_schawlow_townes);
  CHECK(res.field_spectrum.two_sided);
  CHECK(res.runs == 8);

  c.alpha_sq = 0.0;
  CHECK_THROWS_AS(estimate_linewidth(validate_config(c).value(), plan, opt), Error);
}
