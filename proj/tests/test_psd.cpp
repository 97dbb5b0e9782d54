#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "fbosc/psd.hpp"

using namespace fbosc;
constexpr double kPi = std::numbers::pi;

namespace {

std::vector<double> white(std::size_t n, double sigma, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, sigma);
  std::vector<double> x(n);
  for (double& v : x) v = nd(rng);
  return x;
}

}  // namespace

TEST_CASE("white noise level is variance times dt") {
  const double dt = 0.01, sigma = 2.0;
  const auto x = white(1 << 18, sigma, 1);
  PsdOptions opt;
  opt.segment_len = 1024;
  const auto est = estimate_psd(x, dt, opt);
  CHECK_FALSE(est.two_sided);
  CHECK(est.freqs.front() == 0.0);
  CHECK(est.freqs.back() == doctest::Approx(kPi / dt));
  CHECK(est.freqs.size() == 513);
  CHECK(est.n_segments == 511);
  double mean = 0.0;
  for (std::size_t i = 1; i + 1 < est.psd.size(); ++i) mean += est.psd[i];
  mean /= static_cast<double>(est.psd.size() - 2);
  CHECK(mean == doctest::Approx(sigma * sigma * dt).epsilon(0.01));
  CHECK(est.rel_stderr[3] == doctest::Approx(1.0 / std::sqrt(511.0)));
}

TEST_CASE("Parseval: window-weighted identity is exact, plain one is statistical") {
  const auto x = white(1 << 16, 1.5, 2);
  for (auto w : {Window::Hann, Window::Rectangular}) {
    PsdOptions opt;
    opt.window = w;
    opt.segment_len = 1000;  // odd bin count and no Nyquist bin
    const auto est = estimate_psd(x, 0.3, opt);
    CHECK(parseval_ratio(est) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(parseval_ratio(est, false) == doctest::Approx(1.0).epsilon(0.03));
  }
  std::vector<std::complex<double>> z(1 << 14);
  const auto re = white(z.size(), 1.0, 3), im = white(z.size(), 1.0, 4);
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = {re[i], im[i]};
  const auto est = estimate_psd(z, 1.0);
  CHECK(parseval_ratio(est) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("a tone lands in its bin; complex tones keep their sign") {
  const double dt = 1e-3;
  const std::size_t m = 512;
  const double f_bin = 37;
  const double omega = 2 * kPi * f_bin / (m * dt);
  std::vector<double> x(m * 16);
  std::vector<std::complex<double>> z(m * 16);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = std::cos(omega * i * dt);
    z[i] = std::polar(1.0, omega * i * dt);
  }
  PsdOptions opt;
  opt.segment_len = m;
  const auto est = estimate_psd(x, dt, opt);
  const auto peak = std::max_element(est.psd.begin(), est.psd.end()) - est.psd.begin();
  CHECK(est.freqs[peak] == doctest::Approx(omega));

  const auto cz = estimate_psd(z, dt, opt);
  CHECK(cz.two_sided);
  CHECK(cz.freqs.size() == m);
  for (std::size_t i = 1; i < cz.freqs.size(); ++i) REQUIRE(cz.freqs[i] > cz.freqs[i - 1]);
  const auto zpeak = std::max_element(cz.psd.begin(), cz.psd.end()) - cz.psd.begin();
  CHECK(cz.freqs[zpeak] == doctest::Approx(omega));
}

TEST_CASE("prewhitening recovers a random walk spectrum") {
  const double dt = 0.1, sigma = 1.0;
  const auto steps = white(1 << 18, sigma, 5);
  std::vector<double> walk(steps.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < steps.size(); ++i) walk[i] = acc += steps[i];
  PsdOptions opt;
  opt.segment_len = 1 << 12;
  opt.prewhiten_lag = 1;
  const auto est = estimate_psd(walk, dt, opt);
  CHECK(est.recolored);
  CHECK(est.freqs.front() > 0.0);  // omega = 0 is dropped
  const auto cmp = compare_bands(
      est, [&](double w) { return sigma * sigma * dt / (4 * std::pow(std::sin(w * dt / 2), 2)); }, 0.05, kPi / dt,
      1.2, 20);
  CHECK(cmp.rms_rel_error < 0.05);
  CHECK_THROWS_AS(psd_integral(est), Error);
}

TEST_CASE("band comparison against an exact reference") {
  PsdEstimate est;
  est.dt = 1.0;
  est.segment_len = 2000;
  for (int k = 0; k <= 1000; ++k) {
    est.freqs.push_back(2 * kPi * k / 2000.0);
    est.psd.push_back(1.0 / (1.0 + est.freqs.back()));
  }
  const auto exact = compare_bands(est, [](double w) { return 1.0 / (1.0 + w); }, 0.01, 3.0, 1.15, 6);
  CHECK(exact.rms_rel_error < 1e-15);
  for (int b : exact.bins) CHECK(b >= 6);
  for (std::size_t i = 1; i < exact.center.size(); ++i) CHECK(exact.center[i] > exact.center[i - 1]);
  const auto off = compare_bands(est, [](double w) { return 1.1 / (1.0 + w); }, 0.01, 3.0);
  CHECK(std::abs(off.rms_rel_error - (1.0 - 1.0 / 1.1)) < 1e-12);
  CHECK_THROWS_AS(compare_bands(est, [](double) { return 1.0; }, 0.0, 3.0), Error);
  CHECK_THROWS_AS(compare_bands(est, [](double) { return 1.0; }, 0.01, 0.011, 1.15, 6), Error);
}

TEST_CASE("argument checks") {
  const auto x = white(64, 1.0, 6);
  PsdOptions opt;
  opt.segment_len = 128;
  CHECK_THROWS_AS(estimate_psd(x, 1.0, opt), Error);
  opt.segment_len = 16;
  opt.overlap = 1.0;
  CHECK_THROWS_AS(estimate_psd(x, 1.0, opt), Error);
  opt.overlap = 0.5;
  CHECK_THROWS_AS(estimate_psd(x, 0.0, opt), Error);
  CHECK_THROWS_AS(parseval_ratio(estimate_psd(std::vector<double>(64, 0.0), 1.0, opt)), Error);
}
