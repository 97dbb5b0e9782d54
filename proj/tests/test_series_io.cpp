#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "fbosc/series_io.hpp"

using namespace fbosc;

namespace {

std::string tmp_path(const std::string& name) { return std::string(FBOSC_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

QuadTimeSeries sample_series() {
  QuadTimeSeries s;
  s.dt = 0.125;
  s.config_hash = "0123456789abcdef";
  for (int i = 0; i < 10; ++i) {
    s.q_out.push_back(0.1 * i);
    s.p_out.push_back(-1.0 / (i + 1));
  }
  return s;
}

}  // namespace

TEST_CASE("binary dumps round-trip bit for bit") {
  const auto s = sample_series();
  const auto path = tmp_path("series.bin");
  write_series_binary(path, s);
  const auto back = read_series_binary(path);
  CHECK(back.q_out == s.q_out);
  CHECK(back.p_out == s.p_out);
  CHECK(back.dt == s.dt);
  CHECK(back.config_hash == s.config_hash);
  std::remove(path.c_str());
}

TEST_CASE("corrupt or missing binary files are reported as Io") {
  auto code = [](const std::string& path) {
    try {
      read_series_binary(path);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code(tmp_path("does_not_exist.bin")) == ErrorCode::Io);
  const auto bad = tmp_path("bad_magic.bin");
  std::ofstream(bad) << "NOTMAGIC and more";
  CHECK(code(bad) == ErrorCode::Io);
  const auto path = tmp_path("truncated.bin");
  write_series_binary(path, sample_series());
  const auto full = slurp(path);
  std::ofstream(path, std::ios::binary | std::ios::trunc) << full.substr(0, full.size() - 9);
  CHECK(code(path) == ErrorCode::Io);
  std::remove(bad.c_str());
  std::remove(path.c_str());
}

TEST_CASE("CSV outputs carry the comment header and columns") {
  const auto path = tmp_path("series.csv");
  write_series_csv(path, sample_series(), {"version 1", "manifest abc"});
  const auto text = slurp(path);
  CHECK(text.rfind("# version 1\n# manifest abc\nt,q_out,p_out\n0,0,-1\n", 0) == 0);

  PsdEstimate est;
  est.dt = 1.0;
  est.segment_len = 4;
  est.freqs = {0.0, std::numbers::pi / 2, std::numbers::pi};
  est.psd = {1.0, 2.0, 3.0};
  est.rel_stderr = {0.5, 0.5, 0.5};
  const auto psd_path = tmp_path("psd.csv");
  write_psd_csv(psd_path, est, {"units rad/s"}, true);
  const auto psd_text = slurp(psd_path);
  // DC and Nyquist stay single, interior bins double
  CHECK(psd_text.find("\n0,1,0.5\n") != std::string::npos);
  CHECK(psd_text.find(",4,2\n") != std::string::npos);
  CHECK(psd_text.find(",3,1.5\n") != std::string::npos);
  est.two_sided = true;
  CHECK_THROWS_AS(write_psd_csv(psd_path, est, {}, true), Error);
  CHECK_THROWS_AS(write_series_csv("/nonexistent_dir/x.csv", sample_series(), {}), Error);
  std::remove(path.c_str());
  std::remove(psd_path.c_str());
}
