#include "fbosc/series_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <cmath>
#include <numbers>

namespace fbosc {

namespace {

static_assert(std::endian::native == std::endian::little, "binary dumps assume a little-endian host");

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  return out;
}

void write_header(std::ostream& out, const std::vector<std::string>& header) {
  for (const auto& line : header) out << "# " << line << '\n';
}

template <typename T>
void put(std::ostream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& in, const std::string& path) {
  T v{};
  if (!in.read(reinterpret_cast<char*>(&v), sizeof(T)))
    throw Error(ErrorCode::Io, "truncated series file " + path);
  return v;
}

}  // namespace

void write_series_csv(const std::string& path, const QuadTimeSeries& series,
                      const std::vector<std::string>& header) {
  auto out = open_out(path);
  write_header(out, header);
  out << "t,q_out,p_out\n" << std::setprecision(17);
  for (std::size_t i = 0; i < series.q_out.size(); ++i)
    out << static_cast<double>(i) * series.dt << ',' << series.q_out[i] << ',' << series.p_out[i] << '\n';
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

void write_psd_csv(const std::string& path, const PsdEstimate& est, const std::vector<std::string>& header,
                   bool one_sided) {
  if (one_sided && est.two_sided)
    throw Error(ErrorCode::InvalidArgument, "one-sided output needs a real-signal estimate");
  auto out = open_out(path);
  write_header(out, header);
  out << "omega_rad_s,psd,stderr\n" << std::setprecision(17);
  const std::size_t m = est.segment_len;
  const double nyquist = est.freqs.empty() ? 0.0 : std::numbers::pi / est.dt;
  for (std::size_t i = 0; i < est.freqs.size(); ++i) {
    const bool edge = est.freqs[i] == 0.0 || (m % 2 == 0 && std::abs(est.freqs[i] - nyquist) < 1e-9 * nyquist);
    const double scale = one_sided && !edge ? 2.0 : 1.0;
    const double value = scale * est.psd[i];
    out << est.freqs[i] << ',' << value << ',' << value * est.rel_stderr[i] << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

void write_series_binary(const std::string& path, const QuadTimeSeries& series) {
  auto out = open_out(path, std::ios::out | std::ios::binary);
  out.write(kSeriesMagic, sizeof(kSeriesMagic));
  put(out, static_cast<std::uint64_t>(series.q_out.size()));
  put(out, series.dt);
  put(out, static_cast<std::uint32_t>(series.config_hash.size()));
  out.write(series.config_hash.data(), static_cast<std::streamsize>(series.config_hash.size()));
  out.write(reinterpret_cast<const char*>(series.q_out.data()),
            static_cast<std::streamsize>(series.q_out.size() * sizeof(double)));
  out.write(reinterpret_cast<const char*>(series.p_out.data()),
            static_cast<std::streamsize>(series.p_out.size() * sizeof(double)));
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

QuadTimeSeries read_series_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  char magic[sizeof(kSeriesMagic)];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kSeriesMagic, sizeof(magic)) != 0)
    throw Error(ErrorCode::Io, path + " is not a series dump");
  QuadTimeSeries s;
  const auto n = get<std::uint64_t>(in, path);
  s.dt = get<double>(in, path);
  const auto hash_len = get<std::uint32_t>(in, path);
  s.config_hash.resize(hash_len);
  if (!in.read(s.config_hash.data(), hash_len)) throw Error(ErrorCode::Io, "truncated series file " + path);
  s.q_out.resize(n);
  s.p_out.resize(n);
  const auto bytes = static_cast<std::streamsize>(n * sizeof(double));
  if (!in.read(reinterpret_cast<char*>(s.q_out.data()), bytes) ||
      !in.read(reinterpret_cast<char*>(s.p_out.data()), bytes))
    throw Error(ErrorCode::Io, "truncated series file " + path);
  return s;
}

}  // namespace fbosc
