#include "run_context.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <sstream>

namespace fbosc::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidGrid:
    case ErrorCode::PoleFrequency:
      return kGrid;
    case ErrorCode::InvalidPlan:
    case ErrorCode::UnstableLoop:
    case ErrorCode::NotConverged:
    case ErrorCode::TooShort:
      return kSimulation;
    case ErrorCode::FitDiverged:
    case ErrorCode::FlatSpectrum:
      return kFit;
    default:
      return kConfig;
  }
}

RunManifest::RunManifest(std::string command, std::string config_hash)
    : command_(std::move(command)), config_hash_(std::move(config_hash)) {}

void RunManifest::param(const std::string& key, const std::string& value) { params_.emplace_back(key, value); }

void RunManifest::param(const std::string& key, double value) {
  std::ostringstream os;
  os.precision(17);
  os << value;
  params_.emplace_back(key, os.str());
}

void RunManifest::set_seed(std::uint64_t seed) { seed_ = static_cast<std::int64_t>(seed); }

std::string RunManifest::identity_json() const {
  nlohmann::ordered_json j;
  j["tool_version"] = tool_version();
  j["command"] = command_;
  j["config_hash"] = config_hash_;
  nlohmann::ordered_json params = nlohmann::ordered_json::object();
  for (const auto& [k, v] : params_) params[k] = v;
  j["parameters"] = params;
  if (seed_ >= 0) j["seed"] = seed_;
  return j.dump();
}

std::string RunManifest::hash() const { return fnv1a_hex(identity_json()); }

std::vector<std::string> RunManifest::csv_header(const std::string& units, const std::string& columns) const {
  return {"tool fbosc " + tool_version(),
          "manifest " + hash(),
          "config " + config_hash_,
          "units " + units,
          "columns " + columns,
          "convention symmetrized double-sided spectra, vacuum = 1/2 per quadrature",
          "generated " + utc_timestamp()};
}

void RunManifest::write(const std::string& path) const {
  auto j = nlohmann::ordered_json::parse(identity_json());
  j["manifest_hash"] = hash();
  j["outputs"] = outputs_;
  j["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  std::ofstream out(path + ".manifest.json");
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest for " + path);
  out << j.dump(2) << '\n';
}

std::string tool_version() { return FBOSC_VERSION; }

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::uint64_t resolve_seed(std::uint64_t flag_value) {
  if (const char* env = std::getenv("FBOSC_SEED"); env && *env) {
    char* end = nullptr;
    const auto v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw Error(ErrorCode::InvalidArgument, "FBOSC_SEED must be a non-negative integer");
    return v;
  }
  return flag_value;
}

std::vector<BuiltinFixture> builtin_fixtures() {
  OscillatorConfig base;
  base.eta = 0.25;
  base.tau = 1.0;
  base.amplifier = SaturatingTanh{4.0, 1.0};
  const double r12 = squeeze_from_db(12.0);

  std::vector<BuiltinFixture> out;
  out.push_back({"vacuum", base});
  auto sqz = base;
  sqz.input.r0 = r12;
  sqz.input.rG = r12;
  out.push_back({"squeezed_12db", sqz});
  auto epr = base;
  epr.input.rE = r12;
  out.push_back({"epr_12db", epr});
  auto ps = base;
  ps.amplifier = PhaseSensitive{1.0, max_squeeze(base.eta), 0.0};
  out.push_back({"phase_sensitive_rmax", ps});
  OscillatorConfig epr_floor;
  epr_floor.eta = 0.5;
  epr_floor.tau = 1.0;
  epr_floor.amplifier = LinearInsensitive{1.0 / std::sqrt(0.5)};
  epr_floor.input.rE = std::log(0.5);
  out.push_back({"epr_eta05_floor", epr_floor});
  return out;
}

}  // namespace fbosc::cli
