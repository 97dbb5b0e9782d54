#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>

#include "fbosc/config.hpp"

namespace fbosc {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& msg) { throw Error(ErrorCode::ConfigParse, msg); }

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) parse_fail(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) parse_fail("unknown key '" + key + "' in " + where);
  }
}

double number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) parse_fail("missing key '" + key + "' in " + where);
  const auto& v = obj.at(key);
  if (!v.is_number()) parse_fail("'" + key + "' in " + where + " must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback, const std::string& where) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

AmplifierModel parse_amplifier(const json& j, double eta) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    parse_fail("amplifier needs a string 'type'");
  const auto type = j.at("type").get<std::string>();
  const double saturated = eta > 0.0 && eta <= 1.0 ? 1.0 / std::sqrt(eta) : 1.0;
  if (type == "saturating_tanh") {
    reject_unknown(j, {"type", "g0", "a_inf"}, "amplifier");
    return SaturatingTanh{number(j, "g0", "amplifier"), number(j, "a_inf", "amplifier")};
  }
  if (type == "linear_insensitive") {
    reject_unknown(j, {"type", "g"}, "amplifier");
    return LinearInsensitive{number_or(j, "g", saturated, "amplifier")};
  }
  if (type == "phase_sensitive") {
    reject_unknown(j, {"type", "g", "r_s", "phi_s"}, "amplifier");
    PhaseSensitive ps;
    ps.r_s = number(j, "r_s", "amplifier");
    ps.g = number_or(j, "g", std::exp(-ps.r_s) * saturated, "amplifier");
    ps.phi_s = number_or(j, "phi_s", 0.0, "amplifier");
    return ps;
  }
  parse_fail("unknown amplifier type '" + type + "'");
}

InputStateParams parse_input(const json& j) {
  reject_unknown(j, {"r0", "rG", "rE", "covariance"}, "input");
  InputStateParams in;
  in.r0 = number_or(j, "r0", 0.0, "input");
  in.rG = number_or(j, "rG", 0.0, "input");
  in.rE = number_or(j, "rE", 0.0, "input");
  if (j.contains("covariance")) {
    const auto& rows = j.at("covariance");
    if (!rows.is_array() || rows.size() != 4) parse_fail("input.covariance must be a 4x4 array");
    Eigen::Matrix4d v;
    for (int r = 0; r < 4; ++r) {
      const auto& row = rows.at(r);
      if (!row.is_array() || row.size() != 4) parse_fail("input.covariance must be a 4x4 array");
      for (int c = 0; c < 4; ++c) {
        if (!row.at(c).is_number()) parse_fail("input.covariance entries must be numbers");
        v(r, c) = row.at(c).get<double>();
      }
    }
    in.covariance = v;
  }
  return in;
}

json to_json(const OscillatorConfig& cfg) {
  json j;
  j["eta"] = cfg.eta;
  j["tau"] = cfg.tau;
  j["alpha_sq"] = cfg.alpha_sq;
  j["carrier_index"] = cfg.carrier_index;
  std::visit(
      [&](const auto& amp) {
        using T = std::decay_t<decltype(amp)>;
        json a;
        a["type"] = std::string(amplifier_name(cfg.amplifier));
        if constexpr (std::is_same_v<T, SaturatingTanh>) {
          a["g0"] = amp.g0;
          a["a_inf"] = amp.a_inf;
        } else if constexpr (std::is_same_v<T, LinearInsensitive>) {
          a["g"] = amp.g;
        } else {
          a["g"] = amp.g;
          a["r_s"] = amp.r_s;
          a["phi_s"] = amp.phi_s;
        }
        j["amplifier"] = a;
      },
      cfg.amplifier);
  json in;
  in["r0"] = cfg.input.r0;
  in["rG"] = cfg.input.rG;
  in["rE"] = cfg.input.rE;
  if (cfg.input.covariance) {
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
      json row = json::array();
      for (int c = 0; c < 4; ++c) row.push_back((*cfg.input.covariance)(r, c));
      rows.push_back(row);
    }
    in["covariance"] = rows;
  }
  j["input"] = in;
  return j;
}

}  // namespace

OscillatorConfig parse_config_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail(std::string("malformed JSON: ") + e.what());
  }
  reject_unknown(j, {"eta", "tau", "alpha_sq", "amplifier", "input", "carrier_index"}, "config");
  OscillatorConfig cfg;
  cfg.eta = number(j, "eta", "config");
  cfg.tau = number(j, "tau", "config");
  cfg.alpha_sq = number_or(j, "alpha_sq", 0.0, "config");
  if (j.contains("carrier_index")) {
    if (!j.at("carrier_index").is_number_integer()) parse_fail("carrier_index must be an integer");
    cfg.carrier_index = j.at("carrier_index").get<int>();
  }
  if (!j.contains("amplifier")) parse_fail("missing key 'amplifier' in config");
  cfg.amplifier = parse_amplifier(j.at("amplifier"), cfg.eta);
  if (j.contains("input")) cfg.input = parse_input(j.at("input"));
  return cfg;
}

OscillatorConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_json(buf.str());
}

std::string config_to_json(const OscillatorConfig& cfg, int indent) {
  return to_json(cfg).dump(indent);
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i, h >>= 4) out[i] = digits[h & 0xF];
  return out;
}

std::string config_hash(const OscillatorConfig& cfg) { return fnv1a_hex(to_json(cfg).dump()); }

}  // namespace fbosc
