#include "engm/config_io.hpp"

#include <fstream>
#include <iterator>
#include <json.hpp>

#include "engm/error.hpp"

namespace engm {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "engm-config";

template <typename T>
T get_or(const json& obj, const char* key, T fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<T>();
}

}  // namespace

std::string config_to_json(const CipherConfig& cfg, const CalibrationResult* calibration) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = cfg.version;
  doc["params"] = {{"a", cfg.params.a()}, {"b", cfg.params.b()}, {"mu", cfg.params.mu()}, {"dt", cfg.params.dt()}};
  doc["sampler"] = {{"m", cfg.sampler.m},
                    {"burn_in", cfg.sampler.burn_in},
                    {"r_max", cfg.sampler.r_max},
                    {"bits_per_sample", cfg.sampler.bits_per_sample}};
  doc["expander"] = {{"k", cfg.expander.k}, {"rounds", cfg.expander.rounds}};
  if (calibration != nullptr) {
    json curve = json::array();
    for (const auto& p : calibration->curve) curve.push_back({p.lag, p.bits});
    doc["calibration"] = {{"lyapunov", calibration->lyapunov},
                          {"m", calibration->m},
                          {"contractions", calibration->contractions},
                          {"samples_checked", calibration->samples_checked},
                          {"mi_curve", curve}};
  }
  return doc.dump(2) + "\n";
}

CipherConfig config_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("config is not valid JSON: ") + e.what());
  }
  try {
    if (!doc.is_object() || get_or<std::string>(doc, "format", "") != kFormat) {
      throw Error(ErrorCode::Format, "config format tag missing or unknown");
    }
    CipherConfig cfg = CipherConfig::defaults();
    cfg.version = get_or<std::uint32_t>(doc, "version", 0);
    if (cfg.version != 1) throw Error(ErrorCode::Format, "unsupported config version");
    if (doc.contains("params")) {
      const auto& p = doc.at("params");
      const auto d = SystemParams::defaults();
      cfg.params = SystemParams::chaotic(get_or(p, "a", d.a()), get_or(p, "b", d.b()),
                                         get_or(p, "mu", d.mu()), get_or(p, "dt", d.dt()));
    }
    if (doc.contains("sampler")) {
      const auto& s = doc.at("sampler");
      cfg.sampler.m = get_or(s, "m", cfg.sampler.m);
      cfg.sampler.burn_in = get_or(s, "burn_in", cfg.sampler.burn_in);
      cfg.sampler.r_max = get_or(s, "r_max", cfg.sampler.r_max);
      cfg.sampler.bits_per_sample = get_or(s, "bits_per_sample", cfg.sampler.bits_per_sample);
    }
    if (doc.contains("expander")) {
      const auto& x = doc.at("expander");
      cfg.expander.k = get_or(x, "k", cfg.expander.k);
      cfg.expander.rounds = get_or(x, "rounds", cfg.expander.rounds);
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("malformed config: ") + e.what());
  }
}

CipherConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open config " + path);
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return config_from_json(text);
}

void save_config(const std::string& path, const CipherConfig& cfg, const CalibrationResult* calibration) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write config " + path);
  out << config_to_json(cfg, calibration);
  if (!out) throw Error(ErrorCode::Io, "error writing config " + path);
}

}  // namespace engm
