#include "engm/engm.h"

#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "engm/analysis.hpp"
#include "engm/bench.hpp"
#include "engm/calibrate.hpp"
#include "engm/cipher.hpp"
#include "engm/config_io.hpp"
#include "engm/error.hpp"
#include "engm/statests.hpp"

struct engm_key {
  engm::SecretKey key;
};

struct engm_keystream {
  engm::KeystreamCipher cipher;
};

struct engm_report {
  engm::SuiteReport report;
  std::string rendered;
};

struct engm_calibration {
  engm::CalibrationResult result;
  std::string log;
};

struct engm_bench {
  engm::BenchReport report;
  std::string rendered;
};

namespace {

thread_local std::string g_last_error;

struct StatusError {
  engm_status status;
  std::string message;
};

[[noreturn]] void raise(engm_status status, std::string message) { throw StatusError{status, std::move(message)}; }

template <typename T>
void require(const T* p, const char* name) {
  if (p == nullptr) raise(ENGM_ERR_INVALID_ARGUMENT, std::string(name) + " is NULL");
}

template <typename F>
engm_status guard(F&& body) {
  try {
    body();
    return ENGM_OK;
  } catch (const StatusError& e) {
    g_last_error = e.message;
    return e.status;
  } catch (const engm::Error& e) {
    g_last_error = e.what();
    return static_cast<engm_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ENGM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ENGM_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return ENGM_ERR_INTERNAL;
  }
}

engm::CipherConfig to_cpp(const engm_config* c) {
  if (c == nullptr) return engm::CipherConfig::defaults();
  engm::CipherConfig cfg;
  cfg.params = engm::SystemParams::chaotic(c->a, c->b, c->mu, c->dt);
  cfg.sampler.m = c->m;
  cfg.sampler.burn_in = c->burn_in;
  cfg.sampler.r_max = c->r_max;
  cfg.sampler.bits_per_sample = c->bits_per_sample;
  cfg.expander.k = c->k;
  cfg.expander.rounds = c->rounds;
  cfg.version = c->version;
  cfg.validate();
  return cfg;
}

engm_config to_c(const engm::CipherConfig& cfg) {
  engm_config c{};
  c.a = cfg.params.a();
  c.b = cfg.params.b();
  c.mu = cfg.params.mu();
  c.dt = cfg.params.dt();
  c.m = cfg.sampler.m;
  c.burn_in = cfg.sampler.burn_in;
  c.r_max = cfg.sampler.r_max;
  c.bits_per_sample = cfg.sampler.bits_per_sample;
  c.k = cfg.expander.k;
  c.rounds = cfg.expander.rounds;
  c.version = cfg.version;
  return c;
}

void write_curve(const engm::MiCurve& curve, double* out) {
  for (std::size_t i = 0; i < curve.size(); ++i) out[i] = curve[i].bits;
}

}  // namespace

extern "C" {

const char* engm_status_name(engm_status status) {
  switch (status) {
    case ENGM_OK: return "ok";
    case ENGM_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case ENGM_ERR_INTERNAL: return "internal error";
    default: break;
  }
  if (status >= ENGM_ERR_INVALID_ARGUMENT && status <= ENGM_ERR_IO) {
    return engm::to_string(static_cast<engm::ErrorCode>(status));
  }
  return "unknown status";
}

const char* engm_last_error(void) { return g_last_error.c_str(); }

void engm_config_default(engm_config* out) {
  if (out != nullptr) *out = to_c(engm::CipherConfig::defaults());
}

engm_status engm_config_validate(const engm_config* cfg) {
  return guard([&] {
    require(cfg, "cfg");
    to_cpp(cfg);
  });
}

engm_status engm_config_load(const char* path, engm_config* out) {
  return guard([&] {
    require(path, "path");
    require(out, "out");
    *out = to_c(engm::load_config(path));
  });
}

engm_status engm_config_save(const char* path, const engm_config* cfg) {
  return guard([&] {
    require(path, "path");
    engm::save_config(path, to_cpp(cfg));
  });
}

engm_status engm_key_generate(engm_key** out) {
  return guard([&] {
    require(out, "out");
    *out = new engm_key{engm::SecretKey::generate()};
  });
}

engm_status engm_key_from_hex(const char* hex, engm_key** out) {
  return guard([&] {
    require(hex, "hex");
    require(out, "out");
    *out = new engm_key{engm::SecretKey::from_hex(hex)};
  });
}

engm_status engm_key_test(engm_key** out) {
  return guard([&] {
    require(out, "out");
    *out = new engm_key{engm::SecretKey::test_key()};
  });
}

engm_status engm_key_to_hex(const engm_key* key, char* out, size_t capacity) {
  return guard([&] {
    require(key, "key");
    require(out, "out");
    if (capacity < ENGM_KEY_HEX_LEN + 1) raise(ENGM_ERR_BUFFER_TOO_SMALL, "key hex needs 65 bytes");
    const std::string hex = key->key.to_hex();
    std::memcpy(out, hex.c_str(), hex.size() + 1);
  });
}

uint64_t engm_key_fingerprint(const engm_key* key) { return key == nullptr ? 0 : key->key.fingerprint(); }

void engm_key_free(engm_key* key) { delete key; }

engm_status engm_keystream_open(const engm_key* key, const engm_config* cfg, engm_keystream** out) {
  return guard([&] {
    require(key, "key");
    require(out, "out");
    *out = new engm_keystream{engm::KeystreamCipher(key->key, to_cpp(cfg))};
  });
}

engm_status engm_keystream_read(engm_keystream* ks, uint8_t* out, size_t n) {
  return guard([&] {
    require(ks, "ks");
    if (n == 0) return;
    require(out, "out");
    ks->cipher.fill({out, n});
  });
}

engm_status engm_keystream_xor(engm_keystream* ks, uint8_t* data, size_t n) {
  return guard([&] {
    require(ks, "ks");
    if (n == 0) return;
    require(data, "data");
    ks->cipher.apply({data, n});
  });
}

void engm_keystream_close(engm_keystream* ks) { delete ks; }

size_t engm_envelope_size(size_t plaintext_len) { return ENGM_ENVELOPE_HEADER_SIZE + plaintext_len; }

engm_status engm_encrypt(const engm_key* key, const engm_config* cfg, const uint8_t* plaintext,
                         size_t plaintext_len, uint8_t* out, size_t capacity, size_t* out_len) {
  return guard([&] {
    require(key, "key");
    require(out_len, "out_len");
    if (plaintext_len > 0) require(plaintext, "plaintext");
    const std::size_t needed = engm_envelope_size(plaintext_len);
    *out_len = needed;
    if (capacity < needed) raise(ENGM_ERR_BUFFER_TOO_SMALL, "envelope needs " + std::to_string(needed) + " bytes");
    require(out, "out");
    const auto env = engm::encrypt(key->key, to_cpp(cfg), {plaintext, plaintext_len});
    const auto bytes = env.serialize();
    std::memcpy(out, bytes.data(), bytes.size());
  });
}

engm_status engm_decrypt(const engm_key* key, const engm_config* cfg, const uint8_t* envelope,
                         size_t envelope_len, uint8_t* out, size_t capacity, size_t* out_len,
                         int* fingerprint_mismatch) {
  return guard([&] {
    require(key, "key");
    require(out_len, "out_len");
    if (envelope_len > 0) require(envelope, "envelope");
    const auto env = engm::CiphertextEnvelope::parse({envelope, envelope_len});
    *out_len = env.payload.size();
    if (capacity < env.payload.size()) {
      raise(ENGM_ERR_BUFFER_TOO_SMALL, "plaintext needs " + std::to_string(env.payload.size()) + " bytes");
    }
    const auto result = engm::decrypt(key->key, to_cpp(cfg), env);
    if (!result.plaintext.empty()) {
      require(out, "out");
      std::memcpy(out, result.plaintext.data(), result.plaintext.size());
    }
    if (fingerprint_mismatch != nullptr) *fingerprint_mismatch = result.fingerprint_mismatch ? 1 : 0;
  });
}

engm_status engm_unpack_bits(const uint8_t* bytes, size_t byte_len, uint8_t* bits, size_t bit_count) {
  return guard([&] {
    if (byte_len > 0) require(bytes, "bytes");
    if (bit_count > 0) require(bits, "bits");
    const auto unpacked = engm::unpack_msb_first({bytes, byte_len}, bit_count);
    if (!unpacked.empty()) std::memcpy(bits, unpacked.data(), unpacked.size());
  });
}

engm_status engm_reference_bits(size_t n, uint32_t seed, uint8_t* bits) {
  return guard([&] {
    if (n == 0) return;
    require(bits, "bits");
    const auto ref = engm::reference_rng_bits(n, seed);
    std::memcpy(bits, ref.data(), n);
  });
}

engm_status engm_raw_bits(const engm_key* key, const engm_config* cfg, uint8_t* bits, size_t n) {
  return guard([&] {
    require(key, "key");
    if (n == 0) return;
    require(bits, "bits");
    auto gen = engm::derive_state(key->key, to_cpp(cfg));
    const auto raw = gen.next_bits(n);
    std::memcpy(bits, raw.bits.data(), n);
  });
}

engm_status engm_mi_curve_bits(const uint8_t* bits, size_t n, size_t t_max, double* out) {
  return guard([&] {
    require(bits, "bits");
    require(out, "out");
    write_curve(engm::mi_curve_bits({bits, n}, t_max), out);
  });
}

engm_status engm_mi_curve_series(const double* series, size_t n, size_t t_max, size_t bins, double* out) {
  return guard([&] {
    require(series, "series");
    require(out, "out");
    write_curve(engm::mi_curve({series, n}, t_max, bins), out);
  });
}

engm_status engm_mi_curve_trajectory(const engm_config* cfg, size_t count, size_t length, size_t burn_in_steps,
                                     uint64_t seed, size_t t_max, size_t bins, double* out) {
  return guard([&] {
    require(out, "out");
    const auto c = to_cpp(cfg);
    const auto members = engm::x_series_ensemble(c.params, count, length, burn_in_steps, seed);
    write_curve(engm::mi_curve(engm::QuantizedEnsemble::real(members, bins), t_max), out);
  });
}

engm_status engm_choose_interval(const double* mi, size_t t_max, double epsilon, size_t* lag) {
  return guard([&] {
    require(lag, "lag");
    if (t_max > 0) require(mi, "mi");
    engm::MiCurve curve;
    for (std::size_t i = 0; i < t_max; ++i) curve.push_back({i + 1, mi[i]});
    *lag = engm::choose_sampling_interval(curve, epsilon);
  });
}

engm_status engm_largest_lyapunov(const double s0[4], double a, double b, double mu, double dt, uint64_t steps,
                                  uint64_t renorm_every, double* out) {
  return guard([&] {
    require(s0, "s0");
    require(out, "out");
    const auto p = engm::SystemParams::unconstrained(a, b, mu, dt);
    *out = engm::largest_lyapunov({s0[0], s0[1], s0[2], s0[3]}, p, steps, renorm_every);
  });
}

void engm_suite_options_default(engm_suite_options* out) {
  if (out == nullptr) return;
  out->alpha = engm::kDefaultAlpha;
  out->include_spectral = 0;
}

engm_status engm_suite_run(const uint8_t* const* sequences, size_t count, size_t bit_count,
                           const engm_suite_options* options, engm_report** out) {
  return guard([&] {
    require(sequences, "sequences");
    require(out, "out");
    std::vector<engm::BitSpan> spans;
    spans.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      require(sequences[i], "sequence");
      spans.emplace_back(sequences[i], bit_count);
    }
    engm::SuiteOptions opt;
    if (options != nullptr) {
      if (!(options->alpha > 0.0 && options->alpha < 1.0)) raise(ENGM_ERR_INVALID_ARGUMENT, "alpha must be in (0, 1)");
      opt.alpha = options->alpha;
      opt.include_spectral = options->include_spectral != 0;
    }
    auto report = engm::run_suite(spans, opt);
    auto rendered = report.render();
    *out = new engm_report{std::move(report), std::move(rendered)};
  });
}

int engm_report_passed(const engm_report* r) { return r != nullptr && r->report.passed ? 1 : 0; }

size_t engm_report_test_count(const engm_report* r) { return r == nullptr ? 0 : r->report.tests.size(); }

const char* engm_report_test_name(const engm_report* r, size_t test) {
  if (r == nullptr || test >= r->report.tests.size()) return nullptr;
  return r->report.tests[test].name.c_str();
}

double engm_report_proportion(const engm_report* r, size_t test) {
  if (r == nullptr || test >= r->report.tests.size()) return -1.0;
  return r->report.tests[test].proportion;
}

double engm_report_uniformity(const engm_report* r, size_t test) {
  if (r == nullptr || test >= r->report.tests.size()) return -1.0;
  return r->report.tests[test].uniformity_p;
}

double engm_report_p_value(const engm_report* r, size_t test, size_t sequence) {
  if (r == nullptr || test >= r->report.tests.size()) return -1.0;
  const auto& p = r->report.tests[test].p_values;
  return sequence < p.size() ? p[sequence] : -1.0;
}

double engm_report_average_p_value(const engm_report* r) { return r == nullptr ? -1.0 : r->report.average_p_value; }

const char* engm_report_render(const engm_report* r) { return r == nullptr ? "" : r->rendered.c_str(); }

void engm_report_free(engm_report* r) { delete r; }

engm_status engm_calibrate(const engm_config* params, int sweep, engm_calibration** out) {
  return guard([&] {
    require(out, "out");
    auto c = std::make_unique<engm_calibration>();
    if (sweep != 0) {
      std::vector<std::string> lines;
      std::optional<engm::CalibrationResult> result;
      try {
        result = engm::calibrate_sweep({}, &lines);
      } catch (const engm::Error& e) {
        std::string joined;
        for (const auto& l : lines) joined += l + "\n";
        raise(ENGM_ERR_CALIBRATION, joined + e.what());
      }
      c->result = *result;
      for (const auto& l : lines) c->log += l + "\n";
    } else {
      const auto p = params == nullptr ? engm::SystemParams::defaults()
                                       : engm::SystemParams::chaotic(params->a, params->b, params->mu, params->dt);
      c->result = engm::calibrate(p);
    }
    *out = c.release();
  });
}

void engm_calibration_config(const engm_calibration* c, engm_config* out) {
  if (c != nullptr && out != nullptr) *out = to_c(c->result.config);
}

double engm_calibration_lyapunov(const engm_calibration* c) { return c == nullptr ? 0.0 : c->result.lyapunov; }

uint64_t engm_calibration_contractions(const engm_calibration* c) {
  return c == nullptr ? 0 : c->result.contractions;
}

const char* engm_calibration_log(const engm_calibration* c) { return c == nullptr ? "" : c->log.c_str(); }

engm_status engm_calibration_save(const engm_calibration* c, const char* path) {
  return guard([&] {
    require(c, "calibration");
    require(path, "path");
    engm::save_config(path, c->result.config, &c->result);
  });
}

void engm_calibration_free(engm_calibration* c) { delete c; }

engm_status engm_bench_run(const engm_config* cfg, uint64_t bytes, double frequency_hz, uint32_t repeats,
                           engm_bench** out) {
  return guard([&] {
    require(out, "out");
    engm::BenchOptions opt;
    opt.bytes = bytes;
    opt.frequency_hz = frequency_hz;
    opt.repeats = repeats;
    auto report = engm::run_bench(to_cpp(cfg), opt);
    auto rendered = report.render();
    *out = new engm_bench{std::move(report), std::move(rendered)};
  });
}

void engm_bench_result_get(const engm_bench* b, engm_bench_result* out) {
  if (b == nullptr || out == nullptr) return;
  const auto& r = b->report;
  out->bytes = r.bytes_processed;
  out->wall_time = r.wall_time;
  out->frequency_hz = r.nominal_frequency;
  out->cycles_per_byte = r.cycles_per_byte;
  out->ns_per_byte = r.ns_per_byte;
  out->integration = r.stages.integration;
  out->binarize = r.stages.binarize;
  out->expand = r.stages.expand;
  out->xor_time = r.stages.xor_;
}

const char* engm_bench_render(const engm_bench* b) { return b == nullptr ? "" : b->rendered.c_str(); }

void engm_bench_free(engm_bench* b) { delete b; }

}  // extern "C"
