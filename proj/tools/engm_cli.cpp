#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include "engm/engm.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Failure {
  int code;
  std::string message;
};

[[noreturn]] void fail(const std::string& message) { throw Failure{kExitFailure, message}; }
[[noreturn]] void usage(const std::string& message) { throw Failure{kExitUsage, message}; }

void check(engm_status status, const std::string& what) {
  if (status != ENGM_OK) fail(what + ": " + engm_last_error());
}

template <typename T, void (*Free)(T*)>
struct Handle {
  T* p = nullptr;
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Free(p); }
};

using Key = Handle<engm_key, engm_key_free>;
using Keystream = Handle<engm_keystream, engm_keystream_close>;
using Report = Handle<engm_report, engm_report_free>;
using Calibration = Handle<engm_calibration, engm_calibration_free>;
using Bench = Handle<engm_bench, engm_bench_free>;

std::vector<std::uint8_t> read_file(const std::string& path) {
  if (path.empty() || path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const void* data, std::size_t size) {
  if (path.empty() || path == "-") {
    std::cout.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
    std::cout.flush();
    if (!std::cout) fail("error writing to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail("cannot create " + path);
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!out) fail("error writing " + path);
}

void write_text(const std::string& path, const std::string& text) { write_file(path, text.data(), text.size()); }

void load_key(const std::string& path, Key& key) {
  if (path.empty()) {
    check(engm_key_test(&key.p), "test key");
    return;
  }
  const auto bytes = read_file(path);
  std::string hex(bytes.begin(), bytes.end());
  while (!hex.empty() && (hex.back() == '\n' || hex.back() == '\r' || hex.back() == ' ')) hex.pop_back();
  check(engm_key_from_hex(hex.c_str(), &key.p), "key file " + path);
}

struct Common {
  std::string config_path;
  engm_config config{};

  const engm_config* resolve() {
    engm_config_default(&config);
    if (!config_path.empty()) check(engm_config_load(config_path.c_str(), &config), "config " + config_path);
    return &config;
  }
};

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::vector<std::uint8_t> keystream_bits(const engm_key* key, const engm_config* cfg, std::size_t nbits) {
  Keystream ks;
  check(engm_keystream_open(key, cfg, &ks.p), "keystream");
  std::vector<std::uint8_t> bytes((nbits + 7) / 8);
  check(engm_keystream_read(ks.p, bytes.data(), bytes.size()), "keystream");
  std::vector<std::uint8_t> bits(nbits);
  check(engm_unpack_bits(bytes.data(), bytes.size(), bits.data(), nbits), "unpack");
  return bits;
}

int cmd_keygen(const std::string& out) {
  Key key;
  check(engm_key_generate(&key.p), "keygen");
  char hex[ENGM_KEY_HEX_LEN + 1];
  check(engm_key_to_hex(key.p, hex, sizeof(hex)), "keygen");
  write_text(out, std::string(hex) + "\n");
  if (!out.empty() && out != "-") {
    std::error_code ec;
    fs::remove(out + ".used", ec);
  }
  return kExitOk;
}

int cmd_encrypt(Common& common, const std::string& key_path, const std::string& in, const std::string& out,
                bool force) {
  if (key_path.empty()) usage("encrypt needs -k KEY");
  const std::string marker = key_path + ".used";
  if (fs::exists(marker) && !force) {
    fail("key " + key_path + " has already been used to encrypt; generate a fresh key or pass --force");
  }
  Key key;
  load_key(key_path, key);
  const auto* cfg = common.resolve();
  const auto plaintext = read_file(in);
  std::vector<std::uint8_t> envelope(engm_envelope_size(plaintext.size()));
  std::size_t len = 0;
  check(engm_encrypt(key.p, cfg, plaintext.data(), plaintext.size(), envelope.data(), envelope.size(), &len),
        "encrypt");
  write_file(out, envelope.data(), len);
  write_text(marker, "used\n");
  return kExitOk;
}

int cmd_decrypt(Common& common, const std::string& key_path, const std::string& in, const std::string& out) {
  if (key_path.empty()) usage("decrypt needs -k KEY");
  Key key;
  load_key(key_path, key);
  const auto* cfg = common.resolve();
  const auto envelope = read_file(in);
  std::vector<std::uint8_t> plaintext(envelope.size());
  std::size_t len = 0;
  int mismatch = 0;
  check(engm_decrypt(key.p, cfg, envelope.data(), envelope.size(), plaintext.data(), plaintext.size(), &len,
                     &mismatch),
        "decrypt");
  if (mismatch) std::cerr << "warning: the ciphertext was not produced with this key\n";
  write_file(out, plaintext.data(), len);
  return kExitOk;
}

int cmd_keystream(Common& common, const std::string& key_path, std::size_t n, const std::string& out) {
  Key key;
  load_key(key_path, key);
  const auto* cfg = common.resolve();
  Keystream ks;
  check(engm_keystream_open(key.p, cfg, &ks.p), "keystream");
  std::vector<std::uint8_t> bytes(n);
  check(engm_keystream_read(ks.p, bytes.data(), n), "keystream");
  write_file(out, bytes.data(), n);
  return kExitOk;
}

struct MiArgs {
  std::string input;
  bool self_test = false;
  bool trajectory = false;
  std::size_t t_max = 32;
  std::size_t bins = 64;
  std::size_t bits = 1'000'000;
  std::string key;
  std::string out;
};

int cmd_mi(Common& common, const MiArgs& a) {
  const int modes = (a.input.empty() ? 0 : 1) + (a.self_test ? 1 : 0) + (a.trajectory ? 1 : 0);
  if (modes != 1) usage("mi needs exactly one of --input, --self-test, --trajectory");
  if (a.t_max == 0) usage("--tmax must be positive");
  const auto* cfg = common.resolve();
  std::string csv;
  std::vector<double> curve(a.t_max);
  if (!a.input.empty()) {
    const auto bytes = read_file(a.input);
    std::vector<std::uint8_t> bits(bytes.size() * 8);
    check(engm_unpack_bits(bytes.data(), bytes.size(), bits.data(), bits.size()), "unpack");
    check(engm_mi_curve_bits(bits.data(), bits.size(), a.t_max, curve.data()), "mi");
    csv = "T,mi_bits\n";
    for (std::size_t t = 0; t < a.t_max; ++t) csv += std::to_string(t + 1) + "," + csv_number(curve[t]) + "\n";
  } else if (a.self_test) {
    Key key;
    load_key(a.key, key);
    const auto ks = keystream_bits(key.p, cfg, a.bits);
    std::vector<std::uint8_t> ref(a.bits);
    check(engm_reference_bits(a.bits, 42, ref.data()), "reference bits");
    std::vector<double> ref_curve(a.t_max);
    check(engm_mi_curve_bits(ks.data(), ks.size(), a.t_max, curve.data()), "mi keystream");
    check(engm_mi_curve_bits(ref.data(), ref.size(), a.t_max, ref_curve.data()), "mi reference");
    csv = "T,mi_a_bits,mi_b_bits\n";
    for (std::size_t t = 0; t < a.t_max; ++t) {
      csv += std::to_string(t + 1) + "," + csv_number(curve[t]) + "," + csv_number(ref_curve[t]) + "\n";
    }
  } else {
    check(engm_mi_curve_trajectory(cfg, 16, 100'000, 1000, 42, a.t_max, a.bins, curve.data()), "mi trajectory");
    csv = "T,mi_bits\n";
    for (std::size_t t = 0; t < a.t_max; ++t) csv += std::to_string(t + 1) + "," + csv_number(curve[t]) + "\n";
  }
  write_text(a.out, csv);
  return kExitOk;
}

struct TestArgs {
  std::size_t sequences = 100;
  std::size_t bits = 1'000'000;
  double alpha = 0.01;
  std::string input_dir;
  bool generate = false;
  bool spectral = false;
  std::string key;
  std::string out;
};

int cmd_test(Common& common, const TestArgs& a) {
  if (!a.input_dir.empty() && a.generate) usage("--input and --generate are exclusive");
  if (a.sequences == 0 || a.bits == 0) usage("--sequences and --bits must be positive");
  std::vector<std::vector<std::uint8_t>> seqs;
  std::size_t bit_count = a.bits;
  if (!a.input_dir.empty()) {
    if (!fs::is_directory(a.input_dir)) fail(a.input_dir + " is not a directory");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(a.input_dir)) {
      if (e.is_regular_file()) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) fail("no sequence files in " + a.input_dir);
    for (const auto& f : files) {
      const auto bytes = read_file(f.string());
      if (bytes.size() * 8 < bit_count) fail(f.string() + " holds fewer than " + std::to_string(bit_count) + " bits");
      std::vector<std::uint8_t> bits(bit_count);
      check(engm_unpack_bits(bytes.data(), bytes.size(), bits.data(), bit_count), "unpack");
      seqs.push_back(std::move(bits));
    }
  } else {
    const auto* cfg = common.resolve();
    Key key;
    if (a.key.empty()) {
      check(engm_key_generate(&key.p), "keygen");
    } else {
      load_key(a.key, key);
    }
    Keystream ks;
    check(engm_keystream_open(key.p, cfg, &ks.p), "keystream");
    std::vector<std::uint8_t> bytes((bit_count + 7) / 8);
    for (std::size_t i = 0; i < a.sequences; ++i) {
      check(engm_keystream_read(ks.p, bytes.data(), bytes.size()), "keystream");
      std::vector<std::uint8_t> bits(bit_count);
      check(engm_unpack_bits(bytes.data(), bytes.size(), bits.data(), bit_count), "unpack");
      seqs.push_back(std::move(bits));
    }
  }
  std::vector<const std::uint8_t*> ptrs;
  for (const auto& s : seqs) ptrs.push_back(s.data());
  engm_suite_options opt;
  engm_suite_options_default(&opt);
  opt.alpha = a.alpha;
  opt.include_spectral = a.spectral ? 1 : 0;
  Report report;
  const engm_status st = engm_suite_run(ptrs.data(), ptrs.size(), bit_count, &opt, &report.p);
  if (st == ENGM_ERR_INVALID_ARGUMENT) usage(engm_last_error());
  check(st, "test");
  write_text(a.out, engm_report_render(report.p));
  return engm_report_passed(report.p) ? kExitOk : kExitFailure;
}

struct CalibrateArgs {
  std::string out = "engm_config.json";
  double a = 0.0;
  double b = 0.0;
  double mu = 0.0;
  double dt = 0.0;
  bool has_params = false;
  bool sweep = false;
};

int cmd_calibrate(const CalibrateArgs& a) {
  if (a.has_params && a.sweep) usage("--sweep ignores explicit parameters; pass one or the other");
  Calibration cal;
  engm_status st;
  if (a.has_params) {
    engm_config p;
    engm_config_default(&p);
    p.a = a.a;
    p.b = a.b;
    p.mu = a.mu;
    p.dt = a.dt;
    st = engm_calibrate(&p, 0, &cal.p);
  } else {
    st = engm_calibrate(nullptr, a.sweep ? 1 : 0, &cal.p);
  }
  if (st == ENGM_ERR_INVALID_ARGUMENT) usage(engm_last_error());
  check(st, "calibrate");
  std::cout << engm_calibration_log(cal.p);
  engm_config cfg;
  engm_calibration_config(cal.p, &cfg);
  std::printf("a=%g b=%g mu=%g dt=%g\nlargest Lyapunov exponent %.6f\nsampling interval m=%llu steps\n"
              "contractions over the escape check: %llu\n",
              cfg.a, cfg.b, cfg.mu, cfg.dt, engm_calibration_lyapunov(cal.p), static_cast<unsigned long long>(cfg.m),
              static_cast<unsigned long long>(engm_calibration_contractions(cal.p)));
  check(engm_calibration_save(cal.p, a.out.c_str()), "calibrate");
  std::printf("wrote %s\n", a.out.c_str());
  return kExitOk;
}

int cmd_bench(Common& common, std::uint64_t bytes, double freq, std::uint32_t repeats) {
  if (bytes < (std::uint64_t{1} << 20)) usage("--bytes must be at least 1048576");
  if (repeats < 5) usage("--repeats must be at least 5");
  if (freq < 0.0) usage("--freq-hz must be positive");
  const auto* cfg = common.resolve();
  Bench bench;
  check(engm_bench_run(cfg, bytes, freq, repeats, &bench.p), "bench");
  std::cout << engm_bench_render(bench.p);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chaotic stream cipher toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--config", common.config_path, "JSON configuration written by calibrate")->check(CLI::ExistingFile);

  std::string out;
  std::string in;
  std::string key_path;
  bool force = false;

  auto* keygen = app.add_subcommand("keygen", "Write a fresh random key (64 hex digits)");
  keygen->add_option("-o,--output", out, "Key file (default: standard output)");

  auto* encrypt = app.add_subcommand("encrypt", "Encrypt a file into an ENGM envelope");
  auto* decrypt = app.add_subcommand("decrypt", "Decrypt an ENGM envelope");
  for (auto* sub : {encrypt, decrypt}) {
    sub->add_option("-k,--key", key_path, "Key file")->required();
    sub->add_option("-i,--input", in, "Input file (default: standard input)");
    sub->add_option("-o,--output", out, "Output file (default: standard output)");
  }
  encrypt->add_flag("--force", force, "Allow reusing a key file that has already encrypted something");

  std::size_t ks_bytes = 1024;
  auto* keystream = app.add_subcommand("keystream", "Dump raw keystream bytes");
  keystream->add_option("-k,--key", key_path, "Key file (default: the all-zero test key)");
  keystream->add_option("-n,--bytes", ks_bytes, "Number of bytes")->capture_default_str();
  keystream->add_option("-o,--output", out, "Output file (default: standard output)");

  MiArgs mi_args;
  auto* mi = app.add_subcommand("mi", "Mutual information curve as CSV");
  mi->add_option("--input", mi_args.input, "Packed binary file to analyse");
  mi->add_flag("--self-test", mi_args.self_test, "Keystream versus the reference generator");
  mi->add_flag("--trajectory", mi_args.trajectory, "x-series of the flow (16-trajectory ensemble)");
  mi->add_option("--tmax", mi_args.t_max, "Largest lag")->capture_default_str();
  mi->add_option("--bins", mi_args.bins, "Histogram bins for real-valued series")->capture_default_str();
  mi->add_option("--bits", mi_args.bits, "Keystream bits for --self-test")->capture_default_str();
  mi->add_option("-k,--key", mi_args.key, "Key for --self-test (default: the all-zero test key)");
  mi->add_option("-o,--output", mi_args.out, "CSV file (default: standard output)");

  TestArgs test_args;
  auto* test = app.add_subcommand("test", "Run the statistical test battery");
  test->add_option("--sequences", test_args.sequences, "Number of sequences")->capture_default_str();
  test->add_option("--bits", test_args.bits, "Bits per sequence")->capture_default_str();
  test->add_option("--alpha", test_args.alpha, "Significance level")->capture_default_str();
  test->add_option("--input", test_args.input_dir, "Directory with one packed binary file per sequence");
  test->add_flag("--generate", test_args.generate, "Test freshly generated keystream (the default)");
  test->add_flag("--spectral", test_args.spectral, "Include the DFT spectral test");
  test->add_option("-k,--key", test_args.key, "Key for --generate (default: a fresh random key)");
  test->add_option("-o,--output", test_args.out, "Report file (default: standard output)");

  CalibrateArgs cal_args;
  {
    engm_config d;
    engm_config_default(&d);
    cal_args.a = d.a;
    cal_args.b = d.b;
    cal_args.mu = d.mu;
    cal_args.dt = d.dt;
  }
  auto* calibrate = app.add_subcommand("calibrate", "Verify chaos, pick the sampling interval, write a config");
  calibrate->add_option("-o,--output", cal_args.out, "Config file")->capture_default_str();
  auto* oa = calibrate->add_option("--a", cal_args.a, "Parameter a (< 0)");
  auto* ob = calibrate->add_option("--b", cal_args.b, "Parameter b (> 0)");
  auto* omu = calibrate->add_option("--mu", cal_args.mu, "Parameter mu (> 0)");
  auto* odt = calibrate->add_option("--dt", cal_args.dt, "Step size");
  calibrate->add_flag("--sweep", cal_args.sweep, "Search the built-in parameter grid");

  std::uint64_t bench_bytes = std::uint64_t{1} << 22;
  double freq = 0.0;
  std::uint32_t repeats = 5;
  auto* bench = app.add_subcommand("bench", "Cycles-per-byte benchmark of keystream generation and XOR");
  bench->add_option("--bytes", bench_bytes, "Bytes per run (at least 2^20)")->capture_default_str();
  bench->add_option("--freq-hz", freq, "Nominal CPU frequency (default: probed)");
  bench->add_option("--repeats", repeats, "Runs; the median is reported")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*keygen) return cmd_keygen(out);
    if (*encrypt) return cmd_encrypt(common, key_path, in, out, force);
    if (*decrypt) return cmd_decrypt(common, key_path, in, out);
    if (*keystream) return cmd_keystream(common, key_path, ks_bytes, out);
    if (*mi) return cmd_mi(common, mi_args);
    if (*test) return cmd_test(common, test_args);
    if (*calibrate) {
      cal_args.has_params = oa->count() + ob->count() + omu->count() + odt->count() > 0;
      return cmd_calibrate(cal_args);
    }
    if (*bench) return cmd_bench(common, bench_bytes, freq, repeats);
  } catch (const Failure& f) {
    std::cerr << "engm: " << f.message << "\n";
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "engm: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}
