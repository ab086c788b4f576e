#include <gtest/gtest.h>

#include <cstring>
#include <string>
#include <vector>

#include "engm/engm.h"

namespace {

const std::vector<std::uint8_t> kGolden{0xee, 0x61, 0x31, 0xa1, 0xc0, 0xb6, 0x3f, 0x42,
                                        0x85, 0x52, 0x4a, 0x34, 0x92, 0x76, 0x24, 0x4f};

struct KeyGuard {
  engm_key* k = nullptr;
  ~KeyGuard() { engm_key_free(k); }
};

}  // namespace

TEST(CApi, StatusNames) {
  EXPECT_STREQ(engm_status_name(ENGM_OK), "ok");
  EXPECT_NE(std::string(engm_status_name(ENGM_ERR_FORMAT)), "");
  EXPECT_NE(std::string(engm_status_name(ENGM_ERR_BUFFER_TOO_SMALL)), std::string(engm_status_name(ENGM_OK)));
}

TEST(CApi, ConfigDefaultsValidate) {
  engm_config cfg;
  engm_config_default(&cfg);
  EXPECT_EQ(engm_config_validate(&cfg), ENGM_OK);
  EXPECT_EQ(cfg.a, -1.0);
  EXPECT_EQ(cfg.k, 64u);
  EXPECT_EQ(cfg.version, 1u);
  cfg.a = 1.0;
  EXPECT_EQ(engm_config_validate(&cfg), ENGM_ERR_INVALID_ARGUMENT);
  EXPECT_NE(std::string(engm_last_error()), "");
  EXPECT_EQ(engm_config_validate(nullptr), ENGM_ERR_INVALID_ARGUMENT);
}

TEST(CApi, KeyHex) {
  KeyGuard g;
  EXPECT_EQ(engm_key_from_hex("0abc", &g.k), ENGM_ERR_FORMAT);
  EXPECT_EQ(g.k, nullptr);
  const std::string hex = "0123456789abcdef0123456789abcdef0123456789abcdef0123456780000000";
  ASSERT_EQ(engm_key_from_hex(hex.c_str(), &g.k), ENGM_OK);
  char buf[65];
  EXPECT_EQ(engm_key_to_hex(g.k, buf, 10), ENGM_ERR_BUFFER_TOO_SMALL);
  ASSERT_EQ(engm_key_to_hex(g.k, buf, sizeof(buf)), ENGM_OK);
  EXPECT_EQ(hex, buf);
  KeyGuard r;
  ASSERT_EQ(engm_key_generate(&r.k), ENGM_OK);
  ASSERT_EQ(engm_key_to_hex(r.k, buf, sizeof(buf)), ENGM_OK);
  EXPECT_EQ(std::strlen(buf), 64u);
  EXPECT_EQ(buf[0], '0');
}

TEST(CApi, GoldenKeystream) {
  KeyGuard g;
  ASSERT_EQ(engm_key_test(&g.k), ENGM_OK);
  EXPECT_EQ(engm_key_fingerprint(g.k), 0u);
  engm_keystream* ks = nullptr;
  ASSERT_EQ(engm_keystream_open(g.k, nullptr, &ks), ENGM_OK);
  std::vector<std::uint8_t> out(16);
  ASSERT_EQ(engm_keystream_read(ks, out.data(), 5), ENGM_OK);
  ASSERT_EQ(engm_keystream_read(ks, out.data() + 5, 11), ENGM_OK);
  EXPECT_EQ(out, kGolden);
  engm_keystream_close(ks);
}

TEST(CApi, EncryptDecrypt) {
  KeyGuard g, other;
  ASSERT_EQ(engm_key_generate(&g.k), ENGM_OK);
  ASSERT_EQ(engm_key_generate(&other.k), ENGM_OK);
  const std::string msg = "attack at dawn";
  const auto* pt = reinterpret_cast<const std::uint8_t*>(msg.data());
  std::vector<std::uint8_t> env(engm_envelope_size(msg.size()));
  EXPECT_EQ(env.size(), msg.size() + ENGM_ENVELOPE_HEADER_SIZE);
  std::size_t len = 0;
  EXPECT_EQ(engm_encrypt(g.k, nullptr, pt, msg.size(), env.data(), env.size() - 1, &len),
            ENGM_ERR_BUFFER_TOO_SMALL);
  ASSERT_EQ(engm_encrypt(g.k, nullptr, pt, msg.size(), env.data(), env.size(), &len), ENGM_OK);
  ASSERT_EQ(len, env.size());
  std::vector<std::uint8_t> back(msg.size());
  int mismatch = -1;
  ASSERT_EQ(engm_decrypt(g.k, nullptr, env.data(), len, back.data(), back.size(), &len, &mismatch), ENGM_OK);
  EXPECT_EQ(mismatch, 0);
  EXPECT_EQ(std::string(back.begin(), back.end()), msg);
  ASSERT_EQ(engm_decrypt(other.k, nullptr, env.data(), env.size(), back.data(), back.size(), &len, &mismatch),
            ENGM_OK);
  EXPECT_EQ(mismatch, 1);
  EXPECT_EQ(engm_decrypt(g.k, nullptr, env.data(), 10, back.data(), back.size(), &len, &mismatch),
            ENGM_ERR_FORMAT);
}

TEST(CApi, KeystreamXorMatchesRead) {
  KeyGuard g;
  ASSERT_EQ(engm_key_test(&g.k), ENGM_OK);
  engm_keystream* a = nullptr;
  engm_keystream* b = nullptr;
  ASSERT_EQ(engm_keystream_open(g.k, nullptr, &a), ENGM_OK);
  ASSERT_EQ(engm_keystream_open(g.k, nullptr, &b), ENGM_OK);
  std::vector<std::uint8_t> ks(1000), data(1000, 0x5a);
  ASSERT_EQ(engm_keystream_read(a, ks.data(), ks.size()), ENGM_OK);
  ASSERT_EQ(engm_keystream_xor(b, data.data(), data.size()), ENGM_OK);
  for (std::size_t i = 0; i < ks.size(); ++i) ASSERT_EQ(data[i], ks[i] ^ 0x5a);
  engm_keystream_close(a);
  engm_keystream_close(b);
}

TEST(CApi, Analysis) {
  std::vector<std::uint8_t> bits(200000);
  ASSERT_EQ(engm_reference_bits(bits.size(), 42, bits.data()), ENGM_OK);
  std::vector<double> mi(4);
  ASSERT_EQ(engm_mi_curve_bits(bits.data(), bits.size(), 4, mi.data()), ENGM_OK);
  for (double v : mi) EXPECT_LT(v, 1e-3);
  EXPECT_EQ(engm_mi_curve_bits(bits.data(), 30, 4, mi.data()), ENGM_ERR_INSUFFICIENT_DATA);
  std::size_t lag = 0;
  const double curve[] = {0.5, 0.02, 0.005};
  ASSERT_EQ(engm_choose_interval(curve, 3, 0.01, &lag), ENGM_OK);
  EXPECT_EQ(lag, 3u);
  EXPECT_EQ(engm_choose_interval(curve, 2, 0.01, &lag), ENGM_ERR_NO_CROSSING);
  const std::uint8_t packed[] = {0xA0};
  std::uint8_t unpacked[4];
  ASSERT_EQ(engm_unpack_bits(packed, 1, unpacked, 4), ENGM_OK);
  EXPECT_EQ(unpacked[0], 1);
  EXPECT_EQ(unpacked[1], 0);
  EXPECT_EQ(unpacked[2], 1);
  double l = 0.0;
  const double s0[4] = {1e-3, 0.0, 2e-3, 0.0};
  ASSERT_EQ(engm_largest_lyapunov(s0, 0.0, 0.0, 1.0, 0.001, 100000, 10, &l), ENGM_OK);
  EXPECT_NEAR(l, 1.0, 0.05);
}

TEST(CApi, Suite) {
  std::vector<std::vector<std::uint8_t>> seqs(10, std::vector<std::uint8_t>(20000));
  std::vector<const std::uint8_t*> ptrs;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    ASSERT_EQ(engm_reference_bits(seqs[i].size(), static_cast<std::uint32_t>(100 + i), seqs[i].data()), ENGM_OK);
    ptrs.push_back(seqs[i].data());
  }
  engm_suite_options opt;
  engm_suite_options_default(&opt);
  EXPECT_EQ(opt.alpha, 0.01);
  engm_report* r = nullptr;
  ASSERT_EQ(engm_suite_run(ptrs.data(), ptrs.size(), 20000, &opt, &r), ENGM_OK);
  EXPECT_EQ(engm_report_test_count(r), 9u);
  EXPECT_STREQ(engm_report_test_name(r, 0), "monobit");
  EXPECT_GE(engm_report_uniformity(r, 0), 0.0);
  const double p = engm_report_p_value(r, 0, 3);
  EXPECT_GE(p, 0.0);
  EXPECT_LE(p, 1.0);
  EXPECT_NE(std::string(engm_report_render(r)).find("test_name,sequence_index,p_value,pass"), std::string::npos);
  engm_report_free(r);
  EXPECT_EQ(engm_suite_run(ptrs.data(), 0, 20000, &opt, &r), ENGM_ERR_INVALID_ARGUMENT);
}

TEST(CApi, BenchRejectsSmallInput) {
  engm_bench* b = nullptr;
  EXPECT_EQ(engm_bench_run(nullptr, 1000, 0.0, 5, &b), ENGM_ERR_INVALID_ARGUMENT);
  EXPECT_EQ(b, nullptr);
}

TEST(CApi, NullHandlesAreAccepted) {
  engm_key_free(nullptr);
  engm_keystream_close(nullptr);
  engm_report_free(nullptr);
  engm_calibration_free(nullptr);
  engm_bench_free(nullptr);
  EXPECT_EQ(engm_keystream_open(nullptr, nullptr, nullptr), ENGM_ERR_INVALID_ARGUMENT);
}
