/* C interface to the engm chaotic stream cipher toolkit.
 *
 * Every fallible call returns an engm_status. On failure a description of
 * the error is available from engm_last_error() on the same thread until the
 * next failing call. Handles are opaque and owned by the caller; release
 * each with its matching *_free / *_close function (NULL is accepted).
 */
#ifndef ENGM_ENGM_H
#define ENGM_ENGM_H

#include <stddef.h>
#include <stdint.h>

#if defined(ENGM_BUILDING_LIBRARY)
#define ENGM_API __attribute__((visibility("default")))
#else
#define ENGM_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum engm_status {
  ENGM_OK = 0,
  ENGM_ERR_INVALID_ARGUMENT = 1,
  ENGM_ERR_OVERFLOW = 2,
  ENGM_ERR_DEGENERATE = 3,
  ENGM_ERR_LENGTH = 4,
  ENGM_ERR_ENTROPY_UNAVAILABLE = 5,
  ENGM_ERR_RESERVED_BITS = 6,
  ENGM_ERR_DEGENERATE_KEY = 7,
  ENGM_ERR_FORMAT = 8,
  ENGM_ERR_INSUFFICIENT_DATA = 9,
  ENGM_ERR_NO_CROSSING = 10,
  ENGM_ERR_DOMAIN = 11,
  ENGM_ERR_CALIBRATION = 12,
  ENGM_ERR_CLOCK = 13,
  ENGM_ERR_IO = 14,
  ENGM_ERR_BUFFER_TOO_SMALL = 15,
  ENGM_ERR_INTERNAL = 16
} engm_status;

ENGM_API const char* engm_status_name(engm_status status);
ENGM_API const char* engm_last_error(void);

/* ---- configuration ---------------------------------------------------- */

typedef struct engm_config {
  double a, b, mu, dt;       /* flow parameters: a < 0, b > 0, mu > 0 */
  uint64_t m;                /* RK4 steps per sample */
  uint64_t burn_in;          /* samples discarded at key setup */
  double r_max;              /* escape radius */
  uint32_t bits_per_sample;  /* 1 or 2 */
  uint32_t k;                /* expander register width */
  uint64_t rounds;           /* expander rounds per absorbed block */
  uint32_t version;
} engm_config;

ENGM_API void engm_config_default(engm_config* out);
ENGM_API engm_status engm_config_validate(const engm_config* cfg);
ENGM_API engm_status engm_config_load(const char* path, engm_config* out);
ENGM_API engm_status engm_config_save(const char* path, const engm_config* cfg);

/* ---- keys ------------------------------------------------------------- */

typedef struct engm_key engm_key;

#define ENGM_KEY_HEX_LEN 64

ENGM_API engm_status engm_key_generate(engm_key** out);
/* Exactly 64 lowercase hex digits, the first being '0'. */
ENGM_API engm_status engm_key_from_hex(const char* hex, engm_key** out);
/* The all-zero key used for reference vectors. */
ENGM_API engm_status engm_key_test(engm_key** out);
/* Writes 64 digits plus a terminating NUL into out[65]. */
ENGM_API engm_status engm_key_to_hex(const engm_key* key, char* out, size_t capacity);
ENGM_API uint64_t engm_key_fingerprint(const engm_key* key);
ENGM_API void engm_key_free(engm_key* key);

/* ---- keystream and envelope ------------------------------------------ */

typedef struct engm_keystream engm_keystream;

/* cfg may be NULL for the defaults. */
ENGM_API engm_status engm_keystream_open(const engm_key* key, const engm_config* cfg, engm_keystream** out);
ENGM_API engm_status engm_keystream_read(engm_keystream* ks, uint8_t* out, size_t n);
ENGM_API engm_status engm_keystream_xor(engm_keystream* ks, uint8_t* data, size_t n);
ENGM_API void engm_keystream_close(engm_keystream* ks);

/* Header "ENGM", version byte, 8-byte fingerprint, 8-byte length (big-endian). */
#define ENGM_ENVELOPE_HEADER_SIZE 21
ENGM_API size_t engm_envelope_size(size_t plaintext_len);

ENGM_API engm_status engm_encrypt(const engm_key* key, const engm_config* cfg, const uint8_t* plaintext,
                                  size_t plaintext_len, uint8_t* out, size_t capacity, size_t* out_len);
/* *fingerprint_mismatch is set to 1 when the envelope names a different key;
 * decryption still proceeds. */
ENGM_API engm_status engm_decrypt(const engm_key* key, const engm_config* cfg, const uint8_t* envelope,
                                  size_t envelope_len, uint8_t* out, size_t capacity, size_t* out_len,
                                  int* fingerprint_mismatch);

/* ---- analysis ---------------------------------------------------------- */

/* One bit per byte (0/1) out of packed MSB-first bytes. */
ENGM_API engm_status engm_unpack_bits(const uint8_t* bytes, size_t byte_len, uint8_t* bits, size_t bit_count);
/* Bits from std::mt19937 (top bit of each output) with a fixed seed. */
ENGM_API engm_status engm_reference_bits(size_t n, uint32_t seed, uint8_t* bits);
/* Raw (pre-expansion) sign bits of the sampled trajectory. */
ENGM_API engm_status engm_raw_bits(const engm_key* key, const engm_config* cfg, uint8_t* bits, size_t n);

/* MI curves in bits; out receives t_max values for lags 1..t_max. */
ENGM_API engm_status engm_mi_curve_bits(const uint8_t* bits, size_t n, size_t t_max, double* out);
ENGM_API engm_status engm_mi_curve_series(const double* series, size_t n, size_t t_max, size_t bins,
                                          double* out);
/* Pooled x-series ensemble of `count` trajectories from seeded random
 * initial conditions (see analysis.hpp). */
ENGM_API engm_status engm_mi_curve_trajectory(const engm_config* cfg, size_t count, size_t length,
                                              size_t burn_in_steps, uint64_t seed, size_t t_max,
                                              size_t bins, double* out);
/* Smallest lag (1-based) with mi[lag - 1] < epsilon. */
ENGM_API engm_status engm_choose_interval(const double* mi, size_t t_max, double epsilon, size_t* lag);

ENGM_API engm_status engm_largest_lyapunov(const double s0[4], double a, double b, double mu, double dt,
                                           uint64_t steps, uint64_t renorm_every, double* out);

/* ---- statistical test battery ---------------------------------------- */

typedef struct engm_suite_options {
  double alpha;
  int include_spectral;
} engm_suite_options;

typedef struct engm_report engm_report;

ENGM_API void engm_suite_options_default(engm_suite_options* out);
/* sequences[i] points at bit_count bits (one per byte). */
ENGM_API engm_status engm_suite_run(const uint8_t* const* sequences, size_t count, size_t bit_count,
                                    const engm_suite_options* options, engm_report** out);
ENGM_API int engm_report_passed(const engm_report* r);
ENGM_API size_t engm_report_test_count(const engm_report* r);
ENGM_API const char* engm_report_test_name(const engm_report* r, size_t test);
ENGM_API double engm_report_proportion(const engm_report* r, size_t test);
/* -1 when fewer than ten sequences were run. */
ENGM_API double engm_report_uniformity(const engm_report* r, size_t test);
ENGM_API double engm_report_p_value(const engm_report* r, size_t test, size_t sequence);
ENGM_API double engm_report_average_p_value(const engm_report* r);
/* Valid until the report is freed. */
ENGM_API const char* engm_report_render(const engm_report* r);
ENGM_API void engm_report_free(engm_report* r);

/* ---- calibration ------------------------------------------------------- */

typedef struct engm_calibration engm_calibration;

/* params == NULL calibrates the built-in defaults; otherwise a, b, mu, dt
 * are taken from *params (sign constraints apply). sweep != 0 walks the
 * built-in grid instead. */
ENGM_API engm_status engm_calibrate(const engm_config* params, int sweep, engm_calibration** out);
ENGM_API void engm_calibration_config(const engm_calibration* c, engm_config* out);
ENGM_API double engm_calibration_lyapunov(const engm_calibration* c);
ENGM_API uint64_t engm_calibration_contractions(const engm_calibration* c);
/* One line per attempted parameter set (sweep mode), else empty. */
ENGM_API const char* engm_calibration_log(const engm_calibration* c);
ENGM_API engm_status engm_calibration_save(const engm_calibration* c, const char* path);
ENGM_API void engm_calibration_free(engm_calibration* c);

/* ---- benchmark ------------------------------------------------------- */

typedef struct engm_bench_result {
  uint64_t bytes;
  double wall_time;
  double frequency_hz;
  double cycles_per_byte;
  double ns_per_byte;
  double integration, binarize, expand, xor_time;
} engm_bench_result;

typedef struct engm_bench engm_bench;

/* frequency_hz == 0 probes the machine. */
ENGM_API engm_status engm_bench_run(const engm_config* cfg, uint64_t bytes, double frequency_hz, uint32_t repeats,
                                    engm_bench** out);
ENGM_API void engm_bench_result_get(const engm_bench* b, engm_bench_result* out);
ENGM_API const char* engm_bench_render(const engm_bench* b);
ENGM_API void engm_bench_free(engm_bench* b);

#ifdef __cplusplus
}
#endif

#endif
