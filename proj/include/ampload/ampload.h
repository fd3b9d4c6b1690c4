#ifndef AMPLOAD_H
#define AMPLOAD_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Every call returns a status; on failure ampload_last_error() holds the
 * message for the calling thread until its next failing call. */
typedef enum {
  AMPLOAD_OK = 0,
  AMPLOAD_E_INVALID_ARGUMENT = 1,
  AMPLOAD_E_STRUCTURAL = 2,
  AMPLOAD_E_RESOURCE = 3,
  AMPLOAD_E_UNSUPPORTED = 4,
  AMPLOAD_E_CONFIG = 5,
  AMPLOAD_E_DOMAIN = 6,
  AMPLOAD_E_NUMERIC = 7,
  AMPLOAD_E_SOLVER = 8,
  AMPLOAD_E_PRECONDITION = 9,
  AMPLOAD_E_NORMALIZATION = 10,
  AMPLOAD_E_DEGENERATE = 11,
  AMPLOAD_E_IO = 12,
  AMPLOAD_E_INTERNAL = 100
} ampload_status;

typedef enum {
  AMPLOAD_METHOD_DHWT_QSVT = 0,
  AMPLOAD_METHOD_MPS = 1,
  AMPLOAD_METHOD_MPS_LIN_QSVT = 2,
  AMPLOAD_METHOD_DHWT_LINEAR = 3
} ampload_method;

typedef enum { AMPLOAD_QSVT_ORACLE = 0, AMPLOAD_QSVT_CIRCUIT = 1 } ampload_qsvt_mode;

typedef struct ampload_result ampload_result;
typedef struct ampload_noise ampload_noise;
typedef struct ampload_bench ampload_bench;

/* Exactly one of coeffs (c0, c1, ...) and roots ("p/q" or decimal strings)
 * must be given, except for AMPLOAD_METHOD_DHWT_LINEAR where both may be
 * empty. gamma <= 0 selects the default phase-solver tolerance. */
typedef struct {
  int n;
  ampload_method method;
  int k0;
  int chi;
  ampload_qsvt_mode qsvt_mode;
  const double* coeffs;
  size_t num_coeffs;
  const char* const* roots;
  size_t num_roots;
  double gamma;
} ampload_request;

/* Not-applicable values are NaN. */
typedef struct {
  int n;
  int k0_or_chi;
  double fidelity;
  double l2;
  double filling_ratio;
  double success_prob;
  int aa_rounds;
  double delta_inf;
  double delta_inf_bound;
  int delta_within_bound;
  size_t gate_count;
  int ancillas;
  int loader_queries;
} ampload_metrics;

typedef struct {
  size_t cx_count;
  double ideal_fidelity;
  double ideal_l2;
  double noisy_fidelity;
  double noisy_l2;
} ampload_noise_metrics;

const char* ampload_version(void);
const char* ampload_last_error(void);
const char* ampload_status_string(ampload_status status);
int ampload_method_parse(const char* name, ampload_method* out);

ampload_status ampload_request_init(ampload_request* req);
ampload_status ampload_run(const ampload_request* req, ampload_result** out);
void ampload_result_free(ampload_result* result);
ampload_status ampload_result_metrics(const ampload_result* result, ampload_metrics* out);
const char* ampload_result_method(const ampload_result* result);
size_t ampload_result_size(const ampload_result* result);
/* Copies len = ampload_result_size() values; im may be NULL. */
ampload_status ampload_result_amplitudes(const ampload_result* result, double* re, double* im, size_t len);
ampload_status ampload_result_target(const ampload_result* result, double* out, size_t len);
/* Header "index,amplitude", then the real part of each amplitude. */
ampload_status ampload_result_write_state_csv(const ampload_result* result, const char* path);
/* Pipeline columns; with noisy != NULL also cx_count,noisy_fidelity,noisy_l2. */
ampload_status ampload_result_write_metrics_csv(const ampload_result* result, const ampload_noise_metrics* noisy,
                                                const char* path);
ampload_status ampload_result_write_profile_svg(const ampload_result* result, const char* path);

ampload_status ampload_noise_calibrated(ampload_noise** out);
ampload_status ampload_noise_ideal(ampload_noise** out);
ampload_status ampload_noise_load(const char* path, ampload_noise** out);
ampload_status ampload_noise_parse(const char* text, ampload_noise** out);
void ampload_noise_free(ampload_noise* noise);
int ampload_noise_is_ideal(const ampload_noise* noise);

/* Noisy loading of the ramp j / C_n. method is AMPLOAD_METHOD_DHWT_LINEAR
 * (k0_or_chi = k0) or AMPLOAD_METHOD_MPS (k0_or_chi = chi). shots = 0 uses
 * the exact readout distribution. */
ampload_status ampload_linear_noise(int n, ampload_method method, int k0_or_chi, const ampload_noise* noise,
                                    size_t shots, uint64_t seed, ampload_noise_metrics* out);

/* suite: "table3", "table6" or "fig4". noise may be NULL (calibrated defaults). */
ampload_status ampload_bench_run(const char* suite, const ampload_noise* noise, ampload_bench** out);
void ampload_bench_free(ampload_bench* bench);
size_t ampload_bench_row_count(const ampload_bench* bench);
size_t ampload_bench_soft_miss_count(const ampload_bench* bench);
size_t ampload_bench_mismatch_count(const ampload_bench* bench);
const char* ampload_bench_mismatch(const ampload_bench* bench, size_t index);
ampload_status ampload_bench_write_csv(const ampload_bench* bench, const char* path);

ampload_status ampload_linear_fidelity(int n, int k0, double* out);
ampload_status ampload_k0_for_infidelity(int n, double eps, double* out);
ampload_status ampload_filling_ratio(const double* coeffs, size_t num_coeffs, int k0, double* out);
ampload_status ampload_delta_inf_bound(const double* coeffs, size_t num_coeffs, int n, int k0, double* derivative,
                                       double* coefficient);

#ifdef __cplusplus
}
#endif

#endif
