/*
 * neurokey - Tree Parity Machine key agreement with non-binary input vectors.
 *
 * C API of the shared library. All functions return nk_status; on any
 * failure nk_last_error() carries a thread-local message. Handles are
 * opaque and freed with their matching *_free function.
 */

#ifndef NEUROKEY_H
#define NEUROKEY_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum nk_status {
    NK_OK                   = 0,
    NK_ERR_INVALID_ARGUMENT = 1,
    NK_ERR_DIMENSION        = 2,
    NK_ERR_VALIDATION       = 3,
    NK_ERR_ENCODING         = 4,
    NK_ERR_PROTOCOL         = 5,
    NK_ERR_FRAMING          = 6,
    NK_ERR_OVERSIZE         = 7,
    NK_ERR_TIMEOUT          = 8,
    NK_ERR_NETWORK          = 9,
    NK_ERR_IO               = 10,
    NK_ERR_INTERNAL         = 11
} nk_status;

/* Library version string, e.g. "0.1.0". */
const char* nk_version(void);

/* Message for the last failing call on this thread; never NULL. */
const char* nk_last_error(void);

/* Network shape: k neurons, n inputs per neuron, weights in [-l, l],
 * input values in +-{1..m}. */
typedef struct nk_params {
    int32_t k;
    int32_t n;
    int32_t l;
    int32_t m;
} nk_params;

typedef enum nk_role {
    NK_ROLE_SENDER    = 0,
    NK_ROLE_RECIPIENT = 1
} nk_role;

typedef enum nk_rule {
    NK_RULE_HEBBIAN      = 0,
    NK_RULE_ANTI_HEBBIAN = 1,
    NK_RULE_RANDOM_WALK  = 2
} nk_rule;

typedef enum nk_input_mode {
    NK_INPUT_EXPLICIT     = 0,
    NK_INPUT_SEED_DERIVED = 1
} nk_input_mode;

/* Validates parameters. A configuration that is legal but insecure
 * (m >= l) still returns NK_OK and places a warning in warning_buf when
 * one is given; the buffer holds an empty string otherwise. */
nk_status nk_params_validate(const nk_params* params, char* warning_buf, size_t warning_cap);

/* ------------------------------------------------------------------ */
/* Tree Parity Machine                                                 */

typedef struct nk_tpm nk_tpm;

/* Creates a TPM with uniform random weights drawn from weight_seed. */
nk_status nk_tpm_create(const nk_params* params, nk_role role, uint64_t weight_seed, nk_tpm** out);

/* Creates a TPM from explicit row-major weights (count = k*n). */
nk_status nk_tpm_create_with_weights(const nk_params* params, nk_role role, const int8_t* weights,
                                     size_t count, nk_tpm** out);

void nk_tpm_free(nk_tpm* tpm);

/* Copies the row-major k*n weights; cap must be at least k*n. */
nk_status nk_tpm_get_weights(const nk_tpm* tpm, int8_t* out, size_t cap);

/* Evaluates a row-major k*n input vector. neuron_outputs may be NULL;
 * when given its capacity must be at least k. output receives +-1. */
nk_status nk_tpm_evaluate(const nk_tpm* tpm, const int8_t* input, size_t count, int8_t* neuron_outputs,
                          size_t neuron_cap, int8_t* output);

/* Applies the learning rule for the given input (the caller decides
 * whether the protocol gate allows the update). Weights stay in [-l, l]. */
nk_status nk_tpm_learn(nk_tpm* tpm, nk_rule rule, const int8_t* input, size_t count);

/* Number of key bits distilled from this TPM: ceil(k*n*log2(2l+1)). */
nk_status nk_tpm_key_bits(const nk_tpm* tpm, size_t* out_bits);

/* Distills the key: bits packed MSB-first, cap in bytes must cover
 * (key_bits+7)/8. out_bits (optional) receives the bit length. */
nk_status nk_tpm_distill_key(const nk_tpm* tpm, uint8_t* out, size_t cap, size_t* out_bits);

/* Hex SHA-256 of the distilled key; cap must be at least 65. */
nk_status nk_tpm_key_digest_hex(const nk_tpm* tpm, char* out, size_t cap);

/* ------------------------------------------------------------------ */
/* Key agreement sessions (in-process simulator)                       */

typedef struct nk_session_config {
    nk_params params;
    nk_rule rule;
    int32_t max_iterations;       /* >= 1; 10000 is the usual default */
    nk_input_mode input_mode;
    int32_t sync_probe_interval;  /* networked sessions only; >= 1 */
    uint64_t input_seed;          /* shared public input stream */
    uint64_t weight_seed_a;       /* sender init */
    uint64_t weight_seed_b;       /* recipient init */
} nk_session_config;

typedef struct nk_transcript nk_transcript;

/* Stable seed derivation used by the batch runner: fills the session and
 * attacker seeds of run run_index in grid cell (m, n) under base_seed,
 * so any sweep run can be replayed as a single session. Output pointers
 * may be NULL. */
nk_status nk_derive_session_seeds(uint64_t base_seed, int32_t m, int32_t n, int32_t run_index,
                                  uint64_t* input_seed, uint64_t* weight_seed_a, uint64_t* weight_seed_b,
                                  uint64_t* attacker_seed);

/* Runs the full mutual-learning loop. A timeout is not an error: the
 * transcript reports converged = 0. */
nk_status nk_run_session(const nk_session_config* config, nk_transcript** out);

void nk_transcript_free(nk_transcript* transcript);

int32_t nk_transcript_converged(const nk_transcript* transcript);

/* Iterations (output exchanges) until full synchronization. */
int64_t nk_transcript_sync_time(const nk_transcript* transcript);

int64_t nk_transcript_record_count(const nk_transcript* transcript);

nk_status nk_transcript_record(const nk_transcript* transcript, int64_t index, int32_t* output_a,
                               int32_t* output_b, int32_t* matched);

/* party: 0 = sender (A), 1 = recipient (B). cap must cover k*n. */
nk_status nk_transcript_final_weights(const nk_transcript* transcript, int32_t party, int8_t* out,
                                      size_t cap);

/* Hex SHA-256 of the distilled key (empty string when not converged);
 * cap must be at least 65. */
nk_status nk_transcript_key_digest_hex(const nk_transcript* transcript, char* out, size_t cap);

/* JSON-lines export: header, one line per iteration, summary. */
nk_status nk_transcript_write_jsonl(const nk_transcript* transcript, const char* path);

/* Saves party A's final weights as a one-entry weight-ensemble file. */
nk_status nk_transcript_save_weights(const nk_transcript* transcript, const char* path);

/* ------------------------------------------------------------------ */
/* Passive man-in-the-middle attack                                    */

typedef struct nk_attack_result nk_attack_result;

/* Runs the A-B agreement with an eavesdropper that updates only when all
 * three outputs coincide. attacker_rule -1 uses the session rule. */
nk_status nk_run_attack(const nk_session_config* config, uint64_t attacker_seed, int32_t attacker_rule,
                        nk_attack_result** out);

void nk_attack_result_free(nk_attack_result* result);

/* Fraction of weights matching party A's final weights, in [0, 1]. */
double nk_attack_score(const nk_attack_result* result);

/* Borrowed view of the A-B transcript; owned by the attack result. */
const nk_transcript* nk_attack_transcript(const nk_attack_result* result);

nk_status nk_attack_final_weights(const nk_attack_result* result, int8_t* out, size_t cap);

/* ------------------------------------------------------------------ */
/* Entropy and key-length analysis                                     */

/* Shannon entropy in bits; probabilities must sum to 1 within 1e-9. */
nk_status nk_entropy_bits(const double* probabilities, size_t count, double* out);

/* floor(k * n * avg_entropy); avg_entropy in [0, log2(2l+1)]. */
nk_status nk_effective_key_length(const nk_params* params, double avg_entropy, int64_t* out);

/* Analyzes a weight-ensemble file: per-position entropy CSV and
 * histogram CSV (either path may be NULL to skip), pooled != 0 switches
 * the estimator to a single pooled value histogram. Outputs the average
 * entropy, the effective key length and the ensemble size. */
nk_status nk_analyze_ensemble_file(const char* ensemble_path, const char* entropy_csv_path,
                                   const char* histogram_csv_path, int32_t pooled, double* out_avg_entropy,
                                   int64_t* out_key_bits, int64_t* out_count);

/* ------------------------------------------------------------------ */
/* Batch experiments                                                   */

typedef struct nk_plan nk_plan;

/* Grid plan: one cell per (m, n) pair; k and l come from base. */
nk_status nk_plan_create(int32_t k, int32_t l, const int32_t* n_values, size_t n_count,
                         const int32_t* m_values, size_t m_count, int32_t runs_per_cell, nk_rule rule,
                         uint64_t base_seed, int32_t max_iterations, int32_t attack_enabled, nk_plan** out);

/* Loads a plan from JSON; fields present in the file override base
 * (which may be NULL for library defaults). */
nk_status nk_plan_from_json_file(const char* path, const nk_plan* base, nk_plan** out);

nk_status nk_plan_to_json_file(const nk_plan* plan, const char* path);

void nk_plan_free(nk_plan* plan);

typedef struct nk_stats {
    double average;
    double minimum;
    double maximum;
    double median;
    double std_dev;
    double ci95_half_width;     /* 1.96 * std_dev / sqrt(n) */
    int64_t sample_count;       /* converged runs */
    int64_t timeout_count;
    int32_t std_dev_undefined;  /* single-sample cell */
} nk_stats;

typedef struct nk_cell_stats {
    int32_t m;
    int32_t n;
    nk_stats sync_time;
    double entropy_avg;
    int64_t key_length_bits;
    int32_t has_attack;
    nk_stats attack_score;
} nk_cell_stats;

typedef struct nk_report nk_report;

typedef void (*nk_progress_fn)(void* user, int32_t cells_done, int32_t cells_total);

/* Runs every cell of the plan; threads <= 0 uses the hardware
 * concurrency. Results are deterministic in the plan's base_seed
 * regardless of the thread count. progress may be NULL. */
nk_status nk_run_batch(const nk_plan* plan, int32_t threads, nk_progress_fn progress, void* user,
                       nk_report** out);

void nk_report_free(nk_report* report);

size_t nk_report_cell_count(const nk_report* report);

nk_status nk_report_cell(const nk_report* report, size_t index, nk_cell_stats* out);

/* format "csv" or "json"; also writes per-cell histogram CSV siblings. */
nk_status nk_report_export(const nk_report* report, const char* format, const char* path);

/* Writes one weight-ensemble file per cell into the directory. */
nk_status nk_report_save_weights(const nk_report* report, const char* directory);

/* ------------------------------------------------------------------ */
/* Networked two-peer exchange                                         */

typedef struct nk_peer_config {
    nk_params params;
    nk_rule rule;
    nk_input_mode input_mode;
    int32_t max_iterations;
    int32_t sync_probe_interval;
    uint64_t weight_seed;
    uint64_t input_seed;  /* the initiator's value wins in seed-derived mode */
} nk_peer_config;

typedef struct nk_listener nk_listener;

/* bind_host NULL binds 0.0.0.0; port 0 picks a free port. */
nk_status nk_listener_create(const char* bind_host, uint16_t port, nk_listener** out);

uint16_t nk_listener_port(const nk_listener* listener);

void nk_listener_free(nk_listener* listener);

/* Accepts one connection and runs a session as responder/recipient.
 * capture_path (optional) mirrors every frame to a JSON-lines file. */
nk_status nk_serve_session(nk_listener* listener, const nk_peer_config* config, const char* capture_path,
                           int32_t timeout_ms, nk_transcript** out);

/* Connects and runs a session as initiator/sender. */
nk_status nk_connect_session(const char* host, uint16_t port, const nk_peer_config* config,
                             const char* capture_path, int32_t timeout_ms, nk_transcript** out);

/* Offline eavesdropper trained on a captured session. */
typedef struct nk_replay_result {
    nk_params params;
    int32_t probe_seen;
    int32_t probe_digest_match;  /* attacker weights match the final sync probe */
    int64_t iterations_seen;
    int64_t updates_applied;
    char attacker_key_digest[65];
} nk_replay_result;

/* attacker_rule -1 uses the captured session's rule. weights_out may be
 * NULL; when given, cap must cover k*n. */
nk_status nk_attack_replay(const char* capture_path, uint64_t attacker_seed, int32_t attacker_rule,
                           nk_replay_result* out, int8_t* weights_out, size_t weights_cap);

#ifdef __cplusplus
}
#endif

#endif /* NEUROKEY_H */
