#include "neurokey.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "core/analysis.hpp"
#include "core/attack.hpp"
#include "core/experiment.hpp"
#include "core/net_session.hpp"
#include "core/session.hpp"
#include "core/tpm.hpp"

using namespace neurokey;

namespace {

thread_local std::string g_last_error;

nk_status map_code(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidArgument: return NK_ERR_INVALID_ARGUMENT;
        case ErrorCode::Dimension: return NK_ERR_DIMENSION;
        case ErrorCode::Validation: return NK_ERR_VALIDATION;
        case ErrorCode::Encoding: return NK_ERR_ENCODING;
        case ErrorCode::Protocol: return NK_ERR_PROTOCOL;
        case ErrorCode::Framing: return NK_ERR_FRAMING;
        case ErrorCode::Oversize: return NK_ERR_OVERSIZE;
        case ErrorCode::Timeout: return NK_ERR_TIMEOUT;
        case ErrorCode::Network: return NK_ERR_NETWORK;
        case ErrorCode::Io: return NK_ERR_IO;
        case ErrorCode::Internal: return NK_ERR_INTERNAL;
    }
    return NK_ERR_INTERNAL;
}

template <typename F>
nk_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return NK_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return NK_ERR_INTERNAL;
    }
}

void require(bool condition, const char* message) {
    if (!condition) raise(ErrorCode::InvalidArgument, message);
}

TpmParams to_params(const nk_params* p) {
    require(p != nullptr, "params must not be NULL");
    return TpmParams{p->k, p->n, p->l, p->m};
}

nk_params from_params(const TpmParams& p) { return nk_params{p.k, p.n, p.l, p.m}; }

Role to_role(nk_role role) {
    require(role == NK_ROLE_SENDER || role == NK_ROLE_RECIPIENT, "invalid role");
    return static_cast<Role>(role);
}

LearningRule to_rule(nk_rule rule) {
    require(rule == NK_RULE_HEBBIAN || rule == NK_RULE_ANTI_HEBBIAN || rule == NK_RULE_RANDOM_WALK,
            "invalid learning rule");
    return static_cast<LearningRule>(rule);
}

InputMode to_mode(nk_input_mode mode) {
    require(mode == NK_INPUT_EXPLICIT || mode == NK_INPUT_SEED_DERIVED, "invalid input mode");
    return static_cast<InputMode>(mode);
}

SessionConfig to_session_config(const nk_session_config* config) {
    require(config != nullptr, "config must not be NULL");
    SessionConfig out;
    out.params = to_params(&config->params);
    out.rule = to_rule(config->rule);
    out.max_iterations = config->max_iterations;
    out.input_mode = to_mode(config->input_mode);
    out.sync_probe_interval = config->sync_probe_interval;
    out.seeds = SessionSeeds{config->input_seed, config->weight_seed_a, config->weight_seed_b};
    return out;
}

InputVector to_input(const TpmParams& params, const int8_t* input, size_t count) {
    require(input != nullptr, "input must not be NULL");
    if (count != static_cast<size_t>(params.weight_count())) {
        raise(ErrorCode::Dimension, "input length does not match k*n");
    }
    InputVector x(params.k, params.n);
    std::memcpy(x.flat().data(), input, count);
    return x;
}

void copy_weights(const WeightMatrix& w, int8_t* out, size_t cap) {
    require(out != nullptr, "output buffer must not be NULL");
    if (cap < w.size()) {
        raise(ErrorCode::InvalidArgument, "weight buffer smaller than k*n");
    }
    std::memcpy(out, w.flat().data(), w.size());
}

void copy_string(const std::string& s, char* out, size_t cap) {
    require(out != nullptr, "output buffer must not be NULL");
    if (cap < s.size() + 1) {
        raise(ErrorCode::InvalidArgument, "string buffer too small");
    }
    std::memcpy(out, s.c_str(), s.size() + 1);
}

nk_stats to_stats(const RunStatistics& s) {
    nk_stats out;
    out.average = s.average;
    out.minimum = s.minimum;
    out.maximum = s.maximum;
    out.median = s.median;
    out.std_dev = s.std_dev;
    out.ci95_half_width = s.ci95_half_width;
    out.sample_count = s.sample_count;
    out.timeout_count = s.timeout_count;
    out.std_dev_undefined = s.std_dev_undefined ? 1 : 0;
    return out;
}

}  // namespace

struct nk_tpm {
    TreeParityMachine tpm;
};

struct nk_transcript {
    SessionConfig config;
    SessionTranscript transcript;
    std::string key_digest;
};

struct nk_attack_result {
    AttackResult result;
    nk_transcript transcript_view;
    double score = 0.0;
};

struct nk_plan {
    ExperimentPlan plan;
};

struct nk_report {
    std::vector<GridCellReport> cells;
    int l = 0;
};

struct nk_listener {
    TcpListener listener;
};

extern "C" {

const char* nk_version(void) { return "0.1.0"; }

const char* nk_last_error(void) { return g_last_error.c_str(); }

nk_status nk_params_validate(const nk_params* params, char* warning_buf, size_t warning_cap) {
    return guarded([&] {
        const TpmParams p = to_params(params);
        p.validate();
        if (warning_buf != nullptr && warning_cap > 0) {
            std::string joined;
            for (const std::string& w : p.warnings()) {
                if (!joined.empty()) joined += "; ";
                joined += w;
            }
            if (joined.size() + 1 > warning_cap) joined.resize(warning_cap - 1);
            std::memcpy(warning_buf, joined.c_str(), joined.size() + 1);
        }
    });
}

nk_status nk_tpm_create(const nk_params* params, nk_role role, uint64_t weight_seed, nk_tpm** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        const TpmParams p = to_params(params);
        p.validate();
        RandomStream rng(weight_seed);
        *out = new nk_tpm{TreeParityMachine::random(p, to_role(role), rng)};
    });
}

nk_status nk_tpm_create_with_weights(const nk_params* params, nk_role role, const int8_t* weights,
                                     size_t count, nk_tpm** out) {
    return guarded([&] {
        require(out != nullptr && weights != nullptr, "out and weights must not be NULL");
        const TpmParams p = to_params(params);
        p.validate();
        if (count != static_cast<size_t>(p.weight_count())) {
            raise(ErrorCode::Dimension, "weight count does not match k*n");
        }
        WeightMatrix w(p.k, p.n);
        std::memcpy(w.flat().data(), weights, count);
        *out = new nk_tpm{TreeParityMachine(p, to_role(role), std::move(w))};
    });
}

void nk_tpm_free(nk_tpm* tpm) { delete tpm; }

nk_status nk_tpm_get_weights(const nk_tpm* tpm, int8_t* out, size_t cap) {
    return guarded([&] {
        require(tpm != nullptr, "tpm must not be NULL");
        copy_weights(tpm->tpm.weights(), out, cap);
    });
}

nk_status nk_tpm_evaluate(const nk_tpm* tpm, const int8_t* input, size_t count, int8_t* neuron_outputs,
                          size_t neuron_cap, int8_t* output) {
    return guarded([&] {
        require(tpm != nullptr && output != nullptr, "tpm and output must not be NULL");
        const Evaluation eval = tpm->tpm.evaluate(to_input(tpm->tpm.params(), input, count));
        if (neuron_outputs != nullptr) {
            if (neuron_cap < eval.neuron_outputs.size()) {
                raise(ErrorCode::InvalidArgument, "neuron output buffer smaller than k");
            }
            std::memcpy(neuron_outputs, eval.neuron_outputs.data(), eval.neuron_outputs.size());
        }
        *output = eval.output;
    });
}

nk_status nk_tpm_learn(nk_tpm* tpm, nk_rule rule, const int8_t* input, size_t count) {
    return guarded([&] {
        require(tpm != nullptr, "tpm must not be NULL");
        const InputVector x = to_input(tpm->tpm.params(), input, count);
        const Evaluation eval = tpm->tpm.evaluate(x);
        tpm->tpm.learn(to_rule(rule), x, eval);
    });
}

nk_status nk_tpm_key_bits(const nk_tpm* tpm, size_t* out_bits) {
    return guarded([&] {
        require(tpm != nullptr && out_bits != nullptr, "tpm and out_bits must not be NULL");
        *out_bits = key_bit_length(tpm->tpm.params());
    });
}

nk_status nk_tpm_distill_key(const nk_tpm* tpm, uint8_t* out, size_t cap, size_t* out_bits) {
    return guarded([&] {
        require(tpm != nullptr && out != nullptr, "tpm and out must not be NULL");
        const KeyMaterial key = distill_key(tpm->tpm.weights(), tpm->tpm.params().l);
        if (cap < key.bytes.size()) {
            raise(ErrorCode::InvalidArgument, "key buffer too small");
        }
        std::memcpy(out, key.bytes.data(), key.bytes.size());
        if (out_bits != nullptr) *out_bits = key.bit_length;
    });
}

nk_status nk_tpm_key_digest_hex(const nk_tpm* tpm, char* out, size_t cap) {
    return guarded([&] {
        require(tpm != nullptr, "tpm must not be NULL");
        copy_string(key_digest_hex(distill_key(tpm->tpm.weights(), tpm->tpm.params().l)), out, cap);
    });
}

nk_status nk_derive_session_seeds(uint64_t base_seed, int32_t m, int32_t n, int32_t run_index,
                                  uint64_t* input_seed, uint64_t* weight_seed_a, uint64_t* weight_seed_b,
                                  uint64_t* attacker_seed) {
    return guarded([&] {
        const SessionSeeds seeds = derive_session_seeds(base_seed, m, n, run_index);
        if (input_seed != nullptr) *input_seed = seeds.input_seed;
        if (weight_seed_a != nullptr) *weight_seed_a = seeds.weight_seed_a;
        if (weight_seed_b != nullptr) *weight_seed_b = seeds.weight_seed_b;
        if (attacker_seed != nullptr) *attacker_seed = derive_attacker_seed(base_seed, m, n, run_index);
    });
}

nk_status nk_run_session(const nk_session_config* config, nk_transcript** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        const SessionConfig session_config = to_session_config(config);
        SessionTranscript transcript = run_key_agreement(session_config);
        auto handle = std::make_unique<nk_transcript>();
        handle->config = session_config;
        if (transcript.converged) {
            handle->key_digest =
                key_digest_hex(distill_key(transcript.final_weights_a, session_config.params.l));
        }
        handle->transcript = std::move(transcript);
        *out = handle.release();
    });
}

void nk_transcript_free(nk_transcript* transcript) { delete transcript; }

int32_t nk_transcript_converged(const nk_transcript* transcript) {
    return transcript != nullptr && transcript->transcript.converged ? 1 : 0;
}

int64_t nk_transcript_sync_time(const nk_transcript* transcript) {
    return transcript != nullptr ? transcript->transcript.sync_time : -1;
}

int64_t nk_transcript_record_count(const nk_transcript* transcript) {
    return transcript != nullptr ? static_cast<int64_t>(transcript->transcript.records.size()) : 0;
}

nk_status nk_transcript_record(const nk_transcript* transcript, int64_t index, int32_t* output_a,
                               int32_t* output_b, int32_t* matched) {
    return guarded([&] {
        require(transcript != nullptr, "transcript must not be NULL");
        const auto& records = transcript->transcript.records;
        if (index < 0 || index >= static_cast<int64_t>(records.size())) {
            raise(ErrorCode::InvalidArgument, "record index out of range");
        }
        const IterationRecord& r = records[static_cast<size_t>(index)];
        if (output_a != nullptr) *output_a = r.output_a;
        if (output_b != nullptr) *output_b = r.output_b;
        if (matched != nullptr) *matched = r.matched ? 1 : 0;
    });
}

nk_status nk_transcript_final_weights(const nk_transcript* transcript, int32_t party, int8_t* out,
                                      size_t cap) {
    return guarded([&] {
        require(transcript != nullptr, "transcript must not be NULL");
        require(party == 0 || party == 1, "party must be 0 (A) or 1 (B)");
        const WeightMatrix& w =
            party == 0 ? transcript->transcript.final_weights_a : transcript->transcript.final_weights_b;
        if (w.size() == 0) {
            raise(ErrorCode::Validation, "final weights for this party are not available");
        }
        copy_weights(w, out, cap);
    });
}

nk_status nk_transcript_key_digest_hex(const nk_transcript* transcript, char* out, size_t cap) {
    return guarded([&] {
        require(transcript != nullptr, "transcript must not be NULL");
        copy_string(transcript->key_digest, out, cap);
    });
}

nk_status nk_transcript_write_jsonl(const nk_transcript* transcript, const char* path) {
    return guarded([&] {
        require(transcript != nullptr && path != nullptr, "transcript and path must not be NULL");
        std::ofstream out(path, std::ios::trunc);
        if (!out) {
            raise(ErrorCode::Io, std::string("cannot open for writing: ") + path);
        }
        write_transcript_jsonl(transcript->transcript, transcript->config, out);
        if (!out) {
            raise(ErrorCode::Io, std::string("write failed: ") + path);
        }
    });
}

nk_status nk_transcript_save_weights(const nk_transcript* transcript, const char* path) {
    return guarded([&] {
        require(transcript != nullptr && path != nullptr, "transcript and path must not be NULL");
        const WeightMatrix& w = transcript->transcript.final_weights_a.size() > 0
                                    ? transcript->transcript.final_weights_a
                                    : transcript->transcript.final_weights_b;
        if (w.size() == 0) {
            raise(ErrorCode::Validation, "transcript has no final weights");
        }
        save_weight_ensemble({w}, transcript->config.params.l, path);
    });
}

nk_status nk_run_attack(const nk_session_config* config, uint64_t attacker_seed, int32_t attacker_rule,
                        nk_attack_result** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        AttackSession attack;
        attack.config = to_session_config(config);
        attack.attacker_weight_seed = attacker_seed;
        attack.attacker_rule =
            attacker_rule < 0 ? attack.config.rule : to_rule(static_cast<nk_rule>(attacker_rule));
        AttackResult result = eavesdrop_session(attack);
        auto handle = std::make_unique<nk_attack_result>();
        handle->score = result.score;
        handle->transcript_view.config = attack.config;
        if (result.transcript.converged) {
            handle->transcript_view.key_digest =
                key_digest_hex(distill_key(result.transcript.final_weights_a, attack.config.params.l));
        }
        handle->result = std::move(result);
        handle->transcript_view.transcript = handle->result.transcript;
        *out = handle.release();
    });
}

void nk_attack_result_free(nk_attack_result* result) { delete result; }

double nk_attack_score(const nk_attack_result* result) { return result != nullptr ? result->score : -1.0; }

const nk_transcript* nk_attack_transcript(const nk_attack_result* result) {
    return result != nullptr ? &result->transcript_view : nullptr;
}

nk_status nk_attack_final_weights(const nk_attack_result* result, int8_t* out, size_t cap) {
    return guarded([&] {
        require(result != nullptr, "result must not be NULL");
        copy_weights(result->result.attacker_final_weights, out, cap);
    });
}

nk_status nk_entropy_bits(const double* probabilities, size_t count, double* out) {
    return guarded([&] {
        require(probabilities != nullptr && out != nullptr, "probabilities and out must not be NULL");
        *out = entropy_bits(std::span<const double>(probabilities, count));
    });
}

nk_status nk_effective_key_length(const nk_params* params, double avg_entropy, int64_t* out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        *out = effective_key_length(to_params(params), avg_entropy);
    });
}

nk_status nk_analyze_ensemble_file(const char* ensemble_path, const char* entropy_csv_path,
                                   const char* histogram_csv_path, int32_t pooled, double* out_avg_entropy,
                                   int64_t* out_key_bits, int64_t* out_count) {
    return guarded([&] {
        require(ensemble_path != nullptr, "ensemble_path must not be NULL");
        int l = 0;
        const std::vector<WeightMatrix> ensemble = load_weight_ensemble(ensemble_path, &l);
        const WeightHistogram histogram = weight_histogram(ensemble, l);
        const EntropyReport report = estimate_weight_entropy(histogram, pooled != 0);
        if (entropy_csv_path != nullptr) {
            std::ofstream out(entropy_csv_path, std::ios::trunc);
            if (!out) raise(ErrorCode::Io, std::string("cannot open for writing: ") + entropy_csv_path);
            write_entropy_csv(histogram, report, out);
        }
        if (histogram_csv_path != nullptr) {
            std::ofstream out(histogram_csv_path, std::ios::trunc);
            if (!out) raise(ErrorCode::Io, std::string("cannot open for writing: ") + histogram_csv_path);
            write_histogram_csv(histogram, out);
        }
        if (out_avg_entropy != nullptr) *out_avg_entropy = report.average_entropy;
        if (out_key_bits != nullptr) *out_key_bits = report.effective_key_length;
        if (out_count != nullptr) *out_count = static_cast<int64_t>(ensemble.size());
    });
}

nk_status nk_plan_create(int32_t k, int32_t l, const int32_t* n_values, size_t n_count,
                         const int32_t* m_values, size_t m_count, int32_t runs_per_cell, nk_rule rule,
                         uint64_t base_seed, int32_t max_iterations, int32_t attack_enabled, nk_plan** out) {
    return guarded([&] {
        require(out != nullptr && n_values != nullptr && m_values != nullptr,
                "out, n_values and m_values must not be NULL");
        ExperimentPlan plan;
        plan.k = k;
        plan.l = l;
        plan.n_values.assign(n_values, n_values + n_count);
        plan.m_values.assign(m_values, m_values + m_count);
        plan.runs_per_cell = runs_per_cell;
        plan.rule = to_rule(rule);
        plan.base_seed = base_seed;
        plan.max_iterations = max_iterations;
        plan.attack_enabled = attack_enabled != 0;
        plan.validate();
        *out = new nk_plan{std::move(plan)};
    });
}

nk_status nk_plan_from_json_file(const char* path, const nk_plan* base, nk_plan** out) {
    return guarded([&] {
        require(path != nullptr && out != nullptr, "path and out must not be NULL");
        std::ifstream in(path);
        if (!in) {
            raise(ErrorCode::Io, std::string("cannot open plan file: ") + path);
        }
        const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        ExperimentPlan plan = plan_from_json(text, base != nullptr ? base->plan : ExperimentPlan{});
        plan.validate();
        *out = new nk_plan{std::move(plan)};
    });
}

nk_status nk_plan_to_json_file(const nk_plan* plan, const char* path) {
    return guarded([&] {
        require(plan != nullptr && path != nullptr, "plan and path must not be NULL");
        std::ofstream out(path, std::ios::trunc);
        if (!out) {
            raise(ErrorCode::Io, std::string("cannot open for writing: ") + path);
        }
        out << plan_to_json(plan->plan) << '\n';
    });
}

void nk_plan_free(nk_plan* plan) { delete plan; }

nk_status nk_run_batch(const nk_plan* plan, int32_t threads, nk_progress_fn progress, void* user,
                       nk_report** out) {
    return guarded([&] {
        require(plan != nullptr && out != nullptr, "plan and out must not be NULL");
        ProgressFn fn;
        if (progress != nullptr) {
            fn = [progress, user](int done, int total) { progress(user, done, total); };
        }
        auto report = std::make_unique<nk_report>();
        report->cells = run_batch(plan->plan, threads, fn);
        report->l = plan->plan.l;
        *out = report.release();
    });
}

void nk_report_free(nk_report* report) { delete report; }

size_t nk_report_cell_count(const nk_report* report) { return report != nullptr ? report->cells.size() : 0; }

nk_status nk_report_cell(const nk_report* report, size_t index, nk_cell_stats* out) {
    return guarded([&] {
        require(report != nullptr && out != nullptr, "report and out must not be NULL");
        if (index >= report->cells.size()) {
            raise(ErrorCode::InvalidArgument, "cell index out of range");
        }
        const GridCellReport& cell = report->cells[index];
        out->m = cell.m;
        out->n = cell.n;
        out->sync_time = to_stats(cell.sync_time);
        out->entropy_avg = cell.entropy.average_entropy;
        out->key_length_bits = cell.entropy.effective_key_length;
        out->has_attack = cell.has_attack ? 1 : 0;
        out->attack_score = to_stats(cell.attack_score);
    });
}

nk_status nk_report_export(const nk_report* report, const char* format, const char* path) {
    return guarded([&] {
        require(report != nullptr && format != nullptr && path != nullptr,
                "report, format and path must not be NULL");
        export_report(report->cells, format, path);
    });
}

nk_status nk_report_save_weights(const nk_report* report, const char* directory) {
    return guarded([&] {
        require(report != nullptr && directory != nullptr, "report and directory must not be NULL");
        std::filesystem::create_directories(directory);
        for (const GridCellReport& cell : report->cells) {
            if (cell.weight_ensemble.empty()) continue;
            const std::filesystem::path path = std::filesystem::path(directory) /
                ("weights_m" + std::to_string(cell.m) + "_n" + std::to_string(cell.n) + ".nkw");
            save_weight_ensemble(cell.weight_ensemble, report->l, path.string());
        }
    });
}

namespace {

PeerConfig to_peer_config(const nk_peer_config* config) {
    require(config != nullptr, "config must not be NULL");
    PeerConfig out;
    out.params = to_params(&config->params);
    out.rule = to_rule(config->rule);
    out.input_mode = to_mode(config->input_mode);
    out.max_iterations = config->max_iterations;
    out.sync_probe_interval = config->sync_probe_interval;
    out.weight_seed = config->weight_seed;
    out.input_seed = config->input_seed;
    return out;
}

nk_transcript* wrap_net_result(NetworkedSessionResult&& result, const PeerConfig& config, bool initiator) {
    auto handle = std::make_unique<nk_transcript>();
    handle->config.params = config.params;
    handle->config.rule = config.rule;
    handle->config.max_iterations = config.max_iterations;
    handle->config.input_mode = config.input_mode;
    handle->config.sync_probe_interval = config.sync_probe_interval;
    handle->config.seeds.input_seed = config.input_seed;
    // The peer's weight seed is private and unknown.
    if (initiator) {
        handle->config.seeds.weight_seed_a = config.weight_seed;
    } else {
        handle->config.seeds.weight_seed_b = config.weight_seed;
    }
    handle->key_digest = result.key_digest;
    handle->transcript = std::move(result.transcript);
    return handle.release();
}

}  // namespace

nk_status nk_listener_create(const char* bind_host, uint16_t port, nk_listener** out) {
    return guarded([&] {
        require(out != nullptr, "out must not be NULL");
        *out = new nk_listener{TcpListener(port, bind_host != nullptr ? bind_host : "0.0.0.0")};
    });
}

uint16_t nk_listener_port(const nk_listener* listener) {
    return listener != nullptr ? listener->listener.port() : 0;
}

void nk_listener_free(nk_listener* listener) { delete listener; }

nk_status nk_serve_session(nk_listener* listener, const nk_peer_config* config, const char* capture_path,
                           int32_t timeout_ms, nk_transcript** out) {
    return guarded([&] {
        require(listener != nullptr && out != nullptr, "listener and out must not be NULL");
        const PeerConfig peer = to_peer_config(config);
        NetworkedSessionResult result = serve_session(
            listener->listener, peer, capture_path != nullptr ? capture_path : "", timeout_ms);
        *out = wrap_net_result(std::move(result), peer, false);
    });
}

nk_status nk_connect_session(const char* host, uint16_t port, const nk_peer_config* config,
                             const char* capture_path, int32_t timeout_ms, nk_transcript** out) {
    return guarded([&] {
        require(host != nullptr && out != nullptr, "host and out must not be NULL");
        const PeerConfig peer = to_peer_config(config);
        NetworkedSessionResult result =
            connect_session(host, port, peer, capture_path != nullptr ? capture_path : "", timeout_ms);
        *out = wrap_net_result(std::move(result), peer, true);
    });
}

nk_status nk_attack_replay(const char* capture_path, uint64_t attacker_seed, int32_t attacker_rule,
                           nk_replay_result* out, int8_t* weights_out, size_t weights_cap) {
    return guarded([&] {
        require(capture_path != nullptr && out != nullptr, "capture_path and out must not be NULL");
        std::optional<LearningRule> rule;
        if (attacker_rule >= 0) rule = to_rule(static_cast<nk_rule>(attacker_rule));
        const ReplayAttackResult result = replay_attack_from_capture(capture_path, attacker_seed, rule);
        out->params = from_params(result.params);
        out->probe_seen = result.probe_seen ? 1 : 0;
        out->probe_digest_match = result.probe_digest_match ? 1 : 0;
        out->iterations_seen = result.iterations_seen;
        out->updates_applied = result.updates_applied;
        copy_string(result.attacker_key_digest, out->attacker_key_digest, sizeof out->attacker_key_digest);
        if (weights_out != nullptr) {
            copy_weights(result.attacker_weights, weights_out, weights_cap);
        }
    });
}

}  // extern "C"
