// neurokey CLI: simulation, sweeps, attacks, analysis and the networked
// two-peer exchange, all through the libneurokey C API.

#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neurokey.h"

namespace {

int fail(nk_status status) {
    std::fprintf(stderr, "error: %s\n", nk_last_error());
    return status == NK_OK ? 1 : static_cast<int>(status);
}

#define CHECK(call)                                 \
    do {                                            \
        const nk_status status_ = (call);           \
        if (status_ != NK_OK) return fail(status_); \
    } while (0)

nk_rule parse_rule(const std::string& name) {
    if (name == "hebbian") return NK_RULE_HEBBIAN;
    if (name == "anti-hebbian" || name == "antihebbian") return NK_RULE_ANTI_HEBBIAN;
    if (name == "random-walk" || name == "randomwalk") return NK_RULE_RANDOM_WALK;
    throw CLI::ValidationError("--rule", "must be hebbian, anti-hebbian or random-walk");
}

nk_input_mode parse_mode(const std::string& name) {
    if (name == "explicit") return NK_INPUT_EXPLICIT;
    if (name == "seed-derived" || name == "seed") return NK_INPUT_SEED_DERIVED;
    throw CLI::ValidationError("--mode", "must be explicit or seed-derived");
}

uint64_t random_seed() {
    std::random_device rd;
    return (static_cast<uint64_t>(rd()) << 32) ^ rd();
}

void warn_on_params(const nk_params& params) {
    char warning[256] = "";
    if (nk_params_validate(&params, warning, sizeof warning) == NK_OK && warning[0] != '\0') {
        std::fprintf(stderr, "warning: %s\n", warning);
    }
}

struct CommonFlags {
    int k = 3;
    int n = 40;
    int l = 5;
    int m = 1;
    std::string rule = "hebbian";
    uint64_t seed = 0;
    bool seed_set = false;
    int max_iter = 10000;

    void add_to(CLI::App* cmd, bool with_seed = true) {
        cmd->add_option("--k", k, "Neurons (K)")->check(CLI::PositiveNumber);
        cmd->add_option("--n", n, "Inputs per neuron (N)")->check(CLI::PositiveNumber);
        cmd->add_option("--l", l, "Weight bound (L)")->check(CLI::PositiveNumber);
        cmd->add_option("--m", m, "Input magnitude bound (M)")->check(CLI::PositiveNumber);
        cmd->add_option("--rule", rule, "Learning rule: hebbian, anti-hebbian, random-walk");
        if (with_seed) {
            cmd->add_option("--seed", seed, "Base seed (random when omitted)")
                ->each([this](const std::string&) { seed_set = true; });
        }
        cmd->add_option("--max-iter", max_iter, "Iteration cap per session")->check(CLI::PositiveNumber);
    }

    nk_params params() const { return nk_params{k, n, l, m}; }

    uint64_t seed_or_random() { return seed_set ? seed : random_seed(); }
};

void print_transcript_summary(const nk_transcript* transcript, const std::string& format) {
    const bool converged = nk_transcript_converged(transcript) != 0;
    const int64_t sync_time = nk_transcript_sync_time(transcript);
    char digest[65] = "";
    nk_transcript_key_digest_hex(transcript, digest, sizeof digest);
    if (format == "json") {
        std::printf("{\"converged\": %s, \"sync_time\": %" PRId64 ", \"key_digest\": ", converged ? "true" : "false",
                    sync_time);
        if (converged) {
            std::printf("\"%s\"}\n", digest);
        } else {
            std::printf("null}\n");
        }
    } else {
        std::printf("converged:  %s\n", converged ? "yes" : "no");
        std::printf("sync time:  %" PRId64 " iterations\n", sync_time);
        if (converged) {
            std::printf("key digest: %s\n", digest);
        }
    }
}

int run_simulate(CommonFlags& flags, int run_index, const std::string& out_path,
                 const std::string& weights_path, const std::string& format) {
    warn_on_params(flags.params());
    nk_session_config config{};
    config.params = flags.params();
    config.rule = parse_rule(flags.rule);
    config.max_iterations = flags.max_iter;
    config.input_mode = NK_INPUT_EXPLICIT;
    config.sync_probe_interval = 1;
    const uint64_t base = flags.seed_or_random();
    CHECK(nk_derive_session_seeds(base, flags.m, flags.n, run_index, &config.input_seed,
                                  &config.weight_seed_a, &config.weight_seed_b, nullptr));
    std::fprintf(stderr, "session: k=%d n=%d l=%d m=%d rule=%s seed=%" PRIu64 " run=%d\n", flags.k, flags.n,
                 flags.l, flags.m, flags.rule.c_str(), base, run_index);

    nk_transcript* transcript = nullptr;
    CHECK(nk_run_session(&config, &transcript));
    print_transcript_summary(transcript, format);
    if (!out_path.empty()) {
        const nk_status status = nk_transcript_write_jsonl(transcript, out_path.c_str());
        if (status != NK_OK) {
            nk_transcript_free(transcript);
            return fail(status);
        }
        std::fprintf(stderr, "transcript written to %s\n", out_path.c_str());
    }
    if (!weights_path.empty()) {
        const nk_status status = nk_transcript_save_weights(transcript, weights_path.c_str());
        if (status != NK_OK) {
            nk_transcript_free(transcript);
            return fail(status);
        }
        std::fprintf(stderr, "final weights written to %s\n", weights_path.c_str());
    }
    nk_transcript_free(transcript);
    return 0;
}

void progress_to_stderr(void*, int32_t done, int32_t total) {
    std::fprintf(stderr, "cell %d/%d done\n", done, total);
}

int run_sweep(CommonFlags& flags, const std::string& plan_path, std::vector<int>& n_values,
              std::vector<int>& m_values, int runs, bool attack, int threads, const std::string& format,
              const std::string& out_path, const std::string& weights_dir, bool quiet) {
    if (n_values.empty()) n_values = {flags.n};
    if (m_values.empty()) m_values = {flags.m};
    nk_plan* plan = nullptr;
    CHECK(nk_plan_create(flags.k, flags.l, n_values.data(), n_values.size(), m_values.data(),
                         m_values.size(), runs, parse_rule(flags.rule), flags.seed_or_random(),
                         flags.max_iter, attack ? 1 : 0, &plan));
    if (!plan_path.empty()) {
        nk_plan* merged = nullptr;
        const nk_status status = nk_plan_from_json_file(plan_path.c_str(), plan, &merged);
        nk_plan_free(plan);
        if (status != NK_OK) return fail(status);
        plan = merged;
    }

    for (int n : n_values) {
        for (int m : m_values) {
            warn_on_params(nk_params{flags.k, n, flags.l, m});
        }
    }

    nk_report* report = nullptr;
    const nk_status status =
        nk_run_batch(plan, threads, quiet ? nullptr : progress_to_stderr, nullptr, &report);
    nk_plan_free(plan);
    if (status != NK_OK) return fail(status);

    int rc = 0;
    if (!out_path.empty()) {
        const nk_status export_status = nk_report_export(report, format.c_str(), out_path.c_str());
        if (export_status != NK_OK) {
            nk_report_free(report);
            return fail(export_status);
        }
        std::fprintf(stderr, "report written to %s\n", out_path.c_str());
    } else {
        // Compact cell summary to stdout.
        std::printf("m,n,sync_median,sync_avg,entropy_avg,key_length_bits%s,timeouts\n",
                    attack ? ",attack_median,attack_max" : "");
        const size_t cells = nk_report_cell_count(report);
        for (size_t i = 0; i < cells; ++i) {
            nk_cell_stats cell{};
            if (nk_report_cell(report, i, &cell) != NK_OK) break;
            std::printf("%d,%d,%g,%g,%g,%" PRId64, cell.m, cell.n, cell.sync_time.median,
                        cell.sync_time.average, cell.entropy_avg, cell.key_length_bits);
            if (attack) {
                std::printf(",%g,%g", cell.attack_score.median, cell.attack_score.maximum);
            }
            std::printf(",%" PRId64 "\n", cell.sync_time.timeout_count);
        }
    }
    if (!weights_dir.empty()) {
        const nk_status save_status = nk_report_save_weights(report, weights_dir.c_str());
        if (save_status != NK_OK) {
            nk_report_free(report);
            return fail(save_status);
        }
        std::fprintf(stderr, "weight ensembles written to %s\n", weights_dir.c_str());
    }
    nk_report_free(report);
    return rc;
}

int run_replay(const std::string& capture_path, uint64_t attacker_seed, const std::string& format) {
    nk_replay_result result{};
    CHECK(nk_attack_replay(capture_path.c_str(), attacker_seed, -1, &result, nullptr, 0));
    if (format == "json") {
        std::printf("{\"iterations_seen\": %" PRId64 ", \"updates_applied\": %" PRId64
                    ", \"probe_seen\": %s, \"probe_digest_match\": %s, \"attacker_key_digest\": \"%s\"}\n",
                    result.iterations_seen, result.updates_applied, result.probe_seen ? "true" : "false",
                    result.probe_digest_match ? "true" : "false", result.attacker_key_digest);
    } else {
        std::printf("capture:            k=%d n=%d l=%d m=%d\n", result.params.k, result.params.n,
                    result.params.l, result.params.m);
        std::printf("iterations seen:    %" PRId64 "\n", result.iterations_seen);
        std::printf("updates applied:    %" PRId64 "\n", result.updates_applied);
        std::printf("attacker digest:    %s\n", result.attacker_key_digest);
        if (result.probe_seen) {
            std::printf("full key recovery:  %s\n", result.probe_digest_match ? "YES (digest match)" : "no");
        } else {
            std::printf("full key recovery:  unknown (no sync probe in capture)\n");
        }
    }
    return 0;
}

int run_analyze(const std::string& in_path, const std::string& entropy_csv, const std::string& histogram_csv,
                bool pooled, const std::string& format) {
    double avg_entropy = 0.0;
    int64_t key_bits = 0;
    int64_t count = 0;
    CHECK(nk_analyze_ensemble_file(in_path.c_str(), entropy_csv.empty() ? nullptr : entropy_csv.c_str(),
                                   histogram_csv.empty() ? nullptr : histogram_csv.c_str(), pooled ? 1 : 0,
                                   &avg_entropy, &key_bits, &count));
    if (format == "json") {
        std::printf("{\"ensemble_size\": %" PRId64 ", \"entropy_avg\": %.6f, \"key_length_bits\": %" PRId64
                    ", \"estimator\": \"%s\"}\n",
                    count, avg_entropy, key_bits, pooled ? "pooled" : "per-position");
    } else {
        std::printf("ensemble size:       %" PRId64 "\n", count);
        std::printf("average entropy:     %.6f bits/weight (%s)\n", avg_entropy,
                    pooled ? "pooled" : "per-position");
        std::printf("effective key length %" PRId64 " bits\n", key_bits);
    }
    return 0;
}

struct NetFlags {
    CommonFlags common;
    std::string host = "127.0.0.1";
    uint16_t port = 9735;
    std::string mode = "explicit";
    int probe_interval = 10;
    uint64_t weight_seed = 0;
    bool weight_seed_set = false;
    uint64_t input_seed = 0;
    bool input_seed_set = false;
    int timeout_ms = 30000;
    std::string capture;
    std::string out_path;
    std::string weights_path;
    std::string format = "text";

    void add_to(CLI::App* cmd, bool is_serve) {
        common.add_to(cmd, false);
        if (is_serve) {
            cmd->add_option("--host", host, "Bind address")->capture_default_str();
        } else {
            cmd->add_option("--host", host, "Peer host")->capture_default_str();
        }
        cmd->add_option("--port", port, "TCP port")->capture_default_str();
        cmd->add_option("--mode", mode, "Input mode: explicit or seed-derived")->capture_default_str();
        cmd->add_option("--probe-interval", probe_interval, "Matched iterations between sync probes")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--weight-seed", weight_seed, "Private weight seed (random when omitted)")
            ->each([this](const std::string&) { weight_seed_set = true; });
        cmd->add_option("--input-seed", input_seed, "Public input seed (initiator's wins)")
            ->each([this](const std::string&) { input_seed_set = true; });
        cmd->add_option("--timeout-ms", timeout_ms, "Read timeout in milliseconds")->capture_default_str();
        cmd->add_option("--capture", capture, "Mirror decoded frames to a JSON-lines file");
        cmd->add_option("--out", out_path, "Write the transcript as JSON lines");
        cmd->add_option("--save-weights", weights_path, "Save final weights as an ensemble file");
        cmd->add_option("--format", format, "Summary format: text or json")->capture_default_str();
    }

    nk_peer_config peer_config() {
        nk_peer_config config{};
        config.params = common.params();
        config.rule = parse_rule(common.rule);
        config.input_mode = parse_mode(mode);
        config.max_iterations = common.max_iter;
        config.sync_probe_interval = probe_interval;
        config.weight_seed = weight_seed_set ? weight_seed : random_seed();
        config.input_seed = input_seed_set ? input_seed : random_seed();
        return config;
    }
};

int finish_net_session(nk_transcript* transcript, const NetFlags& flags) {
    print_transcript_summary(transcript, flags.format);
    if (!flags.out_path.empty()) {
        const nk_status status = nk_transcript_write_jsonl(transcript, flags.out_path.c_str());
        if (status != NK_OK) {
            nk_transcript_free(transcript);
            return fail(status);
        }
    }
    if (!flags.weights_path.empty()) {
        const nk_status status = nk_transcript_save_weights(transcript, flags.weights_path.c_str());
        if (status != NK_OK) {
            nk_transcript_free(transcript);
            return fail(status);
        }
    }
    nk_transcript_free(transcript);
    return 0;
}

int run_serve(NetFlags& flags, bool once) {
    warn_on_params(flags.common.params());
    nk_listener* listener = nullptr;
    CHECK(nk_listener_create(flags.host.c_str(), flags.port, &listener));
    std::fprintf(stderr, "listening on %s:%u\n", flags.host.c_str(), nk_listener_port(listener));
    int rc = 0;
    do {
        const nk_peer_config config = flags.peer_config();
        nk_transcript* transcript = nullptr;
        const nk_status status = nk_serve_session(listener, &config,
                                                  flags.capture.empty() ? nullptr : flags.capture.c_str(),
                                                  flags.timeout_ms, &transcript);
        if (status != NK_OK) {
            std::fprintf(stderr, "session error: %s\n", nk_last_error());
            rc = once ? static_cast<int>(status) : 0;
            continue;
        }
        rc = finish_net_session(transcript, flags);
    } while (!once);
    nk_listener_free(listener);
    return rc;
}

int run_connect(NetFlags& flags) {
    warn_on_params(flags.common.params());
    const nk_peer_config config = flags.peer_config();
    nk_transcript* transcript = nullptr;
    CHECK(nk_connect_session(flags.host.c_str(), flags.port, &config,
                             flags.capture.empty() ? nullptr : flags.capture.c_str(), flags.timeout_ms,
                             &transcript));
    return finish_net_session(transcript, flags);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string("neurokey ") + nk_version() +
                 " - Tree Parity Machine key agreement with non-binary input vectors"};
    app.require_subcommand(1);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Run one in-process key agreement session");
    CommonFlags sim_flags;
    sim_flags.add_to(simulate);
    int sim_run_index = 0;
    std::string sim_out, sim_weights, sim_format = "text";
    simulate->add_option("--run-index", sim_run_index, "Replay a specific sweep run index");
    simulate->add_option("--out", sim_out, "Write the transcript as JSON lines");
    simulate->add_option("--save-weights", sim_weights, "Save final weights as an ensemble file");
    simulate->add_option("--format", sim_format, "Summary format: text or json")->capture_default_str();

    // sweep / attack
    auto add_sweep_like = [&](CLI::App* cmd, CommonFlags& flags, std::string& plan, std::vector<int>& ns,
                              std::vector<int>& ms, int& runs, int& threads, std::string& format,
                              std::string& out, std::string& weights_dir, bool& quiet) {
        flags.add_to(cmd);
        cmd->add_option("--plan", plan, "JSON plan file (fields override flags)");
        cmd->add_option("--n-values", ns, "Grid N values, comma separated")->delimiter(',');
        cmd->add_option("--m-values", ms, "Grid M values, comma separated")->delimiter(',');
        cmd->add_option("--runs", runs, "Monte-Carlo runs per grid cell")->check(CLI::PositiveNumber);
        cmd->add_option("--threads", threads, "Worker threads (0 = hardware)");
        cmd->add_option("--format", format, "Report format: csv or json")->capture_default_str();
        cmd->add_option("--out", out, "Report destination file");
        cmd->add_option("--save-weights", weights_dir, "Directory for per-cell weight ensembles");
        cmd->add_flag("--quiet", quiet, "Suppress progress output");
    };

    auto* sweep = app.add_subcommand("sweep", "Monte-Carlo grid over (M, N) cells");
    CommonFlags sweep_flags;
    std::string sweep_plan, sweep_format = "csv", sweep_out, sweep_weights_dir;
    std::vector<int> sweep_n, sweep_m;
    int sweep_runs = 1000, sweep_threads = 0;
    bool sweep_quiet = false, sweep_attack = false;
    add_sweep_like(sweep, sweep_flags, sweep_plan, sweep_n, sweep_m, sweep_runs, sweep_threads, sweep_format,
                   sweep_out, sweep_weights_dir, sweep_quiet);
    sweep->add_flag("--attack", sweep_attack, "Run the eavesdropper alongside every session");

    auto* attack = app.add_subcommand("attack", "Man-in-the-middle sweep or capture replay");
    CommonFlags attack_flags;
    std::string attack_plan, attack_format = "csv", attack_out, attack_weights_dir, attack_replay;
    std::vector<int> attack_n, attack_m;
    int attack_runs = 1000, attack_threads = 0;
    bool attack_quiet = false;
    uint64_t attacker_seed = 0;
    bool attacker_seed_set = false;
    add_sweep_like(attack, attack_flags, attack_plan, attack_n, attack_m, attack_runs, attack_threads,
                   attack_format, attack_out, attack_weights_dir, attack_quiet);
    attack->add_option("--replay", attack_replay, "Train an offline attacker on a capture file");
    attack->add_option("--attacker-seed", attacker_seed, "Attacker weight seed (replay mode)")
        ->each([&](const std::string&) { attacker_seed_set = true; });

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Entropy and key length of a weight ensemble");
    std::string analyze_in, analyze_entropy_csv, analyze_hist_csv, analyze_format = "text";
    bool analyze_pooled = false;
    analyze->add_option("--in", analyze_in, "Weight ensemble file")->required();
    analyze->add_option("--entropy-csv", analyze_entropy_csv, "Write per-position entropy CSV");
    analyze->add_option("--histogram-csv", analyze_hist_csv, "Write per-position value histogram CSV");
    analyze->add_flag("--pooled", analyze_pooled, "Pool positions into one histogram");
    analyze->add_option("--format", analyze_format, "Summary format: text or json")->capture_default_str();

    // serve / connect
    auto* serve = app.add_subcommand("serve", "Listen for a peer and run sessions as recipient");
    NetFlags serve_flags;
    bool serve_once = false;
    serve_flags.add_to(serve, true);
    serve->add_flag("--once", serve_once, "Exit after the first session");

    auto* connect = app.add_subcommand("connect", "Connect to a peer and run a session as sender");
    NetFlags connect_flags;
    connect_flags.add_to(connect, false);

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) {
        return run_simulate(sim_flags, sim_run_index, sim_out, sim_weights, sim_format);
    }
    if (sweep->parsed()) {
        return run_sweep(sweep_flags, sweep_plan, sweep_n, sweep_m, sweep_runs, sweep_attack, sweep_threads,
                         sweep_format, sweep_out, sweep_weights_dir, sweep_quiet);
    }
    if (attack->parsed()) {
        if (!attack_replay.empty()) {
            return run_replay(attack_replay, attacker_seed_set ? attacker_seed : random_seed(),
                              attack_format == "csv" ? "text" : attack_format);
        }
        return run_sweep(attack_flags, attack_plan, attack_n, attack_m, attack_runs, true, attack_threads,
                         attack_format, attack_out, attack_weights_dir, attack_quiet);
    }
    if (analyze->parsed()) {
        return run_analyze(analyze_in, analyze_entropy_csv, analyze_hist_csv, analyze_pooled, analyze_format);
    }
    if (serve->parsed()) {
        return run_serve(serve_flags, serve_once);
    }
    if (connect->parsed()) {
        return run_connect(connect_flags);
    }
    return 0;
}
