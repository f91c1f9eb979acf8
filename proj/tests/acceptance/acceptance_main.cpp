// Acceptance suite: reproduces the reference results tables at full scale
// (1000 runs per grid cell, K=3, L=5, Hebbian, fixed base seed) and checks
// the protocol, transport and analysis guarantees end to end. Prints one
// PASS/FAIL line per criterion; the exit code is the number of failures.

#include <cmath>
#include <cstdio>
#include <cstring>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include "core/attack.hpp"
#include "core/experiment.hpp"
#include "core/net_session.hpp"
#include "oracles/binary_tpm_oracle.hpp"
#include "oracles/key_decode_oracle.hpp"

using namespace neurokey;

namespace {

constexpr uint64_t kBaseSeed = 42;

int g_failures = 0;

void report(int criterion, bool pass, const std::string& summary) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, summary.c_str());
    if (!pass) ++g_failures;
}

struct PaperCell {
    int m;
    int n;
    double sync_median;
    double sync_pm;  // the table's +- column
    double entropy;
    int64_t key_bits;
    double attack_median;
};

// Tables I-III of the reference results.
const PaperCell kPaper[] = {
    {1, 40, 648, 490, 3.374, 404, 0.167}, {2, 40, 273, 216, 3.354, 402, 0.167},
    {3, 40, 156, 138, 3.305, 396, 0.183}, {4, 40, 105, 82, 3.238, 388, 0.208},
    {5, 40, 78, 64, 3.158, 378, 0.233},   {1, 50, 666, 453, 3.386, 507, 0.160},
    {2, 50, 296, 209, 3.368, 505, 0.167}, {3, 50, 158, 126, 3.315, 497, 0.187},
    {4, 50, 108, 88, 3.248, 487, 0.207},  {5, 50, 82, 64, 3.186, 477, 0.213},
    {1, 60, 715, 398, 3.402, 612, 0.167}, {2, 60, 306, 202, 3.379, 608, 0.172},
    {3, 60, 172, 122, 3.325, 598, 0.183}, {4, 60, 117, 87, 3.263, 587, 0.206},
    {5, 60, 81, 70, 3.204, 576, 0.211},
};

const GridCellReport* find_cell(const std::vector<GridCellReport>& cells, int m, int n) {
    for (const GridCellReport& cell : cells) {
        if (cell.m == m && cell.n == n) return &cell;
    }
    return nullptr;
}

// ---------------------------------------------------------------- 1-4 --

std::vector<GridCellReport> run_paper_grid() {
    ExperimentPlan plan;
    plan.k = 3;
    plan.l = 5;
    plan.n_values = {40, 50, 60};
    plan.m_values = {1, 2, 3, 4, 5};
    plan.runs_per_cell = 1000;
    plan.rule = LearningRule::Hebbian;
    plan.base_seed = kBaseSeed;
    plan.max_iterations = 10000;
    plan.attack_enabled = true;
    std::fprintf(stderr, "running the 15-cell grid (1000 runs per cell, with attacker)...\n");
    return run_batch(plan, 0, [](int done, int total) {
        std::fprintf(stderr, "  cell %d/%d\n", done, total);
    });
}

void criterion_1_sync_medians(const std::vector<GridCellReport>& cells) {
    int ok = 0;
    std::string worst;
    double worst_dev = 0.0;
    for (const PaperCell& paper : kPaper) {
        const GridCellReport* cell = find_cell(cells, paper.m, paper.n);
        const double median = cell->sync_time.median;
        const double dev = std::fabs(median - paper.sync_median) / paper.sync_median;
        if (dev <= 0.20) {
            ++ok;
        }
        if (dev > worst_dev) {
            worst_dev = dev;
            std::ostringstream os;
            os << "M=" << paper.m << ",N=" << paper.n << ": " << median << " vs " << paper.sync_median;
            worst = os.str();
        }
    }
    bool monotone = true;
    for (int n : {40, 50, 60}) {
        for (int m = 1; m < 5; ++m) {
            if (find_cell(cells, m, n)->sync_time.median <= find_cell(cells, m + 1, n)->sync_time.median) {
                monotone = false;
            }
        }
    }
    std::ostringstream os;
    os << "sync-time medians within +-20% of Table I (" << ok << "/15 cells, worst " << worst << ", "
       << std::lround(worst_dev * 100) << "%)" << (monotone ? ", strictly decreasing in M" : ", NOT monotone");
    report(1, ok == 15 && monotone, os.str());

    std::printf("  info: paper's +- column vs measured dispersion (N=40):\n");
    for (int m = 1; m <= 5; ++m) {
        const GridCellReport* cell = find_cell(cells, m, 40);
        const PaperCell* paper = nullptr;
        for (const PaperCell& p : kPaper) {
            if (p.m == m && p.n == 40) paper = &p;
        }
        std::printf("  info:   M=%d paper +-%g | std %.0f | 1.96*std %.0f | ci95(mean) %.1f\n", m,
                    paper->sync_pm, cell->sync_time.std_dev, 1.96 * cell->sync_time.std_dev,
                    cell->sync_time.ci95_half_width);
    }
}

void criterion_2_speedup(const std::vector<GridCellReport>& cells) {
    bool pass = true;
    std::ostringstream os;
    os << "speedup median(M=1)/median(M=5) in [6, 11]:";
    for (int n : {40, 50, 60}) {
        const double ratio = find_cell(cells, 1, n)->sync_time.median / find_cell(cells, 5, n)->sync_time.median;
        os << " N=" << n << ": " << std::round(ratio * 100) / 100;
        if (ratio < 6.0 || ratio > 11.0) pass = false;
    }
    report(2, pass, os.str());
}

void criterion_3_entropy(const std::vector<GridCellReport>& cells) {
    int entropy_ok = 0, bits_ok = 0, bound_ok = 0;
    const double max_entropy = std::log2(11.0);
    std::string worst;
    double worst_dev = 0.0;
    for (const PaperCell& paper : kPaper) {
        const GridCellReport* cell = find_cell(cells, paper.m, paper.n);
        const double entropy = cell->entropy.average_entropy;
        const double dev = std::fabs(entropy - paper.entropy);
        if (dev <= 0.05) ++entropy_ok;
        if (dev > worst_dev) {
            worst_dev = dev;
            std::ostringstream os;
            os << "M=" << paper.m << ",N=" << paper.n;
            worst = os.str();
        }
        const int64_t bits = effective_key_length(TpmParams{3, paper.n, 5, paper.m}, entropy);
        if (bits == cell->entropy.effective_key_length && std::llabs(bits - paper.key_bits) <= 8) ++bits_ok;
        bool bounded = entropy <= max_entropy;
        for (double h : cell->entropy.per_position_entropy) {
            if (h > max_entropy) bounded = false;
        }
        if (bounded) ++bound_ok;
    }
    bool monotone = true;
    for (int n : {40, 50, 60}) {
        for (int m = 1; m < 5; ++m) {
            if (find_cell(cells, m, n)->entropy.average_entropy <=
                find_cell(cells, m + 1, n)->entropy.average_entropy) {
                monotone = false;
            }
        }
    }
    std::ostringstream os;
    os << "entropy within +-0.05 bits of Table II (" << entropy_ok << "/15, worst " << worst << " dev "
       << std::round(worst_dev * 1000) / 1000 << "), key length via floor formula within +-8 bits ("
       << bits_ok << "/15), all entropies <= log2(11) (" << bound_ok << "/15)"
       << (monotone ? ", strictly decreasing in M" : ", NOT monotone");
    report(3, entropy_ok == 15 && bits_ok == 15 && bound_ok == 15 && monotone, os.str());
}

void criterion_4_attack(const std::vector<GridCellReport>& cells) {
    int median_ok = 0;
    for (const PaperCell& paper : kPaper) {
        const GridCellReport* cell = find_cell(cells, paper.m, paper.n);
        if (std::fabs(cell->attack_score.median - paper.attack_median) <= 0.05) ++median_ok;
    }
    bool monotone = true;
    for (int n : {40, 50, 60}) {
        for (int m = 1; m < 5; ++m) {
            if (find_cell(cells, m, n)->attack_score.median >
                find_cell(cells, m + 1, n)->attack_score.median) {
                monotone = false;
            }
        }
    }
    bool ones_at_m5 = true;
    bool no_ones_below_m5 = true;
    for (int n : {40, 50, 60}) {
        for (int m = 1; m <= 5; ++m) {
            const double max = find_cell(cells, m, n)->attack_score.maximum;
            if (m == 5 && max < 1.0) ones_at_m5 = false;
            if (m < 5 && max >= 1.0) no_ones_below_m5 = false;
        }
    }
    std::printf("  info: attack maxima per cell (paper reaches 1 only at M=5):\n");
    for (int n : {40, 50, 60}) {
        std::printf("  info:   N=%d:", n);
        for (int m = 1; m <= 5; ++m) {
            std::printf(" M=%d:%.4f", m, find_cell(cells, m, n)->attack_score.maximum);
        }
        std::printf("\n");
    }
    std::ostringstream os;
    os << "attack medians within +-0.05 of Table III (" << median_ok << "/15)"
       << (monotone ? ", monotone non-decreasing in M" : ", NOT monotone")
       << (ones_at_m5 ? ", score 1.0 reached in every M=5 cell" : ", score 1.0 MISSING in an M=5 cell")
       << (no_ones_below_m5 ? ", no 1.0 below M=5" : ", score 1.0 also occurs below M=5");
    report(4, median_ok == 15 && monotone && ones_at_m5 && no_ones_below_m5, os.str());
}

// ----------------------------------------------------------------- 5 --

bool any_zero_field(const TreeParityMachine& tpm, const InputVector& input) {
    for (int k = 0; k < tpm.params().k; ++k) {
        if (local_field(tpm.weights().row(k), input.row(k)) == 0) return true;
    }
    return false;
}

void criterion_5_protocol_properties() {
    RandomStream param_rng(kBaseSeed + 5);
    int sessions = 0, converged = 0;
    int absorbing_violations = 0, tie_free_violations = 0;
    bool keys_ok = true, gating_ok = true, deterministic_ok = true, weights_ok = true;
    for (sessions = 0; sessions < 10000; ++sessions) {
        SessionConfig config;
        config.params = TpmParams{1 + static_cast<int>(param_rng.uniform_int(0, 2)),
                                  1 + static_cast<int>(param_rng.uniform_int(0, 7)),
                                  1 + static_cast<int>(param_rng.uniform_int(0, 2)),
                                  1 + static_cast<int>(param_rng.uniform_int(0, 2))};
        config.rule = static_cast<LearningRule>(param_rng.uniform_int(0, 2));
        config.max_iterations = 5000;
        config.seeds = SessionSeeds{param_rng.next_u64(), param_rng.next_u64(), param_rng.next_u64()};

        const SessionTranscript transcript = run_key_agreement(config);
        if (!transcript.converged) continue;
        ++converged;

        if (!weights_equal(transcript.final_weights_a, transcript.final_weights_b)) weights_ok = false;
        if (!(distill_key(transcript.final_weights_a, config.params.l) ==
              distill_key(transcript.final_weights_b, config.params.l))) {
            keys_ok = false;
        }

        // Replay the session; the gate must hold at every unmatched record
        // and the replay must reproduce the transcript bit for bit.
        RandomStream input_rng(config.seeds.input_seed);
        RandomStream rng_a(config.seeds.weight_seed_a), rng_b(config.seeds.weight_seed_b);
        TreeParityMachine a = TreeParityMachine::random(config.params, Role::Sender, rng_a);
        TreeParityMachine b = TreeParityMachine::random(config.params, Role::Recipient, rng_b);
        for (const IterationRecord& expected : transcript.records) {
            const InputVector input = random_input_vector(config.params, input_rng);
            const WeightMatrix before_a = a.weights();
            const WeightMatrix before_b = b.weights();
            const IterationRecord record = step_pair(a, b, input, config.rule, expected.index);
            if (record.output_a != expected.output_a || record.output_b != expected.output_b ||
                record.matched != expected.matched) {
                deterministic_ok = false;
            }
            if (!record.matched &&
                (!weights_equal(a.weights(), before_a) || !weights_equal(b.weights(), before_b))) {
                gating_ok = false;
            }
        }
        if (!weights_equal(a.weights(), transcript.final_weights_a) ||
            !weights_equal(b.weights(), transcript.final_weights_b)) {
            deterministic_ok = false;
        }

        // Absorbing synchronization, tested literally: equality must hold
        // after every subsequent step_pair, ties included.
        bool violated = false, violated_tie_free = false;
        for (int extra = 0; extra < 5 && !violated; ++extra) {
            const InputVector input = random_input_vector(config.params, input_rng);
            const bool tie_free = !any_zero_field(a, input) && !any_zero_field(b, input);
            step_pair(a, b, input, config.rule, extra);
            if (!is_synchronized(a, b)) {
                violated = true;
                if (tie_free) violated_tie_free = true;
            }
        }
        if (violated) ++absorbing_violations;
        if (violated_tie_free) ++tie_free_violations;
    }
    const bool absorbing_ok = absorbing_violations == 0;
    std::printf(
        "  info: absorbing continuation: %d/%d converged sessions diverged within 5 extra exchanges,\n"
        "  info:   %d of them on a tie-free step. Divergence needs zero local fields in an even number\n"
        "  info:   of neurons: the outputs still match while the opposite role tie-breaks select\n"
        "  info:   different neuron subsets for the update.\n",
        absorbing_violations, converged, tie_free_violations);
    std::ostringstream os;
    os << "protocol properties over " << sessions << " randomized small sessions (" << converged
       << " converged): equal weights " << (weights_ok ? "ok" : "VIOLATED") << ", identical keys "
       << (keys_ok ? "ok" : "VIOLATED") << ", absorbing sync "
       << (absorbing_ok ? "ok" : "VIOLATED on tie steps (inherent to the role-based sigma tie-break)")
       << ", unmatched-iteration gate " << (gating_ok ? "ok" : "VIOLATED") << ", replay determinism "
       << (deterministic_ok ? "ok" : "VIOLATED");
    report(5, converged > 5000 && weights_ok && keys_ok && absorbing_ok && gating_ok && deterministic_ok,
           os.str());
}

// ----------------------------------------------------------------- 6 --

void criterion_6_binary_oracle() {
    int matched_sessions = 0;
    for (uint64_t session = 0; session < 100; ++session) {
        const TpmParams params{3, 10, 3, 1};
        const uint64_t wa = derive_seed({kBaseSeed, 60, session, 1});
        const uint64_t wb = derive_seed({kBaseSeed, 60, session, 2});
        const uint64_t in = derive_seed({kBaseSeed, 60, session, 3});

        RandomStream lib_wa(wa), lib_wb(wb), lib_in(in);
        TreeParityMachine a = TreeParityMachine::random(params, Role::Sender, lib_wa);
        TreeParityMachine b = TreeParityMachine::random(params, Role::Recipient, lib_wb);

        RandomStream ora_wa(wa), ora_wb(wb), ora_in(in);
        oracle::BinaryTpm oa = oracle::make_binary_tpm(3, 10, 3, true, ora_wa);
        oracle::BinaryTpm ob = oracle::make_binary_tpm(3, 10, 3, false, ora_wb);

        bool identical = true;
        int64_t lib_sync = -1, ora_sync = -1;
        for (int iter = 0; iter < 5000 && (lib_sync < 0 || ora_sync < 0); ++iter) {
            const InputVector x = random_input_vector(params, lib_in);
            const auto ox = oracle::binary_input(3, 10, ora_in);
            const Evaluation ea = a.evaluate(x);
            const Evaluation eb = b.evaluate(x);
            const int ooa = oracle::binary_output(oa, ox);
            const int oob = oracle::binary_output(ob, ox);
            if (ea.output != ooa || eb.output != oob) identical = false;
            if (ea.output == eb.output) {
                a.learn(LearningRule::Hebbian, x, ea);
                b.learn(LearningRule::Hebbian, x, eb);
            }
            if (ooa == oob) {
                oracle::binary_learn(oa, ox, 0);
                oracle::binary_learn(ob, ox, 0);
            }
            for (int k = 0; k < 3 && identical; ++k) {
                for (int n = 0; n < 10; ++n) {
                    if (a.weights().at(k, n) != oa.w[k][n] || b.weights().at(k, n) != ob.w[k][n]) {
                        identical = false;
                        break;
                    }
                }
            }
            if (lib_sync < 0 && weights_equal(a.weights(), b.weights())) lib_sync = iter + 1;
            if (ora_sync < 0 && oa.w == ob.w) ora_sync = iter + 1;
        }
        if (identical && lib_sync > 0 && lib_sync == ora_sync) ++matched_sessions;
    }
    std::ostringstream os;
    os << "binary-TPM reference oracle at M=1: " << matched_sessions
       << "/100 sessions identical step for step (outputs, updates, sync times)";
    report(6, matched_sessions == 100, os.str());
}

// ----------------------------------------------------------------- 7 --

Message random_message(RandomStream& rng) {
    switch (rng.uniform_int(0, 5)) {
        case 0: {
            HelloMsg m;
            m.version = static_cast<uint8_t>(rng.uniform_int(0, 255));
            m.role = rng.uniform_int(0, 1) == 0 ? Role::Sender : Role::Recipient;
            m.k = static_cast<uint16_t>(rng.uniform_int(0, 0xffff));
            m.n = static_cast<uint16_t>(rng.uniform_int(0, 0xffff));
            m.l = static_cast<uint8_t>(rng.uniform_int(0, 255));
            m.m = static_cast<uint8_t>(rng.uniform_int(0, 255));
            m.rule = static_cast<LearningRule>(rng.uniform_int(0, 2));
            m.input_mode = rng.uniform_int(0, 1) == 0 ? InputMode::ExplicitVectors : InputMode::SeedDerived;
            m.input_seed = rng.next_u64();
            return m;
        }
        case 1: {
            InputVectorMsg m;
            m.iteration = static_cast<uint32_t>(rng.next_u64());
            m.values.resize(static_cast<size_t>(rng.uniform_int(0, 256)));
            for (int8_t& v : m.values) v = static_cast<int8_t>(rng.uniform_int(-128, 127));
            return m;
        }
        case 2:
            return OutputMsg{static_cast<uint32_t>(rng.next_u64()),
                             rng.uniform_int(0, 1) == 0 ? int8_t{1} : int8_t{-1}};
        case 3: {
            SyncProbeMsg m;
            m.iteration = static_cast<uint32_t>(rng.next_u64());
            for (uint8_t& b : m.digest) b = static_cast<uint8_t>(rng.uniform_int(0, 255));
            return m;
        }
        case 4:
            return SyncConfirmMsg{static_cast<uint32_t>(rng.next_u64()), rng.uniform_int(0, 1) == 1};
        default:
            return AbortMsg{static_cast<uint8_t>(rng.uniform_int(0, 255))};
    }
}

void criterion_7_networked_equivalence() {
    int equivalent = 0;
    bool tap_clean = true;
    for (uint64_t session = 0; session < 100; ++session) {
        const TpmParams params{3, 8, 3, 2};
        PeerConfig initiator;
        initiator.params = params;
        initiator.rule = LearningRule::Hebbian;
        initiator.max_iterations = 10000;
        initiator.sync_probe_interval = 1;
        initiator.weight_seed = derive_seed({kBaseSeed, 70, session, 1});
        initiator.input_seed = derive_seed({kBaseSeed, 70, session, 3});
        PeerConfig responder = initiator;
        responder.weight_seed = derive_seed({kBaseSeed, 70, session, 2});
        responder.input_seed = 0;

        SessionConfig sim;
        sim.params = params;
        sim.rule = LearningRule::Hebbian;
        sim.max_iterations = 10000;
        sim.seeds = SessionSeeds{initiator.input_seed, initiator.weight_seed, responder.weight_seed};
        const SessionTranscript expected = run_key_agreement(sim);

        size_t tapped_frames = 0;
        FrameTap tap = (session % 2 == 0)
                           ? FrameTap([&tapped_frames](TapDirection, std::span<const uint8_t>) {
                                 ++tapped_frames;
                             })
                           : FrameTap();
        auto [a_end, b_end] = make_loopback_pair();
        MessageChannel initiator_channel(a_end, std::move(tap));
        MessageChannel responder_channel(b_end);
        auto responder_future = std::async(std::launch::async, [&] {
            return run_networked_session(responder_channel, responder, false);
        });
        const NetworkedSessionResult net = run_networked_session(initiator_channel, initiator, true);
        const NetworkedSessionResult net_b = responder_future.get();

        bool same = net.transcript.converged == expected.converged &&
                    net.transcript.sync_time == expected.sync_time &&
                    net.transcript.records.size() == expected.records.size() &&
                    net_b.transcript.sync_time == expected.sync_time;
        for (size_t i = 0; same && i < expected.records.size(); ++i) {
            same = net.transcript.records[i].output_a == expected.records[i].output_a &&
                   net.transcript.records[i].output_b == expected.records[i].output_b &&
                   net.transcript.records[i].matched == expected.records[i].matched;
        }
        if (same && expected.converged) {
            same = weights_equal(net.transcript.final_weights_a, expected.final_weights_a) &&
                   weights_equal(net_b.transcript.final_weights_b, expected.final_weights_b) &&
                   net.key_digest == net_b.key_digest;
        }
        if (same) ++equivalent;
        if (session % 2 == 0 && tapped_frames == 0) tap_clean = false;
    }

    RandomStream rng(kBaseSeed + 7);
    int roundtrips = 0;
    for (int trial = 0; trial < 100000; ++trial) {
        const Message message = random_message(rng);
        if (decode_frame(encode_frame(message)) == message) ++roundtrips;
    }

    std::ostringstream os;
    os << "networked equivalence: " << equivalent
       << "/100 loopback sessions identical to the simulator (tap attached on half of them"
       << (tap_clean ? ", observed and harmless" : ", NOT observed") << "), encode/decode round-trip "
       << roundtrips << "/100000";
    report(7, equivalent == 100 && tap_clean && roundtrips == 100000, os.str());
}

// ----------------------------------------------------------------- 8 --

void criterion_8_analysis_oracles() {
    const std::vector<double> uniform11(11, 1.0 / 11.0);
    const std::vector<double> fair{0.5, 0.5};
    const std::vector<double> degenerate{1.0, 0.0, 0.0};
    const bool analytic_ok = std::fabs(entropy_bits(uniform11) - std::log2(11.0)) < 1e-9 &&
                             std::fabs(entropy_bits(fair) - 1.0) < 1e-9 &&
                             std::fabs(entropy_bits(degenerate)) < 1e-9;

    RandomStream rng(kBaseSeed + 8);
    int bijective = 0;
    for (int trial = 0; trial < 10000; ++trial) {
        const TpmParams params{1 + static_cast<int>(rng.uniform_int(0, 2)),
                               1 + static_cast<int>(rng.uniform_int(0, 9)),
                               1 + static_cast<int>(rng.uniform_int(0, 5)), 1};
        const WeightMatrix w = random_weights(params, rng);
        const KeyMaterial key = distill_key(w, params.l);
        const std::vector<int> decoded = oracle::decode_key(key, params.k, params.n, params.l);
        bool same = decoded.size() == w.size();
        for (int k = 0; same && k < params.k; ++k) {
            for (int n = 0; n < params.n; ++n) {
                if (decoded[static_cast<size_t>(k) * params.n + n] != w.at(k, n)) {
                    same = false;
                    break;
                }
            }
        }
        if (same) ++bijective;
    }

    const TpmParams params{3, 5, 5, 1};
    std::vector<WeightMatrix> ensemble;
    ensemble.reserve(100000);
    for (int i = 0; i < 100000; ++i) ensemble.push_back(random_weights(params, rng));
    const EntropyReport synthetic = estimate_weight_entropy(weight_histogram(ensemble, params.l));
    const double uniform_gap = std::fabs(synthetic.average_entropy - std::log2(11.0));

    std::ostringstream os;
    os << "analysis oracles: analytic entropies to 1e-9 " << (analytic_ok ? "ok" : "VIOLATED")
       << ", distill_key bijective on " << bijective << "/10000 matrices, synthetic uniform ensemble gap "
       << std::round(uniform_gap * 10000) / 10000 << " bits (<= 0.02)";
    report(8, analytic_ok && bijective == 10000 && uniform_gap <= 0.02, os.str());
}

}  // namespace

int main() {
    std::printf("neurokey acceptance suite (base seed %llu)\n", static_cast<unsigned long long>(kBaseSeed));
    const std::vector<GridCellReport> cells = run_paper_grid();
    std::printf("  info: measured grid (median sync / entropy / key bits / attack median):\n");
    for (const GridCellReport& cell : cells) {
        std::printf("  info:   M=%d N=%d: %5.0f / %.4f / %lld / %.3f\n", cell.m, cell.n,
                    cell.sync_time.median, cell.entropy.average_entropy,
                    static_cast<long long>(cell.entropy.effective_key_length), cell.attack_score.median);
    }
    criterion_1_sync_medians(cells);
    criterion_2_speedup(cells);
    criterion_3_entropy(cells);
    criterion_4_attack(cells);
    criterion_5_protocol_properties();
    criterion_6_binary_oracle();
    criterion_7_networked_equivalence();
    criterion_8_analysis_oracles();
    if (g_failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criterion(s) failed\n", g_failures);
    }
    return g_failures;
}
