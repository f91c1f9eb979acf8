#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "core/tpm.hpp"

namespace neurokey {

// Shannon entropy in bits of a discrete distribution. Probabilities must
// be non-negative and sum to 1 within 1e-9; 0 * log 0 counts as 0.
double entropy_bits(std::span<const double> probabilities);

// Per-position value counts over an ensemble of final weight matrices.
// counts is position-major: counts[pos * (2l+1) + (value + l)].
struct WeightHistogram {
    int rows = 0;
    int cols = 0;
    int l = 0;
    uint64_t ensemble_size = 0;
    std::vector<uint64_t> counts;

    uint64_t count(int r, int c, int value) const {
        const size_t pos = static_cast<size_t>(r) * cols + c;
        return counts[pos * (2 * l + 1) + (value + l)];
    }
};

WeightHistogram weight_histogram(const std::vector<WeightMatrix>& ensemble, int l);

// Histograms over the same shape merge by adding counts.
WeightHistogram merge_histograms(const WeightHistogram& a, const WeightHistogram& b);

struct EntropyReport {
    std::vector<double> per_position_entropy;  // row-major, bits
    double average_entropy = 0.0;              // the E(W) estimator
    int64_t effective_key_length = 0;          // floor(K * N * average)
};

// pooled = false: average of per-position empirical entropies (default).
// pooled = true: entropy of the value distribution pooled across positions.
EntropyReport estimate_weight_entropy(const WeightHistogram& histogram, bool pooled = false);

// floor(K * N * avg_entropy); avg_entropy must lie in [0, log2(2L+1)].
int64_t effective_key_length(const TpmParams& params, double avg_entropy);

// Bit string distilled from a weight matrix; bits are packed MSB-first,
// the last byte zero-padded on the right.
struct KeyMaterial {
    std::vector<uint8_t> bytes;
    size_t bit_length = 0;

    bool bit(size_t i) const { return (bytes[i / 8] >> (7 - i % 8)) & 1; }
    bool operator==(const KeyMaterial&) const = default;
};

// Number of key bits for a parameter set: ceil(K * N * log2(2L+1)).
size_t key_bit_length(const TpmParams& params);

// Deterministic base conversion: row-major digits (w + L) read as a
// base-(2L+1) integer, most significant digit first, emitted in binary
// left-padded to key_bit_length bits. Bijective on valid weight matrices.
KeyMaterial distill_key(const WeightMatrix& weights, int l);

std::string key_digest_hex(const KeyMaterial& key);

// CSV exports. Histogram: k,n,value,count. Entropy: k,n,entropy with a
// trailing "average,<entropy>,<key_length>" summary row. Indices 1-based.
void write_histogram_csv(const WeightHistogram& histogram, std::ostream& out);
void write_entropy_csv(const WeightHistogram& histogram, const EntropyReport& report, std::ostream& out);

// Weight-ensemble container file (magic NKWE): shape header plus
// row-major signed-byte matrices.
void save_weight_ensemble(const std::vector<WeightMatrix>& ensemble, int l, const std::string& path);
std::vector<WeightMatrix> load_weight_ensemble(const std::string& path, int* out_l);

}  // namespace neurokey
