#include "core/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>

#include "core/digest.hpp"

namespace neurokey {

double entropy_bits(std::span<const double> probabilities) {
    double sum = 0.0;
    double h = 0.0;
    for (double p : probabilities) {
        if (p < 0.0 || !std::isfinite(p)) {
            raise(ErrorCode::Validation, "entropy: probabilities must be non-negative");
        }
        sum += p;
        if (p > 0.0) h -= p * std::log2(p);
    }
    if (std::fabs(sum - 1.0) > 1e-9) {
        raise(ErrorCode::Validation, "entropy: probabilities must sum to 1");
    }
    return h;
}

WeightHistogram weight_histogram(const std::vector<WeightMatrix>& ensemble, int l) {
    if (ensemble.empty()) {
        raise(ErrorCode::Validation, "weight_histogram: empty ensemble");
    }
    if (l < 1) {
        raise(ErrorCode::Validation, "weight_histogram: l must be >= 1");
    }
    const WeightMatrix& first = ensemble.front();
    WeightHistogram hist;
    hist.rows = first.rows();
    hist.cols = first.cols();
    hist.l = l;
    hist.ensemble_size = ensemble.size();
    hist.counts.assign(first.size() * (2 * static_cast<size_t>(l) + 1), 0);
    const size_t levels = 2 * static_cast<size_t>(l) + 1;
    for (const WeightMatrix& w : ensemble) {
        if (!w.same_shape(first)) {
            raise(ErrorCode::Validation, "weight_histogram: ensemble matrices differ in shape");
        }
        auto values = w.flat();
        for (size_t pos = 0; pos < values.size(); ++pos) {
            const int v = values[pos];
            if (v < -l || v > l) {
                raise(ErrorCode::Validation, "weight_histogram: weight outside [-l, l]");
            }
            ++hist.counts[pos * levels + (v + l)];
        }
    }
    return hist;
}

WeightHistogram merge_histograms(const WeightHistogram& a, const WeightHistogram& b) {
    if (a.rows != b.rows || a.cols != b.cols || a.l != b.l) {
        raise(ErrorCode::Validation, "merge_histograms: shape mismatch");
    }
    WeightHistogram out = a;
    out.ensemble_size += b.ensemble_size;
    for (size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
    return out;
}

namespace {

double empirical_entropy(std::span<const uint64_t> counts, uint64_t total) {
    double h = 0.0;
    for (uint64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(total);
        h -= p * std::log2(p);
    }
    return h;
}

}  // namespace

EntropyReport estimate_weight_entropy(const WeightHistogram& histogram, bool pooled) {
    if (histogram.ensemble_size == 0) {
        raise(ErrorCode::Validation, "estimate_weight_entropy: empty ensemble");
    }
    const size_t positions = static_cast<size_t>(histogram.rows) * histogram.cols;
    const size_t levels = 2 * static_cast<size_t>(histogram.l) + 1;
    EntropyReport report;
    report.per_position_entropy.resize(positions);
    double acc = 0.0;
    for (size_t pos = 0; pos < positions; ++pos) {
        const double h = empirical_entropy(
            std::span<const uint64_t>(histogram.counts.data() + pos * levels, levels),
            histogram.ensemble_size);
        report.per_position_entropy[pos] = h;
        acc += h;
    }
    if (pooled) {
        std::vector<uint64_t> pool(levels, 0);
        for (size_t pos = 0; pos < positions; ++pos) {
            for (size_t v = 0; v < levels; ++v) pool[v] += histogram.counts[pos * levels + v];
        }
        report.average_entropy = empirical_entropy(pool, histogram.ensemble_size * positions);
    } else {
        report.average_entropy = acc / static_cast<double>(positions);
    }
    TpmParams params{histogram.rows, histogram.cols, histogram.l, 1};
    report.effective_key_length = effective_key_length(params, report.average_entropy);
    return report;
}

int64_t effective_key_length(const TpmParams& params, double avg_entropy) {
    params.validate();
    const double max_entropy = std::log2(static_cast<double>(params.weight_levels()));
    if (!(avg_entropy >= 0.0) || avg_entropy > max_entropy + 1e-12) {
        raise(ErrorCode::Validation, "effective_key_length: entropy outside [0, log2(2L+1)]");
    }
    return static_cast<int64_t>(std::floor(static_cast<double>(params.k) * params.n * avg_entropy));
}

size_t key_bit_length(const TpmParams& params) {
    const long double bits =
        static_cast<long double>(params.k) * params.n * std::log2(static_cast<long double>(params.weight_levels()));
    return static_cast<size_t>(std::ceil(bits));
}

KeyMaterial distill_key(const WeightMatrix& weights, int l) {
    if (l < 1) {
        raise(ErrorCode::Validation, "distill_key: l must be >= 1");
    }
    const uint32_t base = 2 * static_cast<uint32_t>(l) + 1;
    // Accumulate digits into a little-endian u32 limb integer.
    std::vector<uint32_t> limbs{0};
    for (int8_t w : weights.flat()) {
        if (w < -l || w > l) {
            raise(ErrorCode::Validation, "distill_key: weight outside [-l, l]");
        }
        uint64_t carry = static_cast<uint32_t>(w + l);
        for (uint32_t& limb : limbs) {
            const uint64_t v = static_cast<uint64_t>(limb) * base + carry;
            limb = static_cast<uint32_t>(v);
            carry = v >> 32;
        }
        if (carry != 0) limbs.push_back(static_cast<uint32_t>(carry));
    }

    TpmParams params{weights.rows(), weights.cols(), l, 1};
    KeyMaterial key;
    key.bit_length = key_bit_length(params);
    key.bytes.assign((key.bit_length + 7) / 8, 0);
    // Bit i of the integer (LSB = 0) maps to padded-string position
    // bit_length - 1 - i; the string packs MSB-first.
    for (size_t i = 0; i < key.bit_length; ++i) {
        const size_t limb = i / 32;
        if (limb >= limbs.size()) break;
        if ((limbs[limb] >> (i % 32)) & 1u) {
            const size_t pos = key.bit_length - 1 - i;
            key.bytes[pos / 8] |= static_cast<uint8_t>(1u << (7 - pos % 8));
        }
    }
    return key;
}

std::string key_digest_hex(const KeyMaterial& key) {
    return to_hex(sha256(key.bytes));
}

void write_histogram_csv(const WeightHistogram& histogram, std::ostream& out) {
    out << "k,n,value,count\n";
    const size_t levels = 2 * static_cast<size_t>(histogram.l) + 1;
    for (int r = 0; r < histogram.rows; ++r) {
        for (int c = 0; c < histogram.cols; ++c) {
            const size_t pos = static_cast<size_t>(r) * histogram.cols + c;
            for (size_t v = 0; v < levels; ++v) {
                out << (r + 1) << ',' << (c + 1) << ',' << (static_cast<int>(v) - histogram.l) << ','
                    << histogram.counts[pos * levels + v] << '\n';
            }
        }
    }
}

void write_entropy_csv(const WeightHistogram& histogram, const EntropyReport& report, std::ostream& out) {
    char buf[64];
    out << "k,n,entropy\n";
    for (int r = 0; r < histogram.rows; ++r) {
        for (int c = 0; c < histogram.cols; ++c) {
            const size_t pos = static_cast<size_t>(r) * histogram.cols + c;
            std::snprintf(buf, sizeof buf, "%.6g", report.per_position_entropy[pos]);
            out << (r + 1) << ',' << (c + 1) << ',' << buf << '\n';
        }
    }
    std::snprintf(buf, sizeof buf, "%.6g", report.average_entropy);
    out << "average," << buf << ',' << report.effective_key_length << '\n';
}

namespace {

constexpr char kEnsembleMagic[4] = {'N', 'K', 'W', 'E'};

void write_u16(std::ostream& out, uint16_t v) {
    const char bytes[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    out.write(bytes, 2);
}

void write_u32(std::ostream& out, uint32_t v) {
    char bytes[4];
    for (int i = 0; i < 4; ++i) bytes[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    out.write(bytes, 4);
}

uint16_t read_u16(std::istream& in) {
    unsigned char bytes[2];
    in.read(reinterpret_cast<char*>(bytes), 2);
    return static_cast<uint16_t>(bytes[0] | (bytes[1] << 8));
}

uint32_t read_u32(std::istream& in) {
    unsigned char bytes[4];
    in.read(reinterpret_cast<char*>(bytes), 4);
    uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<uint32_t>(bytes[i]) << (8 * i);
    return v;
}

}  // namespace

void save_weight_ensemble(const std::vector<WeightMatrix>& ensemble, int l, const std::string& path) {
    if (ensemble.empty()) {
        raise(ErrorCode::Validation, "save_weight_ensemble: empty ensemble");
    }
    const WeightMatrix& first = ensemble.front();
    if (first.rows() > 0xffff || first.cols() > 0xffff || l < 1 || l > 127) {
        raise(ErrorCode::Validation, "save_weight_ensemble: shape outside file format limits");
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        raise(ErrorCode::Io, "cannot open for writing: " + path);
    }
    out.write(kEnsembleMagic, 4);
    out.put(1);  // version
    write_u16(out, static_cast<uint16_t>(first.rows()));
    write_u16(out, static_cast<uint16_t>(first.cols()));
    out.put(static_cast<char>(l));
    write_u32(out, static_cast<uint32_t>(ensemble.size()));
    for (const WeightMatrix& w : ensemble) {
        if (!w.same_shape(first)) {
            raise(ErrorCode::Validation, "save_weight_ensemble: matrices differ in shape");
        }
        out.write(reinterpret_cast<const char*>(w.flat().data()), static_cast<std::streamsize>(w.size()));
    }
    if (!out) {
        raise(ErrorCode::Io, "write failed: " + path);
    }
}

std::vector<WeightMatrix> load_weight_ensemble(const std::string& path, int* out_l) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        raise(ErrorCode::Io, "cannot open: " + path);
    }
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kEnsembleMagic, 4) != 0) {
        raise(ErrorCode::Validation, "not a weight ensemble file: " + path);
    }
    const int version = in.get();
    if (version != 1) {
        raise(ErrorCode::Validation, "unsupported weight ensemble version");
    }
    const int rows = read_u16(in);
    const int cols = read_u16(in);
    const int l = in.get();
    const uint32_t count = read_u32(in);
    if (!in || rows < 1 || cols < 1 || l < 1 || count < 1) {
        raise(ErrorCode::Validation, "malformed weight ensemble header");
    }
    std::vector<WeightMatrix> ensemble;
    ensemble.reserve(count);
    for (uint32_t i = 0; i < count; ++i) {
        WeightMatrix w(rows, cols);
        in.read(reinterpret_cast<char*>(w.flat().data()), static_cast<std::streamsize>(w.size()));
        if (!in) {
            raise(ErrorCode::Validation, "truncated weight ensemble file");
        }
        for (int8_t v : w.flat()) {
            if (v < -l || v > l) {
                raise(ErrorCode::Validation, "weight ensemble entry outside [-l, l]");
            }
        }
        ensemble.push_back(std::move(w));
    }
    if (out_l) *out_l = l;
    return ensemble;
}

}  // namespace neurokey
