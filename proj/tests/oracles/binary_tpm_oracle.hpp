#pragma once

// Independent reference model of the classical binary-input (M = 1) TPM,
// kept deliberately separate from the library implementation: plain
// int vectors, direct formula transcription, no shared helpers beyond
// the seeded random stream (the contract under test includes the stream).

#include <vector>

#include "core/rng.hpp"

namespace oracle {

struct BinaryTpm {
    int k = 0;
    int n = 0;
    int l = 0;
    bool is_sender = false;
    std::vector<std::vector<int>> w;  // [neuron][input]
};

inline BinaryTpm make_binary_tpm(int k, int n, int l, bool is_sender, neurokey::RandomStream& rng) {
    BinaryTpm tpm;
    tpm.k = k;
    tpm.n = n;
    tpm.l = l;
    tpm.is_sender = is_sender;
    tpm.w.assign(k, std::vector<int>(n, 0));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j) {
            tpm.w[i][j] = static_cast<int>(rng.uniform_int(-l, l));
        }
    }
    return tpm;
}

inline std::vector<std::vector<int>> binary_input(int k, int n, neurokey::RandomStream& rng) {
    std::vector<std::vector<int>> x(k, std::vector<int>(n, 0));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < n; ++j) {
            x[i][j] = rng.uniform_int(0, 1) == 0 ? -1 : 1;
        }
    }
    return x;
}

inline int binary_neuron_output(const BinaryTpm& tpm, const std::vector<std::vector<int>>& x, int neuron) {
    long long field = 0;
    for (int j = 0; j < tpm.n; ++j) field += static_cast<long long>(tpm.w[neuron][j]) * x[neuron][j];
    if (field > 0) return 1;
    if (field < 0) return -1;
    return tpm.is_sender ? -1 : 1;
}

inline int binary_output(const BinaryTpm& tpm, const std::vector<std::vector<int>>& x,
                         std::vector<int>* neuron_outputs = nullptr) {
    int product = 1;
    for (int i = 0; i < tpm.k; ++i) {
        const int y = binary_neuron_output(tpm, x, i);
        if (neuron_outputs) neuron_outputs->push_back(y);
        product *= y;
    }
    return product;
}

// rule: 0 hebbian, 1 anti-hebbian, 2 random walk.
inline void binary_learn(BinaryTpm& tpm, const std::vector<std::vector<int>>& x, int rule) {
    std::vector<int> y;
    const int out = binary_output(tpm, x, &y);
    for (int i = 0; i < tpm.k; ++i) {
        if (y[i] != out) continue;
        for (int j = 0; j < tpm.n; ++j) {
            int delta = 0;
            if (rule == 0) delta = out * x[i][j];
            if (rule == 1) delta = -out * x[i][j];
            if (rule == 2) delta = x[i][j];
            int next = tpm.w[i][j] + delta;
            if (next > tpm.l) next = tpm.l;
            if (next < -tpm.l) next = -tpm.l;
            tpm.w[i][j] = next;
        }
    }
}

}  // namespace oracle
