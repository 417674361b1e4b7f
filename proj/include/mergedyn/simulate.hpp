#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mergedyn/spectral.hpp"

namespace mergedyn {

// counter-based generator: the stream is a pure function of (seed, chain id,
// replica), so replicas merge deterministically regardless of scheduling
class SplitMix64 {
public:
    SplitMix64(uint64_t seed, uint64_t chain_id, uint64_t replica) {
        state_ = mix(mix(mix(0x243F6A8885A308D3ull ^ seed) ^ chain_id) ^ replica);
    }
    uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        return mix(state_);
    }
    double uniform() { return (next() >> 11) * 0x1.0p-53; }

private:
    uint64_t state_;
    static uint64_t mix(uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
};

// Walker alias table for O(1) row sampling
class AliasTable {
public:
    explicit AliasTable(const std::vector<std::pair<int, double>>& weighted);
    int sample(SplitMix64& rng) const;

private:
    std::vector<int> outcome_, alias_;
    std::vector<double> threshold_;
};

struct Trajectory {
    uint64_t seed = 0;
    int start = 0;
    long long steps = 0;
    std::vector<long long> visits; // post-transition states; sums to steps
};

struct ChainSampler {
    explicit ChainSampler(const MarkovChain& chain, std::string chain_id = "chain");
    Trajectory run(int start, long long steps, uint64_t seed, long long burn_in = 0,
                   uint64_t replica = 0) const;
    // independent replicas, counts merged; identical for any replica scheduling
    Trajectory run_replicas(int start, long long steps_per_replica, uint64_t seed, int replicas,
                            long long burn_in = 0) const;
    int size() const { return static_cast<int>(rows_.size()); }

private:
    std::vector<AliasTable> rows_;
    uint64_t chain_hash_;
};

// one-shot convenience over ChainSampler
Trajectory run_chain(const MarkovChain& chain, int start, long long steps, uint64_t seed,
                     long long burn_in = 0);

Distribution empirical_distribution(const Trajectory& t);
double tv_distance(const Distribution& d1, const Distribution& d2);

} // namespace mergedyn
