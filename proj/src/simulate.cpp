#include "mergedyn/simulate.hpp"

#include <cmath>

namespace mergedyn {

AliasTable::AliasTable(const std::vector<std::pair<int, double>>& weighted) {
    const size_t n = weighted.size();
    if (n == 0) throw ZeroRowError("alias table over an empty row");
    outcome_.resize(n);
    alias_.resize(n, 0);
    threshold_.assign(n, 1.0);
    double total = 0;
    for (const auto& [col, w] : weighted) total += w;
    std::vector<double> scaled(n);
    for (size_t i = 0; i < n; ++i) {
        outcome_[i] = weighted[i].first;
        scaled[i] = weighted[i].second * n / total;
    }
    std::vector<size_t> small, large;
    for (size_t i = 0; i < n; ++i)
        (scaled[i] < 1.0 ? small : large).push_back(i);
    while (!small.empty() && !large.empty()) {
        size_t s = small.back(); small.pop_back();
        size_t l = large.back(); large.pop_back();
        threshold_[s] = scaled[s];
        alias_[s] = static_cast<int>(l);
        scaled[l] = scaled[l] + scaled[s] - 1.0;
        (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    while (!large.empty()) { threshold_[large.back()] = 1.0; large.pop_back(); }
    while (!small.empty()) { threshold_[small.back()] = 1.0; small.pop_back(); }
}

int AliasTable::sample(SplitMix64& rng) const {
    const size_t n = outcome_.size();
    size_t slot = static_cast<size_t>(rng.next() % n);
    if (rng.uniform() < threshold_[slot]) return outcome_[slot];
    return outcome_[static_cast<size_t>(alias_[slot])];
}

namespace {
uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}
} // namespace

ChainSampler::ChainSampler(const MarkovChain& chain, std::string chain_id)
    : chain_hash_(fnv1a(chain_id)) {
    for (int i = 0; i < chain.P.n; ++i) {
        if (chain.P.rows[static_cast<size_t>(i)].empty())
            throw ZeroRowError("chain has a vertex without transitions");
        rows_.emplace_back(chain.P.rows[static_cast<size_t>(i)]);
    }
}

Trajectory ChainSampler::run(int start, long long steps, uint64_t seed, long long burn_in,
                             uint64_t replica) const {
    if (steps < 1) throw Error("need at least one step");
    Trajectory t;
    t.seed = seed;
    t.start = start;
    t.steps = steps;
    t.visits.assign(rows_.size(), 0);
    SplitMix64 rng(seed, chain_hash_, replica);
    int cur = start;
    for (long long i = 0; i < burn_in; ++i) cur = rows_[static_cast<size_t>(cur)].sample(rng);
    for (long long i = 0; i < steps; ++i) {
        cur = rows_[static_cast<size_t>(cur)].sample(rng);
        t.visits[static_cast<size_t>(cur)]++;
    }
    return t;
}

Trajectory ChainSampler::run_replicas(int start, long long steps_per_replica, uint64_t seed,
                                      int replicas, long long burn_in) const {
    Trajectory merged;
    merged.seed = seed;
    merged.start = start;
    merged.steps = 0;
    merged.visits.assign(rows_.size(), 0);
    for (int r = 0; r < replicas; ++r) {
        Trajectory t = run(start, steps_per_replica, seed, burn_in, static_cast<uint64_t>(r));
        merged.steps += t.steps;
        for (size_t i = 0; i < t.visits.size(); ++i) merged.visits[i] += t.visits[i];
    }
    return merged;
}

Trajectory run_chain(const MarkovChain& chain, int start, long long steps, uint64_t seed,
                     long long burn_in) {
    return ChainSampler(chain).run(start, steps, seed, burn_in);
}

Distribution empirical_distribution(const Trajectory& t) {
    Distribution d(t.visits.size());
    for (size_t i = 0; i < t.visits.size(); ++i)
        d[i] = static_cast<double>(t.visits[i]) / static_cast<double>(t.steps);
    return d;
}

double tv_distance(const Distribution& d1, const Distribution& d2) {
    if (d1.size() != d2.size()) throw DimensionMismatchError("distributions differ in length");
    double s = 0;
    for (size_t i = 0; i < d1.size(); ++i) s += std::abs(d1[i] - d2[i]);
    return 0.5 * s;
}

} // namespace mergedyn
