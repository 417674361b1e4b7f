#include <cmath>
#include <set>

#include "doctest.h"
#include "mergedyn/cost.hpp"
#include "mergedyn/merge_graph.hpp"
#include "mergedyn/partition_chain.hpp"
#include "mergedyn/spectral.hpp"

using namespace mergedyn;

namespace {

// printed reduced matrix for n = 4, rows/cols {2,1,1}, {2,2}, {3,1}, {4}
SparseMatrix golden_reduced_4() {
    const double rows[4][4] = {
        {4, 1, 2, 0},
        {4, 0, 0, 1},
        {3, 3, 2, 1},
        {0, 3, 0, 4},
    };
    SparseMatrix m(4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (rows[i][j] != 0) m.add(i, j, rows[i][j]);
    return m;
}

MarkovChain hamc_for(const MergeGraph& g) {
    SparseMatrix K = adjacency_matrix(g, EdgeMode::Simple);
    return to_markov(K, perron_frobenius(K));
}

} // namespace

TEST_CASE("perron frobenius on the printed n=4 reduced matrix") {
    SparseMatrix m = golden_reduced_4();
    PFResult pf = perron_frobenius(m, 1e-12, 1000000, PFNorm::Unit);
    CHECK(std::abs(pf.lambda - 6.9656) < 5e-4);
    const double eta[4] = {0.5565, 0.3739, 0.6383, 0.3782};
    const double psi[4] = {0.8345, 0.3666, 0.3361, 0.2369};
    for (int i = 0; i < 4; ++i) {
        CHECK(std::abs(pf.eta[static_cast<size_t>(i)] - eta[i]) < 1e-3);
        CHECK(std::abs(pf.psi[static_cast<size_t>(i)] - psi[i]) < 1e-3);
    }
    CHECK(pf.residual_right < 1e-11);
    CHECK(pf.residual_left < 1e-11);
}

TEST_CASE("perron frobenius degenerate and regular cases") {
    SparseMatrix one(1);
    one.add(0, 0, 2.0);
    PFResult pf = perron_frobenius(one);
    CHECK(pf.lambda == doctest::Approx(2.0));
    CHECK(pf.eta[0] == doctest::Approx(1.0));

    // IM dynamics on single 5-leaf trees: 6-regular, uniform eigenvector
    GraphConfig cfg;
    cfg.edge_mode = EdgeMode::Ops;
    FiberComponents fc = im_fiber_components(5, Partition{5}, default_labels(5), cfg);
    REQUIRE(fc.components.size() == 1);
    SparseMatrix K(static_cast<int>(fc.fiber.size()));
    std::vector<MergeOp> ops;
    for (size_t i = 0; i < fc.fiber.size(); ++i)
        for (const auto& op : ops_from(fc.fiber[i], {MergeOpKind::IM}, cfg)) {
            int j = -1;
            for (size_t t = 0; t < fc.fiber.size(); ++t)
                if (fc.fiber[t] == op.target) j = static_cast<int>(t);
            REQUIRE(j >= 0);
            K.add(static_cast<int>(i), j, 1.0);
        }
    PFResult pf5 = perron_frobenius(K);
    CHECK(pf5.lambda == doctest::Approx(6.0).epsilon(1e-10)); // 2*5 - 4
    double mn = 1e9, mx = 0;
    for (double v : pf5.eta) { mn = std::min(mn, v); mx = std::max(mx, v); }
    CHECK(mx - mn < 1e-9);

    SparseMatrix reducible(2);
    reducible.add(0, 1, 1.0);
    reducible.add(1, 1, 1.0);
    CHECK_THROWS_AS(perron_frobenius(reducible), ReducibleError);

    SparseMatrix periodic(2);
    periodic.add(0, 1, 1.0);
    periodic.add(1, 0, 1.0);
    CHECK_THROWS_AS(perron_frobenius(periodic), PeriodicError);
}

TEST_CASE("to_markov produces a stochastic conjugate") {
    SparseMatrix m = golden_reduced_4();
    MarkovChain chain = to_markov(m, perron_frobenius(m));
    for (int i = 0; i < chain.P.n; ++i) {
        double s = 0;
        for (const auto& [j, p] : chain.P.rows[static_cast<size_t>(i)]) s += p;
        CHECK(std::abs(s - 1.0) < 1e-12);
    }
    // scale invariance
    MarkovChain scaled = to_markov(m.scaled(3.7), perron_frobenius(m.scaled(3.7)));
    for (int i = 0; i < chain.P.n; ++i)
        for (const auto& [j, p] : chain.P.rows[static_cast<size_t>(i)])
            CHECK(std::abs(p - scaled.P.at(i, j)) < 1e-10);
}

TEST_CASE("IM fiber chain is the degree-normalized adjacency") {
    GraphConfig cfg;
    MergeGraph g = build_merge_graph(default_labels(4), {MergeOpKind::IM}, cfg);
    // restrict to the single-tree fiber
    std::vector<int> keep;
    for (size_t i = 0; i < g.vertices.size(); ++i)
        if (partition_of(g.vertices[i]) == Partition{4}) keep.push_back(static_cast<int>(i));
    std::map<int, int> re;
    for (size_t i = 0; i < keep.size(); ++i) re[keep[i]] = static_cast<int>(i);
    SparseMatrix K(static_cast<int>(keep.size()));
    for (const auto& e : g.edges)
        if (re.count(e.src) && re.count(e.dst)) K.add(re[e.src], re[e.dst], 1.0);
    MarkovChain chain = to_markov(K, perron_frobenius(K));
    for (int i = 0; i < chain.P.n; ++i)
        for (const auto& [j, p] : chain.P.rows[static_cast<size_t>(i)])
            CHECK(std::abs(p - 0.25) < 1e-10); // hatK = K / 4
    Distribution pi = stationary(chain);
    for (double v : pi) CHECK(std::abs(v - 1.0 / 15) < 1e-12);
}

TEST_CASE("n=4 stationary law: fiber masses lump, values split by shape") {
    GraphConfig cfg;
    MergeGraph g = build_merge_graph(default_labels(4), all_kinds(), cfg);
    MarkovChain chain = hamc_for(g);
    Distribution pi = stationary(chain);
    std::map<std::string, std::pair<double, double>> range;
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        auto key = partition_of(g.vertices[v]).str();
        auto it = range.find(key);
        if (it == range.end()) range[key] = {pi[v], pi[v]};
        else {
            it->second.first = std::min(it->second.first, pi[v]);
            it->second.second = std::max(it->second.second, pi[v]);
        }
    }
    // single-shape fibers are exactly constant; the tree fiber mixes two
    // shapes with different EM parents and genuinely splits
    CHECK((range["2+1+1"].second - range["2+1+1"].first) / range["2+1+1"].second < 1e-9);
    CHECK((range["2+2"].second - range["2+2"].first) / range["2+2"].second < 1e-9);
    CHECK((range["3+1"].second - range["3+1"].first) / range["3+1"].second < 1e-9);
    CHECK(range["4"].second / range["4"].first == doctest::Approx(1.0 / 0.5318).epsilon(1e-3));

    // class values reproduce the printed stationary distribution
    PartitionGraph pg = build_partition_graph(4, EdgeMode::Simple);
    LiftedStationary lift = lift_stationary(pg, g);
    const double printed[4] = {0.5267, 0.3109, 0.1217, 0.0406};
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(lift.class_values[static_cast<size_t>(i)] - printed[i]) < 2e-3);
}

TEST_CASE("two-state symmetric chain") {
    SparseMatrix sym(2);
    sym.add(0, 0, 1.0);
    sym.add(0, 1, 1.0);
    sym.add(1, 0, 1.0);
    sym.add(1, 1, 1.0);
    MarkovChain chain = to_markov(sym, perron_frobenius(sym));
    Distribution pi = stationary(chain);
    CHECK(pi[0] == doctest::Approx(0.5));
    CHECK(pi[1] == doctest::Approx(0.5));
}

TEST_CASE("stationarity is stable under 64 chain steps") {
    SparseMatrix m = golden_reduced_4();
    MarkovChain chain = to_markov(m, perron_frobenius(m));
    Distribution pi = stationary(chain);
    Distribution cur = pi;
    for (int k = 0; k < 64; ++k) cur = chain.P.apply_transpose(cur);
    double l1 = 0;
    for (size_t i = 0; i < pi.size(); ++i) l1 += std::abs(cur[i] - pi[i]);
    CHECK(l1 <= 1e-10);
}

TEST_CASE("entropy rate of the conjugated chain is maximal") {
    GraphConfig cfg;
    MergeGraph g = build_merge_graph(default_labels(4), all_kinds(), cfg);
    SparseMatrix K = adjacency_matrix(g, EdgeMode::Simple);
    PFResult pf = perron_frobenius(K);
    MarkovChain merw = to_markov(K, pf);
    Distribution pi = stationary(merw);
    double rate = entropy_rate(merw, pi);
    CHECK(std::abs(rate - std::log(pf.lambda)) < 1e-6);

    MarkovChain rw = to_random_walk(K);
    Distribution pi_rw = stationary(rw);
    double rate_rw = entropy_rate(rw, pi_rw);
    CHECK(rate_rw < rate - 1e-6);

    double gap = 0;
    for (size_t i = 0; i < pi.size(); ++i) gap = std::max(gap, std::abs(pi[i] - pi_rw[i]));
    CHECK(gap > 1e-3); // the two stationary laws genuinely differ

    for (unsigned long long seed = 1; seed <= 20; ++seed) {
        MarkovChain rnd;
        rnd.provenance = ChainKind::RandomWalk;
        rnd.P = random_stochastic_like(merw.P, seed);
        Distribution pi_rnd = stationary(rnd);
        CHECK(entropy_rate(rnd, pi_rnd) <= rate + 1e-9);
    }

    MarkovChain cycle;
    cycle.provenance = ChainKind::RandomWalk;
    cycle.P = SparseMatrix(3);
    cycle.P.add(0, 1, 1.0);
    cycle.P.add(1, 2, 1.0);
    cycle.P.add(2, 0, 1.0);
    CHECK(entropy_rate(cycle, uniform_distribution(3)) == doctest::Approx(0.0));
}

TEST_CASE("path probabilities only depend on the endpoints") {
    GraphConfig cfg;
    MergeGraph g = build_merge_graph(default_labels(4), all_kinds(), cfg);
    MarkovChain chain = hamc_for(g);
    for (int ell = 1; ell <= 3; ++ell) {
        PathTableReport rep = path_probability_table(chain, ell);
        CHECK(rep.paths > 0);
        CHECK(rep.max_abs_deviation < 1e-9);
    }
}

TEST_CASE("random walk requires positive out-degrees") {
    SparseMatrix dead(2);
    dead.add(0, 1, 1.0);
    CHECK_THROWS_AS(to_random_walk(dead), ZeroRowError);
}

TEST_CASE("boltzmann edge distribution") {
    GraphConfig cfg;
    MergeGraph g = build_merge_graph(default_labels(4), all_kinds(), cfg);
    SparseMatrix K = adjacency_matrix(g, EdgeMode::Simple);
    WeightedMatrix wm = weighted_matrix(g, CostKind::Total, 1.0);
    auto omega = [&](int i, int j) { return wm.exponent_at(i, j); };

    BoltzmannResult b = boltzmann_edges(K, omega, 1.0);
    CHECK(std::abs(b.Z - b.lambda) <= 1e-9 * b.lambda);
    double total = 0;
    for (const auto& e : b.edges) total += e.probability;
    CHECK(std::abs(total - 1.0) < 1e-9);

    // zero weights reduce to the plain conjugated chain's edge law
    BoltzmannResult b0 = boltzmann_edges(K, [](int, int) { return 0.0; }, 2.5);
    PFResult pf = perron_frobenius(K);
    for (const auto& e : b0.edges) {
        double expect = pf.psi[static_cast<size_t>(e.src)] * pf.eta[static_cast<size_t>(e.dst)] / pf.lambda;
        CHECK(std::abs(e.probability - expect) < 1e-10);
    }
}

TEST_CASE("free energy identities at beta = 1") {
    GraphConfig cfg;
    MergeGraph g = build_merge_graph(default_labels(4), all_kinds(), cfg);
    SparseMatrix K = adjacency_matrix(g, EdgeMode::Simple);
    WeightedMatrix wm = weighted_matrix(g, CostKind::Total, 1.0);
    auto omega = [&](int i, int j) { return wm.exponent_at(i, j); };

    FreeEnergyReport rep = free_energy_report(K, omega, 1.0, 1e-4);
    CHECK(rep.energy_identity_residual <= 1e-4);
    CHECK(rep.free_energy_identity_residual <= 1e-8);
    CHECK(std::abs(rep.Z - rep.lambda) <= 1e-9 * rep.lambda);
    CHECK(rep.pass);
    // per-length free energies approach the limit, and each one satisfies
    // the closed form F_ell/ell = -(Sh(pi)/ell + log lambda) / beta
    REQUIRE(rep.per_length_free_energy.size() >= 2);
    double prev = 1e18;
    for (size_t ell = 1; ell <= rep.per_length_free_energy.size(); ++ell) {
        double f = rep.per_length_free_energy[ell - 1];
        double closed = -(rep.stationary_entropy / static_cast<double>(ell) + std::log(rep.lambda)) /
                        rep.beta;
        CHECK(std::abs(f - closed) < 1e-9);
        double err = std::abs(f - rep.per_length_limit);
        CHECK(err < prev);
        prev = err;
    }

    // zero weights: no energy, free energy is pure entropy
    FreeEnergyReport rep0 = free_energy_report(K, [](int, int) { return 0.0; }, 1.0, 1e-4, 2);
    CHECK(std::abs(rep0.mean_energy) < 1e-12);
    CHECK(std::abs(rep0.free_energy + rep0.stationary_entropy + std::log(rep0.lambda)) < 1e-8);
}
