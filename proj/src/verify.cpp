#include "mergedyn/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "mergedyn/contraction.hpp"
#include "mergedyn/cost.hpp"
#include "mergedyn/forest.hpp"
#include "mergedyn/merge_graph.hpp"
#include "mergedyn/partition_chain.hpp"
#include "mergedyn/simulate.hpp"
#include "mergedyn/spectral.hpp"
#include "mergedyn/tropical.hpp"

namespace mergedyn {

namespace {

struct Ctx {
    VerifyOptions opt;
    std::map<std::tuple<int, EdgeMode, bool>, MergeGraph> cache;

    GraphConfig config(EdgeMode mode, bool sister_cut) const {
        GraphConfig c;
        c.sister_cut = sister_cut;
        c.edge_mode = mode;
        c.cap = std::max(7, opt.max_n);
        return c;
    }
    GraphConfig config(EdgeMode mode) const { return config(mode, opt.sister_cut); }
    const MergeGraph& graph_with(int n, EdgeMode mode, bool sister_cut) {
        auto key = std::make_tuple(n, mode, sister_cut);
        auto it = cache.find(key);
        if (it == cache.end())
            it = cache.emplace(key, build_merge_graph(default_labels(n), all_kinds(),
                                                      config(mode, sister_cut)))
                     .first;
        return it->second;
    }
    // structural criteria follow the configured flag
    const MergeGraph& graph(int n, EdgeMode mode) { return graph_with(n, mode, opt.sister_cut); }
    // value-pinned criteria always use the default convention (the printed
    // numbers are defined with sister cuts allowed)
    const MergeGraph& pinned_graph(int n, EdgeMode mode) { return graph_with(n, mode, true); }
};

using CheckFn = std::function<void(Ctx&, CheckResult&)>;

void fail(CheckResult& r, const std::string& msg) {
    r.pass = false;
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += msg;
}

void expect(CheckResult& r, bool cond, const std::string& msg) {
    if (!cond) fail(r, msg);
}

long long dfact(int m) {
    long long v = 1;
    for (int k = m; k >= 2; k -= 2) v *= k;
    return v;
}

// ---- criterion bodies ----

void check_counting(Ctx& c, CheckResult& r) {
    int hi = std::min(7, c.opt.max_n);
    for (int n = 2; n <= hi; ++n) {
        auto trees = enumerate_trees(default_labels(n));
        expect(r, static_cast<long long>(trees.size()) == dfact(2 * n - 3),
               "tree count off at n=" + std::to_string(n));
        auto forests = enumerate_forests(default_labels(n));
        std::map<std::string, long long> by_fiber;
        for (const auto& f : forests) by_fiber[partition_of(f).str()]++;
        long long total = 0;
        for (const auto& p : partitions_without_all_ones(n)) {
            long long lambda = static_cast<long long>(counting(n, p).lambda.to_u64());
            expect(r, by_fiber[p.str()] == lambda, "fiber count off at " + p.str());
            total += lambda;
        }
        expect(r, total == static_cast<long long>(forests.size()),
               "fiber totals do not add up at n=" + std::to_string(n));
    }
    r.detail = "trees and forest fibers exact for n<=" + std::to_string(hi);
}

void check_degree_formulas(Ctx& c, CheckResult& r) {
    int hi = std::min(6, c.opt.max_n);
    int sm_in_mismatches = 0;
    for (int n = 3; n <= hi; ++n) {
        DegreeReport rep = verify_degrees(c.graph(n, EdgeMode::Ops));
        expect(r, rep.asserted_pass, "degree formula mismatch at n=" + std::to_string(n) +
                                         (rep.failures.empty() ? "" : ": " + rep.failures.front()));
        sm_in_mismatches += static_cast<int>(rep.sm_in_mismatches.size());
    }
    r.detail = "EM/IM in+out and SM out exact for n=3.." + std::to_string(hi) +
               "; printed SM-in form disagrees at " + std::to_string(sm_in_mismatches) +
               " vertices (reported only)";
}

void check_connectivity(Ctx& c, CheckResult& r) {
    int hi = std::min(6, c.opt.max_n);
    for (int n = 3; n <= hi; ++n) {
        Digraph d = c.graph(n, EdgeMode::Ops).support(EdgeMode::Simple);
        expect(r, strongly_connected_components(d).scc_count == 1,
               "not strongly connected at n=" + std::to_string(n));
        expect(r, period(d) == 1, "periodic at n=" + std::to_string(n));
    }
    r.detail = "full graph strongly connected and aperiodic for n=3.." + std::to_string(hi);
}

void check_golden_n4(Ctx& c, CheckResult& r) {
    if (c.opt.max_n < 4) {
        r.skipped = true;
        r.detail = "requires n >= 4";
        return;
    }
    PartitionGraph pg = build_partition_graph(4, EdgeMode::Simple, all_kinds(), c.config(EdgeMode::Simple, true));
    const double expect_m[4][4] = {{4, 1, 2, 0}, {4, 0, 0, 1}, {3, 3, 2, 1}, {0, 3, 0, 4}};
    SparseMatrix m = pg.reduced_matrix();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            expect(r, m.at(i, j) == expect_m[i][j], "reduced matrix entry mismatch");
    PFResult pf = perron_frobenius(m, 1e-12, 1000000, PFNorm::Unit);
    expect(r, std::abs(pf.lambda - 6.9656) < 5e-4, "lambda off the printed value");
    const double eta[4] = {0.5565, 0.3739, 0.6383, 0.3782};
    const double psi[4] = {0.8345, 0.3666, 0.3361, 0.2369};
    for (int i = 0; i < 4; ++i) {
        expect(r, std::abs(pf.eta[static_cast<size_t>(i)] - eta[i]) < 1e-3, "eta digit mismatch");
        expect(r, std::abs(pf.psi[static_cast<size_t>(i)] - psi[i]) < 1e-3, "psi digit mismatch");
    }
    LiftedStationary lift = lift_stationary(pg, c.pinned_graph(4, EdgeMode::Simple));
    const double printed[4] = {0.5267, 0.3109, 0.1217, 0.0406};
    for (int i = 0; i < 4; ++i)
        expect(r, std::abs(lift.class_values[static_cast<size_t>(i)] - printed[i]) < 2e-3,
               "class stationary digit mismatch");
    r.detail = "reduced matrix exact; lambda/eta/psi/stationary match the printed digits";
}

// The two-sided projection symmetry and the per-forest stationary lift are
// asserted exactly as specified. They cannot hold for this dynamics: every
// tree has one EM parent whose fiber depends on the tree's root split, so
// in-counts (and with them the left eigenvector) split inside shape-mixed
// fibers. The parts that are true are verified and reported alongside.
void check_projection(Ctx& c, CheckResult& r) {
    int hi = std::min(5, c.opt.max_n);
    if (hi < 4) {
        r.skipped = true;
        r.detail = "requires n >= 4";
        return;
    }
    if (!c.opt.sister_cut) {
        for (int n = 4; n <= hi; ++n) {
            ProjectionReport rep = verify_p_symmetry(c.graph(n, EdgeMode::Simple));
            expect(r, !rep.out_pass, "out-counts unexpectedly fiber-constant without sister cuts");
        }
        r.detail = "sister cuts disabled: out-direction fails as expected (reported, not an error)";
        return;
    }
    std::ostringstream os;
    for (int n = 4; n <= hi; ++n) {
        const MergeGraph& g = c.graph(n, EdgeMode::Simple);
        ProjectionReport rep = verify_p_symmetry(g);
        expect(r, rep.out_pass, "out-counts vary inside a fiber at n=" + std::to_string(n));
        expect(r, rep.pass, "two-sided fiber symmetry fails at n=" + std::to_string(n));

        SparseMatrix K = adjacency_matrix(g, EdgeMode::Simple);
        PFResult pf = perron_frobenius(K);
        MarkovChain chain = to_markov(K, pf);
        Distribution direct = stationary(chain);
        PartitionGraph pg = build_partition_graph(n, EdgeMode::Simple);
        LiftedStationary lift = lift_stationary(pg, g);
        expect(r, std::abs(lift.lambda - pf.lambda) <= 1e-9 * pf.lambda, "lambda mismatch");
        double gap = 0, mass_gap = 0;
        std::vector<double> mass_direct(pg.vertices.size(), 0), mass_lift(pg.vertices.size(), 0);
        for (size_t v = 0; v < direct.size(); ++v) {
            gap = std::max(gap, std::abs(direct[v] - lift.per_forest[v]));
            int f = pg.vertex_id(partition_of(g.vertices[v]));
            mass_direct[static_cast<size_t>(f)] += direct[v];
            mass_lift[static_cast<size_t>(f)] += lift.per_forest[v];
        }
        for (size_t f = 0; f < pg.vertices.size(); ++f)
            mass_gap = std::max(mass_gap, std::abs(mass_direct[f] - mass_lift[f]));
        expect(r, gap <= 1e-9, "per-forest stationary lift gap " + std::to_string(gap) + " at n=" +
                                   std::to_string(n));
        os << "n=" << n << ": lambda equal, out-counts constant, fiber masses lump (gap "
           << mass_gap << "), but in-counts split shape-mixed fibers and the per-forest lift is off by "
           << gap << ". ";
    }
    os << "Known defect of the projection claim; see the lumping checks for what does hold.";
    r.detail = os.str();
}

void check_im_dynamics(Ctx& c, CheckResult& r) {
    int hi = std::min(6, c.opt.max_n);
    GraphConfig cfg = c.config(EdgeMode::Ops);
    for (int n = 3; n <= hi; ++n) {
        for (const auto& p : partitions_without_all_ones(n)) {
            FiberComponents fc = im_fiber_components(n, p, default_labels(n), cfg);
            Counting cnt = counting(n, p);
            expect(r, fc.components.size() == cnt.upsilon.to_u64(),
                   "component count off at " + p.str());
            long long size_expect = 1;
            for (auto [k, a] : p.with_multiplicity())
                for (int i = 0; i < a; ++i) size_expect *= dfact(2 * k - 3);
            long long d = 0;
            for (int k : p.parts)
                if (k >= 2) d += 2 * k - 4;
            for (const auto& comp : fc.components) {
                expect(r, static_cast<long long>(comp.size()) == size_expect,
                       "component size off at " + p.str());
                if (p.parts.front() < 3) continue;
                // chain restricted to this component
                std::map<int, int> re;
                for (size_t i = 0; i < comp.size(); ++i) re[comp[i]] = static_cast<int>(i);
                SparseMatrix K(static_cast<int>(comp.size()));
                for (size_t i = 0; i < comp.size(); ++i)
                    for (const auto& op :
                         ops_from(fc.fiber[static_cast<size_t>(comp[i])], {MergeOpKind::IM}, cfg)) {
                        int tgt = -1;
                        for (size_t t = 0; t < fc.fiber.size(); ++t)
                            if (fc.fiber[t] == op.target) tgt = static_cast<int>(t);
                        K.add(static_cast<int>(i), re.at(tgt), 1.0);
                    }
                PFResult pf = perron_frobenius(K); // throws if reducible or periodic
                expect(r, std::abs(pf.lambda - static_cast<double>(d)) <= 1e-9,
                       "IM eigenvalue off at " + p.str());
                MarkovChain chain = to_markov(K, pf);
                Distribution pi = stationary(chain);
                for (double v : pi)
                    expect(r, std::abs(v - 1.0 / static_cast<double>(comp.size())) <= 1e-12,
                           "IM stationary not uniform at " + p.str());
            }
        }
    }
    r.detail = "components, sizes, ergodicity, uniform laws and eigenvalues verified for n<=" +
               std::to_string(hi);
}

void check_restricted_dynamics(Ctx& c, CheckResult& r) {
    int hi = std::min(5, c.opt.max_n);
    if (hi < 4) {
        r.skipped = true;
        r.detail = "requires n >= 4";
        return;
    }
    GraphConfig cfg = c.config(EdgeMode::Simple);
    for (int n = 4; n <= hi; ++n) {
        MergeGraph im_em = build_merge_graph(default_labels(n), {MergeOpKind::IM, MergeOpKind::EM}, cfg);
        Condensation c1 = strongly_connected_components(im_em.support());
        auto closed1 = c1.closed_classes();
        expect(r, closed1.size() == 1, "IM-EM closed class count off");
        std::set<int> class1(c1.members[static_cast<size_t>(closed1[0])].begin(),
                             c1.members[static_cast<size_t>(closed1[0])].end());
        long long trees = 0;
        for (size_t v = 0; v < im_em.vertices.size(); ++v)
            if (partition_of(im_em.vertices[v]) == Partition{n}) {
                ++trees;
                expect(r, class1.count(static_cast<int>(v)) == 1, "tree outside the closed class");
            }
        expect(r, static_cast<long long>(class1.size()) == trees, "IM-EM closed class is not the tree fiber");

        MergeGraph im_sm = build_merge_graph(
            default_labels(n), {MergeOpKind::IM, MergeOpKind::SM1, MergeOpKind::SM2, MergeOpKind::SM3}, cfg);
        Condensation c2 = strongly_connected_components(im_sm.support());
        auto closed2 = c2.closed_classes();
        expect(r, closed2.size() == 1, "IM-SM closed class count off");
        std::vector<int> ones(static_cast<size_t>(n - 1), 1);
        ones[0] = 2;
        Partition bottom(ones);
        for (int v : c2.members[static_cast<size_t>(closed2[0])])
            expect(r, partition_of(im_sm.vertices[static_cast<size_t>(v)]) == bottom,
                   "IM-SM closed class has a wrong member");
        long long fib = 0;
        for (const auto& w : im_sm.vertices)
            if (partition_of(w) == bottom) ++fib;
        expect(r, static_cast<long long>(c2.members[static_cast<size_t>(closed2[0])].size()) == fib,
               "IM-SM closed class misses fiber members");

        // uniform stationary on each closed class, from the class-restricted chain
        for (const MergeGraph* gp : {&im_em, &im_sm}) {
            Condensation cc = strongly_connected_components(gp->support());
            auto closed = cc.closed_classes();
            const auto& members = cc.members[static_cast<size_t>(closed[0])];
            std::map<int, int> re;
            for (size_t i = 0; i < members.size(); ++i) re[members[i]] = static_cast<int>(i);
            SparseMatrix K(static_cast<int>(members.size()));
            std::set<std::pair<int, int>> seen;
            for (const auto& e : gp->edges)
                if (re.count(e.src) && re.count(e.dst) && seen.insert({e.src, e.dst}).second)
                    K.add(re.at(e.src), re.at(e.dst), 1.0);
            PFResult pf = perron_frobenius(K);
            MarkovChain chain = to_markov(K, pf);
            Distribution pi = stationary(chain);
            for (double v : pi)
                expect(r, std::abs(v - 1.0 / static_cast<double>(members.size())) <= 1e-12,
                       "closed-class stationary not uniform");
        }
    }
    r.detail = "closed classes are the expected fibers, each with a uniform law";
}

void check_partition_structure(Ctx& c, CheckResult& r) {
    if (c.opt.max_n < 5) {
        r.skipped = true;
        r.detail = "requires n >= 5";
        return;
    }
    GraphConfig cfg = c.config(EdgeMode::Simple, true);
    PartitionGraph skel = build_partition_graph(
        5, EdgeMode::Simple, {MergeOpKind::EM, MergeOpKind::SM1, MergeOpKind::SM2, MergeOpKind::SM3},
        cfg);
    std::set<std::pair<std::string, std::string>> arrows;
    for (const auto& e : skel.edges)
        arrows.insert({skel.vertices[static_cast<size_t>(e.src)].str(),
                       skel.vertices[static_cast<size_t>(e.dst)].str()});
    const std::set<std::pair<std::string, std::string>> expect_arrows = {
        {"2+1+1+1", "2+2+1"}, {"2+1+1+1", "3+1+1"}, {"2+2+1", "3+2"}, {"2+2+1", "4+1"},
        {"3+1+1", "3+2"}, {"3+1+1", "4+1"}, {"3+2", "5"}, {"4+1", "5"},
        {"2+2+1", "2+1+1+1"}, {"3+1+1", "2+2+1"}, {"3+1+1", "2+1+1+1"}, {"3+2", "2+2+1"},
        {"4+1", "3+2"}, {"4+1", "2+2+1"}, {"5", "3+2"},
        {"2+1+1+1", "2+1+1+1"}, {"2+2+1", "2+2+1"}};
    expect(r, arrows == expect_arrows, "EM-SM arrow set differs from the n=5 figure");

    PartitionGraph pg = build_partition_graph(5, EdgeMode::Simple, all_kinds(), cfg);
    Digraph d = pg.support();
    int from = pg.vertex_id(Partition{2, 1, 1, 1});
    int to = pg.vertex_id(Partition{3, 1, 1});
    expect(r, !edge_connectivity_probe(d, from, to), "removing the bridge EM kept strong connectivity");
    for (const Partition& p : {Partition{2, 1, 1, 1}, Partition{2, 2, 1}}) {
        int v = pg.vertex_id(p);
        expect(r, edge_connectivity_probe(d, v, v), "removing an SM loop broke strong connectivity");
    }
    r.detail = "n=5 arrow set exact; the EM bridge is the only fragile edge probed";
}

void check_merw(Ctx& c, CheckResult& r) {
    if (c.opt.max_n < 4) {
        r.skipped = true;
        r.detail = "requires n >= 4";
        return;
    }
    const MergeGraph& g = c.pinned_graph(4, EdgeMode::Simple);
    SparseMatrix K = adjacency_matrix(g, EdgeMode::Simple);
    PFResult pf = perron_frobenius(K);
    MarkovChain merw = to_markov(K, pf);
    Distribution pi = stationary(merw);
    double rate = entropy_rate(merw, pi);
    expect(r, std::abs(rate - std::log(pf.lambda)) <= 1e-6, "entropy rate is not log(lambda)");
    for (int ell = 1; ell <= 3; ++ell) {
        PathTableReport rep = path_probability_table(merw, ell);
        expect(r, rep.max_abs_deviation <= 1e-9,
               "path probability deviation " + std::to_string(rep.max_abs_deviation));
    }
    MarkovChain rw = to_random_walk(K);
    expect(r, entropy_rate(rw, stationary(rw)) <= rate + 1e-9, "random walk beat the conjugated chain");
    for (unsigned long long seed = 1; seed <= 20; ++seed) {
        MarkovChain rnd;
        rnd.provenance = ChainKind::RandomWalk;
        rnd.P = random_stochastic_like(merw.P, seed);
        expect(r, entropy_rate(rnd, stationary(rnd)) <= rate + 1e-9,
               "a random same-support chain beat the conjugated chain");
    }
    r.detail = "entropy rate maximal (vs random walk and 20 perturbations); path laws endpoint-only";
}

void check_free_energy(Ctx& c, CheckResult& r) {
    if (c.opt.max_n < 4) {
        r.skipped = true;
        r.detail = "requires n >= 4";
        return;
    }
    const MergeGraph& g = c.pinned_graph(4, EdgeMode::Simple);
    SparseMatrix K = adjacency_matrix(g, EdgeMode::Simple);
    WeightedMatrix wm = weighted_matrix(g, CostKind::Total, 1.0);
    auto omega = [&](int i, int j) { return wm.exponent_at(i, j); };
    FreeEnergyReport rep = free_energy_report(K, omega, 1.0, 1e-4);
    expect(r, std::abs(rep.Z - rep.lambda) <= 1e-9 * rep.lambda, "Z != lambda");
    expect(r, rep.energy_identity_residual <= 1e-4,
           "dlogZ residual " + std::to_string(rep.energy_identity_residual));
    expect(r, rep.free_energy_identity_residual <= 1e-8,
           "free energy residual " + std::to_string(rep.free_energy_identity_residual));
    std::ostringstream os;
    os << "Z=lambda, energy and free-energy identities hold at beta=1 (residuals "
       << rep.energy_identity_residual << ", " << rep.free_energy_identity_residual << ")";
    r.detail = os.str();
}

void check_tropical(Ctx& c, CheckResult& r) {
    int hi = std::min(5, c.opt.max_n);
    for (int n = 4; n <= hi; ++n) {
        PartitionGraph pg = build_partition_graph(n, EdgeMode::Simple);
        MinPlusMatrix<Rat> m = rational_cost_matrix(pg, CostKind::Total);
        expect(r, min_plus_eigenvalue(m) == Rat(0), "total-cost cycle mean nonzero");
        CriticalGraph crit = critical_graph(m, Rat(0));
        std::set<int> got(crit.vertices.begin(), crit.vertices.end());
        std::set<int> want;
        for (size_t i = 0; i < pg.vertices.size(); ++i)
            if (pg.vertices[i].parts.front() >= 3) want.insert(static_cast<int>(i));
        expect(r, got == want, "critical vertices differ from the IM-loop fibers");

        // eigenbasis columns equal independent single-sink shortest paths
        MinPlusMatrix<Rat> star = kleene_star(m);
        EigenBasis<Rat> basis = eigenbasis(m);
        for (size_t b = 0; b < basis.roots.size(); ++b) {
            int root = basis.roots[b];
            std::vector<std::optional<Rat>> dist(pg.vertices.size());
            dist[static_cast<size_t>(root)] = Rat(0);
            for (size_t round = 0; round < pg.vertices.size(); ++round)
                for (int i = 0; i < m.n; ++i)
                    for (int j = 0; j < m.n; ++j) {
                        if (!m(i, j) || !dist[static_cast<size_t>(j)] || i == j) continue;
                        Rat cand = *m(i, j) + *dist[static_cast<size_t>(j)];
                        auto& slot = dist[static_cast<size_t>(i)];
                        if (!slot || cand < *slot) slot = cand;
                    }
            for (int v = 0; v < m.n; ++v)
                expect(r, basis.right[b][static_cast<size_t>(v)] == *dist[static_cast<size_t>(v)],
                       "eigenbasis entry differs from the path oracle");
        }

        for (CostKind kind : {CostKind::Shannon, CostKind::TotalPlusShannon}) {
            MinPlusMatrix<double> ms = real_cost_matrix(pg, kind);
            double rho = min_plus_eigenvalue(ms);
            expect(r, std::abs(rho) <= 1e-12, "entropy-cost cycle mean nonzero");
            CriticalGraph cs = critical_graph(ms, rho, 1e-12);
            expect(r, cs.vertices.size() == 1 &&
                          pg.vertices[static_cast<size_t>(cs.vertices[0])] == Partition{n},
                   "critical vertex is not the tree fiber");
        }
    }
    // Karp vs exhaustive enumeration on random graphs up to 12 vertices
    std::mt19937 rng(1234u);
    for (int trial = 0; trial < 40; ++trial) {
        int n = 2 + static_cast<int>(rng() % 11);
        MinPlusMatrix<Rat> m(n);
        std::vector<int> order(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
        std::shuffle(order.begin(), order.end(), rng);
        auto weight = [&]() {
            return Rat(static_cast<long long>(rng() % 17) - 4, 1 + static_cast<long long>(rng() % 3));
        };
        for (int i = 0; i < n; ++i)
            m.relax(order[static_cast<size_t>(i)], order[static_cast<size_t>((i + 1) % n)], weight());
        for (int e = 0; e < 2 * n; ++e)
            m.relax(static_cast<int>(rng() % n), static_cast<int>(rng() % n), weight());
        // exhaustive simple-cycle scan
        std::optional<Rat> best;
        std::vector<bool> used(static_cast<size_t>(n), false);
        std::function<void(int, int, Rat, int)> dfs = [&](int start, int v, Rat acc, int len) {
            for (int w = start; w < n; ++w) {
                if (!m(v, w)) continue;
                Rat total = acc + *m(v, w);
                if (w == start) {
                    Rat mean = total / Rat(len);
                    if (!best || mean < *best) best = mean;
                    continue;
                }
                if (used[static_cast<size_t>(w)]) continue;
                used[static_cast<size_t>(w)] = true;
                dfs(start, w, total, len + 1);
                used[static_cast<size_t>(w)] = false;
            }
        };
        for (int s = 0; s < n; ++s) {
            used.assign(static_cast<size_t>(n), false);
            used[static_cast<size_t>(s)] = true;
            dfs(s, s, Rat(0), 1);
        }
        expect(r, best.has_value() && min_plus_eigenvalue(m) == *best,
               "Karp disagrees with cycle enumeration");
    }
    r.detail = "cycle means, critical sets and eigenbasis certified (exact rationals where due)";
}

void check_slopes(Ctx& c, CheckResult& r) {
    int hi = std::min(5, c.opt.max_n);
    if (hi < 4) {
        r.skipped = true;
        r.detail = "requires n >= 4";
        return;
    }
    double worst = 0;
    for (int n = 4; n <= hi; ++n) {
        PartitionGraph pg = build_partition_graph(n, EdgeMode::Simple);
        for (CostKind kind : {CostKind::Shannon, CostKind::TotalPlusShannon}) {
            auto v1 = fiber_stationary_values(pg, kind, 1e-6);
            auto v2 = fiber_stationary_values(pg, kind, 1e-8);
            auto slopes = slope_estimate(v1, v2, 1e-6, 1e-8);
            AsymptoticOrder ord = predicted_orders(pg, kind);
            expect(r, ord.unique_critical, "critical class not unique");
            for (size_t i = 0; i < slopes.size(); ++i) {
                double err = std::abs(slopes[i] - ord.exponent[i]);
                worst = std::max(worst, err);
                expect(r, err <= 0.1, "slope off at " + pg.vertices[i].str() + " (" +
                                          cost_kind_name(kind) + "), err " + std::to_string(err));
            }
        }
    }
    std::ostringstream os;
    os << "fitted exponents within " << worst << " of the arborescence predictions";
    r.detail = os.str();
}

// The mass concentration is checked on the true (full-graph) weighted chain
// and cross-checked against the reduced chain, whose fiber masses are exact
// by lumpability. The per-fiber constancy clause is asserted as specified and
// fails for the same structural reason as in the projection criterion.
void check_zero_temperature(Ctx& c, CheckResult& r) {
    int hi = std::min(5, c.opt.max_n);
    if (hi < 4) {
        r.skipped = true;
        r.detail = "requires n >= 4";
        return;
    }
    std::ostringstream os;
    for (int n = 4; n <= hi; ++n) {
        PartitionGraph pg = build_partition_graph(n, EdgeMode::Simple);
        auto values = fiber_stationary_values(pg, CostKind::Shannon, 1e-4);
        int tree = pg.vertex_id(Partition{n});
        double mass = values[static_cast<size_t>(tree)] *
                      static_cast<double>(pg.fiber_sizes[static_cast<size_t>(tree)]);
        expect(r, mass >= 0.95, "tree-fiber mass " + std::to_string(mass));

        const MergeGraph& g = c.pinned_graph(n, EdgeMode::Simple);
        double worst_spread = 0;
        for (double t : {1.0, 0.5, 1e-2, 1e-4}) {
            WeightedMatrix wm = weighted_matrix(g, CostKind::Shannon, t);
            PFResult pf = perron_frobenius(wm.matrix);
            MarkovChain chain = to_markov(wm.matrix, pf);
            chain.provenance = ChainKind::WeightedHamc;
            Distribution pi = stationary(chain);
            if (t == 1e-4) {
                double direct_mass = 0;
                for (size_t v = 0; v < g.vertices.size(); ++v)
                    if (partition_of(g.vertices[v]) == Partition{n}) direct_mass += pi[v];
                expect(r, std::abs(direct_mass - mass) <= 1e-9,
                       "reduced and direct fiber masses disagree");
            }
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
            for (const auto& [key, mm] : range) {
                double spread = (mm.second - mm.first) / mm.second;
                worst_spread = std::max(worst_spread, spread);
                expect(r, spread <= 1e-9, "weighted stationary varies inside fiber " + key +
                                              " at t=" + std::to_string(t));
            }
        }
        os << "n=" << n << ": tree-fiber mass " << mass
           << " (>=0.95, reduced and direct agree), worst within-fiber spread " << worst_spread
           << ". ";
    }
    os << "The constancy clause fails for the known structural reason (shape-mixed fibers).";
    r.detail = os.str();
}

void check_contraction(Ctx& c, CheckResult& r) {
    int hi = std::min(5, c.opt.max_n);
    GraphConfig cfg = c.config(EdgeMode::Ops);
    for (int n = 2; n <= hi; ++n) {
        ContractionCheck check = contraction_identity_check(n, cfg);
        expect(r, check.pass, "projection identity failed at n=" + std::to_string(n) +
                                  (check.mismatches.empty() ? "" : " at " + check.mismatches.front()));
        expect(r, !check.produced_all_traced_component, "an all-trace component appeared");
    }
    r.detail = "trace-labeled one-step images project exactly onto the plain ones for n<=" +
               std::to_string(hi);
}

void check_chain_rule(Ctx&, CheckResult& r) {
    std::mt19937 rng(99);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        int n = 3 + static_cast<int>(rng() % 28);
        std::vector<int> parts;
        int rest = n;
        while (rest > 0) {
            int k = 1 + static_cast<int>(rng() % rest);
            parts.push_back(k);
            rest -= k;
        }
        if (parts.size() < 2) parts = {n - 1, 1};
        Partition p(parts);
        size_t i = rng() % p.parts.size();
        size_t j = rng() % p.parts.size();
        if (i == j) j = (j + 1) % p.parts.size();
        worst = std::max(worst, chain_rule_check(p, p.parts[i], p.parts[j]));
    }
    expect(r, worst <= 1e-12, "grouping residual " + std::to_string(worst));
    std::ostringstream os;
    os << "max grouping residual " << worst << " over 100 random partitions";
    r.detail = os.str();
}

void check_simulation(Ctx& c, CheckResult& r) {
    if (c.opt.max_n < 4) {
        r.skipped = true;
        r.detail = "requires n >= 4";
        return;
    }
    const MergeGraph& g = c.pinned_graph(4, EdgeMode::Simple);
    SparseMatrix K = adjacency_matrix(g, EdgeMode::Simple);
    PFResult pf = perron_frobenius(K);
    MarkovChain chain = to_markov(K, pf);
    Distribution pi = stationary(chain);
    ChainSampler sampler(chain, "hamc-n4");
    Trajectory t1 = sampler.run(0, 1000000, 42, 1000);
    double tv = tv_distance(empirical_distribution(t1), pi);
    expect(r, tv <= 0.01, "TV distance " + std::to_string(tv));
    Trajectory t2 = sampler.run(0, 1000000, 42, 1000);
    expect(r, t1.visits == t2.visits, "same seed produced different trajectories");
    Trajectory t3 = sampler.run(static_cast<int>(g.vertices.size()) - 1, 1000000, 43, 1000);
    double tv_pair = tv_distance(empirical_distribution(t1), empirical_distribution(t3));
    expect(r, tv_pair <= 0.02, "start dependence " + std::to_string(tv_pair));
    std::ostringstream os;
    os << "empirical law within TV " << tv << " of the exact one; seed-reproducible";
    r.detail = os.str();
}

struct Criterion {
    std::string name;
    CheckFn fn;
    double budget_seconds; // 0 = no budget
};

} // namespace

std::vector<CheckResult> run_acceptance(const VerifyOptions& opt) {
    Ctx ctx;
    ctx.opt = opt;
    std::vector<Criterion> criteria = {
        {"01 counting", check_counting, 60},
        {"02 degree formulas", check_degree_formulas, 0},
        {"03 connectivity", check_connectivity, 0},
        {"04 n=4 golden numbers", check_golden_n4, 1},
        {"05 projection consistency", check_projection, 0},
        {"06 IM dynamics", check_im_dynamics, 0},
        {"07 restricted dynamics", check_restricted_dynamics, 0},
        {"08 partition-graph structure", check_partition_structure, 0},
        {"09 entropy-maximal chain", check_merw, 0},
        {"10 free energy", check_free_energy, 0},
        {"11 tropical eigendata", check_tropical, 0},
        {"12 asymptotic slopes", check_slopes, 30},
        {"13 zero-temperature limit", check_zero_temperature, 0},
        {"14 contraction identity", check_contraction, 0},
        {"15 entropy chain rule", check_chain_rule, 0},
        {"16 simulation", check_simulation, 10},
    };
    std::vector<CheckResult> results;
    for (auto& crit : criteria) {
        CheckResult r;
        r.name = crit.name;
        auto t0 = std::chrono::steady_clock::now();
        try {
            crit.fn(ctx, r);
        } catch (const std::exception& e) {
            fail(r, std::string("exception: ") + e.what());
        }
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (crit.budget_seconds > 0 && r.seconds > crit.budget_seconds)
            fail(r, "runtime " + std::to_string(r.seconds) + "s over budget " +
                        std::to_string(crit.budget_seconds) + "s");
        results.push_back(std::move(r));
    }
    return results;
}

bool print_results(const std::vector<CheckResult>& results, std::ostream& os) {
    bool all = true;
    for (const auto& r : results) {
        const char* tag = r.skipped ? "SKIP" : (r.pass ? "PASS" : "FAIL");
        os << "[" << tag << "] " << r.name;
        char buf[32];
        std::snprintf(buf, sizeof(buf), " (%.2fs)", r.seconds);
        os << buf;
        if (!r.detail.empty()) os << " - " << r.detail;
        os << "\n";
        if (!r.skipped && !r.pass) all = false;
    }
    os << (all ? "all criteria passed" : "some criteria FAILED") << "\n";
    return all;
}

std::string results_to_json(const std::vector<CheckResult>& results) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const auto& r : results) {
        nlohmann::ordered_json e;
        e["name"] = r.name;
        e["status"] = r.skipped ? "skip" : (r.pass ? "pass" : "fail");
        e["seconds"] = r.seconds;
        e["detail"] = r.detail;
        j.push_back(e);
    }
    return j.dump(2) + "\n";
}

} // namespace mergedyn
