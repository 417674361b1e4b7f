#include "mergedyn/partition_chain.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <tuple>

namespace mergedyn {

namespace {

// comb trees over sequentially assigned labels; any representative works
// because the reduced counts are fiber-wise constant
Workspace representative_workspace(int n, const Partition& p, const std::vector<std::string>& labels) {
    std::vector<Tree> parts;
    int next = 0;
    for (int k : p.parts) {
        Tree t = Tree::leaf(labels[static_cast<size_t>(next++)]);
        for (int i = 1; i < k; ++i)
            t = merge_pair(t, Tree::leaf(labels[static_cast<size_t>(next++)]));
        parts.push_back(t);
    }
    (void)n;
    return Workspace(std::move(parts));
}

} // namespace

int PartitionGraph::vertex_id(const Partition& p) const {
    for (size_t i = 0; i < vertices.size(); ++i)
        if (vertices[i] == p) return static_cast<int>(i);
    throw Error("partition is not a vertex: " + p.str());
}

SparseMatrix PartitionGraph::reduced_matrix() const {
    const int m = static_cast<int>(vertices.size());
    std::vector<std::vector<long long>> dense(static_cast<size_t>(m), std::vector<long long>(m, 0));
    for (const auto& e : edges) dense[static_cast<size_t>(e.src)][static_cast<size_t>(e.dst)] += e.count;
    SparseMatrix out(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (dense[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0)
                out.add(i, j, static_cast<double>(dense[static_cast<size_t>(i)][static_cast<size_t>(j)]));
    return out;
}

Digraph PartitionGraph::support() const {
    Digraph g(static_cast<int>(vertices.size()));
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges)
        if (seen.insert({e.src, e.dst}).second) g.add_edge(e.src, e.dst);
    return g;
}

SparseMatrix PartitionGraph::weighted_reduced_matrix(CostKind kind, double t) const {
    const int m = static_cast<int>(vertices.size());
    std::vector<std::vector<double>> dense(static_cast<size_t>(m), std::vector<double>(m, 0.0));
    for (const auto& e : edges) {
        double c = op_cost(e.kind, e.ki, e.kj, vertices[static_cast<size_t>(e.src)], kind);
        dense[static_cast<size_t>(e.src)][static_cast<size_t>(e.dst)] +=
            static_cast<double>(e.count) * std::pow(t, c);
    }
    SparseMatrix out(m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (dense[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0.0)
                out.add(i, j, dense[static_cast<size_t>(i)][static_cast<size_t>(j)]);
    return out;
}

std::vector<std::vector<double>> PartitionGraph::cost_matrix(CostKind kind) const {
    const size_t m = vertices.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> c(m, std::vector<double>(m, inf));
    for (const auto& e : edges) {
        double v = op_cost(e.kind, e.ki, e.kj, vertices[static_cast<size_t>(e.src)], kind);
        c[static_cast<size_t>(e.src)][static_cast<size_t>(e.dst)] =
            std::min(c[static_cast<size_t>(e.src)][static_cast<size_t>(e.dst)], v);
    }
    return c;
}

PartitionGraph build_partition_graph(int n, EdgeMode mode, const KindSet& kinds,
                                     const GraphConfig& config) {
    if (n < 3) throw Error("partition graph needs n >= 3");
    PartitionGraph pg;
    pg.n = n;
    pg.edge_mode = mode;
    pg.vertices = partitions_without_all_ones(n);
    auto labels = default_labels(n);
    for (const auto& p : pg.vertices) {
        BigUint lam = counting(n, p).lambda;
        pg.fiber_sizes.push_back(static_cast<long long>(lam.to_u64()));
    }
    for (size_t src = 0; src < pg.vertices.size(); ++src) {
        Workspace rep = representative_workspace(n, pg.vertices[src], labels);
        // class key: target fiber + kind + source component sizes
        std::map<std::tuple<int, MergeOpKind, int, int>, std::set<std::string>> targets;
        std::map<std::tuple<int, MergeOpKind, int, int>, long long> op_counts;
        for (auto& op : ops_from(rep, kinds, config)) {
            int dst = pg.vertex_id(partition_of(op.target));
            auto key = std::make_tuple(dst, op.kind, op.ki, op.kj);
            targets[key].insert(op.target.encoding());
            op_counts[key]++;
        }
        for (auto& [key, encs] : targets) {
            auto [dst, kind, ki, kj] = key;
            TypedEdge e;
            e.src = static_cast<int>(src);
            e.dst = dst;
            e.kind = kind;
            e.ki = ki;
            e.kj = kj;
            e.count = mode == EdgeMode::Ops ? op_counts[key] : static_cast<long long>(encs.size());
            pg.edges.push_back(e);
        }
    }
    return pg;
}

PartitionGraph build_partition_graph(int n, EdgeMode mode) {
    return build_partition_graph(n, mode, all_kinds(), GraphConfig{});
}

ProjectionData project(const MergeGraph& g) {
    ProjectionData d;
    d.fibers = partitions_without_all_ones(g.n);
    auto fiber_index = [&](const Partition& p) {
        for (size_t i = 0; i < d.fibers.size(); ++i)
            if (d.fibers[i] == p) return static_cast<int>(i);
        throw Error("unknown fiber");
    };
    d.fiber_of.resize(g.vertices.size());
    d.fiber_sizes.assign(d.fibers.size(), 0);
    for (size_t i = 0; i < g.vertices.size(); ++i) {
        d.fiber_of[i] = fiber_index(partition_of(g.vertices[i]));
        d.fiber_sizes[static_cast<size_t>(d.fiber_of[i])]++;
    }
    const size_t m = d.fibers.size();
    d.edge_totals.assign(m, std::vector<long long>(m, 0));
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        long long w = g.config.edge_mode == EdgeMode::Ops ? e.mult : 1;
        if (g.config.edge_mode == EdgeMode::Simple && !seen.insert({e.src, e.dst}).second) continue;
        d.edge_totals[static_cast<size_t>(d.fiber_of[static_cast<size_t>(e.src)])]
                     [static_cast<size_t>(d.fiber_of[static_cast<size_t>(e.dst)])] += w;
    }
    d.KYR.assign(m, std::vector<long long>(m, 0));
    d.KYL.assign(m, std::vector<double>(m, 0));
    for (size_t a = 0; a < m; ++a)
        for (size_t b = 0; b < m; ++b) {
            long long tot = d.edge_totals[a][b];
            if (tot % d.fiber_sizes[a] != 0) d.out_exact = false;
            if (tot % d.fiber_sizes[b] != 0) d.in_exact = false;
            d.KYR[a][b] = tot / d.fiber_sizes[a];
            d.KYL[a][b] = static_cast<double>(tot) / static_cast<double>(d.fiber_sizes[b]);
        }
    return d;
}

ProjectionReport verify_p_symmetry(const MergeGraph& g) {
    ProjectionReport rep;
    auto fibers = partitions_without_all_ones(g.n);
    auto fiber_index = [&](const Partition& p) {
        for (size_t i = 0; i < fibers.size(); ++i)
            if (fibers[i] == p) return static_cast<int>(i);
        throw Error("unknown fiber");
    };
    std::vector<int> fiber_of(g.vertices.size());
    for (size_t i = 0; i < g.vertices.size(); ++i)
        fiber_of[i] = fiber_index(partition_of(g.vertices[i]));

    const size_t m = fibers.size();
    const size_t nv = g.vertices.size();
    std::vector<std::vector<long long>> out_counts(nv, std::vector<long long>(m, 0));
    std::vector<std::vector<long long>> in_counts(nv, std::vector<long long>(m, 0));
    std::set<std::pair<int, int>> seen;
    for (const auto& e : g.edges) {
        long long w = g.config.edge_mode == EdgeMode::Ops ? e.mult : 1;
        if (g.config.edge_mode == EdgeMode::Simple && !seen.insert({e.src, e.dst}).second) continue;
        out_counts[static_cast<size_t>(e.src)][static_cast<size_t>(fiber_of[static_cast<size_t>(e.dst)])] += w;
        in_counts[static_cast<size_t>(e.dst)][static_cast<size_t>(fiber_of[static_cast<size_t>(e.src)])] += w;
    }
    for (size_t f = 0; f < m; ++f) {
        std::vector<size_t> members;
        for (size_t v = 0; v < nv; ++v)
            if (fiber_of[v] == static_cast<int>(f)) members.push_back(v);
        if (members.empty()) continue;
        bool out_ok = true, in_ok = true;
        for (size_t v : members) {
            if (out_counts[v] != out_counts[members[0]]) out_ok = false;
            if (in_counts[v] != in_counts[members[0]]) in_ok = false;
        }
        if (!out_ok) {
            rep.out_pass = false;
            rep.out_failures.push_back("fiber " + fibers[f].str() + ": out-counts vary");
        }
        if (!in_ok) {
            rep.in_pass = false;
            rep.in_failures.push_back("fiber " + fibers[f].str() + ": in-counts vary");
        }
    }
    rep.pass = rep.out_pass && rep.in_pass;
    return rep;
}

namespace {

LiftedStationary lift_from_matrix(const PartitionGraph& pg, const MergeGraph& g,
                                  const SparseMatrix& reduced) {
    LiftedStationary out;
    PFResult pf = perron_frobenius(reduced, 1e-13, 1000000, PFNorm::Pairing);
    out.lambda = pf.lambda;
    out.eta_Y = pf.eta;
    out.psi_Y = pf.psi;
    out.xi_Y.resize(pg.vertices.size());
    for (size_t i = 0; i < pg.vertices.size(); ++i)
        out.xi_Y[i] = pf.psi[i] / static_cast<double>(pg.fiber_sizes[i]);

    std::vector<double> value(pg.vertices.size());
    double class_total = 0;
    for (size_t i = 0; i < pg.vertices.size(); ++i) {
        value[i] = pf.eta[i] * pf.psi[i] / static_cast<double>(pg.fiber_sizes[i]);
        class_total += value[i];
    }
    out.class_values.resize(pg.vertices.size());
    for (size_t i = 0; i < pg.vertices.size(); ++i) out.class_values[i] = value[i] / class_total;

    out.per_forest.assign(g.vertices.size(), 0.0);
    double total = 0;
    for (size_t v = 0; v < g.vertices.size(); ++v) {
        int f = pg.vertex_id(partition_of(g.vertices[v]));
        out.per_forest[v] = value[static_cast<size_t>(f)];
        total += out.per_forest[v];
    }
    for (auto& x : out.per_forest) x /= total;
    return out;
}

} // namespace

LiftedStationary lift_stationary(const PartitionGraph& pg, const MergeGraph& g) {
    return lift_from_matrix(pg, g, pg.reduced_matrix());
}

LiftedStationary lift_stationary_weighted(const PartitionGraph& pg, const MergeGraph& g,
                                          CostKind kind, double t) {
    return lift_from_matrix(pg, g, pg.weighted_reduced_matrix(kind, t));
}

std::vector<double> fiber_stationary_values(const PartitionGraph& pg, CostKind kind, double t) {
    SparseMatrix m = pg.weighted_reduced_matrix(kind, t);
    PFResult pf = perron_frobenius(m, 1e-13, 1000000, PFNorm::Pairing);
    std::vector<double> value(pg.vertices.size());
    double total = 0; // sum over forests = sum_p c_p * value_p
    for (size_t i = 0; i < pg.vertices.size(); ++i) {
        value[i] = pf.eta[i] * pf.psi[i] / static_cast<double>(pg.fiber_sizes[i]);
        total += value[i] * static_cast<double>(pg.fiber_sizes[i]);
    }
    for (auto& v : value) v /= total;
    return value;
}

TableauGraph build_tableau_graph(int n, const std::vector<std::string>& labels) {
    if (n < 3) throw Error("tableau graph needs n >= 3");
    if (static_cast<int>(labels.size()) != n) throw Error("label count must equal n");

    using Blocks = std::vector<std::vector<std::string>>;
    auto canon = [](Blocks b) {
        for (auto& blk : b) std::sort(blk.begin(), blk.end());
        std::sort(b.begin(), b.end());
        return b;
    };
    auto encode = [](const Blocks& b) {
        std::string s;
        for (size_t i = 0; i < b.size(); ++i) {
            if (i) s += '|';
            for (size_t j = 0; j < b[i].size(); ++j) {
                if (j) s += ',';
                s += b[i][j];
            }
        }
        return s;
    };

    TableauGraph tg;
    tg.n = n;
    std::map<std::string, int> index;
    // enumerate set partitions, skipping the all-singleton one
    std::vector<int> assign(static_cast<size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int nblocks) {
        if (i == n) {
            if (nblocks == n) return;
            Blocks b(static_cast<size_t>(nblocks));
            for (int j = 0; j < n; ++j)
                b[static_cast<size_t>(assign[static_cast<size_t>(j)])].push_back(labels[static_cast<size_t>(j)]);
            b = canon(std::move(b));
            index[encode(b)] = static_cast<int>(tg.vertices.size());
            std::vector<int> sizes;
            for (const auto& blk : b) sizes.push_back(static_cast<int>(blk.size()));
            tg.shape.push_back(Partition(sizes));
            tg.vertices.push_back(std::move(b));
            return;
        }
        for (int blk = 0; blk <= nblocks; ++blk) {
            assign[static_cast<size_t>(i)] = blk;
            rec(i + 1, std::max(nblocks, blk + 1));
        }
    };
    rec(1, 1);

    tg.graph = Digraph(static_cast<int>(tg.vertices.size()));
    std::set<std::pair<int, int>> seen;
    auto link = [&](int src, Blocks b) {
        b = canon(std::move(b));
        auto it = index.find(encode(b));
        if (it == index.end()) throw Error("tableau edge left the vertex set");
        if (seen.insert({src, it->second}).second) tg.graph.add_edge(src, it->second);
    };

    for (size_t v = 0; v < tg.vertices.size(); ++v) {
        const Blocks& b = tg.vertices[v];
        const int nb = static_cast<int>(b.size());
        // EM: merge two blocks
        for (int i = 0; i < nb; ++i)
            for (int j = i + 1; j < nb; ++j) {
                Blocks nb2;
                std::vector<std::string> merged = b[static_cast<size_t>(i)];
                merged.insert(merged.end(), b[static_cast<size_t>(j)].begin(), b[static_cast<size_t>(j)].end());
                for (int k = 0; k < nb; ++k)
                    if (k != i && k != j) nb2.push_back(b[static_cast<size_t>(k)]);
                nb2.push_back(std::move(merged));
                link(static_cast<int>(v), std::move(nb2));
            }
        for (int i = 0; i < nb; ++i) {
            const auto& bi = b[static_cast<size_t>(i)];
            // SM1: leaf of an edged block joins a singleton block
            if (bi.size() >= 2) {
                for (int j = 0; j < nb; ++j) {
                    if (j == i || b[static_cast<size_t>(j)].size() != 1) continue;
                    for (const auto& x : bi) {
                        Blocks nb2;
                        for (int k = 0; k < nb; ++k)
                            if (k != i && k != j) nb2.push_back(b[static_cast<size_t>(k)]);
                        std::vector<std::string> rest;
                        for (const auto& s : bi)
                            if (s != x) rest.push_back(s);
                        nb2.push_back(rest);
                        nb2.push_back({x, b[static_cast<size_t>(j)][0]});
                        link(static_cast<int>(v), std::move(nb2));
                    }
                }
            }
            // SM2: one leaf from each of two edged blocks
            if (bi.size() >= 2) {
                for (int j = i + 1; j < nb; ++j) {
                    const auto& bj = b[static_cast<size_t>(j)];
                    if (bj.size() < 2) continue;
                    for (const auto& x : bi)
                        for (const auto& y : bj) {
                            Blocks nb2;
                            for (int k = 0; k < nb; ++k)
                                if (k != i && k != j) nb2.push_back(b[static_cast<size_t>(k)]);
                            std::vector<std::string> ri, rj;
                            for (const auto& s : bi)
                                if (s != x) ri.push_back(s);
                            for (const auto& s : bj)
                                if (s != y) rj.push_back(s);
                            nb2.push_back(ri);
                            nb2.push_back(rj);
                            nb2.push_back({x, y});
                            link(static_cast<int>(v), std::move(nb2));
                        }
                }
            }
            // SM3: two leaves from one block of at least three
            if (bi.size() >= 3) {
                for (size_t a = 0; a < bi.size(); ++a)
                    for (size_t c = a + 1; c < bi.size(); ++c) {
                        Blocks nb2;
                        for (int k = 0; k < nb; ++k)
                            if (k != i) nb2.push_back(b[static_cast<size_t>(k)]);
                        std::vector<std::string> rest;
                        for (size_t s = 0; s < bi.size(); ++s)
                            if (s != a && s != c) rest.push_back(bi[s]);
                        nb2.push_back(rest);
                        nb2.push_back({bi[a], bi[c]});
                        link(static_cast<int>(v), std::move(nb2));
                    }
            }
        }
    }
    return tg;
}

} // namespace mergedyn
