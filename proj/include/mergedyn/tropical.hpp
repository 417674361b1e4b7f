#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "mergedyn/digraph.hpp"
#include "mergedyn/errors.hpp"
#include "mergedyn/partition_chain.hpp"
#include "mergedyn/rat.hpp"

namespace mergedyn {

// Min-plus matrix: nullopt plays the role of +infinity (no edge), 0 is the
// multiplicative unit. Instantiated with Rat where the costs are rational so
// equality checks can be exact, and with double for entropy-valued costs
// (compared with a small slack).
template <class W>
struct MinPlusMatrix {
    int n = 0;
    std::vector<std::vector<std::optional<W>>> a;

    explicit MinPlusMatrix(int size = 0)
        : n(size), a(static_cast<size_t>(size), std::vector<std::optional<W>>(static_cast<size_t>(size))) {}

    std::optional<W>& operator()(int i, int j) { return a[static_cast<size_t>(i)][static_cast<size_t>(j)]; }
    const std::optional<W>& operator()(int i, int j) const {
        return a[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    void relax(int i, int j, W w) {
        auto& e = (*this)(i, j);
        if (!e || w < *e) e = w;
    }
    Digraph support() const {
        Digraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if ((*this)(i, j)) g.add_edge(i, j);
        return g;
    }
};

template <class W>
bool mp_close(W x, W y, W eps) {
    W d = x < y ? y - x : x - y;
    return !(eps < d);
}

template <class W>
W mp_divide(W x, int k);
template <>
inline Rat mp_divide(Rat x, int k) { return x / Rat(k); }
template <>
inline double mp_divide(double x, int k) { return x / k; }

// Karp's minimum cycle mean
template <class W>
W min_plus_eigenvalue(const MinPlusMatrix<W>& m) {
    if (!is_strongly_connected(m.support()))
        throw NotStronglyConnectedError("minimum cycle mean needs strong connectivity");
    const int n = m.n;
    // D[k][v] = min weight of a k-edge walk from vertex 0 to v
    std::vector<std::vector<std::optional<W>>> D(
        static_cast<size_t>(n + 1), std::vector<std::optional<W>>(static_cast<size_t>(n)));
    D[0][0] = W(0);
    for (int k = 1; k <= n; ++k)
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u) {
                if (!m(u, v) || !D[static_cast<size_t>(k - 1)][static_cast<size_t>(u)]) continue;
                W cand = *D[static_cast<size_t>(k - 1)][static_cast<size_t>(u)] + *m(u, v);
                auto& slot = D[static_cast<size_t>(k)][static_cast<size_t>(v)];
                if (!slot || cand < *slot) slot = cand;
            }
    std::optional<W> rho;
    for (int v = 0; v < n; ++v) {
        if (!D[static_cast<size_t>(n)][static_cast<size_t>(v)]) continue;
        std::optional<W> worst;
        for (int k = 0; k < n; ++k) {
            if (!D[static_cast<size_t>(k)][static_cast<size_t>(v)]) continue;
            W val = mp_divide<W>(*D[static_cast<size_t>(n)][static_cast<size_t>(v)] -
                                     *D[static_cast<size_t>(k)][static_cast<size_t>(v)],
                                 n - k);
            if (!worst || *worst < val) worst = val;
        }
        if (worst && (!rho || *worst < *rho)) rho = worst;
    }
    if (!rho) throw Error("no cycle found");
    return *rho;
}

template <class W>
MinPlusMatrix<W> reduce_by(const MinPlusMatrix<W>& m, W rho) {
    MinPlusMatrix<W> out(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j)
            if (m(i, j)) out(i, j) = *m(i, j) - rho;
    return out;
}

// all-pairs minimal path costs, with the min-plus identity on the diagonal
template <class W>
MinPlusMatrix<W> kleene_star(const MinPlusMatrix<W>& m, W eps = W(0)) {
    MinPlusMatrix<W> d = m;
    for (int i = 0; i < m.n; ++i) {
        auto& e = d(i, i);
        if (!e || W(0) < *e) e = W(0);
    }
    for (int k = 0; k < m.n; ++k)
        for (int i = 0; i < m.n; ++i) {
            if (!d(i, k)) continue;
            for (int j = 0; j < m.n; ++j) {
                if (!d(k, j)) continue;
                W cand = *d(i, k) + *d(k, j);
                auto& slot = d(i, j);
                if (!slot || cand < *slot) slot = cand;
            }
        }
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            if (!m(i, j) || !d(j, i)) continue;
            W loop = *m(i, j) + *d(j, i);
            if (loop < W(0) && !mp_close(loop, W(0), eps))
                throw NegativeCycleError("negative cycle in min-plus matrix");
        }
    return d;
}

// closed walks of length >= 1
template <class W>
MinPlusMatrix<W> plus_matrix(const MinPlusMatrix<W>& m, const MinPlusMatrix<W>& star) {
    MinPlusMatrix<W> out(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int k = 0; k < m.n; ++k) {
            if (!m(i, k)) continue;
            for (int j = 0; j < m.n; ++j) {
                if (!star(k, j)) continue;
                out.relax(i, j, *m(i, k) + *star(k, j));
            }
        }
    return out;
}

struct CriticalGraph {
    std::vector<int> vertices;
    std::vector<std::pair<int, int>> edges;
    std::vector<std::vector<int>> classes; // SCCs of the critical part
};

template <class W>
CriticalGraph critical_graph(const MinPlusMatrix<W>& m, W rho, W eps = W(0)) {
    MinPlusMatrix<W> red = reduce_by(m, rho);
    MinPlusMatrix<W> star = kleene_star(red, eps);
    MinPlusMatrix<W> plus = plus_matrix(red, star);
    CriticalGraph out;
    for (int v = 0; v < m.n; ++v)
        if (plus(v, v) && mp_close(*plus(v, v), W(0), eps)) out.vertices.push_back(v);
    Digraph crit(m.n);
    for (int u = 0; u < m.n; ++u)
        for (int v = 0; v < m.n; ++v) {
            if (!red(u, v) || !star(v, u)) continue;
            if (mp_close(*red(u, v) + *star(v, u), W(0), eps)) {
                out.edges.emplace_back(u, v);
                crit.add_edge(u, v);
            }
        }
    Condensation cond = strongly_connected_components(crit);
    std::vector<bool> is_crit(static_cast<size_t>(m.n), false);
    for (int v : out.vertices) is_crit[static_cast<size_t>(v)] = true;
    for (const auto& members : cond.members) {
        std::vector<int> cls;
        for (int v : members)
            if (is_crit[static_cast<size_t>(v)]) cls.push_back(v);
        if (!cls.empty()) out.classes.push_back(cls);
    }
    return out;
}

template <class W>
bool check_min_plus_eigenvector_right(const MinPlusMatrix<W>& m, const std::vector<W>& u, W ell, W eps) {
    for (int i = 0; i < m.n; ++i) {
        std::optional<W> best;
        for (int j = 0; j < m.n; ++j) {
            if (!m(i, j)) continue;
            W cand = *m(i, j) + u[static_cast<size_t>(j)];
            if (!best || cand < *best) best = cand;
        }
        if (!best || !mp_close(*best, ell + u[static_cast<size_t>(i)], eps)) return false;
    }
    return true;
}

template <class W>
bool check_min_plus_eigenvector_left(const MinPlusMatrix<W>& m, const std::vector<W>& q, W ell, W eps) {
    for (int j = 0; j < m.n; ++j) {
        std::optional<W> best;
        for (int i = 0; i < m.n; ++i) {
            if (!m(i, j)) continue;
            W cand = *m(i, j) + q[static_cast<size_t>(i)];
            if (!best || cand < *best) best = cand;
        }
        if (!best || !mp_close(*best, ell + q[static_cast<size_t>(j)], eps)) return false;
    }
    return true;
}

template <class W>
struct EigenBasis {
    W rho = W(0);
    std::vector<int> roots;            // one representative per critical class
    std::vector<std::vector<W>> right; // u^(root): reduced star column at the root
    std::vector<std::vector<W>> left;  // q^(root): reduced star row
};

template <class W>
EigenBasis<W> eigenbasis(const MinPlusMatrix<W>& m, W eps = W(0)) {
    EigenBasis<W> out;
    out.rho = min_plus_eigenvalue(m);
    MinPlusMatrix<W> red = reduce_by(m, out.rho);
    MinPlusMatrix<W> star = kleene_star(red, eps);
    CriticalGraph crit = critical_graph(m, out.rho, eps);
    for (const auto& cls : crit.classes) {
        int w = cls.front();
        out.roots.push_back(w);
        std::vector<W> u(static_cast<size_t>(m.n)), q(static_cast<size_t>(m.n));
        for (int v = 0; v < m.n; ++v) {
            if (!star(v, w) || !star(w, v)) throw Error("critical vertex unreachable");
            u[static_cast<size_t>(v)] = *star(v, w);
            q[static_cast<size_t>(v)] = *star(w, v);
        }
        if (!check_min_plus_eigenvector_right(red, u, W(0), eps) ||
            !check_min_plus_eigenvector_left(red, q, W(0), eps))
            throw Error("eigenbasis vector fails the min-plus eigen equation");
        out.right.push_back(std::move(u));
        out.left.push_back(std::move(q));
    }
    return out;
}

enum class ArborDirection { Sink, Source };

namespace detail {

template <class W>
struct ArborEdge { int u, v; W w; };

// total weight of the minimum out-arborescence rooted at `root`
// (Chu-Liu/Edmonds contraction)
template <class W>
W edmonds_total_out(std::vector<ArborEdge<W>> edges, int n, int root) {
    W total = W(0);
    while (true) {
        std::vector<std::optional<W>> best(static_cast<size_t>(n));
        std::vector<int> pre(static_cast<size_t>(n), -1);
        for (const auto& e : edges) {
            if (e.v == root || e.u == e.v) continue;
            if (!best[static_cast<size_t>(e.v)] || e.w < *best[static_cast<size_t>(e.v)]) {
                best[static_cast<size_t>(e.v)] = e.w;
                pre[static_cast<size_t>(e.v)] = e.u;
            }
        }
        for (int v = 0; v < n; ++v)
            if (v != root && !best[static_cast<size_t>(v)])
                throw UnreachableError("arborescence root does not span the graph");

        std::vector<int> id(static_cast<size_t>(n), -1), visited(static_cast<size_t>(n), -1);
        int groups = 0;
        for (int v = 0; v < n; ++v) {
            int u = v;
            while (u != root && visited[static_cast<size_t>(u)] == -1 &&
                   id[static_cast<size_t>(u)] == -1) {
                visited[static_cast<size_t>(u)] = v;
                u = pre[static_cast<size_t>(u)];
            }
            if (u != root && id[static_cast<size_t>(u)] == -1 &&
                visited[static_cast<size_t>(u)] == v) {
                int w = u;
                do {
                    id[static_cast<size_t>(w)] = groups;
                    w = pre[static_cast<size_t>(w)];
                } while (w != u);
                ++groups;
            }
        }
        if (groups == 0) {
            // no cycle: the chosen edges form the arborescence
            for (int v = 0; v < n; ++v)
                if (v != root) total += *best[static_cast<size_t>(v)];
            return total;
        }
        // cycle vertices commit their chosen edge now; entering edges are
        // re-weighted by the edge they would displace
        std::vector<bool> on_cycle(static_cast<size_t>(n), false);
        for (int v = 0; v < n; ++v)
            if (id[static_cast<size_t>(v)] != -1) {
                on_cycle[static_cast<size_t>(v)] = true;
                total += *best[static_cast<size_t>(v)];
            }
        for (int v = 0; v < n; ++v)
            if (id[static_cast<size_t>(v)] == -1) id[static_cast<size_t>(v)] = groups++;

        std::vector<ArborEdge<W>> next;
        for (const auto& e : edges) {
            int nu = id[static_cast<size_t>(e.u)], nv = id[static_cast<size_t>(e.v)];
            if (nu == nv) continue;
            W w = e.w;
            if (on_cycle[static_cast<size_t>(e.v)]) w = e.w - *best[static_cast<size_t>(e.v)];
            next.push_back({nu, nv, w});
        }
        edges = std::move(next);
        root = id[static_cast<size_t>(root)];
        n = groups;
    }
}

} // namespace detail

template <class W>
W edmonds_min_arborescence_total(const MinPlusMatrix<W>& m, int root, ArborDirection dir) {
    std::vector<detail::ArborEdge<W>> edges;
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            if (!m(i, j) || i == j) continue;
            if (dir == ArborDirection::Source) edges.push_back({i, j, *m(i, j)});
            else edges.push_back({j, i, *m(i, j)});
        }
    return detail::edmonds_total_out(std::move(edges), m.n, root);
}

template <class W>
struct Arborescence {
    int root = 0;
    ArborDirection direction = ArborDirection::Sink;
    std::vector<int> next;    // sink: next hop toward the root; source: predecessor; -1 at root
    std::vector<W> path_cost; // tree path cost per vertex
    W total_weight = W(0);
    bool total_matches_edmonds = true;
};

// Shortest-path arborescence: Bellman-Ford distances, each vertex keeps one
// optimal edge. For the cost structures used here every arborescence built
// this way also has minimal total weight; that is certified against an
// independent Chu-Liu/Edmonds run rather than assumed.
template <class W>
Arborescence<W> optimal_arborescence(const MinPlusMatrix<W>& m, int root, ArborDirection dir,
                                     W eps = W(0)) {
    const int n = m.n;
    std::vector<std::optional<W>> dist(static_cast<size_t>(n));
    dist[static_cast<size_t>(root)] = W(0);
    for (int round = 0; round <= n; ++round) {
        bool changed = false;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                if (!m(i, j) || i == j) continue;
                if (dir == ArborDirection::Sink) {
                    if (!dist[static_cast<size_t>(j)]) continue;
                    W cand = *m(i, j) + *dist[static_cast<size_t>(j)];
                    auto& slot = dist[static_cast<size_t>(i)];
                    if (!slot || cand < *slot) { slot = cand; changed = true; }
                } else {
                    if (!dist[static_cast<size_t>(i)]) continue;
                    W cand = *dist[static_cast<size_t>(i)] + *m(i, j);
                    auto& slot = dist[static_cast<size_t>(j)];
                    if (!slot || cand < *slot) { slot = cand; changed = true; }
                }
            }
        if (!changed) break;
        if (round == n) throw NegativeCycleError("negative cycle while building arborescence");
    }
    Arborescence<W> a;
    a.root = root;
    a.direction = dir;
    a.next.assign(static_cast<size_t>(n), -1);
    a.path_cost.resize(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        if (!dist[static_cast<size_t>(v)]) throw UnreachableError("vertex cut off from the root");
        a.path_cost[static_cast<size_t>(v)] = *dist[static_cast<size_t>(v)];
    }
    for (int v = 0; v < n; ++v) {
        if (v == root) continue;
        std::optional<W> best;
        int pick = -1;
        for (int j = 0; j < n; ++j) {
            if (v == j) continue;
            std::optional<W> cand;
            if (dir == ArborDirection::Sink) {
                if (m(v, j)) cand = *m(v, j) + a.path_cost[static_cast<size_t>(j)];
            } else {
                if (m(j, v)) cand = a.path_cost[static_cast<size_t>(j)] + *m(j, v);
            }
            if (cand && (!best || *cand < *best)) { best = cand; pick = j; }
        }
        if (pick < 0 || !mp_close(*best, a.path_cost[static_cast<size_t>(v)], eps))
            throw Error("no optimal edge found at a vertex");
        a.next[static_cast<size_t>(v)] = pick;
        a.total_weight += dir == ArborDirection::Sink ? *m(v, pick) : *m(pick, v);
    }
    if (n > 1) {
        W ref = edmonds_min_arborescence_total(m, root, dir);
        a.total_matches_edmonds = mp_close(a.total_weight, ref, eps);
    }
    return a;
}

// ---- partition-graph front ends ----

MinPlusMatrix<Rat> rational_cost_matrix(const PartitionGraph& pg, CostKind kind);
MinPlusMatrix<double> real_cost_matrix(const PartitionGraph& pg, CostKind kind);

struct AsymptoticOrder {
    std::vector<Partition> fibers;
    double rho_min = 0;
    std::vector<int> critical; // fiber indices carrying critical circuits
    bool unique_critical = false;
    std::vector<double> exponent;                // valid when unique_critical
    std::vector<std::vector<double>> per_basis;  // one column per critical class otherwise
};

AsymptoticOrder predicted_orders(int n, CostKind kind);
AsymptoticOrder predicted_orders(const PartitionGraph& pg, CostKind kind);

// fitted per-entry exponents between two parameter values
std::vector<double> slope_estimate(const std::vector<double>& pi_t1, const std::vector<double>& pi_t2,
                                   double t1, double t2);

} // namespace mergedyn
