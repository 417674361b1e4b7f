#pragma once

#include <utility>
#include <vector>

#include "mergedyn/errors.hpp"

namespace mergedyn {

// plain adjacency-list digraph used by the structural algorithms;
// parallel edges and self-loops allowed
struct Digraph {
    int n = 0;
    std::vector<std::vector<int>> adj;

    explicit Digraph(int nvertices = 0) : n(nvertices), adj(static_cast<size_t>(nvertices)) {}
    void add_edge(int u, int v) { adj[static_cast<size_t>(u)].push_back(v); }
    int edge_count() const {
        size_t m = 0;
        for (const auto& a : adj) m += a.size();
        return static_cast<int>(m);
    }
};

struct Condensation {
    std::vector<int> scc_id;                        // per vertex
    int scc_count = 0;
    std::vector<std::vector<int>> members;          // vertices per class
    std::vector<std::vector<std::pair<int, int>>> quotient; // class -> (class, weight)
    std::vector<bool> closed;                       // no out-edges to other classes

    std::vector<int> closed_classes() const {
        std::vector<int> out;
        for (int c = 0; c < scc_count; ++c)
            if (closed[static_cast<size_t>(c)]) out.push_back(c);
        return out;
    }
};

Condensation strongly_connected_components(const Digraph& g);
bool is_strongly_connected(const Digraph& g);

// gcd of cycle lengths; requires strong connectivity
int period(const Digraph& g);

// #E / (#V (#V-1)), counting distinct ordered pairs only
double density(const Digraph& g);

// true iff the graph stays strongly connected after dropping one copy of (u, v)
bool edge_connectivity_probe(const Digraph& g, int u, int v);

} // namespace mergedyn
