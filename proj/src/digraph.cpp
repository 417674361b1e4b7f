#include "mergedyn/digraph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace mergedyn {

Condensation strongly_connected_components(const Digraph& g) {
    // iterative Tarjan
    const int n = g.n;
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack;
    Condensation out;
    out.scc_id.assign(n, -1);
    int next_index = 0;

    struct Frame { int v; size_t edge; };
    for (int start = 0; start < n; ++start) {
        if (index[start] != -1) continue;
        std::vector<Frame> frames{{start, 0}};
        index[start] = low[start] = next_index++;
        stack.push_back(start);
        on_stack[start] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& edges = g.adj[static_cast<size_t>(f.v)];
            if (f.edge < edges.size()) {
                int w = edges[f.edge++];
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                int v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    std::vector<int> members;
                    while (true) {
                        int w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        out.scc_id[w] = out.scc_count;
                        members.push_back(w);
                        if (w == v) break;
                    }
                    std::sort(members.begin(), members.end());
                    out.members.push_back(std::move(members));
                    out.scc_count++;
                }
            }
        }
    }

    out.quotient.assign(static_cast<size_t>(out.scc_count), {});
    out.closed.assign(static_cast<size_t>(out.scc_count), true);
    std::map<std::pair<int, int>, int> qedges;
    for (int u = 0; u < n; ++u)
        for (int v : g.adj[static_cast<size_t>(u)]) {
            int cu = out.scc_id[u], cv = out.scc_id[v];
            if (cu != cv) {
                qedges[{cu, cv}]++;
                out.closed[static_cast<size_t>(cu)] = false;
            }
        }
    for (const auto& [key, w] : qedges)
        out.quotient[static_cast<size_t>(key.first)].emplace_back(key.second, w);
    return out;
}

bool is_strongly_connected(const Digraph& g) {
    if (g.n == 0) return false;
    return strongly_connected_components(g).scc_count == 1;
}

int period(const Digraph& g) {
    if (!is_strongly_connected(g)) throw NotStronglyConnectedError("period needs a strongly connected graph");
    std::vector<int> level(g.n, -1);
    std::queue<int> q;
    level[0] = 0;
    q.push(0);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : g.adj[static_cast<size_t>(u)])
            if (level[v] == -1) {
                level[v] = level[u] + 1;
                q.push(v);
            }
    }
    int d = 0;
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[static_cast<size_t>(u)])
            d = std::gcd(d, std::abs(level[u] + 1 - level[v]));
    return d == 0 ? 1 : d;
}

double density(const Digraph& g) {
    if (g.n < 2) throw Error("density needs at least two vertices");
    std::set<std::pair<int, int>> simple;
    for (int u = 0; u < g.n; ++u)
        for (int v : g.adj[static_cast<size_t>(u)]) simple.insert({u, v});
    return static_cast<double>(simple.size()) /
           (static_cast<double>(g.n) * static_cast<double>(g.n - 1));
}

bool edge_connectivity_probe(const Digraph& g, int u, int v) {
    Digraph h(g.n);
    bool dropped = false;
    for (int a = 0; a < g.n; ++a)
        for (int b : g.adj[static_cast<size_t>(a)]) {
            if (!dropped && a == u && b == v) {
                dropped = true;
                continue;
            }
            h.add_edge(a, b);
        }
    if (!dropped) throw Error("edge_connectivity_probe: no such edge");
    return is_strongly_connected(h);
}

} // namespace mergedyn
