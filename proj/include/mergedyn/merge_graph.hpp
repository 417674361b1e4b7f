#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "mergedyn/digraph.hpp"
#include "mergedyn/forest.hpp"

namespace mergedyn {

enum class MergeOpKind : uint8_t { EM, IM, SM1, SM2, SM3 };

const char* kind_name(MergeOpKind k);
bool is_sm(MergeOpKind k);

using KindSet = std::set<MergeOpKind>;
KindSet all_kinds();
KindSet kinds_from_string(const std::string& csv); // "em,im,sm"

enum class EdgeMode { Ops, Simple };

struct GraphConfig {
    bool sister_cut = true;      // allow extracting both leaves of an in-tree cherry
    EdgeMode edge_mode = EdgeMode::Simple;
    int cap = 7;
};

// One Merge transformation. The descriptor (kind, component indices, vertex
// ids) is enough to replay the operation against the source workspace.
struct MergeOp {
    MergeOpKind kind;
    int comp_i = -1; // main component index in the source's sorted part list
    int comp_j = -1; // second component (EM, SM1 singleton, SM2)
    int vi = -1;     // vertex id inside component i (IM term, SM leaf)
    int vj = -1;     // vertex id inside component j (SM2) or second leaf in i (SM3)
    int ki = 0, kj = 0; // leaf counts of the source components involved
    Workspace source;
    Workspace target;
};

// replay a descriptor; used both by the builder and by the edge-correctness check
Workspace apply_op(const Workspace& f, const MergeOp& op);

std::vector<MergeOp> ops_from(const Workspace& f, const KindSet& kinds, const GraphConfig& config);

struct GraphEdge {
    int src, dst;
    MergeOpKind kind;
    int ki = 0, kj = 0;
    int mult = 1; // number of distinct operations behind this (src, dst, kind)
};

struct MergeGraph {
    int n = 0;
    std::vector<std::string> labels;
    GraphConfig config;
    KindSet kinds;
    std::vector<Workspace> vertices; // sorted by canonical encoding
    std::vector<GraphEdge> edges;    // one entry per (src, dst, kind)
    std::unordered_map<std::string, int> index;

    int vertex_id(const Workspace& f) const;
    // entry weight in the configured edge mode: op count or 0/1
    Digraph support(EdgeMode mode) const;
    Digraph support() const { return support(config.edge_mode); }
};

MergeGraph build_merge_graph(const std::vector<std::string>& labels, const KindSet& kinds,
                             const GraphConfig& config);

struct DegreeProfile {
    long long em_out = 0, em_in = 0;
    long long im_out = 0, im_in = 0;
    long long sm_out = 0;
    long long sm_in_printed = 0; // closed form kept for the diagnostic report only
};

DegreeProfile degree_profile(const Workspace& f, const GraphConfig& config);

struct DegreeReport {
    int vertices_checked = 0;
    bool asserted_pass = true;                 // EM/IM in+out and SM out
    std::vector<std::string> failures;         // asserted mismatches
    std::vector<std::string> sm_in_mismatches; // diagnostic only
};

// compares enumerated op counts per vertex against the closed forms; the graph
// must have been built in ops mode
DegreeReport verify_degrees(const MergeGraph& g);

struct FiberComponents {
    Partition partition;
    std::vector<std::vector<int>> components; // vertex ids into the fiber list
    std::vector<Workspace> fiber;             // the fiber itself, sorted
};

// weakly connected components of the IM-only dynamics on one partition fiber
FiberComponents im_fiber_components(int n, const Partition& p,
                                    const std::vector<std::string>& labels,
                                    const GraphConfig& config);

std::string graph_to_json(const MergeGraph& g);
std::string graph_to_dot(const MergeGraph& g);
MergeGraph graph_from_json(const std::string& text);

} // namespace mergedyn
