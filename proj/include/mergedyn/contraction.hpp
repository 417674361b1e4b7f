#pragma once

#include <string>
#include <vector>

#include "mergedyn/forest.hpp"
#include "mergedyn/merge_graph.hpp"

namespace mergedyn {

// One Merge step in the trace-labeling variant: quotients keep the cut
// positions as traced leaves named through a head function instead of
// deleting them. Extraction never picks traced material, and no produced
// component may consist of traces only.
struct ContractionOp {
    MergeOpKind kind;
    Workspace source;
    Workspace target; // carries traced leaves
};

std::vector<ContractionOp> contraction_ops_from(const Workspace& f, const KindSet& kinds,
                                                const GraphConfig& config);

struct ContractionCheck {
    bool pass = true;
    int workspaces = 0;
    long long ops = 0;
    std::vector<std::string> mismatches; // offending workspace/op descriptions
    bool produced_all_traced_component = false;
};

// verifies that deleting traces from the one-step trace-labeled image gives
// exactly the one-step image of the plain dynamics, as multisets, per source
ContractionCheck contraction_identity_check(int n, const GraphConfig& config);

} // namespace mergedyn
