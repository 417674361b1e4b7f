#pragma once

#include <string>

#include "mergedyn/forest.hpp"
#include "mergedyn/merge_graph.hpp"
#include "mergedyn/rat.hpp"
#include "mergedyn/spectral.hpp"

namespace mergedyn {

enum class CostKind { MS, MY, CL, Total, Shannon, TotalPlusShannon };

CostKind cost_kind_from_string(const std::string& s);
const char* cost_kind_name(CostKind k);
bool has_shannon_term(CostKind k);
bool has_structural_term(CostKind k);

// the rational table part (everything except the source-entropy term)
Rat structural_cost(MergeOpKind op, int ki, int kj, CostKind kind);

// full edge cost; source partition feeds the entropy term
double op_cost(MergeOpKind op, int ki, int kj, const Partition& source, CostKind kind);
double op_cost(const MergeOp& op, CostKind kind);
double shannon_edge_cost(const Partition& source_partition);

struct WeightedMatrix {
    SparseMatrix matrix; // entries t^cost * K
    std::vector<std::vector<std::pair<int, double>>> exponents; // cost per support entry
    double t = 1.0;
    CostKind kind = CostKind::Total;

    double exponent_at(int i, int j) const;
};

// weight a full Merge graph; every support entry carries a single well-defined cost
WeightedMatrix weighted_matrix(const MergeGraph& g, CostKind kind, double t);

// residual of the entropy grouping identity when rows ki and kj merge
double chain_rule_check(const Partition& p, int ki, int kj);

} // namespace mergedyn
