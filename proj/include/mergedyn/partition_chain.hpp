#pragma once

#include <string>
#include <vector>

#include "mergedyn/cost.hpp"
#include "mergedyn/forest.hpp"
#include "mergedyn/merge_graph.hpp"
#include "mergedyn/spectral.hpp"

namespace mergedyn {

// one arrow class of the reduced chain: same kind and same source-component sizes,
// so a single cost applies to every operation behind it
struct TypedEdge {
    int src, dst;
    MergeOpKind kind;
    int ki = 0, kj = 0;
    long long count = 0; // per-representative arrow count in the chosen edge mode
};

struct PartitionGraph {
    int n = 0;
    EdgeMode edge_mode = EdgeMode::Simple;
    std::vector<Partition> vertices; // graded-lex order
    std::vector<TypedEdge> edges;
    std::vector<long long> fiber_sizes; // c_p

    int vertex_id(const Partition& p) const;
    SparseMatrix reduced_matrix() const; // K^{Y,R}
    Digraph support() const;
    // weighted reduced matrix: per entry, sum over arrow classes of count * t^cost
    SparseMatrix weighted_reduced_matrix(CostKind kind, double t) const;
    // min-plus cost matrix: min cost over arrow classes of each entry
    std::vector<std::vector<double>> cost_matrix(CostKind kind) const;
};

PartitionGraph build_partition_graph(int n, EdgeMode mode, const KindSet& kinds,
                                     const GraphConfig& config);
PartitionGraph build_partition_graph(int n, EdgeMode mode = EdgeMode::Simple);

struct ProjectionData {
    std::vector<Partition> fibers;
    std::vector<int> fiber_of;                       // graph vertex -> fiber index
    std::vector<long long> fiber_sizes;              // c
    std::vector<std::vector<long long>> edge_totals; // all edges fiber -> fiber
    std::vector<std::vector<long long>> KYR;         // totals / c_src, exact integers
    std::vector<std::vector<double>> KYL;            // totals / c_dst, rational in general
    bool out_exact = true; // every fiber-pair total divisible by the source fiber size
    bool in_exact = true;  // ... by the target fiber size (fails where shapes split a fiber)
};

ProjectionData project(const MergeGraph& g);

struct ProjectionReport {
    bool out_pass = true; // per-target-fiber out-counts constant on each fiber
    bool in_pass = true;  // per-source-fiber in-counts constant on each fiber
    bool pass = true;     // both directions
    std::vector<std::string> out_failures, in_failures;
};

// fiber-wise constancy of out- and in-counts in the graph's edge mode, exact.
// The out direction is what the reduction rests on; the in direction fails on
// fibers whose trees decompose at the root in more than one shape.
ProjectionReport verify_p_symmetry(const MergeGraph& g);

struct LiftedStationary {
    double lambda = 0;
    std::vector<double> eta_Y, psi_Y; // PF data of K^{Y,R}, pairing normalization
    std::vector<double> xi_Y;         // psi_Y / c, the left PF vector of K^{Y,L}
    Distribution per_forest;          // over g.vertices, sums to 1
    std::vector<double> class_values; // per fiber, normalized to sum to 1 over classes
};

LiftedStationary lift_stationary(const PartitionGraph& pg, const MergeGraph& g);
// weighted variant used by the zero-temperature scans
LiftedStationary lift_stationary_weighted(const PartitionGraph& pg, const MergeGraph& g,
                                          CostKind kind, double t);
// partition-level only (no Merge graph needed): per-fiber values of the lifted
// stationary distribution, normalized so that sum_p c_p value_p = 1
std::vector<double> fiber_stationary_values(const PartitionGraph& pg, CostKind kind, double t);

struct TableauGraph {
    int n = 0;
    std::vector<std::vector<std::vector<std::string>>> vertices; // sorted blocks of sorted labels
    std::vector<Partition> shape;                                // partition per vertex
    Digraph graph;                                               // simple edges
};

TableauGraph build_tableau_graph(int n, const std::vector<std::string>& labels);

} // namespace mergedyn
