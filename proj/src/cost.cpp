#include "mergedyn/cost.hpp"

#include <cmath>
#include <map>

namespace mergedyn {

CostKind cost_kind_from_string(const std::string& s) {
    if (s == "ms") return CostKind::MS;
    if (s == "my") return CostKind::MY;
    if (s == "cl") return CostKind::CL;
    if (s == "total") return CostKind::Total;
    if (s == "shannon") return CostKind::Shannon;
    if (s == "total+shannon") return CostKind::TotalPlusShannon;
    throw Error("unknown cost kind: " + s);
}

const char* cost_kind_name(CostKind k) {
    switch (k) {
        case CostKind::MS: return "ms";
        case CostKind::MY: return "my";
        case CostKind::CL: return "cl";
        case CostKind::Total: return "total";
        case CostKind::Shannon: return "shannon";
        case CostKind::TotalPlusShannon: return "total+shannon";
    }
    return "?";
}

bool has_shannon_term(CostKind k) {
    return k == CostKind::Shannon || k == CostKind::TotalPlusShannon;
}

bool has_structural_term(CostKind k) { return k != CostKind::Shannon; }

Rat structural_cost(MergeOpKind op, int ki, int kj, CostKind kind) {
    auto ms = [&]() -> Rat {
        switch (op) {
            case MergeOpKind::EM: return 0;
            case MergeOpKind::IM: return 0;
            case MergeOpKind::SM1: return Rat(2) - Rat(1, ki);
            case MergeOpKind::SM2: return Rat(2) - Rat(1, ki) - Rat(1, kj);
            case MergeOpKind::SM3: return Rat(1) - Rat(2, ki);
        }
        return 0;
    };
    auto my = [&]() -> Rat {
        switch (op) {
            case MergeOpKind::EM: return 1;
            case MergeOpKind::IM: return 0;
            case MergeOpKind::SM1: return 0;
            case MergeOpKind::SM2: return -1;
            case MergeOpKind::SM3: return -1;
        }
        return 0;
    };
    auto cl = [&]() -> Rat {
        switch (op) {
            case MergeOpKind::EM: return 0;
            case MergeOpKind::IM: return 0;
            case MergeOpKind::SM1: return 1;
            case MergeOpKind::SM2: return 2;
            case MergeOpKind::SM3: return 2;
        }
        return 0;
    };
    switch (kind) {
        case CostKind::MS: return ms();
        case CostKind::MY: return my();
        case CostKind::CL: return cl();
        case CostKind::Total:
        case CostKind::TotalPlusShannon: return ms() + my() + cl();
        case CostKind::Shannon: return 0;
    }
    throw Error("unknown cost kind");
}

double shannon_edge_cost(const Partition& source_partition) {
    return shannon_of_partition(source_partition);
}

double op_cost(MergeOpKind op, int ki, int kj, const Partition& source, CostKind kind) {
    double c = structural_cost(op, ki, kj, kind).value();
    if (has_shannon_term(kind)) c += shannon_edge_cost(source);
    return c;
}

double op_cost(const MergeOp& op, CostKind kind) {
    return op_cost(op.kind, op.ki, op.kj, partition_of(op.source), kind);
}

double WeightedMatrix::exponent_at(int i, int j) const {
    for (const auto& [col, c] : exponents[static_cast<size_t>(i)])
        if (col == j) return c;
    throw Error("no exponent stored for that entry");
}

WeightedMatrix weighted_matrix(const MergeGraph& g, CostKind kind, double t) {
    if (!(t > 0.0 && t <= 1.0)) throw Error("weight parameter t must lie in (0, 1]");
    WeightedMatrix w;
    w.t = t;
    w.kind = kind;
    w.matrix = SparseMatrix(static_cast<int>(g.vertices.size()));
    w.exponents.assign(g.vertices.size(), {});

    std::vector<Partition> source_partitions;
    source_partitions.reserve(g.vertices.size());
    for (const auto& v : g.vertices) source_partitions.push_back(partition_of(v));

    std::map<std::pair<int, int>, double> seen_cost;
    for (const auto& e : g.edges) {
        double c = op_cost(e.kind, e.ki, e.kj, source_partitions[static_cast<size_t>(e.src)], kind);
        auto key = std::make_pair(e.src, e.dst);
        auto it = seen_cost.find(key);
        if (it != seen_cost.end()) {
            if (std::abs(it->second - c) > 1e-12)
                throw CostCollisionError("edge carries two distinct costs");
            continue;
        }
        seen_cost[key] = c;
    }
    for (const auto& e : g.edges) {
        double c = op_cost(e.kind, e.ki, e.kj, source_partitions[static_cast<size_t>(e.src)], kind);
        double base = g.config.edge_mode == EdgeMode::Ops ? static_cast<double>(e.mult) : 1.0;
        w.matrix.add(e.src, e.dst, base * std::pow(t, c));
        w.exponents[static_cast<size_t>(e.src)].emplace_back(e.dst, c);
    }
    return w;
}

double chain_rule_check(const Partition& p, int ki, int kj) {
    int n = p.n();
    std::vector<int> parts = p.parts;
    auto take = [&](int k) {
        for (auto it = parts.begin(); it != parts.end(); ++it)
            if (*it == k) { parts.erase(it); return; }
        throw Error("part not present in partition");
    };
    take(ki);
    take(kj);
    parts.push_back(ki + kj);
    Partition merged(parts);

    double lhs = shannon_of_partition(merged, n);
    double m = ki + kj;
    double binary = 0;
    for (double q : {ki / m, kj / m})
        if (q > 0) binary -= q * std::log(q);
    double rhs = shannon_of_partition(p, n) - (m / n) * binary;
    return std::abs(lhs - rhs);
}

} // namespace mergedyn
