#include "mergedyn/tropical.hpp"

#include <cmath>

namespace mergedyn {

MinPlusMatrix<Rat> rational_cost_matrix(const PartitionGraph& pg, CostKind kind) {
    if (has_shannon_term(kind))
        throw Error("entropy terms are irrational; use real_cost_matrix");
    MinPlusMatrix<Rat> m(static_cast<int>(pg.vertices.size()));
    for (const auto& e : pg.edges)
        m.relax(e.src, e.dst, structural_cost(e.kind, e.ki, e.kj, kind));
    return m;
}

MinPlusMatrix<double> real_cost_matrix(const PartitionGraph& pg, CostKind kind) {
    MinPlusMatrix<double> m(static_cast<int>(pg.vertices.size()));
    for (const auto& e : pg.edges)
        m.relax(e.src, e.dst, op_cost(e.kind, e.ki, e.kj, pg.vertices[static_cast<size_t>(e.src)], kind));
    return m;
}

AsymptoticOrder predicted_orders(const PartitionGraph& pg, CostKind kind) {
    const double eps = 1e-12;
    AsymptoticOrder out;
    out.fibers = pg.vertices;
    MinPlusMatrix<double> m = real_cost_matrix(pg, kind);
    double rho = min_plus_eigenvalue(m);
    out.rho_min = rho;
    CriticalGraph crit = critical_graph(m, rho, eps);
    out.critical = crit.vertices;
    out.unique_critical = crit.classes.size() == 1;

    MinPlusMatrix<double> red = reduce_by(m, rho);
    MinPlusMatrix<double> star = kleene_star(red, eps);
    auto column_orders = [&](int root) {
        std::vector<double> ord(pg.vertices.size());
        for (size_t v = 0; v < pg.vertices.size(); ++v) {
            if (!star(static_cast<int>(v), root) || !star(root, static_cast<int>(v)))
                throw Error("critical fiber unreachable");
            ord[v] = *star(static_cast<int>(v), root) + *star(root, static_cast<int>(v));
        }
        return ord;
    };
    if (out.unique_critical) {
        out.exponent = column_orders(crit.classes.front().front());
    } else {
        for (const auto& cls : crit.classes) out.per_basis.push_back(column_orders(cls.front()));
    }
    return out;
}

AsymptoticOrder predicted_orders(int n, CostKind kind) {
    return predicted_orders(build_partition_graph(n, EdgeMode::Simple), kind);
}

std::vector<double> slope_estimate(const std::vector<double>& pi_t1, const std::vector<double>& pi_t2,
                                   double t1, double t2) {
    if (pi_t1.size() != pi_t2.size()) throw DimensionMismatchError("slope inputs differ in size");
    if (!(t2 < t1 && t1 < 1.0)) throw Error("slope estimate expects t2 < t1 < 1");
    std::vector<double> out(pi_t1.size());
    double denom = std::log(t1) - std::log(t2);
    for (size_t i = 0; i < pi_t1.size(); ++i) {
        if (pi_t1[i] < 1e-290 || pi_t2[i] < 1e-290)
            throw UnderflowError("stationary entry too small for slope fitting");
        out[i] = (std::log(pi_t1[i]) - std::log(pi_t2[i])) / denom;
    }
    return out;
}

} // namespace mergedyn
