#include "mergedyn/contraction.hpp"

#include <algorithm>
#include <map>

namespace mergedyn {

namespace {

bool tree_has_untraced(const Tree& t) { return !t.all_leaves_traced(); }

void check_target(const Workspace& w, bool& all_traced_flag) {
    for (const auto& part : w.parts())
        if (part.all_leaves_traced()) all_traced_flag = true;
}

} // namespace

std::vector<ContractionOp> contraction_ops_from(const Workspace& f, const KindSet& kinds,
                                                const GraphConfig& config) {
    std::vector<ContractionOp> out;
    const auto& parts = f.parts();
    const int r = f.component_count();

    std::vector<HeadFunction> heads;
    heads.reserve(parts.size());
    for (const auto& t : parts) heads.push_back(default_head_function(t));

    auto push = [&](MergeOpKind kind, Workspace target) {
        out.push_back({kind, f, std::move(target)});
    };

    if (kinds.count(MergeOpKind::EM)) {
        // EM only uses the partition of the workspace into components, so it is
        // the same operation in both quotient conventions
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                if (!tree_has_untraced(parts[i]) || !tree_has_untraced(parts[j])) continue;
                push(MergeOpKind::EM, f.without({i, j}, {merge_pair(parts[i], parts[j])}));
            }
    }

    if (kinds.count(MergeOpKind::IM)) {
        for (int i = 0; i < r; ++i) {
            const Tree& t = parts[i];
            if (t.leaf_count() < 2) continue;
            int child_a = 1, child_b = 1 + 2 * t.first_child().leaf_count() - 1;
            for (const auto& [v, term] : t.accessible_terms()) {
                if (v == child_a || v == child_b) continue;
                if (!tree_has_untraced(term)) continue; // traces do not move
                Tree quotient = contract_quotient(t, heads[static_cast<size_t>(i)], {v});
                push(MergeOpKind::IM, f.with_replaced(i, merge_pair(term, quotient)));
            }
        }
    }

    auto untraced_leaf_ids = [](const Tree& t) {
        std::vector<int> out_ids;
        for (int v : t.leaf_vertex_ids())
            if (!t.subtree(v).leaf_label().traced) out_ids.push_back(v);
        return out_ids;
    };

    if (kinds.count(MergeOpKind::SM1)) {
        for (int i = 0; i < r; ++i) {
            const Tree& t = parts[i];
            if (t.leaf_count() < 2) continue;
            for (int j = 0; j < r; ++j) {
                if (j == i || parts[j].leaf_count() != 1) continue;
                if (parts[j].leaf_label().traced) continue;
                for (int v : untraced_leaf_ids(t)) {
                    Tree cherry = merge_pair(t.subtree(v), parts[j]);
                    Tree quotient = contract_quotient(t, heads[static_cast<size_t>(i)], {v});
                    push(MergeOpKind::SM1, f.without({i, j}, {quotient, cherry}));
                }
            }
        }
    }

    if (kinds.count(MergeOpKind::SM2)) {
        for (int i = 0; i < r; ++i) {
            if (parts[i].leaf_count() < 2) continue;
            for (int j = i + 1; j < r; ++j) {
                if (parts[j].leaf_count() < 2) continue;
                for (int vi : untraced_leaf_ids(parts[i]))
                    for (int vj : untraced_leaf_ids(parts[j])) {
                        Tree cherry = merge_pair(parts[i].subtree(vi), parts[j].subtree(vj));
                        Tree qi = contract_quotient(parts[i], heads[static_cast<size_t>(i)], {vi});
                        Tree qj = contract_quotient(parts[j], heads[static_cast<size_t>(j)], {vj});
                        push(MergeOpKind::SM2, f.without({i, j}, {qi, qj, cherry}));
                    }
            }
        }
    }

    if (kinds.count(MergeOpKind::SM3)) {
        for (int i = 0; i < r; ++i) {
            const Tree& t = parts[i];
            if (t.leaf_count() < 3) continue;
            auto ids = untraced_leaf_ids(t);
            for (size_t a = 0; a < ids.size(); ++a)
                for (size_t b = a + 1; b < ids.size(); ++b) {
                    int va = ids[a], vb = ids[b];
                    if (!config.sister_cut && vb == va + 1) {
                        Tree parent_check = t.subtree(va - 1);
                        if (!parent_check.is_leaf() && parent_check.leaf_count() == 2) continue;
                    }
                    Tree cherry = merge_pair(t.subtree(va), t.subtree(vb));
                    Tree quotient = contract_quotient(t, heads[static_cast<size_t>(i)], {va, vb});
                    push(MergeOpKind::SM3, f.without({i}, {quotient, cherry}));
                }
        }
    }

    return out;
}

ContractionCheck contraction_identity_check(int n, const GraphConfig& config) {
    ContractionCheck res;
    auto labels = default_labels(n);
    for (const auto& f : enumerate_forests(labels)) {
        res.workspaces++;
        std::vector<std::string> plain, projected;
        for (const auto& op : ops_from(f, all_kinds(), config))
            plain.push_back(op.target.encoding());
        for (const auto& cop : contraction_ops_from(f, all_kinds(), config)) {
            check_target(cop.target, res.produced_all_traced_component);
            projected.push_back(project_dc(cop.target).encoding());
        }
        res.ops += static_cast<long long>(plain.size());
        std::sort(plain.begin(), plain.end());
        std::sort(projected.begin(), projected.end());
        if (plain != projected) {
            res.pass = false;
            res.mismatches.push_back(f.encoding());
            if (res.mismatches.size() > 16) return res;
        }
    }
    return res;
}

} // namespace mergedyn
