#include "mergedyn/merge_graph.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace mergedyn {

const char* kind_name(MergeOpKind k) {
    switch (k) {
        case MergeOpKind::EM: return "EM";
        case MergeOpKind::IM: return "IM";
        case MergeOpKind::SM1: return "SM1";
        case MergeOpKind::SM2: return "SM2";
        case MergeOpKind::SM3: return "SM3";
    }
    return "?";
}

bool is_sm(MergeOpKind k) {
    return k == MergeOpKind::SM1 || k == MergeOpKind::SM2 || k == MergeOpKind::SM3;
}

KindSet all_kinds() {
    return {MergeOpKind::EM, MergeOpKind::IM, MergeOpKind::SM1, MergeOpKind::SM2, MergeOpKind::SM3};
}

KindSet kinds_from_string(const std::string& csv) {
    KindSet out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item == "em" || item == "EM") out.insert(MergeOpKind::EM);
        else if (item == "im" || item == "IM") out.insert(MergeOpKind::IM);
        else if (item == "sm" || item == "SM") {
            out.insert(MergeOpKind::SM1);
            out.insert(MergeOpKind::SM2);
            out.insert(MergeOpKind::SM3);
        } else if (item == "sm1" || item == "SM1") out.insert(MergeOpKind::SM1);
        else if (item == "sm2" || item == "SM2") out.insert(MergeOpKind::SM2);
        else if (item == "sm3" || item == "SM3") out.insert(MergeOpKind::SM3);
        else throw Error("unknown merge kind: " + item);
    }
    return out;
}

Workspace apply_op(const Workspace& f, const MergeOp& op) {
    const auto& parts = f.parts();
    switch (op.kind) {
        case MergeOpKind::EM: {
            Tree merged = merge_pair(parts[op.comp_i], parts[op.comp_j]);
            return f.without({op.comp_i, op.comp_j}, {merged});
        }
        case MergeOpKind::IM: {
            const Tree& t = parts[op.comp_i];
            Tree term = t.subtree(op.vi);
            auto rest = delete_quotient(t, {op.vi});
            if (!rest) throw Error("IM removed the whole component");
            return f.with_replaced(op.comp_i, merge_pair(term, *rest));
        }
        case MergeOpKind::SM1: {
            const Tree& t = parts[op.comp_i];
            Tree x = t.subtree(op.vi);
            Tree cherry = merge_pair(x, parts[op.comp_j]);
            auto rest = delete_quotient(t, {op.vi});
            if (!rest) throw Error("SM1 source component vanished");
            return f.without({op.comp_i, op.comp_j}, {*rest, cherry});
        }
        case MergeOpKind::SM2: {
            const Tree& ti = parts[op.comp_i];
            const Tree& tj = parts[op.comp_j];
            Tree cherry = merge_pair(ti.subtree(op.vi), tj.subtree(op.vj));
            auto ri = delete_quotient(ti, {op.vi});
            auto rj = delete_quotient(tj, {op.vj});
            if (!ri || !rj) throw Error("SM2 source component vanished");
            return f.without({op.comp_i, op.comp_j}, {*ri, *rj, cherry});
        }
        case MergeOpKind::SM3: {
            const Tree& t = parts[op.comp_i];
            Tree cherry = merge_pair(t.subtree(op.vi), t.subtree(op.vj));
            auto rest = delete_quotient(t, {op.vi, op.vj});
            if (!rest) throw Error("SM3 emptied a component");
            return f.without({op.comp_i}, {*rest, cherry});
        }
    }
    throw Error("unreachable");
}

std::vector<MergeOp> ops_from(const Workspace& f, const KindSet& kinds, const GraphConfig& config) {
    std::vector<MergeOp> out;
    const auto& parts = f.parts();
    const int r = f.component_count();

    auto emit = [&](MergeOp op) {
        op.source = f;
        op.target = apply_op(f, op);
        out.push_back(std::move(op));
    };

    if (kinds.count(MergeOpKind::EM)) {
        for (int i = 0; i < r; ++i)
            for (int j = i + 1; j < r; ++j) {
                MergeOp op;
                op.kind = MergeOpKind::EM;
                op.comp_i = i;
                op.comp_j = j;
                op.ki = parts[i].leaf_count();
                op.kj = parts[j].leaf_count();
                emit(std::move(op));
            }
    }

    if (kinds.count(MergeOpKind::IM)) {
        for (int i = 0; i < r; ++i) {
            const Tree& t = parts[i];
            if (t.leaf_count() < 2) continue;
            int size_a = 2 * t.first_child().leaf_count() - 1;
            int child_a = 1, child_b = 1 + size_a;
            for (const auto& [v, term] : t.accessible_terms()) {
                if (v == child_a || v == child_b) continue; // identity moves
                MergeOp op;
                op.kind = MergeOpKind::IM;
                op.comp_i = i;
                op.vi = v;
                op.ki = t.leaf_count();
                (void)term;
                emit(std::move(op));
            }
        }
    }

    if (kinds.count(MergeOpKind::SM1)) {
        for (int i = 0; i < r; ++i) {
            const Tree& t = parts[i];
            if (t.leaf_count() < 2) continue;
            for (int j = 0; j < r; ++j) {
                if (j == i || parts[j].leaf_count() != 1) continue;
                for (int v : t.leaf_vertex_ids()) {
                    MergeOp op;
                    op.kind = MergeOpKind::SM1;
                    op.comp_i = i;
                    op.comp_j = j;
                    op.vi = v;
                    op.ki = t.leaf_count();
                    op.kj = 1;
                    emit(std::move(op));
                }
            }
        }
    }

    if (kinds.count(MergeOpKind::SM2)) {
        for (int i = 0; i < r; ++i) {
            if (parts[i].leaf_count() < 2) continue;
            for (int j = i + 1; j < r; ++j) {
                if (parts[j].leaf_count() < 2) continue;
                for (int vi : parts[i].leaf_vertex_ids())
                    for (int vj : parts[j].leaf_vertex_ids()) {
                        MergeOp op;
                        op.kind = MergeOpKind::SM2;
                        op.comp_i = i;
                        op.comp_j = j;
                        op.vi = vi;
                        op.vj = vj;
                        op.ki = parts[i].leaf_count();
                        op.kj = parts[j].leaf_count();
                        emit(std::move(op));
                    }
            }
        }
    }

    if (kinds.count(MergeOpKind::SM3)) {
        for (int i = 0; i < r; ++i) {
            const Tree& t = parts[i];
            if (t.leaf_count() < 3) continue; // on a cherry component this is the identity
            auto leaf_ids = t.leaf_vertex_ids();
            for (size_t a = 0; a < leaf_ids.size(); ++a)
                for (size_t b = a + 1; b < leaf_ids.size(); ++b) {
                    int va = leaf_ids[a], vb = leaf_ids[b];
                    if (!config.sister_cut && vb == va + 1) {
                        // sister leaves sit at consecutive preorder ids below one vertex
                        Tree parent_check = t.subtree(va - 1);
                        if (!parent_check.is_leaf() && parent_check.leaf_count() == 2) continue;
                    }
                    MergeOp op;
                    op.kind = MergeOpKind::SM3;
                    op.comp_i = i;
                    op.vi = va;
                    op.vj = vb;
                    op.ki = t.leaf_count();
                    emit(std::move(op));
                }
        }
    }

    return out;
}

int MergeGraph::vertex_id(const Workspace& f) const {
    auto it = index.find(f.encoding());
    if (it == index.end()) throw Error("workspace is not a vertex: " + f.encoding());
    return it->second;
}

Digraph MergeGraph::support(EdgeMode mode) const {
    Digraph g(static_cast<int>(vertices.size()));
    std::set<std::pair<int, int>> seen;
    for (const auto& e : edges) {
        if (mode == EdgeMode::Ops) {
            for (int m = 0; m < e.mult; ++m) g.add_edge(e.src, e.dst);
        } else if (seen.insert({e.src, e.dst}).second) {
            g.add_edge(e.src, e.dst);
        }
    }
    return g;
}

MergeGraph build_merge_graph(const std::vector<std::string>& labels, const KindSet& kinds,
                             const GraphConfig& config) {
    const int n = static_cast<int>(labels.size());
    if (n < 2) throw Error("merge graph needs n >= 2");
    if (n > config.cap)
        throw CapExceededError("n = " + std::to_string(n) + " exceeds cap " + std::to_string(config.cap));

    MergeGraph g;
    g.n = n;
    g.labels = labels;
    g.config = config;
    g.kinds = kinds;
    g.vertices = enumerate_forests(labels);
    for (size_t i = 0; i < g.vertices.size(); ++i)
        g.index[g.vertices[i].encoding()] = static_cast<int>(i);

    std::map<std::pair<int, int>, size_t> slot; // (src, dst) -> edge position
    for (size_t src = 0; src < g.vertices.size(); ++src) {
        for (auto& op : ops_from(g.vertices[src], kinds, config)) {
            int dst = g.vertex_id(op.target);
            auto key = std::make_pair(static_cast<int>(src), dst);
            auto it = slot.find(key);
            if (it == slot.end()) {
                slot[key] = g.edges.size();
                g.edges.push_back({static_cast<int>(src), dst, op.kind, op.ki, op.kj, 1});
            } else {
                GraphEdge& e = g.edges[it->second];
                if (e.kind != op.kind)
                    throw KindCollisionError("distinct kinds share an edge: " +
                                             g.vertices[src].encoding() + " -> " +
                                             op.target.encoding());
                e.mult += 1;
            }
        }
    }
    return g;
}

DegreeProfile degree_profile(const Workspace& f, const GraphConfig& config) {
    DegreeProfile d;
    const int n = f.leaf_count();
    const int r = f.component_count();
    std::vector<int> edged; // leaf counts of components with edges, cherries first
    int dprime = 0, ddoubleprime = 0;
    for (const auto& t : f.parts()) {
        int k = t.leaf_count();
        if (k >= 2) edged.push_back(k);
        if (k == 2) ++dprime;
        // cherries strictly inside a component
        for (const auto& [v, sub] : t.accessible_terms())
            if (!sub.is_leaf() && sub.leaf_count() == 2) ++ddoubleprime;
    }
    std::sort(edged.begin(), edged.end()); // the in-degree form indexes cherries as 1..d'
    const int c = static_cast<int>(edged.size());

    d.em_out = r >= 2 ? static_cast<long long>(r) * (r - 1) / 2 : 0;
    // each edged component T_i = merge(T1, T2) is produced by exactly one EM,
    // except when T1 ⊔ T2 ⊔ rest has no edges at all (a cherry plus singletons):
    // that source is not a state, so the bottom fiber loses its one in-arrow
    d.em_in = c;
    if (c == 1 && edged[0] == 2) d.em_in -= 1;
    for (int k : edged) d.im_out += 2 * k - 4;
    d.im_in = d.im_out;

    long long within = 0, with_singletons = 0, across = 0;
    for (int k : edged) {
        if (k >= 3) within += static_cast<long long>(k) * (k - 1) / 2;
        with_singletons += k;
    }
    with_singletons *= (r - c);
    for (size_t i = 0; i < edged.size(); ++i)
        for (size_t j = i + 1; j < edged.size(); ++j)
            across += static_cast<long long>(edged[i]) * edged[j];
    d.sm_out = within + with_singletons + across;
    if (!config.sister_cut) d.sm_out -= ddoubleprime;

    // closed form for incoming SM arrows, reported but never asserted: it
    // disagrees with direct enumeration already at n = 3
    if (dprime > 0) {
        long long t1 = 6LL * dprime * (n - c);
        long long t2 = 0, t3 = 0;
        for (int i = 0; i < dprime; ++i) {
            for (size_t a = 0; a < edged.size(); ++a)
                for (size_t b = 0; b < edged.size(); ++b) {
                    if (a == b || static_cast<int>(a) == i || static_cast<int>(b) == i) continue;
                    t2 += 2LL * (2 * edged[a] - 2) * (2 * edged[b] - 2);
                }
            for (size_t j = 0; j < edged.size(); ++j) {
                if (static_cast<int>(j) == i) continue;
                long long kj = edged[j];
                long long inner = config.sister_cut ? (2 * kj + 2 + n - c) : (2 * kj + 1 + n - c);
                t3 += 2LL * (2 * kj - 2) * inner;
            }
        }
        d.sm_in_printed = t1 + t2 + t3;
    }
    return d;
}

DegreeReport verify_degrees(const MergeGraph& g) {
    DegreeReport rep;
    const size_t nv = g.vertices.size();
    struct Tally { long long em_out = 0, em_in = 0, im_out = 0, im_in = 0, sm_out = 0, sm_in = 0; };
    std::vector<Tally> t(nv);
    for (const auto& e : g.edges) {
        switch (e.kind) {
            case MergeOpKind::EM:
                t[e.src].em_out += e.mult;
                t[e.dst].em_in += e.mult;
                break;
            case MergeOpKind::IM:
                t[e.src].im_out += e.mult;
                t[e.dst].im_in += e.mult;
                break;
            default:
                t[e.src].sm_out += e.mult;
                t[e.dst].sm_in += e.mult;
        }
    }
    for (size_t i = 0; i < nv; ++i) {
        DegreeProfile d = degree_profile(g.vertices[i], g.config);
        rep.vertices_checked++;
        auto complain = [&](const char* what, long long got, long long want) {
            rep.asserted_pass = false;
            rep.failures.push_back(g.vertices[i].encoding() + " " + what + ": got " +
                                   std::to_string(got) + ", predicted " + std::to_string(want));
        };
        if (t[i].em_out != d.em_out) complain("EM out", t[i].em_out, d.em_out);
        if (t[i].em_in != d.em_in) complain("EM in", t[i].em_in, d.em_in);
        if (t[i].im_out != d.im_out) complain("IM out", t[i].im_out, d.im_out);
        if (t[i].im_in != d.im_in) complain("IM in", t[i].im_in, d.im_in);
        if (t[i].sm_out != d.sm_out) complain("SM out", t[i].sm_out, d.sm_out);
        if (t[i].sm_in != d.sm_in_printed)
            rep.sm_in_mismatches.push_back(g.vertices[i].encoding() + " SM in: enumerated " +
                                           std::to_string(t[i].sm_in) + ", printed form " +
                                           std::to_string(d.sm_in_printed));
    }
    return rep;
}

FiberComponents im_fiber_components(int n, const Partition& p,
                                    const std::vector<std::string>& labels,
                                    const GraphConfig& config) {
    if (static_cast<int>(labels.size()) != n) throw Error("label count must equal n");
    FiberComponents out;
    out.partition = p;
    for (auto& f : enumerate_forests(labels))
        if (partition_of(f) == p) out.fiber.push_back(f);
    std::unordered_map<std::string, int> idx;
    for (size_t i = 0; i < out.fiber.size(); ++i) idx[out.fiber[i].encoding()] = static_cast<int>(i);

    // undirected reachability over IM arrows
    std::vector<std::vector<int>> und(out.fiber.size());
    for (size_t i = 0; i < out.fiber.size(); ++i)
        for (auto& op : ops_from(out.fiber[i], {MergeOpKind::IM}, config)) {
            int j = idx.at(op.target.encoding());
            und[i].push_back(j);
            und[static_cast<size_t>(j)].push_back(static_cast<int>(i));
        }
    std::vector<int> comp(out.fiber.size(), -1);
    for (size_t s = 0; s < out.fiber.size(); ++s) {
        if (comp[s] != -1) continue;
        int id = static_cast<int>(out.components.size());
        out.components.push_back({});
        std::vector<int> stack{static_cast<int>(s)};
        comp[s] = id;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            out.components[static_cast<size_t>(id)].push_back(u);
            for (int v : und[static_cast<size_t>(u)])
                if (comp[static_cast<size_t>(v)] == -1) {
                    comp[static_cast<size_t>(v)] = id;
                    stack.push_back(v);
                }
        }
    }
    for (auto& members : out.components) std::sort(members.begin(), members.end());
    return out;
}

std::string graph_to_json(const MergeGraph& g) {
    nlohmann::ordered_json j;
    j["n"] = g.n;
    j["labels"] = g.labels;
    j["sister_cut"] = g.config.sister_cut;
    j["edge_mode"] = g.config.edge_mode == EdgeMode::Ops ? "ops" : "simple";
    std::vector<std::string> verts;
    for (const auto& v : g.vertices) verts.push_back(v.encoding());
    j["vertices"] = verts;
    nlohmann::ordered_json edges = nlohmann::ordered_json::array();
    for (const auto& e : g.edges) {
        nlohmann::ordered_json je;
        je["src"] = e.src;
        je["dst"] = e.dst;
        je["kind"] = kind_name(e.kind);
        je["mult"] = e.mult;
        edges.push_back(je);
    }
    j["edges"] = edges;
    return j.dump(2) + "\n";
}

std::string graph_to_dot(const MergeGraph& g) {
    auto color = [](MergeOpKind k) {
        switch (k) {
            case MergeOpKind::EM: return "black";
            case MergeOpKind::IM: return "blue";
            case MergeOpKind::SM1: return "red";
            case MergeOpKind::SM2: return "orange";
            case MergeOpKind::SM3: return "purple";
        }
        return "gray";
    };
    std::ostringstream os;
    os << "digraph merge {\n";
    for (size_t i = 0; i < g.vertices.size(); ++i)
        os << "  v" << i << " [label=\"" << g.vertices[i].encoding() << "\"];\n";
    for (const auto& e : g.edges)
        os << "  v" << e.src << " -> v" << e.dst << " [color=" << color(e.kind)
           << ",label=\"" << kind_name(e.kind) << (e.mult > 1 ? "x" + std::to_string(e.mult) : "")
           << "\"];\n";
    os << "}\n";
    return os.str();
}

MergeGraph graph_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    MergeGraph g;
    g.n = j.at("n").get<int>();
    g.labels = j.at("labels").get<std::vector<std::string>>();
    g.config.sister_cut = j.value("sister_cut", true);
    g.config.edge_mode = j.value("edge_mode", std::string("simple")) == "ops" ? EdgeMode::Ops : EdgeMode::Simple;
    for (const auto& enc : j.at("vertices")) {
        g.vertices.push_back(parse_workspace(enc.get<std::string>()));
        g.index[g.vertices.back().encoding()] = static_cast<int>(g.vertices.size()) - 1;
    }
    for (const auto& je : j.at("edges")) {
        GraphEdge e;
        e.src = je.at("src").get<int>();
        e.dst = je.at("dst").get<int>();
        e.mult = je.value("mult", 1);
        std::string k = je.at("kind").get<std::string>();
        if (k == "EM") e.kind = MergeOpKind::EM;
        else if (k == "IM") e.kind = MergeOpKind::IM;
        else if (k == "SM1") e.kind = MergeOpKind::SM1;
        else if (k == "SM2") e.kind = MergeOpKind::SM2;
        else if (k == "SM3") e.kind = MergeOpKind::SM3;
        else throw ParseError("bad edge kind " + k);
        e.ki = je.value("ki", 0);
        e.kj = je.value("kj", 0);
        g.edges.push_back(e);
    }
    return g;
}

} // namespace mergedyn
