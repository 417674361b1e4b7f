#include "mergedyn/forest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>

namespace mergedyn {

namespace {

void check_symbol(const std::string& s) {
    if (s.empty()) throw ParseError("empty leaf symbol");
    for (char c : s)
        if (c == '(' || c == ')' || c == ',' || c == '|' || c == '~')
            throw ParseError("reserved character in leaf symbol: " + s);
}

void collect_untraced(const Tree& t, std::vector<std::string>& out) {
    for (const auto& l : t.leaves())
        if (!l.traced) out.push_back(l.symbol);
}

void check_no_duplicate_untraced(std::vector<std::string>& symbols, const char* what) {
    std::sort(symbols.begin(), symbols.end());
    auto it = std::adjacent_find(symbols.begin(), symbols.end());
    if (it != symbols.end())
        throw DuplicateLabelError(std::string(what) + ": duplicate label '" + *it + "'");
}

} // namespace

Tree Tree::leaf(const std::string& symbol, bool traced) {
    check_symbol(symbol);
    auto n = std::make_shared<Node>();
    n->leaf = LeafLabel{symbol, traced};
    n->enc = traced ? "~" + symbol : symbol;
    n->nleaves = 1;
    return Tree(std::move(n));
}

Tree Tree::leaf(const LeafLabel& label) { return leaf(label.symbol, label.traced); }

Tree Tree::make_node(const Tree& x, const Tree& y) {
    const Tree& a = x.encoding() <= y.encoding() ? x : y;
    const Tree& b = x.encoding() <= y.encoding() ? y : x;
    auto n = std::make_shared<Node>();
    n->a = a.root_;
    n->b = b.root_;
    n->enc = "(" + a.encoding() + "," + b.encoding() + ")";
    n->nleaves = a.leaf_count() + b.leaf_count();
    return Tree(std::move(n));
}

Tree merge_pair(const Tree& x, const Tree& y) {
    if (!x.valid() || !y.valid()) throw Error("merge_pair on empty tree");
    std::vector<std::string> symbols;
    collect_untraced(x, symbols);
    collect_untraced(y, symbols);
    check_no_duplicate_untraced(symbols, "merge_pair");
    return Tree::make_node(x, y);
}

bool Tree::is_leaf() const { return !root_->a; }

const LeafLabel& Tree::leaf_label() const {
    if (!is_leaf()) throw Error("leaf_label on internal node");
    return root_->leaf;
}

Tree Tree::first_child() const { return Tree(root_->a); }
Tree Tree::second_child() const { return Tree(root_->b); }

const std::string& Tree::encoding() const { return root_->enc; }
int Tree::leaf_count() const { return root_->nleaves; }

Tree Tree::subtree(int vertex_id) const {
    const Node* cur = root_.get();
    std::shared_ptr<const Node> hold = root_;
    int base = 0;
    while (true) {
        if (vertex_id == base) return Tree(hold);
        if (!cur->a) throw Error("vertex id out of range");
        int size_a = 2 * cur->a->nleaves - 1;
        if (vertex_id <= base + size_a) {
            hold = cur->a;
        } else {
            base += size_a;
            hold = cur->b;
        }
        base += 1;
        cur = hold.get();
        if (vertex_id < base || vertex_id >= base + 2 * cur->nleaves - 1)
            throw Error("vertex id out of range");
    }
}

std::vector<LeafLabel> Tree::leaves() const {
    std::vector<LeafLabel> out;
    std::function<void(const Node*)> rec = [&](const Node* n) {
        if (!n->a) { out.push_back(n->leaf); return; }
        rec(n->a.get());
        rec(n->b.get());
    };
    rec(root_.get());
    return out;
}

std::vector<int> Tree::leaf_vertex_ids() const {
    std::vector<int> out;
    std::function<void(const Node*, int)> rec = [&](const Node* n, int base) {
        if (!n->a) { out.push_back(base); return; }
        rec(n->a.get(), base + 1);
        rec(n->b.get(), base + 1 + 2 * n->a->nleaves - 1);
    };
    rec(root_.get(), 0);
    return out;
}

std::vector<int> Tree::internal_vertex_ids() const {
    std::vector<int> out;
    std::function<void(const Node*, int)> rec = [&](const Node* n, int base) {
        if (!n->a) return;
        out.push_back(base);
        rec(n->a.get(), base + 1);
        rec(n->b.get(), base + 1 + 2 * n->a->nleaves - 1);
    };
    rec(root_.get(), 0);
    return out;
}

bool Tree::all_leaves_traced() const {
    for (const auto& l : leaves())
        if (!l.traced) return false;
    return true;
}

std::vector<std::pair<int, Tree>> Tree::accessible_terms() const {
    std::vector<std::pair<int, Tree>> out;
    std::function<void(const std::shared_ptr<const Node>&, int, bool)> rec =
        [&](const std::shared_ptr<const Node>& n, int base, bool root) {
            if (!root) out.emplace_back(base, Tree(n));
            if (!n->a) return;
            rec(n->a, base + 1, false);
            rec(n->b, base + 1 + 2 * n->a->nleaves - 1, false);
        };
    rec(root_, 0, true);
    return out;
}

void check_admissible_cut(const Tree& t, const std::set<int>& cut) {
    int total = t.vertex_count();
    int prev_end = -1;
    for (int v : cut) {
        if (v < 0 || v >= total) throw InvalidCutError("cut vertex out of range");
        if (v < prev_end) throw InvalidCutError("cut vertices are nested");
        prev_end = v + t.subtree_size(v);
    }
}

std::optional<Tree> delete_quotient(const Tree& t, const std::set<int>& cut) {
    check_admissible_cut(t, cut);
    std::function<std::optional<Tree>(const std::shared_ptr<const Tree::Node>&, int)> rec =
        [&](const std::shared_ptr<const Tree::Node>& n, int base) -> std::optional<Tree> {
        if (cut.count(base)) return std::nullopt;
        if (!n->a) return Tree(n);
        std::optional<Tree> qa = rec(n->a, base + 1);
        std::optional<Tree> qb = rec(n->b, base + 1 + 2 * n->a->nleaves - 1);
        if (qa && qb) return Tree::make_node(*qa, *qb);
        if (qa) return qa;
        return qb;
    };
    return rec(t.root_, 0);
}

Tree contract_quotient(const Tree& t, const HeadFunction& h, const std::set<int>& cut) {
    check_admissible_cut(t, cut);
    if (!is_valid_head_function(t, h))
        throw InvalidHeadError("head function invalid for tree " + t.encoding());
    std::function<Tree(const std::shared_ptr<const Tree::Node>&, int)> rec =
        [&](const std::shared_ptr<const Tree::Node>& n, int base) -> Tree {
        if (cut.count(base)) {
            if (!n->a) return Tree::leaf(n->leaf.symbol, true);
            return Tree::leaf(head_symbol(t, h, base), true);
        }
        if (!n->a) return Tree(n);
        Tree qa = rec(n->a, base + 1);
        Tree qb = rec(n->b, base + 1 + 2 * n->a->nleaves - 1);
        return Tree::make_node(qa, qb);
    };
    return rec(t.root_, 0);
}

Tree insert_leaf_at(const Tree& t, int vertex_id, const Tree& leaf) {
    std::function<Tree(const std::shared_ptr<const Tree::Node>&, int)> rec =
        [&](const std::shared_ptr<const Tree::Node>& n, int base) -> Tree {
        if (base == vertex_id) return Tree::make_node(Tree(n), leaf);
        if (!n->a) throw Error("insert position not found");
        int size_a = 2 * n->a->nleaves - 1;
        if (vertex_id <= base + size_a)
            return Tree::make_node(rec(n->a, base + 1), Tree(n->b));
        return Tree::make_node(Tree(n->a), rec(n->b, base + 1 + size_a));
    };
    return rec(t.root_, 0);
}

HeadFunction default_head_function(const Tree& t) {
    HeadFunction h;
    // canonical first child is never the larger one, so the head of every
    // internal vertex is the first leaf of its subtree in canonical preorder
    std::function<int(const Tree&, int)> rec = [&](const Tree& sub, int base) -> int {
        if (sub.is_leaf()) return base;
        int head = rec(sub.first_child(), base + 1);
        rec(sub.second_child(), base + 1 + 2 * sub.first_child().leaf_count() - 1);
        h[base] = head;
        return head;
    };
    rec(t, 0);
    return h;
}

bool is_valid_head_function(const Tree& t, const HeadFunction& h) {
    auto internals = t.internal_vertex_ids();
    for (int v : internals) {
        auto it = h.find(v);
        if (it == h.end()) return false;
        int leaf_id = it->second;
        int size_v = t.subtree_size(v);
        if (leaf_id < v || leaf_id >= v + size_v) return false; // h(v) in L(T_v)
        if (!t.vertex_is_leaf(leaf_id)) return false;
    }
    for (int v : internals) {
        int hv = h.at(v);
        int size_v = t.subtree_size(v);
        for (int w : internals) {
            if (w <= v || w >= v + size_v) continue; // need T_w inside T_v
            int size_w = t.subtree_size(w);
            if (hv >= w && hv < w + size_w && h.at(w) != hv) return false;
        }
    }
    return true;
}

std::string head_symbol(const Tree& t, const HeadFunction& h, int vertex_id) {
    Tree sub = t.subtree(vertex_id);
    if (sub.is_leaf()) return sub.leaf_label().symbol;
    auto it = h.find(vertex_id);
    if (it == h.end()) throw InvalidHeadError("no head assigned at vertex");
    return t.subtree(it->second).leaf_label().symbol;
}

Workspace::Workspace(std::vector<Tree> parts) : parts_(std::move(parts)) {
    for (const auto& p : parts_)
        if (!p.valid()) throw Error("workspace with empty component");
    std::sort(parts_.begin(), parts_.end());
    std::vector<std::string> symbols;
    for (const auto& p : parts_) collect_untraced(p, symbols);
    check_no_duplicate_untraced(symbols, "workspace");
    for (size_t i = 0; i < parts_.size(); ++i) {
        if (i) enc_ += '|';
        enc_ += parts_[i].encoding();
    }
}

int Workspace::leaf_count() const {
    int n = 0;
    for (const auto& p : parts_) n += p.leaf_count();
    return n;
}

int Workspace::edged_component_count() const {
    int c = 0;
    for (const auto& p : parts_)
        if (p.leaf_count() >= 2) ++c;
    return c;
}

Workspace Workspace::with_replaced(int index, const Tree& t) const {
    std::vector<Tree> parts = parts_;
    parts[static_cast<size_t>(index)] = t;
    return Workspace(std::move(parts));
}

Workspace Workspace::without(const std::vector<int>& indices, const std::vector<Tree>& added) const {
    std::vector<bool> drop(parts_.size(), false);
    for (int i : indices) drop[static_cast<size_t>(i)] = true;
    std::vector<Tree> parts;
    for (size_t i = 0; i < parts_.size(); ++i)
        if (!drop[i]) parts.push_back(parts_[i]);
    for (const auto& t : added) parts.push_back(t);
    return Workspace(std::move(parts));
}

std::string canonical_encode(const Tree& t) { return t.encoding(); }
std::string canonical_encode(const Workspace& f) { return f.encoding(); }

namespace {

Tree parse_tree_at(const std::string& s, size_t& pos) {
    if (pos >= s.size()) throw ParseError("unexpected end of input");
    if (s[pos] == '(') {
        ++pos;
        Tree a = parse_tree_at(s, pos);
        if (pos >= s.size() || s[pos] != ',') throw ParseError("expected ','");
        ++pos;
        Tree b = parse_tree_at(s, pos);
        if (pos >= s.size() || s[pos] != ')') throw ParseError("expected ')'");
        ++pos;
        return merge_pair(a, b);
    }
    bool traced = false;
    if (s[pos] == '~') { traced = true; ++pos; }
    size_t start = pos;
    while (pos < s.size() && s[pos] != '(' && s[pos] != ')' && s[pos] != ',' &&
           s[pos] != '|' && s[pos] != '~')
        ++pos;
    if (pos == start) throw ParseError("expected leaf symbol at position " + std::to_string(start));
    return Tree::leaf(s.substr(start, pos - start), traced);
}

} // namespace

Tree parse_tree(const std::string& s) {
    size_t pos = 0;
    Tree t = parse_tree_at(s, pos);
    if (pos != s.size()) throw ParseError("trailing characters in tree encoding");
    return t;
}

Workspace parse_workspace(const std::string& s) {
    std::vector<Tree> parts;
    size_t pos = 0;
    while (true) {
        parts.push_back(parse_tree_at(s, pos));
        if (pos == s.size()) break;
        if (s[pos] != '|') throw ParseError("expected '|'");
        ++pos;
    }
    return Workspace(std::move(parts));
}

Partition::Partition(std::initializer_list<int> p) : Partition(std::vector<int>(p)) {}

Partition::Partition(std::vector<int> p) : parts(std::move(p)) {
    std::sort(parts.begin(), parts.end(), std::greater<int>());
    for (int k : parts)
        if (k < 1) throw Error("partition parts must be positive");
}

int Partition::n() const { return std::accumulate(parts.begin(), parts.end(), 0); }

bool Partition::all_ones() const {
    return !parts.empty() && parts.front() == 1;
}

std::vector<std::pair<int, int>> Partition::with_multiplicity() const {
    std::vector<std::pair<int, int>> out;
    for (int k : parts) {
        if (!out.empty() && out.back().first == k)
            out.back().second++;
        else
            out.emplace_back(k, 1);
    }
    return out;
}

std::string Partition::str() const {
    std::string s;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) s += '+';
        s += std::to_string(parts[i]);
    }
    return s;
}

Partition partition_of(const Workspace& f) {
    std::vector<int> ks;
    for (const auto& p : f.parts()) ks.push_back(p.leaf_count());
    return Partition(std::move(ks));
}

std::vector<Partition> all_partitions(int n) {
    std::vector<Partition> out;
    std::vector<int> cur;
    std::function<void(int, int)> rec = [&](int rest, int maxpart) {
        if (rest == 0) { out.push_back(Partition(cur)); return; }
        for (int k = std::min(rest, maxpart); k >= 1; --k) {
            cur.push_back(k);
            rec(rest - k, k);
            cur.pop_back();
        }
    };
    rec(n, n);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Partition> partitions_without_all_ones(int n) {
    std::vector<Partition> out;
    for (auto& p : all_partitions(n))
        if (!p.all_ones()) out.push_back(p);
    return out;
}

double shannon_of_partition(const Partition& p, int n) {
    double sh = 0;
    for (int k : p.parts) {
        double q = static_cast<double>(k) / n;
        sh -= q * std::log(q);
    }
    return sh;
}

double shannon_of_partition(const Partition& p) { return shannon_of_partition(p, p.n()); }

Counting counting(int n, const Partition& p) {
    if (p.n() != n) throw Error("partition does not sum to n");
    Counting c;
    c.mu = big_factorial(static_cast<unsigned>(n));
    for (int k : p.parts)
        for (int i = 2; i <= k; ++i) c.mu.div_exact(static_cast<unsigned long long>(i));
    c.upsilon = c.mu;
    BigUint a_fact(1);
    BigUint dd(1);
    for (auto [k, a] : p.with_multiplicity()) {
        for (int i = 2; i <= a; ++i) {
            c.upsilon.div_exact(static_cast<unsigned long long>(i));
            a_fact.mul(static_cast<unsigned long long>(i));
        }
        BigUint f = odd_double_factorial(static_cast<unsigned>(k));
        for (int i = 0; i < a; ++i) dd = dd * f;
    }
    c.gamma_num = dd;
    c.gamma_den = a_fact;
    c.lambda = c.upsilon * dd;
    return c;
}

BigUint forest_count(int n) {
    BigUint total(0);
    for (const auto& p : partitions_without_all_ones(n))
        total = total + counting(n, p).lambda;
    return total;
}

std::vector<std::string> default_labels(int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) {
        if (i < 26)
            out.push_back(std::string(1, static_cast<char>('a' + i)));
        else
            out.push_back("x" + std::to_string(i));
    }
    return out;
}

std::vector<Tree> enumerate_trees(const std::vector<std::string>& labels) {
    if (labels.empty()) throw Error("enumerate_trees needs at least one label");
    {
        std::vector<std::string> copy = labels;
        check_no_duplicate_untraced(copy, "enumerate_trees");
    }
    std::vector<Tree> trees{Tree::leaf(labels[0])};
    for (size_t i = 1; i < labels.size(); ++i) {
        Tree nl = Tree::leaf(labels[i]);
        std::vector<Tree> next;
        next.reserve(trees.size() * (2 * i - 1));
        for (const auto& t : trees)
            for (int v = 0; v < t.vertex_count(); ++v)
                next.push_back(insert_leaf_at(t, v, nl));
        trees = std::move(next);
    }
    return trees;
}

std::vector<Workspace> enumerate_forests(const std::vector<std::string>& labels) {
    size_t n = labels.size();
    if (n < 2) throw Error("enumerate_forests needs at least two labels");
    // set partitions via restricted growth strings
    std::vector<Workspace> out;
    std::vector<int> assign(n, 0);
    std::function<void(size_t, int)> rec = [&](size_t i, int nblocks) {
        if (i == n) {
            if (nblocks == static_cast<int>(n)) return; // all singletons carry no edges
            std::vector<std::vector<std::string>> blocks(nblocks);
            for (size_t j = 0; j < n; ++j) blocks[assign[j]].push_back(labels[j]);
            std::vector<std::vector<Tree>> choices;
            for (auto& blk : blocks) choices.push_back(enumerate_trees(blk));
            std::vector<size_t> idx(choices.size(), 0);
            while (true) {
                std::vector<Tree> parts;
                for (size_t b = 0; b < choices.size(); ++b) parts.push_back(choices[b][idx[b]]);
                out.push_back(Workspace(std::move(parts)));
                size_t b = 0;
                while (b < choices.size() && ++idx[b] == choices[b].size()) idx[b++] = 0;
                if (b == choices.size()) break;
            }
            return;
        }
        for (int blk = 0; blk <= nblocks; ++blk) {
            assign[i] = blk;
            rec(i + 1, std::max(nblocks, blk + 1));
        }
    };
    rec(1, 1);
    std::sort(out.begin(), out.end());
    return out;
}

Workspace project_dc(const Workspace& f) {
    std::vector<Tree> parts;
    for (const auto& t : f.parts()) {
        std::set<int> cut;
        for (int v : t.leaf_vertex_ids())
            if (t.subtree(v).leaf_label().traced) cut.insert(v);
        auto q = delete_quotient(t, cut);
        if (q) parts.push_back(*q);
    }
    return Workspace(std::move(parts));
}

} // namespace mergedyn
