#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mergedyn/bigint.hpp"
#include "mergedyn/errors.hpp"

namespace mergedyn {

struct LeafLabel {
    std::string symbol;
    bool traced = false;

    friend bool operator==(const LeafLabel& a, const LeafLabel& b) {
        return a.traced == b.traced && a.symbol == b.symbol;
    }
};

// Non-planar full binary tree over labeled leaves. The two children of every
// node are stored sorted by canonical encoding, so structural equality is
// exactly string equality of encodings. Immutable; subtrees are shared.
//
// Vertex ids are preorder positions in the canonical layout: the root is 0
// and the subtree rooted at id v occupies the id range [v, v + 2*leaves(v) - 1).
class Tree {
public:
    Tree() = default;

    static Tree leaf(const std::string& symbol, bool traced = false);
    static Tree leaf(const LeafLabel& label);

    bool valid() const { return static_cast<bool>(root_); }
    bool is_leaf() const;
    const LeafLabel& leaf_label() const;
    Tree first_child() const;
    Tree second_child() const;

    const std::string& encoding() const;
    int leaf_count() const;
    int vertex_count() const { return 2 * leaf_count() - 1; }
    int subtree_size(int vertex_id) const { return 2 * subtree(vertex_id).leaf_count() - 1; }

    Tree subtree(int vertex_id) const;
    bool vertex_is_leaf(int vertex_id) const { return subtree(vertex_id).is_leaf(); }

    std::vector<LeafLabel> leaves() const;
    std::vector<int> leaf_vertex_ids() const;
    std::vector<int> internal_vertex_ids() const;
    bool all_leaves_traced() const;

    // all subtrees at non-root vertices, as (vertex id, subtree); 2#L - 2 of them
    std::vector<std::pair<int, Tree>> accessible_terms() const;

    friend Tree merge_pair(const Tree& x, const Tree& y);
    friend bool operator==(const Tree& a, const Tree& b) { return a.encoding() == b.encoding(); }
    friend bool operator!=(const Tree& a, const Tree& b) { return !(a == b); }
    friend bool operator<(const Tree& a, const Tree& b) { return a.encoding() < b.encoding(); }

private:
    struct Node {
        LeafLabel leaf;
        std::shared_ptr<const Node> a, b; // both null for leaves; a->enc <= b->enc
        std::string enc;
        int nleaves = 1;
    };
    std::shared_ptr<const Node> root_;
    explicit Tree(std::shared_ptr<const Node> r) : root_(std::move(r)) {}
    static Tree make_node(const Tree& x, const Tree& y);

    friend std::optional<Tree> delete_quotient(const Tree&, const std::set<int>&);
    friend Tree contract_quotient(const Tree&, const std::map<int, int>&, const std::set<int>&);
    friend Tree insert_leaf_at(const Tree&, int, const Tree&);
};

Tree merge_pair(const Tree& x, const Tree& y);

// head function: internal vertex id -> leaf vertex id, h(v) in L(T_v),
// consistent downward along the head paths
using HeadFunction = std::map<int, int>;

HeadFunction default_head_function(const Tree& t);
bool is_valid_head_function(const Tree& t, const HeadFunction& h);
std::string head_symbol(const Tree& t, const HeadFunction& h, int vertex_id);

// admissible cut = antichain of vertex ids; throws InvalidCutError otherwise
void check_admissible_cut(const Tree& t, const std::set<int>& cut);

// remove each cut subtree, contract non-branching vertices; nullopt if nothing is left
std::optional<Tree> delete_quotient(const Tree& t, const std::set<int>& cut);

// replace each cut subtree by a traced leaf labeled through the head function
Tree contract_quotient(const Tree& t, const HeadFunction& h, const std::set<int>& cut);

Tree insert_leaf_at(const Tree& t, int vertex_id, const Tree& leaf);

class Workspace {
public:
    Workspace() = default;
    explicit Workspace(std::vector<Tree> parts);

    const std::vector<Tree>& parts() const { return parts_; }
    const std::string& encoding() const { return enc_; }
    int leaf_count() const;
    int component_count() const { return static_cast<int>(parts_.size()); }
    int edged_component_count() const; // c(F)
    bool has_edges() const { return edged_component_count() > 0; }

    Workspace with_replaced(int index, const Tree& t) const;
    Workspace without(const std::vector<int>& indices, const std::vector<Tree>& added) const;

    friend bool operator==(const Workspace& a, const Workspace& b) { return a.enc_ == b.enc_; }
    friend bool operator<(const Workspace& a, const Workspace& b) { return a.enc_ < b.enc_; }

private:
    std::vector<Tree> parts_; // sorted by encoding
    std::string enc_;
};

std::string canonical_encode(const Tree& t);
std::string canonical_encode(const Workspace& f);
Tree parse_tree(const std::string& s);
Workspace parse_workspace(const std::string& s);

struct Partition {
    std::vector<int> parts; // non-increasing, all >= 1

    Partition() = default;
    Partition(std::initializer_list<int> p);
    explicit Partition(std::vector<int> p);

    int n() const;
    int rows() const { return static_cast<int>(parts.size()); }
    bool all_ones() const;
    // (part, multiplicity) pairs, parts descending
    std::vector<std::pair<int, int>> with_multiplicity() const;
    std::string str() const; // "2+1+1"

    friend bool operator==(const Partition& a, const Partition& b) { return a.parts == b.parts; }
    friend bool operator!=(const Partition& a, const Partition& b) { return !(a == b); }
    // graded-lex order used for matrix layouts: {2,1,1} < {2,2} < {3,1} < {4}
    friend bool operator<(const Partition& a, const Partition& b) { return a.parts < b.parts; }
};

Partition partition_of(const Workspace& f);
std::vector<Partition> partitions_without_all_ones(int n); // P'(n), sorted
std::vector<Partition> all_partitions(int n);              // includes 1^n

double shannon_of_partition(const Partition& p, int n);
double shannon_of_partition(const Partition& p);

struct Counting {
    BigUint mu;        // multinomial coefficient
    BigUint upsilon;   // generalized multinomial
    BigUint gamma_num; // Gamma as an exact fraction
    BigUint gamma_den;
    BigUint lambda;    // forests realizing the partition
};
Counting counting(int n, const Partition& p);
BigUint forest_count(int n); // Lambda_n over P'(n)

std::vector<std::string> default_labels(int n);
std::vector<Tree> enumerate_trees(const std::vector<std::string>& labels);
// all workspaces with a non-empty edge set over the given labels
std::vector<Workspace> enumerate_forests(const std::vector<std::string>& labels);

// cut away every traced leaf of every component; empty components are dropped
Workspace project_dc(const Workspace& f);

} // namespace mergedyn
