#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "doctest.h"
#include "mergedyn/forest.hpp"

using namespace mergedyn;

namespace {

Tree L(const std::string& s) { return Tree::leaf(s); }

long long dfact(int m) { // m!! for odd m, with (-1)!! = 1
    long long r = 1;
    for (int k = m; k >= 2; k -= 2) r *= k;
    return r;
}

} // namespace

TEST_CASE("canonical encoding is order-insensitive") {
    Tree ab = merge_pair(L("a"), L("b"));
    Tree ba = merge_pair(L("b"), L("a"));
    CHECK(ab.encoding() == "(a,b)");
    CHECK(ba.encoding() == "(a,b)");
    CHECK(ab == ba);
    CHECK(L("a").encoding() == "a");
    Workspace w({merge_pair(L("c"), L("d")), merge_pair(L("a"), L("b"))});
    CHECK(w.encoding() == "(a,b)|(c,d)");
}

TEST_CASE("merge_pair rejects overlapping labels and nests") {
    Tree ab = merge_pair(L("a"), L("b"));
    CHECK(merge_pair(ab, L("c")).encoding() == "((a,b),c)");
    CHECK_THROWS_AS(merge_pair(ab, L("a")), DuplicateLabelError);
    // traced copy of a label may coexist with the original
    CHECK_NOTHROW(merge_pair(ab, Tree::leaf("a", true)));
}

TEST_CASE("round-trip through the string grammar") {
    for (const auto& enc : {"a", "(a,b)", "((a,b),c)", "(a,b)|c|d", "((b,~c),a)|c"}) {
        Workspace w = parse_workspace(enc);
        CHECK(w.encoding() == enc);
    }
    CHECK_THROWS_AS(parse_workspace("(a,b"), ParseError);
    CHECK_THROWS_AS(parse_workspace("(a,a)"), DuplicateLabelError);
}

TEST_CASE("accessible terms are the non-root subtrees") {
    CHECK(L("a").accessible_terms().empty());
    Tree ab = merge_pair(L("a"), L("b"));
    auto terms = ab.accessible_terms();
    REQUIRE(terms.size() == 2);
    CHECK(terms[0].second.encoding() == "a");
    CHECK(terms[1].second.encoding() == "b");
    Tree four = merge_pair(merge_pair(L("a"), L("b")), merge_pair(L("c"), L("d")));
    CHECK(four.accessible_terms().size() == 6); // 2*4 - 2
}

TEST_CASE("delete quotient contracts to a full tree") {
    Tree t = parse_tree("(a,(b,(c,d)))");
    // cut the cherry (c,d)
    int cherry = -1;
    for (const auto& [v, sub] : t.accessible_terms())
        if (sub.encoding() == "(c,d)") cherry = v;
    REQUIRE(cherry >= 0);
    CHECK(delete_quotient(t, {cherry})->encoding() == "(a,b)");

    // cut both sister leaves instead
    std::set<int> leaves_cd;
    for (int v : t.leaf_vertex_ids()) {
        auto s = t.subtree(v).leaf_label().symbol;
        if (s == "c" || s == "d") leaves_cd.insert(v);
    }
    CHECK(delete_quotient(t, leaves_cd)->encoding() == "(a,b)");

    Tree ab = parse_tree("(a,b)");
    CHECK(delete_quotient(ab, {1})->encoding() == "b");
    CHECK(!delete_quotient(ab, {0}).has_value());

    // nested cut vertices are rejected
    CHECK_THROWS_AS(delete_quotient(t, {cherry, cherry + 1}), InvalidCutError);
}

TEST_CASE("delete quotient leaf counts add up") {
    Tree t = parse_tree("((a,b),((c,d),(e,f)))");
    auto terms = t.accessible_terms();
    for (const auto& [v1, s1] : terms)
        for (const auto& [v2, s2] : terms) {
            if (v2 <= v1 + t.subtree_size(v1) - 1 && v2 >= v1) continue;
            if (v1 <= v2 + t.subtree_size(v2) - 1 && v1 >= v2) continue;
            std::set<int> cut{v1, v2};
            auto q = delete_quotient(t, cut);
            int cut_leaves = s1.leaf_count() + s2.leaf_count();
            int q_leaves = q ? q->leaf_count() : 0;
            CHECK(t.leaf_count() == cut_leaves + q_leaves);
        }
}

TEST_CASE("contract quotient replaces cuts by traced heads") {
    Tree t1 = parse_tree("(a,(b,c))");
    HeadFunction h1 = default_head_function(t1);
    int leaf_c = -1;
    for (int v : t1.leaf_vertex_ids())
        if (t1.subtree(v).leaf_label().symbol == "c") leaf_c = v;
    CHECK(contract_quotient(t1, h1, {leaf_c}) == parse_tree("(a,(b,~c))"));

    Tree t2 = parse_tree("(a,(b,(c,d)))");
    HeadFunction h2 = default_head_function(t2);
    int cherry = -1;
    for (const auto& [v, sub] : t2.accessible_terms())
        if (sub.encoding() == "(c,d)") cherry = v;
    CHECK(head_symbol(t2, h2, cherry) == "c");
    CHECK(contract_quotient(t2, h2, {cherry}) == parse_tree("(a,(b,~c))"));

    CHECK(contract_quotient(t2, h2, {}) == t2);

    // vertex count of the quotient equals leaves kept plus one trace per cut
    CHECK(contract_quotient(t2, h2, {cherry}).leaf_count() ==
          t2.leaf_count() - 2 + 1);

    HeadFunction bad = h2;
    bad.erase(bad.begin());
    CHECK_THROWS_AS(contract_quotient(t2, bad, {cherry}), InvalidHeadError);
}

TEST_CASE("project_dc removes traced leaves") {
    Workspace w = parse_workspace("(a,(b,~c))|c");
    CHECK(project_dc(w).encoding() == "(a,b)|c");
    Workspace plain = parse_workspace("(a,b)|(c,d)");
    CHECK(project_dc(plain) == plain);
    Workspace gone = parse_workspace("(~a,~b)|c");
    CHECK(project_dc(gone).encoding() == "c");
}

TEST_CASE("default head function picks the canonically smaller child") {
    Tree ab = parse_tree("(a,b)");
    HeadFunction h = default_head_function(ab);
    CHECK(head_symbol(ab, h, 0) == "a");

    Tree t = parse_tree("((a,b),c)");
    HeadFunction ht = default_head_function(t);
    CHECK(head_symbol(t, ht, 0) == "a"); // "(a,b)" < "c"

    // validity on every tree with up to 5 leaves
    for (int n = 2; n <= 5; ++n)
        for (const auto& tree : enumerate_trees(default_labels(n)))
            CHECK(is_valid_head_function(tree, default_head_function(tree)));
}

TEST_CASE("tree enumeration matches the double factorial") {
    CHECK(enumerate_trees({"a", "b"}).size() == 1);
    CHECK(enumerate_trees({"a", "b", "c"}).size() == 3);
    CHECK(enumerate_trees({"a", "b", "c", "d"}).size() == 15);
    for (int n = 2; n <= 7; ++n) {
        auto trees = enumerate_trees(default_labels(n));
        CHECK(static_cast<long long>(trees.size()) == dfact(2 * n - 3));
        std::set<std::string> distinct;
        for (const auto& t : trees) distinct.insert(t.encoding());
        CHECK(distinct.size() == trees.size());
    }
}

TEST_CASE("forest enumeration and fiber counts") {
    CHECK(enumerate_forests(default_labels(2)).size() == 1);
    CHECK(enumerate_forests(default_labels(4)).size() == 36);
    CHECK(enumerate_forests(default_labels(6)).size() == 2430);

    for (int n = 2; n <= 7; ++n) {
        auto forests = enumerate_forests(default_labels(n));
        CHECK(forest_count(n).to_u64() == forests.size());
        std::map<std::string, long long> by_fiber;
        for (const auto& f : forests) by_fiber[partition_of(f).str()]++;
        for (const auto& p : partitions_without_all_ones(n)) {
            Counting c = counting(n, p);
            CHECK(by_fiber[p.str()] == static_cast<long long>(c.lambda.to_u64()));
        }
    }
}

TEST_CASE("canonical form idempotence over enumerated objects") {
    for (int n = 2; n <= 6; ++n)
        for (const auto& f : enumerate_forests(default_labels(n))) {
            std::string enc = f.encoding();
            CHECK(parse_workspace(enc).encoding() == enc);
        }
}

TEST_CASE("counting formulas") {
    Counting c1 = counting(4, Partition{3, 1});
    CHECK(c1.lambda.to_u64() == 12);
    Counting c2 = counting(4, Partition{2, 2});
    CHECK(c2.lambda.to_u64() == 3);
    Counting c3 = counting(9, Partition{4, 2, 2, 1});
    CHECK(c3.mu.to_u64() == 3780);
    // Lambda = mu * Gamma as exact rationals
    for (int n = 2; n <= 9; ++n)
        for (const auto& p : partitions_without_all_ones(n)) {
            Counting c = counting(n, p);
            CHECK(c.lambda * c.gamma_den == c.mu * c.gamma_num);
        }
}

TEST_CASE("partition basics") {
    CHECK(partition_of(parse_workspace("(a,b)|c|d")) == Partition{2, 1, 1});
    CHECK(partition_of(parse_workspace("(a,(b,(c,d)))")) == Partition{4});
    CHECK(partition_of(parse_workspace("(a,b)|(c,d)")) == Partition{2, 2});

    auto p4 = partitions_without_all_ones(4);
    REQUIRE(p4.size() == 4);
    CHECK(p4[0].str() == "2+1+1");
    CHECK(p4[1].str() == "2+2");
    CHECK(p4[2].str() == "3+1");
    CHECK(p4[3].str() == "4");
}

TEST_CASE("shannon entropy of partitions") {
    CHECK(shannon_of_partition(Partition{5}) == 0.0);
    CHECK(shannon_of_partition(Partition{2, 2}) == doctest::Approx(std::log(2)).epsilon(1e-12));
    CHECK(shannon_of_partition(Partition{3, 1}) == doctest::Approx(0.5623351446188083).epsilon(1e-12));
}

TEST_CASE("entropy approximation of the multinomial (diagnostic)") {
    // |ln(mu)/n - Sh| should decay like log(n)/n for the scaled shapes
    double fitted_c = 0;
    for (int n : {8, 16, 32, 64}) {
        Partition p{n / 2, n / 4, n / 4};
        double logmu = std::lgamma(n + 1.0);
        for (int k : p.parts) logmu -= std::lgamma(k + 1.0);
        double err = std::abs(logmu / n - shannon_of_partition(p, n));
        fitted_c = std::max(fitted_c, err * n / std::log(n));
    }
    MESSAGE("multinomial entropy bound: fitted C = ", fitted_c);
    CHECK(std::isfinite(fitted_c));
}
