#include "macl/corpus.hpp"
#include "macl/errors.hpp"
#include "macl/views.hpp"

#include "temp_dir.hpp"

#include <doctest.h>

#include <cmath>
#include <map>
#include <string>
#include <vector>

using namespace macl;

namespace {

TextVector tv(std::vector<double> values) {
    TextVector v;
    double sq = 0.0;
    for (double x : values) sq += x * x;
    v.values = std::move(values);
    v.norm = std::sqrt(sq);
    return v;
}

Corpus corpus_with_files(const std::vector<std::string>& paths) {
    Corpus c;
    c.catalog = evolve_catalog({paths});
    return c;
}

void add_report(Corpus& c, const std::string& id, const std::vector<std::string>& fixed) {
    BugReport r;
    r.id = id;
    r.commit_ts = static_cast<std::int64_t>(c.reports.size());
    r.fixed_paths = fixed;
    c.reports.push_back(r);
}

std::vector<int> all_indices(const Corpus& c) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < c.reports.size(); ++i) idx.push_back(static_cast<int>(i));
    return idx;
}

} // namespace

TEST_CASE("co-citation: the five-report pair fixture yields its exact edge set") {
    Corpus c = corpus_with_files({"f1", "f2", "f3", "f4", "f5", "f6"});
    add_report(c, "r1", {"f1", "f2"});
    add_report(c, "r2", {"f1", "f3"});
    add_report(c, "r3", {"f2", "f4"});
    add_report(c, "r4", {"f1", "f5"});
    add_report(c, "r5", {"f1", "f6"});

    const View cc = build_code_code(c, all_indices(c));
    const std::map<std::pair<int, int>, double> expect = {
        {{0, 1}, 1.0}, {{0, 2}, 1.0}, {{1, 3}, 1.0}, {{0, 4}, 1.0}, {{0, 5}, 1.0}};
    CHECK(cc.edges == expect);
}

TEST_CASE("co-citation: all unordered pairs of one commit, weight accumulates") {
    Corpus c = corpus_with_files({"a", "b", "c"});
    add_report(c, "r1", {"a", "b", "c"});
    const View once = build_code_code(c, all_indices(c));
    const std::map<std::pair<int, int>, double> expect = {
        {{0, 1}, 1.0}, {{0, 2}, 1.0}, {{1, 2}, 1.0}};
    CHECK(once.edges == expect);

    add_report(c, "r2", {"a", "b"});
    const View twice = build_code_code(c, all_indices(c));
    CHECK(twice.weight(0, 1) == 2.0);
    CHECK(twice.weight(1, 0) == 2.0); // symmetric lookup
    CHECK(twice.weight(0, 2) == 1.0);
}

TEST_CASE("co-citation: large commits and single-file commits contribute nothing") {
    std::vector<std::string> paths;
    for (int i = 0; i < 12; ++i) paths.push_back("f" + std::to_string(i));
    Corpus c = corpus_with_files(paths);

    const std::vector<std::string> eleven(paths.begin(), paths.begin() + 11);
    add_report(c, "big", eleven);
    add_report(c, "tiny", {"f0"});
    CHECK(build_code_code(c, all_indices(c)).edge_count() == 0);

    const std::vector<std::string> ten(paths.begin(), paths.begin() + 10);
    add_report(c, "boundary", ten);
    CHECK(build_code_code(c, all_indices(c)).edge_count() == 45); // C(10,2)
}

TEST_CASE("co-citation: duplicate paths inside one report are deduplicated") {
    Corpus c = corpus_with_files({"a", "b"});
    add_report(c, "r", {"a", "a", "b"});
    const View cc = build_code_code(c, all_indices(c));
    const std::map<std::pair<int, int>, double> expect = {{{0, 1}, 1.0}};
    CHECK(cc.edges == expect);
}

TEST_CASE("co-citation: only training reports contribute") {
    Corpus c = corpus_with_files({"a", "b", "c"});
    add_report(c, "train0", {"a", "b"});
    add_report(c, "held_out", {"b", "c"});
    const View cc = build_code_code(c, {0}); // index 1 excluded
    const std::map<std::pair<int, int>, double> expect = {{{0, 1}, 1.0}};
    CHECK(cc.edges == expect);
}

TEST_CASE("co-citation: matches the pair-enumeration oracle on random corpora") {
    Rng rng(77);
    for (int trial = 0; trial < 25; ++trial) {
        std::vector<std::string> paths;
        for (int i = 0; i < 6; ++i) paths.push_back("f" + std::to_string(i));
        Corpus c = corpus_with_files(paths);
        const int n_reports = 1 + static_cast<int>(rng.index(8));
        for (int r = 0; r < n_reports; ++r) {
            std::set<std::string> fixed;
            const int k = 1 + static_cast<int>(rng.index(6));
            while (static_cast<int>(fixed.size()) < k)
                fixed.insert(paths[rng.index(paths.size())]);
            add_report(c, "r" + std::to_string(r),
                       std::vector<std::string>(fixed.begin(), fixed.end()));
        }

        // Oracle: enumerate (report, unordered pair) incidences directly.
        std::map<std::pair<int, int>, double> oracle;
        for (const BugReport& r : c.reports) {
            std::set<int> ids;
            for (const std::string& p : r.fixed_paths) ids.insert(c.catalog.entries.at(p));
            if (ids.size() < 2 || ids.size() > 10) continue;
            const std::vector<int> v(ids.begin(), ids.end());
            for (std::size_t i = 0; i < v.size(); ++i)
                for (std::size_t j = i + 1; j < v.size(); ++j) oracle[{v[i], v[j]}] += 1.0;
        }
        CHECK(build_code_code(c, all_indices(c)).edges == oracle);
    }
}

TEST_CASE("interaction view: one edge per fix link, cosine weight, clamped floor") {
    Corpus c = corpus_with_files({"fa", "fb"});
    add_report(c, "r0", {"fa", "fb"});
    add_report(c, "r1", {"fb"});

    // r0's text vector equals fa's (cosine 1) and is orthogonal to fb's.
    const std::vector<TextVector> report_vecs = {tv({1, 0}), tv({0.6, 0.8})};
    const std::vector<TextVector> file_vecs = {tv({1, 0}), tv({0, 1})};

    const View rc = build_report_code(c, all_indices(c), report_vecs, file_vecs);
    REQUIRE(rc.edge_count() == 3);
    CHECK(rc.edges.at({0, 0}) == doctest::Approx(1.0).epsilon(1e-12)); // identical text
    CHECK(rc.edges.at({0, 1}) == 1e-6);                                // orthogonal -> clamp
    CHECK(rc.edges.at({1, 1}) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(rc.n_reports == 2);
    CHECK(rc.n_codes == 2);
}

TEST_CASE("similarity view: floor and per-node top-k govern admission") {
    // cos(A,B)=0.8, cos(B,C)=0.6, cos(A,C)=0
    const std::vector<TextVector> vecs = {tv({1, 0}), tv({0.8, 0.6}), tv({0, 1})};

    SimilarityPolicy relaxed{};
    relaxed.top_k = 20;
    relaxed.floor = 0.1;
    const View rr = build_report_report(vecs, relaxed);
    REQUIRE(rr.edge_count() == 2);
    CHECK(rr.weight(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(rr.weight(1, 2) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(rr.weight(0, 2) == 0.0); // below floor -> absent

    SimilarityPolicy strict{};
    strict.top_k = 20;
    strict.floor = 0.65;
    CHECK(build_report_report(vecs, strict).edge_count() == 1);

    CHECK_THROWS_AS(build_report_report({tv({1.0})}, relaxed), ContractViolation);
}

TEST_CASE("similarity view: identical reports link at weight one; union of admissions") {
    const std::vector<TextVector> twins = {tv({1, 0}), tv({1, 0})};
    CHECK(build_report_report(twins, SimilarityPolicy{}).weight(0, 1) ==
          doctest::Approx(1.0).epsilon(1e-12));

    // cos(0,1)=0.8, cos(0,2)=0.6, cos(1,2)=0.96. At k=1 the per-node bests are
    // 0->1, 1->2, 2->1; edge (0,1) survives through node 0's admission alone.
    const std::vector<TextVector> vecs = {tv({1, 0}), tv({0.8, 0.6}), tv({0.6, 0.8})};
    SimilarityPolicy one{};
    one.top_k = 1;
    one.floor = 0.1;
    const View rr = build_report_report(vecs, one);
    CHECK(rr.weight(0, 1) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(rr.weight(1, 2) == doctest::Approx(0.96).epsilon(1e-12));
    CHECK(rr.edge_count() == 2);
}

TEST_CASE("views: undirected storage is symmetric, positive, and loop-free") {
    Rng rng(99);
    std::vector<TextVector> vecs;
    for (int i = 0; i < 12; ++i) {
        std::vector<double> v(6);
        for (double& x : v) x = rng.uniform();
        vecs.push_back(tv(std::move(v)));
    }
    const View rr = build_report_report(vecs, SimilarityPolicy{});
    CHECK(rr.edge_count() > 0);
    for (const auto& [key, w] : rr.edges) {
        CHECK(key.first < key.second); // canonical order, no self-loops
        CHECK(w > 0.0);
        CHECK(rr.weight(key.first, key.second) == rr.weight(key.second, key.first));
    }

    View v;
    CHECK_THROWS_AS(v.add_undirected(3, 3, 1.0), ContractViolation);
    CHECK_THROWS_AS(v.add_undirected(1, 2, 0.0), ContractViolation);
}

TEST_CASE("views: construction is deterministic") {
    Rng rng(5);
    std::vector<TextVector> vecs;
    for (int i = 0; i < 9; ++i) {
        std::vector<double> v(4);
        for (double& x : v) x = rng.uniform();
        vecs.push_back(tv(std::move(v)));
    }
    const View a = build_report_report(vecs, SimilarityPolicy{});
    const View b = build_report_report(vecs, SimilarityPolicy{});
    CHECK(a.edges == b.edges);
}

TEST_CASE("attach: unseen reports link only into the training side") {
    const std::vector<TextVector> train = {tv({1, 0}), tv({0, 1})};
    const std::vector<TextVector> unseen = {
        tv({1, 0}),      // identical to train 0
        tv({0.6, 0.8}),  // similar to both
        tv({0, 0}),      // zero vector: no admissible neighbor
    };
    const View rr = build_report_report(train, SimilarityPolicy{});
    const AttachResult att = attach_unseen_reports(rr, unseen, train, SimilarityPolicy{});

    CHECK(att.view.n_reports == 5); // 2 train + 3 unseen
    // training subgraph unchanged
    for (const auto& [key, w] : rr.edges) CHECK(att.view.edges.at(key) == w);
    // unseen node ids are 2,3,4; no edge may touch two of them
    for (const auto& [key, w] : att.view.edges) {
        CHECK_FALSE((key.first >= 2 && key.second >= 2));
        CHECK(w > 0.0);
    }
    CHECK(att.view.weight(0, 2) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(att.view.weight(0, 3) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(att.view.weight(1, 3) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(att.isolated == std::vector<int>{2});
}

TEST_CASE("attach: five unseen reports at k=2 add at most ten edges") {
    Rng rng(123);
    std::vector<TextVector> train;
    for (int i = 0; i < 8; ++i) {
        std::vector<double> v(5);
        for (double& x : v) x = rng.uniform();
        train.push_back(tv(std::move(v)));
    }
    std::vector<TextVector> unseen;
    for (int i = 0; i < 5; ++i) {
        std::vector<double> v(5);
        for (double& x : v) x = rng.uniform();
        unseen.push_back(tv(std::move(v)));
    }
    SimilarityPolicy policy{};
    policy.top_k = 2;
    const View rr = build_report_report(train, policy);
    const AttachResult att = attach_unseen_reports(rr, unseen, train, policy);

    const std::size_t added = att.view.edge_count() - rr.edge_count();
    CHECK(added <= 10); // 5 unseen x k=2
    const int m = static_cast<int>(train.size());
    for (const auto& [key, w] : att.view.edges) {
        (void)w;
        CHECK_FALSE((key.first >= m && key.second >= m)); // never unseen-unseen
    }
    for (const auto& [key, w] : rr.edges) { // training subgraph preserved exactly
        REQUIRE(att.view.edges.count(key) == 1);
        CHECK(att.view.edges.at(key) == w);
    }
}

TEST_CASE("neighbor index: bipartite compilation maps codes after reports") {
    Corpus c = corpus_with_files({"fa", "fb"});
    add_report(c, "r0", {"fa"});
    add_report(c, "r1", {"fa", "fb"});
    const std::vector<TextVector> report_vecs = {tv({1, 0}), tv({0.6, 0.8})};
    const std::vector<TextVector> file_vecs = {tv({1, 0}), tv({0, 1})};
    const View rc = build_report_code(c, all_indices(c), report_vecs, file_vecs);

    const nn::NeighborIndex idx = compile_index(rc);
    REQUIRE(idx.node_count() == 4); // 2 reports then 2 codes
    // report 0 -> code 0 only; code node ids offset by n_reports
    REQUIRE(idx.adj[0].size() == 1);
    CHECK(idx.adj[0][0].first == 2);
    CHECK(idx.adj[0][0].second == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(idx.adj[1].size() == 2);
    CHECK(idx.adj[1][0].first == 2); // sorted neighbor ids
    CHECK(idx.adj[1][1].first == 3);
    // symmetric entries on the code side
    REQUIRE(idx.adj[2].size() == 2);
    CHECK(idx.adj[3].size() == 1);

    const nn::NeighborIndex wide = compile_index(rc, 6);
    CHECK(wide.node_count() == 6);
    CHECK(wide.adj[4].empty());
    CHECK(wide.adj[5].empty());
}

TEST_CASE("views: CSV dump is exact and stable") {
    macl::testing::ScopedTempDir tmp("views_csv");
    View v;
    v.kind = View::Kind::code_code;
    v.n_codes = 3;
    v.add_undirected(2, 0, 1.0);
    v.add_undirected(1, 2, 2.0);
    const std::string path = tmp.file("cc.csv");
    dump_view_csv(v, path);
    CHECK(macl::testing::read_file(path) == "src,dst,weight,view_kind\n"
                                            "0,2,1,cc\n"
                                            "1,2,2,cc\n");
}
