#include "macl/corpus.hpp"
#include "macl/errors.hpp"

#include "temp_dir.hpp"

#include <doctest.h>
#include <json.hpp>

#include <string>
#include <vector>

using namespace macl;
using macl::testing::ScopedTempDir;
using macl::testing::write_file;

namespace {

std::string report_line(const std::string& id, std::int64_t opened, std::int64_t commit,
                        const std::string& summary, const std::string& description,
                        const std::vector<std::string>& files) {
    nlohmann::json rec;
    rec["id"] = id;
    rec["opened_ts"] = opened;
    rec["commit_ts"] = commit;
    rec["summary"] = summary;
    rec["description"] = description;
    rec["fixed_files"] = files;
    return rec.dump() + "\n";
}

// Corpus with `m` dummy reports; only the count matters for split tests.
Corpus dummy_corpus(int m) {
    Corpus c;
    for (int i = 0; i < m; ++i) {
        BugReport r;
        r.id = "R" + std::to_string(i);
        r.opened_ts = i;
        r.commit_ts = i + 1;
        r.fixed_paths = {"f"};
        c.reports.push_back(r);
    }
    return c;
}

} // namespace

TEST_CASE("corpus: reports sorted by fix commit time, ties by id") {
    ScopedTempDir tmp("corpus_sort");
    std::string jsonl;
    jsonl += report_line("B-3", 10, 300, "s", "d", {"a.java"});
    jsonl += report_line("B-1", 10, 100, "s", "d", {"a.java"});
    jsonl += report_line("B-9", 10, 200, "s", "d", {"a.java"});
    jsonl += report_line("B-2", 10, 200, "s", "d", {"a.java"});
    write_file(tmp.file("reports.jsonl"), jsonl);
    write_file(tmp.file("snap.txt"), "a.java\n");

    const Corpus c = load_corpus(tmp.file("reports.jsonl"), {tmp.file("snap.txt")});
    REQUIRE(c.reports.size() == 4);
    CHECK(c.reports[0].id == "B-1");
    CHECK(c.reports[1].id == "B-2"); // commit tie broken by id
    CHECK(c.reports[2].id == "B-9");
    CHECK(c.reports[3].id == "B-3");
}

TEST_CASE("corpus: blank and whitespace lines are skipped") {
    ScopedTempDir tmp("corpus_blank");
    std::string jsonl = report_line("A", 1, 2, "s", "d", {"a.java"});
    jsonl += "\n   \t \n";
    jsonl += report_line("B", 1, 2, "s", "d", {"a.java"});
    write_file(tmp.file("reports.jsonl"), jsonl);
    write_file(tmp.file("snap.txt"), "a.java\n");
    CHECK(load_corpus(tmp.file("reports.jsonl"), {tmp.file("snap.txt")}).reports.size() == 2);
}

TEST_CASE("corpus: malformed records raise parse errors naming the line") {
    ScopedTempDir tmp("corpus_bad");
    write_file(tmp.file("snap.txt"), "a.java\n");
    auto expect_parse_error = [&](const std::string& jsonl, const std::string& fragment) {
        write_file(tmp.file("reports.jsonl"), jsonl);
        try {
            load_corpus(tmp.file("reports.jsonl"), {tmp.file("snap.txt")});
            FAIL_CHECK("expected a parse error for: " << fragment);
        } catch (const ParseError& e) {
            const std::string what = e.what();
            CHECK(what.find(fragment) != std::string::npos);
        }
    };

    const std::string ok = report_line("A", 1, 2, "s", "d", {"a.java"});
    expect_parse_error(ok + "{not json\n", ":2:");
    expect_parse_error("[1,2,3]\n", "not a JSON object");
    expect_parse_error(R"({"id":"X","opened_ts":1,"commit_ts":2,"summary":"s","fixed_files":[]})"
                       "\n",
                       "description");
    expect_parse_error(
        R"({"id":"X","opened_ts":"1","commit_ts":2,"summary":"s","description":"d","fixed_files":[]})"
        "\n",
        "opened_ts");
    expect_parse_error(
        R"({"id":"X","opened_ts":5,"commit_ts":2,"summary":"s","description":"d","fixed_files":[]})"
        "\n",
        "precedes");
    expect_parse_error(
        R"({"id":"X","opened_ts":1,"commit_ts":2,"summary":"s","description":"d","fixed_files":"a"})"
        "\n",
        "fixed_files");
    expect_parse_error(
        R"({"id":"X","opened_ts":1,"commit_ts":2,"summary":"s","description":"d","fixed_files":[7]})"
        "\n",
        "strings");
    expect_parse_error(
        R"({"id":"","opened_ts":1,"commit_ts":2,"summary":"s","description":"d","fixed_files":[]})"
        "\n",
        "id");
}

TEST_CASE("corpus: duplicate ids and empty corpora are rejected") {
    ScopedTempDir tmp("corpus_dup");
    write_file(tmp.file("snap.txt"), "a.java\n");

    write_file(tmp.file("reports.jsonl"),
               report_line("A", 1, 2, "s", "d", {"a.java"}) +
                   report_line("A", 1, 3, "s", "d", {"a.java"}));
    CHECK_THROWS_AS(load_corpus(tmp.file("reports.jsonl"), {tmp.file("snap.txt")}),
                    ContractViolation);

    write_file(tmp.file("reports.jsonl"), "\n");
    CHECK_THROWS_WITH_AS(load_corpus(tmp.file("reports.jsonl"), {tmp.file("snap.txt")}),
                         doctest::Contains("empty corpus"), ContractViolation);
}

TEST_CASE("corpus: catalog evolution assigns stable ids and tombstones") {
    const FileCatalog cat = evolve_catalog({
        {"a.java", "b.java"},
        {"b.java", "c.java"},
        {"c.java", "a.java", "d.java"},
    });
    REQUIRE(cat.node_count() == 4);
    CHECK(cat.entries.at("a.java") == 0);
    CHECK(cat.entries.at("b.java") == 1);
    CHECK(cat.entries.at("c.java") == 2);
    CHECK(cat.entries.at("d.java") == 3);
    CHECK(cat.created_at == std::vector<int>{0, 0, 1, 2});
    // b.java is absent from the newest listing; a.java reappeared and keeps id 0.
    CHECK(cat.tombstoned == std::set<int>{1});
}

TEST_CASE("corpus: a rename mints a new node and tombstones the old one") {
    const FileCatalog cat = evolve_catalog({{"src/Old.java"}, {"src/New.java"}});
    REQUIRE(cat.node_count() == 2);
    CHECK(cat.entries.at("src/Old.java") == 0);
    CHECK(cat.entries.at("src/New.java") == 1);
    CHECK(cat.tombstoned == std::set<int>{0});
}

TEST_CASE("corpus: empty first snapshot listing is rejected") {
    CHECK_THROWS_AS(evolve_catalog({}), ContractViolation);
    CHECK_THROWS_AS(evolve_catalog({{}}), ContractViolation);
}

TEST_CASE("corpus: filtering prunes unresolvable paths and drops empty reports") {
    Corpus c;
    c.catalog = evolve_catalog({{"a.java", "b.java"}});
    for (int i = 0; i < 10; ++i) {
        BugReport r;
        r.id = "R" + std::to_string(i);
        r.opened_ts = i;
        r.commit_ts = i;
        // reports 0 and 1 reference only unknown files; the rest mix known+unknown
        if (i < 2)
            r.fixed_paths = {"gone.java", "missing.java"};
        else
            r.fixed_paths = {"a.java", "gone.java"};
        c.reports.push_back(r);
    }

    const Corpus filtered = filter_reports(c);
    CHECK(filtered.reports.size() == 8); // two all-invalid reports dropped
    for (const BugReport& r : filtered.reports)
        CHECK(r.fixed_paths == std::vector<std::string>{"a.java"});

    // Idempotence: filtering a filtered corpus changes nothing.
    const Corpus twice = filter_reports(filtered);
    REQUIRE(twice.reports.size() == filtered.reports.size());
    for (std::size_t i = 0; i < twice.reports.size(); ++i) {
        CHECK(twice.reports[i].id == filtered.reports[i].id);
        CHECK(twice.reports[i].fixed_paths == filtered.reports[i].fixed_paths);
    }
}

TEST_CASE("corpus: split sizes follow the 80/10/10 floor arithmetic") {
    auto sizes = [](int m) {
        const Split s = chronological_split(dummy_corpus(m));
        return std::vector<std::size_t>{s.train.size(), s.validation.size(), s.test.size()};
    };
    CHECK(sizes(10) == std::vector<std::size_t>{8, 1, 1});
    CHECK(sizes(25) == std::vector<std::size_t>{20, 2, 3});
    CHECK(sizes(1020) == std::vector<std::size_t>{816, 102, 102});
    CHECK(sizes(3) == std::vector<std::size_t>{2, 0, 1});
    CHECK_THROWS_AS(chronological_split(dummy_corpus(2)), ContractViolation);

    // Contiguous and chronological: train < validation < test index ranges.
    const Split s = chronological_split(dummy_corpus(25));
    CHECK(s.train.front() == 0);
    CHECK(s.train.back() == 19);
    CHECK(s.validation.front() == 20);
    CHECK(s.test.back() == 24);
}

TEST_CASE("corpus: evaluation filtering keeps reports with any trained file") {
    Corpus c;
    c.catalog = evolve_catalog({{"p0", "p1", "p2", "p3", "p4", "q0", "q1", "q2"}});
    // 10 train reports covering p0..p4
    for (int i = 0; i < 10; ++i) {
        BugReport r;
        r.id = "T" + std::to_string(i);
        r.commit_ts = i;
        r.fixed_paths = {"p" + std::to_string(i % 5)};
        c.reports.push_back(r);
    }
    // 20 eval reports, 3 of them with only never-trained ground truth
    for (int i = 0; i < 20; ++i) {
        BugReport r;
        r.id = "E" + std::to_string(i);
        r.commit_ts = 100 + i;
        if (i < 3)
            r.fixed_paths = {"q" + std::to_string(i % 3)};
        else
            r.fixed_paths = {"q0", "p" + std::to_string(i % 5)}; // any-overlap keeps it
        c.reports.push_back(r);
    }
    Split split;
    for (int i = 0; i < 10; ++i) split.train.push_back(i);
    for (int i = 10; i < 30; ++i) split.test.push_back(i);

    const Split kept = filter_eval_reports(split, c);
    CHECK(kept.train.size() == 10);
    CHECK(kept.test.size() == 17);
}

TEST_CASE("corpus: bundle save/load round trip") {
    ScopedTempDir tmp("corpus_bundle");
    std::string jsonl;
    jsonl += report_line("A-1", 5, 10, "first issue", "text body", {"a.java", "b.java"});
    jsonl += report_line("A-2", 6, 20, "second", "more text", {"b.java"});
    jsonl += report_line("A-3", 7, 30, "third", "again", {"c.java"});
    write_file(tmp.file("reports.jsonl"), jsonl);
    write_file(tmp.file("snap0.txt"), "a.java\nb.java\n");
    write_file(tmp.file("snap1.txt"), "b.java\nc.java\n");

    Corpus c = load_corpus(tmp.file("reports.jsonl"), {tmp.file("snap0.txt"), tmp.file("snap1.txt")});
    c = filter_reports(c);
    Split split = chronological_split(c);
    split = filter_eval_reports(split, c);
    save_corpus_bundle(tmp.file("bundle.json"), c, split);

    Corpus c2;
    Split split2;
    load_corpus_bundle(tmp.file("bundle.json"), c2, split2);

    REQUIRE(c2.reports.size() == c.reports.size());
    for (std::size_t i = 0; i < c.reports.size(); ++i) {
        CHECK(c2.reports[i].id == c.reports[i].id);
        CHECK(c2.reports[i].opened_ts == c.reports[i].opened_ts);
        CHECK(c2.reports[i].commit_ts == c.reports[i].commit_ts);
        CHECK(c2.reports[i].summary == c.reports[i].summary);
        CHECK(c2.reports[i].description == c.reports[i].description);
        CHECK(c2.reports[i].fixed_paths == c.reports[i].fixed_paths);
    }
    CHECK(c2.catalog.paths == c.catalog.paths);
    CHECK(c2.catalog.created_at == c.catalog.created_at);
    CHECK(c2.catalog.tombstoned == c.catalog.tombstoned);
    CHECK(c2.catalog.entries == c.catalog.entries);
    CHECK(split2.train == split.train);
    CHECK(split2.validation == split.validation);
    CHECK(split2.test == split.test);
}

TEST_CASE("corpus: snapshot listings ignore blanks and CRLF") {
    ScopedTempDir tmp("corpus_snap");
    write_file(tmp.file("snap.txt"), "a.java\r\n\r\n\nb.java\n");
    CHECK(read_snapshot_listing(tmp.file("snap.txt")) ==
          std::vector<std::string>{"a.java", "b.java"});
}
