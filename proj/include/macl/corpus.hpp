#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace macl {

// One issue record with its fix ground truth.
struct BugReport {
    std::string id;
    std::int64_t opened_ts = 0;
    std::int64_t commit_ts = 0; // fix commit time; the corpus sort key
    std::string summary;
    std::string description;
    std::vector<std::string> fixed_paths;

    std::string text() const { return summary + " " + description; }
};

// Evolving source-file node set. Node ids are assigned once and never
// reused: files deleted upstream keep their node (tombstoned), and a path
// that disappears then reappears maps back to its original id. A rename
// therefore always mints a new node.
struct FileCatalog {
    std::map<std::string, int> entries;  // path -> node id
    std::vector<std::string> paths;      // node id -> path
    std::vector<int> created_at;         // node id -> version index of first sighting
    std::set<int> tombstoned;            // absent from the newest listing

    int node_count() const { return static_cast<int>(paths.size()); }
    bool contains(const std::string& path) const { return entries.count(path) != 0; }
};

// Reports sorted ascending by (commit_ts, id) over an evolved catalog.
struct Corpus {
    std::vector<BugReport> reports;
    FileCatalog catalog;
};

// Chronological partition as index lists into Corpus.reports. Freshly split
// ranges are contiguous; evaluation filtering may later punch holes in the
// validation/test lists.
struct Split {
    std::vector<int> train;
    std::vector<int> validation;
    std::vector<int> test;
};

// Reads per-version snapshot listings (oldest first) into a catalog.
FileCatalog evolve_catalog(const std::vector<std::vector<std::string>>& snapshot_listings);

// Parses a JSON-Lines report file plus snapshot listing files. Malformed
// records raise a parse error naming the offending line; an empty corpus is
// a contract violation.
Corpus load_corpus(const std::string& reports_path, const std::vector<std::string>& snapshot_listing_paths);

// Restricts every report's fixed paths to catalog-resolvable ones and drops
// reports left with none. Total and idempotent.
Corpus filter_reports(const Corpus& corpus);

// 80/10/10 contiguous chronological split; remainder rows go to test.
// Fewer than 3 reports cannot be split.
Split chronological_split(const Corpus& corpus);

// Drops validation/test reports none of whose ground-truth files was ever
// fixed by a training report (their ranking would be unlearnable).
Split filter_eval_reports(const Split& split, const Corpus& corpus);

// On-disk bundle of an ingested corpus and its split (JSON).
void save_corpus_bundle(const std::string& path, const Corpus& corpus, const Split& split);
void load_corpus_bundle(const std::string& path, Corpus& corpus, Split& split);

// Parses one snapshot listing file: one repository-relative path per line,
// blank lines ignored.
std::vector<std::string> read_snapshot_listing(const std::string& path);

} // namespace macl
