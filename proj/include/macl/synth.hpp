#pragma once

#include "macl/corpus.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace macl {

// Clustered synthetic bug corpus: each cluster owns a word pool and a file
// set; report text is drawn from the words of its fixed files and its
// cluster pool, with a configurable fraction of off-topic noise tokens.
struct SyntheticSpec {
    int n_clusters = 4;
    int reports_per_cluster = 25;
    int files_per_cluster = 10;
    int vocab_size = 25; // words per cluster pool (the noise pool matches)
    double noise_rate = 0.1;
    std::uint64_t seed = 7;

    void validate() const;
};

struct SyntheticCorpus {
    std::vector<BugReport> reports; // generation order (already chronological)
    std::vector<std::string> files; // cluster-major
};

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec);

// Writes reports.jsonl and snapshot.0.txt into out_dir (created if needed).
void write_synthetic(const SyntheticCorpus& corpus, const std::string& out_dir);

} // namespace macl
