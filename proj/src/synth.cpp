#include "macl/synth.hpp"

#include "macl/errors.hpp"
#include "macl/rng.hpp"
#include "macl/textsim.hpp"

#include <json.hpp>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

namespace macl {

namespace {

std::string capitalize(const std::string& w) {
    std::string out = w;
    if (!out.empty() && out[0] >= 'a' && out[0] <= 'z')
        out[0] = static_cast<char>(out[0] - 'a' + 'A');
    return out;
}

} // namespace

void SyntheticSpec::validate() const {
    if (n_clusters < 1) throw ContractViolation("synth: n_clusters must be positive");
    if (reports_per_cluster < 1) throw ContractViolation("synth: reports_per_cluster must be positive");
    if (files_per_cluster < 1) throw ContractViolation("synth: files_per_cluster must be positive");
    if (vocab_size < 1) throw ContractViolation("synth: vocab_size must be positive");
    if (noise_rate < 0.0 || noise_rate >= 1.0)
        throw ContractViolation("synth: noise_rate must be in [0, 1)");
}

SyntheticCorpus generate_synthetic(const SyntheticSpec& spec) {
    spec.validate();
    Rng rng(stream_seed(spec.seed, "synth"));

    std::set<std::string> used_words;
    auto make_word = [&]() {
        for (;;) {
            const int len = 4 + static_cast<int>(rng.index(4)); // 4..7 letters
            std::string w;
            for (int i = 0; i < len; ++i)
                w.push_back(static_cast<char>('a' + rng.index(26)));
            if (is_stop_word(w)) continue;
            if (used_words.insert(w).second) return w;
        }
    };

    std::vector<std::vector<std::string>> pools(spec.n_clusters);
    for (auto& pool : pools) {
        pool.reserve(spec.vocab_size);
        for (int i = 0; i < spec.vocab_size; ++i) pool.push_back(make_word());
    }
    std::vector<std::string> noise_pool;
    noise_pool.reserve(spec.vocab_size);
    for (int i = 0; i < spec.vocab_size; ++i) noise_pool.push_back(make_word());

    SyntheticCorpus out;
    std::set<std::string> used_paths;
    // The first half of a cluster's pool is its shared symptom vocabulary;
    // the second half supplies the two cause words each file owns (disjoint
    // ownership while the half lasts, so two files rarely share cause text).
    // The path adds the cluster's component word as its directory.
    std::vector<std::vector<std::array<std::string, 2>>> file_words(spec.n_clusters);
    std::vector<std::vector<std::string>> file_paths(spec.n_clusters);
    std::vector<std::vector<std::string>> symptom_pools(spec.n_clusters);
    int suffix = 0;
    for (int c = 0; c < spec.n_clusters; ++c) {
        const std::vector<std::string>& pool = pools[c];
        const std::size_t half = (pool.size() + 1) / 2;
        symptom_pools[c].assign(pool.begin(), pool.begin() + half);
        std::vector<std::string> causes(pool.begin() + half, pool.end());
        if (causes.empty()) causes = pool; // degenerate one-word pools
        for (std::size_t i = causes.size(); i > 1; --i)
            std::swap(causes[i - 1], causes[rng.index(i)]);
        const std::string component = symptom_pools[c][rng.index(symptom_pools[c].size())];
        std::size_t next = 0;
        for (int f = 0; f < spec.files_per_cluster; ++f) {
            std::array<std::string, 2> words;
            std::string path;
            for (int attempt = 0;; ++attempt) {
                if (next + 1 < causes.size()) {
                    words = {causes[next], causes[next + 1]};
                    next += 2;
                } else {
                    words = {causes[rng.index(causes.size())], causes[rng.index(causes.size())]};
                }
                path = "src/" + capitalize(component) + "/" + capitalize(words[0]) +
                       capitalize(words[1]) + ".java";
                if (attempt >= 10000) path.insert(path.size() - 5, std::to_string(++suffix));
                if (used_paths.insert(path).second) break;
            }
            file_words[c].push_back(words);
            file_paths[c].push_back(path);
            out.files.push_back(path);
        }
    }

    // Fix popularity is skewed: a few hub files absorb most fixes, the way
    // real defect density concentrates.
    std::vector<std::vector<double>> zipf_cdf(spec.n_clusters);
    for (int c = 0; c < spec.n_clusters; ++c) {
        double acc = 0.0;
        for (int f = 0; f < spec.files_per_cluster; ++f) {
            acc += 1.0 / static_cast<double>(1 + f);
            zipf_cdf[c].push_back(acc);
        }
        for (double& v : zipf_cdf[c]) v /= acc;
    }

    const int total = spec.n_clusters * spec.reports_per_cluster;
    for (int k = 0; k < total; ++k) {
        const int c = k % spec.n_clusters;
        const int max_fix = std::min(3, spec.files_per_cluster);
        const int n_fix = 1 + static_cast<int>(rng.index(max_fix));

        auto zipf_draw = [&]() {
            const double u = rng.uniform();
            const auto& cdf = zipf_cdf[c];
            return static_cast<int>(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        };
        std::set<int> fixed;
        while (static_cast<int>(fixed.size()) < n_fix) fixed.insert(zipf_draw());

        std::vector<std::string> target_words;
        BugReport r;
        for (int f : fixed) {
            r.fixed_paths.push_back(file_paths[c][f]);
            for (const std::string& w : file_words[c][f]) target_words.push_back(w);
        }

        // Each report reveals only part of its files' cause vocabulary and
        // describes the failure mostly through a few shared symptom words:
        // a single report is ambiguous evidence, and a file's full word set
        // only emerges from the community of reports that fixed it.
        std::vector<std::string> visible;
        {
            std::vector<std::string> shuffled = target_words;
            for (std::size_t i = shuffled.size(); i > 1; --i)
                std::swap(shuffled[i - 1], shuffled[rng.index(i)]);
            const std::size_t n_visible = (shuffled.size() + 1) / 2;
            visible.assign(shuffled.begin(), shuffled.begin() + n_visible);
        }
        std::vector<std::string> symptoms;
        {
            const auto& sp = symptom_pools[c];
            std::set<std::size_t> picked;
            const std::size_t n_sym = std::min<std::size_t>(3, sp.size());
            while (picked.size() < n_sym) picked.insert(rng.index(sp.size()));
            for (std::size_t i : picked) symptoms.push_back(sp[i]);
        }

        auto draw_token = [&]() -> const std::string& {
            if (rng.uniform() < spec.noise_rate) return noise_pool[rng.index(noise_pool.size())];
            if (rng.uniform() < 0.6) return symptoms[rng.index(symptoms.size())];
            return visible[rng.index(visible.size())];
        };
        auto draw_text = [&](int count) {
            std::string text;
            for (int i = 0; i < count; ++i) {
                if (i) text.push_back(' ');
                text += draw_token();
            }
            return text;
        };
        r.summary = draw_text(6);
        r.description = draw_text(24);

        char id[16];
        std::snprintf(id, sizeof(id), "SYN-%04d", k + 1);
        r.id = id;
        r.commit_ts = 1600000000LL + static_cast<std::int64_t>(k) * 3600;
        r.opened_ts = r.commit_ts - 1800;
        out.reports.push_back(std::move(r));
    }
    return out;
}

void write_synthetic(const SyntheticCorpus& corpus, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);

    const std::string reports_path = out_dir + "/reports.jsonl";
    std::ofstream rf(reports_path);
    if (!rf) throw ContractViolation("cannot write " + reports_path);
    for (const BugReport& r : corpus.reports) {
        nlohmann::json rec;
        rec["id"] = r.id;
        rec["opened_ts"] = r.opened_ts;
        rec["commit_ts"] = r.commit_ts;
        rec["summary"] = r.summary;
        rec["description"] = r.description;
        rec["fixed_files"] = r.fixed_paths;
        rf << rec.dump() << "\n";
    }

    const std::string snapshot_path = out_dir + "/snapshot.0.txt";
    std::ofstream sf(snapshot_path);
    if (!sf) throw ContractViolation("cannot write " + snapshot_path);
    for (const std::string& path : corpus.files) sf << path << "\n";
}

} // namespace macl
