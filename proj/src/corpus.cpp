#include "macl/corpus.hpp"

#include "macl/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_set>

namespace macl {

namespace {

using nlohmann::json;

void sort_reports(std::vector<BugReport>& reports) {
    std::sort(reports.begin(), reports.end(), [](const BugReport& a, const BugReport& b) {
        if (a.commit_ts != b.commit_ts) return a.commit_ts < b.commit_ts;
        return a.id < b.id;
    });
}

std::int64_t require_int(const json& rec, const char* key, const std::string& file, std::size_t line) {
    if (!rec.contains(key)) throw ParseError(file, line, std::string("missing field \"") + key + "\"");
    const json& v = rec.at(key);
    if (!v.is_number_integer())
        throw ParseError(file, line, std::string("field \"") + key + "\" must be an integer");
    return v.get<std::int64_t>();
}

std::string require_string(const json& rec, const char* key, const std::string& file, std::size_t line) {
    if (!rec.contains(key)) throw ParseError(file, line, std::string("missing field \"") + key + "\"");
    const json& v = rec.at(key);
    if (!v.is_string())
        throw ParseError(file, line, std::string("field \"") + key + "\" must be a string");
    return v.get<std::string>();
}

} // namespace

std::vector<std::string> read_snapshot_listing(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractViolation("cannot open snapshot listing: " + path);
    std::vector<std::string> paths;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) paths.push_back(line);
    }
    return paths;
}

FileCatalog evolve_catalog(const std::vector<std::vector<std::string>>& snapshot_listings) {
    if (snapshot_listings.empty() || snapshot_listings.front().empty())
        throw ContractViolation("evolve_catalog: first snapshot listing is empty");

    FileCatalog cat;
    for (std::size_t version = 0; version < snapshot_listings.size(); ++version) {
        for (const std::string& path : snapshot_listings[version]) {
            if (!cat.entries.count(path)) {
                const int id = cat.node_count();
                cat.entries.emplace(path, id);
                cat.paths.push_back(path);
                cat.created_at.push_back(static_cast<int>(version));
            }
        }
    }
    const std::vector<std::string>& last = snapshot_listings.back();
    std::unordered_set<std::string> live(last.begin(), last.end());
    for (const auto& [path, id] : cat.entries)
        if (!live.count(path)) cat.tombstoned.insert(id);
    return cat;
}

Corpus load_corpus(const std::string& reports_path,
                   const std::vector<std::string>& snapshot_listing_paths) {
    std::ifstream in(reports_path);
    if (!in) throw ContractViolation("cannot open reports file: " + reports_path);

    Corpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json rec;
        try {
            rec = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(reports_path, line_no, e.what());
        }
        if (!rec.is_object()) throw ParseError(reports_path, line_no, "record is not a JSON object");

        BugReport r;
        r.id = require_string(rec, "id", reports_path, line_no);
        if (r.id.empty()) throw ParseError(reports_path, line_no, "empty \"id\"");
        r.opened_ts = require_int(rec, "opened_ts", reports_path, line_no);
        r.commit_ts = require_int(rec, "commit_ts", reports_path, line_no);
        if (r.commit_ts < r.opened_ts)
            throw ParseError(reports_path, line_no, "commit_ts precedes opened_ts");
        r.summary = require_string(rec, "summary", reports_path, line_no);
        r.description = require_string(rec, "description", reports_path, line_no);
        if (!rec.contains("fixed_files"))
            throw ParseError(reports_path, line_no, "missing field \"fixed_files\"");
        const json& ff = rec.at("fixed_files");
        if (!ff.is_array()) throw ParseError(reports_path, line_no, "\"fixed_files\" must be an array");
        for (const json& f : ff) {
            if (!f.is_string())
                throw ParseError(reports_path, line_no, "\"fixed_files\" entries must be strings");
            r.fixed_paths.push_back(f.get<std::string>());
        }
        corpus.reports.push_back(std::move(r));
    }
    if (corpus.reports.empty()) throw ContractViolation("empty corpus: " + reports_path);

    std::set<std::string> ids;
    for (const BugReport& r : corpus.reports)
        if (!ids.insert(r.id).second) throw ContractViolation("duplicate report id: " + r.id);

    sort_reports(corpus.reports);

    std::vector<std::vector<std::string>> listings;
    listings.reserve(snapshot_listing_paths.size());
    for (const std::string& p : snapshot_listing_paths) listings.push_back(read_snapshot_listing(p));
    corpus.catalog = evolve_catalog(listings);
    return corpus;
}

Corpus filter_reports(const Corpus& corpus) {
    Corpus out;
    out.catalog = corpus.catalog;
    for (const BugReport& r : corpus.reports) {
        BugReport kept = r;
        kept.fixed_paths.clear();
        for (const std::string& p : r.fixed_paths)
            if (corpus.catalog.contains(p)) kept.fixed_paths.push_back(p);
        if (!kept.fixed_paths.empty()) out.reports.push_back(std::move(kept));
    }
    sort_reports(out.reports);
    return out;
}

Split chronological_split(const Corpus& corpus) {
    const int m = static_cast<int>(corpus.reports.size());
    if (m < 3) throw ContractViolation("chronological_split: need at least 3 reports, got " + std::to_string(m));
    const int n_train = static_cast<int>(0.8 * m);
    const int n_val = static_cast<int>(0.1 * m);
    Split s;
    for (int i = 0; i < n_train; ++i) s.train.push_back(i);
    for (int i = n_train; i < n_train + n_val; ++i) s.validation.push_back(i);
    for (int i = n_train + n_val; i < m; ++i) s.test.push_back(i);
    return s;
}

Split filter_eval_reports(const Split& split, const Corpus& corpus) {
    std::unordered_set<std::string> trained_paths;
    for (int i : split.train)
        for (const std::string& p : corpus.reports[i].fixed_paths) trained_paths.insert(p);

    auto keep = [&](int i) {
        for (const std::string& p : corpus.reports[i].fixed_paths)
            if (trained_paths.count(p)) return true;
        return false;
    };
    Split out;
    out.train = split.train;
    for (int i : split.validation)
        if (keep(i)) out.validation.push_back(i);
    for (int i : split.test)
        if (keep(i)) out.test.push_back(i);
    return out;
}

void save_corpus_bundle(const std::string& path, const Corpus& corpus, const Split& split) {
    json j;
    j["reports"] = json::array();
    for (const BugReport& r : corpus.reports) {
        j["reports"].push_back({{"id", r.id},
                                {"opened_ts", r.opened_ts},
                                {"commit_ts", r.commit_ts},
                                {"summary", r.summary},
                                {"description", r.description},
                                {"fixed_files", r.fixed_paths}});
    }
    j["catalog"] = {{"paths", corpus.catalog.paths},
                    {"created_at", corpus.catalog.created_at},
                    {"tombstoned", std::vector<int>(corpus.catalog.tombstoned.begin(),
                                                    corpus.catalog.tombstoned.end())}};
    j["split"] = {{"train", split.train}, {"validation", split.validation}, {"test", split.test}};

    std::ofstream out(path);
    if (!out) throw ContractViolation("cannot write corpus bundle: " + path);
    out << j.dump(1, '\t') << "\n";
}

void load_corpus_bundle(const std::string& path, Corpus& corpus, Split& split) {
    std::ifstream in(path);
    if (!in) throw ContractViolation("cannot open corpus bundle: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ParseError(path, 0, e.what());
    }
    corpus = Corpus{};
    split = Split{};
    try {
        for (const json& rec : j.at("reports")) {
            BugReport r;
            r.id = rec.at("id").get<std::string>();
            r.opened_ts = rec.at("opened_ts").get<std::int64_t>();
            r.commit_ts = rec.at("commit_ts").get<std::int64_t>();
            r.summary = rec.at("summary").get<std::string>();
            r.description = rec.at("description").get<std::string>();
            r.fixed_paths = rec.at("fixed_files").get<std::vector<std::string>>();
            corpus.reports.push_back(std::move(r));
        }
        const json& cat = j.at("catalog");
        corpus.catalog.paths = cat.at("paths").get<std::vector<std::string>>();
        corpus.catalog.created_at = cat.at("created_at").get<std::vector<int>>();
        for (int id : cat.at("tombstoned").get<std::vector<int>>()) corpus.catalog.tombstoned.insert(id);
        for (int id = 0; id < corpus.catalog.node_count(); ++id)
            corpus.catalog.entries.emplace(corpus.catalog.paths[id], id);
        split.train = j.at("split").at("train").get<std::vector<int>>();
        split.validation = j.at("split").at("validation").get<std::vector<int>>();
        split.test = j.at("split").at("test").get<std::vector<int>>();
    } catch (const json::exception& e) {
        throw ParseError(path, 0, std::string("corpus bundle schema: ") + e.what());
    }
}

} // namespace macl
