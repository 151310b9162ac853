#include "macl/views.hpp"

#include "macl/errors.hpp"

#include <algorithm>
#include <fstream>

namespace macl {

namespace {

// Per-node admissions: indices of the top-k most similar candidates at or
// above the floor, ties broken by candidate index ascending.
std::vector<int> admit_top_k(const std::vector<double>& sims, const SimilarityPolicy& policy) {
    std::vector<int> order;
    for (int j = 0; j < static_cast<int>(sims.size()); ++j)
        if (sims[j] >= policy.floor) order.push_back(j);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (sims[a] != sims[b]) return sims[a] > sims[b];
        return a < b;
    });
    if (static_cast<int>(order.size()) > policy.top_k) order.resize(policy.top_k);
    return order;
}

} // namespace

void View::add_undirected(int i, int j, double w) {
    if (i == j) throw ContractViolation("view: self-loop rejected");
    if (!(w > 0.0)) throw ContractViolation("view: edge weight must be positive");
    if (i > j) std::swap(i, j);
    edges[{i, j}] = w;
}

double View::weight(int i, int j) const {
    if (i > j) std::swap(i, j);
    auto it = edges.find({i, j});
    return it == edges.end() ? 0.0 : it->second;
}

const char* view_kind_name(View::Kind kind) {
    switch (kind) {
        case View::Kind::report_code: return "rc";
        case View::Kind::report_report: return "rr";
        case View::Kind::code_code: return "cc";
    }
    return "?";
}

View build_report_code(const Corpus& corpus, const std::vector<int>& train_idx,
                       const std::vector<TextVector>& train_report_vecs,
                       const std::vector<TextVector>& file_vecs, double min_weight) {
    if (train_idx.size() != train_report_vecs.size())
        throw ContractViolation("build_report_code: report vector count mismatch");
    if (file_vecs.size() != static_cast<std::size_t>(corpus.catalog.node_count()))
        throw ContractViolation("build_report_code: file vector count mismatch");

    View v;
    v.kind = View::Kind::report_code;
    v.n_reports = static_cast<int>(train_idx.size());
    v.n_codes = corpus.catalog.node_count();
    for (int t = 0; t < v.n_reports; ++t) {
        const BugReport& r = corpus.reports[train_idx[t]];
        if (r.fixed_paths.empty())
            throw ContractViolation("build_report_code: train report without fixed paths: " + r.id);
        for (const std::string& path : r.fixed_paths) {
            auto it = corpus.catalog.entries.find(path);
            if (it == corpus.catalog.entries.end())
                throw ContractViolation("build_report_code: unresolvable path " + path);
            double w = cosine(train_report_vecs[t], file_vecs[it->second]);
            if (w <= 0.0) w = min_weight; // the fix link is ground truth; keep it
            v.edges[{t, it->second}] = w;
        }
    }
    return v;
}

View build_report_report(const std::vector<TextVector>& report_vecs,
                         const SimilarityPolicy& policy) {
    const int m = static_cast<int>(report_vecs.size());
    if (m < 2) throw ContractViolation("build_report_report: need at least 2 reports");

    View v;
    v.kind = View::Kind::report_report;
    v.n_reports = m;
    std::vector<double> sims(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j)
            sims[j] = i == j ? -1.0 : cosine(report_vecs[i], report_vecs[j]);
        for (int j : admit_top_k(sims, policy)) v.add_undirected(i, j, sims[j]);
    }
    return v;
}

View build_code_code(const Corpus& corpus, const std::vector<int>& train_idx, int max_commit) {
    View v;
    v.kind = View::Kind::code_code;
    v.n_codes = corpus.catalog.node_count();
    for (int t : train_idx) {
        const BugReport& r = corpus.reports[t];
        std::vector<int> nodes;
        for (const std::string& path : r.fixed_paths) {
            auto it = corpus.catalog.entries.find(path);
            if (it == corpus.catalog.entries.end())
                throw ContractViolation("build_code_code: unresolvable path " + path);
            nodes.push_back(it->second);
        }
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        const int k = static_cast<int>(nodes.size());
        if (k < 2 || k > max_commit) continue; // singletons add nothing; huge commits are noise
        for (int a = 0; a < k; ++a)
            for (int b = a + 1; b < k; ++b) ++v.edges[{nodes[a], nodes[b]}];
    }
    return v;
}

AttachResult attach_unseen_reports(const View& rr_view,
                                   const std::vector<TextVector>& unseen_vecs,
                                   const std::vector<TextVector>& train_vecs,
                                   const SimilarityPolicy& policy) {
    if (rr_view.kind != View::Kind::report_report)
        throw ContractViolation("attach_unseen_reports: expected a report-report view");
    if (rr_view.n_reports != static_cast<int>(train_vecs.size()))
        throw ContractViolation("attach_unseen_reports: train vector count mismatch");

    AttachResult res;
    res.view = rr_view;
    const int m = rr_view.n_reports;
    res.view.n_reports = m + static_cast<int>(unseen_vecs.size());

    std::vector<double> sims(m);
    for (std::size_t u = 0; u < unseen_vecs.size(); ++u) {
        for (int j = 0; j < m; ++j) sims[j] = cosine(unseen_vecs[u], train_vecs[j]);
        const std::vector<int> admitted = admit_top_k(sims, policy);
        if (admitted.empty()) {
            res.isolated.push_back(static_cast<int>(u));
            continue;
        }
        for (int j : admitted) res.view.add_undirected(m + static_cast<int>(u), j, sims[j]);
    }
    return res;
}

nn::NeighborIndex compile_index(const View& view, int total_nodes) {
    int n;
    int code_base = 0;
    switch (view.kind) {
        case View::Kind::report_code:
            n = view.n_reports + view.n_codes;
            code_base = view.n_reports;
            break;
        case View::Kind::report_report: n = view.n_reports; break;
        case View::Kind::code_code: n = view.n_codes; break;
        default: throw ContractViolation("compile_index: unknown view kind");
    }
    if (total_nodes >= 0) {
        if (total_nodes < n) throw ContractViolation("compile_index: total_nodes below view size");
        n = total_nodes;
    }
    nn::NeighborIndex idx;
    idx.adj.resize(n);
    for (const auto& [key, w] : view.edges) {
        const int a = key.first;
        const int b = view.kind == View::Kind::report_code ? code_base + key.second : key.second;
        idx.adj[a].emplace_back(b, w);
        idx.adj[b].emplace_back(a, w);
    }
    for (auto& lst : idx.adj) std::sort(lst.begin(), lst.end());
    return idx;
}

void dump_view_csv(const View& view, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractViolation("cannot write view dump: " + path);
    out << "src,dst,weight,view_kind\n";
    const char* kind = view_kind_name(view.kind);
    out.precision(17);
    for (const auto& [key, w] : view.edges)
        out << key.first << "," << key.second << "," << w << "," << kind << "\n";
}

} // namespace macl
