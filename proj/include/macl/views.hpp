#pragma once

#include "macl/corpus.hpp"
#include "macl/gat.hpp"
#include "macl/textsim.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace macl {

// Sparsification rule for the report-report view: per-node top-k neighbors
// by similarity, floored, union of admissions, symmetrized.
struct SimilarityPolicy {
    int top_k = 20;
    double floor = 0.1;
};

// One weighted undirected graph. Report-code edges pair a train-report index
// with a catalog node id; same-kind edges are stored once with src < dst.
// Weights are strictly positive — an absent pair means weight 0.
struct View {
    enum class Kind { report_code, report_report, code_code };

    Kind kind = Kind::report_report;
    int n_reports = 0; // report-side node count (0 for code_code)
    int n_codes = 0;   // code-side node count (0 for report_report)
    std::map<std::pair<int, int>, double> edges;

    void add_undirected(int i, int j, double w); // same-kind: canonicalizes to (min, max)
    double weight(int i, int j) const;           // same-kind lookup, either order
    std::size_t edge_count() const { return edges.size(); }
};

const char* view_kind_name(View::Kind kind); // "rc" | "rr" | "cc"

// One edge per (train report, fixed file) pair; weight = cosine of the two
// TF-IDF vectors, clamped up to min_weight when nonpositive so a ground-truth
// link is never dropped.
View build_report_code(const Corpus& corpus, const std::vector<int>& train_idx,
                       const std::vector<TextVector>& train_report_vecs,
                       const std::vector<TextVector>& file_vecs, double min_weight = 1e-6);

// Similarity edges among one report set (indices 0..m-1 aligned with vecs).
View build_report_report(const std::vector<TextVector>& report_vecs,
                         const SimilarityPolicy& policy);

// +1 to every unordered file pair fixed together by a train report that
// touches between 2 and max_commit files; larger commits contribute nothing.
View build_code_code(const Corpus& corpus, const std::vector<int>& train_idx,
                     int max_commit = 10);

struct AttachResult {
    View view;                 // train nodes 0..m-1, unseen nodes m..m+u-1
    std::vector<int> isolated; // positions in the unseen list with no admitted edge
};

// Adds similarity edges from each unseen report to training reports only —
// never between unseen pairs — leaving the training subgraph unchanged.
AttachResult attach_unseen_reports(const View& rr_view,
                                   const std::vector<TextVector>& unseen_vecs,
                                   const std::vector<TextVector>& train_vecs,
                                   const SimilarityPolicy& policy);

// Flattens a view into per-node adjacency for the attention layers. The
// bipartite report-code view maps report i -> node i and code j -> node
// n_reports + j; same-kind views keep their own ids. total_nodes may extend
// the graph with trailing isolated nodes (attached-view bookkeeping).
nn::NeighborIndex compile_index(const View& view, int total_nodes = -1);

// One row per stored edge: src,dst,weight,view_kind.
void dump_view_csv(const View& view, const std::string& path);

} // namespace macl
