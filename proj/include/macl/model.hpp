#pragma once

#include "macl/adam.hpp"
#include "macl/corpus.hpp"
#include "macl/gat.hpp"
#include "macl/textsim.hpp"
#include "macl/views.hpp"

#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace macl {

// Training hyperparameters. Defaults are the shipped configuration.
struct TrainConfig {
    int layers = 3; // encoder depth L, 1..5
    int d = 32;     // embedding width
    double lr = 0.01;
    double dropout = 0.2;
    double tau = 0.1;     // contrastive temperature
    double lambda = 0.01; // contrastive weight in the total loss
    int max_epochs = 120;
    int patience = 10; // early-stopping epochs without validation-MRR improvement
    std::uint64_t seed = 1;
    std::string variant = "full"; // v0 | v1 | v2 | full
    bool fl_mean = true;          // average (vs. sum) the ranking loss over observed pairs
    bool canonical_nce = false;   // include the positive pair in the contrastive denominator
    bool stop_on_perfect_train_acc = false; // halt once training Accuracy@1 hits 1.0

    void validate() const; // throws ContractViolation on out-of-range values
};

// Full descending ranking of every catalog file for one report.
struct RankedList {
    std::string report_id;
    std::vector<std::pair<int, double>> entries; // (code node id, score), score desc, id asc
    bool fallback = false;                       // ranked by training fix frequency instead
};

// Two-layer perceptron d -> d -> d with ELU between, near-identity at init.
struct MlpHead {
    std::string name;
    nn::Var W1, b1, W2, b2;
};

nn::Var head_forward(const MlpHead& head, const nn::Var& x);

// Model parameters: one embedding table and encoder stack per view, plus the
// projection-head pairs that map both spaces into the shared contrastive one.
struct MaclModel {
    TrainConfig config;
    int n_train_reports = 0;
    int n_codes = 0;

    nn::Var emb_rc_reports, emb_rc_codes; // interaction-view tables
    nn::Var emb_rr, emb_cc;               // similarity/co-citation view tables
    std::vector<nn::GatLayer> enc_rc, enc_rr, enc_cc;
    MlpHead head_report_p, head_report_q, head_code_p, head_code_q;

    // Alternating-stage parameter partition: the ranking stage owns the
    // interaction view; the contrastive stage owns the other two views and
    // every head.
    std::vector<nn::Parameter> stage_fl;
    std::vector<nn::Parameter> stage_cl;
};

MaclModel init_model(const TrainConfig& cfg, int n_train_reports, int n_codes);

// L attention layers with dropout between them (training only).
nn::Var run_encoder(const std::vector<nn::GatLayer>& enc, nn::Var feats,
                    const nn::NeighborIndex& idx, bool training, double dropout_p,
                    Rng* dropout_rng);

struct RcEncoding {
    nn::Var reports; // (n_train_reports, d)
    nn::Var codes;   // (n_codes, d)
};
RcEncoding encode_rc(const MaclModel& model, const nn::NeighborIndex& rc_idx, bool training,
                     Rng* dropout_rng);
// extra_nodes appends that many zero-embedding rows (attached unseen reports).
nn::Var encode_rr(const MaclModel& model, const nn::NeighborIndex& rr_idx, bool training,
                  Rng* dropout_rng, int extra_nodes = 0);
nn::Var encode_cc(const MaclModel& model, const nn::NeighborIndex& cc_idx, bool training,
                  Rng* dropout_rng);

// Relevance of one code row to one report row: plain dot product.
double score(const std::vector<double>& z_r, const std::vector<double>& z_c);

// Softmax cross-entropy over all candidates, accumulated over every observed
// (report, fixed file) pair; mean_over_pairs divides by the pair count.
nn::Var loss_fl(const nn::Var& scores, const std::vector<std::vector<int>>& positives,
                bool mean_over_pairs = true);

// Mean per-anchor contrastive term over a square cosine-similarity matrix
// whose rows are one space's projections and columns the other's: the term
// rewards the diagonal against the off-diagonal alternatives; the printed
// form excludes the diagonal from the denominator (canonical includes it).
nn::Var nce_from_sim(const nn::Var& sim, double tau, bool canonical = false);

// Contrastive alignment loss. variant selects which sides contribute:
// v1 = report side only, v2 = code side only, full = sum of both.
nn::Var loss_cl(const nn::Var& zp_r, const nn::Var& zq_r, const nn::Var& zp_c,
                const nn::Var& zq_c, double tau, const std::string& variant = "full",
                bool canonical = false);

nn::Var total_loss(const nn::Var& l_fl, const nn::Var& l_cl, double lambda);

// One training-log row; stage is "fl" or "cl". Validation columns are only
// meaningful on the last row of an epoch (has_val).
struct EpochRow {
    int epoch = 0;
    std::string stage;
    double l_fl = 0.0;
    double l_cl = 0.0;
    bool has_cl = false;
    double total = 0.0;
    double val_mrr = 0.0;
    double val_acc1 = 0.0;
    bool has_val = false;
    double train_acc1 = 0.0;
    long elapsed_ms = 0;
};

void write_training_log_csv(const std::vector<EpochRow>& log, const std::string& path);

// Everything needed to rank new reports: trained parameters plus the frozen
// corpus-side state (catalog, embedder, training vectors, graphs, fix
// frequencies). This is exactly what the checkpoint persists.
struct Ranker {
    TrainConfig config;
    SimilarityPolicy policy;
    FileCatalog catalog;
    TfidfEmbedder embedder;
    std::vector<std::string> train_report_ids;
    std::vector<TextVector> train_report_vecs;
    View rr_view; // over training reports
    View cc_view;
    std::vector<double> fix_counts; // per code node, training fix frequency
    MaclModel model;

    RankedList rank(const BugReport& report) const;
    std::vector<RankedList> rank_batch(const std::vector<BugReport>& reports) const;
};

struct TrainOutcome {
    Ranker ranker;
    std::vector<EpochRow> log;
    int best_epoch = 0;    // epoch whose parameters were kept
    double best_val_mrr = 0.0;
};

// Builds embedder, vectors, and views from the training range, then runs the
// alternating two-stage loop with early stopping on validation MRR.
TrainOutcome train_model(const Corpus& corpus, const Split& split, const TrainConfig& cfg,
                         const SimilarityPolicy& policy = {});

// Tokens a catalog file contributes as text: its path, tokenized.
std::vector<std::string> file_tokens(const std::string& path);

} // namespace macl
