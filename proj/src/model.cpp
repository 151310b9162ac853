#include "macl/model.hpp"

#include "macl/errors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <memory>
#include <set>

namespace macl {

using nn::Var;

namespace {

Tensor uniform_table(int rows, int cols, Rng& rng) {
    Tensor t(rows, cols);
    const double bound = 1.0 / std::sqrt(static_cast<double>(cols));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
    return t;
}

// Near-identity init: the heads start as (almost) pass-throughs so that
// head-space cosine ranking works from the first epoch and contrastive
// training only has to refine the alignment, not invent it.
MlpHead make_head(std::string name, int d, Rng& rng) {
    Tensor w1(d, d), w2(d, d);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) w1(r, c) = (r == c ? 1.0 : 0.0) + rng.uniform(-0.02, 0.02);
    for (int r = 0; r < d; ++r)
        for (int c = 0; c < d; ++c) w2(r, c) = (r == c ? 1.0 : 0.0) + rng.uniform(-0.02, 0.02);
    MlpHead h;
    h.name = std::move(name);
    h.W1 = nn::leaf(std::move(w1));
    h.b1 = nn::leaf(Tensor(1, d));
    h.W2 = nn::leaf(std::move(w2));
    h.b2 = nn::leaf(Tensor(1, d));
    return h;
}

void register_head(std::vector<nn::Parameter>& out, const MlpHead& h) {
    out.push_back(nn::make_parameter(h.name + ".W1", h.W1));
    out.push_back(nn::make_parameter(h.name + ".b1", h.b1));
    out.push_back(nn::make_parameter(h.name + ".W2", h.W2));
    out.push_back(nn::make_parameter(h.name + ".b2", h.b2));
}

void register_encoder(std::vector<nn::Parameter>& out, const std::vector<nn::GatLayer>& enc) {
    for (const nn::GatLayer& l : enc) {
        out.push_back(nn::make_parameter(l.name + ".W", l.W));
        out.push_back(nn::make_parameter(l.name + ".a_src", l.a_src));
        out.push_back(nn::make_parameter(l.name + ".a_dst", l.a_dst));
    }
}

std::vector<nn::GatLayer> make_encoder(const std::string& name, int layers, int d, Rng& rng) {
    std::vector<nn::GatLayer> enc;
    enc.reserve(layers);
    for (int l = 0; l < layers; ++l)
        enc.push_back(nn::make_gat_layer(name + "." + std::to_string(l), d, d, rng));
    return enc;
}

double tensor_value(const Var& v) { return v->val.item(); }

// Scores (one report row vs. every code row) -> full ranking with the
// (score desc, id asc) tie rule.
std::vector<std::pair<int, double>> rank_scores(const std::vector<double>& scores) {
    std::vector<std::pair<int, double>> entries(scores.size());
    for (std::size_t j = 0; j < scores.size(); ++j)
        entries[j] = {static_cast<int>(j), scores[j]};
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return entries;
}

double row_cosine(const double* a, const double* b, int d) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (int c = 0; c < d; ++c) {
        dot += a[c] * b[c];
        na += a[c] * a[c];
        nb += b[c] * b[c];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

// One attachment per unseen report, so a ranking never depends on which
// other reports happen to be scored alongside it.
std::vector<AttachResult> attach_each(const View& rr_view, const std::vector<TextVector>& vecs,
                                      const std::vector<TextVector>& train_vecs,
                                      const SimilarityPolicy& policy) {
    std::vector<AttachResult> atts;
    atts.reserve(vecs.size());
    for (const TextVector& v : vecs)
        atts.push_back(attach_unseen_reports(rr_view, {v}, train_vecs, policy));
    return atts;
}

// Rank each attached report in head space; isolated ones fall back to the
// training fix-frequency order. atts holds one single-report attachment each.
std::vector<RankedList> rank_attached(const MaclModel& model,
                                      const std::vector<AttachResult>& atts,
                                      const nn::NeighborIndex& cc_idx,
                                      const std::vector<double>& fix_counts,
                                      const std::vector<std::string>& ids) {
    if (atts.size() != ids.size())
        throw ContractViolation("rank_attached: id count mismatch");
    const int m = model.n_train_reports;

    Tensor z_codes; // code projections are query-independent; compute at most once
    bool codes_ready = false;

    std::vector<RankedList> out;
    out.reserve(atts.size());
    for (std::size_t u = 0; u < atts.size(); ++u) {
        const AttachResult& att = atts[u];
        if (att.view.n_reports != m + 1)
            throw ContractViolation("rank_attached: expected single-report attachments");
        RankedList rl;
        rl.report_id = ids[u];
        if (!att.isolated.empty()) {
            rl.fallback = true;
            rl.entries = rank_scores(fix_counts);
        } else {
            if (!codes_ready) {
                Var ec = encode_cc(model, cc_idx, false, nullptr);
                z_codes = head_forward(model.head_code_p, ec)->val;
                codes_ready = true;
            }
            const nn::NeighborIndex rr_idx = compile_index(att.view);
            Var er = encode_rr(model, rr_idx, false, nullptr, 1);
            const Tensor z_r = head_forward(model.head_report_p, er)->val;
            const int d = z_codes.cols();
            std::vector<double> scores(model.n_codes);
            const double* zr = z_r.row(m);
            for (int j = 0; j < model.n_codes; ++j)
                scores[j] = row_cosine(zr, z_codes.row(j), d);
            rl.entries = rank_scores(scores);
        }
        out.push_back(std::move(rl));
    }
    return out;
}

int first_hit_rank(const RankedList& rl, const std::set<int>& truth) {
    for (std::size_t pos = 0; pos < rl.entries.size(); ++pos)
        if (truth.count(rl.entries[pos].first)) return static_cast<int>(pos) + 1;
    return 0; // no true file present (cannot happen over a full catalog ranking)
}

} // namespace

void TrainConfig::validate() const {
    if (layers < 1 || layers > 5) throw ContractViolation("config: layers must be in 1..5");
    if (d < 1) throw ContractViolation("config: d must be positive");
    if (lr <= 0.0) throw ContractViolation("config: lr must be positive");
    if (dropout < 0.0 || dropout >= 1.0) throw ContractViolation("config: dropout must be in [0, 1)");
    if (tau <= 0.0) throw ContractViolation("config: tau must be positive");
    if (lambda < 0.0) throw ContractViolation("config: lambda must be nonnegative");
    if (max_epochs < 1) throw ContractViolation("config: max_epochs must be positive");
    if (patience < 1) throw ContractViolation("config: patience must be positive");
    if (variant != "v0" && variant != "v1" && variant != "v2" && variant != "full")
        throw ContractViolation("config: variant must be one of v0, v1, v2, full");
}

Var head_forward(const MlpHead& head, const Var& x) {
    Var hidden = nn::elu(nn::add_rowvec(nn::matmul(x, head.W1), head.b1));
    return nn::add_rowvec(nn::matmul(hidden, head.W2), head.b2);
}

MaclModel init_model(const TrainConfig& cfg, int n_train_reports, int n_codes) {
    cfg.validate();
    if (n_train_reports < 1 || n_codes < 1)
        throw ContractViolation("init_model: node counts must be positive");

    MaclModel m;
    m.config = cfg;
    m.n_train_reports = n_train_reports;
    m.n_codes = n_codes;

    Rng rng(stream_seed(cfg.seed, "init"));
    m.emb_rc_reports = nn::leaf(uniform_table(n_train_reports, cfg.d, rng));
    m.emb_rc_codes = nn::leaf(uniform_table(n_codes, cfg.d, rng));
    m.emb_rr = nn::leaf(uniform_table(n_train_reports, cfg.d, rng));
    m.emb_cc = nn::leaf(uniform_table(n_codes, cfg.d, rng));
    m.enc_rc = make_encoder("enc_rc", cfg.layers, cfg.d, rng);
    m.enc_rr = make_encoder("enc_rr", cfg.layers, cfg.d, rng);
    m.enc_cc = make_encoder("enc_cc", cfg.layers, cfg.d, rng);
    m.head_report_p = make_head("head_report_p", cfg.d, rng);
    m.head_report_q = make_head("head_report_q", cfg.d, rng);
    m.head_code_p = make_head("head_code_p", cfg.d, rng);
    m.head_code_q = make_head("head_code_q", cfg.d, rng);

    m.stage_fl.push_back(nn::make_parameter("emb_rc_reports", m.emb_rc_reports));
    m.stage_fl.push_back(nn::make_parameter("emb_rc_codes", m.emb_rc_codes));
    register_encoder(m.stage_fl, m.enc_rc);

    m.stage_cl.push_back(nn::make_parameter("emb_rr", m.emb_rr));
    m.stage_cl.push_back(nn::make_parameter("emb_cc", m.emb_cc));
    register_encoder(m.stage_cl, m.enc_rr);
    register_encoder(m.stage_cl, m.enc_cc);
    register_head(m.stage_cl, m.head_report_p);
    register_head(m.stage_cl, m.head_report_q);
    register_head(m.stage_cl, m.head_code_p);
    register_head(m.stage_cl, m.head_code_q);
    return m;
}

Var run_encoder(const std::vector<nn::GatLayer>& enc, Var feats, const nn::NeighborIndex& idx,
                bool training, double dropout_p, Rng* dropout_rng) {
    if (training && dropout_p > 0.0 && dropout_rng == nullptr)
        throw ContractViolation("run_encoder: training mode needs a dropout stream");
    Var h = std::move(feats);
    for (std::size_t l = 0; l < enc.size(); ++l) {
        h = nn::gat_forward(enc[l], h, idx);
        if (training && dropout_p > 0.0 && l + 1 < enc.size())
            h = nn::dropout(h, dropout_p, true, *dropout_rng);
    }
    return h;
}

RcEncoding encode_rc(const MaclModel& model, const nn::NeighborIndex& rc_idx, bool training,
                     Rng* dropout_rng) {
    Var feats = nn::vstack(model.emb_rc_reports, model.emb_rc_codes);
    Var h = run_encoder(model.enc_rc, feats, rc_idx, training, model.config.dropout, dropout_rng);
    RcEncoding out;
    out.reports = nn::slice_rows(h, 0, model.n_train_reports);
    out.codes = nn::slice_rows(h, model.n_train_reports, model.n_train_reports + model.n_codes);
    return out;
}

Var encode_rr(const MaclModel& model, const nn::NeighborIndex& rr_idx, bool training,
              Rng* dropout_rng, int extra_nodes) {
    Var feats = model.emb_rr;
    if (extra_nodes > 0) {
        // Unseen reports start from a zero embedding: their representation is
        // a pure function of their neighbors.
        feats = nn::vstack(feats, nn::constant(Tensor(extra_nodes, model.config.d)));
    }
    return run_encoder(model.enc_rr, feats, rr_idx, training, model.config.dropout, dropout_rng);
}

Var encode_cc(const MaclModel& model, const nn::NeighborIndex& cc_idx, bool training,
              Rng* dropout_rng) {
    return run_encoder(model.enc_cc, model.emb_cc, cc_idx, training, model.config.dropout,
                       dropout_rng);
}

double score(const std::vector<double>& z_r, const std::vector<double>& z_c) {
    if (z_r.size() != z_c.size()) throw ContractViolation("score: dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < z_r.size(); ++i) dot += z_r[i] * z_c[i];
    return dot;
}

Var loss_fl(const Var& scores, const std::vector<std::vector<int>>& positives,
            bool mean_over_pairs) {
    const int m = scores->val.rows(), n = scores->val.cols();
    if (static_cast<int>(positives.size()) != m)
        throw ContractViolation("loss_fl: positives must cover every report row");

    std::size_t observed = 0;
    for (int r = 0; r < m; ++r) {
        if (positives[r].empty())
            throw ContractViolation("loss_fl: report row " + std::to_string(r) + " has no positives");
        for (int c : positives[r])
            if (c < 0 || c >= n) throw ContractViolation("loss_fl: positive index out of range");
        observed += positives[r].size();
    }
    const double denom = mean_over_pairs ? static_cast<double>(observed) : 1.0;

    // Row softmax probabilities, kept for backward.
    auto probs = std::make_shared<Tensor>(m, n);
    double loss = 0.0;
    for (int r = 0; r < m; ++r) {
        const double* s = scores->val.row(r);
        double mx = s[0];
        for (int j = 1; j < n; ++j) mx = std::max(mx, s[j]);
        double z = 0.0;
        double* p = probs->row(r);
        for (int j = 0; j < n; ++j) {
            p[j] = std::exp(s[j] - mx);
            z += p[j];
        }
        const double lse = mx + std::log(z);
        for (int j = 0; j < n; ++j) p[j] /= z;
        for (int c : positives[r]) loss += lse - s[c];
    }
    loss /= denom;

    auto pos = std::make_shared<std::vector<std::vector<int>>>(positives);
    auto node = std::make_shared<nn::Variable>();
    node->val = Tensor::scalar(loss);
    node->parents = {scores};
    node->requires_grad = scores->requires_grad;
    if (node->requires_grad) {
        node->backprop = [probs, pos, denom, m, n](nn::Variable& self) {
            nn::Variable& sp = *self.parents[0];
            sp.ensure_grad();
            const double g = self.grad(0, 0) / denom;
            for (int r = 0; r < m; ++r) {
                const double k_r = static_cast<double>((*pos)[r].size());
                const double* p = probs->row(r);
                double* d = sp.grad.row(r);
                for (int j = 0; j < n; ++j) d[j] += g * k_r * p[j];
                for (int c : (*pos)[r]) d[c] -= g;
            }
        };
    }
    return node;
}

Var nce_from_sim(const Var& sim, double tau, bool canonical) {
    const int n = sim->val.rows();
    if (n != sim->val.cols()) throw ContractViolation("nce_from_sim: similarity matrix must be square");
    if (n < 2) throw ContractViolation("nce_from_sim: need at least 2 anchors");
    if (tau <= 0.0) throw ContractViolation("nce_from_sim: tau must be positive");

    // Softmax over each row's denominator set, kept for backward.
    auto probs = std::make_shared<Tensor>(n, n);
    double loss = 0.0;
    for (int i = 0; i < n; ++i) {
        const double* s = sim->val.row(i);
        double mx = -std::numeric_limits<double>::infinity();
        for (int j = 0; j < n; ++j) {
            if (!canonical && j == i) continue;
            mx = std::max(mx, s[j] / tau);
        }
        double z = 0.0;
        double* p = probs->row(i);
        for (int j = 0; j < n; ++j) {
            if (!canonical && j == i) continue;
            p[j] = std::exp(s[j] / tau - mx);
            z += p[j];
        }
        const double lse = mx + std::log(z);
        for (int j = 0; j < n; ++j) {
            if (!canonical && j == i) continue;
            p[j] /= z;
        }
        loss += -s[i] / tau + lse;
    }
    loss /= n;

    auto node = std::make_shared<nn::Variable>();
    node->val = Tensor::scalar(loss);
    node->parents = {sim};
    node->requires_grad = sim->requires_grad;
    if (node->requires_grad) {
        node->backprop = [probs, tau, canonical, n](nn::Variable& self) {
            nn::Variable& sp = *self.parents[0];
            sp.ensure_grad();
            const double g = self.grad(0, 0) / (n * tau);
            for (int i = 0; i < n; ++i) {
                const double* p = probs->row(i);
                double* d = sp.grad.row(i);
                for (int j = 0; j < n; ++j) {
                    if (!canonical && j == i) continue;
                    d[j] += g * p[j];
                }
                d[i] -= g;
            }
        };
    }
    return node;
}

Var loss_cl(const Var& zp_r, const Var& zq_r, const Var& zp_c, const Var& zq_c, double tau,
            const std::string& variant, bool canonical) {
    if (variant == "v0") throw ContractViolation("loss_cl: variant v0 has no contrastive stage");
    auto side = [&](const Var& p, const Var& q) {
        if (p->val.rows() != q->val.rows() || p->val.cols() != q->val.cols())
            throw ContractViolation("loss_cl: projection shape mismatch");
        Var sim = nn::matmul_nt(nn::row_l2_normalize(p), nn::row_l2_normalize(q));
        return nce_from_sim(sim, tau, canonical);
    };
    if (variant == "v1") return side(zp_r, zq_r);
    if (variant == "v2") return side(zp_c, zq_c);
    if (variant == "full") return nn::add(side(zp_r, zq_r), side(zp_c, zq_c));
    throw ContractViolation("loss_cl: unknown variant " + variant);
}

Var total_loss(const Var& l_fl, const Var& l_cl, double lambda) {
    if (lambda < 0.0) throw ContractViolation("total_loss: lambda must be nonnegative");
    return nn::add_scaled(l_fl, l_cl, lambda);
}

void write_training_log_csv(const std::vector<EpochRow>& log, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractViolation("cannot write training log: " + path);
    out.precision(17);
    out << "epoch,stage,l_fl,l_cl,total,val_MRR,val_Acc@1,elapsed_ms\n";
    for (const EpochRow& row : log) {
        out << row.epoch << "," << row.stage << "," << row.l_fl << ",";
        if (row.has_cl) out << row.l_cl;
        out << "," << row.total << ",";
        if (row.has_val) out << row.val_mrr;
        out << ",";
        if (row.has_val) out << row.val_acc1;
        out << "," << row.elapsed_ms << "\n";
    }
}

std::vector<std::string> file_tokens(const std::string& path) { return preprocess(path); }

RankedList Ranker::rank(const BugReport& report) const { return rank_batch({report})[0]; }

std::vector<RankedList> Ranker::rank_batch(const std::vector<BugReport>& reports) const {
    std::vector<TextVector> vecs;
    std::vector<std::string> ids;
    vecs.reserve(reports.size());
    for (const BugReport& r : reports) {
        vecs.push_back(embedder.embed(preprocess(r.text())));
        ids.push_back(r.id);
    }
    const std::vector<AttachResult> atts =
        attach_each(rr_view, vecs, train_report_vecs, policy);
    const nn::NeighborIndex cc_idx = compile_index(cc_view);
    return rank_attached(model, atts, cc_idx, fix_counts, ids);
}

TrainOutcome train_model(const Corpus& corpus, const Split& split, const TrainConfig& cfg,
                         const SimilarityPolicy& policy) {
    cfg.validate();
    const int m = static_cast<int>(split.train.size());
    const int n = corpus.catalog.node_count();
    if (m < 2) throw ContractViolation("train_model: need at least 2 training reports");
    if (n < 1) throw ContractViolation("train_model: empty catalog");

    // Corpus-side state: embedder over training reports plus every file.
    std::vector<std::vector<std::string>> docs;
    docs.reserve(m + n);
    for (int i : split.train) docs.push_back(preprocess(corpus.reports[i].text()));
    for (const std::string& path : corpus.catalog.paths) docs.push_back(file_tokens(path));
    TfidfEmbedder embedder = TfidfEmbedder::fit(docs);

    std::vector<TextVector> train_vecs;
    train_vecs.reserve(m);
    for (int t = 0; t < m; ++t) train_vecs.push_back(embedder.embed(docs[t]));
    std::vector<TextVector> file_vecs;
    file_vecs.reserve(n);
    for (int j = 0; j < n; ++j) file_vecs.push_back(embedder.embed(docs[m + j]));

    const View rc_view = build_report_code(corpus, split.train, train_vecs, file_vecs);
    const View rr_view = build_report_report(train_vecs, policy);
    const View cc_view = build_code_code(corpus, split.train);
    const nn::NeighborIndex rc_idx = compile_index(rc_view);
    const nn::NeighborIndex rr_idx = compile_index(rr_view);
    const nn::NeighborIndex cc_idx = compile_index(cc_view);

    auto resolve = [&](const std::string& path) {
        auto it = corpus.catalog.entries.find(path);
        if (it == corpus.catalog.entries.end())
            throw ContractViolation("train_model: fixed path not in catalog: " + path +
                                    " (run the filtering step first)");
        return it->second;
    };

    std::vector<std::vector<int>> positives(m);
    std::vector<double> fix_counts(n, 0.0);
    for (int t = 0; t < m; ++t) {
        std::set<int> ids;
        for (const std::string& path : corpus.reports[split.train[t]].fixed_paths)
            ids.insert(resolve(path));
        positives[t].assign(ids.begin(), ids.end());
        for (int id : ids) fix_counts[id] += 1.0;
    }

    // Validation attachment is fixed for the whole run.
    std::vector<TextVector> val_vecs;
    std::vector<std::string> val_ids;
    std::vector<std::set<int>> val_truth;
    for (int i : split.validation) {
        const BugReport& r = corpus.reports[i];
        val_vecs.push_back(embedder.embed(preprocess(r.text())));
        val_ids.push_back(r.id);
        std::set<int> truth;
        for (const std::string& path : r.fixed_paths) truth.insert(resolve(path));
        val_truth.push_back(std::move(truth));
    }
    const bool has_val = !val_vecs.empty();
    std::vector<AttachResult> val_atts;
    if (has_val) val_atts = attach_each(rr_view, val_vecs, train_vecs, policy);

    MaclModel model = init_model(cfg, m, n);
    Rng drop_rng(stream_seed(cfg.seed, "dropout"));
    const nn::AdamConfig adam_cfg{cfg.lr, 0.9, 0.999, 1e-8};

    // Best-validation snapshot (parameter values only).
    std::vector<Tensor> best_params;
    auto snapshot = [&]() {
        best_params.clear();
        for (const nn::Parameter& p : model.stage_fl) best_params.push_back(p.node->val);
        for (const nn::Parameter& p : model.stage_cl) best_params.push_back(p.node->val);
    };
    auto restore = [&]() {
        std::size_t i = 0;
        for (nn::Parameter& p : model.stage_fl) {
            p.node->val = best_params[i++];
            p.node->grad = Tensor();
        }
        for (nn::Parameter& p : model.stage_cl) {
            p.node->val = best_params[i++];
            p.node->grad = Tensor();
        }
    };

    TrainOutcome outcome;
    double best_mrr = -1.0;
    int best_epoch = 0;
    int epochs_since_improvement = 0;

    for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
        const auto t0 = std::chrono::steady_clock::now();
        auto elapsed_ms = [&]() {
            return static_cast<long>(std::chrono::duration_cast<std::chrono::milliseconds>(
                                         std::chrono::steady_clock::now() - t0)
                                         .count());
        };

        // Ranking stage: interaction view only.
        double lfl_value;
        {
            RcEncoding enc = encode_rc(model, rc_idx, true, &drop_rng);
            Var scores = nn::matmul_nt(enc.reports, enc.codes);
            Var lfl = loss_fl(scores, positives, cfg.fl_mean);
            lfl_value = tensor_value(lfl);
            if (!std::isfinite(lfl_value))
                throw NumericFault("non-finite ranking loss at epoch " + std::to_string(epoch));
            nn::backward(lfl);
            nn::adam_step(adam_cfg, model.stage_fl);
        }
        EpochRow row_fl;
        row_fl.epoch = epoch;
        row_fl.stage = "fl";
        row_fl.l_fl = lfl_value;
        row_fl.total = lfl_value;
        row_fl.elapsed_ms = elapsed_ms();
        outcome.log.push_back(row_fl);

        // Contrastive stage: the other two views and all heads, against the
        // frozen interaction-view representations.
        if (cfg.variant != "v0") {
            RcEncoding frozen = encode_rc(model, rc_idx, false, nullptr);
            Var hq_r = nn::detach(frozen.reports);
            Var hq_c = nn::detach(frozen.codes);
            Var er = encode_rr(model, rr_idx, true, &drop_rng);
            Var ec = encode_cc(model, cc_idx, true, &drop_rng);
            Var zp_r = head_forward(model.head_report_p, er);
            Var zq_r = head_forward(model.head_report_q, hq_r);
            Var zp_c = head_forward(model.head_code_p, ec);
            Var zq_c = head_forward(model.head_code_q, hq_c);
            Var lcl = loss_cl(zp_r, zq_r, zp_c, zq_c, cfg.tau, cfg.variant, cfg.canonical_nce);
            const double lcl_value = tensor_value(lcl);
            if (!std::isfinite(lcl_value))
                throw NumericFault("non-finite contrastive loss at epoch " + std::to_string(epoch));
            Var objective = nn::scale(lcl, cfg.lambda);
            nn::backward(objective);
            nn::adam_step(adam_cfg, model.stage_cl);

            EpochRow row_cl;
            row_cl.epoch = epoch;
            row_cl.stage = "cl";
            row_cl.l_fl = lfl_value;
            row_cl.l_cl = lcl_value;
            row_cl.has_cl = true;
            row_cl.total = lfl_value + cfg.lambda * lcl_value;
            row_cl.elapsed_ms = elapsed_ms();
            outcome.log.push_back(row_cl);
        }

        EpochRow& last = outcome.log.back();

        // Training Accuracy@1 on the interaction-view scores (eval mode).
        {
            RcEncoding enc = encode_rc(model, rc_idx, false, nullptr);
            Var scores = nn::matmul_nt(enc.reports, enc.codes);
            int hits = 0;
            for (int r = 0; r < m; ++r) {
                const double* s = scores->val.row(r);
                int arg = 0;
                for (int j = 1; j < n; ++j)
                    if (s[j] > s[arg]) arg = j;
                if (std::find(positives[r].begin(), positives[r].end(), arg) != positives[r].end())
                    ++hits;
            }
            last.train_acc1 = static_cast<double>(hits) / m;
        }

        // Validation ranking in head space.
        if (has_val) {
            const std::vector<RankedList> ranked =
                rank_attached(model, val_atts, cc_idx, fix_counts, val_ids);
            double mrr = 0.0, acc1 = 0.0;
            for (std::size_t u = 0; u < ranked.size(); ++u) {
                const int first = first_hit_rank(ranked[u], val_truth[u]);
                if (first > 0) mrr += 1.0 / first;
                if (first == 1) acc1 += 1.0;
            }
            mrr /= ranked.size();
            acc1 /= ranked.size();
            last.val_mrr = mrr;
            last.val_acc1 = acc1;
            last.has_val = true;
            last.elapsed_ms = elapsed_ms();

            if (mrr > best_mrr) {
                best_mrr = mrr;
                best_epoch = epoch;
                epochs_since_improvement = 0;
                snapshot();
            } else {
                ++epochs_since_improvement;
            }
        } else {
            best_epoch = epoch;
            last.elapsed_ms = elapsed_ms();
        }

        if (cfg.stop_on_perfect_train_acc && last.train_acc1 == 1.0) {
            if (has_val && best_params.empty()) snapshot();
            break;
        }
        if (has_val && epochs_since_improvement >= cfg.patience) break;
    }

    if (has_val && !best_params.empty()) restore();

    outcome.best_epoch = best_epoch;
    outcome.best_val_mrr = has_val ? best_mrr : 0.0;

    Ranker& ranker = outcome.ranker;
    ranker.config = cfg;
    ranker.policy = policy;
    ranker.catalog = corpus.catalog;
    ranker.embedder = std::move(embedder);
    for (int i : split.train) ranker.train_report_ids.push_back(corpus.reports[i].id);
    ranker.train_report_vecs = std::move(train_vecs);
    ranker.rr_view = rr_view;
    ranker.cc_view = cc_view;
    ranker.fix_counts = std::move(fix_counts);
    ranker.model = std::move(model);
    return outcome;
}

} // namespace macl
