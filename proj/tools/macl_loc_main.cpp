// macl-loc: train and query the multi-view fault-localization ranker.
#include "macl/checkpoint.hpp"
#include "macl/corpus.hpp"
#include "macl/errors.hpp"
#include "macl/eval.hpp"
#include "macl/model.hpp"
#include "macl/synth.hpp"
#include "macl/textsim.hpp"
#include "macl/views.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace macl;

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
    std::vector<std::uint64_t> seeds;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        seeds.push_back(std::stoull(item));
    }
    if (seeds.empty()) throw ContractViolation("empty seed list: " + text);
    return seeds;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(std::stoi(item));
    }
    if (out.empty()) throw ContractViolation("empty list: " + text);
    return out;
}

std::string project_name(const std::string& corpus_path) {
    return std::filesystem::path(corpus_path).stem().string();
}

// Flat key=value configuration-file support for one subcommand. CLI11 only
// processes set_config on the root application, so the merge is done by hand
// in a parse-complete callback: a file key fills an option's value only when
// that option was absent from the command line.
void attach_config_file(CLI::App* cmd) {
    auto file = std::make_shared<std::string>();
    CLI::Option* config_opt =
        cmd->add_option("--config", *file, "Flat key=value configuration file");
    cmd->parse_complete_callback([cmd, file, config_opt] {
        if (file->empty()) return;
        std::ifstream in(*file);
        if (!in) throw ContractViolation("cannot open configuration file: " + *file);
        auto trim = [](const std::string& s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            const std::string stripped = trim(line);
            if (stripped.empty() || stripped[0] == '#') continue;
            const std::string where = *file + ":" + std::to_string(line_no);
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ContractViolation(where + ": expected key=value");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty()) throw ContractViolation(where + ": empty key");
            CLI::Option* opt = cmd->get_option_no_throw("--" + key);
            if (opt == nullptr || opt == config_opt)
                throw ContractViolation(where + ": unknown configuration key: " + key);
            if (opt->count() > 0) continue; // the command line wins
            opt->add_result(value);
            opt->run_callback();
        }
    });
}

// Attaches the shared hyperparameter flags (and flat key=value config-file
// support; command-line values win over file values) to a subcommand.
void add_train_options(CLI::App* cmd, TrainConfig& cfg, SimilarityPolicy& policy) {
    attach_config_file(cmd);
    cmd->add_option("--layers", cfg.layers, "Encoder depth (1..5)")->capture_default_str();
    cmd->add_option("--dim", cfg.d, "Embedding width")->capture_default_str();
    cmd->add_option("--lr", cfg.lr, "Learning rate")->capture_default_str();
    cmd->add_option("--dropout", cfg.dropout, "Dropout rate between encoder layers")
        ->capture_default_str();
    cmd->add_option("--tau", cfg.tau, "Contrastive temperature")->capture_default_str();
    cmd->add_option("--lambda", cfg.lambda, "Contrastive weight in the total loss")
        ->capture_default_str();
    cmd->add_option("--max-epochs", cfg.max_epochs, "Maximum training epochs")
        ->capture_default_str();
    cmd->add_option("--patience", cfg.patience, "Early-stopping patience (epochs)")
        ->capture_default_str();
    cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
    cmd->add_option("--variant", cfg.variant, "Training variant: v0 | v1 | v2 | full")
        ->capture_default_str();
    cmd->add_flag("--fl-sum", [&cfg](std::int64_t) { cfg.fl_mean = false; },
                  "Sum (instead of average) the ranking loss over observed pairs");
    cmd->add_flag("--canonical-nce", cfg.canonical_nce,
                  "Include the positive pair in the contrastive denominator");
    cmd->add_flag("--stop-on-perfect-train-acc", cfg.stop_on_perfect_train_acc,
                  "Halt once training Accuracy@1 reaches 1.0");
    cmd->add_option("--top-k", policy.top_k, "Report-similarity neighbors per node")
        ->capture_default_str();
    cmd->add_option("--floor", policy.floor, "Report-similarity admission floor")
        ->capture_default_str();
}

struct MetricsRow {
    std::string project;
    std::string variant;
    int layers = 0;
    std::uint64_t seed = 0;
    double acc1 = 0, acc5 = 0, acc10 = 0, map = 0, mrr = 0;
};

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ContractViolation("cannot write metrics file: " + path);
    out.precision(17);
    out << "project,variant,layers,seed,acc1,acc5,acc10,map,mrr\n";
    for (const MetricsRow& r : rows)
        out << r.project << "," << r.variant << "," << r.layers << "," << r.seed << "," << r.acc1
            << "," << r.acc5 << "," << r.acc10 << "," << r.map << "," << r.mrr << "\n";
}

struct EvalResult {
    std::vector<RankingOutcome> outcomes;
    std::vector<double> reciprocal_ranks; // per report, evaluation order
};

EvalResult evaluate_split(const Ranker& ranker, const Corpus& corpus,
                          const std::vector<int>& indices) {
    if (indices.empty()) throw ContractViolation("evaluate: selected split is empty");
    std::vector<BugReport> reports;
    reports.reserve(indices.size());
    for (int i : indices) reports.push_back(corpus.reports[i]);

    const std::vector<RankedList> ranked = ranker.rank_batch(reports);

    EvalResult res;
    for (std::size_t u = 0; u < ranked.size(); ++u) {
        RankingOutcome o;
        o.ranked_ids.reserve(ranked[u].entries.size());
        for (const auto& [id, s] : ranked[u].entries) o.ranked_ids.push_back(id);
        for (const std::string& path : reports[u].fixed_paths) {
            auto it = ranker.catalog.entries.find(path);
            if (it != ranker.catalog.entries.end()) o.relevant.insert(it->second);
        }
        if (o.relevant.empty())
            throw ContractViolation("evaluate: report " + reports[u].id +
                                    " has no catalog-resolvable ground truth");
        res.reciprocal_ranks.push_back(reciprocal_rank(o.ranked_ids, o.relevant));
        res.outcomes.push_back(std::move(o));
    }
    return res;
}

MetricsRow metrics_from_outcomes(const std::vector<RankingOutcome>& outcomes) {
    MetricsRow row;
    row.acc1 = accuracy_at_n(outcomes, 1);
    row.acc5 = accuracy_at_n(outcomes, 5);
    row.acc10 = accuracy_at_n(outcomes, 10);
    row.map = mean_average_precision(outcomes);
    row.mrr = mean_reciprocal_rank(outcomes);
    return row;
}

void print_metrics(std::ostream& os, const MetricsRow& m) {
    os.precision(6);
    os << "acc@1=" << m.acc1 << " acc@5=" << m.acc5 << " acc@10=" << m.acc10 << " map=" << m.map
       << " mrr=" << m.mrr << "\n";
}

const std::vector<int>& pick_split(const Split& split, const std::string& name) {
    if (name == "train") return split.train;
    if (name == "validation") return split.validation;
    if (name == "test") return split.test;
    throw ContractViolation("unknown split name: " + name);
}

BugReport report_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ContractViolation("cannot open report file: " + path);
    nlohmann::json rec;
    try {
        rec = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path, 1, e.what());
    }
    if (!rec.is_object()) throw ParseError(path, 1, "report must be a JSON object");
    BugReport r;
    r.id = rec.value("id", std::string("query"));
    r.summary = rec.value("summary", std::string());
    r.description = rec.value("description", std::string());
    if (r.summary.empty() && r.description.empty())
        throw ContractViolation("report has neither summary nor description: " + path);
    return r;
}

// ---- subcommand bodies ----

int cmd_ingest(const std::string& reports_path, const std::vector<std::string>& snapshots,
               const std::string& out_path) {
    Corpus corpus = load_corpus(reports_path, snapshots);
    const std::size_t raw = corpus.reports.size();
    corpus = filter_reports(corpus);
    Split split = chronological_split(corpus);
    split = filter_eval_reports(split, corpus);
    save_corpus_bundle(out_path, corpus, split);
    std::cout << "reports=" << corpus.reports.size() << " (dropped " << raw - corpus.reports.size()
              << ") files=" << corpus.catalog.node_count() << " train=" << split.train.size()
              << " validation=" << split.validation.size() << " test=" << split.test.size()
              << " -> " << out_path << "\n";
    return 0;
}

int cmd_build_views(const std::string& corpus_path, const std::string& out_dir,
                    const SimilarityPolicy& policy) {
    Corpus corpus;
    Split split;
    load_corpus_bundle(corpus_path, corpus, split);

    const int m = static_cast<int>(split.train.size());
    std::vector<std::vector<std::string>> docs;
    for (int i : split.train) docs.push_back(preprocess(corpus.reports[i].text()));
    for (const std::string& path : corpus.catalog.paths) docs.push_back(file_tokens(path));
    TfidfEmbedder embedder = TfidfEmbedder::fit(docs);
    std::vector<TextVector> train_vecs, file_vecs;
    for (int t = 0; t < m; ++t) train_vecs.push_back(embedder.embed(docs[t]));
    for (int j = 0; j < corpus.catalog.node_count(); ++j)
        file_vecs.push_back(embedder.embed(docs[m + j]));

    std::filesystem::create_directories(out_dir);
    const View rc = build_report_code(corpus, split.train, train_vecs, file_vecs);
    const View rr = build_report_report(train_vecs, policy);
    const View cc = build_code_code(corpus, split.train);
    dump_view_csv(rc, out_dir + "/rc.csv");
    dump_view_csv(rr, out_dir + "/rr.csv");
    dump_view_csv(cc, out_dir + "/cc.csv");
    std::cout << "rc_edges=" << rc.edge_count() << " rr_edges=" << rr.edge_count()
              << " cc_edges=" << cc.edge_count() << " -> " << out_dir << "\n";
    return 0;
}

int cmd_train(const std::string& corpus_path, const std::string& out_path,
              const std::string& log_path, const TrainConfig& cfg,
              const SimilarityPolicy& policy) {
    Corpus corpus;
    Split split;
    load_corpus_bundle(corpus_path, corpus, split);
    TrainOutcome outcome = train_model(corpus, split, cfg, policy);
    save_checkpoint(out_path, outcome.ranker);
    if (!log_path.empty()) write_training_log_csv(outcome.log, log_path);
    std::cout.precision(6);
    std::cout << "epochs=" << (outcome.log.empty() ? 0 : outcome.log.back().epoch)
              << " best_epoch=" << outcome.best_epoch << " best_val_mrr=" << outcome.best_val_mrr
              << " train_acc1=" << (outcome.log.empty() ? 0.0 : outcome.log.back().train_acc1)
              << " -> " << out_path << "\n";
    return 0;
}

int cmd_rank(const std::string& model_path, const std::string& report_path,
             const std::string& text, int top, const std::string& out_path) {
    if (report_path.empty() == text.empty())
        throw ContractViolation("rank: provide exactly one of --report or --text");
    BugReport r;
    if (!report_path.empty()) {
        r = report_from_json_file(report_path);
    } else {
        r.id = "query";
        r.summary = text;
    }
    const Ranker ranker = load_checkpoint(model_path);
    const RankedList ranked = ranker.rank(r);

    std::ostringstream os;
    os.precision(17);
    os << "rank\tfile\tscore\tfallback\n";
    const int n = top > 0 ? std::min<int>(top, static_cast<int>(ranked.entries.size()))
                          : static_cast<int>(ranked.entries.size());
    for (int i = 0; i < n; ++i) {
        const auto& [id, s] = ranked.entries[i];
        os << (i + 1) << "\t" << ranker.catalog.paths[id] << "\t" << s << "\t"
           << (ranked.fallback ? 1 : 0) << "\n";
    }
    if (out_path.empty()) {
        std::cout << os.str();
    } else {
        std::ofstream f(out_path);
        if (!f) throw ContractViolation("cannot write ranking: " + out_path);
        f << os.str();
    }
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& corpus_path,
                 const std::string& split_name, const std::string& out_path) {
    const Ranker ranker = load_checkpoint(model_path);
    Corpus corpus;
    Split split;
    load_corpus_bundle(corpus_path, corpus, split);

    const EvalResult res = evaluate_split(ranker, corpus, pick_split(split, split_name));
    MetricsRow row = metrics_from_outcomes(res.outcomes);
    row.project = project_name(corpus_path);
    row.variant = ranker.config.variant;
    row.layers = ranker.config.layers;
    row.seed = ranker.config.seed;
    if (!out_path.empty()) write_metrics_csv({row}, out_path);
    std::cout << "split=" << split_name << " n=" << res.outcomes.size() << " ";
    print_metrics(std::cout, row);
    return 0;
}

int cmd_ablate(const std::string& corpus_path, const std::string& seeds_text,
               const std::string& metrics_path, const std::string& comparison_path,
               TrainConfig cfg, const SimilarityPolicy& policy) {
    Corpus corpus;
    Split split;
    load_corpus_bundle(corpus_path, corpus, split);
    const std::vector<std::uint64_t> seeds = parse_seed_list(seeds_text);
    const std::vector<std::string> variants = {"full", "v0", "v1", "v2"};
    const std::string project = project_name(corpus_path);

    std::vector<MetricsRow> rows;
    std::map<std::string, std::vector<double>> rr_pool; // variant -> (seed, report) RRs
    for (const std::string& variant : variants) {
        for (std::uint64_t seed : seeds) {
            cfg.variant = variant;
            cfg.seed = seed;
            TrainOutcome outcome = train_model(corpus, split, cfg, policy);
            const EvalResult res = evaluate_split(outcome.ranker, corpus, split.test);
            MetricsRow row = metrics_from_outcomes(res.outcomes);
            row.project = project;
            row.variant = variant;
            row.layers = cfg.layers;
            row.seed = seed;
            rows.push_back(row);
            auto& pool = rr_pool[variant];
            pool.insert(pool.end(), res.reciprocal_ranks.begin(), res.reciprocal_ranks.end());
            std::cout << "variant=" << variant << " seed=" << seed << " ";
            print_metrics(std::cout, row);
        }
    }
    write_metrics_csv(rows, metrics_path);

    std::ofstream cmp(comparison_path);
    if (!cmp) throw ContractViolation("cannot write comparison file: " + comparison_path);
    cmp.precision(17);
    cmp << "baseline,p_value,delta,band\n";
    for (const char* baseline : {"v0", "v1", "v2"}) {
        const std::vector<double>& full_rr = rr_pool["full"];
        const std::vector<double>& base_rr = rr_pool[baseline];
        std::string p_text;
        try {
            p_text = [&] {
                const WilcoxonResult w = wilcoxon_signed_rank(full_rr, base_rr);
                std::ostringstream os;
                os.precision(17);
                os << w.p_value;
                return os.str();
            }();
        } catch (const ContractViolation& e) {
            std::cerr << "comparison full vs " << baseline << ": " << e.what() << "\n";
            p_text = ""; // degenerate or too-small comparison: no p-value
        }
        const CliffsResult c = cliffs_delta(full_rr, base_rr);
        cmp << baseline << "," << p_text << "," << c.delta << "," << c.band << "\n";
        std::cout << "full_vs_" << baseline << " p=" << (p_text.empty() ? "n/a" : p_text)
                  << " delta=" << c.delta << " band=" << c.band << "\n";
    }
    return 0;
}

int cmd_depth_sweep(const std::string& corpus_path, const std::string& layers_text,
                    const std::string& seeds_text, const std::string& out_path, TrainConfig cfg,
                    const SimilarityPolicy& policy) {
    Corpus corpus;
    Split split;
    load_corpus_bundle(corpus_path, corpus, split);
    const std::vector<int> layer_values = parse_int_list(layers_text);
    const std::vector<std::uint64_t> seeds = parse_seed_list(seeds_text);
    const std::string project = project_name(corpus_path);

    std::vector<MetricsRow> rows;
    for (int layers : layer_values) {
        double mrr_sum = 0.0;
        for (std::uint64_t seed : seeds) {
            cfg.layers = layers;
            cfg.seed = seed;
            TrainOutcome outcome = train_model(corpus, split, cfg, policy);
            const EvalResult res = evaluate_split(outcome.ranker, corpus, split.test);
            MetricsRow row = metrics_from_outcomes(res.outcomes);
            row.project = project;
            row.variant = cfg.variant;
            row.layers = layers;
            row.seed = seed;
            rows.push_back(row);
            mrr_sum += row.mrr;
        }
        std::cout.precision(6);
        std::cout << "layers=" << layers << " mean_test_mrr=" << mrr_sum / seeds.size() << "\n";
    }
    write_metrics_csv(rows, out_path);
    return 0;
}

int cmd_synth(const SyntheticSpec& spec, const std::string& out_dir) {
    const SyntheticCorpus corpus = generate_synthetic(spec);
    write_synthetic(corpus, out_dir);
    std::cout << "reports=" << corpus.reports.size() << " files=" << corpus.files.size() << " -> "
              << out_dir << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-view fault localization: ingest bug corpora, train the ranker, "
                 "rank files for new reports, and evaluate"};
    app.require_subcommand(1);

    // ingest
    std::string in_reports, in_out;
    std::vector<std::string> in_snapshots;
    CLI::App* ingest = app.add_subcommand("ingest", "Parse, filter, and split a bug corpus");
    ingest->add_option("--reports", in_reports, "JSON-Lines bug report file")->required();
    ingest->add_option("--snapshot", in_snapshots,
                       "Repository file listing (repeat in chronological order)")
        ->required();
    ingest->add_option("--out", in_out, "Output corpus bundle (JSON)")->required();

    // build-views
    std::string bv_corpus, bv_out;
    SimilarityPolicy bv_policy;
    CLI::App* build_views = app.add_subcommand("build-views", "Export the three graphs as CSV");
    build_views->add_option("--corpus", bv_corpus, "Corpus bundle from ingest")->required();
    build_views->add_option("--out", bv_out, "Output directory")->required();
    build_views->add_option("--top-k", bv_policy.top_k, "Report-similarity neighbors per node")
        ->capture_default_str();
    build_views->add_option("--floor", bv_policy.floor, "Report-similarity admission floor")
        ->capture_default_str();
    attach_config_file(build_views);

    // train
    std::string tr_corpus, tr_out, tr_log;
    TrainConfig tr_cfg;
    SimilarityPolicy tr_policy;
    CLI::App* train = app.add_subcommand("train", "Train a ranker and write a checkpoint");
    train->add_option("--corpus", tr_corpus, "Corpus bundle from ingest")->required();
    train->add_option("--out", tr_out, "Output checkpoint file")->required();
    train->add_option("--log", tr_log, "Training log CSV");
    add_train_options(train, tr_cfg, tr_policy);

    // rank
    std::string rk_model, rk_report, rk_text, rk_out;
    int rk_top = 10;
    CLI::App* rank = app.add_subcommand("rank", "Rank catalog files for one bug report");
    rank->add_option("--model", rk_model, "Checkpoint file")->required();
    rank->add_option("--report", rk_report, "Bug report JSON file");
    rank->add_option("--text", rk_text, "Raw report text instead of a file");
    rank->add_option("--top", rk_top, "Rows to print (0 = all)")->capture_default_str();
    rank->add_option("--out", rk_out, "Write TSV here instead of stdout");

    // evaluate
    std::string ev_model, ev_corpus, ev_split = "test", ev_out;
    CLI::App* evaluate = app.add_subcommand("evaluate", "Score a checkpoint on a corpus split");
    evaluate->add_option("--model", ev_model, "Checkpoint file")->required();
    evaluate->add_option("--corpus", ev_corpus, "Corpus bundle from ingest")->required();
    evaluate->add_option("--split", ev_split, "train | validation | test")->capture_default_str();
    evaluate->add_option("--out", ev_out, "Metrics CSV");

    // ablate
    std::string ab_corpus, ab_seeds = "1,2,3,4,5", ab_metrics, ab_comparison;
    TrainConfig ab_cfg;
    SimilarityPolicy ab_policy;
    CLI::App* ablate =
        app.add_subcommand("ablate", "Train every variant across seeds and compare to full");
    ablate->add_option("--corpus", ab_corpus, "Corpus bundle from ingest")->required();
    ablate->add_option("--seeds", ab_seeds, "Comma-separated seed list")->capture_default_str();
    ablate->add_option("--out-metrics", ab_metrics, "Per-run metrics CSV")->required();
    ablate->add_option("--out-comparison", ab_comparison, "Paired-comparison CSV")->required();
    add_train_options(ablate, ab_cfg, ab_policy);

    // depth-sweep
    std::string ds_corpus, ds_layers = "1,2,3,4,5", ds_seeds = "1,2,3", ds_out;
    TrainConfig ds_cfg;
    SimilarityPolicy ds_policy;
    CLI::App* depth = app.add_subcommand("depth-sweep", "Train across encoder depths");
    depth->add_option("--corpus", ds_corpus, "Corpus bundle from ingest")->required();
    depth->add_option("--layers-list", ds_layers, "Comma-separated depth list")
        ->capture_default_str();
    depth->add_option("--seeds", ds_seeds, "Comma-separated seed list")->capture_default_str();
    depth->add_option("--out", ds_out, "Per-run metrics CSV")->required();
    add_train_options(depth, ds_cfg, ds_policy);

    // synth
    SyntheticSpec sy_spec;
    std::string sy_out;
    CLI::App* synth = app.add_subcommand("synth", "Generate a clustered synthetic corpus");
    synth->add_option("--clusters", sy_spec.n_clusters, "Topic clusters")->capture_default_str();
    synth->add_option("--reports-per-cluster", sy_spec.reports_per_cluster, "Reports per cluster")
        ->capture_default_str();
    synth->add_option("--files-per-cluster", sy_spec.files_per_cluster, "Files per cluster")
        ->capture_default_str();
    synth->add_option("--vocab", sy_spec.vocab_size, "Words per cluster pool")
        ->capture_default_str();
    synth->add_option("--noise", sy_spec.noise_rate, "Off-topic token rate [0,1)")
        ->capture_default_str();
    synth->add_option("--seed", sy_spec.seed, "Random seed")->capture_default_str();
    synth->add_option("--out", sy_out, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const ContractViolation& e) { // e.g. a bad configuration file
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*ingest) return cmd_ingest(in_reports, in_snapshots, in_out);
        if (*build_views) return cmd_build_views(bv_corpus, bv_out, bv_policy);
        if (*train) return cmd_train(tr_corpus, tr_out, tr_log, tr_cfg, tr_policy);
        if (*rank) return cmd_rank(rk_model, rk_report, rk_text, rk_top, rk_out);
        if (*evaluate) return cmd_evaluate(ev_model, ev_corpus, ev_split, ev_out);
        if (*ablate)
            return cmd_ablate(ab_corpus, ab_seeds, ab_metrics, ab_comparison, ab_cfg, ab_policy);
        if (*depth)
            return cmd_depth_sweep(ds_corpus, ds_layers, ds_seeds, ds_out, ds_cfg, ds_policy);
        if (*synth) return cmd_synth(sy_spec, sy_out);
    } catch (const NumericFault& e) {
        std::cerr << "numeric fault: " << e.what() << "\n";
        return 3;
    } catch (const ContractViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
