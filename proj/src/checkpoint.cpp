#include "macl/checkpoint.hpp"

#include "macl/errors.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <utility>

namespace macl {

namespace {

constexpr char kMagic[8] = {'M', 'A', 'C', 'L', 'C', 'K', 'P', 'T'};

// ---- little-endian primitive encoding ----

void put_u32(std::string& buf, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string& buf, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_i64(std::string& buf, std::int64_t v) { put_u64(buf, static_cast<std::uint64_t>(v)); }

void put_f64(std::string& buf, double v) { put_u64(buf, std::bit_cast<std::uint64_t>(v)); }

void put_str(std::string& buf, const std::string& s) {
    put_u32(buf, static_cast<std::uint32_t>(s.size()));
    buf.append(s);
}

class Reader {
public:
    Reader(const std::string& data, std::size_t pos = 0) : data_(data), pos_(pos) {}

    bool done() const { return pos_ >= data_.size(); }
    std::size_t pos() const { return pos_; }

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i)
            v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 4;
        return v;
    }

    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i)
            v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data_[pos_ + i])) << (8 * i);
        pos_ += 8;
        return v;
    }

    std::int64_t i64() { return static_cast<std::int64_t>(u64()); }
    double f64() { return std::bit_cast<double>(u64()); }

    std::string str() {
        const std::uint32_t len = u32();
        need(len);
        std::string s = data_.substr(pos_, len);
        pos_ += len;
        return s;
    }

    std::string bytes(std::size_t len) {
        need(len);
        std::string s = data_.substr(pos_, len);
        pos_ += len;
        return s;
    }

private:
    void need(std::size_t n) const {
        if (pos_ + n > data_.size()) throw ContractViolation("checkpoint: truncated file");
    }

    const std::string& data_;
    std::size_t pos_;
};

// ---- payload encodings ----

std::string format_double(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

std::string encode_matrix(const Tensor& t) {
    std::string buf;
    put_u32(buf, static_cast<std::uint32_t>(t.rows()));
    put_u32(buf, static_cast<std::uint32_t>(t.cols()));
    for (std::size_t i = 0; i < t.size(); ++i) put_f64(buf, t[i]);
    return buf;
}

Tensor decode_matrix(const std::string& payload) {
    Reader r(payload);
    const int rows = static_cast<int>(r.u32());
    const int cols = static_cast<int>(r.u32());
    Tensor t(rows, cols);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = r.f64();
    return t;
}

std::string encode_strings(const std::vector<std::string>& items) {
    std::string buf;
    put_u32(buf, static_cast<std::uint32_t>(items.size()));
    for (const std::string& s : items) put_str(buf, s);
    return buf;
}

std::vector<std::string> decode_strings(const std::string& payload) {
    Reader r(payload);
    const std::uint32_t count = r.u32();
    std::vector<std::string> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) out.push_back(r.str());
    return out;
}

std::string encode_i64s(const std::vector<std::int64_t>& items) {
    std::string buf;
    put_u32(buf, static_cast<std::uint32_t>(items.size()));
    for (std::int64_t v : items) put_i64(buf, v);
    return buf;
}

std::vector<std::int64_t> decode_i64s(const std::string& payload) {
    Reader r(payload);
    const std::uint32_t count = r.u32();
    std::vector<std::int64_t> out;
    out.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) out.push_back(r.i64());
    return out;
}

Tensor view_to_matrix(const View& view) {
    Tensor t(static_cast<int>(view.edge_count()), 3);
    int row = 0;
    for (const auto& [key, w] : view.edges) {
        t(row, 0) = static_cast<double>(key.first);
        t(row, 1) = static_cast<double>(key.second);
        t(row, 2) = w;
        ++row;
    }
    return t;
}

void matrix_to_view(const Tensor& t, View& view) {
    for (int row = 0; row < t.rows(); ++row) {
        view.edges[{static_cast<int>(t(row, 0)), static_cast<int>(t(row, 1))}] = t(row, 2);
    }
}

// ---- config text ----

std::string encode_config(const Ranker& ranker) {
    const TrainConfig& c = ranker.config;
    std::ostringstream os;
    os << "layers=" << c.layers << "\n";
    os << "d=" << c.d << "\n";
    os << "lr=" << format_double(c.lr) << "\n";
    os << "dropout=" << format_double(c.dropout) << "\n";
    os << "tau=" << format_double(c.tau) << "\n";
    os << "lambda=" << format_double(c.lambda) << "\n";
    os << "max_epochs=" << c.max_epochs << "\n";
    os << "patience=" << c.patience << "\n";
    os << "seed=" << c.seed << "\n";
    os << "variant=" << c.variant << "\n";
    os << "fl_mean=" << (c.fl_mean ? 1 : 0) << "\n";
    os << "canonical_nce=" << (c.canonical_nce ? 1 : 0) << "\n";
    os << "stop_on_perfect_train_acc=" << (c.stop_on_perfect_train_acc ? 1 : 0) << "\n";
    os << "policy.top_k=" << ranker.policy.top_k << "\n";
    os << "policy.floor=" << format_double(ranker.policy.floor) << "\n";
    os << "n_train_reports=" << ranker.model.n_train_reports << "\n";
    os << "n_codes=" << ranker.model.n_codes << "\n";
    return os.str();
}

std::map<std::string, std::string> parse_kv(const std::string& text) {
    std::map<std::string, std::string> out;
    std::istringstream is(text);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ContractViolation("checkpoint: malformed config line: " + line);
        out[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return out;
}

const std::string& kv_get(const std::map<std::string, std::string>& kv, const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw ContractViolation("checkpoint: config key missing: " + key);
    return it->second;
}

int kv_int(const std::map<std::string, std::string>& kv, const std::string& key) {
    return std::stoi(kv_get(kv, key));
}

double kv_double(const std::map<std::string, std::string>& kv, const std::string& key) {
    return std::strtod(kv_get(kv, key).c_str(), nullptr);
}

TextVector vector_from_row(const Tensor& t, int row) {
    TextVector v;
    v.values.assign(t.row(row), t.row(row) + t.cols());
    double sq = 0.0;
    for (double x : v.values) sq += x * x;
    v.norm = std::sqrt(sq);
    return v;
}

} // namespace

void save_checkpoint(const std::string& path, const Ranker& ranker) {
    std::string out;
    out.append(kMagic, sizeof(kMagic));
    put_u32(out, kCheckpointVersion);

    auto section = [&](const std::string& name, const std::string& payload) {
        put_str(out, name);
        put_u64(out, payload.size());
        out.append(payload);
    };

    section("config", encode_config(ranker));
    section("catalog.paths", encode_strings(ranker.catalog.paths));
    {
        std::vector<std::int64_t> created(ranker.catalog.created_at.begin(),
                                          ranker.catalog.created_at.end());
        section("catalog.created_at", encode_i64s(created));
        std::vector<std::int64_t> tomb(ranker.catalog.tombstoned.begin(),
                                       ranker.catalog.tombstoned.end());
        section("catalog.tombstoned", encode_i64s(tomb));
    }
    section("embedder.vocab", encode_strings(ranker.embedder.vocabulary()));
    {
        Tensor idf(1, static_cast<int>(ranker.embedder.idf().size()));
        for (int j = 0; j < idf.cols(); ++j) idf(0, j) = ranker.embedder.idf()[j];
        section("embedder.idf", encode_matrix(idf));
    }
    section("train.ids", encode_strings(ranker.train_report_ids));
    {
        const int m = static_cast<int>(ranker.train_report_vecs.size());
        const int dim = ranker.embedder.dimension();
        Tensor vecs(m, dim);
        for (int i = 0; i < m; ++i) {
            const TextVector& v = ranker.train_report_vecs[i];
            if (static_cast<int>(v.values.size()) != dim)
                throw ContractViolation("checkpoint: train vector dimension mismatch");
            for (int j = 0; j < dim; ++j) vecs(i, j) = v.values[j];
        }
        section("train.vecs", encode_matrix(vecs));
    }
    section("views.rr", encode_matrix(view_to_matrix(ranker.rr_view)));
    section("views.cc", encode_matrix(view_to_matrix(ranker.cc_view)));
    {
        Tensor fc(1, static_cast<int>(ranker.fix_counts.size()));
        for (int j = 0; j < fc.cols(); ++j) fc(0, j) = ranker.fix_counts[j];
        section("fix_counts", encode_matrix(fc));
    }
    for (const nn::Parameter& p : ranker.model.stage_fl)
        section("param." + p.name, encode_matrix(p.node->val));
    for (const nn::Parameter& p : ranker.model.stage_cl)
        section("param." + p.name, encode_matrix(p.node->val));

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ContractViolation("cannot write checkpoint: " + path);
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
    if (!f) throw ContractViolation("short write on checkpoint: " + path);
}

Ranker load_checkpoint(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ContractViolation("cannot open checkpoint: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string data = ss.str();

    if (data.size() < sizeof(kMagic) + 4 ||
        data.compare(0, sizeof(kMagic), kMagic, sizeof(kMagic)) != 0)
        throw ContractViolation("checkpoint: not a model checkpoint file: " + path);

    Reader r(data, sizeof(kMagic));
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion)
        throw ContractViolation("checkpoint: unsupported format version " + std::to_string(version) +
                                " (expected " + std::to_string(kCheckpointVersion) + ")");

    std::map<std::string, std::string> sections;
    while (!r.done()) {
        std::string name = r.str();
        const std::uint64_t len = r.u64();
        sections[std::move(name)] = r.bytes(static_cast<std::size_t>(len));
    }
    auto payload = [&](const std::string& name) -> const std::string& {
        auto it = sections.find(name);
        if (it == sections.end()) throw ContractViolation("checkpoint: section missing: " + name);
        return it->second;
    };

    const auto kv = parse_kv(payload("config"));

    Ranker ranker;
    TrainConfig& cfg = ranker.config;
    cfg.layers = kv_int(kv, "layers");
    cfg.d = kv_int(kv, "d");
    cfg.lr = kv_double(kv, "lr");
    cfg.dropout = kv_double(kv, "dropout");
    cfg.tau = kv_double(kv, "tau");
    cfg.lambda = kv_double(kv, "lambda");
    cfg.max_epochs = kv_int(kv, "max_epochs");
    cfg.patience = kv_int(kv, "patience");
    cfg.seed = std::stoull(kv_get(kv, "seed"));
    cfg.variant = kv_get(kv, "variant");
    cfg.fl_mean = kv_int(kv, "fl_mean") != 0;
    cfg.canonical_nce = kv_int(kv, "canonical_nce") != 0;
    cfg.stop_on_perfect_train_acc = kv_int(kv, "stop_on_perfect_train_acc") != 0;
    ranker.policy.top_k = kv_int(kv, "policy.top_k");
    ranker.policy.floor = kv_double(kv, "policy.floor");
    const int m = kv_int(kv, "n_train_reports");
    const int n = kv_int(kv, "n_codes");

    ranker.catalog.paths = decode_strings(payload("catalog.paths"));
    for (std::size_t i = 0; i < ranker.catalog.paths.size(); ++i)
        ranker.catalog.entries[ranker.catalog.paths[i]] = static_cast<int>(i);
    for (std::int64_t v : decode_i64s(payload("catalog.created_at")))
        ranker.catalog.created_at.push_back(static_cast<int>(v));
    for (std::int64_t v : decode_i64s(payload("catalog.tombstoned")))
        ranker.catalog.tombstoned.insert(static_cast<int>(v));

    {
        std::vector<std::string> vocab = decode_strings(payload("embedder.vocab"));
        const Tensor idf_t = decode_matrix(payload("embedder.idf"));
        std::vector<double> idf(idf_t.row(0), idf_t.row(0) + idf_t.cols());
        ranker.embedder = TfidfEmbedder::from_state(std::move(vocab), std::move(idf));
    }

    ranker.train_report_ids = decode_strings(payload("train.ids"));
    {
        const Tensor vecs = decode_matrix(payload("train.vecs"));
        if (vecs.rows() != static_cast<int>(ranker.train_report_ids.size()))
            throw ContractViolation("checkpoint: train vector row count mismatch");
        for (int i = 0; i < vecs.rows(); ++i)
            ranker.train_report_vecs.push_back(vector_from_row(vecs, i));
    }

    ranker.rr_view.kind = View::Kind::report_report;
    ranker.rr_view.n_reports = m;
    matrix_to_view(decode_matrix(payload("views.rr")), ranker.rr_view);
    ranker.cc_view.kind = View::Kind::code_code;
    ranker.cc_view.n_codes = n;
    matrix_to_view(decode_matrix(payload("views.cc")), ranker.cc_view);

    {
        const Tensor fc = decode_matrix(payload("fix_counts"));
        ranker.fix_counts.assign(fc.row(0), fc.row(0) + fc.cols());
        if (static_cast<int>(ranker.fix_counts.size()) != n)
            throw ContractViolation("checkpoint: fix count length mismatch");
    }

    ranker.model = init_model(cfg, m, n);
    auto load_params = [&](std::vector<nn::Parameter>& params) {
        for (nn::Parameter& p : params) {
            const Tensor t = decode_matrix(payload("param." + p.name));
            if (!t.same_shape(p.node->val))
                throw ContractViolation("checkpoint: shape mismatch for parameter " + p.name);
            p.node->val = t;
        }
    };
    load_params(ranker.model.stage_fl);
    load_params(ranker.model.stage_cl);
    return ranker;
}

} // namespace macl
