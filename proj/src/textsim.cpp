#include "macl/textsim.hpp"

#include "macl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

namespace macl {

namespace {

// Standard 179-word English stop list.
const char* const kStopWords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "you're", "you've",
    "you'll", "you'd", "your", "yours", "yourself", "yourselves", "he", "him", "his", "himself",
    "she", "she's", "her", "hers", "herself", "it", "it's", "its", "itself", "they", "them",
    "their", "theirs", "themselves", "what", "which", "who", "whom", "this", "that", "that'll",
    "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against",
    "between", "into", "through", "during", "before", "after", "above", "below", "to", "from",
    "up", "down", "in", "out", "on", "off", "over", "under", "again", "further", "then", "once",
    "here", "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
    "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so", "than",
    "too", "very", "s", "t", "can", "will", "just", "don", "don't", "should", "should've", "now",
    "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "aren't", "couldn", "couldn't", "didn",
    "didn't", "doesn", "doesn't", "hadn", "hadn't", "hasn", "hasn't", "haven", "haven't", "isn",
    "isn't", "ma", "mightn", "mightn't", "mustn", "mustn't", "needn", "needn't", "shan", "shan't",
    "shouldn", "shouldn't", "wasn", "wasn't", "weren", "weren't", "won", "won't", "wouldn",
    "wouldn't"};

const std::unordered_set<std::string>& stop_word_set() {
    static const std::unordered_set<std::string> set(std::begin(kStopWords), std::end(kStopWords));
    return set;
}

bool ascii_alnum(char c) {
    const unsigned char u = static_cast<unsigned char>(c);
    return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9');
}
bool ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool ascii_lower_or_digit(char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9');
}

} // namespace

const std::vector<std::string>& stop_word_list() {
    static const std::vector<std::string> list(std::begin(kStopWords), std::end(kStopWords));
    return list;
}

bool is_stop_word(std::string_view word) {
    return stop_word_set().count(std::string(word)) != 0;
}

std::vector<std::string> preprocess(std::string_view raw) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&]() {
        if (cur.size() >= 2 && !is_stop_word(cur)) tokens.push_back(cur);
        cur.clear();
    };
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const char c = raw[i];
        if (!ascii_alnum(c)) {
            flush();
            continue;
        }
        // camelCase boundaries: aB / 9B, and the AB|Cd transition in ABCd.
        if (!cur.empty() && ascii_upper(c)) {
            const char prev = raw[i - 1];
            const bool lower_to_upper = ascii_lower_or_digit(prev);
            const bool acronym_end =
                ascii_upper(prev) && i + 1 < raw.size() && raw[i + 1] >= 'a' && raw[i + 1] <= 'z';
            if (lower_to_upper || acronym_end) flush();
        }
        cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    flush();
    return tokens;
}

TfidfEmbedder TfidfEmbedder::fit(const std::vector<std::vector<std::string>>& docs,
                                 std::size_t vocab_cap) {
    if (docs.empty()) throw ContractViolation("fit_embedder: no documents");

    std::map<std::string, int> df;
    for (const auto& doc : docs) {
        std::set<std::string> uniq(doc.begin(), doc.end());
        for (const std::string& term : uniq) ++df[term];
    }
    if (df.empty()) throw ContractViolation("fit_embedder: degenerate vocabulary (all documents empty)");

    // Cap by descending document frequency, ties lexicographic ascending.
    std::vector<std::pair<std::string, int>> terms(df.begin(), df.end());
    std::sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (terms.size() > vocab_cap) terms.resize(vocab_cap);
    // Vocabulary index order is lexicographic for stable, inspectable layouts.
    std::sort(terms.begin(), terms.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    TfidfEmbedder e;
    const double n_docs = static_cast<double>(docs.size());
    e.vocab_.reserve(terms.size());
    e.idf_.reserve(terms.size());
    for (const auto& [term, count] : terms) {
        e.index_.emplace(term, static_cast<int>(e.vocab_.size()));
        e.vocab_.push_back(term);
        e.idf_.push_back(std::log(n_docs / count));
    }
    return e;
}

TfidfEmbedder TfidfEmbedder::from_state(std::vector<std::string> vocab, std::vector<double> idf) {
    if (vocab.size() != idf.size())
        throw ContractViolation("embedder state: vocabulary and idf sizes differ");
    TfidfEmbedder e;
    e.vocab_ = std::move(vocab);
    e.idf_ = std::move(idf);
    for (std::size_t i = 0; i < e.vocab_.size(); ++i)
        e.index_.emplace(e.vocab_[i], static_cast<int>(i));
    return e;
}

TextVector TfidfEmbedder::embed(const std::vector<std::string>& tokens) const {
    TextVector v;
    v.values.assign(vocab_.size(), 0.0);
    for (const std::string& tok : tokens) {
        auto it = index_.find(tok);
        if (it != index_.end()) v.values[it->second] += idf_[it->second];
    }
    double s = 0.0;
    for (double x : v.values) s += x * x;
    v.norm = std::sqrt(s);
    return v;
}

double cosine(const TextVector& u, const TextVector& v) {
    if (u.values.size() != v.values.size())
        throw ContractViolation("cosine: dimension mismatch");
    if (u.norm == 0.0 || v.norm == 0.0) return 0.0;
    double dot = 0.0;
    for (std::size_t i = 0; i < u.values.size(); ++i) dot += u.values[i] * v.values[i];
    return dot / (u.norm * v.norm);
}

} // namespace macl
