#pragma once

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace macl {

// Dense TF-IDF vector with its L2 norm cached for cosine.
struct TextVector {
    std::vector<double> values;
    double norm = 0.0;
};

// Lowercases, splits on non-alphanumerics and camelCase boundaries, then
// drops stop words and tokens shorter than 2 characters.
std::vector<std::string> preprocess(std::string_view raw);

bool is_stop_word(std::string_view word);

// The built-in stop-word list, exposed so it can be written out as the
// data file shipped alongside the binary.
const std::vector<std::string>& stop_word_list();

// Corpus-level TF-IDF: idf = ln(N / df), tf = raw count, no smoothing.
// Vocabulary is frozen at fit time, capped by descending document frequency
// (ties broken lexicographically); out-of-vocabulary tokens embed to nothing.
class TfidfEmbedder {
public:
    static TfidfEmbedder fit(const std::vector<std::vector<std::string>>& docs,
                             std::size_t vocab_cap = 50000);
    // Rebuild from persisted state (checkpoint load).
    static TfidfEmbedder from_state(std::vector<std::string> vocab, std::vector<double> idf);

    TextVector embed(const std::vector<std::string>& tokens) const;

    int dimension() const { return static_cast<int>(vocab_.size()); }
    const std::vector<std::string>& vocabulary() const { return vocab_; }
    const std::vector<double>& idf() const { return idf_; }

private:
    std::vector<std::string> vocab_; // index -> term
    std::vector<double> idf_;        // index -> ln(N/df)
    std::unordered_map<std::string, int> index_;
};

// u.v / (|u||v|); 0 when either norm is 0. Dimensions must match.
double cosine(const TextVector& u, const TextVector& v);

} // namespace macl
