#include "macl/errors.hpp"
#include "macl/textsim.hpp"

#include "temp_dir.hpp"

#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace macl;

TEST_CASE("tokenizer: camelCase, acronyms, stop words, short tokens") {
    CHECK(preprocess("the NullPointerException") ==
          std::vector<std::string>{"null", "pointer", "exception"});
    CHECK(preprocess("ELParser fails parsing tag attribute") ==
          std::vector<std::string>{"el", "parser", "fails", "parsing", "tag", "attribute"});
    CHECK(preprocess("XMLHttpRequest") == std::vector<std::string>{"xml", "http", "request"});
    CHECK(preprocess("org.apache.jasper.compiler.Parser") ==
          std::vector<std::string>{"org", "apache", "jasper", "compiler", "parser"});
    CHECK(preprocess("a_b-c x") == std::vector<std::string>{}); // all too short
    CHECK(preprocess("is the a an of") == std::vector<std::string>{});
    CHECK(preprocess("") == std::vector<std::string>{});
    CHECK(preprocess("parse2Json") == std::vector<std::string>{"parse2", "json"});
}

TEST_CASE("tokenizer: idempotent on its own joined output") {
    const std::vector<std::string> once =
        preprocess("NullPointerException in ELParser.parseTagAttributes() at line 42");
    std::string joined;
    for (const std::string& t : once) joined += t + " ";
    CHECK(preprocess(joined) == once);
}

TEST_CASE("embedder: idf and term accumulation follow the formulas") {
    const std::vector<std::vector<std::string>> docs = {
        {"null", "pointer"}, {"null"}, {"exception"}};
    const TfidfEmbedder emb = TfidfEmbedder::fit(docs);

    // Vocabulary is index-ordered lexicographically.
    CHECK(emb.vocabulary() == std::vector<std::string>{"exception", "null", "pointer"});
    const double idf_null = std::log(3.0 / 2.0);
    const double idf_rare = std::log(3.0);
    CHECK(emb.idf()[1] == doctest::Approx(idf_null).epsilon(1e-12));
    CHECK(emb.idf()[0] == doctest::Approx(idf_rare).epsilon(1e-12));
    CHECK(emb.idf()[2] == doctest::Approx(idf_rare).epsilon(1e-12));

    // tf is a raw count: each occurrence contributes one idf.
    const TextVector v = emb.embed({"null", "null", "pointer", "unknownword"});
    CHECK(v.values[1] == doctest::Approx(2.0 * idf_null).epsilon(1e-12));
    CHECK(v.values[2] == doctest::Approx(idf_rare).epsilon(1e-12));
    CHECK(v.values[0] == 0.0);
    CHECK(v.norm ==
          doctest::Approx(std::sqrt(v.values[1] * v.values[1] + v.values[2] * v.values[2]))
              .epsilon(1e-12));
}

TEST_CASE("embedder: vocabulary cap keeps the most frequent terms") {
    // df: common=3, shared=2, alpha=1, beta=1, gamma=1
    const std::vector<std::vector<std::string>> docs = {
        {"common", "shared", "alpha"}, {"common", "shared", "beta"}, {"common", "gamma"}};
    const TfidfEmbedder emb = TfidfEmbedder::fit(docs, 3);
    // cap 3 -> common, shared, then the lexicographically first singleton.
    CHECK(emb.vocabulary() == std::vector<std::string>{"alpha", "common", "shared"});
    CHECK(emb.dimension() == 3);
}

TEST_CASE("embedder: empty fit input is rejected") {
    CHECK_THROWS_AS(TfidfEmbedder::fit({}), ContractViolation);
    CHECK_THROWS_AS(TfidfEmbedder::fit({{}, {}}), ContractViolation);
}

TEST_CASE("embedder: deterministic and OOV-silent") {
    const std::vector<std::vector<std::string>> docs = {{"alpha", "beta"}, {"beta", "gamma"}};
    const TfidfEmbedder emb = TfidfEmbedder::fit(docs);
    const TextVector a = emb.embed({"alpha", "beta"});
    const TextVector b = emb.embed({"alpha", "beta"});
    CHECK(a.values == b.values);
    CHECK(a.norm == b.norm);

    const TextVector oov = emb.embed({"neverseen"});
    for (double x : oov.values) CHECK(x == 0.0);
    CHECK(oov.norm == 0.0);
}

TEST_CASE("embedder: state round trip preserves behavior") {
    const std::vector<std::vector<std::string>> docs = {{"alpha", "beta"}, {"beta", "gamma"}};
    const TfidfEmbedder emb = TfidfEmbedder::fit(docs);
    const TfidfEmbedder back = TfidfEmbedder::from_state(emb.vocabulary(), emb.idf());
    const TextVector u = emb.embed({"alpha", "gamma", "gamma"});
    const TextVector v = back.embed({"alpha", "gamma", "gamma"});
    CHECK(u.values == v.values);
    CHECK(u.norm == v.norm);
}

TEST_CASE("cosine: worked values and guard rails") {
    TextVector u, v;
    u.values = {1.0, 0.0};
    u.norm = 1.0;
    v.values = {1.0, 1.0};
    v.norm = std::sqrt(2.0);
    CHECK(cosine(u, v) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-9));
    CHECK(cosine(u, u) == doctest::Approx(1.0).epsilon(1e-12));

    TextVector zero;
    zero.values = {0.0, 0.0};
    zero.norm = 0.0;
    CHECK(cosine(u, zero) == 0.0);

    TextVector w;
    w.values = {0.0, 1.0};
    w.norm = 1.0;
    CHECK(cosine(u, w) == 0.0);

    TextVector mismatched;
    mismatched.values = {1.0};
    mismatched.norm = 1.0;
    CHECK_THROWS_AS(cosine(u, mismatched), ContractViolation);
}

TEST_CASE("stop words: shipped data file matches the built-in list") {
    std::ifstream f(std::string(MACL_DATA_DIR) + "/stopwords.txt");
    REQUIRE(f.good());
    std::vector<std::string> from_file;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) from_file.push_back(line);
    }
    CHECK(from_file == stop_word_list());
    CHECK(from_file.size() == 179);
    for (const std::string& w : from_file) CHECK(is_stop_word(w));
    CHECK_FALSE(is_stop_word("pointer"));
}
