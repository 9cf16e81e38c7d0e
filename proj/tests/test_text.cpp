#include <doctest.h>

#include <cmath>
#include <sstream>

#include "clmn/errors.hpp"
#include "clmn/rng.hpp"
#include "clmn/text.hpp"

using namespace clmn;

TEST_CASE("tokenize lowercases, splits, and strips edge punctuation") {
    CHECK(tokenize("The cat sat.") == std::vector<std::string>{"the", "cat", "sat"});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("A  b\tc") == std::vector<std::string>{"a", "b", "c"});
    CHECK(tokenize("(Hello), \"WORLD\"!") == std::vector<std::string>{"hello", "world"});
    CHECK(tokenize("don't stop-motion") == std::vector<std::string>{"don't", "stop-motion"});
    CHECK(tokenize("«qué» — sí") ==
          std::vector<std::string>{"qué", "sí"});
    // Arabic passes through unchanged, with Arabic punctuation stripped.
    CHECK(tokenize("مرحبا، بك") ==
          std::vector<std::string>{"مرحبا",
                                   "بك"});
    CHECK(tokenize("a b c") == std::vector<std::string>{"a", "b", "c"});
    CHECK(tokenize("!!! ...") == std::vector<std::string>{});
}

TEST_CASE("tokenize is idempotent over its own output") {
    const std::vector<std::string> samples = {
        "The Quick, (brown) FOX; jumps!",
        "one\ttwo\nthree  four",
        "العربية 2020 ؟",
        "mixed ASCII and ümläuts...",
        "a-b c_d e.f",
    };
    for (const auto& text : samples) {
        auto once = tokenize(text);
        std::string joined;
        for (const auto& token : once) {
            if (!joined.empty()) joined += ' ';
            joined += token;
        }
        CHECK(tokenize(joined) == once);
    }
}

TEST_CASE("vocabulary reserves pad and unk and round-trips") {
    Vocabulary vocab;
    CHECK(vocab.size() == 2);
    CHECK(vocab.add("cat") == 2);
    CHECK(vocab.add("dog") == 3);
    CHECK(vocab.add("cat") == 2);
    CHECK(vocab.lookup("cat") == 2);
    CHECK(vocab.lookup("missing") == Vocabulary::kUnkIndex);
    CHECK(vocab.token(0) == Vocabulary::kPadToken);
    CHECK(vocab.token(1) == Vocabulary::kUnkToken);

    std::stringstream buffer;
    vocab.save(buffer);
    Vocabulary reloaded = Vocabulary::load(buffer);
    CHECK(reloaded.size() == vocab.size());
    CHECK(reloaded.lookup("dog") == 3);
}

TEST_CASE("embedding loader fills rows and falls back to the unknown row") {
    Vocabulary vocab;
    vocab.add("cat");
    vocab.add("dog");
    vocab.add("absent");
    std::istringstream file("2 3\ncat 1 2 3\ndog 4 5 6\n");
    auto table = load_embeddings(file, "test.vec", vocab, 3);
    CHECK(table.dim() == 3);
    CHECK(table.row(vocab.lookup("cat")) == std::vector<double>{1, 2, 3});
    CHECK(table.row(vocab.lookup("dog")) == std::vector<double>{4, 5, 6});
    // unk = element-wise mean of the loaded rows, shared by missing tokens
    CHECK(table.row(Vocabulary::kUnkIndex) == std::vector<double>{2.5, 3.5, 4.5});
    CHECK(table.row(vocab.lookup("absent")) == std::vector<double>{2.5, 3.5, 4.5});
    CHECK(table.row(Vocabulary::kPadIndex) == std::vector<double>{0, 0, 0});
    CHECK(table.frozen());
}

TEST_CASE("embedding loader reports malformed lines and dim mismatches") {
    Vocabulary vocab;
    vocab.add("cat");
    {
        std::istringstream file("cat 1 2\n");
        CHECK_THROWS_WITH_AS(load_embeddings(file, "bad.vec", vocab, 3),
                             doctest::Contains("bad.vec:1"), ParseError);
    }
    {
        std::istringstream file("2 5\ncat 1 2 3 4 5\n");
        CHECK_THROWS_AS(load_embeddings(file, "bad.vec", vocab, 3), ConfigError);
    }
    {
        std::istringstream file("cat 1 2x 3\n");
        CHECK_THROWS_AS(load_embeddings(file, "bad.vec", vocab, 3), ParseError);
    }
}

TEST_CASE("paragraph splitting pads to a fixed slot count") {
    auto paragraphs = split_paragraphs("p1\n\np2\n\np3", 9);
    REQUIRE(paragraphs.size() == 9);
    CHECK(paragraphs[0].text == "p1");
    CHECK(paragraphs[2].text == "p3");
    CHECK_FALSE(paragraphs[2].padding);
    for (std::size_t i = 3; i < 9; ++i) CHECK(paragraphs[i].padding);

    std::string twelve;
    for (int i = 1; i <= 12; ++i) twelve += "para " + std::to_string(i) + "\n\n";
    auto capped = split_paragraphs(twelve, 9);
    REQUIRE(capped.size() == 9);
    CHECK(capped[8].text == "para 9");
    CHECK_FALSE(capped[8].padding);

    auto empty = split_paragraphs("", 9);
    REQUIRE(empty.size() == 9);
    for (const auto& p : empty) CHECK(p.padding);
}

TEST_CASE("single newlines stay inside one paragraph") {
    auto paragraphs = split_paragraphs("line one\nline two\r\n\r\nsecond", 4);
    CHECK(paragraphs[0].text == "line one\nline two");
    CHECK(paragraphs[1].text == "second");
    CHECK(paragraphs[2].padding);

    auto ws_only = split_paragraphs("a\n   \t\nb", 3);
    CHECK(ws_only[0].text == "a");
    CHECK(ws_only[1].text == "b");
    CHECK_THROWS_AS(split_paragraphs("x", 0), ConfigError);
}

namespace {

TfidfModel toy_model(Vocabulary& vocab) {
    std::vector<std::vector<std::string>> corpus = {
        {"cat", "sat"}, {"cat", "ran"}, {"dog"}};
    for (const auto& doc : corpus)
        for (const auto& token : doc) vocab.add(token);
    return TfidfModel::fit(corpus, vocab);
}

}  // namespace

TEST_CASE("tfidf cosine identity, orthogonality, and hand-computed value") {
    Vocabulary vocab;
    auto model = toy_model(vocab);

    CHECK(model.cosine(vocab, {"cat", "sat"}, {"cat", "sat"}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(model.cosine(vocab, {"cat", "sat"}, {"dog"}) == 0.0);
    CHECK(model.cosine(vocab, {}, {"cat"}) == 0.0);

    // Independent hand computation: df(cat)=2, df(sat)=df(ran)=1, N=3,
    // idf(t) = ln(N/(1+df)) + 1, tf = raw counts.
    const double idf_cat = std::log(3.0 / 3.0) + 1.0;
    const double idf_rare = std::log(3.0 / 2.0) + 1.0;
    const double dot = idf_cat * idf_cat;
    const double norm = std::sqrt(idf_cat * idf_cat + idf_rare * idf_rare);
    const double expected = dot / (norm * norm);
    CHECK(model.cosine(vocab, {"cat", "sat"}, {"cat", "ran"}) ==
          doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("tfidf cosine is symmetric and bounded on random inputs") {
    Rng rng(77);
    const std::vector<std::string> pool = {"a", "b", "c", "d", "e", "f", "g", "h"};
    std::vector<std::vector<std::string>> corpus;
    Vocabulary vocab;
    for (int doc = 0; doc < 6; ++doc) {
        std::vector<std::string> tokens;
        const std::size_t len = 1 + rng.below(6);
        for (std::size_t i = 0; i < len; ++i) tokens.push_back(pool[rng.below(pool.size())]);
        for (const auto& token : tokens) vocab.add(token);
        corpus.push_back(std::move(tokens));
    }
    auto model = TfidfModel::fit(corpus, vocab);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> a, b;
        for (std::size_t i = 0; i < rng.below(5); ++i) a.push_back(pool[rng.below(pool.size())]);
        for (std::size_t i = 0; i < rng.below(5); ++i) b.push_back(pool[rng.below(pool.size())]);
        const double ab = model.cosine(vocab, a, b);
        CHECK(ab == model.cosine(vocab, b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("tfidf idf stays finite and fit rejects an empty corpus") {
    Vocabulary vocab;
    auto model = toy_model(vocab);
    for (std::size_t i = 0; i < vocab.size(); ++i) CHECK(std::isfinite(model.idf(i)));
    CHECK_THROWS_AS(TfidfModel::fit({}, vocab), ConfigError);
}
