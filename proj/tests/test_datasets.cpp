#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "clmn/csv.hpp"
#include "clmn/datasets.hpp"
#include "clmn/errors.hpp"
#include "clmn/text.hpp"

using namespace clmn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("clmn_ds_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

void put(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("csv parser handles quoting, embedded newlines, and bad rows") {
    auto table = parse_csv("a,b\n1,\"x, y\"\n2,\"line1\nline2\"\n", "mem");
    CHECK(table.header == std::vector<std::string>{"a", "b"});
    REQUIRE(table.rows.size() == 2);
    CHECK(table.rows[0][1] == "x, y");
    CHECK(table.rows[1][1] == "line1\nline2");

    auto quoted = parse_csv("a\n\"he said \"\"hi\"\"\"\n", "mem");
    CHECK(quoted.rows[0][0] == "he said \"hi\"");

    CHECK_THROWS_WITH_AS(parse_csv("a,b\n1\n", "mem"), doctest::Contains("row 2"),
                         ParseError);
    CHECK_THROWS_AS(parse_csv("a\n\"unterminated\n", "mem"), ParseError);
    CHECK_THROWS_AS(parse_csv("", "mem"), ParseError);
}

TEST_CASE("fnc loader joins stances onto bodies") {
    TempDir dir;
    put(dir.file("bodies.csv"),
        "Body ID,articleBody\n0,\"First body, with a comma.\"\n5,Second body\n");
    put(dir.file("stances.csv"),
        "Headline,Body ID,Stance\nClaim one,0,agree\nClaim two,5,UNRELATED\n"
        "Claim three,0,Discuss\n");
    auto examples = load_fnc(dir.file("bodies.csv"), dir.file("stances.csv"));
    REQUIRE(examples.size() == 3);
    CHECK(examples[0].document == "First body, with a comma.");
    CHECK(examples[0].label == StanceLabel::agree);
    CHECK(examples[1].label == StanceLabel::unrelated);
    CHECK(examples[2].label == StanceLabel::discuss);
    CHECK(examples[2].document == examples[0].document);
    for (const auto& ex : examples) CHECK(ex.language == kSourceLanguage);
}

TEST_CASE("fnc loader reports unknown body ids and stances") {
    TempDir dir;
    put(dir.file("bodies.csv"), "Body ID,articleBody\n0,text\n");
    put(dir.file("stances.csv"), "Headline,Body ID,Stance\nClaim,99,agree\n");
    CHECK_THROWS_WITH_AS(load_fnc(dir.file("bodies.csv"), dir.file("stances.csv")),
                         doctest::Contains("99"), ParseError);

    put(dir.file("stances2.csv"), "Headline,Body ID,Stance\nClaim,0,sideways\n");
    CHECK_THROWS_WITH_AS(load_fnc(dir.file("bodies.csv"), dir.file("stances2.csv")),
                         doctest::Contains("sideways"), ParseError);

    put(dir.file("broken.csv"), "Body ID,articleBody\n0,text,extra\n");
    CHECK_THROWS_WITH_AS(load_fnc(dir.file("broken.csv"), dir.file("stances.csv")),
                         doctest::Contains("row 2"), ParseError);
}

TEST_CASE("fnc round trip is lossless") {
    TempDir dir;
    put(dir.file("bodies.csv"),
        "Body ID,articleBody\n0,\"Body with \"\"quotes\"\" and\nnewline\"\n3,Plain\n");
    put(dir.file("stances.csv"),
        "Headline,Body ID,Stance\n\"claim, quoted\",0,agree\nanother,3,disagree\n"
        "third,0,unrelated\n");
    auto examples = load_fnc(dir.file("bodies.csv"), dir.file("stances.csv"));
    write_fnc(dir.file("bodies2.csv"), dir.file("stances2.csv"), examples);
    auto reloaded = load_fnc(dir.file("bodies2.csv"), dir.file("stances2.csv"));
    CHECK(examples == reloaded);
}

TEST_CASE("target loader attaches rationale flags") {
    TempDir dir;
    put(dir.file("target.csv"),
        "claim,document,stance,rationales\n"
        "c1,\"p0\n\np1\n\np2\",agree,2:1\n"
        "c2,doc,discuss,\n"
        "c3,,unrelated,\n");
    auto examples = load_target(dir.file("target.csv"));
    REQUIRE(examples.size() == 3);
    CHECK(examples[0].rationale == std::vector<bool>{false, false, true});
    CHECK(examples[1].rationale.empty());
    CHECK(examples[2].document.empty());
    for (const auto& ex : examples) CHECK(ex.language == kTargetLanguage);
}

TEST_CASE("target loader rejects rationale flags on unrelated rows") {
    TempDir dir;
    put(dir.file("bad.csv"),
        "claim,document,stance,rationales\nc,d,unrelated,0:1\n");
    CHECK_THROWS_WITH_AS(load_target(dir.file("bad.csv")),
                         doctest::Contains("unrelated"), ParseError);
    put(dir.file("bad2.csv"), "claim,document,stance,rationales\nc,d,agree,2\n");
    CHECK_THROWS_AS(load_target(dir.file("bad2.csv")), ParseError);
}

TEST_CASE("target round trip is lossless") {
    TempDir dir;
    std::vector<StanceExample> examples;
    examples.push_back({"tgt-0", "claim \"q\"", "p0\n\np1", StanceLabel::agree,
                        kTargetLanguage, {true, false}});
    examples.push_back(
        {"tgt-1", "c2", "doc, body", StanceLabel::unrelated, kTargetLanguage, {}});
    // canonical form trims trailing false flags
    examples[0].rationale = {true};
    write_target(dir.file("t.csv"), examples);
    auto reloaded = load_target(dir.file("t.csv"));
    CHECK(examples == reloaded);
}

namespace {

SynthConfig small_synth(std::uint64_t seed) {
    SynthConfig cfg;
    cfg.source_per_class = 10;
    cfg.target_per_class = 10;
    cfg.seed = seed;
    return cfg;
}

StanceLabel marker_rule(const StanceExample& ex, const SynthTokenCatalog& catalog) {
    const auto doc_tokens = tokenize(ex.document);
    const std::set<std::string> doc_set(doc_tokens.begin(), doc_tokens.end());
    for (const auto& marker : catalog.agree_markers)
        if (doc_set.count(marker)) return StanceLabel::agree;
    for (const auto& marker : catalog.disagree_markers)
        if (doc_set.count(marker)) return StanceLabel::disagree;
    for (const auto& token : tokenize(ex.claim))
        if (doc_set.count(token)) return StanceLabel::discuss;
    return StanceLabel::unrelated;
}

}  // namespace

TEST_CASE("synthetic generation is deterministic and balanced") {
    auto first = synth_generate(small_synth(7));
    auto second = synth_generate(small_synth(7));
    CHECK(first.source == second.source);
    CHECK(first.target == second.target);
    CHECK(first.embedding_text == second.embedding_text);
    CHECK(first.source.size() == 40);
    CHECK(first.target.size() == 40);
    std::size_t per_class[kNumStances] = {0, 0, 0, 0};
    for (const auto& ex : first.source) ++per_class[stance_index(ex.label)];
    for (auto count : per_class) CHECK(count == 10);

    auto different = synth_generate(small_synth(8));
    CHECK(different.embedding_text != first.embedding_text);
}

TEST_CASE("synthetic vocabularies are disjoint across languages") {
    auto data = synth_generate(small_synth(3));
    std::set<std::string> source_tokens, target_tokens;
    for (const auto& ex : data.source)
        for (const auto& token : tokenize(ex.claim + " " + ex.document))
            source_tokens.insert(token);
    for (const auto& ex : data.target)
        for (const auto& token : tokenize(ex.claim + " " + ex.document))
            target_tokens.insert(token);
    for (const auto& token : source_tokens) CHECK(target_tokens.count(token) == 0);
}

TEST_CASE("a bag-of-markers rule solves the full-signal benchmark") {
    auto data = synth_generate(small_synth(11));
    for (const auto& ex : data.source)
        CHECK(marker_rule(ex, data.source_catalog) == ex.label);
    for (const auto& ex : data.target)
        CHECK(marker_rule(ex, data.target_catalog) == ex.label);
}

TEST_CASE("rationale flags identify exactly the marker paragraphs") {
    auto data = synth_generate(small_synth(19));
    auto check_example = [&](const StanceExample& ex, const SynthTokenCatalog& catalog) {
        auto paragraphs = split_paragraphs(ex.document, 3);
        std::set<std::string> markers(catalog.agree_markers.begin(),
                                      catalog.agree_markers.end());
        markers.insert(catalog.disagree_markers.begin(), catalog.disagree_markers.end());
        for (std::size_t p = 0; p < paragraphs.size(); ++p) {
            bool has_marker = false;
            for (const auto& token : tokenize(paragraphs[p].text))
                if (markers.count(token)) has_marker = true;
            const bool flagged = p < ex.rationale.size() && ex.rationale[p];
            CHECK(flagged == has_marker);
        }
    };
    for (const auto& ex : data.target) check_example(ex, data.target_catalog);
    for (const auto& ex : data.source) check_example(ex, data.source_catalog);
}

TEST_CASE("synthetic embedding file loads for both languages") {
    TempDir dir;
    auto data = synth_generate(small_synth(5));
    put(dir.file("emb.vec"), data.embedding_text);

    std::vector<std::string> texts;
    for (const auto& ex : data.target) texts.push_back(ex.claim + " " + ex.document);
    auto vocab = build_vocabulary(texts);
    auto table = load_embeddings(dir.file("emb.vec"), vocab, 16);
    CHECK(table.dim() == 16);
    // every corpus token is covered by the generated file
    bool any_nonzero = false;
    for (std::size_t i = 2; i < vocab.size(); ++i)
        for (double v : table.row(i))
            if (v != 0.0) any_nonzero = true;
    CHECK(any_nonzero);
}

TEST_CASE("synth config validation") {
    SynthConfig cfg = small_synth(1);
    cfg.signal_strength = 1.5;
    CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
    cfg = small_synth(1);
    cfg.source_per_class = 0;
    CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
    cfg = small_synth(1);
    cfg.vocab_size = 10;  // no room for filler
    CHECK_THROWS_AS(synth_generate(cfg), ConfigError);
}
