#include "clmn/datasets.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <unordered_map>

#include "clmn/csv.hpp"
#include "clmn/errors.hpp"
#include "clmn/rng.hpp"

namespace clmn {

namespace {

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

std::vector<bool> trim_rationale(std::vector<bool> flags) {
    while (!flags.empty() && !flags.back()) flags.pop_back();
    return flags;
}

std::string rationale_to_string(const std::vector<bool>& flags) {
    std::string out;
    for (std::size_t i = 0; i < flags.size(); ++i) {
        if (!flags[i]) continue;
        if (!out.empty()) out.push_back(' ');
        out += std::to_string(i) + ":1";
    }
    return out;
}

std::vector<bool> parse_rationale(const std::string& text, const std::string& origin,
                                  std::size_t row) {
    std::vector<bool> flags;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && text[pos] == ' ') ++pos;
        if (pos >= text.size()) break;
        std::size_t end = text.find(' ', pos);
        if (end == std::string::npos) end = text.size();
        const std::string entry = text.substr(pos, end - pos);
        pos = end;
        const std::size_t colon = entry.find(':');
        if (colon == std::string::npos)
            throw ParseError(origin + ": row " + std::to_string(row) +
                             ": malformed rationale entry '" + entry + "'");
        std::size_t index = 0;
        int flag = 0;
        const char* ib = entry.data();
        const char* ie = entry.data() + colon;
        const char* fb = entry.data() + colon + 1;
        const char* fe = entry.data() + entry.size();
        if (std::from_chars(ib, ie, index).ptr != ie ||
            std::from_chars(fb, fe, flag).ptr != fe || (flag != 0 && flag != 1))
            throw ParseError(origin + ": row " + std::to_string(row) +
                             ": malformed rationale entry '" + entry + "'");
        if (index >= flags.size()) flags.resize(index + 1, false);
        if (flag == 1) flags[index] = true;
    }
    return trim_rationale(std::move(flags));
}

}  // namespace

std::vector<StanceExample> load_fnc(const std::string& bodies_path,
                                    const std::string& stances_path) {
    const CsvTable bodies = read_csv_file(bodies_path);
    const CsvTable stances = read_csv_file(stances_path);

    const std::size_t body_id_col = bodies.column("Body ID");
    const std::size_t body_text_col = bodies.column("articleBody");
    std::unordered_map<std::string, const std::string*> body_by_id;
    for (const auto& row : bodies.rows) body_by_id[row[body_id_col]] = &row[body_text_col];

    const std::size_t headline_col = stances.column("Headline");
    const std::size_t stance_body_col = stances.column("Body ID");
    const std::size_t stance_col = stances.column("Stance");

    std::vector<std::string> missing;
    for (const auto& row : stances.rows)
        if (!body_by_id.count(row[stance_body_col])) missing.push_back(row[stance_body_col]);
    if (!missing.empty()) {
        std::string listed;
        for (const auto& id : missing) {
            if (!listed.empty()) listed += ", ";
            listed += id;
        }
        throw ParseError(stances_path + ": stance rows reference unknown Body ID(s): " +
                         listed);
    }

    std::vector<StanceExample> examples;
    examples.reserve(stances.rows.size());
    for (std::size_t r = 0; r < stances.rows.size(); ++r) {
        const auto& row = stances.rows[r];
        StanceExample ex;
        ex.id = "fnc-" + std::to_string(r);
        ex.claim = row[headline_col];
        ex.document = *body_by_id.at(row[stance_body_col]);
        try {
            ex.label = parse_stance(row[stance_col]);
        } catch (const ParseError& e) {
            throw ParseError(stances_path + ": row " + std::to_string(r + 2) + ": " +
                             e.what());
        }
        ex.language = kSourceLanguage;
        examples.push_back(std::move(ex));
    }
    return examples;
}

void write_fnc(const std::string& bodies_path, const std::string& stances_path,
               const std::vector<StanceExample>& examples) {
    // Body ids assigned by first occurrence of each distinct document.
    std::unordered_map<std::string, std::size_t> id_by_document;
    std::vector<std::vector<std::string>> body_rows;
    std::vector<std::vector<std::string>> stance_rows;
    for (const auto& ex : examples) {
        auto [it, inserted] = id_by_document.emplace(ex.document, id_by_document.size());
        if (inserted) body_rows.push_back({std::to_string(it->second), ex.document});
        stance_rows.push_back({ex.claim, std::to_string(it->second), to_string(ex.label)});
    }
    write_file(bodies_path, write_csv({"Body ID", "articleBody"}, body_rows));
    write_file(stances_path, write_csv({"Headline", "Body ID", "Stance"}, stance_rows));
}

std::vector<StanceExample> load_target(const std::string& path) {
    const CsvTable table = read_csv_file(path);
    const std::size_t claim_col = table.column("claim");
    const std::size_t document_col = table.column("document");
    const std::size_t stance_col = table.column("stance");
    const bool has_rationales =
        std::find(table.header.begin(), table.header.end(), "rationales") !=
        table.header.end();
    const std::size_t rationale_col = has_rationales ? table.column("rationales") : 0;

    std::vector<StanceExample> examples;
    examples.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        StanceExample ex;
        ex.id = "tgt-" + std::to_string(r);
        ex.claim = row[claim_col];
        ex.document = row[document_col];
        try {
            ex.label = parse_stance(row[stance_col]);
        } catch (const ParseError& e) {
            throw ParseError(path + ": row " + std::to_string(r + 2) + ": " + e.what());
        }
        ex.language = kTargetLanguage;
        if (has_rationales) ex.rationale = parse_rationale(row[rationale_col], path, r + 2);
        if (!ex.rationale.empty() && !is_related(ex.label))
            throw ParseError(path + ": row " + std::to_string(r + 2) +
                             ": rationale flags on an unrelated-class example");
        examples.push_back(std::move(ex));
    }
    return examples;
}

void write_target(const std::string& path, const std::vector<StanceExample>& examples) {
    std::vector<std::vector<std::string>> rows;
    rows.reserve(examples.size());
    for (const auto& ex : examples)
        rows.push_back({ex.claim, ex.document, to_string(ex.label),
                        rationale_to_string(trim_rationale(ex.rationale))});
    write_file(path, write_csv({"claim", "document", "stance", "rationales"}, rows));
}

std::size_t SynthConfig::filler_count() const {
    const std::size_t reserved = topics * tokens_per_topic + 2 * markers_per_class;
    return vocab_size > reserved ? vocab_size - reserved : 0;
}

void SynthConfig::validate() const {
    if (source_per_class < 1 || target_per_class < 1)
        throw ConfigError("synth: class counts must be at least 1");
    if (signal_strength < 0.0 || signal_strength > 1.0)
        throw ConfigError("synth: signal strength must lie in [0,1]");
    if (rationale_fraction <= 0.0 || rationale_fraction > 1.0)
        throw ConfigError("synth: rationale fraction must lie in (0,1]");
    if (paragraphs_per_doc < 1) throw ConfigError("synth: need at least one paragraph");
    if (topics < 2) throw ConfigError("synth: need at least two topics");
    if (filler_count() < 1)
        throw ConfigError("synth: vocab_size leaves no room for filler tokens");
    if (claim_len < 1 || paragraph_len < 2)
        throw ConfigError("synth: claim/paragraph lengths too small");
    if (tokens_per_topic < claim_len)
        throw ConfigError("synth: tokens_per_topic must cover claim_len");
}

namespace {

struct LatentVocab {
    // Abstract token ids shared by both languages.
    std::vector<std::string> base_names;
    std::vector<std::vector<double>> latents;
    SynthTokenCatalog catalog_template;  // names filled per-language later
    std::vector<std::size_t> agree_ids, disagree_ids, filler_ids;
    std::vector<std::vector<std::size_t>> topic_ids;
};

LatentVocab build_latent_vocab(const SynthConfig& cfg, Rng& rng) {
    LatentVocab v;
    auto add = [&](const std::string& name) {
        v.base_names.push_back(name);
        std::vector<double> z(cfg.embed_dim);
        for (auto& value : z) value = rng.gaussian();
        v.latents.push_back(std::move(z));
        return v.base_names.size() - 1;
    };
    v.topic_ids.resize(cfg.topics);
    for (std::size_t t = 0; t < cfg.topics; ++t)
        for (std::size_t k = 0; k < cfg.tokens_per_topic; ++k)
            v.topic_ids[t].push_back(add("top" + std::to_string(t) + "x" + std::to_string(k)));
    for (std::size_t k = 0; k < cfg.markers_per_class; ++k)
        v.agree_ids.push_back(add("agr" + std::to_string(k)));
    for (std::size_t k = 0; k < cfg.markers_per_class; ++k)
        v.disagree_ids.push_back(add("dis" + std::to_string(k)));
    for (std::size_t k = 0; k < cfg.filler_count(); ++k)
        v.filler_ids.push_back(add("fil" + std::to_string(k)));
    return v;
}

std::string language_token(const std::string& prefix, const std::string& base) {
    return prefix + base;
}

SynthTokenCatalog make_catalog(const LatentVocab& v, const std::string& prefix) {
    SynthTokenCatalog c;
    for (auto id : v.agree_ids)
        c.agree_markers.push_back(language_token(prefix, v.base_names[id]));
    for (auto id : v.disagree_ids)
        c.disagree_markers.push_back(language_token(prefix, v.base_names[id]));
    c.topic_tokens.resize(v.topic_ids.size());
    for (std::size_t t = 0; t < v.topic_ids.size(); ++t)
        for (auto id : v.topic_ids[t])
            c.topic_tokens[t].push_back(language_token(prefix, v.base_names[id]));
    for (auto id : v.filler_ids)
        c.filler.push_back(language_token(prefix, v.base_names[id]));
    return c;
}

std::vector<std::size_t> sample_distinct(Rng& rng, const std::vector<std::size_t>& pool,
                                         std::size_t count) {
    std::vector<std::size_t> shuffled = pool;
    rng.shuffle(shuffled);
    if (count < shuffled.size()) shuffled.resize(count);
    return shuffled;
}

struct LanguageGenerator {
    const SynthConfig& cfg;
    const LatentVocab& vocab;
    std::string prefix;
    std::string id_prefix;
    std::string language;
    Rng rng;

    std::string token(std::size_t id) const {
        return language_token(prefix, vocab.base_names[id]);
    }

    StanceExample make_example(StanceLabel label, std::size_t serial) {
        StanceExample ex;
        ex.id = id_prefix + "-" + std::to_string(serial);
        ex.language = language;

        const std::size_t topic = rng.below(cfg.topics);
        const auto claim_ids = sample_distinct(rng, vocab.topic_ids[topic], cfg.claim_len);
        std::string claim;
        for (auto id : claim_ids) {
            if (!claim.empty()) claim.push_back(' ');
            claim += token(id);
        }
        ex.claim = claim;
        ex.label = label;

        // Which paragraphs carry planted markers (agree/disagree only).
        std::vector<bool> rationale(cfg.paragraphs_per_doc, false);
        const bool stance_class =
            label == StanceLabel::agree || label == StanceLabel::disagree;
        const std::size_t marker_count =
            static_cast<std::size_t>(std::lround(cfg.signal_strength * 3.0));
        if (stance_class && marker_count > 0) {
            const std::size_t n_rationale = std::max<std::size_t>(
                1, static_cast<std::size_t>(
                       std::lround(cfg.rationale_fraction *
                                   static_cast<double>(cfg.paragraphs_per_doc))));
            std::vector<std::size_t> all_slots(cfg.paragraphs_per_doc);
            for (std::size_t i = 0; i < all_slots.size(); ++i) all_slots[i] = i;
            for (auto slot : sample_distinct(rng, all_slots, n_rationale))
                rationale[slot] = true;
        }

        const auto& markers =
            label == StanceLabel::agree ? vocab.agree_ids : vocab.disagree_ids;
        std::string document;
        for (std::size_t p = 0; p < cfg.paragraphs_per_doc; ++p) {
            std::vector<std::size_t> ids;
            if (label == StanceLabel::unrelated) {
                // Off-topic: draw from other topics plus filler, never the
                // claim's topic.
                std::size_t other = rng.below(cfg.topics - 1);
                if (other >= topic) ++other;
                while (ids.size() < cfg.paragraph_len) {
                    if (rng.uniform() < 0.3)
                        ids.push_back(vocab.filler_ids[rng.below(vocab.filler_ids.size())]);
                    else
                        ids.push_back(
                            vocab.topic_ids[other][rng.below(cfg.tokens_per_topic)]);
                }
            } else {
                // Topical: guaranteed claim-token overlap, topic tokens, filler.
                ids.push_back(claim_ids[rng.below(claim_ids.size())]);
                const std::size_t planted = rationale[p] ? marker_count : 0;
                while (ids.size() + planted < cfg.paragraph_len) {
                    const double roll = rng.uniform();
                    if (roll < 0.35)
                        ids.push_back(claim_ids[rng.below(claim_ids.size())]);
                    else if (roll < 0.75)
                        ids.push_back(
                            vocab.topic_ids[topic][rng.below(cfg.tokens_per_topic)]);
                    else
                        ids.push_back(vocab.filler_ids[rng.below(vocab.filler_ids.size())]);
                }
                for (std::size_t k = 0; k < planted; ++k)
                    ids.push_back(markers[rng.below(markers.size())]);
                rng.shuffle(ids);
            }
            std::string paragraph;
            for (auto id : ids) {
                if (!paragraph.empty()) paragraph.push_back(' ');
                paragraph += token(id);
            }
            if (p) document += "\n\n";
            document += paragraph;
        }
        ex.document = document;
        if (stance_class) ex.rationale = trim_rationale(std::move(rationale));
        return ex;
    }
};

std::string format_vector(const std::vector<double>& values) {
    std::string out;
    char buffer[32];
    for (double v : values) {
        std::snprintf(buffer, sizeof(buffer), " %.6f", v);
        out += buffer;
    }
    return out;
}

}  // namespace

SynthResult synth_generate(const SynthConfig& config) {
    config.validate();
    Rng root(config.seed);
    Rng latent_rng = root.fork("latent");
    const LatentVocab vocab = build_latent_vocab(config, latent_rng);

    SynthResult result;
    result.source_catalog = make_catalog(vocab, "src_");
    result.target_catalog = make_catalog(vocab, "tgt_");

    // Both languages realize the same latent space plus independent jitter.
    Rng embed_rng = root.fork("embeddings");
    std::string embeddings;
    embeddings += std::to_string(2 * vocab.base_names.size()) + " " +
                  std::to_string(config.embed_dim) + "\n";
    for (const auto& prefix : {std::string("src_"), std::string("tgt_")}) {
        for (std::size_t id = 0; id < vocab.base_names.size(); ++id) {
            std::vector<double> row = vocab.latents[id];
            for (auto& v : row) v += config.counterpart_noise * embed_rng.gaussian();
            embeddings += language_token(prefix, vocab.base_names[id]);
            embeddings += format_vector(row);
            embeddings.push_back('\n');
        }
    }
    result.embedding_text = std::move(embeddings);

    LanguageGenerator source_gen{config, vocab, "src_", "src", kSourceLanguage,
                                 root.fork("source_examples")};
    LanguageGenerator target_gen{config, vocab, "tgt_", "tgt", kTargetLanguage,
                                 root.fork("target_examples")};
    std::size_t serial = 0;
    for (StanceLabel label : kAllStances)
        for (std::size_t i = 0; i < config.source_per_class; ++i)
            result.source.push_back(source_gen.make_example(label, serial++));
    serial = 0;
    for (StanceLabel label : kAllStances)
        for (std::size_t i = 0; i < config.target_per_class; ++i)
            result.target.push_back(target_gen.make_example(label, serial++));
    return result;
}

}  // namespace clmn
