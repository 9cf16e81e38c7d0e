#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clmn/stance.hpp"

namespace clmn {

inline constexpr const char* kSourceLanguage = "source";
inline constexpr const char* kTargetLanguage = "target";

/// One claim-document pair with its stance and, when annotated, per-paragraph
/// rationale flags (trailing false flags are trimmed to a canonical form).
struct StanceExample {
    std::string id;
    std::string claim;
    std::string document;
    StanceLabel label = StanceLabel::unrelated;
    std::string language;
    std::vector<bool> rationale;

    bool operator==(const StanceExample&) const = default;
};

/// Fake-News-Challenge-style pair of CSVs: bodies (Body ID, articleBody) and
/// stances (Headline, Body ID, Stance). Stances join onto bodies by id.
std::vector<StanceExample> load_fnc(const std::string& bodies_path,
                                    const std::string& stances_path);
void write_fnc(const std::string& bodies_path, const std::string& stances_path,
               const std::vector<StanceExample>& examples);

/// Target-language CSV with columns claim, document, stance, rationales;
/// the rationales field holds space-separated "paragraph:flag" entries.
std::vector<StanceExample> load_target(const std::string& path);
void write_target(const std::string& path, const std::vector<StanceExample>& examples);

/// Knobs for the synthetic bilingual benchmark. Token inventory per language:
/// topics * tokens_per_topic topical tokens, two marker pools, and filler
/// making up the rest of vocab_size.
struct SynthConfig {
    std::size_t vocab_size = 88;        // per language
    std::size_t source_per_class = 50;  // examples per stance class
    std::size_t target_per_class = 25;
    double signal_strength = 1.0;       // in [0,1]; marker density in rationales
    std::size_t paragraphs_per_doc = 3;
    double rationale_fraction = 0.34;   // fraction of paragraphs carrying markers
    std::uint64_t seed = 1;

    std::size_t embed_dim = 16;
    double counterpart_noise = 0.1;  // sigma of per-language jitter around the latent
    std::size_t topics = 6;
    std::size_t tokens_per_topic = 8;
    std::size_t markers_per_class = 4;
    std::size_t claim_len = 5;
    std::size_t paragraph_len = 8;

    std::size_t filler_count() const;
    void validate() const;
};

/// Token role lists for one synthetic language, for oracles and debugging.
struct SynthTokenCatalog {
    std::vector<std::string> agree_markers;
    std::vector<std::string> disagree_markers;
    std::vector<std::vector<std::string>> topic_tokens;
    std::vector<std::string> filler;
};

struct SynthResult {
    std::vector<StanceExample> source;
    std::vector<StanceExample> target;
    std::string embedding_text;  // word-vector format covering both languages
    SynthTokenCatalog source_catalog;
    SynthTokenCatalog target_catalog;
};

/// Two disjoint vocabularies drawn from one latent embedding space, stance
/// signal planted through class markers and topic overlap; byte-identical
/// output for a given config.
SynthResult synth_generate(const SynthConfig& config);

}  // namespace clmn
