#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "clmn/tensor.hpp"

namespace clmn {

/// Lowercases (scripts with case), splits on Unicode whitespace, and strips
/// punctuation from token edges. Deterministic; empty text gives an empty
/// sequence.
std::vector<std::string> tokenize(std::string_view text);

/// Token/index map with reserved slots: 0 = padding, 1 = unknown.
class Vocabulary {
public:
    static constexpr std::size_t kPadIndex = 0;
    static constexpr std::size_t kUnkIndex = 1;
    static constexpr const char* kPadToken = "<pad>";
    static constexpr const char* kUnkToken = "<unk>";

    Vocabulary();

    /// Index of `token`, inserting it if new.
    std::size_t add(const std::string& token);
    /// Index of `token`, or the unknown index.
    std::size_t lookup(const std::string& token) const;
    bool contains(const std::string& token) const;
    const std::string& token(std::size_t index) const;
    std::size_t size() const { return tokens_.size(); }

    void save(std::ostream& out) const;
    static Vocabulary load(std::istream& in);

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> tokens_;
};

/// Vocabulary built over tokenized corpus texts, first occurrence first.
Vocabulary build_vocabulary(const std::vector<std::string>& texts);

/// |V| x dim embedding matrix. The pad row is all zeros; tokens absent from
/// the vector file share the unknown row (element-wise mean of loaded rows).
/// Frozen tables never join the tape.
class EmbeddingTable {
public:
    EmbeddingTable(std::size_t vocab_size, std::size_t dim);

    std::size_t dim() const { return dim_; }
    std::size_t rows() const { return rows_.size(); }
    std::vector<double>& row(std::size_t index) { return rows_[index]; }
    const std::vector<double>& row(std::size_t index) const { return rows_[index]; }

    bool frozen() const { return frozen_; }
    void set_frozen(bool frozen) { frozen_ = frozen; }

    /// Constant tensor view of one row (cached; requires the table frozen).
    TensorPtr row_tensor(std::size_t index) const;

    /// Flattened (rows x dim) tensor copy, e.g. for checkpointing.
    TensorPtr as_tensor() const;
    void assign_from_tensor(const Tensor& flat);

private:
    std::size_t dim_;
    bool frozen_ = true;
    std::vector<std::vector<double>> rows_;
    mutable std::vector<TensorPtr> cache_;
};

/// Reads word-vector text format: optional "count dim" header, then one
/// token and `dim` floats per line. Rows are filled for vocabulary tokens
/// found in the file. `expected_dim` of 0 accepts whatever the file carries.
EmbeddingTable load_embeddings(const std::string& path, const Vocabulary& vocab,
                               std::size_t expected_dim = 0);
EmbeddingTable load_embeddings(std::istream& in, const std::string& origin,
                               const Vocabulary& vocab, std::size_t expected_dim = 0);

struct Paragraph {
    std::string text;
    bool padding = false;
};

/// Splits on blank-line boundaries (single newlines do not split), drops
/// whitespace-only paragraphs, keeps the first `max_paragraphs`, and pads
/// with empty flagged paragraphs to exactly `max_paragraphs` entries.
std::vector<Paragraph> split_paragraphs(std::string_view document,
                                        std::size_t max_paragraphs);

/// TF.IDF with idf(t) = ln(N / (1 + df(t))) + 1 over a fitted corpus.
/// Document frequencies are indexed by the fit vocabulary; tokens outside it
/// carry no weight. Pass the same vocabulary the model was fitted with.
class TfidfModel {
public:
    /// Document frequencies over tokenized corpus entries.
    static TfidfModel fit(const std::vector<std::vector<std::string>>& corpus,
                          const Vocabulary& vocab);

    std::size_t corpus_size() const { return corpus_size_; }
    const std::vector<std::int64_t>& document_frequencies() const { return df_; }
    double idf(std::size_t token_index) const;

    /// Cosine of the TF.IDF vectors, clamped to [0,1]; 0 when either vector
    /// is all zero.
    double cosine(const Vocabulary& vocab, const std::vector<std::string>& a,
                  const std::vector<std::string>& b) const;

    /// Rebuilds a fitted model from serialized state (checkpoints).
    static TfidfModel from_state(std::vector<std::int64_t> df, std::size_t corpus_size);

private:
    TfidfModel() = default;
    std::unordered_map<std::size_t, double> weights(
        const Vocabulary& vocab, const std::vector<std::string>& tokens) const;

    std::vector<std::int64_t> df_;
    std::size_t corpus_size_ = 0;
};

}  // namespace clmn
