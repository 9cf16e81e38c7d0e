#pragma once

#include <string>
#include <vector>

#include "clmn/encoders.hpp"
#include "clmn/stance.hpp"
#include "clmn/tensor.hpp"
#include "clmn/text.hpp"

namespace clmn {

/// Model dimensions shared by every component.
struct ModelConfig {
    std::size_t embed_dim = 300;
    std::size_t lstm_hidden = 300;   // claim/document LSTM size
    std::size_t cnn_filters = 100;   // claim/document CNN feature maps
    std::size_t cnn_width = 5;
    std::size_t max_paragraphs = 9;  // evidence slots per document
    std::size_t token_cap = 100;     // tokens kept per claim / per paragraph

    /// Joint representation width: mean(cnn memory) + 6 similarity stats +
    /// claim LSTM + claim CNN.
    std::size_t joint_dim() const { return cnn_filters + 6 + lstm_hidden + cnn_filters; }
};

/// One memory network: four independent encoders plus the two bilinear
/// similarity maps.
struct NetworkParams {
    LstmParams claim_lstm, doc_lstm;
    CnnParams claim_cnn, doc_cnn;
    TensorPtr sim_lstm;  // (lstm_hidden, lstm_hidden)
    TensorPtr sim_cnn;   // (cnn_filters, cnn_filters)

    static NetworkParams init(const ModelConfig& config, Rng& rng);
    void register_params(ParamSet& params, const std::string& prefix) const;
};

/// Stance classifier over the joint representation; shared across networks.
struct ClassifierParams {
    TensorPtr weight;  // (4, joint_dim)
    TensorPtr bias;    // (4)

    static ClassifierParams init(const ModelConfig& config, Rng& rng);
    void register_params(ParamSet& params, const std::string& prefix) const;
};

/// Tokenized claim/document pair ready for the network: token indices,
/// fixed evidence slots, and per-slot TF.IDF similarities (0 on padding).
struct EncodedExample {
    std::string id;
    std::vector<std::size_t> claim_tokens;
    std::vector<std::vector<std::size_t>> slot_tokens;  // max_paragraphs entries
    std::vector<bool> slot_padding;
    std::vector<double> tfidf_sim;
    StanceLabel label = StanceLabel::unrelated;
    std::vector<bool> rationale;  // per real paragraph; may be empty

    std::size_t real_count() const;
};

/// Everything one forward pass produced, kept for loss terms, alignment,
/// and evidence ranking.
struct ForwardTrace {
    TensorPtr claim_lstm_vec;                  // claim LSTM encoding
    TensorPtr claim_cnn_vec;                   // claim CNN encoding
    std::vector<TensorPtr> memory_lstm;        // per-slot LSTM memory, pre-gating
    std::vector<TensorPtr> memory_lstm_gated;  // after the TF.IDF gate
    std::vector<TensorPtr> memory_cnn;         // per-slot CNN memory, pre-gating
    std::vector<TensorPtr> memory_cnn_gated;   // after the sigmoid similarity gate
    std::vector<double> tfidf_scores;
    std::vector<TensorPtr> lstm_scores;        // raw bilinear scores per slot
    std::vector<TensorPtr> cnn_scores;
    std::vector<bool> slot_padding;
    TensorPtr joint;          // representation fed to classifier and alignment
    TensorPtr logits;
    TensorPtr probabilities;  // softmax over the four stances

    std::size_t real_count() const;
    std::vector<double> lstm_score_values() const;
    std::vector<double> cnn_score_values() const;
    StanceLabel predicted() const;
};

/// Raw bilinear scores query^T * map * memory_j per slot.
std::vector<TensorPtr> bilinear_similarity(const TensorPtr& query, const TensorPtr& map,
                                           const std::vector<TensorPtr>& memory);

/// Stage 1: encode claim and evidence slots; padded slots hold zero vectors.
ForwardTrace encode_inputs(const NetworkParams& net, const EncodedExample& example,
                           const EmbeddingTable& embeddings, const ModelConfig& config);

/// Stage 2, in order: gate LSTM memory by TF.IDF similarity, score it,
/// gate CNN memory by the squashed score, score that.
void generalize(ForwardTrace& trace, const NetworkParams& net);

/// Stage 3: mean of gated CNN memory over real slots plus [max, mean] of the
/// three similarity vectors; zeros when every slot is padding.
TensorPtr output_repr(const ForwardTrace& trace);

/// Full pass: stages 1-3, then joint = concat(output, claim encodings) and
/// the stance softmax.
ForwardTrace forward(const NetworkParams& net, const ClassifierParams& classifier,
                     const EncodedExample& example, const EmbeddingTable& embeddings,
                     const ModelConfig& config);

/// Real-slot indices ordered by descending CNN similarity, ties toward the
/// lower paragraph index.
std::vector<std::size_t> rank_evidence(const ForwardTrace& trace);

}  // namespace clmn
