#include "clmn/memory_net.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

#include "clmn/errors.hpp"

namespace clmn {

std::string to_string(StanceLabel label) {
    switch (label) {
        case StanceLabel::agree: return "agree";
        case StanceLabel::disagree: return "disagree";
        case StanceLabel::discuss: return "discuss";
        case StanceLabel::unrelated: return "unrelated";
    }
    throw std::runtime_error("to_string: invalid stance value");
}

StanceLabel parse_stance(std::string_view text) {
    std::string lowered(text);
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    for (StanceLabel label : kAllStances)
        if (lowered == to_string(label)) return label;
    throw ParseError("unknown stance label '" + std::string(text) + "'");
}

namespace {

TensorPtr uniform_tensor(std::vector<std::size_t> shape, Rng& rng, double bound = 0.08) {
    std::size_t n = 1;
    for (auto e : shape) n *= e;
    std::vector<double> values(n);
    for (auto& v : values) v = rng.uniform(-bound, bound);
    return Tensor::create(std::move(shape), std::move(values), true);
}

}  // namespace

NetworkParams NetworkParams::init(const ModelConfig& config, Rng& rng) {
    NetworkParams net;
    Rng claim_lstm_rng = rng.fork("claim_lstm");
    Rng doc_lstm_rng = rng.fork("doc_lstm");
    Rng claim_cnn_rng = rng.fork("claim_cnn");
    Rng doc_cnn_rng = rng.fork("doc_cnn");
    Rng sim_rng = rng.fork("similarity");
    net.claim_lstm = LstmParams::init(config.embed_dim, config.lstm_hidden, claim_lstm_rng);
    net.doc_lstm = LstmParams::init(config.embed_dim, config.lstm_hidden, doc_lstm_rng);
    net.claim_cnn = CnnParams::init(config.embed_dim, config.cnn_filters, config.cnn_width,
                                    claim_cnn_rng);
    net.doc_cnn = CnnParams::init(config.embed_dim, config.cnn_filters, config.cnn_width,
                                  doc_cnn_rng);
    net.sim_lstm = uniform_tensor({config.lstm_hidden, config.lstm_hidden}, sim_rng);
    net.sim_cnn = uniform_tensor({config.cnn_filters, config.cnn_filters}, sim_rng);
    return net;
}

void NetworkParams::register_params(ParamSet& params, const std::string& prefix) const {
    claim_lstm.register_params(params, prefix + ".claim_lstm");
    doc_lstm.register_params(params, prefix + ".doc_lstm");
    claim_cnn.register_params(params, prefix + ".claim_cnn");
    doc_cnn.register_params(params, prefix + ".doc_cnn");
    params.add(prefix + ".sim_lstm", sim_lstm);
    params.add(prefix + ".sim_cnn", sim_cnn);
}

ClassifierParams ClassifierParams::init(const ModelConfig& config, Rng& rng) {
    ClassifierParams c;
    c.weight = uniform_tensor({kNumStances, config.joint_dim()}, rng);
    c.bias = Tensor::zeros({kNumStances}, true);
    return c;
}

void ClassifierParams::register_params(ParamSet& params, const std::string& prefix) const {
    params.add(prefix + ".weight", weight);
    params.add(prefix + ".bias", bias);
}

std::size_t EncodedExample::real_count() const {
    std::size_t count = 0;
    for (bool padding : slot_padding)
        if (!padding) ++count;
    return count;
}

std::size_t ForwardTrace::real_count() const {
    std::size_t count = 0;
    for (bool padding : slot_padding)
        if (!padding) ++count;
    return count;
}

std::vector<double> ForwardTrace::lstm_score_values() const {
    std::vector<double> out;
    out.reserve(lstm_scores.size());
    for (const auto& s : lstm_scores) out.push_back(s->value());
    return out;
}

std::vector<double> ForwardTrace::cnn_score_values() const {
    std::vector<double> out;
    out.reserve(cnn_scores.size());
    for (const auto& s : cnn_scores) out.push_back(s->value());
    return out;
}

StanceLabel ForwardTrace::predicted() const {
    const auto& p = probabilities->data;
    std::size_t best = 0;
    for (std::size_t i = 1; i < p.size(); ++i)
        if (p[i] > p[best]) best = i;
    return static_cast<StanceLabel>(best);
}

std::vector<TensorPtr> bilinear_similarity(const TensorPtr& query, const TensorPtr& map,
                                           const std::vector<TensorPtr>& memory) {
    if (map->rank() != 2)
        throw ShapeError("bilinear_similarity: map must be a matrix");
    // query^T * map once, then a dot per slot.
    auto projected = matmul(query, map);
    std::vector<TensorPtr> scores;
    scores.reserve(memory.size());
    for (const auto& slot : memory) scores.push_back(dot(projected, slot));
    return scores;
}

namespace {

std::vector<TensorPtr> embed_tokens(const std::vector<std::size_t>& tokens,
                                    const EmbeddingTable& embeddings,
                                    std::size_t token_cap) {
    std::vector<TensorPtr> out;
    const std::size_t count = std::min(tokens.size(), token_cap);
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) out.push_back(embeddings.row_tensor(tokens[i]));
    return out;
}

}  // namespace

ForwardTrace encode_inputs(const NetworkParams& net, const EncodedExample& example,
                           const EmbeddingTable& embeddings, const ModelConfig& config) {
    const std::size_t slots = config.max_paragraphs;
    if (example.slot_tokens.size() != slots || example.slot_padding.size() != slots ||
        example.tfidf_sim.size() != slots)
        throw ShapeError("encode_inputs: example must carry exactly " + std::to_string(slots) +
                         " evidence slots");

    ForwardTrace trace;
    trace.slot_padding = example.slot_padding;
    trace.tfidf_scores = example.tfidf_sim;

    auto claim_embedded = embed_tokens(example.claim_tokens, embeddings, config.token_cap);
    const std::vector<bool> claim_mask(claim_embedded.size(), false);
    trace.claim_lstm_vec = lstm_encode(net.claim_lstm, claim_embedded, claim_mask);
    trace.claim_cnn_vec = cnn_encode(net.claim_cnn, claim_embedded, claim_mask);

    trace.memory_lstm.reserve(slots);
    trace.memory_cnn.reserve(slots);
    for (std::size_t j = 0; j < slots; ++j) {
        if (example.slot_padding[j]) {
            trace.memory_lstm.push_back(Tensor::zeros({config.lstm_hidden}));
            trace.memory_cnn.push_back(Tensor::zeros({config.cnn_filters}));
            continue;
        }
        auto embedded = embed_tokens(example.slot_tokens[j], embeddings, config.token_cap);
        const std::vector<bool> mask(embedded.size(), false);
        trace.memory_lstm.push_back(lstm_encode(net.doc_lstm, embedded, mask));
        trace.memory_cnn.push_back(cnn_encode(net.doc_cnn, embedded, mask));
    }
    return trace;
}

void generalize(ForwardTrace& trace, const NetworkParams& net) {
    const std::size_t slots = trace.memory_lstm.size();
    trace.memory_lstm_gated.clear();
    trace.memory_cnn_gated.clear();
    trace.lstm_scores.assign(slots, nullptr);
    trace.cnn_scores.assign(slots, nullptr);

    // (1) LSTM memory scaled by the TF.IDF similarity.
    for (std::size_t j = 0; j < slots; ++j)
        trace.memory_lstm_gated.push_back(scale(trace.memory_lstm[j], trace.tfidf_scores[j]));

    // (2) Raw LSTM-based similarity from the updated memory.
    auto lstm_projected = matmul(trace.claim_lstm_vec, net.sim_lstm);
    for (std::size_t j = 0; j < slots; ++j)
        trace.lstm_scores[j] = trace.slot_padding[j]
                                   ? Tensor::scalar(0.0)
                                   : dot(lstm_projected, trace.memory_lstm_gated[j]);

    // (3) CNN memory scaled by the squashed similarity; raw scores are
    // unbounded so the gate sees a sigmoid copy.
    for (std::size_t j = 0; j < slots; ++j) {
        if (trace.slot_padding[j]) {
            trace.memory_cnn_gated.push_back(trace.memory_cnn[j]);
            continue;
        }
        trace.memory_cnn_gated.push_back(
            scale_by(trace.memory_cnn[j], sigmoid(trace.lstm_scores[j])));
    }

    // (4) Raw CNN-based similarity from the updated memory.
    auto cnn_projected = matmul(trace.claim_cnn_vec, net.sim_cnn);
    for (std::size_t j = 0; j < slots; ++j)
        trace.cnn_scores[j] = trace.slot_padding[j]
                                  ? Tensor::scalar(0.0)
                                  : dot(cnn_projected, trace.memory_cnn_gated[j]);
}

TensorPtr output_repr(const ForwardTrace& trace) {
    const std::size_t filters = trace.memory_cnn_gated.empty()
                                    ? 0
                                    : trace.memory_cnn_gated.front()->size();
    std::vector<TensorPtr> real_cnn_memory;
    std::vector<TensorPtr> real_lstm_scores, real_cnn_scores;
    std::vector<double> real_tfidf;
    for (std::size_t j = 0; j < trace.slot_padding.size(); ++j) {
        if (trace.slot_padding[j]) continue;
        real_cnn_memory.push_back(trace.memory_cnn_gated[j]);
        real_lstm_scores.push_back(trace.lstm_scores[j]);
        real_cnn_scores.push_back(trace.cnn_scores[j]);
        real_tfidf.push_back(trace.tfidf_scores[j]);
    }
    if (real_cnn_memory.empty()) return Tensor::zeros({filters + 6});

    auto memory_mean = real_cnn_memory.size() == 1
                           ? real_cnn_memory.front()
                           : mean_axis(stack_rows(real_cnn_memory), 0);

    const double tfidf_max = *std::max_element(real_tfidf.begin(), real_tfidf.end());
    const double tfidf_mean =
        std::accumulate(real_tfidf.begin(), real_tfidf.end(), 0.0) /
        static_cast<double>(real_tfidf.size());

    auto lstm_vec = concat(real_lstm_scores);
    auto cnn_vec = concat(real_cnn_scores);
    return concat({memory_mean, Tensor::vec({tfidf_max, tfidf_mean}), max_axis(lstm_vec, 0),
                   mean_axis(lstm_vec, 0), max_axis(cnn_vec, 0), mean_axis(cnn_vec, 0)});
}

ForwardTrace forward(const NetworkParams& net, const ClassifierParams& classifier,
                     const EncodedExample& example, const EmbeddingTable& embeddings,
                     const ModelConfig& config) {
    ForwardTrace trace = encode_inputs(net, example, embeddings, config);
    generalize(trace, net);
    trace.joint = concat({output_repr(trace), trace.claim_lstm_vec, trace.claim_cnn_vec});
    trace.logits = add(matmul(classifier.weight, trace.joint), classifier.bias);
    trace.probabilities = softmax(trace.logits);
    return trace;
}

std::vector<std::size_t> rank_evidence(const ForwardTrace& trace) {
    std::vector<std::size_t> real;
    for (std::size_t j = 0; j < trace.slot_padding.size(); ++j)
        if (!trace.slot_padding[j]) real.push_back(j);
    std::stable_sort(real.begin(), real.end(), [&](std::size_t a, std::size_t b) {
        const double sa = trace.cnn_scores[a]->value();
        const double sb = trace.cnn_scores[b]->value();
        if (sa != sb) return sa > sb;
        return a < b;
    });
    return real;
}

}  // namespace clmn
