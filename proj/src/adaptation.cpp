#include "clmn/adaptation.hpp"

#include "clmn/errors.hpp"

namespace clmn {

PairPolicy parse_pair_policy(const std::string& text) {
    if (text == "uniform") return PairPolicy::uniform;
    if (text == "balanced") return PairPolicy::balanced;
    if (text == "exhaustive") return PairPolicy::exhaustive;
    throw ConfigError("unknown pair policy '" + text + "'");
}

std::string to_string(PairPolicy policy) {
    switch (policy) {
        case PairPolicy::uniform: return "uniform";
        case PairPolicy::balanced: return "balanced";
        case PairPolicy::exhaustive: return "exhaustive";
    }
    throw ConfigError("invalid pair policy value");
}

TensorPtr sea_loss(const TensorPtr& source_repr, const TensorPtr& target_repr,
                   bool same_label) {
    if (source_repr->shape != target_repr->shape)
        throw ShapeError("sea_loss: representation dimensions differ");
    if (!same_label) return Tensor::scalar(0.0);
    return squared_distance(source_repr, target_repr);
}

TensorPtr ssa_loss(const TensorPtr& source_repr, const TensorPtr& target_repr,
                   bool same_label, double margin) {
    if (source_repr->shape != target_repr->shape)
        throw ShapeError("ssa_loss: representation dimensions differ");
    if (margin <= 0.0) throw ConfigError("ssa_loss: margin must be positive");
    if (same_label) return Tensor::scalar(0.0);
    auto gap = sub(Tensor::scalar(margin), squared_distance(source_repr, target_repr));
    return relu(gap);
}

TensorPtr csa_loss(const TensorPtr& source_repr, const TensorPtr& target_repr,
                   bool same_label, double margin) {
    return add(sea_loss(source_repr, target_repr, same_label),
               ssa_loss(source_repr, target_repr, same_label, margin));
}

TensorPtr total_loss(const TensorPtr& classification, const TensorPtr& alignment,
                     double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw ConfigError("total_loss: alpha must lie in [0,1], got " + std::to_string(alpha));
    return add(scale(classification, 1.0 - alpha), scale(alignment, alpha));
}

double total_loss(double classification, double alignment, double alpha) {
    if (alpha < 0.0 || alpha > 1.0)
        throw ConfigError("total_loss: alpha must lie in [0,1], got " + std::to_string(alpha));
    return (1.0 - alpha) * classification + alpha * alignment;
}

std::vector<CrossPair> sample_pairs(const std::vector<std::size_t>& source_labels,
                                    const std::vector<std::size_t>& target_labels,
                                    PairPolicy policy, std::uint64_t seed) {
    if (source_labels.empty()) throw ConfigError("sample_pairs: empty source set");
    if (target_labels.empty()) throw ConfigError("sample_pairs: empty target set");

    std::vector<CrossPair> pairs;
    if (policy == PairPolicy::exhaustive) {
        pairs.reserve(source_labels.size() * target_labels.size());
        for (std::size_t t = 0; t < target_labels.size(); ++t)
            for (std::size_t s = 0; s < source_labels.size(); ++s)
                pairs.push_back({s, t, source_labels[s] == target_labels[t]});
        return pairs;
    }

    // Index sources by label for the balanced draw.
    std::vector<std::vector<std::size_t>> by_label;
    std::size_t max_label = 0;
    for (std::size_t label : source_labels) max_label = std::max(max_label, label);
    by_label.resize(max_label + 1);
    for (std::size_t s = 0; s < source_labels.size(); ++s)
        by_label[source_labels[s]].push_back(s);

    Rng rng(seed);
    pairs.reserve(target_labels.size());
    for (std::size_t t = 0; t < target_labels.size(); ++t) {
        std::size_t chosen;
        if (policy == PairPolicy::uniform) {
            chosen = rng.below(source_labels.size());
        } else {
            // Fair coin between a same-label and a different-label source;
            // fall back to a uniform draw when the pool is empty.
            const bool want_same = rng.coin();
            const std::size_t label = target_labels[t];
            std::vector<std::size_t> pool;
            if (want_same) {
                if (label < by_label.size()) pool = by_label[label];
            } else {
                for (std::size_t s = 0; s < source_labels.size(); ++s)
                    if (source_labels[s] != label) pool.push_back(s);
            }
            chosen = pool.empty() ? rng.below(source_labels.size())
                                  : pool[rng.below(pool.size())];
        }
        pairs.push_back({chosen, t, source_labels[chosen] == target_labels[t]});
    }
    return pairs;
}

}  // namespace clmn
