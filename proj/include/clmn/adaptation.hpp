#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "clmn/rng.hpp"
#include "clmn/tensor.hpp"

namespace clmn {

/// One cross-language training pair: indices into the source and target
/// example sets plus the same-label flag y'.
struct CrossPair {
    std::size_t source_index = 0;
    std::size_t target_index = 0;
    bool same_label = false;
};

enum class PairPolicy {
    uniform,    // each target paired with one uniform source draw
    balanced,   // fair coin between a same-label and a different-label draw
    exhaustive  // every source x target combination (tiny sets only)
};

PairPolicy parse_pair_policy(const std::string& text);
std::string to_string(PairPolicy policy);

struct AdaptationConfig {
    double alpha = 0.7;  // balance between classification and alignment
    double margin = 1.0;
    PairPolicy policy = PairPolicy::balanced;
    std::uint64_t seed = 1;
};

/// Same-label pull term: squared Euclidean distance when y'=1, else 0.
TensorPtr sea_loss(const TensorPtr& source_repr, const TensorPtr& target_repr,
                   bool same_label);

/// Different-label push term: max(0, margin - squared distance) when y'=0,
/// else 0.
TensorPtr ssa_loss(const TensorPtr& source_repr, const TensorPtr& target_repr,
                   bool same_label, double margin);

/// sea + ssa; exactly one addend is non-zero for any single pair.
TensorPtr csa_loss(const TensorPtr& source_repr, const TensorPtr& target_repr,
                   bool same_label, double margin);

/// (1 - alpha) * classification + alpha * alignment. alpha must lie in [0,1].
TensorPtr total_loss(const TensorPtr& classification, const TensorPtr& alignment,
                     double alpha);
double total_loss(double classification, double alignment, double alpha);

/// Epoch-length pair stream over label sequences (one pair per target under
/// uniform/balanced; the full cross product under exhaustive). Reproducible
/// for a given seed.
std::vector<CrossPair> sample_pairs(const std::vector<std::size_t>& source_labels,
                                    const std::vector<std::size_t>& target_labels,
                                    PairPolicy policy, std::uint64_t seed);

}  // namespace clmn
