#pragma once

#include <string>
#include <vector>

#include "clmn/optim.hpp"
#include "clmn/rng.hpp"
#include "clmn/tensor.hpp"

namespace clmn {

/// Single-layer unidirectional LSTM. Gate order: input, forget, output,
/// cell candidate; each has an input-to-hidden matrix, a hidden-to-hidden
/// matrix, and a bias.
struct LstmParams {
    std::size_t input_dim = 0;
    std::size_t hidden_dim = 0;
    TensorPtr w_input, u_input, b_input;
    TensorPtr w_forget, u_forget, b_forget;
    TensorPtr w_output, u_output, b_output;
    TensorPtr w_cell, u_cell, b_cell;

    /// Uniform [-0.08, 0.08] init; forget-gate bias starts at 1.
    static LstmParams init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);
    void register_params(ParamSet& params, const std::string& prefix) const;
};

/// 1-D convolution filters over the embedding dimension plus per-filter bias.
struct CnnParams {
    std::size_t input_dim = 0;
    std::size_t num_filters = 0;
    std::size_t width = 0;
    TensorPtr filters;  // (num_filters, width * input_dim)
    TensorPtr bias;     // (num_filters)

    static CnnParams init(std::size_t input_dim, std::size_t num_filters, std::size_t width,
                          Rng& rng);
    void register_params(ParamSet& params, const std::string& prefix) const;
};

/// Final hidden state of the LSTM recurrence over non-pad positions.
/// All-pad (or empty) input encodes to the zero vector.
TensorPtr lstm_encode(const LstmParams& params, const std::vector<TensorPtr>& embedded,
                      const std::vector<bool>& pad_mask);

/// Same-padded width-`width` convolution over non-pad positions, tanh, then
/// max-pool over time per filter. All-pad input encodes to the zero vector.
TensorPtr cnn_encode(const CnnParams& params, const std::vector<TensorPtr>& embedded,
                     const std::vector<bool>& pad_mask);

}  // namespace clmn
