#include "clmn/encoders.hpp"

#include "clmn/errors.hpp"

namespace clmn {

namespace {

TensorPtr uniform_tensor(std::vector<std::size_t> shape, Rng& rng, double bound = 0.08) {
    std::size_t n = 1;
    for (auto e : shape) n *= e;
    std::vector<double> values(n);
    for (auto& v : values) v = rng.uniform(-bound, bound);
    return Tensor::create(std::move(shape), std::move(values), true);
}

std::vector<TensorPtr> real_positions(const std::vector<TensorPtr>& embedded,
                                      const std::vector<bool>& pad_mask,
                                      std::size_t input_dim, const char* who) {
    if (pad_mask.size() != embedded.size())
        throw ShapeError(std::string(who) + ": mask length " + std::to_string(pad_mask.size()) +
                         " != sequence length " + std::to_string(embedded.size()));
    std::vector<TensorPtr> kept;
    for (std::size_t i = 0; i < embedded.size(); ++i) {
        if (pad_mask[i]) continue;
        if (embedded[i]->rank() != 1 || embedded[i]->shape[0] != input_dim)
            throw ShapeError(std::string(who) + ": embedding dim " +
                             std::to_string(embedded[i]->size()) + " does not match params (" +
                             std::to_string(input_dim) + ")");
        kept.push_back(embedded[i]);
    }
    return kept;
}

}  // namespace

LstmParams LstmParams::init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    auto w = [&] { return uniform_tensor({hidden_dim, input_dim}, rng); };
    auto u = [&] { return uniform_tensor({hidden_dim, hidden_dim}, rng); };
    p.w_input = w();  p.u_input = u();  p.b_input = Tensor::zeros({hidden_dim}, true);
    p.w_forget = w(); p.u_forget = u(); p.b_forget = Tensor::full({hidden_dim}, 1.0, true);
    p.w_output = w(); p.u_output = u(); p.b_output = Tensor::zeros({hidden_dim}, true);
    p.w_cell = w();   p.u_cell = u();   p.b_cell = Tensor::zeros({hidden_dim}, true);
    return p;
}

void LstmParams::register_params(ParamSet& params, const std::string& prefix) const {
    params.add(prefix + ".w_input", w_input);
    params.add(prefix + ".u_input", u_input);
    params.add(prefix + ".b_input", b_input);
    params.add(prefix + ".w_forget", w_forget);
    params.add(prefix + ".u_forget", u_forget);
    params.add(prefix + ".b_forget", b_forget);
    params.add(prefix + ".w_output", w_output);
    params.add(prefix + ".u_output", u_output);
    params.add(prefix + ".b_output", b_output);
    params.add(prefix + ".w_cell", w_cell);
    params.add(prefix + ".u_cell", u_cell);
    params.add(prefix + ".b_cell", b_cell);
}

CnnParams CnnParams::init(std::size_t input_dim, std::size_t num_filters, std::size_t width,
                          Rng& rng) {
    CnnParams p;
    p.input_dim = input_dim;
    p.num_filters = num_filters;
    p.width = width;
    p.filters = uniform_tensor({num_filters, width * input_dim}, rng);
    p.bias = Tensor::zeros({num_filters}, true);
    return p;
}

void CnnParams::register_params(ParamSet& params, const std::string& prefix) const {
    params.add(prefix + ".filters", filters);
    params.add(prefix + ".bias", bias);
}

TensorPtr lstm_encode(const LstmParams& params, const std::vector<TensorPtr>& embedded,
                      const std::vector<bool>& pad_mask) {
    const auto inputs = real_positions(embedded, pad_mask, params.input_dim, "lstm_encode");
    if (inputs.empty()) return Tensor::zeros({params.hidden_dim});

    TensorPtr hidden = Tensor::zeros({params.hidden_dim});
    TensorPtr cell = Tensor::zeros({params.hidden_dim});
    for (const auto& x : inputs) {
        auto gate = [&](const TensorPtr& w, const TensorPtr& u, const TensorPtr& b) {
            return add(add(matmul(w, x), matmul(u, hidden)), b);
        };
        auto in_gate = sigmoid(gate(params.w_input, params.u_input, params.b_input));
        auto forget_gate = sigmoid(gate(params.w_forget, params.u_forget, params.b_forget));
        auto out_gate = sigmoid(gate(params.w_output, params.u_output, params.b_output));
        auto candidate = tanh(gate(params.w_cell, params.u_cell, params.b_cell));
        cell = add(mul(forget_gate, cell), mul(in_gate, candidate));
        hidden = mul(out_gate, tanh(cell));
    }
    return hidden;
}

TensorPtr cnn_encode(const CnnParams& params, const std::vector<TensorPtr>& embedded,
                     const std::vector<bool>& pad_mask) {
    const auto inputs = real_positions(embedded, pad_mask, params.input_dim, "cnn_encode");
    if (inputs.empty()) return Tensor::zeros({params.num_filters});

    const std::size_t len = inputs.size();
    const std::size_t half = params.width / 2;
    const TensorPtr edge_zero = Tensor::zeros({params.input_dim});

    std::vector<TensorPtr> activations;
    activations.reserve(len);
    for (std::size_t t = 0; t < len; ++t) {
        // Window centered at t, zero-padded past either edge.
        std::vector<TensorPtr> window;
        window.reserve(params.width);
        for (std::size_t k = 0; k < params.width; ++k) {
            const std::ptrdiff_t pos =
                static_cast<std::ptrdiff_t>(t + k) - static_cast<std::ptrdiff_t>(half);
            if (pos < 0 || pos >= static_cast<std::ptrdiff_t>(len))
                window.push_back(edge_zero);
            else
                window.push_back(inputs[static_cast<std::size_t>(pos)]);
        }
        auto stacked = concat(window);  // (width * input_dim)
        activations.push_back(tanh(add(matmul(params.filters, stacked), params.bias)));
    }
    if (activations.size() == 1) return activations.front();
    return max_axis(stack_rows(activations), 0);
}

}  // namespace clmn
