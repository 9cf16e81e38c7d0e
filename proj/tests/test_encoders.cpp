#include <doctest.h>

#include <cmath>

#include "clmn/encoders.hpp"
#include "clmn/errors.hpp"
#include "clmn/rng.hpp"

using namespace clmn;

namespace {

std::vector<TensorPtr> embed(const std::vector<double>& values) {
    std::vector<TensorPtr> out;
    for (double v : values) out.push_back(Tensor::vec({v}));
    return out;
}

LstmParams zero_lstm(std::size_t input_dim, std::size_t hidden_dim) {
    LstmParams p;
    p.input_dim = input_dim;
    p.hidden_dim = hidden_dim;
    auto zw = [&] { return Tensor::zeros({hidden_dim, input_dim}, true); };
    auto zu = [&] { return Tensor::zeros({hidden_dim, hidden_dim}, true); };
    auto zb = [&] { return Tensor::zeros({hidden_dim}, true); };
    p.w_input = zw();  p.u_input = zu();  p.b_input = zb();
    p.w_forget = zw(); p.u_forget = zu(); p.b_forget = zb();
    p.w_output = zw(); p.u_output = zu(); p.b_output = zb();
    p.w_cell = zw();   p.u_cell = zu();   p.b_cell = zb();
    return p;
}

}  // namespace

TEST_CASE("lstm all-pad input returns the zero vector") {
    Rng rng(3);
    auto params = LstmParams::init(4, 5, rng);
    CHECK(lstm_encode(params, {}, {})->data == std::vector<double>(5, 0.0));
    auto padded = lstm_encode(params, {Tensor::zeros({4}), Tensor::zeros({4})}, {true, true});
    CHECK(padded->data == std::vector<double>(5, 0.0));
}

TEST_CASE("lstm with all-zero weights emits zero hidden state") {
    auto params = zero_lstm(2, 3);
    std::vector<TensorPtr> seq = {Tensor::vec({1.5, -2.0}), Tensor::vec({0.25, 8.0})};
    auto hidden = lstm_encode(params, seq, {false, false});
    CHECK(hidden->data == std::vector<double>(3, 0.0));
}

TEST_CASE("lstm length-1 recurrence matches a hand-computed gate trace") {
    LstmParams p;
    p.input_dim = 1;
    p.hidden_dim = 1;
    p.w_input = Tensor::create({1, 1}, {0.5}, true);
    p.u_input = Tensor::create({1, 1}, {0.3}, true);
    p.b_input = Tensor::vec({0.1}, true);
    p.w_forget = Tensor::create({1, 1}, {-0.4}, true);
    p.u_forget = Tensor::create({1, 1}, {0.2}, true);
    p.b_forget = Tensor::vec({1.0}, true);
    p.w_output = Tensor::create({1, 1}, {0.8}, true);
    p.u_output = Tensor::create({1, 1}, {-0.6}, true);
    p.b_output = Tensor::vec({-0.2}, true);
    p.w_cell = Tensor::create({1, 1}, {0.7}, true);
    p.u_cell = Tensor::create({1, 1}, {0.9}, true);
    p.b_cell = Tensor::vec({0.05}, true);

    const double x = 0.7;
    auto hidden = lstm_encode(p, {Tensor::vec({x})}, {false});

    auto sigma = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const double in_gate = sigma(0.5 * x + 0.1);
    const double out_gate = sigma(0.8 * x - 0.2);
    const double candidate = std::tanh(0.7 * x + 0.05);
    const double cell = in_gate * candidate;  // previous cell is zero
    const double expected = out_gate * std::tanh(cell);
    CHECK(hidden->data[0] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("padding positions never influence encoder outputs") {
    Rng rng(9);
    auto lstm = LstmParams::init(3, 4, rng);
    auto cnn = CnnParams::init(3, 2, 5, rng);
    std::vector<TensorPtr> seq;
    for (int i = 0; i < 4; ++i)
        seq.push_back(Tensor::vec({0.1 * i, -0.2 * i, 0.3}));
    std::vector<bool> mask = {false, false, false, false};

    auto base_lstm = lstm_encode(lstm, seq, mask);
    auto base_cnn = cnn_encode(cnn, seq, mask);

    auto longer = seq;
    longer.push_back(Tensor::vec({9.0, 9.0, 9.0}));
    longer.push_back(Tensor::vec({-7.0, 1.0, 2.0}));
    std::vector<bool> longer_mask = {false, false, false, false, true, true};
    CHECK(lstm_encode(lstm, longer, longer_mask)->data == base_lstm->data);
    CHECK(cnn_encode(cnn, longer, longer_mask)->data == base_cnn->data);
}

TEST_CASE("cnn zero embeddings and zero bias pool to zero") {
    Rng rng(4);
    auto params = CnnParams::init(3, 4, 5, rng);
    params.bias = Tensor::zeros({4}, true);
    std::vector<TensorPtr> seq = {Tensor::zeros({3}), Tensor::zeros({3})};
    CHECK(cnn_encode(params, seq, {false, false})->data == std::vector<double>(4, 0.0));
    CHECK(cnn_encode(params, {}, {})->data == std::vector<double>(4, 0.0));
}

TEST_CASE("cnn averaging filter matches a hand-computed pool value") {
    CnnParams p;
    p.input_dim = 1;
    p.num_filters = 1;
    p.width = 5;
    p.filters = Tensor::create({1, 5}, std::vector<double>(5, 0.2), true);
    p.bias = Tensor::zeros({1}, true);
    // Two tokens [1, 2]; both centered windows see {1, 2} plus zero padding,
    // so each activation is tanh(0.2 * 3) and the pool equals it.
    auto out = cnn_encode(p, embed({1.0, 2.0}), {false, false});
    CHECK(out->data[0] == doctest::Approx(std::tanh(0.6)).epsilon(1e-12));
}

TEST_CASE("permuting tokens away from the max window leaves the encoding unchanged") {
    CnnParams p;
    p.input_dim = 1;
    p.num_filters = 1;
    p.width = 5;
    // Filter reads only the leftmost slot of each window.
    p.filters = Tensor::create({1, 5}, {1, 0, 0, 0, 0}, true);
    p.bias = Tensor::zeros({1}, true);

    std::vector<double> values = {9, 9, 9, 9, 9, 0.1, 0.2, 0.3};
    std::vector<bool> mask(values.size(), false);
    auto base = cnn_encode(p, embed(values), mask);

    std::vector<double> permuted = {9, 9, 9, 9, 9, 0.3, 0.1, 0.2};
    auto moved = cnn_encode(p, embed(permuted), mask);
    CHECK(base->data == moved->data);
    CHECK(base->data[0] == doctest::Approx(std::tanh(9.0)).epsilon(1e-12));
}

TEST_CASE("encoder gradients pass the finite-difference check") {
    Rng rng(15);
    auto lstm = LstmParams::init(2, 3, rng);
    auto cnn = CnnParams::init(2, 3, 5, rng);

    std::vector<TensorPtr> seq;
    for (int i = 0; i < 3; ++i)
        seq.push_back(Tensor::vec({rng.uniform(-1, 1), rng.uniform(-1, 1)}));
    std::vector<bool> mask = {false, false, false};

    ParamSet params;
    lstm.register_params(params, "lstm");
    cnn.register_params(params, "cnn");
    std::vector<TensorPtr> tensors;
    for (const auto& entry : params.items()) tensors.push_back(entry.tensor);

    auto loss = [&]() {
        auto probe = Tensor::vec({0.3, -0.7, 0.9});
        return add(dot(lstm_encode(lstm, seq, mask), probe),
                   dot(cnn_encode(cnn, seq, mask), probe));
    };
    CHECK(gradcheck_params(loss, tensors, 1e-5) < 1e-5);
}

TEST_CASE("encoders reject embedding dim mismatches") {
    Rng rng(1);
    auto lstm = LstmParams::init(3, 2, rng);
    auto cnn = CnnParams::init(3, 2, 5, rng);
    std::vector<TensorPtr> bad = {Tensor::vec({1.0, 2.0})};
    CHECK_THROWS_AS(lstm_encode(lstm, bad, {false}), ShapeError);
    CHECK_THROWS_AS(cnn_encode(cnn, bad, {false}), ShapeError);
    CHECK_THROWS_AS(lstm_encode(lstm, bad, {false, true}), ShapeError);
}
