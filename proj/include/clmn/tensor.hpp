#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

namespace clmn {

class Tensor;
using TensorPtr = std::shared_ptr<Tensor>;

/// Dense row-major tensor of 64-bit floats, optionally linked into a
/// reverse-mode tape. Interior nodes created by primitives carry a backprop
/// closure plus shared ownership of their operands, so a graph stays alive
/// as long as its root does. Leaves with requires_grad=false never receive
/// gradient.
class Tensor : public std::enable_shared_from_this<Tensor> {
public:
    std::vector<std::size_t> shape;
    std::vector<double> data;
    bool requires_grad = false;
    std::vector<double> grad;  // same length as data once backward touches it

    // Tape linkage; empty/null on leaves.
    std::vector<TensorPtr> parents;
    std::function<void(const Tensor&)> backprop;

    static TensorPtr create(std::vector<std::size_t> shape, std::vector<double> values,
                            bool requires_grad = false);
    static TensorPtr zeros(std::vector<std::size_t> shape, bool requires_grad = false);
    static TensorPtr full(std::vector<std::size_t> shape, double value,
                          bool requires_grad = false);
    static TensorPtr scalar(double value, bool requires_grad = false);
    /// 1-D tensor from a value list.
    static TensorPtr vec(std::vector<double> values, bool requires_grad = false);

    std::size_t size() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    bool is_scalar() const { return data.size() == 1; }
    /// Value of a size-1 tensor.
    double value() const;
    bool on_tape() const { return static_cast<bool>(backprop) || !parents.empty(); }

    void ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), 0.0);
    }
    void clear_grad() { grad.clear(); }
    bool has_grad() const { return grad.size() == data.size() && !data.empty(); }
};

/// RAII guard that disables tape construction on the current thread
/// (inference-only forwards).
class NoGradGuard {
public:
    NoGradGuard();
    ~NoGradGuard();
    NoGradGuard(const NoGradGuard&) = delete;
    NoGradGuard& operator=(const NoGradGuard&) = delete;
};

bool grad_enabled();

// Elementwise; operands must share a shape.
TensorPtr add(const TensorPtr& a, const TensorPtr& b);
TensorPtr sub(const TensorPtr& a, const TensorPtr& b);
TensorPtr mul(const TensorPtr& a, const TensorPtr& b);
/// Sum of same-shape tensors, accumulated left to right.
TensorPtr add_n(const std::vector<TensorPtr>& terms);
TensorPtr scale(const TensorPtr& a, double factor);
/// Elementwise product with a size-1 tensor (gradient flows to both).
TensorPtr scale_by(const TensorPtr& a, const TensorPtr& factor);
TensorPtr neg(const TensorPtr& a);

/// (m,n)x(n,p)->(m,p); (m,n)x(n)->(m); (n)x(n,p)->(p).
TensorPtr matmul(const TensorPtr& a, const TensorPtr& b);
/// 1-D inner product -> scalar.
TensorPtr dot(const TensorPtr& a, const TensorPtr& b);

/// 1-D tensors joined end to end.
TensorPtr concat(const std::vector<TensorPtr>& parts);
/// k same-length 1-D tensors stacked into a (k,n) matrix.
TensorPtr stack_rows(const std::vector<TensorPtr>& rows);

/// Sum of all elements -> scalar.
TensorPtr sum(const TensorPtr& a);
/// Mean/max over one axis of a 1-D or 2-D tensor; the axis is removed
/// (1-D input reduces to a scalar). Max ties break toward the lower index.
TensorPtr mean_axis(const TensorPtr& a, std::size_t axis);
TensorPtr max_axis(const TensorPtr& a, std::size_t axis);

TensorPtr tanh(const TensorPtr& a);
TensorPtr sigmoid(const TensorPtr& a);
TensorPtr relu(const TensorPtr& a);
/// 1-D softmax; errors on an empty input.
TensorPtr softmax(const TensorPtr& a);
/// Numerically stable logsumexp(logits) - logits[target] -> scalar.
TensorPtr cross_entropy_with_logits(const TensorPtr& logits, std::size_t target);

/// sum((a-b)^2) -> scalar.
TensorPtr squared_distance(const TensorPtr& a, const TensorPtr& b);
/// L2 distance -> scalar; gradient defined as zero at coincident points.
TensorPtr euclidean_distance(const TensorPtr& a, const TensorPtr& b);
/// Cosine of two 1-D tensors; 0 when either is a zero vector.
TensorPtr cosine_similarity(const TensorPtr& a, const TensorPtr& b);

/// Reverse pass from a scalar tape node: every requires_grad tensor reachable
/// through the tape accumulates (+=) dLoss/dTensor.
void backward(const TensorPtr& loss);

}  // namespace clmn
