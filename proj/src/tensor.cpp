#include "clmn/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "clmn/errors.hpp"

namespace clmn {

namespace {

thread_local int g_no_grad_depth = 0;

std::string shape_str(const std::vector<std::size_t>& s) {
    std::string out = "(";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i]);
    }
    out += ")";
    return out;
}

std::size_t shape_numel(const std::vector<std::size_t>& shape, const char* who) {
    std::size_t n = 1;
    for (std::size_t extent : shape) {
        if (extent == 0)
            throw ShapeError(std::string(who) + ": zero extent in shape " + shape_str(shape));
        n *= extent;
    }
    return n;
}

void require_same_shape(const char* who, const Tensor& a, const Tensor& b) {
    if (a.shape != b.shape)
        throw ShapeError(std::string(who) + ": shape mismatch " + shape_str(a.shape) +
                         " vs " + shape_str(b.shape));
}

void require_1d(const char* who, const Tensor& t) {
    if (t.rank() != 1)
        throw ShapeError(std::string(who) + ": expected a 1-D tensor, got " +
                         shape_str(t.shape));
}

bool any_requires_grad(const std::vector<TensorPtr>& ts) {
    for (const auto& t : ts)
        if (t->requires_grad) return true;
    return false;
}

/// Links `out` into the tape when grad mode is on and an operand needs it.
void link(const TensorPtr& out, std::vector<TensorPtr> operands,
          std::function<void(const Tensor&)> fn) {
    if (!grad_enabled() || !any_requires_grad(operands)) return;
    out->requires_grad = true;
    out->parents = std::move(operands);
    out->backprop = std::move(fn);
}

void accumulate(const TensorPtr& t, std::size_t i, double g) {
    if (!t->requires_grad) return;
    t->ensure_grad();
    t->grad[i] += g;
}

}  // namespace

NoGradGuard::NoGradGuard() { ++g_no_grad_depth; }
NoGradGuard::~NoGradGuard() { --g_no_grad_depth; }
bool grad_enabled() { return g_no_grad_depth == 0; }

TensorPtr Tensor::create(std::vector<std::size_t> shape, std::vector<double> values,
                         bool requires_grad) {
    const std::size_t n = shape_numel(shape, "Tensor");
    if (values.size() != n)
        throw ShapeError("Tensor: data length " + std::to_string(values.size()) +
                         " does not match shape " + shape_str(shape));
    auto t = std::make_shared<Tensor>();
    t->shape = std::move(shape);
    t->data = std::move(values);
    t->requires_grad = requires_grad;
    return t;
}

TensorPtr Tensor::zeros(std::vector<std::size_t> shape, bool requires_grad) {
    return full(std::move(shape), 0.0, requires_grad);
}

TensorPtr Tensor::full(std::vector<std::size_t> shape, double value, bool requires_grad) {
    const std::size_t n = shape_numel(shape, "Tensor");
    return create(std::move(shape), std::vector<double>(n, value), requires_grad);
}

TensorPtr Tensor::scalar(double value, bool requires_grad) {
    return create({1}, {value}, requires_grad);
}

TensorPtr Tensor::vec(std::vector<double> values, bool requires_grad) {
    const std::size_t n = values.size();
    return create({n}, std::move(values), requires_grad);
}

double Tensor::value() const {
    if (data.size() != 1)
        throw ShapeError("Tensor::value: tensor has " + std::to_string(data.size()) +
                         " elements, expected 1");
    return data[0];
}

TensorPtr add(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape("add", *a, *b);
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->data[i] + b->data[i];
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a, b}, [a, b](const Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            accumulate(a, i, self.grad[i]);
            accumulate(b, i, self.grad[i]);
        }
    });
    return r;
}

TensorPtr sub(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape("sub", *a, *b);
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->data[i] - b->data[i];
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a, b}, [a, b](const Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            accumulate(a, i, self.grad[i]);
            accumulate(b, i, -self.grad[i]);
        }
    });
    return r;
}

TensorPtr mul(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape("mul", *a, *b);
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->data[i] * b->data[i];
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a, b}, [a, b](const Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i) {
            accumulate(a, i, self.grad[i] * b->data[i]);
            accumulate(b, i, self.grad[i] * a->data[i]);
        }
    });
    return r;
}

TensorPtr add_n(const std::vector<TensorPtr>& terms) {
    if (terms.empty()) throw ShapeError("add_n: empty term list");
    for (const auto& t : terms) require_same_shape("add_n", *terms.front(), *t);
    std::vector<double> out(terms.front()->size(), 0.0);
    for (const auto& t : terms)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += t->data[i];
    auto r = Tensor::create(terms.front()->shape, std::move(out));
    link(r, terms, [terms](const Tensor& self) {
        for (const auto& t : terms)
            for (std::size_t i = 0; i < self.size(); ++i) accumulate(t, i, self.grad[i]);
    });
    return r;
}

TensorPtr scale(const TensorPtr& a, double factor) {
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->data[i] * factor;
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a}, [a, factor](const Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i)
            accumulate(a, i, self.grad[i] * factor);
    });
    return r;
}

TensorPtr scale_by(const TensorPtr& a, const TensorPtr& factor) {
    if (factor->size() != 1)
        throw ShapeError("scale_by: factor must be a size-1 tensor, got " +
                         shape_str(factor->shape));
    const double f = factor->data[0];
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->data[i] * f;
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a, factor}, [a, factor, f](const Tensor& self) {
        double factor_grad = 0.0;
        for (std::size_t i = 0; i < self.size(); ++i) {
            accumulate(a, i, self.grad[i] * f);
            factor_grad += self.grad[i] * a->data[i];
        }
        accumulate(factor, 0, factor_grad);
    });
    return r;
}

TensorPtr neg(const TensorPtr& a) { return scale(a, -1.0); }

TensorPtr matmul(const TensorPtr& a, const TensorPtr& b) {
    const bool a2 = a->rank() == 2, b2 = b->rank() == 2;
    if (a->rank() > 2 || b->rank() > 2 || (!a2 && !b2))
        throw ShapeError("matmul: unsupported ranks " + shape_str(a->shape) + " x " +
                         shape_str(b->shape));
    const std::size_t m = a2 ? a->shape[0] : 1;
    const std::size_t n = a2 ? a->shape[1] : a->shape[0];
    const std::size_t n2 = b2 ? b->shape[0] : b->shape[0];
    const std::size_t p = b2 ? b->shape[1] : 1;
    if (n != n2)
        throw ShapeError("matmul: inner dimensions differ, " + shape_str(a->shape) +
                         " x " + shape_str(b->shape));
    std::vector<double> out(m * p, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const double av = a->data[i * n + k];
            if (av == 0.0) continue;
            for (std::size_t j = 0; j < p; ++j) out[i * p + j] += av * b->data[k * p + j];
        }
    std::vector<std::size_t> out_shape;
    if (a2 && b2)
        out_shape = {m, p};
    else if (a2)
        out_shape = {m};
    else
        out_shape = {p};
    auto r = Tensor::create(std::move(out_shape), std::move(out));
    link(r, {a, b}, [a, b, m, n, p](const Tensor& self) {
        // dA = G B^T, dB = A^T G, with G reshaped to (m,p).
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < p; ++j) {
                const double g = self.grad[i * p + j];
                if (g == 0.0) continue;
                for (std::size_t k = 0; k < n; ++k) {
                    accumulate(a, i * n + k, g * b->data[k * p + j]);
                    accumulate(b, k * p + j, g * a->data[i * n + k]);
                }
            }
    });
    return r;
}

TensorPtr dot(const TensorPtr& a, const TensorPtr& b) {
    require_1d("dot", *a);
    require_1d("dot", *b);
    require_same_shape("dot", *a, *b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a->size(); ++i) acc += a->data[i] * b->data[i];
    auto r = Tensor::scalar(acc);
    link(r, {a, b}, [a, b](const Tensor& self) {
        const double g = self.grad[0];
        for (std::size_t i = 0; i < a->size(); ++i) {
            accumulate(a, i, g * b->data[i]);
            accumulate(b, i, g * a->data[i]);
        }
    });
    return r;
}

TensorPtr concat(const std::vector<TensorPtr>& parts) {
    if (parts.empty()) throw ShapeError("concat: empty part list");
    std::size_t total = 0;
    for (const auto& p : parts) {
        require_1d("concat", *p);
        total += p->size();
    }
    std::vector<double> out;
    out.reserve(total);
    for (const auto& p : parts) out.insert(out.end(), p->data.begin(), p->data.end());
    auto r = Tensor::create({total}, std::move(out));
    link(r, parts, [parts](const Tensor& self) {
        std::size_t offset = 0;
        for (const auto& p : parts) {
            for (std::size_t i = 0; i < p->size(); ++i)
                accumulate(p, i, self.grad[offset + i]);
            offset += p->size();
        }
    });
    return r;
}

TensorPtr stack_rows(const std::vector<TensorPtr>& rows) {
    if (rows.empty()) throw ShapeError("stack_rows: empty row list");
    const std::size_t n = rows.front()->size();
    for (const auto& row : rows) {
        require_1d("stack_rows", *row);
        if (row->size() != n)
            throw ShapeError("stack_rows: row length " + std::to_string(row->size()) +
                             " != " + std::to_string(n));
    }
    std::vector<double> out;
    out.reserve(rows.size() * n);
    for (const auto& row : rows) out.insert(out.end(), row->data.begin(), row->data.end());
    auto r = Tensor::create({rows.size(), n}, std::move(out));
    link(r, rows, [rows, n](const Tensor& self) {
        for (std::size_t k = 0; k < rows.size(); ++k)
            for (std::size_t i = 0; i < n; ++i)
                accumulate(rows[k], i, self.grad[k * n + i]);
    });
    return r;
}

TensorPtr sum(const TensorPtr& a) {
    double acc = 0.0;
    for (double v : a->data) acc += v;
    auto r = Tensor::scalar(acc);
    link(r, {a}, [a](const Tensor& self) {
        for (std::size_t i = 0; i < a->size(); ++i) accumulate(a, i, self.grad[0]);
    });
    return r;
}

namespace {

struct AxisView {
    std::size_t groups;       // number of output elements
    std::size_t axis_extent;  // reduced length
    // flat index of element `j` along the reduced axis for output group `g`
    std::size_t index(std::size_t g, std::size_t j, std::size_t axis, std::size_t cols) const {
        if (cols == 0) return j;                       // 1-D
        return axis == 0 ? j * cols + g : g * cols + j;  // 2-D
    }
    std::size_t cols = 0;
};

AxisView make_axis_view(const Tensor& a, std::size_t axis, const char* who) {
    if (a.rank() == 1) {
        if (axis != 0)
            throw ShapeError(std::string(who) + ": axis " + std::to_string(axis) +
                             " out of range for 1-D tensor");
        return {1, a.shape[0], 0};
    }
    if (a.rank() == 2) {
        if (axis > 1)
            throw ShapeError(std::string(who) + ": axis " + std::to_string(axis) +
                             " out of range for 2-D tensor");
        return {axis == 0 ? a.shape[1] : a.shape[0], axis == 0 ? a.shape[0] : a.shape[1],
                a.shape[1]};
    }
    throw ShapeError(std::string(who) + ": expected rank 1 or 2, got " + shape_str(a.shape));
}

std::vector<std::size_t> reduced_shape(const Tensor& a, std::size_t axis) {
    if (a.rank() == 1) return {1};
    return {a.shape[axis == 0 ? 1 : 0]};
}

}  // namespace

TensorPtr mean_axis(const TensorPtr& a, std::size_t axis) {
    const AxisView view = make_axis_view(*a, axis, "mean_axis");
    std::vector<double> out(view.groups, 0.0);
    for (std::size_t g = 0; g < view.groups; ++g) {
        for (std::size_t j = 0; j < view.axis_extent; ++j)
            out[g] += a->data[view.index(g, j, axis, view.cols)];
        out[g] /= static_cast<double>(view.axis_extent);
    }
    auto r = Tensor::create(reduced_shape(*a, axis), std::move(out));
    link(r, {a}, [a, axis, view](const Tensor& self) {
        const double inv = 1.0 / static_cast<double>(view.axis_extent);
        for (std::size_t g = 0; g < view.groups; ++g)
            for (std::size_t j = 0; j < view.axis_extent; ++j)
                accumulate(a, view.index(g, j, axis, view.cols), self.grad[g] * inv);
    });
    return r;
}

TensorPtr max_axis(const TensorPtr& a, std::size_t axis) {
    const AxisView view = make_axis_view(*a, axis, "max_axis");
    std::vector<double> out(view.groups);
    std::vector<std::size_t> argmax(view.groups);
    for (std::size_t g = 0; g < view.groups; ++g) {
        std::size_t best = view.index(g, 0, axis, view.cols);
        for (std::size_t j = 1; j < view.axis_extent; ++j) {
            const std::size_t idx = view.index(g, j, axis, view.cols);
            if (a->data[idx] > a->data[best]) best = idx;
        }
        out[g] = a->data[best];
        argmax[g] = best;
    }
    auto r = Tensor::create(reduced_shape(*a, axis), std::move(out));
    link(r, {a}, [a, argmax](const Tensor& self) {
        for (std::size_t g = 0; g < argmax.size(); ++g)
            accumulate(a, argmax[g], self.grad[g]);
    });
    return r;
}

TensorPtr tanh(const TensorPtr& a) {
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(a->data[i]);
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a}, [a](const Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i)
            accumulate(a, i, self.grad[i] * (1.0 - self.data[i] * self.data[i]));
    });
    return r;
}

TensorPtr sigmoid(const TensorPtr& a) {
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = a->data[i];
        out[i] = x >= 0.0 ? 1.0 / (1.0 + std::exp(-x))
                          : std::exp(x) / (1.0 + std::exp(x));
    }
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a}, [a](const Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i)
            accumulate(a, i, self.grad[i] * self.data[i] * (1.0 - self.data[i]));
    });
    return r;
}

TensorPtr relu(const TensorPtr& a) {
    std::vector<double> out(a->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = a->data[i] > 0.0 ? a->data[i] : 0.0;
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a}, [a](const Tensor& self) {
        for (std::size_t i = 0; i < self.size(); ++i)
            if (a->data[i] > 0.0) accumulate(a, i, self.grad[i]);
    });
    return r;
}

TensorPtr softmax(const TensorPtr& a) {
    require_1d("softmax", *a);
    if (a->size() == 0) throw ShapeError("softmax: empty axis");
    const double hi = *std::max_element(a->data.begin(), a->data.end());
    std::vector<double> out(a->size());
    double z = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = std::exp(a->data[i] - hi);
        z += out[i];
    }
    for (double& v : out) v /= z;
    auto r = Tensor::create(a->shape, std::move(out));
    link(r, {a}, [a](const Tensor& self) {
        double inner = 0.0;
        for (std::size_t i = 0; i < self.size(); ++i) inner += self.grad[i] * self.data[i];
        for (std::size_t i = 0; i < self.size(); ++i)
            accumulate(a, i, self.data[i] * (self.grad[i] - inner));
    });
    return r;
}

TensorPtr cross_entropy_with_logits(const TensorPtr& logits, std::size_t target) {
    require_1d("cross_entropy_with_logits", *logits);
    if (target >= logits->size())
        throw ShapeError("cross_entropy_with_logits: target " + std::to_string(target) +
                         " out of range for " + std::to_string(logits->size()) + " classes");
    const double hi = *std::max_element(logits->data.begin(), logits->data.end());
    double z = 0.0;
    for (double v : logits->data) z += std::exp(v - hi);
    const double log_z = hi + std::log(z);
    auto r = Tensor::scalar(log_z - logits->data[target]);
    link(r, {logits}, [logits, target, log_z](const Tensor& self) {
        const double g = self.grad[0];
        for (std::size_t i = 0; i < logits->size(); ++i) {
            const double p = std::exp(logits->data[i] - log_z);
            accumulate(logits, i, g * (p - (i == target ? 1.0 : 0.0)));
        }
    });
    return r;
}

TensorPtr squared_distance(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape("squared_distance", *a, *b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a->size(); ++i) {
        const double d = a->data[i] - b->data[i];
        acc += d * d;
    }
    auto r = Tensor::scalar(acc);
    link(r, {a, b}, [a, b](const Tensor& self) {
        const double g = self.grad[0];
        for (std::size_t i = 0; i < a->size(); ++i) {
            const double d = a->data[i] - b->data[i];
            accumulate(a, i, 2.0 * g * d);
            accumulate(b, i, -2.0 * g * d);
        }
    });
    return r;
}

TensorPtr euclidean_distance(const TensorPtr& a, const TensorPtr& b) {
    require_same_shape("euclidean_distance", *a, *b);
    double acc = 0.0;
    for (std::size_t i = 0; i < a->size(); ++i) {
        const double d = a->data[i] - b->data[i];
        acc += d * d;
    }
    const double dist = std::sqrt(acc);
    auto r = Tensor::scalar(dist);
    link(r, {a, b}, [a, b, dist](const Tensor& self) {
        if (dist == 0.0) return;  // subgradient 0 at the apex
        const double g = self.grad[0] / dist;
        for (std::size_t i = 0; i < a->size(); ++i) {
            const double d = a->data[i] - b->data[i];
            accumulate(a, i, g * d);
            accumulate(b, i, -g * d);
        }
    });
    return r;
}

TensorPtr cosine_similarity(const TensorPtr& a, const TensorPtr& b) {
    require_1d("cosine_similarity", *a);
    require_1d("cosine_similarity", *b);
    require_same_shape("cosine_similarity", *a, *b);
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t i = 0; i < a->size(); ++i) {
        ab += a->data[i] * b->data[i];
        aa += a->data[i] * a->data[i];
        bb += b->data[i] * b->data[i];
    }
    const double na = std::sqrt(aa), nb = std::sqrt(bb);
    const bool degenerate = na == 0.0 || nb == 0.0;
    const double cos_val = degenerate ? 0.0 : ab / (na * nb);
    auto r = Tensor::scalar(cos_val);
    link(r, {a, b}, [a, b, na, nb, cos_val, degenerate](const Tensor& self) {
        if (degenerate) return;
        const double g = self.grad[0];
        for (std::size_t i = 0; i < a->size(); ++i) {
            accumulate(a, i, g * (b->data[i] / (na * nb) - cos_val * a->data[i] / (na * na)));
            accumulate(b, i, g * (a->data[i] / (na * nb) - cos_val * b->data[i] / (nb * nb)));
        }
    });
    return r;
}

void backward(const TensorPtr& loss) {
    if (!loss) throw ShapeError("backward: null tensor");
    if (loss->size() != 1)
        throw ShapeError("backward: loss must be a scalar, got shape " +
                         shape_str(loss->shape));
    if (!loss->on_tape())
        throw ShapeError("backward: tensor is not linked to a tape");

    // Post-order over parent edges; reversed, children run before parents.
    std::vector<Tensor*> order;
    std::unordered_set<const Tensor*> visited;
    struct Frame {
        Tensor* node;
        std::size_t next;
    };
    std::vector<Frame> stack{{loss.get(), 0}};
    visited.insert(loss.get());
    while (!stack.empty()) {
        Frame& top = stack.back();
        if (top.next < top.node->parents.size()) {
            Tensor* parent = top.node->parents[top.next++].get();
            if (parent->on_tape() && visited.insert(parent).second)
                stack.push_back({parent, 0});
        } else {
            order.push_back(top.node);
            stack.pop_back();
        }
    }

    loss->ensure_grad();
    loss->grad[0] += 1.0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        Tensor* node = *it;
        if (node->backprop && node->has_grad()) node->backprop(*node);
    }
}

}  // namespace clmn
