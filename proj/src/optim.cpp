#include "clmn/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "clmn/errors.hpp"

namespace clmn {

void ParamSet::add(std::string name, TensorPtr tensor) {
    if (!tensor) throw std::runtime_error("ParamSet: null tensor for '" + name + "'");
    if (index_.count(name))
        throw std::runtime_error("ParamSet: parameter '" + name + "' registered twice");
    index_[name] = items_.size();
    items_.push_back({std::move(name), std::move(tensor)});
}

void ParamSet::add_all(const std::string& prefix, const ParamSet& other) {
    for (const auto& entry : other.items_) add(prefix + entry.name, entry.tensor);
}

const TensorPtr& ParamSet::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw std::runtime_error("ParamSet: unknown parameter '" + name + "'");
    return items_[it->second].tensor;
}

bool ParamSet::contains(const std::string& name) const { return index_.count(name) != 0; }

void ParamSet::zero_grad() {
    for (auto& entry : items_) entry.tensor->clear_grad();
}

std::vector<std::vector<double>> ParamSet::snapshot() const {
    std::vector<std::vector<double>> values;
    values.reserve(items_.size());
    for (const auto& entry : items_) values.push_back(entry.tensor->data);
    return values;
}

void ParamSet::restore(const std::vector<std::vector<double>>& snapshot) {
    if (snapshot.size() != items_.size())
        throw std::runtime_error("ParamSet::restore: snapshot size mismatch");
    for (std::size_t i = 0; i < items_.size(); ++i) {
        if (snapshot[i].size() != items_[i].tensor->data.size())
            throw std::runtime_error("ParamSet::restore: shape mismatch for '" +
                                     items_[i].name + "'");
        items_[i].tensor->data = snapshot[i];
    }
}

Adam::Adam(ParamSet& params, Config config) : params_(&params), config_(config) {
    first_moment_.reserve(params.size());
    second_moment_.reserve(params.size());
    for (const auto& entry : params.items()) {
        first_moment_.emplace_back(entry.tensor->size(), 0.0);
        second_moment_.emplace_back(entry.tensor->size(), 0.0);
    }
}

void Adam::step() {
    const auto& items = params_->items();
    if (items.size() != first_moment_.size())
        throw std::runtime_error("Adam: parameter set changed after construction");
    for (const auto& entry : items) {
        if (!entry.tensor->has_grad())
            throw std::runtime_error("Adam: missing gradient for parameter '" + entry.name +
                                     "'");
    }
    ++step_count_;
    const double bias1 = 1.0 - std::pow(config_.beta1, static_cast<double>(step_count_));
    const double bias2 = 1.0 - std::pow(config_.beta2, static_cast<double>(step_count_));
    for (std::size_t p = 0; p < items.size(); ++p) {
        Tensor& t = *items[p].tensor;
        auto& m = first_moment_[p];
        auto& v = second_moment_[p];
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double g = t.grad[i];
            m[i] = config_.beta1 * m[i] + (1.0 - config_.beta1) * g;
            v[i] = config_.beta2 * v[i] + (1.0 - config_.beta2) * g * g;
            const double m_hat = m[i] / bias1;
            const double v_hat = v[i] / bias2;
            t.data[i] -= config_.learning_rate * m_hat / (std::sqrt(v_hat) + config_.epsilon);
        }
        t.clear_grad();
    }
}

namespace {

double relative_error(double analytic, double numeric) {
    return std::abs(analytic - numeric) / std::max(1.0, std::abs(analytic));
}

double eval_scalar(const TensorPtr& t, const char* who) {
    if (!t || t->size() != 1) throw ShapeError(std::string(who) + ": function must be scalar-valued");
    const double v = t->value();
    if (!std::isfinite(v)) throw std::runtime_error(std::string(who) + ": non-finite value");
    return v;
}

}  // namespace

double gradcheck(const std::function<TensorPtr(const TensorPtr&)>& fn,
                 const TensorPtr& point, double h) {
    point->clear_grad();
    const bool restore_flag = point->requires_grad;
    point->requires_grad = true;
    auto loss = fn(point);
    eval_scalar(loss, "gradcheck");
    if (loss->on_tape()) backward(loss);  // constant functions have no tape
    std::vector<double> analytic(point->size(), 0.0);
    if (point->has_grad()) analytic = point->grad;
    point->clear_grad();
    point->requires_grad = restore_flag;

    double worst = 0.0;
    NoGradGuard no_grad;
    for (std::size_t i = 0; i < point->size(); ++i) {
        const double saved = point->data[i];
        point->data[i] = saved + h;
        const double up = eval_scalar(fn(point), "gradcheck");
        point->data[i] = saved - h;
        const double down = eval_scalar(fn(point), "gradcheck");
        point->data[i] = saved;
        const double numeric = (up - down) / (2.0 * h);
        if (!std::isfinite(numeric))
            throw std::runtime_error("gradcheck: non-finite finite-difference value");
        worst = std::max(worst, relative_error(analytic[i], numeric));
    }
    return worst;
}

double gradcheck_params(const std::function<TensorPtr()>& loss_fn,
                        const std::vector<TensorPtr>& params, double h) {
    for (const auto& p : params) p->clear_grad();
    auto loss = loss_fn();
    eval_scalar(loss, "gradcheck_params");
    if (loss->on_tape()) backward(loss);
    std::vector<std::vector<double>> analytic;
    analytic.reserve(params.size());
    for (const auto& p : params) {
        analytic.push_back(p->has_grad() ? p->grad : std::vector<double>(p->size(), 0.0));
        p->clear_grad();
    }

    double worst = 0.0;
    NoGradGuard no_grad;
    for (std::size_t k = 0; k < params.size(); ++k) {
        Tensor& t = *params[k];
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double saved = t.data[i];
            t.data[i] = saved + h;
            const double up = eval_scalar(loss_fn(), "gradcheck_params");
            t.data[i] = saved - h;
            const double down = eval_scalar(loss_fn(), "gradcheck_params");
            t.data[i] = saved;
            const double numeric = (up - down) / (2.0 * h);
            if (!std::isfinite(numeric))
                throw std::runtime_error("gradcheck_params: non-finite finite-difference value");
            worst = std::max(worst, relative_error(analytic[k][i], numeric));
        }
    }
    return worst;
}

}  // namespace clmn
