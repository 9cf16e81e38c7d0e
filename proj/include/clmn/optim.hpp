#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <unordered_map>
#include <vector>

#include "clmn/tensor.hpp"

namespace clmn {

/// Named, ordered parameter collection. Each parameter registers exactly once.
class ParamSet {
public:
    struct Entry {
        std::string name;
        TensorPtr tensor;
    };

    void add(std::string name, TensorPtr tensor);
    /// Registers every entry of `other` under `prefix + name`.
    void add_all(const std::string& prefix, const ParamSet& other);
    const TensorPtr& at(const std::string& name) const;
    bool contains(const std::string& name) const;
    const std::vector<Entry>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }

    void zero_grad();

    /// Deep copy of current parameter values, aligned with items().
    std::vector<std::vector<double>> snapshot() const;
    void restore(const std::vector<std::vector<double>>& snapshot);

private:
    std::vector<Entry> items_;
    std::unordered_map<std::string, std::size_t> index_;
};

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Adam with bias correction. Moment buffers stay aligned with the bound
/// parameter set; step() consumes the gradients backward() deposited and
/// clears them.
class Adam {
public:
    using Config = AdamConfig;

    explicit Adam(ParamSet& params, Config config = Config());

    /// Errors (naming the parameter) if any registered parameter is missing
    /// its gradient.
    void step();
    std::int64_t step_count() const { return step_count_; }
    const Config& config() const { return config_; }

private:
    ParamSet* params_;
    Config config_;
    std::int64_t step_count_ = 0;
    std::vector<std::vector<double>> first_moment_;
    std::vector<std::vector<double>> second_moment_;
};

/// Max over coordinates of |analytic - central difference| / max(1, |analytic|)
/// for a deterministic scalar-valued function of `point`.
double gradcheck(const std::function<TensorPtr(const TensorPtr&)>& fn,
                 const TensorPtr& point, double h);

/// Same check against every coordinate of several parameters; `loss_fn`
/// closes over them and rebuilds its graph on each call.
double gradcheck_params(const std::function<TensorPtr()>& loss_fn,
                        const std::vector<TensorPtr>& params, double h);

}  // namespace clmn
