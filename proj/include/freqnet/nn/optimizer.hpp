#pragma once

#include "freqnet/nn/layers.hpp"

namespace freqnet::nn {

struct AdamConfig {
    double learning_rate = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-7;
};

// Adam with bias correction. Moment buffers are keyed by parameter order,
// which is fixed for a given model, so updates are deterministic.
template <typename T>
class Adam {
public:
    explicit Adam(AdamConfig config = {}) : config_(config) {}

    void step(const std::vector<Param<T>*>& params);
    long long steps() const { return t_; }
    const AdamConfig& config() const { return config_; }

private:
    AdamConfig config_;
    long long t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

}  // namespace freqnet::nn
