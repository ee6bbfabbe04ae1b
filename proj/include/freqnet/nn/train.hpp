#pragma once

#include "freqnet/dataset.hpp"
#include "freqnet/metrics.hpp"
#include "freqnet/nn/model.hpp"
#include "freqnet/nn/optimizer.hpp"

namespace freqnet::nn {

struct TrainConfig {
    double learning_rate = 1e-3;
    int epochs = 10;
    int batch_size = 64;
    AdamConfig adam{};  // learning_rate below overrides adam.learning_rate
    std::uint64_t seed = 0;
    bool deterministic = true;

    void validate() const;
};

struct EvalResult {
    double loss = 0.0;  // includes the L2 penalty
    double accuracy = 0.0;
    std::vector<int> predictions;
};

EvalResult evaluate(Model<float>& model, const DatasetSplit& data, int batch_size = 64);

struct EpochCallbackInfo {
    int epoch = 0;
    double train_loss = 0.0, train_accuracy = 0.0;
};
using EpochCallback = std::function<bool(const EpochCallbackInfo&)>;  // false stops training

// Shuffled mini-batch epochs with Adam; records one train row per epoch
// (plus one validation row when a validation split is given) into the
// monitor if provided. Throws before any step when shapes mismatch, and on
// non-finite losses.
struct TrainResult {
    std::vector<EpochRecord> records;
    long long steps = 0;
};

TrainResult train(Model<float>& model, const DatasetSplit& train_split,
                  const DatasetSplit* val_split, const TrainConfig& config,
                  ResourceMonitor* monitor = nullptr, const EpochCallback& callback = {});

}  // namespace freqnet::nn
