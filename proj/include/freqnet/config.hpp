#pragma once

#include <string>

#include "freqnet/nn/model.hpp"
#include "freqnet/nn/train.hpp"

namespace freqnet {

// Plain-text `key = value` configuration with `#` comments. Keys are a
// closed set; unknown keys and invalid values are rejected with the field
// named, before any compute starts.
struct ExperimentConfig {
    // dataset
    std::string dataset = "synthetic";  // cifar10 | cifar100 | synthetic
    std::string data_path;              // directory with the CIFAR binaries
    std::size_t subset = 5000;          // cap on the training pool (0 = all)
    std::size_t test_subset = 1000;     // cap on the CIFAR test file (0 = all)
    double val_fraction = 0.1;          // carved from the training pool
    int synth_classes = 4;
    int synth_per_class = 500;
    double synth_noise = 0.05;

    // model
    std::string transform = "none";  // none | fft | dct | wht
    std::string placement = "none";  // none | input | early | early_late
    std::array<int, 3> widths{16, 32, 64};
    double dropout = 0.5;
    double l2 = 1e-4;

    // training
    double learning_rate = 1e-3;
    int epochs = 10;
    int batch_size = 64;
    std::uint64_t seed = 0;
    bool deterministic = true;

    std::string output_dir;  // empty: $FREQNET_OUT or "."

    static ExperimentConfig parse_file(const std::string& path);
    static ExperimentConfig parse_text(const std::string& text);

    void validate() const;
    nn::ModelSpec model_spec(int num_classes) const;
    nn::TrainConfig train_config() const;
    std::string resolved_output_dir() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace freqnet
