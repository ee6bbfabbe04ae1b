#pragma once

#include "freqnet/config.hpp"
#include "freqnet/metrics.hpp"

namespace freqnet {

// Output of one run: the four artifact files plus the headline numbers.
struct ExperimentResult {
    std::vector<std::string> files_written;
    double test_loss = 0.0;
    double test_accuracy = 0.0;
    long long total_wall_ms = 0;
    long long total_macs = 0;
    long long total_transform_macs = 0;
    long long trainable_params = 0;
};

// Loads the dataset, builds the model, trains, evaluates on the test split,
// and writes metrics.csv, confusion.csv, topology.txt, and summary.txt into
// the output directory. Partial outputs are removed if any stage fails; the
// error message names the failing stage.
ExperimentResult run_experiment(const ExperimentConfig& config);

}  // namespace freqnet
