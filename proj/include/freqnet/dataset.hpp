#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "freqnet/tensor.hpp"

namespace freqnet {

struct DatasetSplit {
    Tensor4f images;          // (n, 32, 32, 3), values in [0, 1]
    std::vector<int> labels;  // class ids
    std::string name;
    int num_classes = 0;

    std::size_t size() const { return labels.size(); }
};

enum class CifarVariant { Cifar10, Cifar100 };

// Reads the published binary layout directly: 3073-byte records for
// CIFAR-10 (label +1024R+1024G+1024B), 3074-byte records for CIFAR-100
// (coarse label, fine label, pixels; the fine label is kept). Pixels are
// scaled by 1/255. Reads at most `limit` records when limit > 0.
DatasetSplit load_cifar(const std::string& path, CifarVariant variant, std::size_t limit = 0);

// Writes records in the CIFAR-10 binary layout (quantizing pixels back to
// bytes). Used to build loader fixtures and offline stand-in files.
void write_cifar10(const std::string& path, const DatasetSplit& split);

// Frequency-separable toy task: class k is the separable cosine
// cos(pi (x+1/2) u_k / 32) * cos(pi (y+1/2) v_k / 32) with distinct even
// (u_k, v_k), plus Gaussian noise, replicated across channels and rescaled
// to [0, 1]. Each class concentrates its spectrum in one DCT bin (plus DC
// after the rescale) and four symmetric FFT bins.
DatasetSplit synth_spectral_dataset(int n_per_class, int classes, double noise_sigma,
                                    std::uint64_t seed);

// The (u, v) frequency pair assigned to one class of the spectral task.
std::pair<int, int> spectral_class_frequency(int k);

// Procedural 10-class shape/texture dataset (stripes, checkerboards,
// circles, rings, squares, crosses, gradients, blobs) with randomized
// colors, geometry, and pixel noise. Classes are distinguishable only by
// spatial structure. Serves as an offline CIFAR-10 stand-in.
DatasetSplit synth_shapes_dataset(int n_per_class, std::uint64_t seed);

// First `count` samples as a new split.
DatasetSplit take(const DatasetSplit& split, std::size_t count);

struct SplitPair {
    DatasetSplit first, second;
};

// Deterministic shuffled split: `fraction` of samples go to `first`.
SplitPair split_dataset(const DatasetSplit& split, double fraction, std::uint64_t seed);

}  // namespace freqnet
