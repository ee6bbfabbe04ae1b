#pragma once

#include <functional>
#include <string>
#include <vector>

#include "freqnet/nn/layers.hpp"

namespace freqnet::nn {

// Central finite-difference verification of every layer's backward pass,
// double precision. A layer passes when the largest deviation between the
// analytic and numeric gradient, relative to the gradient scale, stays
// under its tolerance.
struct GradCheckResult {
    std::string name;
    double max_rel_err = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Scale-relative comparison used by all checks.
double gradient_rel_err(const std::vector<double>& analytic,
                        const std::vector<double>& numeric);

// One layer against finite differences: checks d(objective)/d(input) and
// d(objective)/d(params) where objective = sum(forward(x) * weights) for a
// fixed random weighting.
GradCheckResult gradcheck_layer(Layer<double>& layer, const Tensor4T<double>& input,
                                std::uint64_t seed, double tolerance = 1e-4,
                                double step = 1e-5, bool training = true);

// The whole suite (conv, dense, batchnorm, pooling, dropout, residual
// block, softmax-xent, and the three transform layers), `seeds` seeds each.
std::vector<GradCheckResult> run_gradient_checks(int seeds = 3);

bool all_passed(const std::vector<GradCheckResult>& results);

}  // namespace freqnet::nn
