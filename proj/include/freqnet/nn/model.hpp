#pragma once

#include <optional>

#include "freqnet/nn/layers.hpp"

namespace freqnet::nn {

// Where the fixed transform layers sit relative to the residual stages:
// Input = before the stem, Early = after stage1 block1, EarlyAndLate adds a
// second copy after stage3 block2.
enum class Placement { None, Input, Early, EarlyAndLate };

const char* placement_name(Placement p);

struct ModelSpec {
    std::optional<TransformKind> transform;  // nullopt = baseline
    Placement placement = Placement::None;
    int num_classes = 10;
    std::array<int, 3> stage_widths{16, 32, 64};
    double dropout_rate = 0.5;
    double l2 = 1e-4;
    std::uint64_t seed = 0;

    void validate() const;
};

// Small residual classifier: stem conv (3x3) -> three stages of two
// residual blocks (stride-2 entry into stages 2 and 3) -> global average
// pool -> dropout -> dense head with L2, softmax applied in the loss.
template <typename T>
class Model {
public:
    static Model build(const ModelSpec& spec);

    // Returns logits of shape (batch, 1, 1, num_classes).
    Tensor4T<T> forward(const Tensor4T<T>& x, bool training);
    // Backpropagates d(loss)/d(logits); parameter gradients accumulate.
    Tensor4T<T> backward(const Tensor4T<T>& dlogits);

    std::vector<Param<T>*> params();
    void zero_grads();
    long long trainable_params();

    // L2 penalty on the dense kernel and its gradient contribution.
    double l2_penalty() const;
    void add_l2_gradients();

    // Per-sample forward-pass MAC counts for one input of the given dims.
    long long forward_macs(const Dims& input) const;
    long long transform_layer_macs(const Dims& input) const;
    int transform_layer_count() const;

    // One line per layer: `index name output_shape param_count`.
    std::string topology_dump(const Dims& input) const;

    const ModelSpec& spec() const { return spec_; }
    TrainContext& context() { return ctx_; }

private:
    ModelSpec spec_;
    TrainContext ctx_;
    std::vector<std::unique_ptr<Layer<T>>> layers_;
    Dense<T>* head_ = nullptr;
};

// Sparse categorical cross-entropy over softmax(logits) plus an optional
// externally computed L2 penalty.
template <typename T>
struct LossResult {
    double loss = 0.0;       // data loss + l2 penalty
    double data_loss = 0.0;  // mean -log p[label]
    double accuracy = 0.0;
    Tensor4T<T> dlogits;
    std::vector<int> predictions;
};

template <typename T>
LossResult<T> softmax_xent(const Tensor4T<T>& logits, const std::vector<int>& labels,
                           double l2_penalty = 0.0);

// Softmax probabilities of logits (batch, 1, 1, classes), for inference.
template <typename T>
Tensor4T<T> softmax(const Tensor4T<T>& logits);

}  // namespace freqnet::nn
