#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "freqnet/rng.hpp"
#include "freqnet/tensor.hpp"
#include "freqnet/transforms.hpp"

namespace freqnet::nn {

template <typename T>
struct Param {
    std::string name;
    std::vector<std::size_t> shape;
    std::vector<T> value;
    std::vector<T> grad;

    Param() = default;
    Param(std::string n, std::vector<std::size_t> s) : name(std::move(n)), shape(std::move(s)) {
        std::size_t total = 1;
        for (std::size_t d : shape) total *= d;
        value.assign(total, T{});
        grad.assign(total, T{});
    }
    std::size_t size() const { return value.size(); }
    void zero_grad() { std::fill(grad.begin(), grad.end(), T{}); }
};

// Shared per-step state. `step` drives the counter-based dropout stream, so
// masks depend only on (seed, step, layer), never on evaluation order.
struct TrainContext {
    std::uint64_t seed = 0;
    long long step = 0;
    bool training = false;
};

using Dims = std::array<std::size_t, 3>;  // height, width, channels

template <typename T>
class Layer {
public:
    explicit Layer(std::string name) : name_(std::move(name)) {}
    virtual ~Layer() = default;

    const std::string& name() const { return name_; }

    virtual Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) = 0;
    // Consumes the gradient w.r.t. the forward output, accumulates parameter
    // gradients, returns the gradient w.r.t. the forward input.
    virtual Tensor4T<T> backward(const Tensor4T<T>& grad) = 0;

    virtual std::vector<Param<T>*> params() { return {}; }
    virtual Dims output_dims(const Dims& in) const { return in; }
    virtual long long macs(const Dims&) const { return 0; }
    virtual long long transform_cost(const Dims&) const { return 0; }

protected:
    [[noreturn]] void shape_error(const std::string& what) const {
        throw std::invalid_argument("layer " + name_ + ": " + what);
    }
    std::string name_;
};

// TensorFlow-style 'same' padding: out = ceil(in / stride), extra padding
// goes bottom/right.
struct SamePad {
    std::size_t out = 0, before = 0;
};
SamePad same_pad(std::size_t in, std::size_t kernel, std::size_t stride);

template <typename T>
class Conv2D final : public Layer<T> {
public:
    Conv2D(std::string name, std::size_t in_channels, std::size_t out_channels,
           std::size_t kernel, std::size_t stride, Rng& rng);

    Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) override;
    Tensor4T<T> backward(const Tensor4T<T>& grad) override;
    std::vector<Param<T>*> params() override { return {&weight_}; }
    Dims output_dims(const Dims& in) const override;
    long long macs(const Dims& in) const override;

    Param<T>& weight() { return weight_; }

private:
    std::size_t in_c_, out_c_, kernel_, stride_;
    Param<T> weight_;  // (k, k, in_c, out_c) row-major
    Tensor4T<T> cached_input_;
    std::vector<T> cached_cols_;  // im2col of the last forward batch
};

template <typename T>
class BatchNorm final : public Layer<T> {
public:
    BatchNorm(std::string name, std::size_t channels, double momentum = 0.9,
              double epsilon = 1e-3);

    Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) override;
    Tensor4T<T> backward(const Tensor4T<T>& grad) override;
    std::vector<Param<T>*> params() override { return {&gamma_, &beta_}; }

private:
    std::size_t channels_;
    double momentum_, epsilon_;
    Param<T> gamma_, beta_;
    std::vector<T> running_mean_, running_var_;
    // forward cache (training mode)
    bool cached_training_ = false;
    std::vector<double> mean_, inv_std_;
    Tensor4T<T> cached_xhat_;
};

template <typename T>
class ReLU final : public Layer<T> {
public:
    explicit ReLU(std::string name) : Layer<T>(std::move(name)) {}
    Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) override;
    Tensor4T<T> backward(const Tensor4T<T>& grad) override;

private:
    Tensor4T<T> cached_input_;
};

template <typename T>
class GlobalAvgPool final : public Layer<T> {
public:
    explicit GlobalAvgPool(std::string name) : Layer<T>(std::move(name)) {}
    Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) override;
    Tensor4T<T> backward(const Tensor4T<T>& grad) override;
    Dims output_dims(const Dims& in) const override { return {1, 1, in[2]}; }

private:
    std::size_t in_h_ = 0, in_w_ = 0;
};

template <typename T>
class Dropout final : public Layer<T> {
public:
    Dropout(std::string name, double rate, std::uint64_t stream_id)
        : Layer<T>(std::move(name)), rate_(rate), stream_id_(stream_id) {}

    Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) override;
    Tensor4T<T> backward(const Tensor4T<T>& grad) override;

private:
    double rate_;
    std::uint64_t stream_id_;
    bool active_ = false;
    std::vector<T> mask_;
};

template <typename T>
class Dense final : public Layer<T> {
public:
    // Flattens (h, w, c) to the input dimension.
    Dense(std::string name, std::size_t in_dim, std::size_t units, Rng& rng);

    Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) override;
    Tensor4T<T> backward(const Tensor4T<T>& grad) override;
    std::vector<Param<T>*> params() override { return {&weight_, &bias_}; }
    Dims output_dims(const Dims&) const override { return {1, 1, units_}; }
    long long macs(const Dims&) const override;

    Param<T>& weight() { return weight_; }

private:
    std::size_t in_dim_, units_;
    Param<T> weight_;  // (in_dim, units)
    Param<T> bias_;    // (units)
    Tensor4T<T> cached_input_;
};

// Fixed (zero-parameter) spectral map. Pads to power-of-two spatial dims,
// applies the transform per channel slab, crops back. Backward applies the
// adjoint: WHT is self-adjoint, DCT's adjoint is the inverse DCT, and the
// FFT-magnitude layer chains through |z| with subgradient 0 at z = 0.
template <typename T>
class TransformLayer final : public Layer<T> {
public:
    TransformLayer(std::string name, TransformKind kind)
        : Layer<T>(std::move(name)), kind_(kind) {}

    Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) override;
    Tensor4T<T> backward(const Tensor4T<T>& grad) override;
    long long transform_cost(const Dims& in) const override;

    TransformKind kind() const { return kind_; }

private:
    TransformKind kind_;
    std::size_t orig_h_ = 0, orig_w_ = 0, pad_h_ = 0, pad_w_ = 0;
    // FFT-magnitude cache: spectrum and magnitude of the padded input.
    std::vector<ComplexVec<T>> cached_spectra_;
    std::size_t cached_batch_ = 0, cached_channels_ = 0;
};

// conv-bn-relu-conv-bn plus identity (or 1x1 projection) skip, relu after
// the join.
template <typename T>
class ResidualBlock final : public Layer<T> {
public:
    ResidualBlock(std::string name, std::size_t in_channels, std::size_t out_channels,
                  std::size_t stride, Rng& rng);

    Tensor4T<T> forward(const Tensor4T<T>& x, const TrainContext& ctx) override;
    Tensor4T<T> backward(const Tensor4T<T>& grad) override;
    std::vector<Param<T>*> params() override;
    Dims output_dims(const Dims& in) const override;
    long long macs(const Dims& in) const override;

private:
    bool projected_;
    Conv2D<T> conv1_;
    BatchNorm<T> bn1_;
    ReLU<T> relu1_;
    Conv2D<T> conv2_;
    BatchNorm<T> bn2_;
    std::unique_ptr<Conv2D<T>> proj_conv_;
    std::unique_ptr<BatchNorm<T>> proj_bn_;
    Tensor4T<T> cached_sum_;  // pre-activation of the join
};

}  // namespace freqnet::nn
