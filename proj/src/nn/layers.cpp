#include "freqnet/nn/layers.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>

namespace freqnet::nn {

namespace {

template <typename T>
using MatX = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapM = Eigen::Map<MatX<T>>;
template <typename T>
using CMapM = Eigen::Map<const MatX<T>>;

using Index = Eigen::Index;

}  // namespace

SamePad same_pad(std::size_t in, std::size_t kernel, std::size_t stride) {
    SamePad p;
    p.out = (in + stride - 1) / stride;
    std::size_t span = (p.out - 1) * stride + kernel;
    std::size_t total = span > in ? span - in : 0;
    p.before = total / 2;  // extra padding goes after (bottom/right)
    return p;
}

// --- Conv2D ------------------------------------------------------------------

template <typename T>
Conv2D<T>::Conv2D(std::string name, std::size_t in_channels, std::size_t out_channels,
                  std::size_t kernel, std::size_t stride, Rng& rng)
    : Layer<T>(std::move(name)),
      in_c_(in_channels),
      out_c_(out_channels),
      kernel_(kernel),
      stride_(stride),
      weight_(this->name_ + "/kernel", {kernel, kernel, in_channels, out_channels}) {
    // He normal, fan-in = k*k*in_c
    const double stddev = std::sqrt(2.0 / static_cast<double>(kernel * kernel * in_channels));
    for (T& v : weight_.value) v = static_cast<T>(stddev * rng.normal());
}

namespace {

template <typename T>
void im2col(const Tensor4T<T>& x, std::size_t k, std::size_t s, std::size_t pb_h,
            std::size_t pb_w, std::size_t oh, std::size_t ow, T* col) {
    const std::size_t in_h = x.height(), in_w = x.width(), cin = x.channels();
    const std::size_t cols = k * k * cin;
    std::size_t row = 0;
    for (std::size_t b = 0; b < x.batch(); ++b) {
        for (std::size_t oy = 0; oy < oh; ++oy) {
            for (std::size_t ox = 0; ox < ow; ++ox, ++row) {
                T* dst = col + row * cols;
                for (std::size_t ky = 0; ky < k; ++ky) {
                    const long iy = static_cast<long>(oy * s + ky) - static_cast<long>(pb_h);
                    for (std::size_t kx = 0; kx < k; ++kx) {
                        const long ix = static_cast<long>(ox * s + kx) - static_cast<long>(pb_w);
                        T* seg = dst + (ky * k + kx) * cin;
                        if (iy < 0 || iy >= static_cast<long>(in_h) || ix < 0 ||
                            ix >= static_cast<long>(in_w)) {
                            std::fill(seg, seg + cin, T{});
                        } else {
                            const T* src = &x.at(b, static_cast<std::size_t>(iy),
                                                 static_cast<std::size_t>(ix), 0);
                            std::copy(src, src + cin, seg);
                        }
                    }
                }
            }
        }
    }
}

template <typename T>
void col2im(const T* col, std::size_t k, std::size_t s, std::size_t pb_h, std::size_t pb_w,
            std::size_t oh, std::size_t ow, Tensor4T<T>& dx) {
    const std::size_t in_h = dx.height(), in_w = dx.width(), cin = dx.channels();
    const std::size_t cols = k * k * cin;
    std::size_t row = 0;
    for (std::size_t b = 0; b < dx.batch(); ++b) {
        for (std::size_t oy = 0; oy < oh; ++oy) {
            for (std::size_t ox = 0; ox < ow; ++ox, ++row) {
                const T* src_row = col + row * cols;
                for (std::size_t ky = 0; ky < k; ++ky) {
                    const long iy = static_cast<long>(oy * s + ky) - static_cast<long>(pb_h);
                    if (iy < 0 || iy >= static_cast<long>(in_h)) continue;
                    for (std::size_t kx = 0; kx < k; ++kx) {
                        const long ix = static_cast<long>(ox * s + kx) - static_cast<long>(pb_w);
                        if (ix < 0 || ix >= static_cast<long>(in_w)) continue;
                        const T* seg = src_row + (ky * k + kx) * cin;
                        T* dst = &dx.at(b, static_cast<std::size_t>(iy),
                                        static_cast<std::size_t>(ix), 0);
                        for (std::size_t c = 0; c < cin; ++c) dst[c] += seg[c];
                    }
                }
            }
        }
    }
}

}  // namespace

template <typename T>
Dims Conv2D<T>::output_dims(const Dims& in) const {
    SamePad ph = same_pad(in[0], kernel_, stride_);
    SamePad pw = same_pad(in[1], kernel_, stride_);
    return {ph.out, pw.out, out_c_};
}

template <typename T>
long long Conv2D<T>::macs(const Dims& in) const {
    Dims out = output_dims(in);
    return static_cast<long long>(out[0]) * out[1] * out_c_ * in_c_ * kernel_ * kernel_;
}

template <typename T>
Tensor4T<T> Conv2D<T>::forward(const Tensor4T<T>& x, const TrainContext&) {
    if (x.channels() != in_c_)
        this->shape_error("expected " + std::to_string(in_c_) + " input channels, got " +
                          std::to_string(x.channels()));
    cached_input_ = x;
    const SamePad ph = same_pad(x.height(), kernel_, stride_);
    const SamePad pw = same_pad(x.width(), kernel_, stride_);
    const std::size_t rows = x.batch() * ph.out * pw.out;
    const std::size_t cols = kernel_ * kernel_ * in_c_;

    std::vector<T> col(rows * cols);
    im2col(x, kernel_, stride_, ph.before, pw.before, ph.out, pw.out, col.data());

    Tensor4T<T> out(x.batch(), ph.out, pw.out, out_c_);
    MapM<T>(out.data.data(), static_cast<Index>(rows), static_cast<Index>(out_c_)).noalias() =
        CMapM<T>(col.data(), static_cast<Index>(rows), static_cast<Index>(cols)) *
        CMapM<T>(weight_.value.data(), static_cast<Index>(cols), static_cast<Index>(out_c_));
    return out;
}

template <typename T>
Tensor4T<T> Conv2D<T>::backward(const Tensor4T<T>& grad) {
    const Tensor4T<T>& x = cached_input_;
    const SamePad ph = same_pad(x.height(), kernel_, stride_);
    const SamePad pw = same_pad(x.width(), kernel_, stride_);
    const std::size_t rows = x.batch() * ph.out * pw.out;
    const std::size_t cols = kernel_ * kernel_ * in_c_;
    if (grad.size() != rows * out_c_) this->shape_error("gradient shape mismatch in backward");

    // Rebuild the column matrix instead of caching it across the whole pass.
    std::vector<T> col(rows * cols);
    im2col(x, kernel_, stride_, ph.before, pw.before, ph.out, pw.out, col.data());

    CMapM<T> g(grad.data.data(), static_cast<Index>(rows), static_cast<Index>(out_c_));
    CMapM<T> c(col.data(), static_cast<Index>(rows), static_cast<Index>(cols));
    MapM<T>(weight_.grad.data(), static_cast<Index>(cols), static_cast<Index>(out_c_))
        .noalias() += c.transpose() * g;

    std::vector<T> dcol(rows * cols);
    MapM<T>(dcol.data(), static_cast<Index>(rows), static_cast<Index>(cols)).noalias() =
        g * CMapM<T>(weight_.value.data(), static_cast<Index>(cols),
                     static_cast<Index>(out_c_))
                .transpose();

    Tensor4T<T> dx(x.batch(), x.height(), x.width(), in_c_);
    col2im(dcol.data(), kernel_, stride_, ph.before, pw.before, ph.out, pw.out, dx);
    return dx;
}

// --- BatchNorm ---------------------------------------------------------------

template <typename T>
BatchNorm<T>::BatchNorm(std::string name, std::size_t channels, double momentum, double epsilon)
    : Layer<T>(std::move(name)),
      channels_(channels),
      momentum_(momentum),
      epsilon_(epsilon),
      gamma_(this->name_ + "/gamma", {channels}),
      beta_(this->name_ + "/beta", {channels}),
      running_mean_(channels, T{}),
      running_var_(channels, static_cast<T>(1)) {
    std::fill(gamma_.value.begin(), gamma_.value.end(), static_cast<T>(1));
}

template <typename T>
Tensor4T<T> BatchNorm<T>::forward(const Tensor4T<T>& x, const TrainContext& ctx) {
    if (x.channels() != channels_)
        this->shape_error("expected " + std::to_string(channels_) + " channels, got " +
                          std::to_string(x.channels()));
    const std::size_t n = x.batch() * x.height() * x.width();
    cached_training_ = ctx.training;
    Tensor4T<T> out(x.batch(), x.height(), x.width(), channels_);

    if (ctx.training) {
        mean_.assign(channels_, 0.0);
        inv_std_.assign(channels_, 0.0);
        std::vector<double> var(channels_, 0.0);
        for (std::size_t i = 0; i < x.size(); ++i) mean_[i % channels_] += x.data[i];
        for (std::size_t c = 0; c < channels_; ++c) mean_[c] /= static_cast<double>(n);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = static_cast<double>(x.data[i]) - mean_[i % channels_];
            var[i % channels_] += d * d;
        }
        for (std::size_t c = 0; c < channels_; ++c) {
            var[c] /= static_cast<double>(n);  // biased, matching the running update
            inv_std_[c] = 1.0 / std::sqrt(var[c] + epsilon_);
            running_mean_[c] = static_cast<T>(momentum_ * running_mean_[c] +
                                              (1.0 - momentum_) * mean_[c]);
            running_var_[c] =
                static_cast<T>(momentum_ * running_var_[c] + (1.0 - momentum_) * var[c]);
        }
        cached_xhat_ = Tensor4T<T>(x.batch(), x.height(), x.width(), channels_);
        for (std::size_t i = 0; i < x.size(); ++i) {
            const std::size_t c = i % channels_;
            const T xhat = static_cast<T>((x.data[i] - mean_[c]) * inv_std_[c]);
            cached_xhat_.data[i] = xhat;
            out.data[i] = gamma_.value[c] * xhat + beta_.value[c];
        }
    } else {
        for (std::size_t i = 0; i < x.size(); ++i) {
            const std::size_t c = i % channels_;
            const double inv = 1.0 / std::sqrt(static_cast<double>(running_var_[c]) + epsilon_);
            out.data[i] = static_cast<T>(gamma_.value[c] *
                                             (x.data[i] - running_mean_[c]) * inv +
                                         beta_.value[c]);
        }
    }
    return out;
}

template <typename T>
Tensor4T<T> BatchNorm<T>::backward(const Tensor4T<T>& grad) {
    const std::size_t n = grad.batch() * grad.height() * grad.width();
    Tensor4T<T> dx(grad.batch(), grad.height(), grad.width(), channels_);

    if (!cached_training_) {
        for (std::size_t i = 0; i < grad.size(); ++i) {
            const std::size_t c = i % channels_;
            const double inv = 1.0 / std::sqrt(static_cast<double>(running_var_[c]) + epsilon_);
            dx.data[i] = static_cast<T>(grad.data[i] * gamma_.value[c] * inv);
        }
        return dx;
    }

    std::vector<double> sum_dy(channels_, 0.0), sum_dy_xhat(channels_, 0.0);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const std::size_t c = i % channels_;
        sum_dy[c] += grad.data[i];
        sum_dy_xhat[c] += static_cast<double>(grad.data[i]) * cached_xhat_.data[i];
    }
    for (std::size_t c = 0; c < channels_; ++c) {
        gamma_.grad[c] += static_cast<T>(sum_dy_xhat[c]);
        beta_.grad[c] += static_cast<T>(sum_dy[c]);
    }
    const double invn = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const std::size_t c = i % channels_;
        const double term = static_cast<double>(grad.data[i]) - sum_dy[c] * invn -
                            cached_xhat_.data[i] * sum_dy_xhat[c] * invn;
        dx.data[i] = static_cast<T>(gamma_.value[c] * inv_std_[c] * term);
    }
    return dx;
}

// --- ReLU / pooling / dropout --------------------------------------------------

template <typename T>
Tensor4T<T> ReLU<T>::forward(const Tensor4T<T>& x, const TrainContext&) {
    cached_input_ = x;
    Tensor4T<T> out = x;
    for (T& v : out.data) v = v > T{} ? v : T{};
    return out;
}

template <typename T>
Tensor4T<T> ReLU<T>::backward(const Tensor4T<T>& grad) {
    Tensor4T<T> dx = grad;
    for (std::size_t i = 0; i < dx.size(); ++i)
        if (cached_input_.data[i] <= T{}) dx.data[i] = T{};
    return dx;
}

template <typename T>
Tensor4T<T> GlobalAvgPool<T>::forward(const Tensor4T<T>& x, const TrainContext&) {
    in_h_ = x.height();
    in_w_ = x.width();
    const double inv = 1.0 / static_cast<double>(in_h_ * in_w_);
    Tensor4T<T> out(x.batch(), 1, 1, x.channels());
    for (std::size_t b = 0; b < x.batch(); ++b)
        for (std::size_t c = 0; c < x.channels(); ++c) {
            double acc = 0.0;
            for (std::size_t h = 0; h < in_h_; ++h)
                for (std::size_t w = 0; w < in_w_; ++w) acc += x.at(b, h, w, c);
            out.at(b, 0, 0, c) = static_cast<T>(acc * inv);
        }
    return out;
}

template <typename T>
Tensor4T<T> GlobalAvgPool<T>::backward(const Tensor4T<T>& grad) {
    const T inv = static_cast<T>(1.0 / static_cast<double>(in_h_ * in_w_));
    Tensor4T<T> dx(grad.batch(), in_h_, in_w_, grad.channels());
    for (std::size_t b = 0; b < grad.batch(); ++b)
        for (std::size_t c = 0; c < grad.channels(); ++c) {
            const T g = grad.at(b, 0, 0, c) * inv;
            for (std::size_t h = 0; h < in_h_; ++h)
                for (std::size_t w = 0; w < in_w_; ++w) dx.at(b, h, w, c) = g;
        }
    return dx;
}

template <typename T>
Tensor4T<T> Dropout<T>::forward(const Tensor4T<T>& x, const TrainContext& ctx) {
    active_ = ctx.training && rate_ > 0.0;
    if (!active_) return x;  // identity at eval
    const T keep_scale = static_cast<T>(1.0 / (1.0 - rate_));
    mask_.resize(x.size());
    Tensor4T<T> out = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double u = counter_uniform(ctx.seed, static_cast<std::uint64_t>(ctx.step),
                                         stream_id_, i);
        mask_[i] = u >= rate_ ? keep_scale : T{};
        out.data[i] *= mask_[i];
    }
    return out;
}

template <typename T>
Tensor4T<T> Dropout<T>::backward(const Tensor4T<T>& grad) {
    if (!active_) return grad;
    Tensor4T<T> dx = grad;
    for (std::size_t i = 0; i < dx.size(); ++i) dx.data[i] *= mask_[i];
    return dx;
}

// --- Dense --------------------------------------------------------------------

template <typename T>
Dense<T>::Dense(std::string name, std::size_t in_dim, std::size_t units, Rng& rng)
    : Layer<T>(std::move(name)),
      in_dim_(in_dim),
      units_(units),
      weight_(this->name_ + "/kernel", {in_dim, units}),
      bias_(this->name_ + "/bias", {units}) {
    // Glorot uniform
    const double limit = std::sqrt(6.0 / static_cast<double>(in_dim + units));
    for (T& v : weight_.value) v = static_cast<T>(rng.uniform(-limit, limit));
}

template <typename T>
long long Dense<T>::macs(const Dims&) const {
    return static_cast<long long>(in_dim_) * static_cast<long long>(units_);
}

template <typename T>
Tensor4T<T> Dense<T>::forward(const Tensor4T<T>& x, const TrainContext&) {
    const std::size_t d = x.height() * x.width() * x.channels();
    if (d != in_dim_)
        this->shape_error("expected flattened input of " + std::to_string(in_dim_) +
                          ", got " + std::to_string(d));
    cached_input_ = x;
    const std::size_t batch = x.batch();
    Tensor4T<T> out(batch, 1, 1, units_);
    MapM<T> o(out.data.data(), static_cast<Index>(batch), static_cast<Index>(units_));
    o.noalias() = CMapM<T>(x.data.data(), static_cast<Index>(batch),
                           static_cast<Index>(in_dim_)) *
                  CMapM<T>(weight_.value.data(), static_cast<Index>(in_dim_),
                           static_cast<Index>(units_));
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t u = 0; u < units_; ++u) out.at(b, 0, 0, u) += bias_.value[u];
    return out;
}

template <typename T>
Tensor4T<T> Dense<T>::backward(const Tensor4T<T>& grad) {
    const std::size_t batch = cached_input_.batch();
    CMapM<T> g(grad.data.data(), static_cast<Index>(batch), static_cast<Index>(units_));
    CMapM<T> x(cached_input_.data.data(), static_cast<Index>(batch),
               static_cast<Index>(in_dim_));
    MapM<T>(weight_.grad.data(), static_cast<Index>(in_dim_), static_cast<Index>(units_))
        .noalias() += x.transpose() * g;
    for (std::size_t b = 0; b < batch; ++b)
        for (std::size_t u = 0; u < units_; ++u) bias_.grad[u] += grad.at(b, 0, 0, u);

    Tensor4T<T> dx(batch, cached_input_.height(), cached_input_.width(),
                   cached_input_.channels());
    MapM<T>(dx.data.data(), static_cast<Index>(batch), static_cast<Index>(in_dim_))
        .noalias() = g * CMapM<T>(weight_.value.data(), static_cast<Index>(in_dim_),
                                  static_cast<Index>(units_))
                             .transpose();
    return dx;
}

// --- TransformLayer -------------------------------------------------------------

template <typename T>
long long TransformLayer<T>::transform_cost(const Dims& in) const {
    std::size_t h = in[0], w = in[1];
    if (kind_ != TransformKind::Dct2Ortho) {
        h = next_pow2(h);
        w = next_pow2(w);
    }
    return transform_macs(kind_, h, w, in[2]);
}

template <typename T>
Tensor4T<T> TransformLayer<T>::forward(const Tensor4T<T>& x, const TrainContext&) {
    orig_h_ = x.height();
    orig_w_ = x.width();

    if (kind_ == TransformKind::Dct2Ortho) return dct_2d(x);

    pad_h_ = next_pow2(orig_h_);
    pad_w_ = next_pow2(orig_w_);
    const Tensor4T<T> padded =
        (pad_h_ == orig_h_ && pad_w_ == orig_w_) ? x : pad_spatial(x, pad_h_, pad_w_);

    if (kind_ == TransformKind::Wht)
        return crop_spatial(wht2d(padded), orig_h_, orig_w_);

    // FFT magnitude: keep the spectra for the backward pass.
    cached_batch_ = x.batch();
    cached_channels_ = x.channels();
    cached_spectra_.assign(cached_batch_ * cached_channels_, {});
    Tensor4T<T> out(x.batch(), pad_h_, pad_w_, x.channels());
    for (std::size_t b = 0; b < x.batch(); ++b) {
        for (std::size_t c = 0; c < x.channels(); ++c) {
            ComplexVec<T>& slab = cached_spectra_[b * cached_channels_ + c];
            slab.assign(pad_h_ * pad_w_, {});
            for (std::size_t i = 0; i < pad_h_; ++i)
                for (std::size_t j = 0; j < pad_w_; ++j)
                    slab[i * pad_w_ + j] = std::complex<T>(padded.at(b, i, j, c), 0);
            fft2d_inplace(slab, pad_h_, pad_w_);
            for (std::size_t i = 0; i < pad_h_; ++i)
                for (std::size_t j = 0; j < pad_w_; ++j)
                    out.at(b, i, j, c) = std::abs(slab[i * pad_w_ + j]);
        }
    }
    return crop_spatial(out, orig_h_, orig_w_);
}

template <typename T>
Tensor4T<T> TransformLayer<T>::backward(const Tensor4T<T>& grad) {
    if (kind_ == TransformKind::Dct2Ortho) return idct_2d(grad);

    const Tensor4T<T> gpad = (grad.height() == pad_h_ && grad.width() == pad_w_)
                                 ? grad
                                 : pad_spatial(grad, pad_h_, pad_w_);

    if (kind_ == TransformKind::Wht)
        return crop_spatial(wht2d(gpad), orig_h_, orig_w_);  // H is self-adjoint

    // d|z|/dz chain: u = g * z / |z| (0 where z = 0), dx = Re(DFT2D(conj(u))).
    Tensor4T<T> dx(grad.batch(), pad_h_, pad_w_, grad.channels());
    ComplexVec<T> u(pad_h_ * pad_w_);
    for (std::size_t b = 0; b < grad.batch(); ++b) {
        for (std::size_t c = 0; c < grad.channels(); ++c) {
            const ComplexVec<T>& z = cached_spectra_[b * cached_channels_ + c];
            for (std::size_t i = 0; i < pad_h_; ++i) {
                for (std::size_t j = 0; j < pad_w_; ++j) {
                    const std::complex<T> zv = z[i * pad_w_ + j];
                    const T mag = std::abs(zv);
                    const T g = gpad.at(b, i, j, c);
                    u[i * pad_w_ + j] =
                        mag > T{} ? std::conj(zv * (g / mag)) : std::complex<T>{};
                }
            }
            fft2d_inplace(u, pad_h_, pad_w_);
            for (std::size_t i = 0; i < pad_h_; ++i)
                for (std::size_t j = 0; j < pad_w_; ++j)
                    dx.at(b, i, j, c) = u[i * pad_w_ + j].real();
        }
    }
    return crop_spatial(dx, orig_h_, orig_w_);
}

// --- ResidualBlock ----------------------------------------------------------------

template <typename T>
ResidualBlock<T>::ResidualBlock(std::string name, std::size_t in_channels,
                                std::size_t out_channels, std::size_t stride, Rng& rng)
    : Layer<T>(std::move(name)),
      projected_(stride != 1 || in_channels != out_channels),
      conv1_(this->name_ + "/conv1", in_channels, out_channels, 3, stride, rng),
      bn1_(this->name_ + "/bn1", out_channels),
      relu1_(this->name_ + "/relu1"),
      conv2_(this->name_ + "/conv2", out_channels, out_channels, 3, 1, rng),
      bn2_(this->name_ + "/bn2", out_channels) {
    if (projected_) {
        proj_conv_ = std::make_unique<Conv2D<T>>(this->name_ + "/proj", in_channels,
                                                 out_channels, 1, stride, rng);
        proj_bn_ = std::make_unique<BatchNorm<T>>(this->name_ + "/proj_bn", out_channels);
    }
}

template <typename T>
Dims ResidualBlock<T>::output_dims(const Dims& in) const {
    return conv2_.output_dims(conv1_.output_dims(in));
}

template <typename T>
long long ResidualBlock<T>::macs(const Dims& in) const {
    Dims mid = conv1_.output_dims(in);
    long long total = conv1_.macs(in) + conv2_.macs(mid);
    if (projected_) total += proj_conv_->macs(in);
    return total;
}

template <typename T>
std::vector<Param<T>*> ResidualBlock<T>::params() {
    std::vector<Param<T>*> out;
    for (Layer<T>* l :
         std::initializer_list<Layer<T>*>{&conv1_, &bn1_, &conv2_, &bn2_}) {
        auto p = l->params();
        out.insert(out.end(), p.begin(), p.end());
    }
    if (projected_) {
        auto p1 = proj_conv_->params();
        out.insert(out.end(), p1.begin(), p1.end());
        auto p2 = proj_bn_->params();
        out.insert(out.end(), p2.begin(), p2.end());
    }
    return out;
}

template <typename T>
Tensor4T<T> ResidualBlock<T>::forward(const Tensor4T<T>& x, const TrainContext& ctx) {
    Tensor4T<T> h = conv1_.forward(x, ctx);
    h = bn1_.forward(h, ctx);
    h = relu1_.forward(h, ctx);
    h = conv2_.forward(h, ctx);
    h = bn2_.forward(h, ctx);

    Tensor4T<T> idn =
        projected_ ? proj_bn_->forward(proj_conv_->forward(x, ctx), ctx) : x;
    if (idn.shape != h.shape) this->shape_error("skip and main paths disagree on shape");

    cached_sum_ = std::move(h);
    for (std::size_t i = 0; i < cached_sum_.size(); ++i) cached_sum_.data[i] += idn.data[i];

    Tensor4T<T> out = cached_sum_;
    for (T& v : out.data) v = v > T{} ? v : T{};
    return out;
}

template <typename T>
Tensor4T<T> ResidualBlock<T>::backward(const Tensor4T<T>& grad) {
    Tensor4T<T> dsum = grad;
    for (std::size_t i = 0; i < dsum.size(); ++i)
        if (cached_sum_.data[i] <= T{}) dsum.data[i] = T{};

    Tensor4T<T> dmain = bn2_.backward(dsum);
    dmain = conv2_.backward(dmain);
    dmain = relu1_.backward(dmain);
    dmain = bn1_.backward(dmain);
    dmain = conv1_.backward(dmain);

    if (projected_) {
        Tensor4T<T> dskip = proj_conv_->backward(proj_bn_->backward(dsum));
        for (std::size_t i = 0; i < dmain.size(); ++i) dmain.data[i] += dskip.data[i];
    } else {
        for (std::size_t i = 0; i < dmain.size(); ++i) dmain.data[i] += dsum.data[i];
    }
    return dmain;
}

template class Conv2D<float>;
template class Conv2D<double>;
template class BatchNorm<float>;
template class BatchNorm<double>;
template class ReLU<float>;
template class ReLU<double>;
template class GlobalAvgPool<float>;
template class GlobalAvgPool<double>;
template class Dropout<float>;
template class Dropout<double>;
template class Dense<float>;
template class Dense<double>;
template class TransformLayer<float>;
template class TransformLayer<double>;
template class ResidualBlock<float>;
template class ResidualBlock<double>;

}  // namespace freqnet::nn
