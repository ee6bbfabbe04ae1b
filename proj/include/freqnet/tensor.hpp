#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace freqnet {

// Dense batch x height x width x channels array, row-major in that axis
// order (NHWC). All layout changes are explicit copies.
template <typename T>
struct Tensor4T {
    std::array<std::size_t, 4> shape{0, 0, 0, 0};
    std::vector<T> data;

    Tensor4T() = default;
    Tensor4T(std::size_t b, std::size_t h, std::size_t w, std::size_t c, T fill = T{})
        : shape{b, h, w, c}, data(b * h * w * c, fill) {}

    std::size_t batch() const { return shape[0]; }
    std::size_t height() const { return shape[1]; }
    std::size_t width() const { return shape[2]; }
    std::size_t channels() const { return shape[3]; }
    std::size_t size() const { return data.size(); }

    std::size_t index(std::size_t b, std::size_t h, std::size_t w, std::size_t c) const {
        return ((b * shape[1] + h) * shape[2] + w) * shape[3] + c;
    }
    T& at(std::size_t b, std::size_t h, std::size_t w, std::size_t c) {
        return data[index(b, h, w, c)];
    }
    const T& at(std::size_t b, std::size_t h, std::size_t w, std::size_t c) const {
        return data[index(b, h, w, c)];
    }

    bool all_finite() const {
        for (const T& v : data)
            if (!std::isfinite(static_cast<double>(v))) return false;
        return true;
    }

    // Checked-mode invariant: size matches shape and every element is finite.
    void validate(const char* what = "tensor") const {
        if (data.size() != shape[0] * shape[1] * shape[2] * shape[3])
            throw std::logic_error(std::string(what) + ": data length does not match shape");
        if (!all_finite())
            throw std::runtime_error(std::string(what) + ": non-finite element");
    }
};

using Tensor4f = Tensor4T<float>;
using Tensor4d = Tensor4T<double>;

// 3-axis (slabs, height, width) result of merging batch and channels.
template <typename T>
struct Tensor3T {
    std::size_t slabs = 0, height = 0, width = 0;
    std::vector<T> data;

    Tensor3T() = default;
    Tensor3T(std::size_t g, std::size_t h, std::size_t w, T fill = T{})
        : slabs(g), height(h), width(w), data(g * h * w, fill) {}

    T& at(std::size_t g, std::size_t i, std::size_t j) {
        return data[(g * height + i) * width + j];
    }
    const T& at(std::size_t g, std::size_t i, std::size_t j) const {
        return data[(g * height + i) * width + j];
    }
    T* slab(std::size_t g) { return data.data() + g * height * width; }
    const T* slab(std::size_t g) const { return data.data() + g * height * width; }
};

using Tensor3f = Tensor3T<float>;
using Tensor3d = Tensor3T<double>;

// Axis order for permute: out axis i comes from input axis order[i]
// (numpy transpose semantics).
using AxisOrder = std::array<int, 4>;

inline void check_axis_order(const AxisOrder& order) {
    std::array<bool, 4> seen{false, false, false, false};
    for (int a : order) {
        if (a < 0 || a > 3 || seen[a])
            throw std::invalid_argument("permute: order is not a permutation of {0,1,2,3}");
        seen[a] = true;
    }
}

inline AxisOrder inverse_order(const AxisOrder& order) {
    check_axis_order(order);
    AxisOrder inv{};
    for (int i = 0; i < 4; ++i) inv[order[i]] = i;
    return inv;
}

template <typename T>
Tensor4T<T> permute(const Tensor4T<T>& t, const AxisOrder& order) {
    check_axis_order(order);
    std::array<std::size_t, 4> out_shape;
    for (int i = 0; i < 4; ++i) out_shape[i] = t.shape[order[i]];
    Tensor4T<T> out(out_shape[0], out_shape[1], out_shape[2], out_shape[3]);

    std::array<std::size_t, 4> in_idx{};
    std::size_t n = 0;
    for (std::size_t o0 = 0; o0 < out_shape[0]; ++o0)
        for (std::size_t o1 = 0; o1 < out_shape[1]; ++o1)
            for (std::size_t o2 = 0; o2 < out_shape[2]; ++o2)
                for (std::size_t o3 = 0; o3 < out_shape[3]; ++o3) {
                    in_idx[order[0]] = o0;
                    in_idx[order[1]] = o1;
                    in_idx[order[2]] = o2;
                    in_idx[order[3]] = o3;
                    out.data[n++] = t.at(in_idx[0], in_idx[1], in_idx[2], in_idx[3]);
                }
    return out;
}

template <typename T>
Tensor4T<T> ipermute(const Tensor4T<T>& t, const AxisOrder& order) {
    return permute(t, inverse_order(order));
}

// (b,h,w,c) -> (b*c, h, w). Slab g holds channel (g mod C) of batch item
// (g div C), i.e. the layout after a (b,c,h,w) permutation.
template <typename T>
Tensor3T<T> merge_batch_channels(const Tensor4T<T>& t) {
    Tensor4T<T> bchw = permute(t, AxisOrder{0, 3, 1, 2});
    Tensor3T<T> out;
    out.slabs = t.batch() * t.channels();
    out.height = t.height();
    out.width = t.width();
    out.data = std::move(bchw.data);
    return out;
}

template <typename T>
Tensor4T<T> split_batch_channels(const Tensor3T<T>& t, std::size_t batch, std::size_t channels) {
    if (batch * channels != t.slabs)
        throw std::invalid_argument("split_batch_channels: batch*channels != slabs");
    Tensor4T<T> bchw(batch, channels, t.height, t.width);
    bchw.data = t.data;
    return ipermute(bchw, AxisOrder{0, 3, 1, 2});
}

inline bool is_pow2(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

template <typename T>
struct Padded {
    Tensor4T<T> tensor;
    std::size_t orig_height = 0;
    std::size_t orig_width = 0;
};

// Zero-pads height and width (bottom/right) up to the next power of two.
template <typename T>
Padded<T> pad_to_pow2(const Tensor4T<T>& t) {
    if (t.height() < 1 || t.width() < 1)
        throw std::invalid_argument("pad_to_pow2: height and width must be >= 1");
    std::size_t ph = next_pow2(t.height());
    std::size_t pw = next_pow2(t.width());
    Padded<T> out;
    out.orig_height = t.height();
    out.orig_width = t.width();
    if (ph == t.height() && pw == t.width()) {
        out.tensor = t;
        return out;
    }
    out.tensor = Tensor4T<T>(t.batch(), ph, pw, t.channels());
    for (std::size_t b = 0; b < t.batch(); ++b)
        for (std::size_t h = 0; h < t.height(); ++h)
            for (std::size_t w = 0; w < t.width(); ++w)
                for (std::size_t c = 0; c < t.channels(); ++c)
                    out.tensor.at(b, h, w, c) = t.at(b, h, w, c);
    return out;
}

template <typename T>
Tensor4T<T> crop_spatial(const Tensor4T<T>& t, std::size_t height, std::size_t width) {
    if (height > t.height() || width > t.width())
        throw std::invalid_argument("crop_spatial: crop exceeds tensor dimensions");
    if (height == t.height() && width == t.width()) return t;
    Tensor4T<T> out(t.batch(), height, width, t.channels());
    for (std::size_t b = 0; b < t.batch(); ++b)
        for (std::size_t h = 0; h < height; ++h)
            for (std::size_t w = 0; w < width; ++w)
                for (std::size_t c = 0; c < t.channels(); ++c)
                    out.at(b, h, w, c) = t.at(b, h, w, c);
    return out;
}

// Zero-pad bottom/right to the given spatial size (adjoint of crop_spatial).
template <typename T>
Tensor4T<T> pad_spatial(const Tensor4T<T>& t, std::size_t height, std::size_t width) {
    if (height < t.height() || width < t.width())
        throw std::invalid_argument("pad_spatial: target smaller than tensor");
    if (height == t.height() && width == t.width()) return t;
    Tensor4T<T> out(t.batch(), height, width, t.channels());
    for (std::size_t b = 0; b < t.batch(); ++b)
        for (std::size_t h = 0; h < t.height(); ++h)
            for (std::size_t w = 0; w < t.width(); ++w)
                for (std::size_t c = 0; c < t.channels(); ++c)
                    out.at(b, h, w, c) = t.at(b, h, w, c);
    return out;
}

}  // namespace freqnet
