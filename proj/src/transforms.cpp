#include "freqnet/transforms.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace freqnet {

const char* transform_kind_name(TransformKind kind) {
    switch (kind) {
        case TransformKind::FftMagnitude: return "fft";
        case TransformKind::Dct2Ortho: return "dct";
        case TransformKind::Wht: return "wht";
    }
    return "?";
}

HadamardMatrix hadamard_matrix(int n) {
    if (n < 1 || !is_pow2(static_cast<std::size_t>(n)))
        throw std::invalid_argument("hadamard_matrix: n must be a power of two, got " +
                                    std::to_string(n));
    HadamardMatrix h;
    h.n = n;
    h.sign.assign(static_cast<std::size_t>(n) * n, 1);
    // Grow H_1 -> H_n by the [[H, H], [H, -H]] block step.
    for (int m = 1; m < n; m <<= 1) {
        for (int i = 0; i < m; ++i) {
            for (int j = 0; j < m; ++j) {
                int v = h.sign[static_cast<std::size_t>(i) * n + j];
                h.sign[static_cast<std::size_t>(i) * n + (j + m)] = v;
                h.sign[static_cast<std::size_t>(i + m) * n + j] = v;
                h.sign[static_cast<std::size_t>(i + m) * n + (j + m)] = -v;
            }
        }
    }
    return h;
}

HadamardMatrix normalize(const HadamardMatrix& h) {
    HadamardMatrix out = h;
    out.normalized = true;
    return out;
}

namespace {

// C = A(m x k) * B(k x n), row-major.
template <typename T>
void matmul(const T* a, const T* b, T* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m * n; ++i) c[i] = T{};
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            T av = a[i * k + p];
            const T* brow = b + p * n;
            T* crow = c + i * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
        }
    }
}

template <typename T>
void require_pow2_spatial(const Tensor4T<T>& x, const char* who) {
    if (!is_pow2(x.height()) || !is_pow2(x.width()))
        throw std::invalid_argument(std::string(who) +
                                    ": spatial dims must be powers of two (pad first), got " +
                                    std::to_string(x.height()) + "x" + std::to_string(x.width()));
}

}  // namespace

template <typename T>
Tensor4T<T> wht2d(const Tensor4T<T>& x) {
    require_pow2_spatial(x, "wht2d");
    const std::size_t h = x.height(), w = x.width();
    std::vector<T> hw = normalize(hadamard_matrix(static_cast<int>(w))).template entries<T>();
    std::vector<T> hh = (h == w)
        ? hw
        : normalize(hadamard_matrix(static_cast<int>(h))).template entries<T>();

    // Alg.-3 pipeline: (b,c,h,w) slabs, transform along width, then height.
    Tensor3T<T> slabs = merge_batch_channels(x);
    std::vector<T> tmp(h * w);
    for (std::size_t g = 0; g < slabs.slabs; ++g) {
        T* s = slabs.slab(g);
        matmul(s, hw.data(), tmp.data(), h, w, w);       // S * H_w  (H symmetric)
        matmul(hh.data(), tmp.data(), s, h, h, w);       // H_h * (S * H_w)
    }
    return split_batch_channels(slabs, x.batch(), x.channels());
}

template <typename T>
Tensor4T<T> iwht2d(const Tensor4T<T>& y) {
    require_pow2_spatial(y, "iwht2d");
    // Normalized H is symmetric and orthogonal, so the inverse is the same map.
    return wht2d(y);
}

std::vector<double> dct2_naive(const std::vector<double>& x) {
    if (x.empty()) throw std::invalid_argument("dct2_naive: empty input");
    const std::size_t n = x.size();
    std::vector<double> out(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += x[i] * std::cos(M_PI / static_cast<double>(n) *
                                   (static_cast<double>(i) + 0.5) * static_cast<double>(k));
        out[k] = acc;
    }
    return out;
}

template <typename T>
std::vector<T> dct_ortho_matrix(std::size_t n) {
    std::vector<T> m(n * n);
    const double s0 = std::sqrt(1.0 / static_cast<double>(n));
    const double sk = std::sqrt(2.0 / static_cast<double>(n));
    for (std::size_t k = 0; k < n; ++k) {
        double scale = (k == 0) ? s0 : sk;
        for (std::size_t x = 0; x < n; ++x)
            m[k * n + x] = static_cast<T>(
                scale * std::cos(M_PI / static_cast<double>(n) *
                                 (static_cast<double>(x) + 0.5) * static_cast<double>(k)));
    }
    return m;
}

template <typename T>
std::vector<T> dct2_ortho(const std::vector<T>& x) {
    if (x.empty()) throw std::invalid_argument("dct2_ortho: empty input");
    const std::size_t n = x.size();
    const double s0 = std::sqrt(1.0 / static_cast<double>(n));
    const double sk = std::sqrt(2.0 / static_cast<double>(n));
    std::vector<T> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            acc += static_cast<double>(x[i]) *
                   std::cos(M_PI / static_cast<double>(n) *
                            (static_cast<double>(i) + 0.5) * static_cast<double>(k));
        out[k] = static_cast<T>((k == 0 ? s0 : sk) * acc);
    }
    return out;
}

template <typename T>
std::vector<T> dct2_via_fft(const std::vector<T>& x) {
    if (x.empty()) throw std::invalid_argument("dct2_via_fft: empty input");
    const std::size_t n = x.size();
    const std::size_t n2 = 2 * n;

    // Even extension y[i] = x[i], y[2N-1-i] = x[i].
    ComplexVec<double> y(n2);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = std::complex<double>(static_cast<double>(x[i]), 0.0);
        y[n2 - 1 - i] = y[i];
    }

    ComplexVec<double> spectrum;
    if (is_pow2(n2)) {
        fft_inplace(y);
        spectrum = std::move(y);
    } else {
        spectrum = dft_naive(y);
    }

    // Unnormalized DCT-II is Re(e^{-i pi k / 2N} Y[k]) / 2; then apply the
    // orthonormal scaling.
    const double s0 = std::sqrt(1.0 / static_cast<double>(n));
    const double sk = std::sqrt(2.0 / static_cast<double>(n));
    std::vector<T> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        double angle = -M_PI * static_cast<double>(k) / static_cast<double>(n2);
        std::complex<double> twiddle(std::cos(angle), std::sin(angle));
        double unnorm = 0.5 * (twiddle * spectrum[k]).real();
        out[k] = static_cast<T>((k == 0 ? s0 : sk) * unnorm);
    }
    return out;
}

namespace {

// Applies an n x n matrix along the last axis of a 4-D tensor:
// out[..., k] = sum_x m[k][x] in[..., x].
template <typename T>
Tensor4T<T> apply_matrix_last_axis(const Tensor4T<T>& t, const std::vector<T>& m) {
    const std::size_t n = t.shape[3];
    Tensor4T<T> out(t.shape[0], t.shape[1], t.shape[2], n);
    const std::size_t lines = t.size() / n;
    std::vector<T> line(n);
    for (std::size_t l = 0; l < lines; ++l) {
        const T* src = t.data.data() + l * n;
        T* dst = out.data.data() + l * n;
        for (std::size_t k = 0; k < n; ++k) {
            T acc{};
            const T* mrow = m.data() + k * n;
            for (std::size_t x = 0; x < n; ++x) acc += mrow[x] * src[x];
            dst[k] = acc;
        }
    }
    return out;
}

template <typename T>
std::vector<T> transpose_square(const std::vector<T>& m, std::size_t n) {
    std::vector<T> t(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) t[j * n + i] = m[i * n + j];
    return t;
}

template <typename T>
Tensor4T<T> dct_2d_impl(const Tensor4T<T>& x, bool inverse) {
    if (x.height() < 1 || x.width() < 1)
        throw std::invalid_argument("dct_2d: height and width must be >= 1");
    std::vector<T> cw = dct_ortho_matrix<T>(x.width());
    std::vector<T> ch = (x.height() == x.width()) ? cw : dct_ortho_matrix<T>(x.height());
    if (inverse) {
        cw = transpose_square(cw, x.width());
        ch = transpose_square(ch, x.height());
    }
    // Alg.-2 transpose sandwich: bring each spatial axis to the end, apply
    // the 1-D transform, transpose back.
    AxisOrder to_width{0, 1, 3, 2};   // (b,h,w,c) -> (b,h,c,w)
    Tensor4T<T> t = ipermute(apply_matrix_last_axis(permute(x, to_width), cw), to_width);
    AxisOrder to_height{0, 2, 3, 1};  // (b,h,w,c) -> (b,w,c,h)
    return ipermute(apply_matrix_last_axis(permute(t, to_height), ch), to_height);
}

}  // namespace

template <typename T>
Tensor4T<T> dct_2d(const Tensor4T<T>& x) {
    return dct_2d_impl(x, false);
}

template <typename T>
Tensor4T<T> idct_2d(const Tensor4T<T>& y) {
    return dct_2d_impl(y, true);
}

ComplexVec<double> dft_naive(const ComplexVec<double>& x) {
    if (x.empty()) throw std::invalid_argument("dft_naive: empty input");
    const std::size_t n = x.size();
    ComplexVec<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            double angle = -2.0 * M_PI * static_cast<double>(k) * static_cast<double>(i) /
                           static_cast<double>(n);
            acc += x[i] * std::complex<double>(std::cos(angle), std::sin(angle));
        }
        out[k] = acc;
    }
    return out;
}

template <typename T>
void fft_inplace(ComplexVec<T>& x) {
    const std::size_t n = x.size();
    if (n == 0) throw std::invalid_argument("fft: empty input");
    if (!is_pow2(n))
        throw std::invalid_argument("fft: length must be a power of two, got " +
                                    std::to_string(n));
    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(x[i], x[j]);
    }
    // Butterflies.
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = -2.0 * M_PI / static_cast<double>(len);
        const std::complex<T> wlen(static_cast<T>(std::cos(angle)),
                                   static_cast<T>(std::sin(angle)));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<T> w(1, 0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                std::complex<T> u = x[i + j];
                std::complex<T> v = x[i + j + len / 2] * w;
                x[i + j] = u + v;
                x[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

template <typename T>
ComplexVec<T> ifft(ComplexVec<T> x) {
    const std::size_t n = x.size();
    for (auto& v : x) v = std::conj(v);
    fft_inplace(x);
    const T inv = static_cast<T>(1) / static_cast<T>(n);
    for (auto& v : x) v = std::conj(v) * inv;
    return x;
}

template <typename T>
void fft2d_inplace(ComplexVec<T>& slab, std::size_t h, std::size_t w) {
    if (slab.size() != h * w) throw std::invalid_argument("fft2d: slab size mismatch");
    ComplexVec<T> line;
    for (std::size_t r = 0; r < h; ++r) {
        line.assign(slab.begin() + r * w, slab.begin() + (r + 1) * w);
        fft_inplace(line);
        std::copy(line.begin(), line.end(), slab.begin() + r * w);
    }
    line.resize(h);
    for (std::size_t c = 0; c < w; ++c) {
        for (std::size_t r = 0; r < h; ++r) line[r] = slab[r * w + c];
        fft_inplace(line);
        for (std::size_t r = 0; r < h; ++r) slab[r * w + c] = line[r];
    }
}

template <typename T>
void ifft2d_inplace(ComplexVec<T>& slab, std::size_t h, std::size_t w) {
    for (auto& v : slab) v = std::conj(v);
    fft2d_inplace(slab, h, w);
    const T inv = static_cast<T>(1) / static_cast<T>(h * w);
    for (auto& v : slab) v = std::conj(v) * inv;
}

template <typename T>
Tensor4T<T> fft2d_magnitude(const Tensor4T<T>& x) {
    require_pow2_spatial(x, "fft2d_magnitude");
    const std::size_t h = x.height(), w = x.width();
    Tensor4T<T> out(x.batch(), h, w, x.channels());
    ComplexVec<T> slab(h * w);
    for (std::size_t b = 0; b < x.batch(); ++b) {
        for (std::size_t c = 0; c < x.channels(); ++c) {
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < w; ++j)
                    slab[i * w + j] = std::complex<T>(x.at(b, i, j, c), 0);
            fft2d_inplace(slab, h, w);
            for (std::size_t i = 0; i < h; ++i)
                for (std::size_t j = 0; j < w; ++j)
                    out.at(b, i, j, c) = std::abs(slab[i * w + j]);
        }
    }
    return out;
}

namespace {

long long ilog2(std::size_t n) {
    long long k = 0;
    while ((std::size_t{1} << k) < n) ++k;
    return k;
}

}  // namespace

long long transform_macs(TransformKind kind, std::size_t h, std::size_t w, std::size_t c) {
    const long long hh = static_cast<long long>(h), ww = static_cast<long long>(w);
    long long per_slab = 0;
    switch (kind) {
        case TransformKind::Wht:
        case TransformKind::Dct2Ortho:
            per_slab = hh * hh * ww + hh * ww * ww;
            break;
        case TransformKind::FftMagnitude:
            per_slab = 2 * hh * ww * (ilog2(h) + ilog2(w));
            break;
    }
    return per_slab * static_cast<long long>(c);
}

// Explicit instantiations: double for oracles, float for training.
template Tensor4T<float> wht2d<float>(const Tensor4T<float>&);
template Tensor4T<double> wht2d<double>(const Tensor4T<double>&);
template Tensor4T<float> iwht2d<float>(const Tensor4T<float>&);
template Tensor4T<double> iwht2d<double>(const Tensor4T<double>&);
template std::vector<float> dct_ortho_matrix<float>(std::size_t);
template std::vector<double> dct_ortho_matrix<double>(std::size_t);
template std::vector<float> dct2_ortho<float>(const std::vector<float>&);
template std::vector<double> dct2_ortho<double>(const std::vector<double>&);
template std::vector<float> dct2_via_fft<float>(const std::vector<float>&);
template std::vector<double> dct2_via_fft<double>(const std::vector<double>&);
template Tensor4T<float> dct_2d<float>(const Tensor4T<float>&);
template Tensor4T<double> dct_2d<double>(const Tensor4T<double>&);
template Tensor4T<float> idct_2d<float>(const Tensor4T<float>&);
template Tensor4T<double> idct_2d<double>(const Tensor4T<double>&);
template void fft_inplace<float>(ComplexVec<float>&);
template void fft_inplace<double>(ComplexVec<double>&);
template ComplexVec<float> ifft<float>(ComplexVec<float>);
template ComplexVec<double> ifft<double>(ComplexVec<double>);
template void fft2d_inplace<float>(ComplexVec<float>&, std::size_t, std::size_t);
template void fft2d_inplace<double>(ComplexVec<double>&, std::size_t, std::size_t);
template void ifft2d_inplace<float>(ComplexVec<float>&, std::size_t, std::size_t);
template void ifft2d_inplace<double>(ComplexVec<double>&, std::size_t, std::size_t);
template Tensor4T<float> fft2d_magnitude<float>(const Tensor4T<float>&);
template Tensor4T<double> fft2d_magnitude<double>(const Tensor4T<double>&);

}  // namespace freqnet
