#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "freqnet/tensor.hpp"

namespace freqnet {

enum class TransformKind { FftMagnitude, Dct2Ortho, Wht };

const char* transform_kind_name(TransformKind kind);

// Sylvester-construction Hadamard matrix: H_1 = [1],
// H_n = [[H_{n/2}, H_{n/2}], [H_{n/2}, -H_{n/2}]].
// Unnormalized entries are +-1 and satisfy H * H^T = n * I exactly.
// The normalized form scales every entry by 1/sqrt(n), which makes the
// matrix orthogonal (and, being symmetric, its own inverse).
struct HadamardMatrix {
    int n = 0;
    bool normalized = false;
    std::vector<int> sign;  // n*n entries in {-1, +1}, row-major

    int sign_at(int i, int j) const { return sign[static_cast<std::size_t>(i) * n + j]; }

    template <typename T>
    std::vector<T> entries() const {
        T scale = normalized ? static_cast<T>(1.0 / std::sqrt(static_cast<double>(n)))
                             : static_cast<T>(1);
        std::vector<T> e(sign.size());
        for (std::size_t i = 0; i < sign.size(); ++i) e[i] = scale * static_cast<T>(sign[i]);
        return e;
    }
};

HadamardMatrix hadamard_matrix(int n);            // unnormalized; n must be a power of two
HadamardMatrix normalize(const HadamardMatrix& h);

// 2-D Walsh-Hadamard transform of every (batch, channel) slab S:
// H_h,norm * S * H_w,norm via the transpose/merge pipeline. Height and
// width must already be powers of two (callers pad first).
template <typename T>
Tensor4T<T> wht2d(const Tensor4T<T>& x);

// Inverse of wht2d. With normalized matrices the map is its own inverse.
template <typename T>
Tensor4T<T> iwht2d(const Tensor4T<T>& y);

// --- DCT-II ----------------------------------------------------------------

// Unnormalized X[k] = sum_n x[n] cos(pi/N (n + 1/2) k), direct O(N^2)
// double-precision evaluation. Kept as the oracle for the fast paths.
std::vector<double> dct2_naive(const std::vector<double>& x);

// Orthonormal DCT-II: X[0] scaled by sqrt(1/N), X[k>0] by sqrt(2/N).
template <typename T>
std::vector<T> dct2_ortho(const std::vector<T>& x);

// Orthonormal DCT-II evaluated through the DFT of the 2N-point even
// extension y[n] = x[n], y[2N-1-n] = x[n]. Falls back to the naive DFT
// when 2N is not a power of two.
template <typename T>
std::vector<T> dct2_via_fft(const std::vector<T>& x);

// Row-major orthonormal DCT-II matrix C with C[k][x] = s(k) cos(pi/N (x+1/2) k).
template <typename T>
std::vector<T> dct_ortho_matrix(std::size_t n);

// Separable 2-D orthonormal DCT per slab: along width, then along height
// (each via the transpose sandwich), i.e. C_h * S * C_w^T.
template <typename T>
Tensor4T<T> dct_2d(const Tensor4T<T>& x);

// Transpose map of dct_2d (its inverse, the matrices being orthogonal).
template <typename T>
Tensor4T<T> idct_2d(const Tensor4T<T>& y);

// --- DFT / FFT -------------------------------------------------------------

template <typename T>
using ComplexVec = std::vector<std::complex<T>>;

// X[k] = sum_n x[n] e^{-i 2 pi k n / N}: the Fourier-matrix product,
// O(N^2), double precision. The oracle for fft.
ComplexVec<double> dft_naive(const ComplexVec<double>& x);

// Radix-2 decimation-in-time Cooley-Tukey, unnormalized forward.
// Length must be a power of two.
template <typename T>
void fft_inplace(ComplexVec<T>& x);

template <typename T>
ComplexVec<T> fft(ComplexVec<T> x) {
    fft_inplace(x);
    return x;
}

// Inverse as conj(fft(conj(x))) / N.
template <typename T>
ComplexVec<T> ifft(ComplexVec<T> x);

// In-place 2-D FFT of an h*w row-major complex slab: row FFTs, then
// column FFTs. Both dims must be powers of two.
template <typename T>
void fft2d_inplace(ComplexVec<T>& slab, std::size_t h, std::size_t w);

template <typename T>
void ifft2d_inplace(ComplexVec<T>& slab, std::size_t h, std::size_t w);

// Per-slab 2-D DFT magnitude: cast to complex, transform, take |.|,
// cast back. Output shape equals input shape.
template <typename T>
Tensor4T<T> fft2d_magnitude(const Tensor4T<T>& x);

// Per-sample MAC accounting for one transform over an h*w*c feature map.
// WHT and DCT are dense matrix sandwiches (h^2 w + h w^2 per slab); the
// FFT cost counts 4 real MACs per complex butterfly multiply.
long long transform_macs(TransformKind kind, std::size_t h, std::size_t w, std::size_t c);

}  // namespace freqnet
