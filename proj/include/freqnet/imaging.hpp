#pragma once

#include <string>
#include <vector>

#include "freqnet/tensor.hpp"

namespace freqnet {

// Pixel values are stored as floats either on the byte scale [0,255]
// (integral values, what the PGM/PPM codecs produce) or on [0,1].
enum class PixelRange { Byte, Unit };

struct Image {
    int width = 0, height = 0, channels = 1;  // channels: 1 gray, 3 RGB
    PixelRange range = PixelRange::Byte;
    std::vector<float> pixels;  // row-major, interleaved channels

    Image() = default;
    Image(int w, int h, int c, PixelRange r = PixelRange::Byte)
        : width(w), height(h), channels(c), range(r),
          pixels(static_cast<std::size_t>(w) * h * c, 0.0f) {}

    float& at(int y, int x, int c = 0) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float at(int y, int x, int c = 0) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    float max_value() const { return range == PixelRange::Byte ? 255.0f : 1.0f; }
};

// BT.601 luma (0.299, 0.587, 0.114); rounded on the byte scale.
Image to_grayscale(const Image& rgb);

enum class FilterKind { LowPass, HighPass };

// FFT -> circular mask around DC on the center-shifted spectrum -> inverse
// FFT -> real part, cropped back to the original size. The returned values
// are NOT clamped; use bandpass_filter (or write_image) for the displayable
// image. cutoff is a fraction of the largest spectral radius, in [0,1].
std::vector<double> bandpass_filter_real(const Image& gray, FilterKind kind, double cutoff);

Image bandpass_filter(const Image& gray, FilterKind kind, double cutoff);

struct SpectrumView {
    Image full;     // log(1+|coeff|), min-max scaled to [0,255]
    Image cropped;  // top-left crop x crop block, same rendering
};

SpectrumView dct_spectrum_view(const Image& gray, int crop);

struct ParsevalResult {
    double spatial_energy = 0.0;
    double frequency_energy = 0.0;
    double relative_difference = 0.0;
};

// Spatial energy vs orthonormal 2-D DCT coefficient energy, on the pixel
// values as stored. single=true runs the transform in float.
ParsevalResult parseval_check(const Image& gray, bool single = false);

// Binary PGM (P5) / PPM (P6), 8-bit, maxval 255.
Image read_image(const std::string& path);
void write_image(const Image& img, const std::string& path);

// Byte-level encode/decode used by the file functions (and tests).
Image decode_netpbm(const std::vector<unsigned char>& bytes);
std::vector<unsigned char> encode_netpbm(const Image& img);

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Helpers shared with the CLI: slab <-> image and log-scale rendering.
Tensor4d image_to_tensor(const Image& gray);
Image render_log_scaled(const Tensor4d& coeffs);

}  // namespace freqnet
