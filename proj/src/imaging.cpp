#include "freqnet/imaging.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "freqnet/transforms.hpp"

namespace freqnet {

Image to_grayscale(const Image& rgb) {
    if (rgb.channels != 3)
        throw std::invalid_argument("to_grayscale: expected 3 channels, got " +
                                    std::to_string(rgb.channels));
    Image out(rgb.width, rgb.height, 1, rgb.range);
    for (int y = 0; y < rgb.height; ++y) {
        for (int x = 0; x < rgb.width; ++x) {
            double luma = 0.299 * rgb.at(y, x, 0) + 0.587 * rgb.at(y, x, 1) +
                          0.114 * rgb.at(y, x, 2);
            out.at(y, x) = rgb.range == PixelRange::Byte
                               ? static_cast<float>(std::round(luma))
                               : static_cast<float>(luma);
        }
    }
    return out;
}

Tensor4d image_to_tensor(const Image& gray) {
    Tensor4d t(1, static_cast<std::size_t>(gray.height), static_cast<std::size_t>(gray.width), 1);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x)
            t.at(0, static_cast<std::size_t>(y), static_cast<std::size_t>(x), 0) = gray.at(y, x);
    return t;
}

std::vector<double> bandpass_filter_real(const Image& gray, FilterKind kind, double cutoff) {
    if (gray.channels != 1)
        throw std::invalid_argument("bandpass_filter: expected a single-channel image");
    if (cutoff < 0.0 || cutoff > 1.0)
        throw std::invalid_argument("bandpass_filter: cutoff must be in [0,1], got " +
                                    std::to_string(cutoff));
    const std::size_t h = next_pow2(static_cast<std::size_t>(gray.height));
    const std::size_t w = next_pow2(static_cast<std::size_t>(gray.width));

    ComplexVec<double> slab(h * w, {0.0, 0.0});
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x)
            slab[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)] = gray.at(y, x);
    fft2d_inplace(slab, h, w);

    // Circular mask around DC in the center-shifted view; the max radius is
    // the Nyquist corner, so cutoff 1.0 keeps the whole spectrum.
    const double max_radius = std::sqrt(static_cast<double>(h / 2) * (h / 2) +
                                        static_cast<double>(w / 2) * (w / 2));
    const double limit = cutoff * max_radius;
    for (std::size_t u = 0; u < h; ++u) {
        const double fu = (u <= h / 2) ? static_cast<double>(u)
                                       : static_cast<double>(u) - static_cast<double>(h);
        for (std::size_t v = 0; v < w; ++v) {
            const double fv = (v <= w / 2) ? static_cast<double>(v)
                                           : static_cast<double>(v) - static_cast<double>(w);
            const double r = std::sqrt(fu * fu + fv * fv);
            const bool keep = (kind == FilterKind::LowPass) ? (r <= limit) : (r > limit);
            if (!keep) slab[u * w + v] = {0.0, 0.0};
        }
    }

    ifft2d_inplace(slab, h, w);
    std::vector<double> out(static_cast<std::size_t>(gray.height) * gray.width);
    for (int y = 0; y < gray.height; ++y)
        for (int x = 0; x < gray.width; ++x)
            out[static_cast<std::size_t>(y) * gray.width + x] =
                slab[static_cast<std::size_t>(y) * w + static_cast<std::size_t>(x)].real();
    return out;
}

Image bandpass_filter(const Image& gray, FilterKind kind, double cutoff) {
    std::vector<double> real = bandpass_filter_real(gray, kind, cutoff);
    Image out(gray.width, gray.height, 1, gray.range);
    const double hi = gray.max_value();
    for (std::size_t i = 0; i < real.size(); ++i) {
        double v = std::clamp(real[i], 0.0, hi);
        out.pixels[i] = gray.range == PixelRange::Byte ? static_cast<float>(std::round(v))
                                                       : static_cast<float>(v);
    }
    return out;
}

Image render_log_scaled(const Tensor4d& coeffs) {
    const std::size_t h = coeffs.height(), w = coeffs.width();
    std::vector<double> v(h * w);
    for (std::size_t i = 0; i < h; ++i)
        for (std::size_t j = 0; j < w; ++j)
            v[i * w + j] = std::log1p(std::abs(coeffs.at(0, i, j, 0)));
    auto [mn_it, mx_it] = std::minmax_element(v.begin(), v.end());
    const double mn = *mn_it, mx = *mx_it;
    Image out(static_cast<int>(w), static_cast<int>(h), 1, PixelRange::Byte);
    for (std::size_t i = 0; i < v.size(); ++i) {
        double scaled = (mx > mn) ? (v[i] - mn) / (mx - mn) * 255.0 : 0.0;
        out.pixels[i] = static_cast<float>(std::round(scaled));
    }
    return out;
}

SpectrumView dct_spectrum_view(const Image& gray, int crop) {
    if (gray.channels != 1)
        throw std::invalid_argument("dct_spectrum_view: expected a single-channel image");
    if (crop <= 0) throw std::invalid_argument("dct_spectrum_view: crop must be positive");
    if (crop > std::min(gray.width, gray.height))
        throw std::invalid_argument("dct_spectrum_view: crop exceeds image size");

    Tensor4d coeffs = dct_2d(image_to_tensor(gray));
    SpectrumView view;
    view.full = render_log_scaled(coeffs);

    Tensor4d block(1, static_cast<std::size_t>(crop), static_cast<std::size_t>(crop), 1);
    for (int i = 0; i < crop; ++i)
        for (int j = 0; j < crop; ++j)
            block.at(0, static_cast<std::size_t>(i), static_cast<std::size_t>(j), 0) =
                coeffs.at(0, static_cast<std::size_t>(i), static_cast<std::size_t>(j), 0);
    view.cropped = render_log_scaled(block);
    return view;
}

namespace {

template <typename T>
ParsevalResult parseval_impl(const Image& gray) {
    Tensor4T<T> t(1, static_cast<std::size_t>(gray.height), static_cast<std::size_t>(gray.width), 1);
    for (std::size_t i = 0; i < gray.pixels.size(); ++i) t.data[i] = static_cast<T>(gray.pixels[i]);
    Tensor4T<T> coeffs = dct_2d(t);
    ParsevalResult r;
    for (std::size_t i = 0; i < t.data.size(); ++i) {
        r.spatial_energy += static_cast<double>(t.data[i]) * static_cast<double>(t.data[i]);
        r.frequency_energy +=
            static_cast<double>(coeffs.data[i]) * static_cast<double>(coeffs.data[i]);
    }
    const double denom = std::max(r.spatial_energy, r.frequency_energy);
    r.relative_difference =
        denom > 0.0 ? std::abs(r.spatial_energy - r.frequency_energy) / denom : 0.0;
    return r;
}

}  // namespace

ParsevalResult parseval_check(const Image& gray, bool single) {
    return single ? parseval_impl<float>(gray) : parseval_impl<double>(gray);
}

// --- PGM / PPM codec ---------------------------------------------------------

namespace {

struct ByteCursor {
    const std::vector<unsigned char>& bytes;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw FormatError(msg + " (byte offset " + std::to_string(pos) + ")");
    }
    bool eof() const { return pos >= bytes.size(); }
    unsigned char peek() const { return bytes[pos]; }

    void skip_space() {
        while (!eof() && std::isspace(peek())) ++pos;
    }
    int read_int(const char* what) {
        skip_space();
        if (eof() || !std::isdigit(peek())) fail(std::string("expected ") + what);
        long v = 0;
        while (!eof() && std::isdigit(peek())) {
            v = v * 10 + (peek() - '0');
            if (v > 1 << 30) fail(std::string(what) + " out of range");
            ++pos;
        }
        return static_cast<int>(v);
    }
};

}  // namespace

Image decode_netpbm(const std::vector<unsigned char>& bytes) {
    ByteCursor cur{bytes};
    if (bytes.size() < 2) cur.fail("file too short for magic number");
    char m0 = static_cast<char>(bytes[0]), m1 = static_cast<char>(bytes[1]);
    if (m0 != 'P' || (m1 != '5' && m1 != '6'))
        cur.fail(std::string("bad magic number '") + m0 + m1 + "', expected P5 or P6");
    cur.pos = 2;
    const int channels = (m1 == '5') ? 1 : 3;

    int width = cur.read_int("width");
    int height = cur.read_int("height");
    int maxval = cur.read_int("maxval");
    if (width <= 0 || height <= 0) cur.fail("non-positive image dimensions");
    if (maxval != 255)
        cur.fail("unsupported maxval " + std::to_string(maxval) + ", expected 255");
    if (cur.eof() || !std::isspace(cur.peek())) cur.fail("expected whitespace after maxval");
    ++cur.pos;  // single whitespace separates header from payload

    const std::size_t need =
        static_cast<std::size_t>(width) * height * static_cast<std::size_t>(channels);
    const std::size_t have = bytes.size() - cur.pos;
    if (have < need)
        cur.fail("truncated pixel data: expected " + std::to_string(need) + " bytes, got " +
                 std::to_string(have));

    Image img(width, height, channels, PixelRange::Byte);
    for (std::size_t i = 0; i < need; ++i)
        img.pixels[i] = static_cast<float>(bytes[cur.pos + i]);
    return img;
}

std::vector<unsigned char> encode_netpbm(const Image& img) {
    if (img.channels != 1 && img.channels != 3)
        throw std::invalid_argument("encode_netpbm: images must have 1 or 3 channels");
    std::ostringstream header;
    header << (img.channels == 1 ? "P5" : "P6") << "\n"
           << img.width << " " << img.height << "\n255\n";
    const std::string h = header.str();
    std::vector<unsigned char> bytes(h.begin(), h.end());
    const float scale = img.range == PixelRange::Unit ? 255.0f : 1.0f;
    bytes.reserve(bytes.size() + img.pixels.size());
    for (float p : img.pixels) {
        double v = std::clamp(std::round(static_cast<double>(p) * scale), 0.0, 255.0);
        bytes.push_back(static_cast<unsigned char>(v));
    }
    return bytes;
}

Image read_image(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());
    return decode_netpbm(bytes);
}

void write_image(const Image& img, const std::string& path) {
    std::vector<unsigned char> bytes = encode_netpbm(img);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

}  // namespace freqnet
