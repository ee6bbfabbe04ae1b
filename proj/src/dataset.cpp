#include "freqnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "freqnet/imaging.hpp"
#include "freqnet/rng.hpp"

namespace freqnet {

namespace {

constexpr std::size_t kSide = 32;
constexpr std::size_t kPixels = kSide * kSide;

}  // namespace

DatasetSplit load_cifar(const std::string& path, CifarVariant variant, std::size_t limit) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open '" + path + "'");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                     std::istreambuf_iterator<char>());

    const std::size_t record = variant == CifarVariant::Cifar10 ? 3073 : 3074;
    const int classes = variant == CifarVariant::Cifar10 ? 10 : 100;
    if (bytes.size() % record != 0)
        throw FormatError("'" + path + "': file length " + std::to_string(bytes.size()) +
                          " is not a multiple of the record size " + std::to_string(record) +
                          " (remainder " + std::to_string(bytes.size() % record) + ")");

    std::size_t count = bytes.size() / record;
    if (limit > 0) count = std::min(count, limit);

    DatasetSplit out;
    out.num_classes = classes;
    out.name = variant == CifarVariant::Cifar10 ? "cifar10" : "cifar100";
    out.images = Tensor4f(count, kSide, kSide, 3);
    out.labels.resize(count);

    for (std::size_t r = 0; r < count; ++r) {
        const unsigned char* rec = bytes.data() + r * record;
        // CIFAR-100 carries (coarse, fine); the fine label is used.
        const int label = variant == CifarVariant::Cifar10 ? rec[0] : rec[1];
        if (label >= classes)
            throw FormatError("'" + path + "': label " + std::to_string(label) +
                              " out of range in record " + std::to_string(r));
        out.labels[r] = label;
        const unsigned char* px = rec + (variant == CifarVariant::Cifar10 ? 1 : 2);
        // channel-planar source (R plane, G plane, B plane), row-major planes
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < kPixels; ++i)
                out.images.data[(r * kPixels + i) * 3 + c] =
                    static_cast<float>(px[c * kPixels + i]) / 255.0f;
    }
    return out;
}

void write_cifar10(const std::string& path, const DatasetSplit& split) {
    if (split.images.height() != kSide || split.images.width() != kSide ||
        split.images.channels() != 3)
        throw std::invalid_argument("write_cifar10: images must be (n,32,32,3)");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open '" + path + "' for writing");
    std::vector<unsigned char> rec(3073);
    for (std::size_t r = 0; r < split.size(); ++r) {
        rec[0] = static_cast<unsigned char>(split.labels[r]);
        for (std::size_t c = 0; c < 3; ++c)
            for (std::size_t i = 0; i < kPixels; ++i) {
                float v = split.images.data[(r * kPixels + i) * 3 + c];
                rec[1 + c * kPixels + i] = static_cast<unsigned char>(
                    std::clamp(std::lround(v * 255.0f), 0L, 255L));
            }
        out.write(reinterpret_cast<const char*>(rec.data()),
                  static_cast<std::streamsize>(rec.size()));
    }
}

std::pair<int, int> spectral_class_frequency(int k) {
    // Distinct even pairs, skipping (0, 0): (2,0), (0,2), (4,2), (2,4), ...
    static const std::pair<int, int> table[] = {
        {2, 0}, {0, 2}, {4, 2}, {2, 4}, {6, 0}, {0, 6}, {4, 4}, {6, 4},
        {4, 6}, {8, 2}, {2, 8}, {8, 6}, {6, 8}, {10, 4}, {4, 10}, {8, 8},
    };
    const int available = static_cast<int>(std::size(table));
    if (k < 0 || k >= available)
        throw std::invalid_argument("spectral_class_frequency: class index out of range");
    return table[k];
}

DatasetSplit synth_spectral_dataset(int n_per_class, int classes, double noise_sigma,
                                    std::uint64_t seed) {
    if (n_per_class <= 0) throw std::invalid_argument("synth_spectral_dataset: n_per_class <= 0");
    if (classes < 2) throw std::invalid_argument("synth_spectral_dataset: need at least 2 classes");
    if (noise_sigma < 0.0) throw std::invalid_argument("synth_spectral_dataset: negative sigma");
    spectral_class_frequency(classes - 1);  // range check against available pairs

    const std::size_t n = static_cast<std::size_t>(n_per_class) * classes;
    DatasetSplit out;
    out.name = "synthetic";
    out.num_classes = classes;
    out.images = Tensor4f(n, kSide, kSide, 3);
    out.labels.resize(n);

    Rng rng(seed ^ 0x5EED5EEDull);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i % static_cast<std::size_t>(classes);
    shuffle_indices(order, rng);

    for (std::size_t s = 0; s < n; ++s) {
        const int k = static_cast<int>(order[s]);
        out.labels[s] = k;
        auto [u, v] = spectral_class_frequency(k);
        for (std::size_t y = 0; y < kSide; ++y) {
            const double cy = std::cos(M_PI * (static_cast<double>(y) + 0.5) * v / kSide);
            for (std::size_t x = 0; x < kSide; ++x) {
                const double cx = std::cos(M_PI * (static_cast<double>(x) + 0.5) * u / kSide);
                double value = cx * cy;
                if (noise_sigma > 0.0) value += noise_sigma * rng.normal();
                // rescale [-1, 1] -> [0, 1]
                const float px = static_cast<float>(std::clamp((value + 1.0) * 0.5, 0.0, 1.0));
                for (std::size_t c = 0; c < 3; ++c) out.images.at(s, y, x, c) = px;
            }
        }
    }
    return out;
}

namespace {

struct ShapeParams {
    float fg[3], bg[3];
};

float shape_pattern(int cls, double x, double y, Rng& rng, const double* p) {
    // x, y in [0, 1); p = 4 random shape parameters drawn per sample
    (void)rng;
    switch (cls) {
        case 0:  // horizontal stripes
            return std::sin(2.0 * M_PI * (y * (3.0 + 3.0 * p[0]) + p[1])) > 0 ? 1.0f : 0.0f;
        case 1:  // vertical stripes
            return std::sin(2.0 * M_PI * (x * (3.0 + 3.0 * p[0]) + p[1])) > 0 ? 1.0f : 0.0f;
        case 2:  // diagonal stripes
            return std::sin(2.0 * M_PI * ((x + y) * (2.5 + 2.5 * p[0]) + p[1])) > 0 ? 1.0f
                                                                                    : 0.0f;
        case 3: {  // checkerboard
            const double cells = 3.0 + 3.0 * p[0];
            const int cx = static_cast<int>(x * cells + p[1]);
            const int cy = static_cast<int>(y * cells + p[2]);
            return ((cx + cy) & 1) ? 1.0f : 0.0f;
        }
        case 4: {  // filled circle
            const double r = std::hypot(x - (0.35 + 0.3 * p[0]), y - (0.35 + 0.3 * p[1]));
            return r < 0.15 + 0.15 * p[2] ? 1.0f : 0.0f;
        }
        case 5: {  // ring
            const double r = std::hypot(x - (0.4 + 0.2 * p[0]), y - (0.4 + 0.2 * p[1]));
            const double mid = 0.2 + 0.12 * p[2];
            return std::abs(r - mid) < 0.06 ? 1.0f : 0.0f;
        }
        case 6: {  // filled square
            const double cx = 0.35 + 0.3 * p[0], cy = 0.35 + 0.3 * p[1];
            const double half = 0.12 + 0.12 * p[2];
            return (std::abs(x - cx) < half && std::abs(y - cy) < half) ? 1.0f : 0.0f;
        }
        case 7: {  // cross
            const double cx = 0.4 + 0.2 * p[0], cy = 0.4 + 0.2 * p[1];
            const double bar = 0.05 + 0.05 * p[2];
            return (std::abs(x - cx) < bar || std::abs(y - cy) < bar) ? 1.0f : 0.0f;
        }
        case 8: {  // radial gradient
            const double r = std::hypot(x - (0.4 + 0.2 * p[0]), y - (0.4 + 0.2 * p[1]));
            return static_cast<float>(std::clamp(1.0 - r * (1.2 + p[2]), 0.0, 1.0));
        }
        default: {  // low-frequency blobs
            const double vband = std::sin(2.0 * M_PI * (x * 1.5 + p[0])) *
                                 std::sin(2.0 * M_PI * (y * 1.5 + p[1]));
            return vband > 0.2 - 0.4 * p[2] ? 1.0f : 0.0f;
        }
    }
}

}  // namespace

DatasetSplit synth_shapes_dataset(int n_per_class, std::uint64_t seed) {
    if (n_per_class <= 0) throw std::invalid_argument("synth_shapes_dataset: n_per_class <= 0");
    const int classes = 10;
    const std::size_t n = static_cast<std::size_t>(n_per_class) * classes;

    DatasetSplit out;
    out.name = "shapes";
    out.num_classes = classes;
    out.images = Tensor4f(n, kSide, kSide, 3);
    out.labels.resize(n);

    Rng rng(seed ^ 0x0B5E55ull);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i % static_cast<std::size_t>(classes);
    shuffle_indices(order, rng);

    for (std::size_t s = 0; s < n; ++s) {
        const int cls = static_cast<int>(order[s]);
        out.labels[s] = cls;
        ShapeParams sp;
        // colors carry no class information; structure is the only signal
        for (int c = 0; c < 3; ++c) {
            sp.bg[c] = static_cast<float>(rng.uniform(0.05, 0.45));
            sp.fg[c] = static_cast<float>(rng.uniform(0.55, 0.95));
        }
        double p[4];
        for (double& v : p) v = rng.uniform();
        for (std::size_t y = 0; y < kSide; ++y) {
            for (std::size_t x = 0; x < kSide; ++x) {
                const float t = shape_pattern(cls, (x + 0.5) / kSide, (y + 0.5) / kSide, rng, p);
                for (std::size_t c = 0; c < 3; ++c) {
                    double v = sp.bg[c] + t * (sp.fg[c] - sp.bg[c]) + 0.04 * rng.normal();
                    out.images.at(s, y, x, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
                }
            }
        }
    }
    return out;
}

DatasetSplit take(const DatasetSplit& split, std::size_t count) {
    count = std::min(count, split.size());
    DatasetSplit out;
    out.name = split.name;
    out.num_classes = split.num_classes;
    out.images = Tensor4f(count, split.images.height(), split.images.width(),
                          split.images.channels());
    const std::size_t per = split.images.size() / std::max<std::size_t>(split.size(), 1);
    std::copy(split.images.data.begin(),
              split.images.data.begin() + static_cast<std::ptrdiff_t>(count * per),
              out.images.data.begin());
    out.labels.assign(split.labels.begin(), split.labels.begin() + static_cast<std::ptrdiff_t>(count));
    return out;
}

SplitPair split_dataset(const DatasetSplit& split, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0)
        throw std::invalid_argument("split_dataset: fraction must be in [0,1]");
    const std::size_t n = split.size();
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    Rng rng(seed ^ 0x51D17ull);
    shuffle_indices(idx, rng);

    const std::size_t n_first = static_cast<std::size_t>(std::llround(fraction * n));
    const std::size_t per = split.images.size() / std::max<std::size_t>(n, 1);

    auto gather = [&](std::size_t begin, std::size_t end) {
        DatasetSplit part;
        part.name = split.name;
        part.num_classes = split.num_classes;
        part.images = Tensor4f(end - begin, split.images.height(), split.images.width(),
                               split.images.channels());
        part.labels.resize(end - begin);
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t src = idx[i];
            std::copy(split.images.data.begin() + static_cast<std::ptrdiff_t>(src * per),
                      split.images.data.begin() + static_cast<std::ptrdiff_t>((src + 1) * per),
                      part.images.data.begin() + static_cast<std::ptrdiff_t>((i - begin) * per));
            part.labels[i - begin] = split.labels[src];
        }
        return part;
    };
    return SplitPair{gather(0, n_first), gather(n_first, n)};
}

}  // namespace freqnet
