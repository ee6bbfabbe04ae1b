#include "freqnet/nn/gradcheck.hpp"

#include <cmath>

#include "freqnet/nn/model.hpp"

namespace freqnet::nn {

double gradient_rel_err(const std::vector<double>& analytic,
                        const std::vector<double>& numeric) {
    double scale = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i)
        scale = std::max({scale, std::abs(analytic[i]), std::abs(numeric[i])});
    if (scale < 1e-12) return 0.0;  // both gradients vanish
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i)
        worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
    return worst;
}

namespace {

Tensor4d random_tensor(std::size_t b, std::size_t h, std::size_t w, std::size_t c, Rng& rng,
                       double lo = -1.0, double hi = 1.0) {
    Tensor4d t(b, h, w, c);
    for (double& v : t.data) v = rng.uniform(lo, hi);
    return t;
}

// Keep ReLU-style kinks away from the finite-difference step.
void nudge_from_zero(Tensor4d& t, double margin = 0.05) {
    for (double& v : t.data)
        if (std::abs(v) < margin) v = v < 0 ? v - margin : v + margin;
}

struct Objective {
    Tensor4d weights;  // fixed random weighting making the output a scalar

    double value(const Tensor4T<double>& out) const {
        double s = 0.0;
        for (std::size_t i = 0; i < out.size(); ++i) s += out.data[i] * weights.data[i];
        return s;
    }
};

}  // namespace

GradCheckResult gradcheck_layer(Layer<double>& layer, const Tensor4T<double>& input,
                                std::uint64_t seed, double tolerance, double step,
                                bool training) {
    GradCheckResult result;
    result.name = layer.name();
    result.tolerance = tolerance;

    TrainContext ctx;
    ctx.seed = seed;
    ctx.step = 7;  // arbitrary fixed step id: dropout masks stay frozen across calls
    ctx.training = training;

    Tensor4d x = input;
    Tensor4d out = layer.forward(x, ctx);
    Rng wrng(seed ^ 0xBEEF);
    Objective obj{random_tensor(out.batch(), out.height(), out.width(), out.channels(), wrng)};

    for (Param<double>* p : layer.params()) p->zero_grad();
    Tensor4d dx = layer.backward(obj.weights);

    std::vector<double> analytic(dx.data.begin(), dx.data.end());
    for (Param<double>* p : layer.params())
        analytic.insert(analytic.end(), p->grad.begin(), p->grad.end());

    std::vector<double> numeric;
    numeric.reserve(analytic.size());
    auto eval = [&]() { return obj.value(layer.forward(x, ctx)); };

    for (std::size_t i = 0; i < x.size(); ++i) {
        const double keep = x.data[i];
        x.data[i] = keep + step;
        const double up = eval();
        x.data[i] = keep - step;
        const double down = eval();
        x.data[i] = keep;
        numeric.push_back((up - down) / (2.0 * step));
    }
    for (Param<double>* p : layer.params()) {
        for (std::size_t i = 0; i < p->size(); ++i) {
            const double keep = p->value[i];
            p->value[i] = keep + step;
            const double up = eval();
            p->value[i] = keep - step;
            const double down = eval();
            p->value[i] = keep;
            numeric.push_back((up - down) / (2.0 * step));
        }
    }

    result.max_rel_err = gradient_rel_err(analytic, numeric);
    result.pass = result.max_rel_err < tolerance;
    return result;
}

namespace {

GradCheckResult gradcheck_softmax_xent(std::uint64_t seed) {
    GradCheckResult result;
    result.name = "softmax_xent";
    result.tolerance = 1e-6;

    Rng rng(seed);
    const std::size_t batch = 4, classes = 5;
    Tensor4d logits = random_tensor(batch, 1, 1, classes, rng, -2.0, 2.0);
    std::vector<int> labels(batch);
    for (int& l : labels) l = static_cast<int>(rng.below(classes));

    LossResult<double> res = softmax_xent(logits, labels, 0.0);
    std::vector<double> analytic(res.dlogits.data.begin(), res.dlogits.data.end());

    const double step = 1e-6;
    std::vector<double> numeric;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        const double keep = logits.data[i];
        logits.data[i] = keep + step;
        const double up = softmax_xent(logits, labels, 0.0).loss;
        logits.data[i] = keep - step;
        const double down = softmax_xent(logits, labels, 0.0).loss;
        logits.data[i] = keep;
        numeric.push_back((up - down) / (2.0 * step));
    }
    result.max_rel_err = gradient_rel_err(analytic, numeric);
    result.pass = result.max_rel_err < result.tolerance;
    return result;
}

void merge(std::vector<GradCheckResult>& all, GradCheckResult r) {
    // Keep one row per layer name: the worst error across seeds.
    for (GradCheckResult& e : all) {
        if (e.name == r.name) {
            if (r.max_rel_err > e.max_rel_err) e = r;
            return;
        }
    }
    all.push_back(std::move(r));
}

}  // namespace

std::vector<GradCheckResult> run_gradient_checks(int seeds) {
    std::vector<GradCheckResult> all;
    for (int s = 0; s < seeds; ++s) {
        const std::uint64_t seed = 100 + static_cast<std::uint64_t>(s) * 37;
        Rng rng(seed);
        Rng init_rng(seed ^ 0x11);

        {
            Conv2D<double> conv("conv3x3_s1", 3, 4, 3, 1, init_rng);
            merge(all, gradcheck_layer(conv, random_tensor(2, 5, 5, 3, rng), seed));
        }
        {
            Conv2D<double> conv("conv3x3_s2", 3, 4, 3, 2, init_rng);
            merge(all, gradcheck_layer(conv, random_tensor(2, 5, 5, 3, rng), seed));
        }
        {
            Conv2D<double> conv("conv1x1_s2", 4, 6, 1, 2, init_rng);
            merge(all, gradcheck_layer(conv, random_tensor(2, 4, 4, 4, rng), seed));
        }
        {
            Dense<double> dense("dense", 12, 7, init_rng);
            merge(all, gradcheck_layer(dense, random_tensor(3, 2, 2, 3, rng), seed));
        }
        {
            BatchNorm<double> bn("batchnorm", 3);
            merge(all, gradcheck_layer(bn, random_tensor(4, 3, 3, 3, rng), seed));
        }
        {
            ReLU<double> relu("relu");
            Tensor4d x = random_tensor(2, 4, 4, 3, rng);
            nudge_from_zero(x);
            merge(all, gradcheck_layer(relu, x, seed));
        }
        {
            GlobalAvgPool<double> pool("global_avg_pool");
            merge(all, gradcheck_layer(pool, random_tensor(2, 4, 4, 3, rng), seed));
        }
        {
            Dropout<double> drop("dropout", 0.5, 3);
            merge(all, gradcheck_layer(drop, random_tensor(2, 4, 4, 3, rng), seed));
        }
        {
            ResidualBlock<double> block("residual_block", 3, 5, 2, init_rng);
            Tensor4d x = random_tensor(2, 4, 4, 3, rng);
            merge(all, gradcheck_layer(block, x, seed));
        }
        {
            TransformLayer<double> wht("wht_layer", TransformKind::Wht);
            merge(all, gradcheck_layer(wht, random_tensor(2, 4, 4, 2, rng), seed));
        }
        {
            // non-power-of-two input exercises the pad/crop path
            TransformLayer<double> wht("wht_layer_padded", TransformKind::Wht);
            merge(all, gradcheck_layer(wht, random_tensor(1, 3, 5, 2, rng), seed));
        }
        {
            TransformLayer<double> dct("dct_layer", TransformKind::Dct2Ortho);
            merge(all, gradcheck_layer(dct, random_tensor(2, 4, 5, 2, rng), seed));
        }
        {
            TransformLayer<double> fft("fft_magnitude_layer", TransformKind::FftMagnitude);
            merge(all, gradcheck_layer(fft, random_tensor(2, 4, 4, 2, rng), seed));
        }
        merge(all, gradcheck_softmax_xent(seed));
    }
    return all;
}

bool all_passed(const std::vector<GradCheckResult>& results) {
    for (const GradCheckResult& r : results)
        if (!r.pass) return false;
    return !results.empty();
}

}  // namespace freqnet::nn
