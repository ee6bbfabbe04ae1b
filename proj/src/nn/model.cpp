#include "freqnet/nn/model.hpp"

#include <cmath>
#include <sstream>

namespace freqnet::nn {

const char* placement_name(Placement p) {
    switch (p) {
        case Placement::None: return "none";
        case Placement::Input: return "input";
        case Placement::Early: return "early";
        case Placement::EarlyAndLate: return "early_late";
    }
    return "?";
}

void ModelSpec::validate() const {
    if (placement != Placement::None && !transform.has_value())
        throw std::invalid_argument("model spec: placement requires a transform kind");
    if (placement == Placement::None && transform.has_value())
        throw std::invalid_argument("model spec: transform set but placement is none");
    if (num_classes < 2) throw std::invalid_argument("model spec: num_classes must be >= 2");
    for (int w : stage_widths)
        if (w <= 0) throw std::invalid_argument("model spec: stage widths must be positive");
    if (dropout_rate < 0.0 || dropout_rate >= 1.0)
        throw std::invalid_argument("model spec: dropout rate must be in [0,1)");
    if (l2 < 0.0) throw std::invalid_argument("model spec: l2 must be non-negative");
}

template <typename T>
Model<T> Model<T>::build(const ModelSpec& spec) {
    spec.validate();
    Model<T> m;
    m.spec_ = spec;
    m.ctx_.seed = spec.seed;
    Rng rng(spec.seed ^ 0xA5C3D2E1ull);

    const std::size_t w1 = static_cast<std::size_t>(spec.stage_widths[0]);
    const std::size_t w2 = static_cast<std::size_t>(spec.stage_widths[1]);
    const std::size_t w3 = static_cast<std::size_t>(spec.stage_widths[2]);
    auto& L = m.layers_;

    auto add_transform = [&](const char* pos) {
        L.push_back(std::make_unique<TransformLayer<T>>(
            std::string(transform_kind_name(*spec.transform)) + "_transform_" + pos,
            *spec.transform));
    };

    if (spec.placement == Placement::Input) add_transform("input");

    L.push_back(std::make_unique<Conv2D<T>>("stem_conv", 3, w1, 3, 1, rng));
    L.push_back(std::make_unique<BatchNorm<T>>("stem_bn", w1));
    L.push_back(std::make_unique<ReLU<T>>("stem_relu"));

    L.push_back(std::make_unique<ResidualBlock<T>>("stage1_block1", w1, w1, 1, rng));
    // conv2_block1 analog
    if (spec.placement == Placement::Early || spec.placement == Placement::EarlyAndLate)
        add_transform("early");
    L.push_back(std::make_unique<ResidualBlock<T>>("stage1_block2", w1, w1, 1, rng));

    L.push_back(std::make_unique<ResidualBlock<T>>("stage2_block1", w1, w2, 2, rng));
    L.push_back(std::make_unique<ResidualBlock<T>>("stage2_block2", w2, w2, 1, rng));

    L.push_back(std::make_unique<ResidualBlock<T>>("stage3_block1", w2, w3, 2, rng));
    L.push_back(std::make_unique<ResidualBlock<T>>("stage3_block2", w3, w3, 1, rng));
    // conv4_block6 analog
    if (spec.placement == Placement::EarlyAndLate) add_transform("late");

    L.push_back(std::make_unique<GlobalAvgPool<T>>("global_avg_pool"));
    L.push_back(std::make_unique<Dropout<T>>("dropout", spec.dropout_rate, L.size()));
    auto head = std::make_unique<Dense<T>>("head_dense", w3,
                                           static_cast<std::size_t>(spec.num_classes), rng);
    m.head_ = head.get();
    L.push_back(std::move(head));
    return m;
}

template <typename T>
Tensor4T<T> Model<T>::forward(const Tensor4T<T>& x, bool training) {
    ctx_.training = training;
    Tensor4T<T> h = x;
    for (auto& layer : layers_) h = layer->forward(h, ctx_);
    return h;
}

template <typename T>
Tensor4T<T> Model<T>::backward(const Tensor4T<T>& dlogits) {
    Tensor4T<T> g = dlogits;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
    return g;
}

template <typename T>
std::vector<Param<T>*> Model<T>::params() {
    std::vector<Param<T>*> out;
    for (auto& layer : layers_) {
        auto p = layer->params();
        out.insert(out.end(), p.begin(), p.end());
    }
    return out;
}

template <typename T>
void Model<T>::zero_grads() {
    for (Param<T>* p : params()) p->zero_grad();
}

template <typename T>
long long Model<T>::trainable_params() {
    long long total = 0;
    for (Param<T>* p : params()) total += static_cast<long long>(p->size());
    return total;
}

template <typename T>
double Model<T>::l2_penalty() const {
    if (spec_.l2 == 0.0) return 0.0;
    double sum = 0.0;
    for (T v : head_->weight().value) sum += static_cast<double>(v) * v;
    return spec_.l2 * sum;
}

template <typename T>
void Model<T>::add_l2_gradients() {
    if (spec_.l2 == 0.0) return;
    const T two_lambda = static_cast<T>(2.0 * spec_.l2);
    Param<T>& w = head_->weight();
    for (std::size_t i = 0; i < w.size(); ++i) w.grad[i] += two_lambda * w.value[i];
}

template <typename T>
long long Model<T>::forward_macs(const Dims& input) const {
    long long total = 0;
    Dims d = input;
    for (const auto& layer : layers_) {
        total += layer->macs(d);
        d = layer->output_dims(d);
    }
    return total;
}

template <typename T>
long long Model<T>::transform_layer_macs(const Dims& input) const {
    long long total = 0;
    Dims d = input;
    for (const auto& layer : layers_) {
        total += layer->transform_cost(d);
        d = layer->output_dims(d);
    }
    return total;
}

template <typename T>
int Model<T>::transform_layer_count() const {
    int n = 0;
    for (const auto& layer : layers_)
        if (dynamic_cast<const TransformLayer<T>*>(layer.get())) ++n;
    return n;
}

template <typename T>
std::string Model<T>::topology_dump(const Dims& input) const {
    std::ostringstream os;
    Dims d = input;
    int idx = 0;
    for (const auto& layer : layers_) {
        d = layer->output_dims(d);
        long long pcount = 0;
        for (const Param<T>* p : const_cast<Layer<T>*>(layer.get())->params())
            pcount += static_cast<long long>(p->size());
        os << idx++ << " " << layer->name() << " (B," << d[0] << "," << d[1] << "," << d[2]
           << ") " << pcount << "\n";
    }
    return os.str();
}

template <typename T>
Tensor4T<T> softmax(const Tensor4T<T>& logits) {
    const std::size_t batch = logits.batch(), classes = logits.channels();
    Tensor4T<T> probs(batch, 1, 1, classes);
    for (std::size_t b = 0; b < batch; ++b) {
        double mx = -1e300;
        for (std::size_t c = 0; c < classes; ++c)
            mx = std::max(mx, static_cast<double>(logits.at(b, 0, 0, c)));
        double denom = 0.0;
        for (std::size_t c = 0; c < classes; ++c)
            denom += std::exp(static_cast<double>(logits.at(b, 0, 0, c)) - mx);
        for (std::size_t c = 0; c < classes; ++c)
            probs.at(b, 0, 0, c) = static_cast<T>(
                std::exp(static_cast<double>(logits.at(b, 0, 0, c)) - mx) / denom);
    }
    return probs;
}

template <typename T>
LossResult<T> softmax_xent(const Tensor4T<T>& logits, const std::vector<int>& labels,
                           double l2_penalty) {
    const std::size_t batch = logits.batch(), classes = logits.channels();
    if (logits.height() != 1 || logits.width() != 1)
        throw std::invalid_argument("softmax_xent: logits must have shape (batch,1,1,classes)");
    if (labels.size() != batch)
        throw std::invalid_argument("softmax_xent: label count does not match batch");
    for (std::size_t b = 0; b < batch; ++b)
        if (labels[b] < 0 || labels[b] >= static_cast<int>(classes))
            throw std::invalid_argument("softmax_xent: label out of range at sample " +
                                        std::to_string(b));

    LossResult<T> r;
    r.dlogits = Tensor4T<T>(batch, 1, 1, classes);
    r.predictions.resize(batch);
    Tensor4T<T> probs = softmax(logits);
    const double invb = 1.0 / static_cast<double>(batch);
    std::size_t correct = 0;
    for (std::size_t b = 0; b < batch; ++b) {
        std::size_t arg = 0;
        for (std::size_t c = 1; c < classes; ++c)
            if (probs.at(b, 0, 0, c) > probs.at(b, 0, 0, arg)) arg = c;
        r.predictions[b] = static_cast<int>(arg);
        if (static_cast<int>(arg) == labels[b]) ++correct;

        const double p_true =
            std::max(static_cast<double>(probs.at(b, 0, 0, labels[b])), 1e-300);
        r.data_loss -= std::log(p_true) * invb;
        for (std::size_t c = 0; c < classes; ++c) {
            double d = static_cast<double>(probs.at(b, 0, 0, c));
            if (static_cast<int>(c) == labels[b]) d -= 1.0;
            r.dlogits.at(b, 0, 0, c) = static_cast<T>(d * invb);
        }
    }
    r.accuracy = static_cast<double>(correct) * invb;
    r.loss = r.data_loss + l2_penalty;
    return r;
}

template class Model<float>;
template class Model<double>;
template LossResult<float> softmax_xent<float>(const Tensor4f&, const std::vector<int>&, double);
template LossResult<double> softmax_xent<double>(const Tensor4d&, const std::vector<int>&, double);
template Tensor4f softmax<float>(const Tensor4f&);
template Tensor4d softmax<double>(const Tensor4d&);

}  // namespace freqnet::nn
