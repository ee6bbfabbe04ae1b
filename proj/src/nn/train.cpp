#include "freqnet/nn/train.hpp"

#include <cmath>

namespace freqnet::nn {

void TrainConfig::validate() const {
    if (batch_size < 1) throw std::invalid_argument("train config: batch_size must be >= 1");
    if (learning_rate <= 0.0)
        throw std::invalid_argument("train config: learning_rate must be positive");
    if (epochs < 0) throw std::invalid_argument("train config: epochs must be >= 0");
}

namespace {

Tensor4f gather_batch(const DatasetSplit& data, const std::vector<std::size_t>& order,
                      std::size_t begin, std::size_t end, std::vector<int>& labels) {
    const std::size_t per =
        data.images.height() * data.images.width() * data.images.channels();
    Tensor4f batch(end - begin, data.images.height(), data.images.width(),
                   data.images.channels());
    labels.resize(end - begin);
    for (std::size_t i = begin; i < end; ++i) {
        const std::size_t src = order[i];
        std::copy(data.images.data.begin() + static_cast<std::ptrdiff_t>(src * per),
                  data.images.data.begin() + static_cast<std::ptrdiff_t>((src + 1) * per),
                  batch.data.begin() + static_cast<std::ptrdiff_t>((i - begin) * per));
        labels[i - begin] = data.labels[src];
    }
    return batch;
}

void check_input_shape(const Model<float>& model, const DatasetSplit& data) {
    if (data.size() == 0) throw std::invalid_argument("train: dataset is empty");
    if (data.images.channels() != 3)
        throw std::invalid_argument("train: model expects 3-channel input, dataset has " +
                                    std::to_string(data.images.channels()));
    for (int label : data.labels)
        if (label < 0 || label >= model.spec().num_classes)
            throw std::invalid_argument("train: dataset label out of range for model head");
}

}  // namespace

EvalResult evaluate(Model<float>& model, const DatasetSplit& data, int batch_size) {
    EvalResult r;
    if (data.size() == 0) return r;
    std::vector<std::size_t> order(data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<int> labels;
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (std::size_t begin = 0; begin < data.size();
         begin += static_cast<std::size_t>(batch_size)) {
        const std::size_t end =
            std::min(data.size(), begin + static_cast<std::size_t>(batch_size));
        Tensor4f batch = gather_batch(data, order, begin, end, labels);
        Tensor4f logits = model.forward(batch, /*training=*/false);
        LossResult<float> res = softmax_xent(logits, labels, model.l2_penalty());
        loss_sum += res.loss * static_cast<double>(end - begin);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (res.predictions[i] == labels[i]) ++correct;
            r.predictions.push_back(res.predictions[i]);
        }
    }
    r.loss = loss_sum / static_cast<double>(data.size());
    r.accuracy = static_cast<double>(correct) / static_cast<double>(data.size());
    return r;
}

TrainResult train(Model<float>& model, const DatasetSplit& train_split,
                  const DatasetSplit* val_split, const TrainConfig& config,
                  ResourceMonitor* monitor, const EpochCallback& callback) {
    config.validate();
    check_input_shape(model, train_split);
    if (val_split && val_split->size() > 0) check_input_shape(model, *val_split);

    AdamConfig adam_cfg = config.adam;
    adam_cfg.learning_rate = config.learning_rate;
    Adam<float> adam(adam_cfg);
    std::vector<Param<float>*> params = model.params();

    const Dims input_dims{train_split.images.height(), train_split.images.width(),
                          train_split.images.channels()};
    const long long macs_per_sample = model.forward_macs(input_dims);
    const long long tmacs_per_sample = model.transform_layer_macs(input_dims);
    const long long n_train = static_cast<long long>(train_split.size());

    TrainResult result;
    std::vector<std::size_t> order(train_split.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::vector<int> labels;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Rng shuffle_rng(config.seed + 0x9E37ull * static_cast<std::uint64_t>(epoch + 1));
        shuffle_indices(order, shuffle_rng);

        double loss_sum = 0.0;
        std::size_t correct = 0;
        for (std::size_t begin = 0; begin < train_split.size();
             begin += static_cast<std::size_t>(config.batch_size)) {
            const std::size_t end = std::min(train_split.size(),
                                             begin + static_cast<std::size_t>(config.batch_size));
            Tensor4f batch = gather_batch(train_split, order, begin, end, labels);

            model.context().step = result.steps;
            Tensor4f logits = model.forward(batch, /*training=*/true);
            LossResult<float> res = softmax_xent(logits, labels, model.l2_penalty());
            if (!std::isfinite(res.loss))
                throw std::runtime_error("train: non-finite loss at step " +
                                         std::to_string(result.steps));

            model.zero_grads();
            model.backward(res.dlogits);
            model.add_l2_gradients();
            adam.step(params);
            ++result.steps;

            loss_sum += res.data_loss * static_cast<double>(end - begin);
            for (std::size_t i = 0; i < labels.size(); ++i)
                if (res.predictions[i] == labels[i]) ++correct;
        }

        const double train_loss =
            loss_sum / static_cast<double>(train_split.size()) + model.l2_penalty();
        const double train_acc =
            static_cast<double>(correct) / static_cast<double>(train_split.size());
        if (monitor)
            monitor->on_epoch(epoch, "train", train_loss, train_acc,
                              macs_per_sample * n_train, tmacs_per_sample * n_train);
        result.records.push_back(EpochRecord{epoch, "train", train_loss, train_acc, 0, 0,
                                             macs_per_sample * n_train,
                                             tmacs_per_sample * n_train});

        if (val_split && val_split->size() > 0) {
            EvalResult ev = evaluate(model, *val_split, config.batch_size);
            const long long n_val = static_cast<long long>(val_split->size());
            if (monitor)
                monitor->on_epoch(epoch, "val", ev.loss, ev.accuracy, macs_per_sample * n_val,
                                  tmacs_per_sample * n_val);
            result.records.push_back(EpochRecord{epoch, "val", ev.loss, ev.accuracy, 0, 0,
                                                 macs_per_sample * n_val,
                                                 tmacs_per_sample * n_val});
        }

        if (callback) {
            EpochCallbackInfo info{epoch, train_loss, train_acc};
            if (!callback(info)) break;
        }
    }
    return result;
}

}  // namespace freqnet::nn
