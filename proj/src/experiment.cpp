#include "freqnet/experiment.hpp"

#include <filesystem>
#include <fstream>

#include "freqnet/dataset.hpp"
#include "freqnet/imaging.hpp"

namespace freqnet {

namespace fs = std::filesystem;

namespace {

struct LoadedData {
    DatasetSplit train, val, test;
};

[[noreturn]] void stage_fail(const std::string& stage, const std::exception& e) {
    throw std::runtime_error("experiment stage '" + stage + "' failed: " + e.what());
}

DatasetSplit load_cifar_pool(const std::string& dir_or_file, CifarVariant variant,
                             std::size_t limit, bool test_pool) {
    const fs::path p(dir_or_file);
    if (fs::is_regular_file(p)) return load_cifar(p.string(), variant, limit);
    if (!fs::is_directory(p))
        throw FormatError("data_path '" + dir_or_file + "' does not exist");

    std::vector<std::string> names;
    if (variant == CifarVariant::Cifar10) {
        if (test_pool) {
            names = {"test_batch.bin"};
        } else {
            names = {"data_batch_1.bin", "data_batch_2.bin", "data_batch_3.bin",
                     "data_batch_4.bin", "data_batch_5.bin"};
        }
    } else {
        names = {test_pool ? "test.bin" : "train.bin"};
    }

    DatasetSplit pool;
    for (const std::string& name : names) {
        const fs::path file = p / name;
        if (!fs::exists(file)) continue;
        const std::size_t want = limit > 0 ? limit - pool.size() : 0;
        if (limit > 0 && pool.size() >= limit) break;
        DatasetSplit part = load_cifar(file.string(), variant, want);
        if (pool.size() == 0) {
            pool = std::move(part);
        } else {
            pool.images.data.insert(pool.images.data.end(), part.images.data.begin(),
                                    part.images.data.end());
            pool.images.shape[0] += part.images.shape[0];
            pool.labels.insert(pool.labels.end(), part.labels.begin(), part.labels.end());
        }
    }
    if (pool.size() == 0)
        throw FormatError("no CIFAR batch files found under '" + dir_or_file + "'");
    return pool;
}

LoadedData load_data(const ExperimentConfig& cfg) {
    LoadedData d;
    if (cfg.dataset == "synthetic") {
        DatasetSplit pool = synth_spectral_dataset(cfg.synth_per_class, cfg.synth_classes,
                                                   cfg.synth_noise, cfg.seed);
        if (cfg.subset > 0 && cfg.subset < pool.size()) pool = take(pool, cfg.subset);
        // fixed 80/10/10 split of the single pool
        SplitPair rest_test = split_dataset(pool, 0.9, cfg.seed + 1);
        d.test = std::move(rest_test.second);
        SplitPair train_val = split_dataset(rest_test.first, 8.0 / 9.0, cfg.seed + 2);
        d.train = std::move(train_val.first);
        d.val = std::move(train_val.second);
        return d;
    }

    const CifarVariant variant =
        cfg.dataset == "cifar10" ? CifarVariant::Cifar10 : CifarVariant::Cifar100;
    const fs::path p(cfg.data_path);
    if (fs::is_regular_file(p)) {
        // single binary file: treated as one pool, split 80/10/10
        DatasetSplit pool = load_cifar_pool(cfg.data_path, variant, cfg.subset, false);
        SplitPair rest_test = split_dataset(pool, 0.9, cfg.seed + 1);
        d.test = std::move(rest_test.second);
        SplitPair train_val = split_dataset(rest_test.first, 8.0 / 9.0, cfg.seed + 2);
        d.train = std::move(train_val.first);
        d.val = std::move(train_val.second);
        return d;
    }

    DatasetSplit train_pool = load_cifar_pool(cfg.data_path, variant, cfg.subset, false);
    d.test = load_cifar_pool(cfg.data_path, variant, cfg.test_subset, true);
    if (cfg.val_fraction > 0.0) {
        SplitPair tv = split_dataset(train_pool, 1.0 - cfg.val_fraction, cfg.seed + 2);
        d.train = std::move(tv.first);
        d.val = std::move(tv.second);
    } else {
        d.train = std::move(train_pool);
    }
    return d;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
    config.validate();

    LoadedData data;
    try {
        data = load_data(config);
    } catch (const std::exception& e) {
        stage_fail("dataset", e);
    }

    nn::Model<float> model = [&] {
        try {
            return nn::Model<float>::build(config.model_spec(data.train.num_classes));
        } catch (const std::exception& e) {
            stage_fail("model", e);
        }
    }();

    const nn::Dims input_dims{data.train.images.height(), data.train.images.width(),
                              data.train.images.channels()};
    ExperimentResult result;
    result.trainable_params = model.trainable_params();

    ResourceMonitor monitor;
    monitor.begin(result.trainable_params, /*freeze_wall=*/config.deterministic);
    nn::EvalResult test_eval;
    try {
        nn::TrainConfig tc = config.train_config();
        nn::train(model, data.train, data.val.size() ? &data.val : nullptr, tc, &monitor);
        test_eval = nn::evaluate(model, data.test, tc.batch_size);
        const long long n_test = static_cast<long long>(data.test.size());
        monitor.on_epoch(std::max(0, config.epochs - 1), "test", test_eval.loss,
                         test_eval.accuracy, model.forward_macs(input_dims) * n_test,
                         model.transform_layer_macs(input_dims) * n_test);
    } catch (const std::exception& e) {
        stage_fail("train", e);
    }
    result.total_wall_ms = monitor.elapsed_ms();
    result.test_loss = test_eval.loss;
    result.test_accuracy = test_eval.accuracy;

    const fs::path outdir(config.resolved_output_dir());
    const std::vector<fs::path> paths = {outdir / "metrics.csv", outdir / "confusion.csv",
                                         outdir / "topology.txt", outdir / "summary.txt"};
    try {
        fs::create_directories(outdir);
        const std::vector<EpochRecord>& records = monitor.finish();
        for (const EpochRecord& r : records) {
            result.total_macs += r.macs;
            result.total_transform_macs += r.transform_macs;
        }

        {
            std::ofstream os(paths[0]);
            write_metrics_csv(os, records);
        }
        {
            ConfusionMatrix cm =
                confusion_matrix(test_eval.predictions, data.test.labels, data.test.num_classes);
            std::ofstream os(paths[1]);
            write_confusion_csv(os, cm);
        }
        {
            std::ofstream os(paths[2]);
            os << model.topology_dump(input_dims);
        }
        {
            std::ofstream os(paths[3]);
            os << "dataset: " << config.dataset << "\n";
            os << "split_sizes: train=" << data.train.size() << " val=" << data.val.size()
               << " test=" << data.test.size()
               << (config.dataset == "synthetic" ? " (80/10/10 of the loaded pool)" : "")
               << "\n";
            os << "transform: " << config.transform << "\n";
            os << "placement: " << config.placement << "\n";
            os << "epochs: " << config.epochs << "\n";
            os << "seed: " << config.seed << "\n";
            os << "deterministic: " << (config.deterministic ? "true" : "false") << "\n";
            os << "trainable_params: " << result.trainable_params << "\n";
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.6f", result.test_accuracy);
            os << "test_accuracy: " << buf << "\n";
            std::snprintf(buf, sizeof(buf), "%.6f", result.test_loss);
            os << "test_loss: " << buf << "\n";
            os << "total_wall_ms: " << result.total_wall_ms << "\n";
            os << "total_macs: " << result.total_macs << "\n";
            os << "total_transform_macs: " << result.total_transform_macs << "\n";
        }
        for (const fs::path& p : paths) result.files_written.push_back(p.string());
    } catch (const std::exception& e) {
        for (const fs::path& p : paths) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        stage_fail("write", e);
    }
    return result;
}

}  // namespace freqnet
