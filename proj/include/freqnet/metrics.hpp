#pragma once

#include <chrono>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace freqnet {

// N x N counts with rows = predicted class and columns = actual class
// (the CSV writer states the orientation).
struct ConfusionMatrix {
    int n_classes = 0;
    std::vector<long long> counts;  // row-major

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(int n) : n_classes(n), counts(static_cast<std::size_t>(n) * n, 0) {}

    long long& at(int predicted, int actual) {
        return counts[static_cast<std::size_t>(predicted) * n_classes + actual];
    }
    long long at(int predicted, int actual) const {
        return counts[static_cast<std::size_t>(predicted) * n_classes + actual];
    }
    long long total() const {
        long long t = 0;
        for (long long c : counts) t += c;
        return t;
    }
    long long trace() const {
        long long t = 0;
        for (int i = 0; i < n_classes; ++i) t += at(i, i);
        return t;
    }
    long long row_sum(int p) const {
        long long t = 0;
        for (int a = 0; a < n_classes; ++a) t += at(p, a);
        return t;
    }
    long long col_sum(int a) const {
        long long t = 0;
        for (int p = 0; p < n_classes; ++p) t += at(p, a);
        return t;
    }
};

ConfusionMatrix confusion_matrix(const std::vector<int>& predictions,
                                 const std::vector<int>& actuals, int n_classes);

// One-vs-rest counts for class k plus the derived metrics. Metrics whose
// denominator is zero are returned as 0 with the matching degenerate flag.
struct ClassMetrics {
    long long tp = 0, tn = 0, fp = 0, fn = 0;
    double accuracy = 0, precision = 0, recall = 0, f1 = 0, specificity = 0;
    bool precision_degenerate = false;
    bool recall_degenerate = false;
    bool f1_degenerate = false;
    bool specificity_degenerate = false;
};

ClassMetrics derive_metrics(const ConfusionMatrix& cm, int k);

struct ClasswiseAccuracy {
    std::vector<double> per_class;   // recall per actual class; 0 where degenerate
    std::vector<bool> degenerate;    // true where the class never occurs
    double mean_defined = 0.0;       // mean over non-degenerate classes
};

ClasswiseAccuracy classwise_accuracy(const ConfusionMatrix& cm);

// Per-epoch telemetry. Wall time is measured from begin(); MAC counts are
// fixed per epoch for a given model and dataset size.
struct EpochRecord {
    int epoch = 0;
    std::string split;
    double loss = 0.0;
    double accuracy = 0.0;
    long long wall_ms = 0;
    long long params = 0;
    long long macs = 0;            // forward-pass MACs over the split
    long long transform_macs = 0;  // fixed transform-layer cost, tallied separately
};

class ResourceMonitor {
public:
    // freeze_wall records wall_ms as 0, which keeps deterministic runs
    // byte-reproducible; real times stay available via elapsed_ms().
    void begin(long long params, bool freeze_wall = false);
    void on_epoch(int epoch, const std::string& split, double loss, double accuracy,
                  long long macs, long long transform_macs);
    const std::vector<EpochRecord>& finish();

    long long elapsed_ms() const;
    const std::vector<EpochRecord>& records() const { return records_; }
    void write_csv(std::ostream& os) const;

private:
    bool started_ = false;
    bool freeze_wall_ = false;
    long long params_ = 0;
    long long last_wall_ = 0;
    std::chrono::steady_clock::time_point start_{};
    std::vector<EpochRecord> records_;
};

void write_metrics_csv(std::ostream& os, const std::vector<EpochRecord>& records);
void write_confusion_csv(std::ostream& os, const ConfusionMatrix& cm);

// MAC formulas used for topology accounting.
inline long long conv_macs(long long out_h, long long out_w, long long out_c, long long in_c,
                           long long k) {
    return out_h * out_w * out_c * in_c * k * k;
}
inline long long dense_macs(long long in, long long out) { return in * out; }

}  // namespace freqnet
