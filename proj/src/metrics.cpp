#include "freqnet/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace freqnet {

ConfusionMatrix confusion_matrix(const std::vector<int>& predictions,
                                 const std::vector<int>& actuals, int n_classes) {
    if (predictions.size() != actuals.size())
        throw std::invalid_argument("confusion_matrix: predictions and actuals differ in length");
    if (n_classes <= 0) throw std::invalid_argument("confusion_matrix: n_classes must be positive");
    ConfusionMatrix cm(n_classes);
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        int p = predictions[i], a = actuals[i];
        if (p < 0 || p >= n_classes)
            throw std::invalid_argument("confusion_matrix: prediction out of range at index " +
                                        std::to_string(i));
        if (a < 0 || a >= n_classes)
            throw std::invalid_argument("confusion_matrix: actual label out of range at index " +
                                        std::to_string(i));
        ++cm.at(p, a);
    }
    return cm;
}

ClassMetrics derive_metrics(const ConfusionMatrix& cm, int k) {
    if (k < 0 || k >= cm.n_classes)
        throw std::invalid_argument("derive_metrics: class " + std::to_string(k) +
                                    " out of range");
    ClassMetrics m;
    const long long total = cm.total();
    m.tp = cm.at(k, k);
    m.fp = cm.row_sum(k) - m.tp;  // predicted k, actually something else
    m.fn = cm.col_sum(k) - m.tp;  // actually k, predicted something else
    m.tn = total - m.tp - m.fp - m.fn;

    auto ratio = [](long long num, long long den, double& out, bool& degenerate) {
        if (den == 0) {
            out = 0.0;
            degenerate = true;
        } else {
            out = static_cast<double>(num) / static_cast<double>(den);
        }
    };
    bool acc_degenerate = false;
    ratio(m.tp + m.tn, total, m.accuracy, acc_degenerate);
    ratio(m.tp, m.tp + m.fp, m.precision, m.precision_degenerate);
    ratio(m.tp, m.tp + m.fn, m.recall, m.recall_degenerate);
    ratio(m.tn, m.tn + m.fp, m.specificity, m.specificity_degenerate);
    if (m.precision_degenerate || m.recall_degenerate || m.precision + m.recall == 0.0) {
        m.f1 = 0.0;
        m.f1_degenerate = true;
    } else {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    }
    return m;
}

ClasswiseAccuracy classwise_accuracy(const ConfusionMatrix& cm) {
    ClasswiseAccuracy out;
    out.per_class.resize(cm.n_classes, 0.0);
    out.degenerate.resize(cm.n_classes, false);
    double sum = 0.0;
    int defined = 0;
    for (int a = 0; a < cm.n_classes; ++a) {
        long long col = cm.col_sum(a);
        if (col == 0) {
            out.degenerate[a] = true;
            continue;
        }
        out.per_class[a] = static_cast<double>(cm.at(a, a)) / static_cast<double>(col);
        sum += out.per_class[a];
        ++defined;
    }
    out.mean_defined = defined > 0 ? sum / defined : 0.0;
    return out;
}

void ResourceMonitor::begin(long long params, bool freeze_wall) {
    started_ = true;
    freeze_wall_ = freeze_wall;
    params_ = params;
    last_wall_ = 0;
    start_ = std::chrono::steady_clock::now();
    records_.clear();
}

long long ResourceMonitor::elapsed_ms() const {
    return std::chrono::duration_cast<std::chrono::milliseconds>(
               std::chrono::steady_clock::now() - start_)
        .count();
}

void ResourceMonitor::on_epoch(int epoch, const std::string& split, double loss,
                               double accuracy, long long macs, long long transform_macs) {
    if (!started_)
        throw std::logic_error("ResourceMonitor: on_epoch called before begin");
    EpochRecord r;
    r.epoch = epoch;
    r.split = split;
    r.loss = loss;
    r.accuracy = accuracy;
    long long now = freeze_wall_ ? 0 : elapsed_ms();
    if (now < last_wall_) now = last_wall_;  // monotone
    last_wall_ = now;
    r.wall_ms = now;
    r.params = params_;
    r.macs = macs;
    r.transform_macs = transform_macs;
    records_.push_back(std::move(r));
}

const std::vector<EpochRecord>& ResourceMonitor::finish() {
    if (!started_) throw std::logic_error("ResourceMonitor: finish called before begin");
    started_ = false;
    return records_;
}

void ResourceMonitor::write_csv(std::ostream& os) const { write_metrics_csv(os, records_); }

void write_metrics_csv(std::ostream& os, const std::vector<EpochRecord>& records) {
    os << "epoch,split,loss,accuracy,wall_ms,params,macs,transform_macs\n";
    char buf[64];
    for (const EpochRecord& r : records) {
        std::snprintf(buf, sizeof(buf), "%.6f", r.loss);
        os << r.epoch << "," << r.split << "," << buf << ",";
        std::snprintf(buf, sizeof(buf), "%.6f", r.accuracy);
        os << buf << "," << r.wall_ms << "," << r.params << "," << r.macs << ","
           << r.transform_macs << "\n";
    }
}

void write_confusion_csv(std::ostream& os, const ConfusionMatrix& cm) {
    os << "# rows=predicted, cols=actual\n";
    for (int p = 0; p < cm.n_classes; ++p) {
        for (int a = 0; a < cm.n_classes; ++a) {
            if (a) os << ",";
            os << cm.at(p, a);
        }
        os << "\n";
    }
}

}  // namespace freqnet
