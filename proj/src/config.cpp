#include "freqnet/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace freqnet {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value,
                            const std::string& expected) {
    throw ConfigError("config field '" + key + "': invalid value '" + value + "' (expected " +
                      expected + ")");
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        long long v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        bad_value(key, value, "an integer");
    }
}

double parse_real(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("");
        return v;
    } catch (...) {
        bad_value(key, value, "a number");
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    bad_value(key, value, "true or false");
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_text(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (value.empty())
            throw ConfigError("config field '" + key + "': empty value");

        if (key == "dataset") cfg.dataset = value;
        else if (key == "data_path") cfg.data_path = value;
        else if (key == "subset") cfg.subset = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "test_subset")
            cfg.test_subset = static_cast<std::size_t>(parse_int(key, value));
        else if (key == "val_fraction") cfg.val_fraction = parse_real(key, value);
        else if (key == "synth_classes") cfg.synth_classes = static_cast<int>(parse_int(key, value));
        else if (key == "synth_per_class")
            cfg.synth_per_class = static_cast<int>(parse_int(key, value));
        else if (key == "synth_noise") cfg.synth_noise = parse_real(key, value);
        else if (key == "transform") cfg.transform = value;
        else if (key == "placement") cfg.placement = value;
        else if (key == "width1") cfg.widths[0] = static_cast<int>(parse_int(key, value));
        else if (key == "width2") cfg.widths[1] = static_cast<int>(parse_int(key, value));
        else if (key == "width3") cfg.widths[2] = static_cast<int>(parse_int(key, value));
        else if (key == "dropout") cfg.dropout = parse_real(key, value);
        else if (key == "l2") cfg.l2 = parse_real(key, value);
        else if (key == "learning_rate") cfg.learning_rate = parse_real(key, value);
        else if (key == "epochs") cfg.epochs = static_cast<int>(parse_int(key, value));
        else if (key == "batch_size") cfg.batch_size = static_cast<int>(parse_int(key, value));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
        else if (key == "deterministic") cfg.deterministic = parse_bool(key, value);
        else if (key == "output_dir") cfg.output_dir = value;
        else
            throw ConfigError("config field '" + key + "': unknown key");
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_text(text.str());
}

void ExperimentConfig::validate() const {
    if (dataset != "cifar10" && dataset != "cifar100" && dataset != "synthetic")
        throw ConfigError("config field 'dataset': must be cifar10, cifar100, or synthetic, got '" +
                          dataset + "'");
    if (dataset != "synthetic" && data_path.empty())
        throw ConfigError("config field 'data_path': required for CIFAR datasets");
    if (transform != "none" && transform != "fft" && transform != "dct" && transform != "wht")
        throw ConfigError("config field 'transform': must be none, fft, dct, or wht, got '" +
                          transform + "'");
    if (placement != "none" && placement != "input" && placement != "early" &&
        placement != "early_late")
        throw ConfigError(
            "config field 'placement': must be none, input, early, or early_late, got '" +
            placement + "'");
    if (placement != "none" && transform == "none")
        throw ConfigError("config field 'placement': placement '" + placement +
                          "' requires a transform");
    if (placement == "none" && transform != "none")
        throw ConfigError("config field 'transform': transform '" + transform +
                          "' requires a placement");
    if (val_fraction < 0.0 || val_fraction >= 1.0)
        throw ConfigError("config field 'val_fraction': must be in [0,1)");
    if (synth_classes < 2) throw ConfigError("config field 'synth_classes': must be >= 2");
    if (synth_per_class < 1) throw ConfigError("config field 'synth_per_class': must be >= 1");
    if (synth_noise < 0.0) throw ConfigError("config field 'synth_noise': must be >= 0");
    if (dropout < 0.0 || dropout >= 1.0)
        throw ConfigError("config field 'dropout': must be in [0,1)");
    if (l2 < 0.0) throw ConfigError("config field 'l2': must be >= 0");
    if (learning_rate <= 0.0)
        throw ConfigError("config field 'learning_rate': must be positive");
    if (epochs < 0) throw ConfigError("config field 'epochs': must be >= 0");
    if (batch_size < 1) throw ConfigError("config field 'batch_size': must be >= 1");
    for (int w : widths)
        if (w < 1) throw ConfigError("config field 'width*': widths must be positive");
}

nn::ModelSpec ExperimentConfig::model_spec(int num_classes) const {
    nn::ModelSpec spec;
    if (transform == "fft") spec.transform = TransformKind::FftMagnitude;
    else if (transform == "dct") spec.transform = TransformKind::Dct2Ortho;
    else if (transform == "wht") spec.transform = TransformKind::Wht;

    if (placement == "input") spec.placement = nn::Placement::Input;
    else if (placement == "early") spec.placement = nn::Placement::Early;
    else if (placement == "early_late") spec.placement = nn::Placement::EarlyAndLate;

    spec.num_classes = num_classes;
    spec.stage_widths = widths;
    spec.dropout_rate = dropout;
    spec.l2 = l2;
    spec.seed = seed;
    return spec;
}

nn::TrainConfig ExperimentConfig::train_config() const {
    nn::TrainConfig tc;
    tc.learning_rate = learning_rate;
    tc.epochs = epochs;
    tc.batch_size = batch_size;
    tc.seed = seed;
    tc.deterministic = deterministic;
    return tc;
}

std::string ExperimentConfig::resolved_output_dir() const {
    if (!output_dir.empty()) return output_dir;
    if (const char* env = std::getenv("FREQNET_OUT"); env && *env) return env;
    return ".";
}

}  // namespace freqnet
