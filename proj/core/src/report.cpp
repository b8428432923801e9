#include "esd/report.hpp"

#include <cstdio>

#include <nlohmann/json.hpp>

namespace esd {

namespace {

constexpr int kNumRows = 11;

const char* const kRowLabels[kNumRows] = {
    "Correctly Classified Instances",
    "Mean absolute error",
    "Root mean squared error",
    "Relative absolute error",
    "Root relative squared error",
    "True Positive (TP) Rate",
    "False Positive (FP) Rate",
    "Precision",
    "Recall",
    "F-Measure",
    "ROC Area (AUC)",
};

const char* const kRowKeys[kNumRows] = {
    "accuracy", "mae", "rmse", "rae", "rrse", "tp_rate", "fp_rate",
    "precision", "recall", "f_measure", "roc_area",
};

std::array<double, kNumRows> row_values(const MetricsReport& report) {
    return {report.accuracy,        report.mae,           report.rmse,
            report.rae,             report.rrse,          report.weighted_tpr,
            report.weighted_fpr,    report.weighted_precision, report.weighted_recall,
            report.weighted_f_measure, report.weighted_auc};
}

// Report convention: everything x100, one decimal.
std::string scaled(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.1f", value * 100.0);
    return buffer;
}

std::string format_markdown(const BenchmarkResult& benchmark) {
    std::string out = "| Performance Metrics |";
    for (const auto& result : benchmark.results) {
        out += " " + algorithm_label(result.algorithm) + " |";
    }
    out += "\n|---|";
    for (std::size_t i = 0; i < benchmark.results.size(); ++i) out += "---|";
    out += "\n";
    for (int row = 0; row < kNumRows; ++row) {
        out += "| " + std::string(kRowLabels[row]) + " |";
        for (const auto& result : benchmark.results) {
            out += " " + scaled(row_values(result.pooled_report)[row]) + " |";
        }
        out += "\n";
    }
    out += "\nCross-validation accuracy (mean of " + std::to_string(benchmark.plan.k) +
           " fold accuracies):";
    for (const auto& result : benchmark.results) {
        out += " " + algorithm_label(result.algorithm) + " " + scaled(result.cv_accuracy) + ",";
    }
    out.back() = '\n';
    return out;
}

std::string format_csv(const BenchmarkResult& benchmark) {
    std::string out = "metric";
    for (const auto& result : benchmark.results) out += "," + algorithm_name(result.algorithm);
    out += "\n";
    for (int row = 0; row < kNumRows; ++row) {
        out += kRowKeys[row];
        for (const auto& result : benchmark.results) {
            out += "," + scaled(row_values(result.pooled_report)[row]);
        }
        out += "\n";
    }
    out += "# cv_accuracy_fold_mean";
    for (const auto& result : benchmark.results) out += "," + scaled(result.cv_accuracy);
    out += "\n";
    return out;
}

std::string format_json(const BenchmarkResult& benchmark) {
    nlohmann::ordered_json root;
    root["data"] = benchmark.config.data_path;
    root["instances_used"] = benchmark.instances_used;
    root["instances_dropped"] = benchmark.instances_dropped;
    root["folds"] = benchmark.plan.k;
    root["seed"] = benchmark.config.seed;
    root["missing"] = benchmark.config.missing == MissingMode::drop ? "drop" : "raw";

    nlohmann::ordered_json algorithms = nlohmann::ordered_json::array();
    for (const auto& result : benchmark.results) {
        nlohmann::ordered_json entry;
        entry["algorithm"] = algorithm_name(result.algorithm);
        entry["label"] = algorithm_label(result.algorithm);

        nlohmann::ordered_json table;
        const auto values = row_values(result.pooled_report);
        for (int row = 0; row < kNumRows; ++row) table[kRowKeys[row]] = scaled(values[row]);
        entry["table"] = table;

        nlohmann::ordered_json raw;
        for (int row = 0; row < kNumRows; ++row) raw[kRowKeys[row]] = values[row];
        raw["cv_accuracy"] = result.cv_accuracy;
        entry["raw"] = raw;

        entry["fold_accuracies"] = result.fold_accuracies;
        entry["pooled_consistent"] = result.pooled_consistent;
        algorithms.push_back(entry);
    }
    root["algorithms"] = algorithms;
    return root.dump(2) + "\n";
}

}  // namespace

std::string format_report(const BenchmarkResult& benchmark, ReportFormat format) {
    switch (format) {
        case ReportFormat::markdown: return format_markdown(benchmark);
        case ReportFormat::csv: return format_csv(benchmark);
        case ReportFormat::json: return format_json(benchmark);
    }
    throw std::logic_error("unknown report format");
}

std::string format_plot_csv(const BenchmarkResult& benchmark) {
    std::string out = "metric,algorithm,value\n";
    for (int row = 0; row < kNumRows; ++row) {
        for (const auto& result : benchmark.results) {
            out += std::string(kRowKeys[row]) + "," + algorithm_name(result.algorithm) + "," +
                   scaled(row_values(result.pooled_report)[row]) + "\n";
        }
    }
    return out;
}

std::string format_timings(const BenchmarkResult& benchmark) {
    std::string out;
    char buffer[128];
    for (const auto& result : benchmark.results) {
        std::snprintf(buffer, sizeof buffer, "%s: train %.3fs, predict %.3fs\n",
                      algorithm_name(result.algorithm).c_str(), result.train_seconds,
                      result.predict_seconds);
        out += buffer;
    }
    return out;
}

}  // namespace esd
