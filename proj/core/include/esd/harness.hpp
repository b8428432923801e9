#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "esd/dataset.hpp"
#include "esd/decision_tree.hpp"
#include "esd/folds.hpp"
#include "esd/metrics.hpp"
#include "esd/mlp.hpp"
#include "esd/naive_bayes.hpp"

namespace esd {

enum class Algorithm { naive_bayes, mlp, j48 };
enum class MissingMode { drop, raw };
enum class ReportFormat { markdown, csv, json };

std::string algorithm_name(Algorithm algorithm);  // "nb", "mlp", "j48"
std::string algorithm_label(Algorithm algorithm); // Table heading

struct ExperimentConfig {
    std::string data_path;
    std::vector<Algorithm> algorithms = {Algorithm::naive_bayes, Algorithm::mlp,
                                         Algorithm::j48};
    int folds = 10;
    std::uint64_t seed = 1;
    MissingMode missing = MissingMode::drop;
    ReportFormat format = ReportFormat::markdown;

    NaiveBayesOptions nb;
    MlpTrainConfig mlp;
    C45Config j48;

    void validate() const;  // throws std::invalid_argument
};

// Applies "key = value" lines (e.g. "mlp.epochs = 200", '#' comments) on top
// of an existing config. Unknown keys are an error.
void apply_config_file(ExperimentConfig& config, std::istream& in);
void apply_config_file(ExperimentConfig& config, const std::string& path);

struct CvResult {
    Algorithm algorithm;
    PredictionTrace pooled_trace;            // one record per instance, fold order
    std::vector<double> fold_accuracies;     // A_1..A_k
    std::vector<MetricsReport> fold_reports;
    MetricsReport pooled_report;
    double cv_accuracy;       // (1/k) * sum A_i
    bool pooled_consistent;   // |cv_accuracy - pooled accuracy| <= 0.5 points
    double train_seconds;
    double predict_seconds;
};

// Trains on all folds but t and predicts fold t, for every t; stochastic
// trainers run with seed mix_seed(config.seed, t). Per-fold relative errors
// use that fold's training priors as the baseline; the pooled relative errors
// combine the per-fold deviation sums.
CvResult cross_validate(const Dataset& dataset, Algorithm algorithm,
                        const ExperimentConfig& config, const FoldPlan& plan);

struct BenchmarkResult {
    ExperimentConfig config;
    FoldPlan plan;                  // one plan shared by every algorithm
    std::vector<CvResult> results;  // in config.algorithms order
    std::size_t instances_used;
    std::size_t instances_dropped;
};

// Loads the data, applies the missing-value mode, builds one stratified fold
// plan, and cross-validates every selected algorithm on it.
BenchmarkResult run_benchmark(const ExperimentConfig& config);

// Trace interchange format: "instance_id,true_class,p1,...,p6" per line,
// probabilities at 10 significant digits. Loading recomputes the argmax.
void emit_trace(const PredictionTrace& trace, std::ostream& out);
void emit_trace(const PredictionTrace& trace, const std::string& path);
PredictionTrace load_trace(std::istream& in, const std::string& source_name);
PredictionTrace load_trace(const std::string& path);

}  // namespace esd
