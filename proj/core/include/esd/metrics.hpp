#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "esd/dataset.hpp"

namespace esd {

// Index of the largest component, reported as a 1-based class label.
// Exact ties go to the lowest class index.
int argmax_class(const std::array<double, kNumClasses>& probabilities);

// One held-out prediction: the full probability vector plus its argmax.
struct PredictionRecord {
    std::size_t instance_id;
    int true_class;  // 1..6
    std::array<double, kNumClasses> probabilities;
    int predicted_class;
};

using PredictionTrace = std::vector<PredictionRecord>;

PredictionRecord make_prediction_record(std::size_t instance_id, int true_class,
                                        const std::array<double, kNumClasses>& probabilities);

// rows = true class, columns = predicted class (both 0-based internally).
struct ConfusionMatrix {
    std::array<std::array<std::int64_t, kNumClasses>, kNumClasses> counts{};

    std::int64_t total() const;
    std::int64_t support(int class_label) const;  // row sum for one class
};

ConfusionMatrix confusion_from_trace(const PredictionTrace& trace);

// Fraction of the trace on the diagonal, in [0,1]. Throws on an empty matrix.
double accuracy(const ConfusionMatrix& matrix);

// One-vs-rest marginals for a single class.
struct BinaryCounts {
    std::int64_t tp, fp, fn, tn;
};

BinaryCounts one_vs_rest(const ConfusionMatrix& matrix, int class_label);

// Rates for one class. A 0/0 ratio is reported as 0 with the matching bit set
// in `undefined`, rather than as NaN.
struct ClassRates {
    double tpr;          // sensitivity = recall = TP/(TP+FN)
    double fpr;          // FP/(FP+TN)
    double specificity;  // TN/(TN+FP)
    double precision;    // TP/(TP+FP)
    double recall;
    double f_measure;    // harmonic mean of precision and recall

    enum Undefined : unsigned {
        none = 0,
        tpr_undefined = 1u << 0,
        fpr_undefined = 1u << 1,
        specificity_undefined = 1u << 2,
        precision_undefined = 1u << 3,
        f_measure_undefined = 1u << 4,
    };
    unsigned undefined = none;
};

ClassRates per_class_rates(const ConfusionMatrix& matrix, int class_label);

// Support-weighted mean: sum(value_c * support_c) / sum(support_c).
// Throws when the total support is zero.
double weighted_average(std::span<const double> values, std::span<const double> supports);

// Probabilistic error measures over all (instance, class) pairs: p is the
// predicted probability, a the one-hot truth, and the mean runs over n*6
// terms.
double mae(const PredictionTrace& trace);
double rmse(const PredictionTrace& trace);

// Predicts the training-set class frequencies for every instance; reference
// predictor for the relative error measures.
struct BaselinePredictor {
    std::array<double, kNumClasses> priors;  // sums to 1
};

BaselinePredictor baseline_from_instances(std::span<const Instance> training);

// Running sums of model and baseline deviations from the one-hot truth.
// Lets pooled cross-validation results combine folds that carry different
// baseline priors.
struct DeviationSums {
    double abs_model = 0;
    double sq_model = 0;
    double abs_base = 0;
    double sq_base = 0;
    std::size_t terms = 0;

    DeviationSums& operator+=(const DeviationSums& other);
};

DeviationSums accumulate_deviations(const PredictionTrace& trace,
                                    const BaselinePredictor& baseline);

// Relative absolute error and root relative squared error against the
// baseline. Throw when the baseline deviation sum is zero (degenerate
// single-class data).
double rae(const PredictionTrace& trace, const BaselinePredictor& baseline);
double rrse(const PredictionTrace& trace, const BaselinePredictor& baseline);
double rae(const DeviationSums& sums);
double rrse(const DeviationSums& sums);

// One-vs-rest AUC for one class, score = predicted probability of that class.
// Mann-Whitney rank statistic with half credit for ties; equals the
// trapezoidal area under the ROC curve. Empty positive or negative set makes
// the area undefined (nullopt).
std::optional<double> roc_auc(const PredictionTrace& trace, int class_label);

// Everything one comparison table row needs for a single classifier.
struct MetricsReport {
    double accuracy;

    std::array<ClassRates, kNumClasses> per_class;
    std::array<std::optional<double>, kNumClasses> per_class_auc;
    std::array<double, kNumClasses> supports;

    // Weighted TPR and recall are computed as sum(TP_c)/sum(support_c), which
    // a support-weighted mean of per-class rates reduces to algebraically;
    // this form keeps "weighted TPR == accuracy" an exact identity.
    double weighted_tpr;
    double weighted_fpr;
    double weighted_specificity;
    double weighted_precision;
    double weighted_recall;
    double weighted_f_measure;
    double weighted_auc;
    bool auc_defined_for_all;

    double mae;
    double rmse;
    double rae;
    double rrse;
};

// Report with the relative errors taken against one fixed baseline.
MetricsReport compute_report(const PredictionTrace& trace, const BaselinePredictor& baseline);

// Report with the relative errors taken from pre-accumulated (e.g. per-fold)
// deviation sums.
MetricsReport compute_report(const PredictionTrace& trace, const DeviationSums& sums);

}  // namespace esd
