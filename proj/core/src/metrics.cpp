#include "esd/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace esd {

int argmax_class(const std::array<double, kNumClasses>& probabilities) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (probabilities[c] > probabilities[best]) best = c;
    }
    return best + 1;
}

PredictionRecord make_prediction_record(std::size_t instance_id, int true_class,
                                        const std::array<double, kNumClasses>& probabilities) {
    return PredictionRecord{instance_id, true_class, probabilities,
                            argmax_class(probabilities)};
}

std::int64_t ConfusionMatrix::total() const {
    std::int64_t sum = 0;
    for (const auto& row : counts) {
        for (const auto v : row) sum += v;
    }
    return sum;
}

std::int64_t ConfusionMatrix::support(int class_label) const {
    std::int64_t sum = 0;
    for (const auto v : counts[class_label - 1]) sum += v;
    return sum;
}

ConfusionMatrix confusion_from_trace(const PredictionTrace& trace) {
    ConfusionMatrix matrix;
    for (const auto& record : trace) {
        if (record.true_class < 1 || record.true_class > kNumClasses ||
            record.predicted_class < 1 || record.predicted_class > kNumClasses) {
            throw std::invalid_argument("confusion_from_trace: class label out of range");
        }
        matrix.counts[record.true_class - 1][record.predicted_class - 1]++;
    }
    return matrix;
}

double accuracy(const ConfusionMatrix& matrix) {
    const std::int64_t total = matrix.total();
    if (total == 0) throw std::invalid_argument("accuracy: empty confusion matrix");
    std::int64_t correct = 0;
    for (int c = 0; c < kNumClasses; ++c) correct += matrix.counts[c][c];
    return static_cast<double>(correct) / static_cast<double>(total);
}

BinaryCounts one_vs_rest(const ConfusionMatrix& matrix, int class_label) {
    const int c = class_label - 1;
    BinaryCounts counts{0, 0, 0, 0};
    const std::int64_t total = matrix.total();
    counts.tp = matrix.counts[c][c];
    for (int r = 0; r < kNumClasses; ++r) {
        if (r != c) counts.fp += matrix.counts[r][c];
    }
    counts.fn = matrix.support(class_label) - counts.tp;
    counts.tn = total - counts.tp - counts.fp - counts.fn;
    return counts;
}

namespace {

double checked_ratio(std::int64_t num, std::int64_t den, unsigned flag, unsigned& undefined) {
    if (den == 0) {
        undefined |= flag;
        return 0.0;
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

ClassRates per_class_rates(const ConfusionMatrix& matrix, int class_label) {
    const BinaryCounts b = one_vs_rest(matrix, class_label);
    ClassRates rates{};
    rates.tpr = checked_ratio(b.tp, b.tp + b.fn, ClassRates::tpr_undefined, rates.undefined);
    rates.fpr = checked_ratio(b.fp, b.fp + b.tn, ClassRates::fpr_undefined, rates.undefined);
    rates.specificity =
        checked_ratio(b.tn, b.tn + b.fp, ClassRates::specificity_undefined, rates.undefined);
    rates.precision =
        checked_ratio(b.tp, b.tp + b.fp, ClassRates::precision_undefined, rates.undefined);
    rates.recall = rates.tpr;
    if (rates.precision + rates.recall > 0.0) {
        rates.f_measure =
            2.0 * rates.precision * rates.recall / (rates.precision + rates.recall);
    } else {
        rates.f_measure = 0.0;
        rates.undefined |= ClassRates::f_measure_undefined;
    }
    return rates;
}

double weighted_average(std::span<const double> values, std::span<const double> supports) {
    if (values.size() != supports.size()) {
        throw std::invalid_argument("weighted_average: size mismatch");
    }
    double weighted_sum = 0.0;
    double total_support = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        weighted_sum += values[i] * supports[i];
        total_support += supports[i];
    }
    if (total_support <= 0.0) throw std::invalid_argument("weighted_average: zero total support");
    return weighted_sum / total_support;
}

namespace {

void require_nonempty(const PredictionTrace& trace, const char* op) {
    if (trace.empty()) throw std::invalid_argument(std::string(op) + ": empty trace");
}

}  // namespace

double mae(const PredictionTrace& trace) {
    require_nonempty(trace, "mae");
    double sum = 0.0;
    for (const auto& record : trace) {
        for (int c = 0; c < kNumClasses; ++c) {
            const double truth = (record.true_class == c + 1) ? 1.0 : 0.0;
            sum += std::abs(record.probabilities[c] - truth);
        }
    }
    return sum / (static_cast<double>(trace.size()) * kNumClasses);
}

double rmse(const PredictionTrace& trace) {
    require_nonempty(trace, "rmse");
    double sum = 0.0;
    for (const auto& record : trace) {
        for (int c = 0; c < kNumClasses; ++c) {
            const double truth = (record.true_class == c + 1) ? 1.0 : 0.0;
            const double d = record.probabilities[c] - truth;
            sum += d * d;
        }
    }
    return std::sqrt(sum / (static_cast<double>(trace.size()) * kNumClasses));
}

BaselinePredictor baseline_from_instances(std::span<const Instance> training) {
    if (training.empty()) {
        throw std::invalid_argument("baseline_from_instances: empty training partition");
    }
    BaselinePredictor baseline{};
    for (const auto& instance : training) baseline.priors[instance.class_label - 1] += 1.0;
    for (auto& p : baseline.priors) p /= static_cast<double>(training.size());
    return baseline;
}

DeviationSums& DeviationSums::operator+=(const DeviationSums& other) {
    abs_model += other.abs_model;
    sq_model += other.sq_model;
    abs_base += other.abs_base;
    sq_base += other.sq_base;
    terms += other.terms;
    return *this;
}

DeviationSums accumulate_deviations(const PredictionTrace& trace,
                                    const BaselinePredictor& baseline) {
    DeviationSums sums;
    for (const auto& record : trace) {
        for (int c = 0; c < kNumClasses; ++c) {
            const double truth = (record.true_class == c + 1) ? 1.0 : 0.0;
            const double dp = record.probabilities[c] - truth;
            const double db = baseline.priors[c] - truth;
            sums.abs_model += std::abs(dp);
            sums.sq_model += dp * dp;
            sums.abs_base += std::abs(db);
            sums.sq_base += db * db;
            ++sums.terms;
        }
    }
    return sums;
}

double rae(const DeviationSums& sums) {
    if (sums.abs_base <= 0.0) {
        throw std::invalid_argument("rae: zero baseline deviation (single-class data)");
    }
    return sums.abs_model / sums.abs_base;
}

double rrse(const DeviationSums& sums) {
    if (sums.sq_base <= 0.0) {
        throw std::invalid_argument("rrse: zero baseline deviation (single-class data)");
    }
    return std::sqrt(sums.sq_model / sums.sq_base);
}

double rae(const PredictionTrace& trace, const BaselinePredictor& baseline) {
    require_nonempty(trace, "rae");
    return rae(accumulate_deviations(trace, baseline));
}

double rrse(const PredictionTrace& trace, const BaselinePredictor& baseline) {
    require_nonempty(trace, "rrse");
    return rrse(accumulate_deviations(trace, baseline));
}

std::optional<double> roc_auc(const PredictionTrace& trace, int class_label) {
    struct Scored {
        double score;
        bool positive;
    };
    std::vector<Scored> scored;
    scored.reserve(trace.size());
    std::size_t positives = 0;
    for (const auto& record : trace) {
        const bool positive = record.true_class == class_label;
        scored.push_back({record.probabilities[class_label - 1], positive});
        if (positive) ++positives;
    }
    const std::size_t negatives = scored.size() - positives;
    if (positives == 0 || negatives == 0) return std::nullopt;

    std::sort(scored.begin(), scored.end(),
              [](const Scored& a, const Scored& b) { return a.score < b.score; });

    // Mann-Whitney with average ranks across tie groups (= half credit per tie).
    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < scored.size()) {
        std::size_t j = i;
        while (j < scored.size() && scored[j].score == scored[i].score) ++j;
        const double average_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t t = i; t < j; ++t) {
            if (scored[t].positive) positive_rank_sum += average_rank;
        }
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double n = static_cast<double>(negatives);
    return (positive_rank_sum - p * (p + 1.0) / 2.0) / (p * n);
}

namespace {

MetricsReport report_from_parts(const PredictionTrace& trace, const DeviationSums& sums) {
    const ConfusionMatrix matrix = confusion_from_trace(trace);
    MetricsReport report{};
    report.accuracy = accuracy(matrix);

    std::array<double, kNumClasses> fpr{}, spec{}, prec{}, f{};
    for (int c = 1; c <= kNumClasses; ++c) {
        report.per_class[c - 1] = per_class_rates(matrix, c);
        report.per_class_auc[c - 1] = roc_auc(trace, c);
        report.supports[c - 1] = static_cast<double>(matrix.support(c));
        fpr[c - 1] = report.per_class[c - 1].fpr;
        spec[c - 1] = report.per_class[c - 1].specificity;
        prec[c - 1] = report.per_class[c - 1].precision;
        f[c - 1] = report.per_class[c - 1].f_measure;
    }

    // sum(TP_c) / sum(support_c) == trace(diagonal) / total == accuracy.
    report.weighted_tpr = accuracy(matrix);
    report.weighted_recall = report.weighted_tpr;
    report.weighted_fpr = weighted_average(fpr, report.supports);
    report.weighted_specificity = weighted_average(spec, report.supports);
    report.weighted_precision = weighted_average(prec, report.supports);
    report.weighted_f_measure = weighted_average(f, report.supports);

    double auc_weighted_sum = 0.0;
    double auc_support = 0.0;
    report.auc_defined_for_all = true;
    for (int c = 0; c < kNumClasses; ++c) {
        if (report.per_class_auc[c].has_value()) {
            auc_weighted_sum += *report.per_class_auc[c] * report.supports[c];
            auc_support += report.supports[c];
        } else if (report.supports[c] > 0.0) {
            report.auc_defined_for_all = false;
        }
    }
    report.weighted_auc = auc_support > 0.0 ? auc_weighted_sum / auc_support : 0.0;
    if (auc_support == 0.0) report.auc_defined_for_all = false;

    report.mae = mae(trace);
    report.rmse = rmse(trace);
    report.rae = rae(sums);
    report.rrse = rrse(sums);
    return report;
}

}  // namespace

MetricsReport compute_report(const PredictionTrace& trace, const BaselinePredictor& baseline) {
    require_nonempty(trace, "compute_report");
    return report_from_parts(trace, accumulate_deviations(trace, baseline));
}

MetricsReport compute_report(const PredictionTrace& trace, const DeviationSums& sums) {
    require_nonempty(trace, "compute_report");
    return report_from_parts(trace, sums);
}

}  // namespace esd
