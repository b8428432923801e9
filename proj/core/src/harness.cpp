#include "esd/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "esd/prng.hpp"

namespace esd {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

// Uniform train/predict interface over the three classifiers.
struct FittedClassifier {
    NaiveBayesModel nb;
    MlpModel mlp;
    TreePtr tree;
    Algorithm algorithm;

    std::array<double, kNumClasses> predict_proba(const Instance& instance) const {
        switch (algorithm) {
            case Algorithm::naive_bayes:
                return nb_posterior(nb, instance);
            case Algorithm::mlp:
                return mlp_predict_proba(mlp, instance);
            case Algorithm::j48:
                return leaf_relative_frequencies(route_to_leaf(*tree, instance));
        }
        throw std::logic_error("unknown algorithm");
    }
};

FittedClassifier fit(Algorithm algorithm, std::span<const Instance> training,
                     const ExperimentConfig& config, std::uint64_t fold_seed) {
    FittedClassifier fitted;
    fitted.algorithm = algorithm;
    switch (algorithm) {
        case Algorithm::naive_bayes:
            fitted.nb = nb_train(training, config.nb);
            break;
        case Algorithm::mlp: {
            MlpTrainConfig mlp_config = config.mlp;
            mlp_config.seed = fold_seed;
            fitted.mlp = mlp_train(training, mlp_config);
            break;
        }
        case Algorithm::j48:
            fitted.tree = prune(build_tree(training, config.j48), config.j48);
            break;
    }
    return fitted;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

}  // namespace

std::string algorithm_name(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::naive_bayes: return "nb";
        case Algorithm::mlp: return "mlp";
        case Algorithm::j48: return "j48";
    }
    throw std::logic_error("unknown algorithm");
}

std::string algorithm_label(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::naive_bayes: return "Naive Bayes";
        case Algorithm::mlp: return "Multilayer Perceptron";
        case Algorithm::j48: return "J48";
    }
    throw std::logic_error("unknown algorithm");
}

void ExperimentConfig::validate() const {
    if (folds < 2) throw std::invalid_argument("config: folds must be at least 2");
    if (algorithms.empty()) throw std::invalid_argument("config: no algorithm selected");
    if (nb.variance_floor <= 0.0) {
        throw std::invalid_argument("config: nb.variance_floor must be positive");
    }
    mlp.validate();
    j48.validate();
}

void apply_config_file(ExperimentConfig& config, std::istream& in) {
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config line " + std::to_string(line_number) +
                                     ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "nb.variance_floor") config.nb.variance_floor = std::stod(value);
            else if (key == "mlp.hidden_units") config.mlp.hidden_units = std::stoi(value);
            else if (key == "mlp.learning_rate") config.mlp.learning_rate = std::stod(value);
            else if (key == "mlp.momentum") config.mlp.momentum = std::stod(value);
            else if (key == "mlp.epochs") config.mlp.epochs = std::stoi(value);
            else if (key == "mlp.init_range") config.mlp.init_range = std::stod(value);
            else if (key == "j48.confidence") config.j48.confidence = std::stod(value);
            else if (key == "j48.min_leaf") config.j48.min_leaf = std::stoi(value);
            else {
                throw std::runtime_error("config line " + std::to_string(line_number) +
                                         ": unknown key \"" + key + "\"");
            }
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config line " + std::to_string(line_number) +
                                     ": bad numeric value \"" + value + "\"");
        } catch (const std::out_of_range&) {
            throw std::runtime_error("config line " + std::to_string(line_number) +
                                     ": numeric value out of range \"" + value + "\"");
        }
    }
}

void apply_config_file(ExperimentConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    apply_config_file(config, in);
}

CvResult cross_validate(const Dataset& dataset, Algorithm algorithm,
                        const ExperimentConfig& config, const FoldPlan& plan) {
    config.validate();
    if (plan.assignment.size() != dataset.size()) {
        throw std::invalid_argument("cross_validate: fold plan does not match dataset");
    }

    CvResult result;
    result.algorithm = algorithm;
    result.train_seconds = 0.0;
    result.predict_seconds = 0.0;
    DeviationSums pooled_sums;

    for (int fold = 0; fold < plan.k; ++fold) {
        std::vector<Instance> training;
        training.reserve(dataset.size());
        for (const std::size_t idx : plan.train_indices(fold)) {
            training.push_back(dataset.instances[idx]);
        }
        const auto test = plan.test_indices(fold);
        if (training.empty() || test.empty()) {
            throw std::runtime_error("cross_validate: fold " + std::to_string(fold) +
                                     " has an empty partition");
        }

        FittedClassifier fitted;
        try {
            const auto t0 = Clock::now();
            fitted = fit(algorithm, training, config, mix_seed(config.seed, fold));
            result.train_seconds += seconds_since(t0);
        } catch (const std::exception& e) {
            throw std::runtime_error("cross_validate: fold " + std::to_string(fold) +
                                     ": training failed: " + e.what());
        }

        PredictionTrace fold_trace;
        fold_trace.reserve(test.size());
        const auto t1 = Clock::now();
        for (const std::size_t idx : test) {
            const Instance& instance = dataset.instances[idx];
            fold_trace.push_back(make_prediction_record(
                idx, instance.class_label, fitted.predict_proba(instance)));
        }
        result.predict_seconds += seconds_since(t1);

        const BaselinePredictor baseline = baseline_from_instances(training);
        result.fold_reports.push_back(compute_report(fold_trace, baseline));
        result.fold_accuracies.push_back(result.fold_reports.back().accuracy);
        pooled_sums += accumulate_deviations(fold_trace, baseline);
        result.pooled_trace.insert(result.pooled_trace.end(), fold_trace.begin(),
                                   fold_trace.end());
    }

    result.pooled_report = compute_report(result.pooled_trace, pooled_sums);
    result.cv_accuracy =
        std::accumulate(result.fold_accuracies.begin(), result.fold_accuracies.end(), 0.0) /
        static_cast<double>(plan.k);
    result.pooled_consistent =
        std::abs(result.cv_accuracy - result.pooled_report.accuracy) <= 0.005;
    return result;
}

BenchmarkResult run_benchmark(const ExperimentConfig& config) {
    config.validate();
    BenchmarkResult benchmark;
    benchmark.config = config;

    Dataset dataset = load_dataset(config.data_path);
    const std::size_t loaded = dataset.size();
    if (config.missing == MissingMode::drop) {
        dataset = drop_missing_age(dataset);
    }
    benchmark.instances_used = dataset.size();
    benchmark.instances_dropped = loaded - dataset.size();

    std::vector<std::string> warnings;
    benchmark.plan = stratified_split(dataset, config.folds, config.seed, &warnings);
    for (const auto& warning : warnings) {
        std::cerr << "esdbench: warning: " << warning << "\n";
    }

    for (const Algorithm algorithm : config.algorithms) {
        benchmark.results.push_back(cross_validate(dataset, algorithm, config, benchmark.plan));
    }
    return benchmark;
}

void emit_trace(const PredictionTrace& trace, std::ostream& out) {
    char buffer[40];
    for (const auto& record : trace) {
        out << record.instance_id << ',' << record.true_class;
        for (const double p : record.probabilities) {
            std::snprintf(buffer, sizeof buffer, "%.10g", p);
            out << ',' << buffer;
        }
        out << '\n';
    }
}

void emit_trace(const PredictionTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    emit_trace(trace, out);
}

PredictionTrace load_trace(std::istream& in, const std::string& source_name) {
    PredictionTrace trace;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        std::istringstream fields(line);
        std::string token;
        std::vector<std::string> parts;
        while (std::getline(fields, token, ',')) parts.push_back(trim(token));
        const std::string where = source_name + ":" + std::to_string(line_number);
        if (parts.size() != 2 + kNumClasses) {
            throw std::runtime_error(where + ": expected 8 comma-separated fields, got " +
                                     std::to_string(parts.size()));
        }
        try {
            const std::size_t id = std::stoull(parts[0]);
            const int true_class = std::stoi(parts[1]);
            if (true_class < 1 || true_class > kNumClasses) {
                throw std::runtime_error(where + ": true class out of range 1..6");
            }
            std::array<double, kNumClasses> probabilities;
            double sum = 0.0;
            for (int c = 0; c < kNumClasses; ++c) {
                probabilities[c] = std::stod(parts[2 + c]);
                if (probabilities[c] < 0.0 || probabilities[c] > 1.0) {
                    throw std::runtime_error(where + ": probability outside [0,1]");
                }
                sum += probabilities[c];
            }
            if (std::abs(sum - 1.0) > 1e-6) {
                throw std::runtime_error(where + ": probabilities sum to " +
                                         std::to_string(sum) + ", expected 1");
            }
            trace.push_back(make_prediction_record(id, true_class, probabilities));
        } catch (const std::invalid_argument&) {
            throw std::runtime_error(where + ": malformed numeric field");
        } catch (const std::out_of_range&) {
            throw std::runtime_error(where + ": numeric field out of range");
        }
    }
    return trace;
}

PredictionTrace load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_trace(in, path);
}

}  // namespace esd
