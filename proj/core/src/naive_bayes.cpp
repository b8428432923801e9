#include "esd/naive_bayes.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <vector>

namespace esd {

namespace {

std::string fmt17(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

}  // namespace

NaiveBayesModel nb_train(std::span<const Instance> training, const NaiveBayesOptions& options) {
    if (training.empty()) throw std::invalid_argument("nb_train: empty training set");
    if (options.variance_floor <= 0.0) {
        throw std::invalid_argument("nb_train: variance_floor must be positive");
    }

    NaiveBayesModel model{};
    model.variance_floor = options.variance_floor;

    std::array<std::size_t, kNumClasses> counts{};
    for (const auto& instance : training) counts[instance.class_label - 1]++;
    const double n = static_cast<double>(training.size());
    for (int c = 0; c < kNumClasses; ++c) {
        model.class_log_priors[c] =
            std::log((static_cast<double>(counts[c]) + 1.0) / (n + kNumClasses));
    }

    // Fallback center for classes that never saw an attribute.
    std::array<double, kNumAttributes> global_mean{};
    for (int a = 0; a < kNumAttributes; ++a) {
        double sum = 0.0;
        std::size_t present = 0;
        for (const auto& instance : training) {
            if (!instance.has_feature(a)) continue;
            sum += instance.features[a];
            ++present;
        }
        global_mean[a] = present > 0 ? sum / static_cast<double>(present) : 0.0;
    }

    for (int c = 0; c < kNumClasses; ++c) {
        for (int a = 0; a < kNumAttributes; ++a) {
            double sum = 0.0;
            std::size_t present = 0;
            for (const auto& instance : training) {
                if (instance.class_label != c + 1 || !instance.has_feature(a)) continue;
                sum += instance.features[a];
                ++present;
            }
            auto& g = model.gaussians[c][a];
            if (present == 0) {
                g = {global_mean[a], options.variance_floor};
                continue;
            }
            g.mean = sum / static_cast<double>(present);
            if (present == 1) {
                g.variance = options.variance_floor;
                continue;
            }
            double sq = 0.0;
            for (const auto& instance : training) {
                if (instance.class_label != c + 1 || !instance.has_feature(a)) continue;
                const double d = instance.features[a] - g.mean;
                sq += d * d;
            }
            g.variance = std::max(options.variance_floor,
                                  sq / static_cast<double>(present - 1));
        }
    }
    return model;
}

std::array<double, kNumClasses> nb_posterior(const NaiveBayesModel& model,
                                             const Instance& instance) {
    std::array<double, kNumClasses> log_joint;
    for (int c = 0; c < kNumClasses; ++c) {
        double lj = model.class_log_priors[c];
        for (int a = 0; a < kNumAttributes; ++a) {
            if (!instance.has_feature(a)) continue;
            const auto& g = model.gaussians[c][a];
            const double d = instance.features[a] - g.mean;
            lj += -0.5 * std::log(2.0 * std::numbers::pi * g.variance) -
                  d * d / (2.0 * g.variance);
        }
        log_joint[c] = lj;
    }

    // log-sum-exp; the evidence term P(T) is realized as this normalizer.
    double max_lj = log_joint[0];
    for (int c = 1; c < kNumClasses; ++c) max_lj = std::max(max_lj, log_joint[c]);
    std::array<double, kNumClasses> posterior;
    double sum = 0.0;
    for (int c = 0; c < kNumClasses; ++c) {
        posterior[c] = std::exp(log_joint[c] - max_lj);
        sum += posterior[c];
    }
    for (auto& p : posterior) p /= sum;
    return posterior;
}

int nb_predict(const NaiveBayesModel& model, const Instance& instance) {
    return argmax_class(nb_posterior(model, instance));
}

std::string nb_to_text(const NaiveBayesModel& model) {
    std::string out = "naive_bayes 1\n";
    out += "variance_floor " + fmt17(model.variance_floor) + "\n";
    for (int c = 0; c < kNumClasses; ++c) {
        out += "log_prior " + std::to_string(c + 1) + " " + fmt17(model.class_log_priors[c]) +
               "\n";
    }
    for (int c = 0; c < kNumClasses; ++c) {
        for (int a = 0; a < kNumAttributes; ++a) {
            const auto& g = model.gaussians[c][a];
            out += "gaussian " + std::to_string(c + 1) + " " + std::to_string(a) + " " +
                   fmt17(g.mean) + " " + fmt17(g.variance) + "\n";
        }
    }
    return out;
}

NaiveBayesModel nb_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string keyword;
    int version = 0;
    if (!(in >> keyword >> version) || keyword != "naive_bayes" || version != 1) {
        throw std::runtime_error("nb_from_text: bad header");
    }
    NaiveBayesModel model{};
    if (!(in >> keyword >> model.variance_floor) || keyword != "variance_floor") {
        throw std::runtime_error("nb_from_text: expected variance_floor");
    }
    for (int i = 0; i < kNumClasses; ++i) {
        int c = 0;
        double value = 0.0;
        if (!(in >> keyword >> c >> value) || keyword != "log_prior" || c < 1 || c > kNumClasses) {
            throw std::runtime_error("nb_from_text: bad log_prior entry");
        }
        model.class_log_priors[c - 1] = value;
    }
    for (int i = 0; i < kNumClasses * kNumAttributes; ++i) {
        int c = 0, a = 0;
        double mean = 0.0, variance = 0.0;
        if (!(in >> keyword >> c >> a >> mean >> variance) || keyword != "gaussian" || c < 1 ||
            c > kNumClasses || a < 0 || a >= kNumAttributes) {
            throw std::runtime_error("nb_from_text: bad gaussian entry");
        }
        model.gaussians[c - 1][a] = {mean, variance};
    }
    return model;
}

}  // namespace esd
