#include "esd/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "esd/metrics.hpp"
#include "esd/prng.hpp"

namespace esd {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::string fmt17(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%.17g", v);
    return buffer;
}

std::array<double, kNumClasses> one_hot(int class_label) {
    std::array<double, kNumClasses> target{};
    target[class_label - 1] = 1.0;
    return target;
}

}  // namespace

void MlpTrainConfig::validate() const {
    if (hidden_units < 1) throw std::invalid_argument("mlp: hidden_units must be >= 1");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("mlp: learning_rate must be > 0");
    if (momentum < 0.0 || momentum >= 1.0) {
        throw std::invalid_argument("mlp: momentum must be in [0, 1)");
    }
    if (epochs < 1) throw std::invalid_argument("mlp: epochs must be >= 1");
    if (init_range < 0.0) throw std::invalid_argument("mlp: init_range must be >= 0");
}

MlpVelocity zero_velocity(const MlpModel& model) {
    return MlpVelocity{std::vector<double>(model.hidden_weights.size(), 0.0),
                       std::vector<double>(model.output_weights.size(), 0.0)};
}

MlpModel mlp_init(const MlpTrainConfig& config, std::uint64_t seed, int n_inputs,
                  int n_outputs) {
    config.validate();
    MlpModel model;
    model.n_inputs = n_inputs;
    model.n_hidden = config.hidden_units;
    model.n_outputs = n_outputs;
    model.hidden_weights.resize(static_cast<std::size_t>(model.n_hidden) * (n_inputs + 1));
    model.output_weights.resize(static_cast<std::size_t>(n_outputs) * (model.n_hidden + 1));
    model.scaling.min.fill(0.0);
    model.scaling.max.fill(0.0);

    SplitMix64 rng(seed);
    for (auto& w : model.hidden_weights) w = rng.next_uniform(-config.init_range, config.init_range);
    for (auto& w : model.output_weights) w = rng.next_uniform(-config.init_range, config.init_range);
    return model;
}

MlpActivations mlp_forward(const MlpModel& model, std::span<const double> scaled_inputs) {
    if (scaled_inputs.size() != static_cast<std::size_t>(model.n_inputs)) {
        throw std::invalid_argument("mlp_forward: input size mismatch");
    }
    MlpActivations act;
    act.hidden.resize(model.n_hidden);
    for (int h = 0; h < model.n_hidden; ++h) {
        const double* row = &model.hidden_weights[static_cast<std::size_t>(h) * (model.n_inputs + 1)];
        double z = row[model.n_inputs];  // bias
        for (int i = 0; i < model.n_inputs; ++i) z += row[i] * scaled_inputs[i];
        act.hidden[h] = sigmoid(z);
    }
    act.output.resize(model.n_outputs);
    for (int o = 0; o < model.n_outputs; ++o) {
        const double* row = &model.output_weights[static_cast<std::size_t>(o) * (model.n_hidden + 1)];
        double z = row[model.n_hidden];  // bias
        for (int h = 0; h < model.n_hidden; ++h) z += row[h] * act.hidden[h];
        act.output[o] = sigmoid(z);
    }
    return act;
}

void mlp_backprop_step(MlpModel& model, std::span<const double> scaled_inputs,
                       std::span<const double> one_hot_target, double learning_rate,
                       double momentum, MlpVelocity& velocity) {
    if (one_hot_target.size() != static_cast<std::size_t>(model.n_outputs)) {
        throw std::invalid_argument("mlp_backprop_step: target size mismatch");
    }
    const MlpActivations act = mlp_forward(model, scaled_inputs);

    // dE/dnet at each output for E = 1/2 sum (o - y)^2 through the sigmoid.
    std::vector<double> delta_out(model.n_outputs);
    for (int o = 0; o < model.n_outputs; ++o) {
        const double out = act.output[o];
        delta_out[o] = (out - one_hot_target[o]) * out * (1.0 - out);
    }
    std::vector<double> delta_hidden(model.n_hidden, 0.0);
    for (int h = 0; h < model.n_hidden; ++h) {
        double back = 0.0;
        for (int o = 0; o < model.n_outputs; ++o) {
            back += delta_out[o] *
                    model.output_weights[static_cast<std::size_t>(o) * (model.n_hidden + 1) + h];
        }
        delta_hidden[h] = back * act.hidden[h] * (1.0 - act.hidden[h]);
    }

    for (int o = 0; o < model.n_outputs; ++o) {
        const std::size_t base = static_cast<std::size_t>(o) * (model.n_hidden + 1);
        for (int h = 0; h <= model.n_hidden; ++h) {
            const double input = h < model.n_hidden ? act.hidden[h] : 1.0;
            double& v = velocity.output[base + h];
            v = -learning_rate * delta_out[o] * input + momentum * v;
            model.output_weights[base + h] += v;
        }
    }
    for (int h = 0; h < model.n_hidden; ++h) {
        const std::size_t base = static_cast<std::size_t>(h) * (model.n_inputs + 1);
        for (int i = 0; i <= model.n_inputs; ++i) {
            const double input = i < model.n_inputs ? scaled_inputs[i] : 1.0;
            double& v = velocity.hidden[base + i];
            v = -learning_rate * delta_hidden[h] * input + momentum * v;
            model.hidden_weights[base + i] += v;
        }
    }
}

MlpModel mlp_train(std::span<const Instance> training, const MlpTrainConfig& config) {
    config.validate();
    if (training.empty()) throw std::invalid_argument("mlp_train: empty training set");

    MlpModel model = mlp_init(config, config.seed);
    model.scaling = fit_scaling(training);

    std::vector<std::array<double, kNumAttributes>> inputs;
    std::vector<std::array<double, kNumClasses>> targets;
    inputs.reserve(training.size());
    targets.reserve(training.size());
    for (const auto& instance : training) {
        inputs.push_back(apply_scaling(model.scaling, instance));
        targets.push_back(one_hot(instance.class_label));
    }

    MlpVelocity velocity = zero_velocity(model);
    std::vector<std::size_t> order(training.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        SplitMix64 rng(mix_seed(config.seed, static_cast<std::uint64_t>(epoch)));
        shuffle(order, rng);
        for (const std::size_t idx : order) {
            mlp_backprop_step(model, inputs[idx], targets[idx], config.learning_rate,
                              config.momentum, velocity);
        }
    }
    return model;
}

std::array<double, kNumClasses> normalize_probabilities(std::array<double, kNumClasses> scores) {
    double sum = 0.0;
    for (const double s : scores) sum += s;
    if (sum <= 0.0) throw std::invalid_argument("normalize_probabilities: nonpositive sum");
    for (auto& s : scores) s /= sum;
    return scores;
}

std::array<double, kNumClasses> mlp_predict_proba(const MlpModel& model,
                                                  const Instance& instance) {
    const auto scaled = apply_scaling(model.scaling, instance);
    const MlpActivations act = mlp_forward(model, scaled);
    std::array<double, kNumClasses> scores{};
    for (int o = 0; o < model.n_outputs && o < kNumClasses; ++o) scores[o] = act.output[o];
    return normalize_probabilities(scores);
}

double mlp_mean_squared_error(const MlpModel& model, std::span<const Instance> instances) {
    if (instances.empty()) throw std::invalid_argument("mlp_mean_squared_error: empty set");
    double total = 0.0;
    for (const auto& instance : instances) {
        const auto scaled = apply_scaling(model.scaling, instance);
        const MlpActivations act = mlp_forward(model, scaled);
        const auto target = one_hot(instance.class_label);
        double err = 0.0;
        for (int o = 0; o < model.n_outputs; ++o) {
            const double d = act.output[o] - target[o];
            err += d * d;
        }
        total += 0.5 * err;
    }
    return total / static_cast<double>(instances.size());
}

std::string mlp_to_text(const MlpModel& model) {
    std::string out = "mlp 1\n";
    out += "topology " + std::to_string(model.n_inputs) + " " + std::to_string(model.n_hidden) +
           " " + std::to_string(model.n_outputs) + "\n";
    out += "scaling_min";
    for (const double v : model.scaling.min) out += " " + fmt17(v);
    out += "\nscaling_max";
    for (const double v : model.scaling.max) out += " " + fmt17(v);
    out += "\n";
    for (int h = 0; h < model.n_hidden; ++h) {
        out += "hidden_row";
        const std::size_t base = static_cast<std::size_t>(h) * (model.n_inputs + 1);
        for (int i = 0; i <= model.n_inputs; ++i) out += " " + fmt17(model.hidden_weights[base + i]);
        out += "\n";
    }
    for (int o = 0; o < model.n_outputs; ++o) {
        out += "output_row";
        const std::size_t base = static_cast<std::size_t>(o) * (model.n_hidden + 1);
        for (int h = 0; h <= model.n_hidden; ++h) out += " " + fmt17(model.output_weights[base + h]);
        out += "\n";
    }
    return out;
}

MlpModel mlp_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string keyword;
    int version = 0;
    if (!(in >> keyword >> version) || keyword != "mlp" || version != 1) {
        throw std::runtime_error("mlp_from_text: bad header");
    }
    MlpModel model;
    if (!(in >> keyword >> model.n_inputs >> model.n_hidden >> model.n_outputs) ||
        keyword != "topology" || model.n_inputs < 1 || model.n_hidden < 1 || model.n_outputs < 1) {
        throw std::runtime_error("mlp_from_text: bad topology");
    }
    if (model.n_inputs != kNumAttributes) {
        throw std::runtime_error("mlp_from_text: unsupported input count");
    }
    if (!(in >> keyword) || keyword != "scaling_min") {
        throw std::runtime_error("mlp_from_text: expected scaling_min");
    }
    for (auto& v : model.scaling.min) {
        if (!(in >> v)) throw std::runtime_error("mlp_from_text: truncated scaling_min");
    }
    if (!(in >> keyword) || keyword != "scaling_max") {
        throw std::runtime_error("mlp_from_text: expected scaling_max");
    }
    for (auto& v : model.scaling.max) {
        if (!(in >> v)) throw std::runtime_error("mlp_from_text: truncated scaling_max");
    }
    model.hidden_weights.resize(static_cast<std::size_t>(model.n_hidden) * (model.n_inputs + 1));
    for (int h = 0; h < model.n_hidden; ++h) {
        if (!(in >> keyword) || keyword != "hidden_row") {
            throw std::runtime_error("mlp_from_text: expected hidden_row");
        }
        const std::size_t base = static_cast<std::size_t>(h) * (model.n_inputs + 1);
        for (int i = 0; i <= model.n_inputs; ++i) {
            if (!(in >> model.hidden_weights[base + i])) {
                throw std::runtime_error("mlp_from_text: truncated hidden_row");
            }
        }
    }
    model.output_weights.resize(static_cast<std::size_t>(model.n_outputs) * (model.n_hidden + 1));
    for (int o = 0; o < model.n_outputs; ++o) {
        if (!(in >> keyword) || keyword != "output_row") {
            throw std::runtime_error("mlp_from_text: expected output_row");
        }
        const std::size_t base = static_cast<std::size_t>(o) * (model.n_hidden + 1);
        for (int h = 0; h <= model.n_hidden; ++h) {
            if (!(in >> model.output_weights[base + h])) {
                throw std::runtime_error("mlp_from_text: truncated output_row");
            }
        }
    }
    return model;
}

}  // namespace esd
