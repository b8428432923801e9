#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "esd/dataset.hpp"

namespace esd {

struct MlpTrainConfig {
    int hidden_units = 20;     // (attributes + classes) / 2
    double learning_rate = 0.3;
    double momentum = 0.2;
    int epochs = 500;
    std::uint64_t seed = 1;
    double init_range = 0.05;  // weights start uniform in +-init_range

    void validate() const;  // throws std::invalid_argument
};

// Single hidden layer, sigmoid everywhere, bias as a trailing weight column.
struct MlpModel {
    int n_inputs;
    int n_hidden;
    int n_outputs;
    std::vector<double> hidden_weights;  // n_hidden x (n_inputs + 1), row-major
    std::vector<double> output_weights;  // n_outputs x (n_hidden + 1), row-major
    ScalingParams scaling;               // captured from the training partition
};

// Momentum state, same shapes as the weights.
struct MlpVelocity {
    std::vector<double> hidden;
    std::vector<double> output;
};

MlpVelocity zero_velocity(const MlpModel& model);

// Weights drawn uniformly from +-init_range with SplitMix64(seed): hidden
// matrix row-major first, then the output matrix.
MlpModel mlp_init(const MlpTrainConfig& config, std::uint64_t seed, int n_inputs = kNumAttributes,
                  int n_outputs = kNumClasses);

struct MlpActivations {
    std::vector<double> hidden;
    std::vector<double> output;
};

MlpActivations mlp_forward(const MlpModel& model, std::span<const double> scaled_inputs);

// One stochastic gradient step on the per-instance squared error
// 1/2 * sum_c (o_c - y_c)^2, with update = -lr * grad + momentum * previous
// update. Mutates model and velocity in place.
void mlp_backprop_step(MlpModel& model, std::span<const double> scaled_inputs,
                       std::span<const double> one_hot_target, double learning_rate,
                       double momentum, MlpVelocity& velocity);

// Fits scaling on the training set, then runs `epochs` passes of per-instance
// updates; the visit order is reshuffled every epoch with a stream seeded by
// mix_seed(config.seed, epoch). Deterministic in (data, config).
MlpModel mlp_train(std::span<const Instance> training, const MlpTrainConfig& config);

// Sigmoid outputs divided by their sum (sigmoid > 0, so the sum never
// vanishes).
std::array<double, kNumClasses> mlp_predict_proba(const MlpModel& model,
                                                  const Instance& instance);

// Sum-normalizes a raw nonnegative score vector into a distribution.
std::array<double, kNumClasses> normalize_probabilities(std::array<double, kNumClasses> scores);

// Mean over instances of the per-instance squared error above.
double mlp_mean_squared_error(const MlpModel& model, std::span<const Instance> instances);

// Text serialization: topology header, scaling bounds, then row-major weight
// rows at 17 significant digits.
std::string mlp_to_text(const MlpModel& model);
MlpModel mlp_from_text(const std::string& text);

}  // namespace esd
