#include <doctest.h>

#include <cmath>

#include "esd/folds.hpp"
#include "esd/mlp.hpp"
#include "esd/prng.hpp"
#include "oracle_helpers.hpp"

using namespace esd;

namespace {

// Squared-error loss of one (input, target) pair, for finite differencing.
double loss_of(const MlpModel& model, std::span<const double> inputs,
               std::span<const double> target) {
    const MlpActivations act = mlp_forward(model, inputs);
    double err = 0.0;
    for (int o = 0; o < model.n_outputs; ++o) {
        const double d = act.output[o] - target[o];
        err += 0.5 * d * d;
    }
    return err;
}

// Forward pass recomputed with a deliberately different structure: augmented
// vectors and inner products.
std::vector<double> forward_by_inner_products(const MlpModel& model,
                                              std::span<const double> inputs) {
    std::vector<double> augmented(inputs.begin(), inputs.end());
    augmented.push_back(1.0);
    std::vector<double> hidden;
    for (int h = 0; h < model.n_hidden; ++h) {
        long double z = 0.0L;
        for (int i = 0; i <= model.n_inputs; ++i) {
            z += (long double)model.hidden_weights[h * (model.n_inputs + 1) + i] * augmented[i];
        }
        hidden.push_back(1.0 / (1.0 + std::exp(-static_cast<double>(z))));
    }
    hidden.push_back(1.0);
    std::vector<double> outputs;
    for (int o = 0; o < model.n_outputs; ++o) {
        long double z = 0.0L;
        for (int h = 0; h <= model.n_hidden; ++h) {
            z += (long double)model.output_weights[o * (model.n_hidden + 1) + h] * hidden[h];
        }
        outputs.push_back(1.0 / (1.0 + std::exp(-static_cast<double>(z))));
    }
    return outputs;
}

struct GradientCheck {
    double max_relative_error;
};

GradientCheck finite_difference_check(MlpModel model, const std::vector<double>& inputs,
                                      const std::vector<double>& target) {
    MlpModel stepped = model;
    MlpVelocity velocity = zero_velocity(stepped);
    mlp_backprop_step(stepped, inputs, target, 1.0, 0.0, velocity);

    const double h = 1e-5;
    GradientCheck check{0.0};
    auto compare = [&](std::vector<double>& weights, const std::vector<double>& after,
                       bool hidden_layer) {
        for (std::size_t w = 0; w < weights.size(); ++w) {
            const double analytic =
                (hidden_layer ? model.hidden_weights[w] : model.output_weights[w]) - after[w];
            MlpModel plus = model, minus = model;
            (hidden_layer ? plus.hidden_weights : plus.output_weights)[w] += h;
            (hidden_layer ? minus.hidden_weights : minus.output_weights)[w] -= h;
            const double numeric =
                (loss_of(plus, inputs, target) - loss_of(minus, inputs, target)) / (2.0 * h);
            const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            check.max_relative_error =
                std::max(check.max_relative_error, std::abs(analytic - numeric) / scale);
        }
    };
    compare(model.hidden_weights, stepped.hidden_weights, true);
    compare(model.output_weights, stepped.output_weights, false);
    return check;
}

MlpModel random_small_network(SplitMix64& rng, int n_inputs, int n_hidden, int n_outputs) {
    MlpTrainConfig config;
    config.hidden_units = n_hidden;
    config.init_range = 0.0;
    MlpModel model = mlp_init(config, 0, n_inputs, n_outputs);
    for (auto& w : model.hidden_weights) w = rng.next_uniform(-2.0, 2.0);
    for (auto& w : model.output_weights) w = rng.next_uniform(-2.0, 2.0);
    return model;
}

}  // namespace

TEST_CASE("config validation") {
    MlpTrainConfig config;
    config.epochs = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = MlpTrainConfig{};
    config.learning_rate = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = MlpTrainConfig{};
    config.momentum = 1.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = MlpTrainConfig{};
    config.hidden_units = 0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
}

TEST_CASE("initialization") {
    MlpTrainConfig config;
    SUBCASE("zero init_range gives all-zero weights") {
        config.init_range = 0.0;
        const MlpModel model = mlp_init(config, 5);
        for (const double w : model.hidden_weights) CHECK(w == 0.0);
        for (const double w : model.output_weights) CHECK(w == 0.0);
    }
    SUBCASE("same seed reproduces the matrices bit for bit") {
        const MlpModel a = mlp_init(config, 42);
        const MlpModel b = mlp_init(config, 42);
        CHECK(a.hidden_weights == b.hidden_weights);
        CHECK(a.output_weights == b.output_weights);
    }
    SUBCASE("different seeds differ") {
        const MlpModel a = mlp_init(config, 1);
        const MlpModel b = mlp_init(config, 2);
        CHECK(a.hidden_weights != b.hidden_weights);
    }
    SUBCASE("weights respect the range") {
        const MlpModel model = mlp_init(config, 7);
        for (const double w : model.hidden_weights) CHECK(std::abs(w) <= config.init_range);
    }
}

TEST_CASE("forward pass") {
    SUBCASE("all-zero weights give 0.5 activations everywhere") {
        MlpTrainConfig config;
        config.init_range = 0.0;
        const MlpModel model = mlp_init(config, 1);
        const std::vector<double> inputs(34, 0.7);
        const MlpActivations act = mlp_forward(model, inputs);
        for (const double v : act.hidden) CHECK(v == 0.5);
        for (const double v : act.output) CHECK(v == 0.5);
    }
    SUBCASE("large positive weights saturate outputs to 1") {
        MlpTrainConfig config;
        config.hidden_units = 1;
        config.init_range = 0.0;
        MlpModel model = mlp_init(config, 1);
        for (auto& w : model.hidden_weights) w = 30.0;
        for (auto& w : model.output_weights) w = 30.0;
        const std::vector<double> inputs(34, 1.0);
        const MlpActivations act = mlp_forward(model, inputs);
        for (const double v : act.output) CHECK(v == doctest::Approx(1.0).epsilon(1e-6));
    }
    SUBCASE("matches the inner-product oracle to 1e-12") {
        SplitMix64 rng(101);
        for (int trial = 0; trial < 50; ++trial) {
            const MlpModel model = random_small_network(rng, 34, 1 + static_cast<int>(rng.next_below(8)), 6);
            std::vector<double> inputs(34);
            for (auto& x : inputs) x = rng.next_uniform(-1, 1);
            const MlpActivations act = mlp_forward(model, inputs);
            const auto expected = forward_by_inner_products(model, inputs);
            for (int o = 0; o < 6; ++o) {
                CHECK(act.output[o] == doctest::Approx(expected[o]).epsilon(1e-12));
            }
        }
    }
    SUBCASE("activations stay inside (0,1)") {
        SplitMix64 rng(103);
        const MlpModel model = random_small_network(rng, 34, 5, 6);
        std::vector<double> inputs(34, 0.0);
        const MlpActivations act = mlp_forward(model, inputs);
        for (const double v : act.hidden) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("backprop step") {
    SplitMix64 rng(107);
    SUBCASE("learning rate 0 leaves the model unchanged") {
        MlpModel model = random_small_network(rng, 34, 3, 6);
        const MlpModel before = model;
        MlpVelocity velocity = zero_velocity(model);
        std::vector<double> inputs(34, 0.5);
        std::vector<double> target(6, 0.0);
        target[0] = 1.0;
        mlp_backprop_step(model, inputs, target, 0.0, 0.0, velocity);
        CHECK(model.hidden_weights == before.hidden_weights);
        CHECK(model.output_weights == before.output_weights);
    }
    SUBCASE("analytic gradient matches central differences on a 3-2-2 toy") {
        const MlpModel model = random_small_network(rng, 3, 2, 2);
        const std::vector<double> inputs = {0.3, -0.8, 0.5};
        const std::vector<double> target = {1.0, 0.0};
        const GradientCheck check = finite_difference_check(model, inputs, target);
        CHECK(check.max_relative_error < 1e-4);
    }
    SUBCASE("one small step strictly decreases the per-instance error") {
        for (int trial = 0; trial < 20; ++trial) {
            MlpModel model = random_small_network(rng, 4, 3, 2);
            std::vector<double> inputs = {0.1, 0.9, -0.4, 0.2};
            std::vector<double> target = {0.0, 1.0};
            const double before = loss_of(model, inputs, target);
            MlpVelocity velocity = zero_velocity(model);
            mlp_backprop_step(model, inputs, target, 0.01, 0.0, velocity);
            CHECK(loss_of(model, inputs, target) < before);
        }
    }
    SUBCASE("momentum keeps moving after the gradient is applied") {
        MlpModel model = random_small_network(rng, 2, 2, 2);
        MlpVelocity velocity = zero_velocity(model);
        std::vector<double> inputs = {0.5, -0.5};
        std::vector<double> target = {1.0, 0.0};
        mlp_backprop_step(model, inputs, target, 0.1, 0.5, velocity);
        bool any_nonzero = false;
        for (const double v : velocity.output) any_nonzero |= v != 0.0;
        CHECK(any_nonzero);
    }
}

TEST_CASE("training") {
    SUBCASE("XOR-style four-point toy reaches 4/4 training accuracy") {
        std::vector<Instance> training;
        for (int a = 0; a <= 1; ++a) {
            for (int b = 0; b <= 1; ++b) {
                Instance instance{};
                instance.features.fill(0.0);
                instance.features[0] = a;
                instance.features[1] = b;
                instance.class_label = (a ^ b) ? 2 : 1;
                training.push_back(instance);
            }
        }
        MlpTrainConfig config;
        config.hidden_units = 4;
        config.epochs = 2000;
        config.learning_rate = 0.5;
        config.momentum = 0.2;
        config.init_range = 0.5;
        config.seed = 1;
        const MlpModel model = mlp_train(training, config);
        for (const auto& instance : training) {
            CHECK(argmax_class(mlp_predict_proba(model, instance)) == instance.class_label);
        }
    }
    SUBCASE("deterministic: same data, config, and seed give identical weights") {
        SplitMix64 rng(109);
        const auto training = oracle::random_instances(rng, 25, 5, 3);
        MlpTrainConfig config;
        config.epochs = 5;
        const MlpModel a = mlp_train(training, config);
        const MlpModel b = mlp_train(training, config);
        CHECK(a.hidden_weights == b.hidden_weights);
        CHECK(a.output_weights == b.output_weights);
    }
    SUBCASE("training reduces the mean squared error on a canonical fold") {
        const Dataset dataset = drop_missing_age(load_dataset(ESD_DATA_PATH));
        const FoldPlan plan = stratified_split(dataset, 10, 1);
        std::vector<Instance> training;
        for (const std::size_t idx : plan.train_indices(0)) {
            training.push_back(dataset.instances[idx]);
        }
        MlpTrainConfig config;
        config.epochs = 5;
        MlpModel initial = mlp_init(config, config.seed);
        initial.scaling = fit_scaling(training);
        const MlpModel trained = mlp_train(training, config);
        CHECK(mlp_mean_squared_error(trained, training) <
              mlp_mean_squared_error(initial, training));
        for (const double w : trained.hidden_weights) CHECK(std::isfinite(w));
        for (const double w : trained.output_weights) CHECK(std::isfinite(w));
    }
}

TEST_CASE("probability outputs") {
    SUBCASE("all-zero weights give the uniform distribution") {
        MlpTrainConfig config;
        config.init_range = 0.0;
        MlpModel model = mlp_init(config, 1);
        Instance x{};
        x.features.fill(1.0);
        x.class_label = 1;
        const auto probs = mlp_predict_proba(model, x);
        for (const double p : probs) CHECK(p == doctest::Approx(1.0 / 6).epsilon(1e-12));
    }
    SUBCASE("sum normalization arithmetic") {
        const auto probs = normalize_probabilities({0.9, 0.1, 0.1, 0.1, 0.1, 0.1});
        CHECK(probs[0] == doctest::Approx(0.6429).epsilon(1e-4));
        for (int c = 1; c < kNumClasses; ++c) {
            CHECK(probs[c] == doctest::Approx(0.0714).epsilon(1e-2));
        }
    }
    SUBCASE("outputs form a distribution for 1000 random models") {
        SplitMix64 rng(127);
        for (int trial = 0; trial < 1000; ++trial) {
            const MlpModel model = random_small_network(rng, 34, 1 + static_cast<int>(rng.next_below(6)), 6);
            Instance x{};
            x.features.fill(0.0);
            for (int a = 0; a < 6; ++a) x.features[a] = rng.next_uniform(0, 3);
            x.class_label = 1;
            const auto probs = mlp_predict_proba(model, x);
            double sum = 0.0;
            for (const double p : probs) {
                CHECK(p >= 0.0);
                sum += p;
            }
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("text round trip is exact") {
    SplitMix64 rng(131);
    const auto training = oracle::random_instances(rng, 20, 4, 4);
    MlpTrainConfig config;
    config.epochs = 3;
    const MlpModel model = mlp_train(training, config);
    const std::string text = mlp_to_text(model);
    const MlpModel reloaded = mlp_from_text(text);
    CHECK(mlp_to_text(reloaded) == text);
    CHECK(reloaded.hidden_weights == model.hidden_weights);
    CHECK(reloaded.output_weights == model.output_weights);
    CHECK_THROWS_AS(mlp_from_text("mlp 1\ntopology 0 0 0\n"), std::runtime_error);
}
