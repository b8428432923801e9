#include "esd/folds.hpp"

#include <stdexcept>

#include "esd/prng.hpp"

namespace esd {

std::vector<std::size_t> FoldPlan::test_indices(int fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] == fold) out.push_back(i);
    }
    return out;
}

std::vector<std::size_t> FoldPlan::train_indices(int fold) const {
    std::vector<std::size_t> out;
    out.reserve(assignment.size());
    for (std::size_t i = 0; i < assignment.size(); ++i) {
        if (assignment[i] != fold) out.push_back(i);
    }
    return out;
}

FoldPlan stratified_split(const Dataset& dataset, int k, std::uint64_t seed,
                          std::vector<std::string>* warnings) {
    if (k < 2) throw std::invalid_argument("stratified_split: k must be at least 2");
    if (static_cast<std::size_t>(k) > dataset.size()) {
        throw std::invalid_argument("stratified_split: k = " + std::to_string(k) +
                                    " exceeds the instance count " +
                                    std::to_string(dataset.size()));
    }

    FoldPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.assignment.assign(dataset.size(), -1);

    SplitMix64 rng(seed);
    std::size_t offset = 0;
    for (int label = 1; label <= kNumClasses; ++label) {
        std::vector<std::size_t> members;
        for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
            if (dataset.instances[i].class_label == label) members.push_back(i);
        }
        if (warnings && members.size() < static_cast<std::size_t>(k)) {
            warnings->push_back("class " + std::to_string(label) + " has only " +
                                std::to_string(members.size()) + " instances for " +
                                std::to_string(k) + " folds");
        }
        shuffle(members, rng);
        for (std::size_t j = 0; j < members.size(); ++j) {
            plan.assignment[members[j]] = static_cast<int>((offset + j) % k);
        }
        offset = (offset + members.size()) % k;
    }
    return plan;
}

std::vector<std::array<std::size_t, kNumClasses>> fold_class_counts(const FoldPlan& plan,
                                                                    const Dataset& dataset) {
    std::vector<std::array<std::size_t, kNumClasses>> counts(
        plan.k, std::array<std::size_t, kNumClasses>{});
    for (std::size_t i = 0; i < dataset.instances.size(); ++i) {
        counts[plan.assignment[i]][dataset.instances[i].class_label - 1]++;
    }
    return counts;
}

}  // namespace esd
