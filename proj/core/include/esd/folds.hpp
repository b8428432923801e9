#pragma once

#include <cstdint>
#include <vector>

#include "esd/dataset.hpp"

namespace esd {

// Seeded, stratified assignment of every instance to one of k folds.
struct FoldPlan {
    int k;
    std::uint64_t seed;
    std::vector<int> assignment;  // instance index -> fold id in 0..k-1

    std::vector<std::size_t> test_indices(int fold) const;
    std::vector<std::size_t> train_indices(int fold) const;
};

// Per class (in ascending label order): shuffle that class's instance indices
// with a single SplitMix64 stream seeded with `seed`, then deal them
// round-robin onto folds. The dealing offset carries over from class to class
// so overall fold sizes stay within one of each other.
//
// Deterministic in (instance order, class labels, k, seed). Throws if k < 2 or
// k exceeds the instance count; classes with fewer than k members are reported
// through `warnings` when given.
FoldPlan stratified_split(const Dataset& dataset, int k, std::uint64_t seed,
                          std::vector<std::string>* warnings = nullptr);

// counts[f][c] = instances of class c+1 landing in fold f. Test helper and
// stratification audit.
std::vector<std::array<std::size_t, kNumClasses>> fold_class_counts(const FoldPlan& plan,
                                                                    const Dataset& dataset);

}  // namespace esd
