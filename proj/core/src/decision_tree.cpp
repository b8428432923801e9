#include "esd/decision_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace esd {

namespace {

constexpr double kGainEpsilon = 1e-12;
constexpr double kRatioEpsilon = 1e-12;

std::array<double, kNumClasses> tally(std::span<const Instance* const> instances) {
    std::array<double, kNumClasses> counts{};
    for (const Instance* instance : instances) counts[instance->class_label - 1] += 1.0;
    return counts;
}

double entropy_bits(const std::array<double, kNumClasses>& counts) {
    double total = 0.0;
    for (const double c : counts) total += c;
    if (total <= 0.0) return 0.0;
    double h = 0.0;
    for (const double c : counts) {
        if (c > 0.0) {
            const double p = c / total;
            h -= p * std::log2(p);
        }
    }
    return h;
}

struct SplitEvaluation {
    double gain;
    double ratio;
    std::size_t n_left;
    std::size_t n_right;
};

// Entropies over instances with a present value for the attribute.
SplitEvaluation evaluate_split(std::span<const Instance* const> instances, int attribute,
                               double threshold) {
    std::array<double, kNumClasses> left{}, right{}, parent{};
    for (const Instance* instance : instances) {
        const double v = instance->features[attribute];
        if (is_missing(v)) continue;
        parent[instance->class_label - 1] += 1.0;
        auto& side = v <= threshold ? left : right;
        side[instance->class_label - 1] += 1.0;
    }
    double n_left = 0.0, n_right = 0.0;
    for (const double c : left) n_left += c;
    for (const double c : right) n_right += c;
    const double n = n_left + n_right;
    if (n_left == 0.0 || n_right == 0.0) {
        throw std::invalid_argument("gain_ratio: degenerate split (one side empty)");
    }

    const double pl = n_left / n;
    const double pr = n_right / n;
    SplitEvaluation eval{};
    eval.gain = entropy_bits(parent) - pl * entropy_bits(left) - pr * entropy_bits(right);
    const double split_info = -pl * std::log2(pl) - pr * std::log2(pr);
    eval.ratio = eval.gain / split_info;
    eval.n_left = static_cast<std::size_t>(n_left);
    eval.n_right = static_cast<std::size_t>(n_right);
    return eval;
}

int argmax_counts(const std::array<double, kNumClasses>& counts) {
    int best = 0;
    for (int c = 1; c < kNumClasses; ++c) {
        if (counts[c] > counts[best]) best = c;
    }
    return best + 1;
}

TreePtr make_leaf(const std::array<double, kNumClasses>& counts) {
    auto node = std::make_unique<TreeNode>();
    node->counts = counts;
    node->predicted_class = argmax_counts(counts);
    return node;
}

TreePtr grow(std::vector<const Instance*>& instances, const C45Config& config) {
    const auto counts = tally(instances);

    bool pure = true;
    for (const Instance* instance : instances) {
        if (instance->class_label != instances.front()->class_label) {
            pure = false;
            break;
        }
    }
    if (pure || instances.size() < 2 * static_cast<std::size_t>(config.min_leaf)) {
        return make_leaf(counts);
    }

    int best_attribute = -1;
    double best_threshold = 0.0;
    double best_ratio = 0.0;
    bool found = false;

    std::vector<double> values;
    for (int attribute = 0; attribute < kNumAttributes; ++attribute) {
        values.clear();
        for (const Instance* instance : instances) {
            const double v = instance->features[attribute];
            if (!is_missing(v)) values.push_back(v);
        }
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t i = 0; i + 1 < values.size(); ++i) {
            const double threshold = (values[i] + values[i + 1]) / 2.0;
            const SplitEvaluation eval = evaluate_split(instances, attribute, threshold);
            if (eval.n_left < static_cast<std::size_t>(config.min_leaf) ||
                eval.n_right < static_cast<std::size_t>(config.min_leaf)) {
                continue;
            }
            if (eval.gain <= kGainEpsilon) continue;
            // Iteration order (attribute ascending, threshold ascending) makes
            // "first strict improvement" the lowest-index tie-break.
            if (!found || eval.ratio > best_ratio + kRatioEpsilon) {
                best_attribute = attribute;
                best_threshold = threshold;
                best_ratio = eval.ratio;
                found = true;
            }
        }
    }
    if (!found) return make_leaf(counts);

    std::vector<const Instance*> left, right;
    std::size_t n_left = 0, n_right = 0;
    for (const Instance* instance : instances) {
        const double v = instance->features[best_attribute];
        if (is_missing(v)) continue;
        (v <= best_threshold ? n_left : n_right)++;
    }
    for (const Instance* instance : instances) {
        const double v = instance->features[best_attribute];
        if (is_missing(v)) {
            // Missing values follow the more populous branch (left on ties).
            (n_left >= n_right ? left : right).push_back(instance);
        } else {
            (v <= best_threshold ? left : right).push_back(instance);
        }
    }

    auto node = std::make_unique<TreeNode>();
    node->attribute = best_attribute;
    node->threshold = best_threshold;
    node->counts = counts;
    node->predicted_class = argmax_counts(counts);
    node->left = grow(left, config);
    node->right = grow(right, config);
    return node;
}

// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.15e-9 over (0, 1).
double normal_quantile(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p outside (0,1)");
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
               (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

double subtree_error_bound(const TreeNode& node, double confidence) {
    if (node.is_leaf()) {
        return node.training_errors() +
               pessimistic_added_errors(node.total(), node.training_errors(), confidence);
    }
    return subtree_error_bound(*node.left, confidence) +
           subtree_error_bound(*node.right, confidence);
}

void prune_in_place(TreeNode& node, double confidence) {
    if (node.is_leaf()) return;
    prune_in_place(*node.left, confidence);
    prune_in_place(*node.right, confidence);

    const double as_leaf = node.training_errors() +
                           pessimistic_added_errors(node.total(), node.training_errors(), confidence);
    const double as_subtree = subtree_error_bound(node, confidence);
    if (as_leaf <= as_subtree + 1e-12) {
        node.left.reset();
        node.right.reset();
        node.attribute = -1;
        node.threshold = 0.0;
        node.predicted_class = argmax_counts(node.counts);
    }
}

std::string format_value(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof buffer, "%g", v);
    return buffer;
}

void format_node(const TreeNode& node, const std::vector<AttributeSpec>& schema, int depth,
                 std::string& out) {
    const std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
    if (node.is_leaf()) {
        out += indent + "leaf: [";
        for (int c = 0; c < kNumClasses; ++c) {
            if (c > 0) out += ",";
            out += format_value(node.counts[c]);
        }
        out += "] -> " + std::to_string(node.predicted_class) + "\n";
        return;
    }
    const std::string& name = schema[node.attribute].name;
    out += indent + name + " <= " + format_value(node.threshold) + "\n";
    format_node(*node.left, schema, depth + 1, out);
    out += indent + name + " > " + format_value(node.threshold) + "\n";
    format_node(*node.right, schema, depth + 1, out);
}

void collect_rules(const TreeNode& node, std::vector<RuleCondition>& path, RuleSet& rules) {
    if (node.is_leaf()) {
        rules.rules.push_back(Rule{path, node.predicted_class, true});
        return;
    }
    path.push_back({node.attribute, node.threshold, true});
    collect_rules(*node.left, path, rules);
    path.back().upper_bound = false;
    collect_rules(*node.right, path, rules);
    path.pop_back();
}

}  // namespace

void C45Config::validate() const {
    if (!(confidence > 0.0 && confidence < 0.5)) {
        throw std::invalid_argument("j48: confidence must be in (0, 0.5)");
    }
    if (min_leaf < 1) throw std::invalid_argument("j48: min_leaf must be >= 1");
}

double TreeNode::total() const {
    double sum = 0.0;
    for (const double c : counts) sum += c;
    return sum;
}

double TreeNode::training_errors() const {
    double best = 0.0;
    for (const double c : counts) best = std::max(best, c);
    return total() - best;
}

std::size_t TreeNode::leaf_count() const {
    if (is_leaf()) return 1;
    return left->leaf_count() + right->leaf_count();
}

double gain_ratio(std::span<const Instance* const> instances, int attribute, double threshold) {
    return evaluate_split(instances, attribute, threshold).ratio;
}

double gain_ratio(std::span<const Instance> instances, int attribute, double threshold) {
    std::vector<const Instance*> pointers;
    pointers.reserve(instances.size());
    for (const auto& instance : instances) pointers.push_back(&instance);
    return gain_ratio(pointers, attribute, threshold);
}

TreePtr build_tree(std::span<const Instance> training, const C45Config& config) {
    config.validate();
    if (training.empty()) throw std::invalid_argument("build_tree: empty training set");
    std::vector<const Instance*> pointers;
    pointers.reserve(training.size());
    for (const auto& instance : training) pointers.push_back(&instance);
    return grow(pointers, config);
}

// Upper confidence limit on a binomial error count, following the classic
// C4.5 recipe: normal approximation with continuity correction, a closed-form
// base case below one error, and linear interpolation between the two.
double pessimistic_added_errors(double n, double errors, double confidence) {
    if (n <= 0.0) return 0.0;
    if (errors < 1.0) {
        const double base = n * (1.0 - std::pow(confidence, 1.0 / n));
        if (errors == 0.0) return base;
        return base + errors * (pessimistic_added_errors(n, 1.0, confidence) - base);
    }
    if (errors + 0.5 >= n) return std::max(n - errors, 0.0);
    const double z = normal_quantile(1.0 - confidence);
    const double f = (errors + 0.5) / n;
    const double r =
        (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
        (1.0 + z * z / n);
    return r * n - errors;
}

TreePtr prune(TreePtr tree, const C45Config& config) {
    config.validate();
    if (!tree) throw std::invalid_argument("prune: null tree");
    prune_in_place(*tree, config.confidence);
    return tree;
}

const TreeNode& route_to_leaf(const TreeNode& tree, const Instance& instance) {
    const TreeNode* node = &tree;
    while (!node->is_leaf()) {
        const double v = instance.features[node->attribute];
        if (is_missing(v)) {
            node = node->left->total() >= node->right->total() ? node->left.get()
                                                               : node->right.get();
        } else {
            node = v <= node->threshold ? node->left.get() : node->right.get();
        }
    }
    return *node;
}

TreePrediction tree_predict(const TreeNode& tree, const Instance& instance) {
    const TreeNode& leaf = route_to_leaf(tree, instance);
    TreePrediction prediction;
    prediction.class_label = leaf.predicted_class;
    const double total = leaf.total();
    for (int c = 0; c < kNumClasses; ++c) {
        prediction.probabilities[c] = (leaf.counts[c] + 1.0) / (total + kNumClasses);
    }
    return prediction;
}

std::array<double, kNumClasses> leaf_relative_frequencies(const TreeNode& leaf) {
    std::array<double, kNumClasses> probabilities{};
    const double total = leaf.total();
    if (total <= 0.0) throw std::invalid_argument("leaf_relative_frequencies: empty leaf");
    for (int c = 0; c < kNumClasses; ++c) probabilities[c] = leaf.counts[c] / total;
    return probabilities;
}

RuleSet extract_rules(const TreeNode& tree) {
    RuleSet rules;
    std::vector<RuleCondition> path;
    collect_rules(tree, path, rules);
    return rules;
}

int rules_classify(const RuleSet& rules, const Instance& instance) {
    for (const Rule& rule : rules.rules) {
        bool matches = true;
        for (const RuleCondition& condition : rule.conditions) {
            const double v = instance.features[condition.attribute];
            if (is_missing(v)) {
                throw std::invalid_argument("rules_classify: missing value; rules need complete instances");
            }
            const bool in_interval = condition.upper_bound ? v <= condition.threshold
                                                           : v > condition.threshold;
            if (!in_interval) {
                matches = false;
                break;
            }
        }
        if (matches) return rule.class_label;
    }
    throw std::logic_error("rules_classify: no rule matched (rule set does not partition)");
}

std::string format_tree(const TreeNode& tree, const std::vector<AttributeSpec>& schema) {
    std::string out;
    format_node(tree, schema, 0, out);
    return out;
}

std::string format_rules(const RuleSet& rules, const std::vector<AttributeSpec>& schema) {
    std::string out;
    for (const Rule& rule : rules.rules) {
        out += "if ";
        if (rule.conditions.empty()) {
            out += "true";
        } else {
            for (std::size_t i = 0; i < rule.conditions.size(); ++i) {
                const auto& condition = rule.conditions[i];
                if (i > 0) out += " and ";
                out += schema[condition.attribute].name;
                out += condition.upper_bound ? " <= " : " > ";
                out += format_value(condition.threshold);
            }
        }
        out += " then class " + std::to_string(rule.class_label) + " = " +
               (rule.asserts ? "1" : "0") + "\n";
    }
    return out;
}

}  // namespace esd
