#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace esd {

inline constexpr int kNumAttributes = 34;
inline constexpr int kNumClasses = 6;
inline constexpr int kAgeAttribute = 33;           // f_34, the only continuous one
inline constexpr int kFamilyHistoryAttribute = 10;  // f_11, the only binary one

enum class AttributeKind { graded, binary, age };

struct AttributeSpec {
    int index;
    std::string name;
    AttributeKind kind;
};

// The 34 attributes of the erythemato-squamous disease schema, in file order.
const std::vector<AttributeSpec>& esd_schema();

// Missing values (only legal for the age attribute) are carried as NaN.
inline double missing_value() { return std::numeric_limits<double>::quiet_NaN(); }
inline bool is_missing(double v) { return std::isnan(v); }

struct Instance {
    std::array<double, kNumAttributes> features;
    int class_label;  // 1..6

    bool has_feature(int attribute) const { return !is_missing(features[attribute]); }
    bool age_missing() const { return is_missing(features[kAgeAttribute]); }
};

struct Provenance {
    std::string source;
    std::vector<std::string> cleaning_log;
};

struct Dataset {
    std::vector<AttributeSpec> schema;
    std::vector<Instance> instances;  // exactly in file order
    Provenance provenance;

    std::size_t size() const { return instances.size(); }
    std::array<std::size_t, kNumClasses> class_counts() const;
};

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, int field, const std::string& what);
    std::size_t line() const { return line_; }
    int field() const { return field_; }  // 1-based, 0 when the whole line is at fault

private:
    std::size_t line_;
    int field_;
};

// One instance per line, 35 comma-separated fields; field 34 (age) may be "?",
// field 35 is the class label in 1..6.
Instance parse_record(const std::string& line, const std::vector<AttributeSpec>& schema,
                      std::size_t line_number = 0);

Dataset load_dataset(const std::string& path);
Dataset load_dataset(std::istream& in, const std::string& source_name);

// Inverse of parsing: one line per instance, bit-exact round trip.
std::string serialize_record(const Instance& instance);
std::string serialize_dataset(const Dataset& dataset);

// Row deletion for the 8 records without an age value. Order-preserving and
// idempotent; logs what it dropped into the provenance.
Dataset drop_missing_age(const Dataset& dataset);

// Per-attribute affine map fitted on a training partition: observed minimum
// maps to -1, maximum to +1, constant attributes to 0. Values outside the
// training range extrapolate (no clamping); missing values map to 0.
struct ScalingParams {
    std::array<double, kNumAttributes> min;
    std::array<double, kNumAttributes> max;
};

ScalingParams fit_scaling(std::span<const Instance> training);
std::array<double, kNumAttributes> apply_scaling(const ScalingParams& params,
                                                 const Instance& instance);

}  // namespace esd
