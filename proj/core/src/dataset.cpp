#include "esd/dataset.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace esd {

namespace {

std::vector<AttributeSpec> make_schema() {
    static const char* const kNames[kNumAttributes] = {
        "erythema",
        "scaling",
        "definite_borders",
        "itching",
        "koebner_phenomenon",
        "polygonal_papules",
        "follicular_papules",
        "oral_mucosal_involvement",
        "knee_and_elbow_involvement",
        "scalp_involvement",
        "family_history",
        "melanin_incontinence",
        "eosinophils_in_the_infiltrate",
        "PNL_infiltrate",
        "fibrosis_of_the_papillary_dermis",
        "exocytosis",
        "acanthosis",
        "hyperkeratosis",
        "parakeratosis",
        "clubbing_of_the_rete_ridges",
        "elongation_of_the_rete_ridges",
        "thinning_of_the_suprapapillary_epidermis",
        "spongiform_pustule",
        "munro_microabcess",
        "focal_hypergranulosis",
        "disappearance_of_the_granular_layer",
        "vacuolisation_and_damage_of_basal_layer",
        "spongiosis",
        "saw_tooth_appearance_of_retes",
        "follicular_horn_plug",
        "perifollicular_parakeratosis",
        "inflammatory_mononuclear_infiltrate",
        "band_like_infiltrate",
        "age",
    };
    std::vector<AttributeSpec> schema;
    schema.reserve(kNumAttributes);
    for (int i = 0; i < kNumAttributes; ++i) {
        AttributeKind kind = AttributeKind::graded;
        if (i == kFamilyHistoryAttribute) kind = AttributeKind::binary;
        if (i == kAgeAttribute) kind = AttributeKind::age;
        schema.push_back({i, kNames[i], kind});
    }
    return schema;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    fields.push_back(current);
    for (auto& f : fields) {
        const auto begin = f.find_first_not_of(" \t");
        const auto end = f.find_last_not_of(" \t");
        f = begin == std::string::npos ? std::string() : f.substr(begin, end - begin + 1);
    }
    return fields;
}

long parse_integer(const std::string& token, std::size_t line, int field) {
    long value = 0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || token.empty()) {
        throw ParseError(line, field, "expected an integer, got \"" + token + "\"");
    }
    return value;
}

}  // namespace

const std::vector<AttributeSpec>& esd_schema() {
    static const std::vector<AttributeSpec> schema = make_schema();
    return schema;
}

std::array<std::size_t, kNumClasses> Dataset::class_counts() const {
    std::array<std::size_t, kNumClasses> counts{};
    for (const auto& instance : instances) counts[instance.class_label - 1]++;
    return counts;
}

ParseError::ParseError(std::size_t line, int field, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) +
                         (field > 0 ? ", field " + std::to_string(field) : std::string()) +
                         ": " + what),
      line_(line),
      field_(field) {}

Instance parse_record(const std::string& line, const std::vector<AttributeSpec>& schema,
                      std::size_t line_number) {
    const auto fields = split_fields(line);
    if (fields.size() != static_cast<std::size_t>(kNumAttributes) + 1) {
        throw ParseError(line_number, 0,
                         "expected 35 comma-separated fields, got " +
                             std::to_string(fields.size()));
    }

    Instance instance{};
    for (const auto& spec : schema) {
        const std::string& token = fields[spec.index];
        const int field_number = spec.index + 1;
        if (token == "?") {
            if (spec.kind != AttributeKind::age) {
                throw ParseError(line_number, field_number,
                                 "missing marker '?' is only allowed in the age field");
            }
            instance.features[spec.index] = missing_value();
            continue;
        }
        const long value = parse_integer(token, line_number, field_number);
        switch (spec.kind) {
            case AttributeKind::graded:
                if (value < 0 || value > 3) {
                    throw ParseError(line_number, field_number,
                                     "graded attribute \"" + spec.name + "\" out of range 0..3: " +
                                         token);
                }
                break;
            case AttributeKind::binary:
                if (value != 0 && value != 1) {
                    throw ParseError(line_number, field_number,
                                     "binary attribute \"" + spec.name + "\" must be 0 or 1: " +
                                         token);
                }
                break;
            case AttributeKind::age:
                if (value < 0) {
                    throw ParseError(line_number, field_number, "age must be non-negative: " + token);
                }
                break;
        }
        instance.features[spec.index] = static_cast<double>(value);
    }

    const long label = parse_integer(fields[kNumAttributes], line_number, kNumAttributes + 1);
    if (label < 1 || label > kNumClasses) {
        throw ParseError(line_number, kNumAttributes + 1,
                         "class label out of range 1..6: " + fields[kNumAttributes]);
    }
    instance.class_label = static_cast<int>(label);
    return instance;
}

Dataset load_dataset(std::istream& in, const std::string& source_name) {
    Dataset dataset;
    dataset.schema = esd_schema();
    dataset.provenance.source = source_name;

    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        bool blank = true;
        for (char c : line) {
            if (c != ' ' && c != '\t' && c != '\r') blank = false;
        }
        if (blank) continue;
        dataset.instances.push_back(parse_record(line, dataset.schema, line_number));
    }
    if (dataset.instances.empty()) {
        throw std::runtime_error(source_name + ": no instances");
    }
    return dataset;
}

Dataset load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    return load_dataset(in, path);
}

std::string serialize_record(const Instance& instance) {
    std::string out;
    char buffer[64];
    for (int a = 0; a < kNumAttributes; ++a) {
        const double v = instance.features[a];
        if (is_missing(v)) {
            out += '?';
        } else if (v == std::floor(v) && std::abs(v) < 1e15) {
            std::snprintf(buffer, sizeof buffer, "%lld", static_cast<long long>(v));
            out += buffer;
        } else {
            std::snprintf(buffer, sizeof buffer, "%.17g", v);
            out += buffer;
        }
        out += ',';
    }
    out += std::to_string(instance.class_label);
    return out;
}

std::string serialize_dataset(const Dataset& dataset) {
    std::string out;
    for (const auto& instance : dataset.instances) {
        out += serialize_record(instance);
        out += '\n';
    }
    return out;
}

Dataset drop_missing_age(const Dataset& dataset) {
    Dataset cleaned;
    cleaned.schema = dataset.schema;
    cleaned.provenance = dataset.provenance;
    cleaned.instances.reserve(dataset.instances.size());
    for (const auto& instance : dataset.instances) {
        if (!instance.age_missing()) cleaned.instances.push_back(instance);
    }
    const std::size_t dropped = dataset.instances.size() - cleaned.instances.size();
    if (dropped > 0) {
        cleaned.provenance.cleaning_log.push_back(
            "drop_missing_age: removed " + std::to_string(dropped) + " of " +
            std::to_string(dataset.instances.size()) + " instances");
    }
    if (cleaned.instances.empty() && !dataset.instances.empty()) {
        cleaned.provenance.cleaning_log.push_back(
            "warning: every instance had a missing age; dataset is empty");
    }
    return cleaned;
}

ScalingParams fit_scaling(std::span<const Instance> training) {
    if (training.empty()) throw std::invalid_argument("fit_scaling: empty training partition");
    ScalingParams params;
    for (int a = 0; a < kNumAttributes; ++a) {
        double lo = 0.0, hi = 0.0;
        bool seen = false;
        for (const auto& instance : training) {
            const double v = instance.features[a];
            if (is_missing(v)) continue;
            if (!seen) {
                lo = hi = v;
                seen = true;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
        params.min[a] = lo;
        params.max[a] = hi;
    }
    return params;
}

std::array<double, kNumAttributes> apply_scaling(const ScalingParams& params,
                                                 const Instance& instance) {
    std::array<double, kNumAttributes> scaled;
    for (int a = 0; a < kNumAttributes; ++a) {
        const double v = instance.features[a];
        const double range = params.max[a] - params.min[a];
        if (is_missing(v) || range <= 0.0) {
            scaled[a] = 0.0;
        } else {
            scaled[a] = -1.0 + 2.0 * (v - params.min[a]) / range;
        }
    }
    return scaled;
}

}  // namespace esd
