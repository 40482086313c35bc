#pragma once

#include "xinflate/classifiers.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace xinflate {

/// RFC 4180 records: quoted fields, doubled quotes, CRLF or LF line ends.
/// Blank lines are skipped.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

struct Dataset {
    FeatureSpace space;
    std::vector<std::string> classes;
    std::vector<Point> rows;
    std::vector<ClassIndex> labels;
};

struct CsvOptions {
    /// Label column by header name; the last column when unset.
    std::optional<std::string> label;
};

/// Header names may carry a type suffix: ":cat", ":num" (continuous) or
/// ":int". Untyped columns are numeric when every cell parses as a number,
/// categorical otherwise. Ordinal bounds are the column minimum and maximum
/// (widened by one when they coincide); labels and classes keep their order
/// of first appearance.
Dataset parse_dataset(std::string_view text, const CsvOptions& opts = {});
Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& opts = {});

/// Parses "v1,v2,..." (one value per feature) against a feature space.
Point parse_point(const FeatureSpace& space, const std::vector<std::string>& fields);

struct ForestOptions {
    std::size_t trees = 25;
    std::size_t max_depth = 4;
    std::uint64_t seed = 1;
    /// Features tried per split; ceil(sqrt(m)) when unset.
    std::optional<std::size_t> max_features;
};

/// Bagged CART-style trees: bootstrap rows, Gini splits over a random
/// feature subset, midpoint thresholds between consecutive distinct values,
/// equality tests for categorical features. Deterministic for a seed.
/// Throws ValidationError for empty, one-row or single-class data.
Model train_forest(const Dataset& data, const ForestOptions& opts = {});

/// Fraction of rows predicted correctly.
double accuracy(const Model& m, const Dataset& data);

} // namespace xinflate
