#pragma once

#include "xinflate/domain.hpp"
#include "xinflate/value_set.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace xinflate {

/// Zero-based feature position. User-facing output is one-based.
using FeatureIndex = std::size_t;
/// Position of a class in the model's class list.
using ClassIndex = std::size_t;

/// Sorted, duplicate-free set of feature indices.
using FeatureSet = std::vector<FeatureIndex>;

FeatureSet make_feature_set(std::vector<FeatureIndex> features);
bool contains(const FeatureSet& s, FeatureIndex j);
bool is_subset(const FeatureSet& a, const FeatureSet& b);
std::string to_string(const FeatureSet& s); // one-based, "{1,2}"

struct Feature {
    std::string name;
    Domain domain;
};

class FeatureSpace {
public:
    FeatureSpace() = default;
    explicit FeatureSpace(std::vector<Feature> features);

    std::size_t size() const noexcept { return features_.size(); }
    const Feature& operator[](FeatureIndex j) const { return features_.at(j); }
    const Domain& domain(FeatureIndex j) const { return features_.at(j).domain; }
    const std::vector<Feature>& features() const noexcept { return features_; }
    /// Throws ValidationError for unknown names.
    FeatureIndex index_of(std::string_view name) const;

private:
    std::vector<Feature> features_;
};

using Point = std::vector<Value>;

/// Throws ValidationError on dimension mismatch or out-of-domain values.
void check_point(const FeatureSpace& space, const Point& p);

struct Instance {
    Point point;
    ClassIndex class_id = 0;
};

enum class ExplanationKind { abductive, contrastive };

/// One membership probe made while inflating or shrinking: the candidate
/// value, cell or interval for feature `feature`, and the oracle verdict.
struct Probe {
    FeatureIndex feature = 0;
    ValueSet candidate;
    /// What the probe adds (or removes, when shrinking): one value, one
    /// cell, or for interval bound moves the candidate interval itself.
    ValueSet step;
    bool accepted = false;
};

/// Feature set plus per-feature value sets. Abductive: every point with
/// x_j in sets[j] for j in features is classified as the instance class,
/// and v_j is in sets[j]. Contrastive: with the other features pinned to
/// the instance, some point with x_j in sets[j] changes the class, and v_j
/// is not in sets[j].
struct InflatedExplanation {
    ExplanationKind kind = ExplanationKind::abductive;
    FeatureSet features;
    std::map<FeatureIndex, ValueSet> sets;
    std::vector<FeatureIndex> probe_order;
    Rational delta = 0;
    std::vector<Probe> probes;

    /// Accepted probes for feature j: values, cells or bound moves added.
    std::size_t added(FeatureIndex j) const;
    std::size_t total_added() const;
    std::size_t probe_count(FeatureIndex j) const;
};

} // namespace xinflate
