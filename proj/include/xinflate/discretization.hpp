#pragma once

#include "xinflate/classifiers.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace xinflate {

/// Finite cell view of a tree model or decision list. Each ordinal feature
/// is cut at the sorted split values d_1 < ... < d_m harvested from the
/// classifier into [lo,d_1), [d_1,d_2), ..., [d_m,hi]; each categorical
/// feature has one cell per label. The classifier is constant on every
/// product of cells.
///
/// Integer features use ceil(d) as the effective split, since x >= d and
/// x >= ceil(d) agree on integers; this keeps every cell inhabited.
class Discretization {
public:
    struct FeatureCells {
        bool categorical = false;
        std::vector<Rational> splits;
        std::vector<Interval> cells; // ordinal only
        std::size_t label_count = 0; // categorical only
    };

    Discretization() = default;
    Discretization(const FeatureSpace& space, std::vector<FeatureCells> features);

    std::size_t feature_count() const noexcept { return features_.size(); }
    bool categorical(FeatureIndex j) const { return features_.at(j).categorical; }
    std::size_t cell_count(FeatureIndex j) const;
    const std::vector<Rational>& splits(FeatureIndex j) const { return features_.at(j).splits; }
    /// Interval of ordinal cell k.
    const Interval& cell(FeatureIndex j, std::uint32_t k) const { return features_.at(j).cells.at(k); }
    /// Total number of cells summed over features.
    std::size_t total_cells() const;

    std::uint32_t cell_of(FeatureIndex j, const Value& v) const;
    /// Index of the first cell whose values satisfy x_j >= d.
    std::uint32_t split_cell(FeatureIndex j, const Rational& d) const;

    /// Canonical evaluation point: midpoint of a continuous cell, lower
    /// bound of an integer cell, the label itself for categorical cells.
    Value representative(FeatureIndex j, std::uint32_t k) const;
    /// Some admissible value in cell k that also lies in `within` (when
    /// given); nullopt when the intersection holds no admissible value.
    std::optional<Value> member(FeatureIndex j, std::uint32_t k, const ValueSet* within) const;

    /// Cells holding at least one admissible value of `s`, ascending.
    std::vector<std::uint32_t> cells_meeting(FeatureIndex j, const ValueSet& s) const;
    /// Union of the given cells as a value set.
    ValueSet cells_to_set(FeatureIndex j, std::span<const std::uint32_t> cells) const;

private:
    const FeatureSpace* space_ = nullptr;
    std::vector<FeatureCells> features_;
};

/// Builds the cell view of a decision tree, tree ensemble or decision list.
/// Throws ValidationError for a monotonic model or a split value outside
/// the open domain (lo,hi).
Discretization discretize(const Model& model);

} // namespace xinflate
