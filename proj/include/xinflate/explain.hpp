#pragma once

#include "xinflate/error.hpp"
#include "xinflate/oracle.hpp"

#include <span>
#include <vector>

namespace xinflate {

/// Every permutation check used by the explain and inflate entry points:
/// an empty order means ascending feature index. Throws ValidationError
/// for repeated or out-of-range indices, or when `required` is not covered.
std::vector<FeatureIndex> resolve_order(std::span<const FeatureIndex> order, std::size_t feature_count,
                                        const FeatureSet& required);

/// Fixing the features of X to the instance values forces the class.
bool is_waxp(const ExplanationProblem& p, const FeatureSet& x);
/// Freeing the features of Y (others fixed) can change the class.
bool is_wcxp(const ExplanationProblem& p, const FeatureSet& y);

/// Deletion-based extraction: walk `order`, free each feature, keep it free
/// while the rest still forces the class. Exactly |F| oracle calls.
FeatureSet find_axp(const ExplanationProblem& p, std::span<const FeatureIndex> order = {});

/// Deletion-based extraction of a CXp. Features are tried in reverse
/// order, so features early in `order` are the ones that stay.
FeatureSet find_cxp(const ExplanationProblem& p, std::span<const FeatureIndex> order = {});

struct Enumeration {
    std::vector<FeatureSet> axps;
    std::vector<FeatureSet> cxps;
    bool complete = true;
};

struct EnumerationLimits {
    std::size_t max_features = 20;
    std::uint64_t max_checks = 1U << 20;
};

/// Thrown when enumeration runs out of budget; carries what was found.
class BudgetExceeded : public Error {
public:
    BudgetExceeded(const std::string& what, Enumeration partial) : Error(what), partial_(std::move(partial)) {}
    const Enumeration& partial() const noexcept { return partial_; }

private:
    Enumeration partial_;
};

/// All AXps and all CXps, by subsets of increasing size with superset
/// pruning. Each family comes sorted by size, then lexicographically.
Enumeration enumerate_all(const ExplanationProblem& p, const EnumerationLimits& limits = {});

/// All subset-minimal hitting sets of `family`, sorted by size then
/// lexicographically. Throws ValidationError for an empty family or an
/// empty member.
std::vector<FeatureSet> minimal_hitting_sets(const std::vector<FeatureSet>& family);

} // namespace xinflate
