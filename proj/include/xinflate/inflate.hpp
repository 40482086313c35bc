#pragma once

#include "xinflate/explain.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace xinflate {

enum class SearchStrategy { linear, binary };

std::string_view to_string(SearchStrategy s);
SearchStrategy parse_strategy(std::string_view name);

struct InflationConfig {
    /// Grid step for monotone ordinal features. Integer features step by
    /// max(1, ceil(delta)).
    Rational delta = Rational(1, 5);
    /// Coarse step for the linear strategy; a multiple of delta above it.
    std::optional<Rational> beta;
    SearchStrategy strategy = SearchStrategy::linear;
    /// Probe order over features. Empty means ascending index.
    std::vector<FeatureIndex> order;
    /// Check up front that the input really is a weak AXp (one oracle call).
    bool validate_input = true;
};

/// Throws ValidationError for delta <= 0, beta <= delta, beta not a
/// multiple of delta, or beta combined with binary search.
void check_config(const InflationConfig& cfg);

/// Widens every literal of a weak AXp, one feature at a time in cfg.order.
/// Each feature is inflated against the sets already widened for earlier
/// features and the instance values of later ones.
InflatedExplanation inflate_axp(const ExplanationProblem& p, const FeatureSet& axp, const InflationConfig& cfg = {});

/// Inflates every feature and drops those that reach their whole domain.
/// The survivors always form a weak AXp.
InflatedExplanation inflate_from_full(const ExplanationProblem& p, const InflationConfig& cfg = {});

/// Adds values of D_j \ e in domain order, keeping each one that preserves
/// sufficiency. `current` holds the sets of the other features.
ValueSet inflate_categorical(const ExplanationProblem& p, FeatureIndex j, ValueSet e, Assignment current,
                             std::vector<Probe>* log = nullptr);

/// Monotone ordinal inflation from e = [v_j, v_j]: probes the upper domain
/// bound, then searches the sup on the grid; then the same for the inf.
ValueSet inflate_ordinal(const ExplanationProblem& p, FeatureIndex j, const ValueSet& e, Assignment current,
                         const InflationConfig& cfg, std::vector<Probe>* log = nullptr);

/// Largest grid point above `interval.hi` that keeps [interval.lo, point]
/// sufficient, or interval.hi when none does. The domain bound is taken as
/// known to fail and is never probed.
Rational expand_sup(const ExplanationProblem& p, FeatureIndex j, const Interval& interval, Assignment current,
                    const InflationConfig& cfg, std::vector<Probe>* log = nullptr);
/// Mirror of expand_sup toward the lower bound.
Rational expand_inf(const ExplanationProblem& p, FeatureIndex j, const Interval& interval, Assignment current,
                    const InflationConfig& cfg, std::vector<Probe>* log = nullptr);

/// Cell inflation for an ordinal feature of a tree model or decision list:
/// starts from the cells meeting e and probes the other cells outward from
/// the instance's cell, ascending side first.
ValueSet inflate_ordinal_tree(const ExplanationProblem& p, FeatureIndex j, const ValueSet& e, Assignment current,
                              std::vector<Probe>* log = nullptr);

/// Grows an arbitrary sufficient set e for feature j until no single value,
/// cell or grid step can be added. Used to re-establish maximality.
ValueSet grow_set(const ExplanationProblem& p, FeatureIndex j, const ValueSet& e, Assignment current,
                  const InflationConfig& cfg, std::vector<Probe>* log = nullptr);

/// Strong contrastive explanation: starting from G_j = D_j minus v_j (minus
/// v_j's cell for tree models), removes values, cells or interval pieces in
/// order while a counterexample with x_j in G_j survives.
InflatedExplanation shrink_cxp(const ExplanationProblem& p, const FeatureSet& cxp,
                               std::span<const FeatureIndex> order = {});

/// Same shrinking from explicit starting sets, which must admit a
/// counterexample and exclude the instance values.
InflatedExplanation shrink_from(const ExplanationProblem& p, const std::map<FeatureIndex, ValueSet>& start,
                                std::span<const FeatureIndex> order = {});

/// Pieces shrink_from removes one at a time for feature j.
std::vector<ValueSet> shrink_pieces(const ExplanationProblem& p, FeatureIndex j, const ValueSet& g);

/// Assignment mapping the features of `sets` to their sets and pinning
/// every other feature to the instance value.
Assignment contrastive_box(const ExplanationProblem& p, const std::map<FeatureIndex, ValueSet>& sets);

} // namespace xinflate
