#pragma once

#include "xinflate/inflate.hpp"

#include <optional>
#include <span>
#include <vector>

namespace xinflate {

struct ExplanationSets {
    std::vector<InflatedExplanation> iaxps;
    std::vector<InflatedExplanation> icxps;
    bool complete = false;
};

/// Some feature j in X and Y with E_j and G_j disjoint (the smallest such
/// index), or nullopt. Throws ValidationError when the arguments are not an
/// abductive and a contrastive explanation, or their sets have different
/// kinds on a shared feature.
std::optional<FeatureIndex> check_hits(const InflatedExplanation& iaxp, const InflatedExplanation& icxp);
/// Also checks that both explanations belong to `p`: sets inside the
/// domains, v_j in every E_j and outside every G_j.
std::optional<FeatureIndex> check_hits(const ExplanationProblem& p, const InflatedExplanation& iaxp,
                                       const InflatedExplanation& icxp);

/// A construction whose candidate failed validation.
class ConstructionError : public ValidationError {
public:
    ConstructionError(const std::string& what, InflatedExplanation candidate)
        : ValidationError(what), candidate_(std::move(candidate))
    {
    }
    const InflatedExplanation& candidate() const noexcept { return candidate_; }

private:
    InflatedExplanation candidate_;
};

/// Y = image of theta, G_j = intersection of D_j \ E_j over the iAXps
/// mapped to j. The candidate must admit a counterexample; features whose
/// removal keeps one are then dropped (pinned to the instance).
/// theta[i] selects a feature of iaxps[i].
InflatedExplanation icxp_from_iaxps(const ExplanationProblem& p, const std::vector<InflatedExplanation>& iaxps,
                                    std::span<const FeatureIndex> theta);

/// X = image of phi, E_j = intersection of D_j \ G_j over the iCXps mapped
/// to j. The candidate must be sufficient; every E_j is then grown back to
/// a maximal set with grow_set.
InflatedExplanation iaxp_from_icxps(const ExplanationProblem& p, const std::vector<InflatedExplanation>& icxps,
                                    std::span<const FeatureIndex> phi, const InflationConfig& cfg = {});

struct ConstructionFailure {
    std::vector<FeatureIndex> selection;
    InflatedExplanation candidate;
    std::string reason;
};

struct SelectionResult {
    /// Valid constructions whose feature sets are subset-minimal among all
    /// valid ones, deduplicated, in selection order.
    std::vector<InflatedExplanation> minimal;
    std::vector<ConstructionFailure> failures;
};

/// Runs icxp_from_iaxps over every selection theta.
SelectionResult icxps_by_selection(const ExplanationProblem& p, const std::vector<InflatedExplanation>& iaxps,
                                   std::uint64_t max_selections = 1U << 16);
/// Runs iaxp_from_icxps over every selection phi.
SelectionResult iaxps_by_selection(const ExplanationProblem& p, const std::vector<InflatedExplanation>& icxps,
                                   const InflationConfig& cfg = {}, std::uint64_t max_selections = 1U << 16);

/// Every AXp inflated and every CXp shrunk.
ExplanationSets enumerate_inflated(const ExplanationProblem& p, const InflationConfig& cfg = {},
                                   const EnumerationLimits& limits = {});

/// For tree models, decision lists and categorical features: every strong
/// contrastive explanation over a CXp whose sets are single values or
/// single cells. Together they describe all counterexamples of every CXp.
std::vector<InflatedExplanation> atomic_icxps(const ExplanationProblem& p, const std::vector<FeatureSet>& cxps,
                                              std::uint64_t max_candidates = 1U << 20);

/// The weak contrastive condition: with x_j in E_j (from `iaxp`) for j in
/// X \ Y and every other feature free, some point changes the class.
bool holds_plain_icxp(const ExplanationProblem& p, const InflatedExplanation& iaxp, const FeatureSet& y);

struct HitViolation {
    std::size_t iaxp_index = 0;
    std::size_t icxp_index = 0;
};

/// Pairs of `sets` for which check_hits finds no feature.
std::vector<HitViolation> hit_violations(const ExplanationProblem& p, const ExplanationSets& sets);

} // namespace xinflate
