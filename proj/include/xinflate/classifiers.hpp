#pragma once

#include "xinflate/model_core.hpp"

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

namespace xinflate {

/// Nonnegative-weight linear score with ordered class thresholds:
/// class rank = number of thresholds <= sum_j w_j * x_j. Class rank i is
/// the model's class i, so the model is non-decreasing in every feature.
struct MonotonicClassifier {
    std::vector<Rational> weights;
    std::vector<Rational> thresholds;

    Rational score(std::span<const Value> x) const;
    ClassIndex class_of_score(const Rational& s) const;
};

/// x_j in allowed. For ordinal features every interval must be of the form
/// [a,b) or [a,hi], which keeps the boundaries expressible as x_j >= d
/// comparisons.
struct Literal {
    FeatureIndex feature = 0;
    ValueSet allowed;
};

struct Rule {
    std::vector<Literal> conditions;
    ClassIndex class_id = 0;
};

/// First matching rule fires; the default class applies otherwise.
struct DecisionList {
    std::vector<Rule> rules;
    ClassIndex default_class = 0;
};

/// Binary tree over a flat node array, root at index 0. Ordinal nodes send
/// x_j < threshold left and x_j >= threshold right; categorical nodes send
/// x_j != label left and x_j == label right.
class DecisionTree {
public:
    enum class NodeKind : std::uint8_t { leaf, ordinal_split, categorical_split };

    struct Node {
        NodeKind kind = NodeKind::leaf;
        FeatureIndex feature = 0;
        Rational threshold;
        LabelId label;
        ClassIndex leaf_class = 0;
        std::int32_t left = -1;
        std::int32_t right = -1;
    };

    DecisionTree() : nodes_{Node{}} {}

    static DecisionTree leaf(ClassIndex c);
    static DecisionTree ordinal_split(FeatureIndex j, Rational threshold, const DecisionTree& below,
                                      const DecisionTree& at_or_above);
    static DecisionTree categorical_split(FeatureIndex j, LabelId label, const DecisionTree& other,
                                          const DecisionTree& equal);
    /// Builds from a raw node array; structure is checked by validate_model.
    static DecisionTree from_nodes(std::vector<Node> nodes);

    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    ClassIndex predict(std::span<const Value> x) const;
    std::size_t depth() const;

private:
    std::vector<Node> nodes_;
};

/// Majority vote; ties go to the lowest class index.
struct TreeEnsemble {
    std::vector<DecisionTree> trees;
};

using Classifier = std::variant<MonotonicClassifier, DecisionList, DecisionTree, TreeEnsemble>;

struct Model {
    FeatureSpace space;
    std::vector<std::string> classes;
    Classifier classifier;

    bool is_monotonic() const { return std::holds_alternative<MonotonicClassifier>(classifier); }
    bool is_tree_based() const
    {
        return std::holds_alternative<DecisionTree>(classifier) || std::holds_alternative<TreeEnsemble>(classifier);
    }
    ClassIndex class_index(std::string_view name) const;
};

/// Throws ValidationError when the classifier does not fit the feature
/// space: bad feature indices, split values outside (lo,hi), non-monotone
/// parameters, categorical features under a monotonic model, and so on.
void validate_model(const Model& m);

ClassIndex predict(const Classifier& c, std::span<const Value> x, std::size_t class_count);
/// Checked prediction: validates the point against the feature space.
ClassIndex predict(const Model& m, const Point& p);

/// Vote count winner with lowest-index tie breaking.
ClassIndex majority(std::span<const std::uint32_t> votes);

} // namespace xinflate
