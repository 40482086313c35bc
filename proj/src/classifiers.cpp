#include "xinflate/classifiers.hpp"

#include "xinflate/error.hpp"

#include <algorithm>
#include <functional>

namespace xinflate {

// ---------------------------------------------------------------- monotonic

Rational MonotonicClassifier::score(std::span<const Value> x) const
{
    Rational s = 0;
    for (std::size_t j = 0; j < weights.size(); ++j)
        if (weights[j] != 0) s += weights[j] * std::get<Rational>(x[j]);
    return s;
}

ClassIndex MonotonicClassifier::class_of_score(const Rational& s) const
{
    return static_cast<ClassIndex>(std::upper_bound(thresholds.begin(), thresholds.end(), s) - thresholds.begin());
}

// ---------------------------------------------------------------- tree

DecisionTree DecisionTree::leaf(ClassIndex c)
{
    DecisionTree t;
    t.nodes_[0].leaf_class = c;
    return t;
}

namespace {

void append_subtree(std::vector<DecisionTree::Node>& out, const DecisionTree& sub)
{
    const auto offset = static_cast<std::int32_t>(out.size());
    for (auto n : sub.nodes()) {
        if (n.left >= 0) n.left += offset;
        if (n.right >= 0) n.right += offset;
        out.push_back(std::move(n));
    }
}

} // namespace

DecisionTree DecisionTree::ordinal_split(FeatureIndex j, Rational threshold, const DecisionTree& below,
                                         const DecisionTree& at_or_above)
{
    DecisionTree t;
    t.nodes_[0].kind = NodeKind::ordinal_split;
    t.nodes_[0].feature = j;
    t.nodes_[0].threshold = std::move(threshold);
    t.nodes_[0].left = 1;
    append_subtree(t.nodes_, below);
    t.nodes_[0].right = static_cast<std::int32_t>(t.nodes_.size());
    append_subtree(t.nodes_, at_or_above);
    return t;
}

DecisionTree DecisionTree::categorical_split(FeatureIndex j, LabelId label, const DecisionTree& other,
                                             const DecisionTree& equal)
{
    DecisionTree t;
    t.nodes_[0].kind = NodeKind::categorical_split;
    t.nodes_[0].feature = j;
    t.nodes_[0].label = label;
    t.nodes_[0].left = 1;
    append_subtree(t.nodes_, other);
    t.nodes_[0].right = static_cast<std::int32_t>(t.nodes_.size());
    append_subtree(t.nodes_, equal);
    return t;
}

DecisionTree DecisionTree::from_nodes(std::vector<Node> nodes)
{
    if (nodes.empty()) throw ValidationError("decision tree without nodes");
    DecisionTree t;
    t.nodes_ = std::move(nodes);
    return t;
}

ClassIndex DecisionTree::predict(std::span<const Value> x) const
{
    std::size_t n = 0;
    for (;;) {
        const Node& node = nodes_[n];
        switch (node.kind) {
        case NodeKind::leaf:
            return node.leaf_class;
        case NodeKind::ordinal_split:
            n = static_cast<std::size_t>(std::get<Rational>(x[node.feature]) >= node.threshold ? node.right : node.left);
            break;
        case NodeKind::categorical_split:
            n = static_cast<std::size_t>(std::get<LabelId>(x[node.feature]) == node.label ? node.right : node.left);
            break;
        }
    }
}

std::size_t DecisionTree::depth() const
{
    std::function<std::size_t(std::size_t)> rec = [&](std::size_t n) -> std::size_t {
        const Node& node = nodes_[n];
        if (node.kind == NodeKind::leaf) return 0;
        return 1 + std::max(rec(static_cast<std::size_t>(node.left)), rec(static_cast<std::size_t>(node.right)));
    };
    return rec(0);
}

// ---------------------------------------------------------------- prediction

ClassIndex majority(std::span<const std::uint32_t> votes)
{
    ClassIndex best = 0;
    for (ClassIndex k = 1; k < votes.size(); ++k)
        if (votes[k] > votes[best]) best = k;
    return best;
}

namespace {

ClassIndex predict_list(const DecisionList& dl, std::span<const Value> x)
{
    for (const auto& rule : dl.rules) {
        bool fires = true;
        for (const auto& lit : rule.conditions) {
            if (!lit.allowed.contains(x[lit.feature])) {
                fires = false;
                break;
            }
        }
        if (fires) return rule.class_id;
    }
    return dl.default_class;
}

} // namespace

ClassIndex predict(const Classifier& c, std::span<const Value> x, std::size_t class_count)
{
    struct Visitor {
        std::span<const Value> x;
        std::size_t class_count;
        ClassIndex operator()(const MonotonicClassifier& m) const { return m.class_of_score(m.score(x)); }
        ClassIndex operator()(const DecisionList& dl) const { return predict_list(dl, x); }
        ClassIndex operator()(const DecisionTree& t) const { return t.predict(x); }
        ClassIndex operator()(const TreeEnsemble& e) const
        {
            std::vector<std::uint32_t> votes(class_count, 0);
            for (const auto& t : e.trees) ++votes[t.predict(x)];
            return majority(votes);
        }
    };
    return std::visit(Visitor{x, class_count}, c);
}

ClassIndex predict(const Model& m, const Point& p)
{
    check_point(m.space, p);
    return predict(m.classifier, p, m.classes.size());
}

ClassIndex Model::class_index(std::string_view name) const
{
    auto it = std::find(classes.begin(), classes.end(), name);
    if (it == classes.end()) throw ValidationError("unknown class '" + std::string(name) + "'");
    return static_cast<ClassIndex>(it - classes.begin());
}

// ---------------------------------------------------------------- validation

namespace {

void check_class(const Model& m, ClassIndex c, const char* where)
{
    if (c >= m.classes.size()) throw ValidationError(std::string(where) + ": class index out of range");
}

void check_feature(const Model& m, FeatureIndex j, const char* where)
{
    if (j >= m.space.size()) throw ValidationError(std::string(where) + ": feature index out of range");
}

void validate_tree(const Model& m, const DecisionTree& t)
{
    const auto& nodes = t.nodes();
    std::vector<int> seen(nodes.size(), 0);
    std::function<void(std::int32_t)> walk = [&](std::int32_t n) {
        if (n < 0 || static_cast<std::size_t>(n) >= nodes.size())
            throw ValidationError("decision tree: child index out of range");
        if (seen[static_cast<std::size_t>(n)]++) throw ValidationError("decision tree: node shared or cyclic");
        const auto& node = nodes[static_cast<std::size_t>(n)];
        if (node.kind == DecisionTree::NodeKind::leaf) {
            check_class(m, node.leaf_class, "decision tree leaf");
            return;
        }
        check_feature(m, node.feature, "decision tree split");
        const Domain& d = m.space.domain(node.feature);
        if (node.kind == DecisionTree::NodeKind::ordinal_split) {
            if (!d.is_ordinal())
                throw ValidationError("threshold split on categorical feature '" + m.space[node.feature].name + "'");
            const auto& o = d.ordinal();
            if (!(o.lo < node.threshold && node.threshold < o.hi))
                throw ValidationError("split " + format_rational(node.threshold) + " on feature '" +
                                      m.space[node.feature].name + "' is not inside its domain");
        } else {
            if (!d.is_categorical())
                throw ValidationError("label split on ordinal feature '" + m.space[node.feature].name + "'");
            if (node.label.index >= d.label_count()) throw ValidationError("decision tree: label out of range");
        }
        walk(node.left);
        walk(node.right);
    };
    walk(0);
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw ValidationError("decision tree: unreachable nodes");
}

void validate_literal(const Model& m, const Literal& lit)
{
    check_feature(m, lit.feature, "decision list literal");
    const Domain& d = m.space.domain(lit.feature);
    check_within(lit.allowed, d);
    if (d.is_categorical()) return;
    const auto& o = d.ordinal();
    for (const auto& p : lit.allowed.intervals().parts()) {
        const bool lower_ok = !p.lo_open;
        const bool upper_ok = p.hi_open ? p.hi < o.hi : p.hi == o.hi;
        if (!lower_ok || !upper_ok || p.lo == p.hi)
            throw ValidationError("decision list literal on '" + m.space[lit.feature].name +
                                  "' must use intervals of the form [a,b) or [a,hi], got " + p.str());
    }
}

} // namespace

void validate_model(const Model& m)
{
    if (m.space.size() == 0) throw ValidationError("model without features");
    if (m.classes.size() < 2) throw ValidationError("model needs at least two classes");
    if (m.classes.size() > 64) throw ValidationError("at most 64 classes are supported");
    for (std::size_t i = 0; i < m.classes.size(); ++i)
        for (std::size_t k = i + 1; k < m.classes.size(); ++k)
            if (m.classes[i] == m.classes[k]) throw ValidationError("duplicate class '" + m.classes[i] + "'");

    struct Visitor {
        const Model& m;
        void operator()(const MonotonicClassifier& mc) const
        {
            if (mc.weights.size() != m.space.size())
                throw ValidationError("monotonic model: one weight per feature required");
            for (FeatureIndex j = 0; j < m.space.size(); ++j) {
                if (!m.space.domain(j).is_ordinal())
                    throw ValidationError("monotonic model: feature '" + m.space[j].name + "' is not ordinal");
                if (mc.weights[j] < 0) throw ValidationError("monotonic model: negative weight");
            }
            if (mc.thresholds.size() + 1 != m.classes.size())
                throw ValidationError("monotonic model: need exactly K-1 thresholds");
            for (std::size_t i = 1; i < mc.thresholds.size(); ++i)
                if (!(mc.thresholds[i - 1] < mc.thresholds[i]))
                    throw ValidationError("monotonic model: thresholds must be strictly increasing");
        }
        void operator()(const DecisionList& dl) const
        {
            for (const auto& r : dl.rules) {
                check_class(m, r.class_id, "decision list rule");
                for (const auto& lit : r.conditions) validate_literal(m, lit);
            }
            check_class(m, dl.default_class, "decision list default");
        }
        void operator()(const DecisionTree& t) const { validate_tree(m, t); }
        void operator()(const TreeEnsemble& e) const
        {
            if (e.trees.empty()) throw ValidationError("tree ensemble without trees");
            for (const auto& t : e.trees) validate_tree(m, t);
        }
    };
    std::visit(Visitor{m}, m.classifier);
}

} // namespace xinflate
