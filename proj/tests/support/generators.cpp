#include "generators.hpp"

#include <algorithm>
#include <set>

namespace xinflate::testing {

namespace {

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

const std::vector<Rational>& continuous_grid()
{
    static const std::vector<Rational> g{Rational(3, 2), Rational(3), Rational(9, 2), Rational(6), Rational(15, 2),
                                         Rational(9)};
    return g;
}

const std::vector<Rational>& integer_grid()
{
    static const std::vector<Rational> g{Rational(1), Rational(2), Rational(5, 2), Rational(4), Rational(5)};
    return g;
}

} // namespace

FeatureSpace random_space(Rng& rng, std::size_t features, SpaceKind kind_of_space)
{
    std::vector<Feature> fs;
    for (std::size_t j = 0; j < features; ++j) {
        const std::string name = "x" + std::to_string(j + 1);
        const auto kind = kind_of_space == SpaceKind::ordinal       ? 1 + uniform(rng, 0, 1)
                          : kind_of_space == SpaceKind::categorical ? 0
                                                                    : uniform(rng, 0, 2);
        if (kind == 0) {
            std::vector<std::string> labels;
            for (std::size_t i = 0, n = uniform(rng, 2, 4); i < n; ++i) labels.push_back("v" + std::to_string(i));
            fs.push_back({name, Domain::categorical(std::move(labels))});
        } else if (kind == 1) {
            fs.push_back({name, Domain::ordinal(0, 10)});
        } else {
            fs.push_back({name, Domain::ordinal(0, 6, OrdinalKind::integer)});
        }
    }
    return FeatureSpace(std::move(fs));
}

Rational random_threshold(Rng& rng, const Domain& d)
{
    const auto& g = d.is_integer() ? integer_grid() : continuous_grid();
    return g[uniform(rng, 0, g.size() - 1)];
}

DecisionTree random_tree(Rng& rng, const FeatureSpace& space, std::size_t classes, std::size_t depth)
{
    if (depth == 0 || coin(rng, 0.15)) return DecisionTree::leaf(uniform(rng, 0, classes - 1));
    const FeatureIndex j = uniform(rng, 0, space.size() - 1);
    const Domain& d = space.domain(j);
    auto left = random_tree(rng, space, classes, depth - 1);
    auto right = random_tree(rng, space, classes, depth - 1);
    if (d.is_categorical())
        return DecisionTree::categorical_split(j, LabelId{static_cast<std::uint32_t>(uniform(rng, 0, d.label_count() - 1))},
                                               left, right);
    return DecisionTree::ordinal_split(j, random_threshold(rng, d), left, right);
}

Model random_tree_model(Rng& rng, std::size_t features, std::size_t depth, SpaceKind kind)
{
    auto space = random_space(rng, features, kind);
    auto t = random_tree(rng, space, 2, depth);
    return Model{space, {"c0", "c1"}, t};
}

Model random_forest(Rng& rng, std::size_t features, std::size_t trees, std::size_t depth, SpaceKind kind)
{
    auto space = random_space(rng, features, kind);
    const std::size_t classes = coin(rng, 0.8) ? 2 : 3;
    TreeEnsemble e;
    for (std::size_t t = 0; t < trees; ++t) e.trees.push_back(random_tree(rng, space, classes, depth));
    std::vector<std::string> names;
    for (std::size_t k = 0; k < classes; ++k) names.push_back("c" + std::to_string(k));
    return Model{space, names, e};
}

Model random_decision_list(Rng& rng, std::size_t features, std::size_t rules, SpaceKind kind)
{
    auto space = random_space(rng, features, kind);
    const std::size_t classes = coin(rng, 0.8) ? 2 : 3;
    DecisionList dl;
    for (std::size_t r = 0; r < rules; ++r) {
        Rule rule;
        rule.class_id = uniform(rng, 0, classes - 1);
        std::vector<FeatureIndex> fs(space.size());
        for (std::size_t j = 0; j < fs.size(); ++j) fs[j] = j;
        std::shuffle(fs.begin(), fs.end(), rng);
        fs.resize(uniform(rng, 1, std::min<std::size_t>(2, fs.size())));
        for (auto j : fs) {
            const Domain& d = space.domain(j);
            if (d.is_categorical()) {
                std::vector<LabelId> ls;
                for (std::uint32_t l = 0; l < d.label_count(); ++l)
                    if (coin(rng)) ls.push_back(LabelId{l});
                if (ls.empty() || ls.size() == d.label_count()) ls = {LabelId{static_cast<std::uint32_t>(uniform(rng, 0, d.label_count() - 1))}};
                rule.conditions.push_back({j, ValueSet(CatSet(ls))});
            } else {
                const auto& o = d.ordinal();
                Rational a = coin(rng, 0.3) ? o.lo : random_threshold(rng, d);
                Rational b = random_threshold(rng, d);
                if (a > b) std::swap(a, b);
                Interval i = (a == b || coin(rng, 0.3)) ? Interval::closed(a, o.hi) : Interval::left_closed(a, b);
                if (i.lo == o.lo && i.hi == o.hi) i = Interval::closed(b, o.hi);
                rule.conditions.push_back({j, ValueSet(i)});
            }
        }
        dl.rules.push_back(std::move(rule));
    }
    dl.default_class = uniform(rng, 0, classes - 1);
    std::vector<std::string> names;
    for (std::size_t k = 0; k < classes; ++k) names.push_back("c" + std::to_string(k));
    return Model{space, names, dl};
}

Model random_monotone(Rng& rng, std::size_t features)
{
    auto space = random_space(rng, features, SpaceKind::ordinal);
    static const std::vector<Rational> weights{Rational(0), Rational(1, 2), Rational(1), Rational(2), Rational(3)};
    MonotonicClassifier mc;
    Rational top = 0;
    for (std::size_t j = 0; j < features; ++j) {
        mc.weights.push_back(weights[uniform(rng, j == 0 ? 1 : 0, weights.size() - 1)]);
        top += mc.weights.back() * space.domain(j).ordinal().hi;
    }
    const std::size_t classes = coin(rng, 0.7) ? 2 : 3;
    // thresholds on a 1/4 grid strictly inside (0, top)
    std::set<Rational> ts;
    while (ts.size() < classes - 1) {
        const auto steps = static_cast<std::size_t>(top * 4);
        ts.insert(Rational(static_cast<long long>(uniform(rng, 1, steps - 1)), 4));
    }
    mc.thresholds.assign(ts.begin(), ts.end());
    std::vector<std::string> names;
    for (std::size_t k = 0; k < classes; ++k) names.push_back("c" + std::to_string(k));
    return Model{space, names, mc};
}

Point random_point(Rng& rng, const FeatureSpace& space)
{
    Point p;
    for (const auto& f : space.features()) {
        const Domain& d = f.domain;
        if (d.is_categorical()) {
            p.emplace_back(LabelId{static_cast<std::uint32_t>(uniform(rng, 0, d.label_count() - 1))});
        } else if (d.is_integer()) {
            const auto hi = static_cast<std::size_t>(boost::multiprecision::numerator(d.ordinal().hi));
            p.emplace_back(Rational(static_cast<long long>(uniform(rng, 0, hi))));
        } else {
            p.emplace_back(Rational(static_cast<long long>(uniform(rng, 0, 20)), 2));
        }
    }
    return p;
}

const char* to_string(ModelKind k)
{
    switch (k) {
    case ModelKind::decision_list: return "decision list";
    case ModelKind::tree: return "tree";
    case ModelKind::forest: return "forest";
    case ModelKind::monotone: return "monotone";
    }
    return "?";
}

RandomProblem random_problem(Rng& rng, ModelKind kind, std::size_t max_features, OracleBackend backend,
                             SpaceKind space)
{
    while (true) {
        const std::size_t m = uniform(rng, 2, max_features);
        Model model;
        switch (kind) {
        case ModelKind::decision_list: model = random_decision_list(rng, m, uniform(rng, 1, 6), space); break;
        case ModelKind::tree: model = random_tree_model(rng, m, uniform(rng, 1, 4), space); break;
        case ModelKind::forest: model = random_forest(rng, m, uniform(rng, 1, 15), uniform(rng, 1, 3), space); break;
        case ModelKind::monotone: model = random_monotone(rng, m); break;
        }
        auto oracle = Oracle::create(std::move(model), backend);
        if (oracle->is_constant()) continue;
        auto v = random_point(rng, oracle->space());
        auto p = ExplanationProblem::create(oracle, std::move(v));
        return RandomProblem{oracle, std::move(p)};
    }
}

ValueSet random_set(Rng& rng, const Domain& d, const Value* around)
{
    if (d.is_categorical()) {
        std::vector<LabelId> ls;
        for (std::uint32_t l = 0; l < d.label_count(); ++l)
            if (coin(rng)) ls.push_back(LabelId{l});
        if (around) ls.push_back(std::get<LabelId>(*around));
        if (ls.empty()) ls.push_back(LabelId{static_cast<std::uint32_t>(uniform(rng, 0, d.label_count() - 1))});
        return CatSet(ls);
    }
    const auto& o = d.ordinal();
    const bool integer = d.is_integer();
    auto draw = [&]() {
        if (integer) return Rational(static_cast<long long>(uniform(rng, 0, 6)));
        return Rational(static_cast<long long>(uniform(rng, 0, 40)), 4);
    };
    std::vector<Interval> parts;
    for (std::size_t i = 0, n = uniform(rng, 1, 2); i < n; ++i) {
        Rational a = draw(), b = draw();
        if (a > b) std::swap(a, b);
        Interval iv{a, b, !integer && a < b && coin(rng, 0.25), !integer && a < b && coin(rng, 0.25)};
        if (a == o.lo) iv.lo_open = false;
        if (b == o.hi) iv.hi_open = false;
        if (!iv.empty()) parts.push_back(iv);
    }
    if (around) parts.push_back(Interval::point(std::get<Rational>(*around)));
    if (parts.empty()) parts.push_back(Interval::closed(o.lo, o.hi));
    return IntervalUnion(parts);
}

} // namespace xinflate::testing
