#include "doctest.h"

#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "xinflate/discretization.hpp"
#include "xinflate/error.hpp"
#include "xinflate/explain.hpp"
#include "xinflate/inflate.hpp"
#include "xinflate/render.hpp"

#include <algorithm>

using namespace xinflate;
using namespace xinflate::testing;

namespace {

Rational r(const char* s) { return parse_rational(s); }

InflationConfig with_delta(const char* d)
{
    InflationConfig cfg;
    cfg.delta = r(d);
    return cfg;
}

std::vector<std::pair<std::string, bool>> trace(const ExplanationProblem& p, const InflatedExplanation& x)
{
    std::vector<std::pair<std::string, bool>> out;
    for (const auto& pr : x.probes) out.emplace_back(render_step(p.space().domain(pr.feature), pr.step), pr.accepted);
    return out;
}

Model one_feature_tree(DecisionTree t)
{
    FeatureSpace space({{"x", Domain::ordinal(0, 10)}, {"y", Domain::ordinal(0, 10)}});
    return Model{space, {"A", "B"}, std::move(t)};
}

// Every value or cell of D_j outside E_j, as single-piece sets.
std::vector<ValueSet> outside_pieces(const ExplanationProblem& p, FeatureIndex j, const ValueSet& e)
{
    const Domain& d = p.space().domain(j);
    std::vector<ValueSet> out;
    if (d.is_categorical()) {
        for (std::uint32_t l = 0; l < d.label_count(); ++l)
            if (!e.contains(Value{LabelId{l}})) out.push_back(ValueSet::labels({l}));
        return out;
    }
    const auto* cells = p.oracle().discretization();
    for (std::uint32_t k = 0; k < cells->cell_count(j); ++k) {
        const ValueSet cell(cells->cell(j, k));
        const auto rest = complement(e, d);
        if (!rest) continue;
        if (auto piece = cell.intersect(*rest); piece && piece->inhabited(d)) out.push_back(*piece);
    }
    return out;
}

} // namespace

TEST_CASE("DL1 inflation reproduces the printed rule and probes")
{
    const auto p = problem(dl1(), labels({0, 0}));
    const std::vector<FeatureIndex> order{0, 1};
    const auto x = inflate_axp(p, {0, 1}, InflationConfig{});
    CHECK(x.sets.at(0) == ValueSet::labels({0, 2}));
    CHECK(x.sets.at(1) == ValueSet::labels({0, 1, 2, 4}));
    CHECK(x.kind == ExplanationKind::abductive);
    CHECK(x.delta == 0);
    using T = std::vector<std::pair<std::string, bool>>;
    CHECK(trace(p, x) == T{{"Adult", false}, {"Senior", true}, {"Blue", true}, {"Green", true},
                           {"Silver", false}, {"Black", true}, {"White", false}});
    CHECK(render_rule(p.model(), x, p.class_id()) == "IF A∈{Junior,Senior} ∧ C∈{Red,Blue,Green,Black} THEN 1");
    // one validation call plus one per probe
    CHECK(p.calls() == 8);
}

TEST_CASE("M1 inflation")
{
    const auto p = problem(m1(), numbers({3, 5}));
    const auto x = inflate_axp(p, {0, 1}, with_delta("0.5"));
    CHECK(x.sets.at(0) == ValueSet(Interval::closed(0, r("6.5"))));
    CHECK(x.sets.at(1) == ValueSet(Interval::closed(0, 5)));
    CHECK(x.delta == r("0.5"));
    CHECK(render_rule(p.model(), x, p.class_id()) == "IF f1∈[0,6.5] ∧ f2∈[0,5] THEN B");
}

TEST_CASE("inflation preconditions")
{
    const auto p = problem(dl1(), labels({0, 0}));
    CHECK_THROWS_AS(inflate_axp(p, {}), ValidationError);
    CHECK_THROWS_AS(inflate_axp(p, {0}), ValidationError);
    InflationConfig bad;
    bad.delta = 0;
    CHECK_THROWS_AS(check_config(bad), ValidationError);
    bad.delta = r("0.2");
    bad.beta = r("0.3");
    CHECK_THROWS_AS(check_config(bad), ValidationError);
    bad.beta = r("0.2");
    CHECK_THROWS_AS(check_config(bad), ValidationError);
    bad.beta = r("1");
    CHECK_NOTHROW(check_config(bad));
    bad.strategy = SearchStrategy::binary;
    CHECK_THROWS_AS(check_config(bad), ValidationError);
}

TEST_CASE("inflating from the full feature set")
{
    const auto dl = problem(dl1(), labels({0, 0}));
    const auto x = inflate_from_full(dl);
    CHECK(x.features == FeatureSet{0, 1});
    CHECK(x.sets.at(1) == ValueSet::labels({0, 1, 2, 4}));

    const auto m = problem(m1(), numbers({3, 5}));
    CHECK(inflate_from_full(m, with_delta("0.5")).features == FeatureSet{0, 1});

    FeatureSpace space({{"x", Domain::ordinal(0, 10)}, {"y", Domain::ordinal(0, 10)}, {"z", Domain::ordinal(0, 10)}});
    const Model ignores{space, {"lo", "hi"}, MonotonicClassifier{{1, 1, 0}, {10}}};
    const auto z = inflate_from_full(problem(ignores, numbers({2, 3, 4})));
    CHECK_FALSE(contains(z.features, 2));
}

TEST_CASE("inflate_from_full keeps a weak AXp that need not be minimal")
{
    // class 1 iff x1 = a, or x1 = a' and x2 = b
    FeatureSpace space({{"x1", Domain::categorical({"a", "a'", "c"})}, {"x2", Domain::categorical({"b", "b'"})}});
    DecisionList dl;
    dl.rules.push_back(Rule{{Literal{0, ValueSet::labels({0})}}, 1});
    dl.rules.push_back(Rule{{Literal{0, ValueSet::labels({1})}, Literal{1, ValueSet::labels({0})}}, 1});
    dl.default_class = 0;
    const auto p = problem(Model{space, {"0", "1"}, dl}, labels({0, 0}));
    const auto x = inflate_from_full(p);
    CHECK(x.features == FeatureSet{0, 1});
    CHECK(x.sets.at(0) == ValueSet::labels({0, 1}));
    CHECK(x.sets.at(1) == ValueSet::labels({0}));
    CHECK(is_waxp(p, x.features));
    CHECK(is_waxp(p, {0}));
}

TEST_CASE("categorical inflation steps")
{
    const auto p = problem(dl1(), labels({0, 0}));
    CHECK(inflate_categorical(p, 1, ValueSet::labels({0}), {{0, ValueSet::labels({0, 2})}}) ==
          ValueSet::labels({0, 1, 2, 4}));
    CHECK(inflate_categorical(p, 0, ValueSet::labels({0}), {{1, ValueSet::labels({0})}}) == ValueSet::labels({0, 2}));
    const auto full = ValueSet::full(p.space().domain(0));
    const auto before = p.calls();
    CHECK(inflate_categorical(p, 0, full, {}) == full);
    CHECK(p.calls() == before);
}

TEST_CASE("ordinal inflation steps")
{
    const auto p = problem(m1(), numbers({3, 5}));
    const auto cfg = with_delta("0.5");
    CHECK(inflate_ordinal(p, 0, Interval::point(3), {{1, Interval::point(5)}}, cfg) ==
          ValueSet(Interval::closed(0, r("6.5"))));
    CHECK(inflate_ordinal(p, 1, Interval::point(5), {{0, Interval::closed(0, r("6.5"))}}, cfg) ==
          ValueSet(Interval::closed(0, 5)));
    CHECK(expand_sup(p, 0, Interval::point(3), {{1, Interval::point(5)}}, cfg) == r("6.5"));
    // unconstrained below: inflate_ordinal accepts the bound 0 directly,
    // expand_inf itself assumes the bound fails and stops one step short
    CHECK(expand_inf(p, 1, Interval::closed(5, 5), {{0, Interval::closed(0, r("6.5"))}}, cfg) == r("0.5"));
    const auto a = problem(m1(), numbers({7, 8}));
    CHECK(expand_inf(a, 1, Interval::point(8), {{0, Interval::point(7)}}, cfg) == 5);

    // weight 0 on y: the whole domain is accepted by the first probe
    FeatureSpace space({{"x", Domain::ordinal(0, 10)}, {"y", Domain::ordinal(0, 10)}});
    const auto q = problem(Model{space, {"lo", "hi"}, MonotonicClassifier{{1, 0}, {5}}}, numbers({2, 7}));
    std::vector<Probe> log;
    CHECK(inflate_ordinal(q, 1, Interval::point(7), {{0, Interval::point(2)}}, cfg, &log) ==
          ValueSet(Interval::closed(0, 10)));
    CHECK(log.size() == 2);
}

TEST_CASE("grid searches stop before the class changes")
{
    // Q expands to 6.6 with delta 0.2 when 6.8 changes the class
    FeatureSpace one({{"Q", Domain::ordinal(0, 10)}, {"R", Domain::ordinal(0, 10)}});
    const auto q = problem(Model{one, {"lo", "hi"}, MonotonicClassifier{{1, 0}, {r("6.7")}}}, numbers({5, 1}));
    CHECK(expand_sup(q, 0, Interval::point(5), {}, with_delta("0.2")) == r("6.6"));

    // R cannot go below 7
    const auto rr = problem(Model{one, {"lo", "hi"}, MonotonicClassifier{{0, 1}, {7}}}, numbers({1, 8}));
    CHECK(expand_inf(rr, 1, Interval::point(8), {}, with_delta("0.5")) == 7);

    // a sup that is not grid aligned: 6.5 passes, 7 would exceed 6.7
    CHECK(expand_sup(q, 0, Interval::point(5), {}, with_delta("0.5")) == r("6.5"));

    // class B exactly on [3,7.5): the inf search mirrors the sup search
    const auto band = problem(one_feature_tree(DecisionTree::ordinal_split(
                                  0, 3, DecisionTree::leaf(0),
                                  DecisionTree::ordinal_split(0, r("7.5"), DecisionTree::leaf(1), DecisionTree::leaf(0)))),
                              numbers({5, 0}));
    const auto cfg = with_delta("0.5");
    const auto sup = expand_sup(band, 0, Interval::point(5), {}, cfg);
    const auto inf = expand_inf(band, 0, Interval::point(5), {}, cfg);
    CHECK(sup == 7);
    CHECK(5 - inf == sup - 5);
}

TEST_CASE("cell inflation for trees")
{
    const auto stump = problem(one_feature_tree(DecisionTree::ordinal_split(0, 5, DecisionTree::leaf(1), DecisionTree::leaf(0))),
                               numbers({2, 4}));
    CHECK(inflate_ordinal_tree(stump, 0, Interval::point(2), {{1, Interval::point(4)}}) ==
          ValueSet(Interval::left_closed(0, 5)));
    CHECK(inflate_ordinal_tree(stump, 1, Interval::point(4), {{0, Interval::point(2)}}) ==
          ValueSet(Interval::closed(0, 10)));

    // class A on [0,3) and [6,10], B in between
    const auto holes = problem(one_feature_tree(DecisionTree::ordinal_split(
                                   0, 3, DecisionTree::leaf(0),
                                   DecisionTree::ordinal_split(0, 6, DecisionTree::leaf(1), DecisionTree::leaf(0)))),
                               numbers({1, 0}));
    const auto e = inflate_ordinal_tree(holes, 0, Interval::point(1), {});
    CHECK(e == ValueSet(IntervalUnion({Interval::left_closed(0, 3), Interval::closed(6, 10)})));

    const auto x = inflate_axp(holes, find_axp(holes));
    CHECK(x.delta == 0);
    CHECK(x.sets.at(0) == e);
}

TEST_CASE("strong contrastive shrinking")
{
    const auto p = problem(dl1(), labels({0, 0}));
    const auto a = shrink_cxp(p, {0});
    CHECK(a.kind == ExplanationKind::contrastive);
    CHECK(a.sets.at(0) == ValueSet::labels({1}));
    const std::vector<FeatureIndex> order{0, 1};
    const auto c = shrink_cxp(p, {1}, order);
    CHECK((c.sets.at(1) == ValueSet::labels({3}) || c.sets.at(1) == ValueSet::labels({5})));
    CHECK_THROWS_AS(shrink_cxp(p, {}), ValidationError);

    // freeing only C of (Junior,Red) under a model that ignores C
    FeatureSpace space({{"A", Domain::categorical({"Junior", "Adult"})}, {"C", Domain::categorical({"Red", "Blue"})}});
    DecisionList dl;
    dl.rules.push_back(Rule{{Literal{0, ValueSet::labels({1})}}, 0});
    dl.default_class = 1;
    const auto q = problem(Model{space, {"0", "1"}, dl}, labels({0, 0}));
    CHECK_THROWS_AS(shrink_cxp(q, {1}), ValidationError);
}

TEST_CASE("property: iAXps are sound, anchored and maximal")
{
    Rng rng(2024);
    for (auto kind : {ModelKind::decision_list, ModelKind::tree, ModelKind::forest, ModelKind::monotone}) {
        for (int round = 0; round < 40; ++round) {
            auto rp = random_problem(rng, kind, 4);
            const auto& p = rp.problem;
            const auto& m = p.model();
            InflationConfig cfg;
            cfg.delta = Rational(1, 2);
            const auto x = inflate_axp(p, find_axp(p), cfg);
            REQUIRE(!x.features.empty());
            CHECK(brute_sufficient(m, x.sets, p.class_id()));
            for (auto j : x.features) {
                const Domain& d = p.space().domain(j);
                const auto& e = x.sets.at(j);
                CHECK(e.contains(p.value(j)));
                if (kind == ModelKind::monotone) {
                    REQUIRE(e.piece_count() == 1);
                    const auto iv = e.intervals().parts().front();
                    const auto& o = d.ordinal();
                    const Rational step = d.is_integer() ? Rational(1) : cfg.delta;
                    auto probe = x.sets;
                    if (iv.hi < o.hi) {
                        probe[j] = Interval::closed(iv.lo, std::min<Rational>(iv.hi + step, o.hi));
                        CHECK_FALSE(brute_sufficient(m, probe, p.class_id()));
                    }
                    if (iv.lo > o.lo) {
                        probe[j] = Interval::closed(std::max<Rational>(iv.lo - step, o.lo), iv.hi);
                        CHECK_FALSE(brute_sufficient(m, probe, p.class_id()));
                    }
                    continue;
                }
                const auto extra = outside_pieces(p, j, e);
                for (const auto& u : extra) {
                    auto probe = x.sets;
                    probe[j] = e.unite(u);
                    CHECK_MESSAGE(!brute_sufficient(m, probe, p.class_id()), to_string(kind) << " feature " << j);
                }
                // set-wise maximality when few pieces are left out
                if (extra.size() <= 3) {
                    for (std::size_t mask = 1; mask < (1U << extra.size()); ++mask) {
                        auto grown = e;
                        for (std::size_t i = 0; i < extra.size(); ++i)
                            if (mask >> i & 1) grown = grown.unite(extra[i]);
                        auto probe = x.sets;
                        probe[j] = grown;
                        CHECK_FALSE(brute_sufficient(m, probe, p.class_id()));
                    }
                }
            }
        }
    }
}

TEST_CASE("property: linear, coarse-to-fine and binary searches agree")
{
    Rng rng(99);
    for (int round = 0; round < 100; ++round) {
        auto rp = random_problem(rng, ModelKind::monotone, 4);
        const auto& p = rp.problem;
        const auto axp = find_axp(p);
        InflationConfig lin;
        lin.delta = Rational(1, 4);
        auto coarse = lin;
        coarse.beta = Rational(3, 2);
        auto bin = lin;
        bin.strategy = SearchStrategy::binary;
        const auto a = inflate_axp(p, axp, lin);
        CHECK(inflate_axp(p, axp, coarse).sets == a.sets);
        CHECK(inflate_axp(p, axp, bin).sets == a.sets);
    }
}

TEST_CASE("property: strong iCXps are anchored, contrastive and minimal")
{
    Rng rng(7);
    for (auto kind : {ModelKind::decision_list, ModelKind::tree, ModelKind::forest, ModelKind::monotone}) {
        for (int round = 0; round < 40; ++round) {
            auto rp = random_problem(rng, kind, 4);
            const auto& p = rp.problem;
            const auto& m = p.model();
            const auto y = shrink_cxp(p, find_cxp(p));
            CHECK(brute_contrastive(m, p.instance(), y.sets));
            for (auto j : y.features) {
                const auto& g = y.sets.at(j);
                CHECK_FALSE(g.contains(p.value(j)));
                const auto pieces = shrink_pieces(p, j, g);
                CHECK(pieces.size() == 1);
            }
        }
    }
}
