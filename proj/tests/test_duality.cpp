#include "doctest.h"

#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "xinflate/duality.hpp"
#include "xinflate/error.hpp"
#include "xinflate/explain.hpp"

#include <algorithm>

using namespace xinflate;
using namespace xinflate::testing;

namespace {

InflatedExplanation contrastive(std::map<FeatureIndex, ValueSet> sets)
{
    InflatedExplanation y;
    y.kind = ExplanationKind::contrastive;
    for (const auto& [j, s] : sets) y.features.push_back(j);
    y.sets = std::move(sets);
    return y;
}

InflatedExplanation dl1_iaxp(const ExplanationProblem& p) { return inflate_axp(p, {0, 1}); }

} // namespace

TEST_CASE("hits on the running example")
{
    const auto p = problem(dl1(), labels({0, 0}));
    const auto x = dl1_iaxp(p);
    CHECK(check_hits(p, x, contrastive({{0, ValueSet::labels({1})}})) == FeatureIndex{0});
    CHECK(check_hits(p, x, contrastive({{1, ValueSet::labels({3})}})) == FeatureIndex{1});

    InflatedExplanation only_a;
    only_a.features = {0};
    only_a.sets = {{0, ValueSet::labels({0})}};
    CHECK_FALSE(check_hits(only_a, contrastive({{1, ValueSet::labels({3})}})));

    // contrastive sets must avoid the instance values
    CHECK_THROWS_AS(check_hits(p, x, contrastive({{0, ValueSet::labels({0, 1})}})), ValidationError);
    CHECK_THROWS_AS(check_hits(p, contrastive({{0, ValueSet::labels({1})}}), x), ValidationError);
}

TEST_CASE("iCXps from the iAXp of the running example")
{
    const auto p = problem(dl1(), labels({0, 0}));
    const std::vector<InflatedExplanation> iaxps{dl1_iaxp(p)};
    const std::vector<FeatureIndex> pick_a{0}, pick_c{1};
    const auto a = icxp_from_iaxps(p, iaxps, pick_a);
    CHECK(a.features == FeatureSet{0});
    CHECK(a.sets.at(0) == ValueSet::labels({1}));
    const auto c = icxp_from_iaxps(p, iaxps, pick_c);
    CHECK(c.features == FeatureSet{1});
    CHECK(c.sets.at(1) == ValueSet::labels({3, 5}));
    CHECK(brute_contrastive(p.model(), p.instance(), c.sets));
    CHECK_THROWS_AS(icxp_from_iaxps(p, {}, {}), ValidationError);

    const auto all = icxps_by_selection(p, iaxps);
    CHECK(all.minimal.size() == 2);
    CHECK(all.failures.empty());
}

TEST_CASE("iAXps from the iCXps of the running example")
{
    const auto p = problem(dl1(), labels({0, 0}));
    const std::vector<InflatedExplanation> icxps{contrastive({{0, ValueSet::labels({1})}}),
                                                 contrastive({{1, ValueSet::labels({3})}}),
                                                 contrastive({{1, ValueSet::labels({5})}})};
    const std::vector<FeatureIndex> phi{0, 1, 1};
    const auto x = iaxp_from_icxps(p, icxps, phi);
    CHECK(x.features == FeatureSet{0, 1});
    CHECK(x.sets.at(0) == ValueSet::labels({0, 2}));
    CHECK(x.sets.at(1) == ValueSet::labels({0, 1, 2, 4}));

    const std::vector<InflatedExplanation> one{contrastive({{0, ValueSet::labels({1})}})};
    const std::vector<FeatureIndex> phi0{0};
    // a single iCXp on A: fixing A to {Junior,Senior} is not sufficient
    // under DL1, so the candidate is rejected with the set attached
    try {
        iaxp_from_icxps(p, one, phi0);
        FAIL("expected a construction error");
    } catch (const ConstructionError& e) {
        CHECK(e.candidate().features == FeatureSet{0});
        CHECK(e.candidate().sets.at(0) == ValueSet::labels({0, 2}));
    }
    CHECK(atomic_icxps(p, {{0}, {1}}).size() == 3);
}

TEST_CASE("single iCXp on a model with one relevant feature")
{
    FeatureSpace space({{"A", Domain::categorical({"a", "b", "c"})}, {"B", Domain::categorical({"p", "q"})}});
    DecisionList dl;
    dl.rules.push_back(Rule{{Literal{0, ValueSet::labels({1})}}, 0});
    dl.default_class = 1;
    const auto p = problem(Model{space, {"0", "1"}, dl}, labels({0, 0}));
    const std::vector<InflatedExplanation> one{contrastive({{0, ValueSet::labels({1})}})};
    const std::vector<FeatureIndex> phi{0};
    const auto x = iaxp_from_icxps(p, one, phi);
    CHECK(x.features == FeatureSet{0});
    CHECK(x.sets.at(0) == ValueSet::labels({0, 2}));
}

TEST_CASE("plain inflated CXps")
{
    const auto p = problem(dl1(), labels({0, 0}));
    const auto x = dl1_iaxp(p);
    CHECK(holds_plain_icxp(p, x, {0}));
    CHECK(holds_plain_icxp(p, x, {1}));
    CHECK_FALSE(holds_plain_icxp(p, x, {}));
}

TEST_CASE("property: inflated duality on random desk models")
{
    Rng rng(555);
    for (auto kind : {ModelKind::decision_list, ModelKind::tree, ModelKind::forest, ModelKind::monotone}) {
        for (int round = 0; round < 25; ++round) {
            auto rp = random_problem(rng, kind, 4);
            const auto& p = rp.problem;
            InflationConfig cfg;
            cfg.delta = Rational(1, 2);
            const auto sets = enumerate_inflated(p, cfg);
            const auto e = enumerate_all(p);
            std::vector<FeatureSet> a, c;
            for (const auto& x : sets.iaxps) a.push_back(x.features);
            for (const auto& y : sets.icxps) c.push_back(y.features);
            CHECK(a == e.axps);
            CHECK(c == e.cxps);
            CHECK(hit_violations(p, sets).empty());
            for (const auto& x : sets.iaxps) CHECK(brute_sufficient(p.model(), x.sets, p.class_id()));
            for (const auto& y : sets.icxps) CHECK(brute_contrastive(p.model(), p.instance(), y.sets));

            // constructions are either valid or reported
            const auto built = icxps_by_selection(p, sets.iaxps);
            for (const auto& y : built.minimal) CHECK(brute_contrastive(p.model(), p.instance(), y.sets));
            for (const auto& f : built.failures) CHECK_FALSE(f.reason.empty());
            if (p.oracle().discretization()) {
                const auto atoms = atomic_icxps(p, e.cxps);
                for (const auto& y : atoms) CHECK(brute_contrastive(p.model(), p.instance(), y.sets));
                const auto back = iaxps_by_selection(p, atoms, cfg);
                for (const auto& x : back.minimal) CHECK(brute_sufficient(p.model(), x.sets, p.class_id()));
            }
        }
    }
}

TEST_CASE("iCXps that miss counterexamples give an unsound iAXp candidate")
{
    // class 0 iff x2 = b and x3 = m; x1 is irrelevant
    FeatureSpace space({{"x1", Domain::categorical({"u", "v"})}, {"x2", Domain::categorical({"a", "b"})},
                        {"x3", Domain::categorical({"p", "m", "q"})}});
    DecisionList dl;
    dl.rules.push_back(Rule{{Literal{1, ValueSet::labels({1})}, Literal{2, ValueSet::labels({1})}}, 0});
    dl.default_class = 1;
    const auto p = problem(Model{space, {"0", "1"}, dl}, labels({0, 1, 1}));

    const auto sets = enumerate_inflated(p);
    REQUIRE(sets.icxps.size() == 2);
    // shrinking x3 drops p first and keeps q; p is a counterexample too
    CHECK(sets.icxps[1].sets.at(2) == ValueSet::labels({2}));

    const std::vector<FeatureIndex> phi{1, 2};
    try {
        iaxp_from_icxps(p, sets.icxps, phi);
        FAIL("expected a construction error");
    } catch (const ConstructionError& e) {
        CHECK(e.candidate().sets.at(2) == ValueSet::labels({0, 1}));
        CHECK_FALSE(brute_sufficient(p.model(), e.candidate().sets, p.class_id()));
    }
    const auto selected = iaxps_by_selection(p, sets.icxps);
    CHECK(selected.minimal.empty());
    CHECK(selected.failures.size() == 1);

    // the single-value iCXps describe every counterexample and recover the iAXp
    const auto atoms = atomic_icxps(p, {{1}, {2}});
    CHECK(atoms.size() == 3);
    const auto rebuilt = iaxps_by_selection(p, atoms);
    CHECK(rebuilt.failures.empty());
    REQUIRE(rebuilt.minimal.size() == 1);
    CHECK(rebuilt.minimal[0].sets == sets.iaxps[0].sets);
}
