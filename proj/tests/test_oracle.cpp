#include "doctest.h"

#include "support/brute.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "xinflate/error.hpp"
#include "xinflate/kernels.hpp"

using namespace xinflate;
using namespace xinflate::testing;

namespace {

Rational r(const char* s) { return parse_rational(s); }

ValueSet span(const char* lo, const char* hi) { return Interval::closed(r(lo), r(hi)); }

} // namespace

TEST_CASE("sufficiency on the running examples")
{
    const auto dl = problem(dl1(), labels({0, 0}));
    CHECK(holds_sufficiency(dl, {{0, ValueSet::labels({0, 2})}, {1, ValueSet::labels({0, 1, 2, 4})}}));
    CHECK_FALSE(holds_sufficiency(dl, {{0, ValueSet::labels({0, 1})}, {1, ValueSet::labels({0})}}));
    CHECK(dl.calls() == 2);

    const auto m = problem(m1(), numbers({3, 5}));
    CHECK(holds_sufficiency(m, {{0, span("0", "6.5")}, {1, span("0", "5")}}));
    CHECK_THROWS_AS(holds_sufficiency(m, {{0, ValueSet(IntervalUnion{})}}), ValidationError);
    CHECK_THROWS_AS(holds_sufficiency(m, {{0, span("0", "11")}}), ValidationError);
}

TEST_CASE("counterexamples on the running examples")
{
    const auto dl = problem(dl1(), labels({0, 0}));
    CHECK(exists_counterexample(dl, {{1, ValueSet::labels({0})}}, {{0, ValueSet::full(dl.space().domain(0))}}));
    CHECK_FALSE(exists_counterexample(dl, {{0, ValueSet::labels({0})}}, {{1, ValueSet::labels({1, 2})}}));
    CHECK_FALSE(exists_counterexample(dl, dl.pinned({0, 1}), {}));
    CHECK_THROWS_AS(exists_counterexample(dl, {{0, ValueSet::labels({0})}}, {{0, ValueSet::labels({1})}}),
                    ValidationError);
    CHECK_THROWS_AS(exists_counterexample(dl, {{0, ValueSet::labels({0})}}, {}), ValidationError);
    CHECK_THROWS_AS(exists_counterexample(dl, {{0, ValueSet::labels({0, 1})}}, {{1, ValueSet::labels({0})}}),
                    ValidationError);
    CHECK(dl.calls() == 3);
}

TEST_CASE("monotone box check")
{
    const auto m = m1();
    const auto& mc = std::get<MonotonicClassifier>(m.classifier);
    CHECK(monotone_box_check(mc, m.space, {{0, span("0", "6.5")}, {1, span("0", "5")}}, 0));
    CHECK_FALSE(monotone_box_check(mc, m.space, {{0, span("0", "7")}, {1, span("0", "5")}}, 0));
    CHECK(monotone_box_check(mc, m.space, {{0, span("3", "3")}, {1, span("5", "5")}}, 0));
    // open upper end: f1 < 7 keeps the score below 12
    CHECK(monotone_box_check(mc, m.space, {{0, ValueSet(Interval{0, 7, false, true})}, {1, span("0", "5")}}, 0));
    CHECK_THROWS_AS(monotone_box_check(mc, m.space,
                                       {{0, ValueSet(IntervalUnion({Interval::closed(0, 1), Interval::closed(2, 3)}))}},
                                       0),
                    ValidationError);
}

TEST_CASE("witnesses are real counterexamples")
{
    const auto m = problem(m1(), numbers({3, 5}));
    const auto w = find_counterexample(m, {{0, ValueSet(Interval{0, 7, false, true})}, {1, span("0", "6")}});
    REQUIRE(w);
    CHECK(predict(m.model(), *w) != 0);
    CHECK(std::get<Rational>((*w)[0]) < 7);
}

TEST_CASE("property: every backend agrees with brute force")
{
    Rng rng(1234);
    int compared = 0;
    for (auto kind : {ModelKind::decision_list, ModelKind::tree, ModelKind::forest, ModelKind::monotone}) {
        for (int round = 0; round < 60; ++round) {
            auto rp = random_problem(rng, kind, 5);
            const auto& m = rp.oracle->model();
            if (rp.oracle->discretization() && rp.oracle->discretization()->total_cells() > 200) continue;
            std::vector<std::shared_ptr<const Oracle>> oracles{rp.oracle};
            if (!m.is_monotonic()) {
                auto shared = std::make_shared<const Model>(m);
                oracles.push_back(std::make_shared<const Oracle>(shared, OracleBackend::exhaustive_serial));
                oracles.push_back(std::make_shared<const Oracle>(shared, OracleBackend::exhaustive_parallel));
            }
            for (int k = 0; k < 5; ++k) {
                Assignment a;
                for (std::size_t j = 0; j < m.space.size(); ++j) {
                    if (rng() % 3 == 0) continue;
                    auto s = random_set(rng, m.space.domain(j));
                    // monotone corner checks need single intervals
                    if (m.is_monotonic() && s.piece_count() > 1) s = ValueSet(s.intervals().parts().front());
                    if (!s.inhabited(m.space.domain(j))) continue;
                    a.emplace(j, s);
                }
                for (ClassIndex c = 0; c < m.classes.size(); ++c) {
                    const bool expect = brute_sufficient(m, a, c);
                    for (const auto& o : oracles) {
                        const auto w = o->find_counterexample(a, c);
                        CHECK_MESSAGE(!w.has_value() == expect, to_string(kind) << " backend " << to_string(o->backend()));
                        if (w) {
                            CHECK(predict(m, *w) != c);
                            for (const auto& [j, s] : a) CHECK(s.contains((*w)[j]));
                        }
                    }
                    ++compared;
                }
            }
        }
    }
    CHECK(compared >= 1000);
}

TEST_CASE("property: sufficiency is antitone and counterexamples monotone in the sets")
{
    Rng rng(77);
    for (auto kind : {ModelKind::decision_list, ModelKind::forest, ModelKind::monotone}) {
        for (int round = 0; round < 60; ++round) {
            auto rp = random_problem(rng, kind, 4);
            const auto& p = rp.problem;
            const auto& space = p.space();
            Assignment small, big;
            for (std::size_t j = 0; j < space.size(); ++j) {
                auto s = random_set(rng, space.domain(j), &p.value(j));
                if (kind == ModelKind::monotone) {
                    const auto& parts = s.intervals().parts();
                    s = ValueSet(Interval::closed(parts.front().lo, parts.back().hi));
                }
                auto t = s;
                if (space.domain(j).is_categorical()) t = t.unite(random_set(rng, space.domain(j)));
                else if (kind == ModelKind::monotone) {
                    const auto& iv = s.intervals().parts().front();
                    t = ValueSet(Interval::closed(iv.lo / 2, (iv.hi + space.domain(j).ordinal().hi) / 2));
                    if (space.domain(j).is_integer()) t = ValueSet(Interval::closed(floor_rat(iv.lo / 2), ceil_rat((iv.hi + space.domain(j).ordinal().hi) / 2)));
                } else {
                    t = t.unite(random_set(rng, space.domain(j)));
                }
                small.emplace(j, s);
                big.emplace(j, t);
            }
            if (holds_sufficiency(p, big)) CHECK(holds_sufficiency(p, small));

            // contrastive form: one feature pinned, the rest roaming
            Assignment fixed{{0, p.pinned({0}).at(0)}};
            Assignment roam_small, roam_big;
            for (std::size_t j = 1; j < space.size(); ++j) {
                roam_small.emplace(j, small.at(j));
                roam_big.emplace(j, big.at(j));
            }
            if (exists_counterexample(p, fixed, roam_small)) CHECK(exists_counterexample(p, fixed, roam_big));
        }
    }
}

TEST_CASE("exhaustive kernels scan in the same order")
{
    Rng rng(8);
    for (int round = 0; round < 40; ++round) {
        auto rp = random_problem(rng, ModelKind::forest, 5);
        const auto* cm = rp.oracle->cell_model();
        REQUIRE(cm);
        const auto box = rp.oracle->to_cells({});
        for (ClassIndex c = 0; c < rp.oracle->model().classes.size(); ++c) {
            const auto a = exhaustive_serial(*cm, box, c);
            for (int threads : {1, 2, 4}) CHECK(exhaustive_parallel(*cm, box, c, threads) == a);
        }
    }
}

TEST_CASE("misclassified instances are refused")
{
    auto oracle = Oracle::create(dl1());
    CHECK_THROWS_AS(ExplanationProblem::create(oracle, labels({1, 0}), 1), ValidationError);
    CHECK_THROWS_AS(ExplanationProblem::create(oracle, labels({0}), std::nullopt), ValidationError);
    CHECK_NOTHROW(ExplanationProblem::create(oracle, labels({1, 0}), 0));
}
