#pragma once

// The two running-example models, built in code.

#include "xinflate/classifiers.hpp"
#include "xinflate/oracle.hpp"

#include <string>

namespace xinflate::testing {

inline std::string data_path(const std::string& rel) { return std::string(XINFLATE_DATA_DIR) + "/" + rel; }

// A in {Junior,Adult,Senior}, C in {Red,Blue,Green,Silver,Black,White};
// class 0 for adults and for silver or white cars, 1 otherwise.
inline Model dl1()
{
    FeatureSpace space({{"A", Domain::categorical({"Junior", "Adult", "Senior"})},
                        {"C", Domain::categorical({"Red", "Blue", "Green", "Silver", "Black", "White"})}});
    DecisionList dl;
    dl.rules.push_back(Rule{{Literal{0, ValueSet::labels({1})}}, 0});
    dl.rules.push_back(Rule{{Literal{1, ValueSet::labels({3})}}, 0});
    dl.rules.push_back(Rule{{Literal{1, ValueSet::labels({5})}}, 0});
    dl.default_class = 1;
    return Model{space, {"0", "1"}, dl};
}

// class A iff f1 + f2 >= 12 on [0,10]^2
inline Model m1()
{
    FeatureSpace space({{"f1", Domain::ordinal(0, 10)}, {"f2", Domain::ordinal(0, 10)}});
    return Model{space, {"B", "A"}, MonotonicClassifier{{1, 1}, {12}}};
}

inline Point labels(std::initializer_list<std::uint32_t> ids)
{
    Point p;
    for (auto i : ids) p.emplace_back(LabelId{i});
    return p;
}

inline Point numbers(std::initializer_list<Rational> xs)
{
    Point p;
    for (const auto& x : xs) p.emplace_back(x);
    return p;
}

inline ExplanationProblem problem(Model m, Point v, OracleBackend b = OracleBackend::box_search)
{
    return ExplanationProblem::create(Oracle::create(std::move(m), b), std::move(v));
}

} // namespace xinflate::testing
