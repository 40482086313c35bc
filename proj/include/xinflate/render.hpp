#pragma once

#include "xinflate/classifiers.hpp"

#include <string>

namespace xinflate {

/// "IF A∈{Junior,Senior} ∧ C∈{Red,Blue,Green,Black} THEN 1"
std::string render_rule(const Model& m, const InflatedExplanation& x, ClassIndex c);

/// "IF A∈{Adult} (other features as in the instance) THEN NOT 1"
std::string render_contrast(const Model& m, const InflatedExplanation& y, ClassIndex c);

/// A probe step as shown to users: a bare label for single values, the
/// set or interval notation otherwise.
std::string render_step(const Domain& d, const ValueSet& s);

std::string render_point(const FeatureSpace& space, const Point& p);

} // namespace xinflate
