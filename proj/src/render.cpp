#include "xinflate/render.hpp"

namespace xinflate {

namespace {

std::string literals(const Model& m, const InflatedExplanation& x)
{
    std::string s;
    for (auto j : x.features) {
        if (!s.empty()) s += " ∧ ";
        s += m.space[j].name + "∈" + x.sets.at(j).str(m.space.domain(j));
    }
    return s.empty() ? "TRUE" : s;
}

} // namespace

std::string render_rule(const Model& m, const InflatedExplanation& x, ClassIndex c)
{
    return "IF " + literals(m, x) + " THEN " + m.classes.at(c);
}

std::string render_contrast(const Model& m, const InflatedExplanation& y, ClassIndex c)
{
    return "IF " + literals(m, y) + " (other features as in the instance) THEN NOT " + m.classes.at(c);
}

std::string render_step(const Domain& d, const ValueSet& s)
{
    if (s.is_categorical() && s.cat().size() == 1 && d.is_categorical()) return d.label_name(s.cat().labels().front());
    return s.str(d);
}

std::string render_point(const FeatureSpace& space, const Point& p)
{
    std::string s = "(";
    for (std::size_t j = 0; j < p.size(); ++j) {
        if (j) s += ",";
        s += space.domain(j).format_value(p[j]);
    }
    return s + ")";
}

} // namespace xinflate
