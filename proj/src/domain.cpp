#include "xinflate/domain.hpp"

#include "xinflate/error.hpp"

#include <algorithm>
#include <set>

namespace xinflate {

Domain Domain::categorical(std::vector<std::string> labels)
{
    if (labels.size() < 2) throw ValidationError("categorical domain needs at least two labels");
    std::set<std::string> seen;
    for (const auto& l : labels) {
        if (l.empty()) throw ValidationError("empty categorical label");
        if (!seen.insert(l).second) throw ValidationError("duplicate categorical label '" + l + "'");
    }
    return Domain(CategoricalDomain{std::move(labels)});
}

Domain Domain::ordinal(Rational lo, Rational hi, OrdinalKind kind)
{
    if (!(lo < hi))
        throw ValidationError("ordinal domain needs lo < hi, got [" + format_rational(lo) + "," +
                              format_rational(hi) + "]");
    if (kind == OrdinalKind::integer && (!is_integral(lo) || !is_integral(hi)))
        throw ValidationError("integer domain needs integral bounds");
    return Domain(OrdinalDomain{std::move(lo), std::move(hi), kind});
}

LabelId Domain::label(std::string_view name) const
{
    const auto& labels = categorical().labels;
    auto it = std::find(labels.begin(), labels.end(), name);
    if (it == labels.end()) throw ValidationError("unknown label '" + std::string(name) + "'");
    return LabelId{static_cast<std::uint32_t>(it - labels.begin())};
}

bool Domain::contains(const Value& v) const
{
    if (is_categorical()) {
        const auto* l = std::get_if<LabelId>(&v);
        return l != nullptr && l->index < label_count();
    }
    const auto* r = std::get_if<Rational>(&v);
    if (r == nullptr) return false;
    const auto& o = ordinal();
    if (*r < o.lo || *r > o.hi) return false;
    return o.kind != OrdinalKind::integer || is_integral(*r);
}

Value Domain::parse_value(std::string_view text) const
{
    if (is_categorical()) return label(text);
    Value v = parse_rational(text);
    if (!contains(v)) throw ValidationError("value " + std::string(text) + " outside ordinal domain");
    return v;
}

std::string Domain::format_value(const Value& v) const
{
    if (const auto* l = std::get_if<LabelId>(&v)) return is_categorical() ? label_name(*l) : "#" + std::to_string(l->index);
    return format_rational(std::get<Rational>(v));
}

bool same_value(const Value& a, const Value& b)
{
    if (a.index() != b.index()) return false;
    if (const auto* l = std::get_if<LabelId>(&a)) return *l == std::get<LabelId>(b);
    return std::get<Rational>(a) == std::get<Rational>(b);
}

} // namespace xinflate
