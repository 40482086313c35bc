#include "xinflate/value_set.hpp"

#include "xinflate/error.hpp"

#include <algorithm>

namespace xinflate {

// ---------------------------------------------------------------- Interval

bool Interval::empty() const
{
    if (hi < lo) return true;
    return lo == hi && (lo_open || hi_open);
}

bool Interval::contains(const Rational& x) const
{
    if (x < lo || (x == lo && lo_open)) return false;
    if (x > hi || (x == hi && hi_open)) return false;
    return true;
}

bool Interval::inhabited(const OrdinalDomain& d) const
{
    return lowest_member(*this, d).has_value();
}

std::optional<Interval> Interval::intersect(const Interval& other) const
{
    Interval r;
    if (lo > other.lo) { r.lo = lo; r.lo_open = lo_open; }
    else if (lo < other.lo) { r.lo = other.lo; r.lo_open = other.lo_open; }
    else { r.lo = lo; r.lo_open = lo_open || other.lo_open; }

    if (hi < other.hi) { r.hi = hi; r.hi_open = hi_open; }
    else if (hi > other.hi) { r.hi = other.hi; r.hi_open = other.hi_open; }
    else { r.hi = hi; r.hi_open = hi_open || other.hi_open; }

    if (r.empty()) return std::nullopt;
    return r;
}

std::string Interval::str() const
{
    if (is_point()) return "[" + format_rational(lo) + "]";
    return std::string(lo_open ? "(" : "[") + format_rational(lo) + "," + format_rational(hi) + (hi_open ? ")" : "]");
}

Interval parse_interval(std::string_view text)
{
    auto fail = [&]() -> Interval { throw ParseError(std::string(text), "malformed interval"); };
    auto trim = [](std::string_view v) {
        while (!v.empty() && v.front() == ' ') v.remove_prefix(1);
        while (!v.empty() && v.back() == ' ') v.remove_suffix(1);
        return v;
    };
    text = trim(text);
    if (text.size() < 3) return fail();
    const char open = text.front();
    const char close = text.back();
    if ((open != '[' && open != '(') || (close != ']' && close != ')')) return fail();
    auto body = text.substr(1, text.size() - 2);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) {
        if (open != '[' || close != ']') return fail();
        return Interval::point(parse_rational(trim(body)));
    }
    Interval i{parse_rational(trim(body.substr(0, comma))), parse_rational(trim(body.substr(comma + 1))), open == '(',
               close == ')'};
    if (i.empty()) throw ParseError(std::string(text), "empty interval");
    return i;
}

std::optional<Extreme> lowest_member(const Interval& i, const OrdinalDomain& d)
{
    auto clipped = i.intersect(Interval::closed(d.lo, d.hi));
    if (!clipped) return std::nullopt;
    if (d.kind == OrdinalKind::integer) {
        Rational v = ceil_rat(clipped->lo);
        if (v == clipped->lo && clipped->lo_open) v += 1;
        if (!clipped->contains(v)) return std::nullopt;
        return Extreme{v, true};
    }
    return Extreme{clipped->lo, !clipped->lo_open};
}

std::optional<Extreme> highest_member(const Interval& i, const OrdinalDomain& d)
{
    auto clipped = i.intersect(Interval::closed(d.lo, d.hi));
    if (!clipped) return std::nullopt;
    if (d.kind == OrdinalKind::integer) {
        Rational v = floor_rat(clipped->hi);
        if (v == clipped->hi && clipped->hi_open) v -= 1;
        if (!clipped->contains(v)) return std::nullopt;
        return Extreme{v, true};
    }
    return Extreme{clipped->hi, !clipped->hi_open};
}

// ---------------------------------------------------------------- CatSet

CatSet::CatSet(std::vector<LabelId> labels) : labels_(std::move(labels))
{
    std::sort(labels_.begin(), labels_.end());
    labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
}

bool CatSet::contains(LabelId l) const
{
    return std::binary_search(labels_.begin(), labels_.end(), l);
}

// ---------------------------------------------------------------- IntervalUnion

IntervalUnion::IntervalUnion(std::vector<Interval> parts)
{
    std::erase_if(parts, [](const Interval& i) { return i.empty(); });
    std::sort(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
        if (a.lo != b.lo) return a.lo < b.lo;
        return !a.lo_open && b.lo_open;
    });
    for (auto& p : parts) {
        if (!parts_.empty()) {
            Interval& cur = parts_.back();
            const bool touches = p.lo < cur.hi || (p.lo == cur.hi && !(p.lo_open && cur.hi_open));
            if (touches) {
                if (p.hi > cur.hi) {
                    cur.hi = p.hi;
                    cur.hi_open = p.hi_open;
                } else if (p.hi == cur.hi) {
                    cur.hi_open = cur.hi_open && p.hi_open;
                }
                continue;
            }
        }
        parts_.push_back(std::move(p));
    }
}

bool IntervalUnion::contains(const Rational& x) const
{
    auto it = std::upper_bound(parts_.begin(), parts_.end(), x,
                               [](const Rational& v, const Interval& i) { return v < i.lo; });
    if (it == parts_.begin()) return false;
    return std::prev(it)->contains(x);
}

// ---------------------------------------------------------------- ValueSet

ValueSet ValueSet::full(const Domain& d)
{
    if (d.is_categorical()) {
        std::vector<LabelId> all;
        for (std::uint32_t i = 0; i < d.label_count(); ++i) all.push_back(LabelId{i});
        return CatSet(std::move(all));
    }
    return Interval::closed(d.ordinal().lo, d.ordinal().hi);
}

ValueSet ValueSet::singleton(const Domain& d, const Value& v)
{
    if (!d.contains(v)) throw ValidationError("value outside domain: " + d.format_value(v));
    if (d.is_categorical()) return CatSet({std::get<LabelId>(v)});
    return Interval::point(std::get<Rational>(v));
}

ValueSet ValueSet::labels(std::initializer_list<std::uint32_t> ids)
{
    std::vector<LabelId> v;
    for (auto i : ids) v.push_back(LabelId{i});
    return CatSet(std::move(v));
}

bool ValueSet::contains(const Value& v) const
{
    if (is_categorical()) {
        const auto* l = std::get_if<LabelId>(&v);
        if (!l) throw ValidationError("ordinal value tested against a categorical set");
        return cat().contains(*l);
    }
    const auto* r = std::get_if<Rational>(&v);
    if (!r) throw ValidationError("label tested against an ordinal set");
    return intervals().contains(*r);
}

bool ValueSet::empty() const
{
    return is_categorical() ? cat().size() == 0 : intervals().empty();
}

std::size_t ValueSet::piece_count() const
{
    return is_categorical() ? cat().size() : intervals().parts().size();
}

bool ValueSet::is_singleton(const Domain& d) const
{
    if (is_categorical()) return cat().size() == 1;
    const auto& o = d.ordinal();
    std::size_t count = 0;
    for (const auto& p : intervals().parts()) {
        auto lo = lowest_member(p, o);
        if (!lo) continue;
        auto hi = highest_member(p, o);
        if (lo->value != hi->value || !lo->attained || !hi->attained) return false;
        if (++count > 1) return false;
    }
    return count == 1;
}

bool ValueSet::inhabited(const Domain& d) const
{
    if (is_categorical()) return cat().size() > 0;
    for (const auto& p : intervals().parts())
        if (p.inhabited(d.ordinal())) return true;
    return false;
}

bool ValueSet::covers(const Domain& d) const
{
    return !complement(*this, d).has_value();
}

void ValueSet::check_compatible(const ValueSet& other) const
{
    if (is_categorical() != other.is_categorical())
        throw ValidationError("mixing categorical and ordinal value sets");
}

bool ValueSet::subset_of(const ValueSet& other) const
{
    check_compatible(other);
    if (is_categorical()) {
        const auto& a = cat().labels();
        const auto& b = other.cat().labels();
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    }
    for (const auto& p : intervals().parts()) {
        bool inside = false;
        for (const auto& q : other.intervals().parts()) {
            auto x = p.intersect(q);
            if (x && *x == p) { inside = true; break; }
        }
        if (!inside) return false;
    }
    return true;
}

std::optional<ValueSet> ValueSet::intersect(const ValueSet& other) const
{
    check_compatible(other);
    if (is_categorical()) {
        std::vector<LabelId> out;
        const auto& a = cat().labels();
        const auto& b = other.cat().labels();
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        if (out.empty()) return std::nullopt;
        return ValueSet(CatSet(std::move(out)));
    }
    std::vector<Interval> out;
    for (const auto& p : intervals().parts())
        for (const auto& q : other.intervals().parts())
            if (auto x = p.intersect(q)) out.push_back(*x);
    if (out.empty()) return std::nullopt;
    return ValueSet(IntervalUnion(std::move(out)));
}

ValueSet ValueSet::unite(const ValueSet& other) const
{
    check_compatible(other);
    if (is_categorical()) {
        std::vector<LabelId> out = cat().labels();
        out.insert(out.end(), other.cat().labels().begin(), other.cat().labels().end());
        return CatSet(std::move(out));
    }
    std::vector<Interval> out = intervals().parts();
    out.insert(out.end(), other.intervals().parts().begin(), other.intervals().parts().end());
    return IntervalUnion(std::move(out));
}

std::string ValueSet::str(const Domain& d) const
{
    std::string s;
    if (is_categorical()) {
        s = "{";
        for (std::size_t i = 0; i < cat().size(); ++i) {
            if (i) s += ",";
            s += d.is_categorical() ? d.label_name(cat().labels()[i]) : std::to_string(cat().labels()[i].index);
        }
        return s + "}";
    }
    const auto& parts = intervals().parts();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += "∪";
        s += parts[i].str();
    }
    return s;
}

std::optional<ValueSet> complement(const ValueSet& s, const Domain& d)
{
    if (d.is_categorical()) {
        if (!s.is_categorical()) throw ValidationError("ordinal set against a categorical domain");
        std::vector<LabelId> out;
        for (std::uint32_t i = 0; i < d.label_count(); ++i)
            if (!s.cat().contains(LabelId{i})) out.push_back(LabelId{i});
        if (out.empty()) return std::nullopt;
        return ValueSet(CatSet(std::move(out)));
    }
    if (s.is_categorical()) throw ValidationError("categorical set against an ordinal domain");
    const auto& o = d.ordinal();
    std::vector<Interval> gaps;
    Rational pos = o.lo;
    bool pos_open = false;
    for (const auto& p : s.intervals().parts()) {
        Interval gap{pos, p.lo, pos_open, !p.lo_open};
        if (!gap.empty() && gap.inhabited(o)) gaps.push_back(gap);
        if (p.hi > pos || (p.hi == pos && !p.hi_open)) {
            pos = p.hi;
            pos_open = !p.hi_open;
        }
    }
    Interval tail{pos, o.hi, pos_open, false};
    if (!tail.empty() && tail.inhabited(o)) gaps.push_back(tail);
    if (gaps.empty()) return std::nullopt;
    return ValueSet(IntervalUnion(std::move(gaps)));
}

void check_within(const ValueSet& s, const Domain& d)
{
    if (s.is_categorical() != d.is_categorical())
        throw ValidationError("value set kind does not match the feature domain");
    if (s.empty()) throw ValidationError("empty value set");
    if (s.is_categorical()) {
        for (auto l : s.cat().labels())
            if (l.index >= d.label_count()) throw ValidationError("label index out of domain");
        return;
    }
    const auto& o = d.ordinal();
    for (const auto& p : s.intervals().parts())
        if (p.lo < o.lo || p.hi > o.hi)
            throw ValidationError("interval " + p.str() + " outside domain [" + format_rational(o.lo) + "," +
                                  format_rational(o.hi) + "]");
}

} // namespace xinflate
