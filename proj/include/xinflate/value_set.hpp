#pragma once

#include "xinflate/domain.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace xinflate {

/// Interval with per-endpoint openness. Both endpoints are finite.
struct Interval {
    Rational lo;
    Rational hi;
    bool lo_open = false;
    bool hi_open = false;

    static Interval closed(Rational a, Rational b) { return {std::move(a), std::move(b), false, false}; }
    static Interval point(const Rational& a) { return {a, a, false, false}; }
    /// [a, b)
    static Interval left_closed(Rational a, Rational b) { return {std::move(a), std::move(b), false, true}; }

    bool empty() const;
    bool contains(const Rational& x) const;
    bool is_point() const { return lo == hi && !lo_open && !hi_open; }
    /// True when the interval holds at least one admissible value of `d`
    /// (for integer domains: at least one integer).
    bool inhabited(const OrdinalDomain& d) const;
    std::optional<Interval> intersect(const Interval& other) const;
    std::string str() const;

    friend bool operator==(const Interval& a, const Interval& b)
    {
        return a.lo == b.lo && a.hi == b.hi && a.lo_open == b.lo_open && a.hi_open == b.hi_open;
    }
};

/// Parses the Interval::str() forms: "[a,b]", "[a,b)", "(a,b]", "(a,b)", "[a]".
Interval parse_interval(std::string_view text);

/// Smallest / largest admissible member of an interval within a domain, with
/// a flag telling whether the extreme is attained (an open continuous
/// endpoint is an infimum, not a member).
struct Extreme {
    Rational value;
    bool attained = true;
};
std::optional<Extreme> lowest_member(const Interval& i, const OrdinalDomain& d);
std::optional<Extreme> highest_member(const Interval& i, const OrdinalDomain& d);

/// Nonempty subset of a categorical domain, stored as sorted label ids.
class CatSet {
public:
    CatSet() = default;
    explicit CatSet(std::vector<LabelId> labels);

    const std::vector<LabelId>& labels() const noexcept { return labels_; }
    bool contains(LabelId l) const;
    std::size_t size() const noexcept { return labels_.size(); }

    friend bool operator==(const CatSet&, const CatSet&) = default;

private:
    std::vector<LabelId> labels_;
};

/// Finite union of disjoint intervals in ascending order. The constructor
/// normalizes: empty pieces dropped, overlapping or touching pieces merged.
class IntervalUnion {
public:
    IntervalUnion() = default;
    explicit IntervalUnion(std::vector<Interval> parts);
    explicit IntervalUnion(Interval single) : IntervalUnion(std::vector<Interval>{std::move(single)}) {}

    const std::vector<Interval>& parts() const noexcept { return parts_; }
    bool contains(const Rational& x) const;
    bool empty() const noexcept { return parts_.empty(); }

    friend bool operator==(const IntervalUnion&, const IntervalUnion&) = default;

private:
    std::vector<Interval> parts_;
};

/// The set of admissible values of one feature inside an explanation
/// literal `x_j in S`.
class ValueSet {
public:
    ValueSet() = default;
    ValueSet(CatSet s) : rep_(std::move(s)) {}
    ValueSet(IntervalUnion u) : rep_(std::move(u)) {}
    ValueSet(Interval i) : rep_(IntervalUnion(std::move(i))) {}

    static ValueSet full(const Domain& d);
    static ValueSet singleton(const Domain& d, const Value& v);
    static ValueSet labels(std::initializer_list<std::uint32_t> ids);

    bool is_categorical() const noexcept { return std::holds_alternative<CatSet>(rep_); }
    const CatSet& cat() const { return std::get<CatSet>(rep_); }
    const IntervalUnion& intervals() const { return std::get<IntervalUnion>(rep_); }

    /// Throws ValidationError when `v` is a label and the set ordinal or the
    /// other way round.
    bool contains(const Value& v) const;
    bool empty() const;
    /// Number of labels or number of disjoint intervals.
    std::size_t piece_count() const;
    /// True when the set has exactly one admissible value in `d`.
    bool is_singleton(const Domain& d) const;
    /// True when the set has at least one admissible value of `d`.
    bool inhabited(const Domain& d) const;
    bool covers(const Domain& d) const;
    bool subset_of(const ValueSet& other) const;

    std::optional<ValueSet> intersect(const ValueSet& other) const;
    ValueSet unite(const ValueSet& other) const;

    std::string str(const Domain& d) const;

    friend bool operator==(const ValueSet&, const ValueSet&) = default;

private:
    void check_compatible(const ValueSet& other) const;
    std::variant<CatSet, IntervalUnion> rep_;
};

/// D \ s, or nullopt when s covers the whole domain.
std::optional<ValueSet> complement(const ValueSet& s, const Domain& d);

/// Throws ValidationError unless `s` is a subset of `d` with matching kind.
void check_within(const ValueSet& s, const Domain& d);

} // namespace xinflate
