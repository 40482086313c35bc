#pragma once

#include "xinflate/rational.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace xinflate {

/// Index of a label inside its categorical domain (declaration order).
struct LabelId {
    std::uint32_t index = 0;
    friend auto operator<=>(const LabelId&, const LabelId&) = default;
};

/// A feature value: a categorical label or an exact ordinal number.
using Value = std::variant<LabelId, Rational>;

struct CategoricalDomain {
    std::vector<std::string> labels;
};

enum class OrdinalKind { continuous, integer };

struct OrdinalDomain {
    Rational lo;
    Rational hi;
    OrdinalKind kind = OrdinalKind::continuous;
};

/// Value space of one feature. Immutable once built through the factories,
/// which enforce the invariants (distinct labels, at least two of them,
/// finite lo < hi, integral bounds for integer kind).
class Domain {
public:
    static Domain categorical(std::vector<std::string> labels);
    static Domain ordinal(Rational lo, Rational hi, OrdinalKind kind = OrdinalKind::continuous);

    bool is_categorical() const noexcept { return std::holds_alternative<CategoricalDomain>(rep_); }
    bool is_ordinal() const noexcept { return !is_categorical(); }
    bool is_integer() const noexcept { return is_ordinal() && ordinal().kind == OrdinalKind::integer; }

    const CategoricalDomain& categorical() const { return std::get<CategoricalDomain>(rep_); }
    const OrdinalDomain& ordinal() const { return std::get<OrdinalDomain>(rep_); }

    std::size_t label_count() const { return categorical().labels.size(); }
    /// Throws ValidationError for an unknown label.
    LabelId label(std::string_view name) const;
    const std::string& label_name(LabelId id) const { return categorical().labels.at(id.index); }

    bool contains(const Value& v) const;
    /// Parses a textual value (label name or number).
    Value parse_value(std::string_view text) const;
    std::string format_value(const Value& v) const;

private:
    explicit Domain(std::variant<CategoricalDomain, OrdinalDomain> rep) : rep_(std::move(rep)) {}
    std::variant<CategoricalDomain, OrdinalDomain> rep_;
};

bool same_value(const Value& a, const Value& b);

} // namespace xinflate
