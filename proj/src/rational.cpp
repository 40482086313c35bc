#include "xinflate/rational.hpp"

#include "xinflate/error.hpp"

#include <cctype>

namespace xinflate {

namespace {

Integer pow10(unsigned n)
{
    Integer r = 1;
    for (unsigned i = 0; i < n; ++i) r *= 10;
    return r;
}

Integer parse_digits(std::string_view s, std::string_view whole)
{
    if (s.empty()) throw ValidationError("invalid number '" + std::string(whole) + "'");
    Integer r = 0;
    for (char ch : s) {
        if (!std::isdigit(static_cast<unsigned char>(ch)))
            throw ValidationError("invalid number '" + std::string(whole) + "'");
        r = r * 10 + (ch - '0');
    }
    return r;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    const std::string_view whole = text;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ValidationError("empty number");

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        Rational num = parse_rational(text.substr(0, slash));
        Rational den = parse_rational(text.substr(slash + 1));
        if (den == 0) throw ValidationError("zero denominator in '" + std::string(whole) + "'");
        return num / den;
    }

    bool negative = false;
    if (text.front() == '-' || text.front() == '+') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }

    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_part = text.substr(e + 1);
        bool exp_negative = false;
        if (!exp_part.empty() && (exp_part.front() == '-' || exp_part.front() == '+')) {
            exp_negative = exp_part.front() == '-';
            exp_part.remove_prefix(1);
        }
        if (exp_part.empty() || exp_part.size() > 4)
            throw ValidationError("invalid exponent in '" + std::string(whole) + "'");
        exponent = static_cast<long>(parse_digits(exp_part, whole).convert_to<long>());
        if (exp_negative) exponent = -exponent;
        text = text.substr(0, e);
    }

    std::string_view int_part = text;
    std::string_view frac_part;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        int_part = text.substr(0, dot);
        frac_part = text.substr(dot + 1);
    }
    if (int_part.empty() && frac_part.empty())
        throw ValidationError("invalid number '" + std::string(whole) + "'");

    Integer mantissa = int_part.empty() ? Integer(0) : parse_digits(int_part, whole);
    if (!frac_part.empty()) mantissa = mantissa * pow10(frac_part.size()) + parse_digits(frac_part, whole);
    exponent -= static_cast<long>(frac_part.size());

    Rational r(mantissa);
    if (exponent > 0) r *= Rational(pow10(static_cast<unsigned>(exponent)));
    if (exponent < 0) r /= Rational(pow10(static_cast<unsigned>(-exponent)));
    return negative ? Rational(-r) : r;
}

std::string format_rational(const Rational& r)
{
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    if (den == 1) return num.str();

    Integer rest = den;
    unsigned twos = 0, fives = 0;
    while (rest % 2 == 0) { rest /= 2; ++twos; }
    while (rest % 5 == 0) { rest /= 5; ++fives; }
    if (rest != 1) return num.str() + "/" + den.str();

    const unsigned digits = std::max(twos, fives);
    const bool negative = num < 0;
    Integer scaled = (negative ? Integer(-num) : num) * (pow10(digits) / den);
    std::string s = scaled.str();
    if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, ".");
    return negative ? "-" + s : s;
}

Integer floor_int(const Rational& r)
{
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    Integer q = num / den; // truncates toward zero
    if (num < 0 && q * den != num) q -= 1;
    return q;
}

Integer ceil_int(const Rational& r)
{
    Integer num = boost::multiprecision::numerator(r);
    Integer den = boost::multiprecision::denominator(r);
    Integer q = num / den;
    if (num > 0 && q * den != num) q += 1;
    return q;
}

bool is_integral(const Rational& r)
{
    return boost::multiprecision::denominator(r) == 1;
}

double to_double(const Rational& r)
{
    return r.convert_to<double>();
}

} // namespace xinflate
