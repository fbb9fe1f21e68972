#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace consys
{

// All arithmetic in the library is exact. Costs and capacities are
// arbitrary-precision integers (inputs are binary-encoded and may exceed
// 64 bits); values are reduced rationals. No floating point anywhere.
using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

[[nodiscard]] inline Int rational_num(const Rational& r) { return boost::multiprecision::numerator(r); }
[[nodiscard]] inline Int rational_den(const Rational& r) { return boost::multiprecision::denominator(r); }

[[nodiscard]] inline Rational make_rational(const Int& num, const Int& den)
{
    if (den == 0)
        throw std::domain_error("rational with zero denominator");
    return Rational(num, den);
}

// Renders "p/q" in lowest terms, or just "p" when q == 1.
[[nodiscard]] std::string rational_to_string(const Rational& r);

// A value that is either a finite rational or infinite. Infinity compares
// greater than every finite value.
class ExtendedValue
{
public:
    ExtendedValue() : finite_{true}, value_{} {}

    static ExtendedValue infinity()
    {
        ExtendedValue v;
        v.finite_ = false;
        return v;
    }

    static ExtendedValue finite(Rational r)
    {
        ExtendedValue v;
        v.finite_ = true;
        v.value_ = std::move(r);
        return v;
    }

    [[nodiscard]] bool is_infinite() const { return !finite_; }
    [[nodiscard]] bool is_finite() const { return finite_; }

    [[nodiscard]] const Rational& value() const
    {
        if (!finite_)
            throw std::domain_error("value() on an infinite ExtendedValue");
        return value_;
    }

    [[nodiscard]] bool operator==(const ExtendedValue& o) const
    {
        if (finite_ != o.finite_)
            return false;
        return !finite_ || value_ == o.value_;
    }

    [[nodiscard]] bool operator<(const ExtendedValue& o) const
    {
        if (!finite_)
            return false;
        if (!o.finite_)
            return true;
        return value_ < o.value_;
    }

    [[nodiscard]] bool operator<=(const ExtendedValue& o) const { return *this == o || *this < o; }
    [[nodiscard]] bool operator>(const ExtendedValue& o) const { return o < *this; }
    [[nodiscard]] bool operator>=(const ExtendedValue& o) const { return o <= *this; }
    [[nodiscard]] bool operator!=(const ExtendedValue& o) const { return !(*this == o); }

    [[nodiscard]] std::string to_string() const;

private:
    bool finite_;
    Rational value_;
};

// Parses a decimal integer of unbounded size. Returns nullopt on syntax
// errors (leading '-' is accepted so callers can reject negatives with a
// better message).
[[nodiscard]] std::optional<Int> parse_int(const std::string& text);

// Parses "p/q", "p", or "inf".
[[nodiscard]] std::optional<ExtendedValue> parse_extended(const std::string& text);

} // namespace consys
