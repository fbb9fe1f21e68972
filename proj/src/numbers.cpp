#include "consys/numbers.hpp"

#include <cctype>

namespace consys
{

std::string rational_to_string(const Rational& r)
{
    const Int num = rational_num(r);
    const Int den = rational_den(r);
    if (den == 1)
        return num.str();
    return num.str() + "/" + den.str();
}

std::string ExtendedValue::to_string() const
{
    if (!finite_)
        return "inf";
    return rational_to_string(value_);
}

std::optional<Int> parse_int(const std::string& text)
{
    if (text.empty())
        return std::nullopt;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+')
        i = 1;
    if (i == text.size())
        return std::nullopt;
    for (std::size_t j = i; j < text.size(); ++j)
        if (!std::isdigit(static_cast<unsigned char>(text[j])))
            return std::nullopt;
    return Int(text);
}

std::optional<ExtendedValue> parse_extended(const std::string& text)
{
    if (text == "inf")
        return ExtendedValue::infinity();
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
        auto num = parse_int(text);
        if (!num)
            return std::nullopt;
        return ExtendedValue::finite(Rational(*num));
    }
    auto num = parse_int(text.substr(0, slash));
    auto den = parse_int(text.substr(slash + 1));
    if (!num || !den || *den <= 0)
        return std::nullopt;
    return ExtendedValue::finite(Rational(*num, *den));
}

} // namespace consys
