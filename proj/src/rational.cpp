#include "pmarket/rational.hpp"
#include "pmarket/errors.hpp"

#include <cctype>
#include <cmath>

namespace pmarket {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

BigInt pow10(std::size_t n)
{
    BigInt r = 1;
    for (std::size_t i = 0; i < n; ++i)
        r *= 10;
    return r;
}

} // namespace

Rational parse_rational(std::string_view text)
{
    std::string_view s = text;
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s.empty())
        throw DomainError("invalid rational: '" + std::string(text) + "'");

    Rational out;
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = s.substr(0, slash);
        auto den = s.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw DomainError("invalid rational: '" + std::string(text) + "'");
        BigInt d{std::string(den)};
        if (d == 0)
            throw DomainError("invalid rational (zero denominator): '" + std::string(text) + "'");
        out = Rational(BigInt{std::string(num)}, d);
    } else if (auto dot = s.find('.'); dot != std::string_view::npos) {
        auto whole = s.substr(0, dot);
        auto frac = s.substr(dot + 1);
        if (whole.empty() && frac.empty())
            throw DomainError("invalid rational: '" + std::string(text) + "'");
        if ((!whole.empty() && !all_digits(whole)) || (!frac.empty() && !all_digits(frac)))
            throw DomainError("invalid rational: '" + std::string(text) + "'");
        BigInt w = whole.empty() ? BigInt(0) : BigInt{std::string(whole)};
        BigInt f = frac.empty() ? BigInt(0) : BigInt{std::string(frac)};
        BigInt scale = pow10(frac.size());
        out = Rational(w * scale + f, scale);
    } else {
        if (!all_digits(s))
            throw DomainError("invalid rational: '" + std::string(text) + "'");
        out = Rational(BigInt{std::string(s)});
    }
    return negative ? Rational(-out) : out;
}

std::string format_exact(const Rational& value)
{
    if (denominator(value) == 1)
        return numerator(value).str();
    return numerator(value).str() + "/" + denominator(value).str();
}

std::string format_decimal(const Rational& value, int places)
{
    BigInt num = numerator(value);
    BigInt den = denominator(value);
    bool negative = num < 0;
    if (negative)
        num = -num;

    BigInt scale = pow10(static_cast<std::size_t>(places));
    BigInt scaled_num = num * scale;
    BigInt q = scaled_num / den;
    BigInt rem = scaled_num % den;

    // round half to even on the scaled quotient
    BigInt twice = rem * 2;
    if (twice > den || (twice == den && (q % 2) != 0))
        ++q;

    BigInt whole = q / scale;
    BigInt frac = q % scale;

    std::string out;
    if (negative && q != 0)
        out += '-';
    out += whole.str();
    if (places > 0) {
        std::string f = frac.str();
        out += '.';
        out += std::string(static_cast<std::size_t>(places) - f.size(), '0');
        out += f;
    }
    return out;
}

bool within(const Rational& a, const Rational& b, const Rational& tol)
{
    Rational d = a - b;
    if (d < 0)
        d = -d;
    return d <= tol;
}

double to_double(const Rational& value)
{
    return value.convert_to<double>();
}

} // namespace pmarket
