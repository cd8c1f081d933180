// Copyright 2026 The Moneta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "moneta/quantity.hpp"

#include "moneta/error.hpp"

#include <algorithm>

namespace moneta {

Quantity checked_add(Quantity a, Quantity b)
{
    Quantity r;
    if (__builtin_add_overflow(a, b, &r))
        fail(ErrorCode::Overflow, "quantity addition overflow");
    return r;
}

Quantity checked_sub(Quantity a, Quantity b)
{
    Quantity r;
    if (__builtin_sub_overflow(a, b, &r))
        fail(ErrorCode::Overflow, "quantity subtraction overflow");
    return r;
}

Quantity checked_mul(Quantity a, Quantity b)
{
    Quantity r;
    if (__builtin_mul_overflow(a, b, &r))
        fail(ErrorCode::Overflow, "quantity multiplication overflow");
    return r;
}

std::string to_string(Quantity q)
{
    if (q == 0)
        return "0";
    const bool negative = q < 0;
    // Work on the unsigned magnitude so the minimum value round-trips.
    unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(q + 1)) + 1
                                     : static_cast<unsigned __int128>(q);
    std::string digits;
    while (mag != 0)
    {
        digits.push_back(static_cast<char>('0' + static_cast<int>(mag % 10)));
        mag /= 10;
    }
    if (negative)
        digits.push_back('-');
    std::reverse(digits.begin(), digits.end());
    return digits;
}

Quantity pow10(int decimals)
{
    if (decimals < 0 || decimals > 30)
        fail(ErrorCode::InvalidArgument, "unsupported decimal scale " + std::to_string(decimals));
    Quantity p = 1;
    for (int i = 0; i < decimals; ++i)
        p *= 10;
    return p;
}

std::string format_scaled(Quantity q, int decimals)
{
    if (decimals == 0)
        return to_string(q);
    const Quantity scale = pow10(decimals);
    const bool negative = q < 0;
    const Quantity mag = negative ? -q : q;
    std::string whole = to_string(mag / scale);
    std::string frac = to_string(mag % scale);
    frac.insert(0, static_cast<std::size_t>(decimals) - frac.size(), '0');
    while (!frac.empty() && frac.back() == '0')
        frac.pop_back();
    std::string out = negative ? "-" + whole : whole;
    if (!frac.empty())
        out += "." + frac;
    return out;
}

Quantity parse_scaled(std::string_view text, int decimals)
{
    const std::string original(text);
    if (text.empty())
        fail(ErrorCode::SyntaxError, "empty quantity");
    bool negative = false;
    if (text.front() == '-' || text.front() == '+')
    {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    const auto dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() && frac.empty())
        fail(ErrorCode::SyntaxError, "malformed quantity '" + original + "'");
    auto all_digits = [](std::string_view s) {
        return std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
    };
    if (!all_digits(whole) || !all_digits(frac) || (dot != std::string_view::npos && frac.empty()))
        fail(ErrorCode::SyntaxError, "malformed quantity '" + original + "'");
    while (!frac.empty() && frac.back() == '0')
        frac.remove_suffix(1);
    if (static_cast<int>(frac.size()) > decimals)
        fail(ErrorCode::InvalidArgument,
             "quantity '" + original + "' is finer than " + std::to_string(decimals) + " decimals");
    Quantity value = 0;
    for (char c : whole)
        value = checked_add(checked_mul(value, 10), c - '0');
    for (char c : frac)
        value = checked_add(checked_mul(value, 10), c - '0');
    value = checked_mul(value, pow10(decimals - static_cast<int>(frac.size())));
    return negative ? -value : value;
}

std::string to_string(const Rational& r)
{
    if (r.denominator() == 1)
        return to_string(r.numerator());
    return to_string(r.numerator()) + "/" + to_string(r.denominator());
}

Rational parse_rational(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash != std::string_view::npos)
    {
        const Quantity num = parse_quantity(text.substr(0, slash));
        const Quantity den = parse_quantity(text.substr(slash + 1));
        if (den == 0)
            fail(ErrorCode::InvalidArgument, "zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    const auto dot = text.find('.');
    if (dot == std::string_view::npos)
        return Rational(parse_quantity(text));
    const int decimals = static_cast<int>(text.size() - dot - 1);
    return Rational(parse_scaled(text, decimals), pow10(decimals));
}

} // namespace moneta
