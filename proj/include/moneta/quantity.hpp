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

#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace moneta {

/// Signed amount in minor units. All ledger arithmetic is exact integer
/// arithmetic; overflow is reported, never wrapped.
using Quantity = __int128;

using Rational = boost::rational<Quantity>;

Quantity checked_add(Quantity a, Quantity b);
Quantity checked_sub(Quantity a, Quantity b);
Quantity checked_mul(Quantity a, Quantity b);

std::string to_string(Quantity q);

/// Renders a minor-unit amount in major units with `decimals` fractional
/// digits, trimming trailing zeros ("6860" with 2 decimals -> "68.6").
std::string format_scaled(Quantity q, int decimals);

/// Parses an integer or decimal literal ("50", "-3", "0.98") into minor
/// units at the given scale. Fails if the literal has more fractional
/// digits than the scale can represent.
Quantity parse_scaled(std::string_view text, int decimals);

inline Quantity parse_quantity(std::string_view text) { return parse_scaled(text, 0); }

Quantity pow10(int decimals);

/// "p/q" in lowest terms, or "p" when q == 1.
std::string to_string(const Rational& r);

/// Accepts "7", "-7", "686/10", "0.98".
Rational parse_rational(std::string_view text);

} // namespace moneta
