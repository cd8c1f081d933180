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

#include "doctest.h"
#include "moneta/ledger.hpp"

#include <ostream>

#include <random>
#include <string>

namespace moneta {

inline std::ostream& operator<<(std::ostream& os, const Claim& c) { return os << c.to_string(); }
inline std::ostream& operator<<(std::ostream& os, const Bundle& b) { return os << to_string(b); }
inline std::ostream& operator<<(std::ostream& os, const Holdings& h) { return os << to_string(h); }
inline std::ostream& operator<<(std::ostream& os, const AgentId& a) { return os << a.value; }
inline std::ostream& operator<<(std::ostream& os, const ResourceId& r) { return os << r.value; }

} // namespace moneta

namespace doctest {

template <>
struct StringMaker<__int128>
{
    static String convert(__int128 q) { return moneta::to_string(q).c_str(); }
};

template <>
struct StringMaker<moneta::Rational>
{
    static String convert(const moneta::Rational& r) { return moneta::to_string(r).c_str(); }
};

} // namespace doctest

namespace moneta::test {

inline Claim base(const std::string& kind) { return Claim::base(kind); }
inline Claim good(const std::string& kind) { return Claim::base(kind, true); }
inline Claim iou(const AgentId& issuer, const Claim& c) { return Claim::iou(issuer, c); }

/// Random bundle over a small claim universe, for algebraic property tests.
inline Bundle random_bundle(std::mt19937_64& rng)
{
    static const std::vector<Claim> universe = {
        base("DKK"), base("G"), iou("0", base("G")), iou("1", base("G")), iou("1", iou("0", base("G"))),
    };
    std::uniform_int_distribution<int> pick(0, static_cast<int>(universe.size()) - 1);
    std::uniform_int_distribution<int> qty(-50, 50);
    std::uniform_int_distribution<int> count(0, 4);
    Bundle b;
    for (int i = count(rng); i > 0; --i)
        b.add(universe[static_cast<std::size_t>(pick(rng))], qty(rng));
    return b;
}

} // namespace moneta::test
