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

#include "moneta/error.hpp"

#include <array>
#include <utility>

namespace moneta {

namespace {

constexpr std::array<std::pair<ErrorCode, std::string_view>, 26> kNames{{
    {ErrorCode::InvalidArgument, "InvalidArgument"},
    {ErrorCode::Overflow, "Overflow"},
    {ErrorCode::UniqueViolation, "UniqueViolation"},
    {ErrorCode::InsufficientPosition, "InsufficientPosition"},
    {ErrorCode::InsufficientBalance, "InsufficientBalance"},
    {ErrorCode::NotController, "NotController"},
    {ErrorCode::TokenImmutable, "TokenImmutable"},
    {ErrorCode::NegativeEntry, "NegativeEntry"},
    {ErrorCode::LiabilityLocked, "LiabilityLocked"},
    {ErrorCode::ValueMismatch, "ValueMismatch"},
    {ErrorCode::UnknownResource, "UnknownResource"},
    {ErrorCode::DuplicateResource, "DuplicateResource"},
    {ErrorCode::UnknownAgent, "UnknownAgent"},
    {ErrorCode::UnknownFact, "UnknownFact"},
    {ErrorCode::NotIssuer, "NotIssuer"},
    {ErrorCode::NonMonotoneTime, "NonMonotoneTime"},
    {ErrorCode::RejectedEvent, "RejectedEvent"},
    {ErrorCode::DegenerateExchange, "DegenerateExchange"},
    {ErrorCode::EmptyTransaction, "EmptyTransaction"},
    {ErrorCode::WrongPhase, "WrongPhase"},
    {ErrorCode::ReserveBreach, "ReserveBreach"},
    {ErrorCode::UnderFunded, "UnderFunded"},
    {ErrorCode::SyntaxError, "SyntaxError"},
    {ErrorCode::UndeclaredId, "UndeclaredId"},
    {ErrorCode::DuplicateId, "DuplicateId"},
    {ErrorCode::AssertionFailed, "AssertionFailed"},
}};

} // namespace

std::string_view to_string(ErrorCode code)
{
    for (const auto& [c, name] : kNames)
        if (c == code)
            return name;
    return "Unknown";
}

bool parse_error_code(std::string_view name, ErrorCode& out)
{
    for (const auto& [c, n] : kNames)
    {
        if (n == name)
        {
            out = c;
            return true;
        }
    }
    return false;
}

} // namespace moneta
