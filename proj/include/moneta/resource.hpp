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

// Value algebra: claims (base resources and nested IOUs), canonical signed
// bundles, IOU pair creation/annihilation and fiat normalization.

#include "moneta/quantity.hpp"

#include <compare>
#include <functional>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace moneta {

struct AgentId
{
    std::string value;

    AgentId() = default;
    AgentId(std::string v) : value(std::move(v)) {}
    AgentId(const char* v) : value(v) {}

    auto operator<=>(const AgentId&) const = default;
    bool operator==(const AgentId&) const = default;
};

/// A base resource kind (`DKK`, `R`) or an IOU `iou(issuer, underlying)`.
/// Immutable; copies share structure. Ordering is structural: base claims
/// sort before IOUs.
class Claim
{
public:
    static Claim base(std::string kind, bool unique = false);
    static Claim iou(AgentId issuer, Claim underlying);

    bool is_base() const noexcept;
    bool is_iou() const noexcept { return !is_base(); }

    /// Base only.
    const std::string& kind() const;
    bool unique() const;

    /// IOU only.
    const AgentId& issuer() const;
    const Claim& underlying() const;

    /// The base kind at the bottom of the IOU chain.
    const Claim& leaf() const;
    std::size_t depth() const noexcept;

    std::string to_string() const;

    friend std::strong_ordering operator<=>(const Claim& a, const Claim& b);
    friend bool operator==(const Claim& a, const Claim& b) { return (a <=> b) == 0; }

private:
    struct Node;
    explicit Claim(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Decimal places per base kind, used only for text rendering and parsing.
using Scales = std::map<std::string, int, std::less<>>;

/// Canonical signed multiset of claims: sorted, no zero entries, unique
/// base claims within {-1, 1}.
class Bundle
{
public:
    struct Entry
    {
        Claim claim;
        Quantity qty;

        bool operator==(const Entry&) const = default;
    };

    Bundle() = default;
    Bundle(std::initializer_list<std::pair<Claim, Quantity>> entries);

    static Bundle of(const Claim& claim, Quantity qty);

    bool empty() const noexcept { return entries_.empty(); }
    std::size_t size() const noexcept { return entries_.size(); }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }

    Quantity get(const Claim& claim) const;

    /// In-place entrywise sum, re-canonicalized. Strong exception guarantee.
    Bundle& operator+=(const Bundle& other);
    Bundle& operator-=(const Bundle& other);
    Bundle& add(const Claim& claim, Quantity qty);

    Bundle operator-() const;

    bool has_negative() const noexcept;
    bool has_positive() const noexcept;
    Bundle positive_part() const;
    Bundle negative_part() const;

    /// True if every entry of `other` is covered: get(c) >= q for q > 0.
    bool covers(const Bundle& other) const;

    bool operator==(const Bundle&) const = default;

private:
    std::vector<Entry> entries_;
};

Bundle operator+(Bundle a, const Bundle& b);
Bundle operator-(Bundle a, const Bundle& b);

/// Named form of `+`.
inline Bundle bundle_add(const Bundle& a, const Bundle& b) { return a + b; }

/// Signed sum over many bundles.
Bundle world_total(std::span<const Bundle> bundles);

/// Gross position of one agent: assets and liabilities kept apart so that
/// `G + iou(0,G) - iou(0,G)` is representable. `liabilities` holds only
/// non-positive entries.
struct Holdings
{
    Bundle assets;
    Bundle liabilities;

    Bundle net() const { return assets + liabilities; }
    bool operator==(const Holdings&) const = default;
};

/// Creates the dual pair {iou(issuer,c): qty} / {iou(issuer,c): -qty}.
std::pair<Bundle, Bundle> issue_iou(const AgentId& issuer, const Claim& underlying, Quantity qty);

/// Cancels qty of the issuer's own IOU against the matching liability.
Holdings annihilate(const Holdings& holder, const AgentId& issuer, const Claim& underlying, Quantity qty);

class FiatRegistry
{
public:
    /// Throws DuplicateId if the currency already has a different issuer.
    void register_currency(const std::string& currency, const AgentId& issuer);
    std::optional<AgentId> issuer_of(std::string_view currency) const;
    bool empty() const noexcept { return issuers_.empty(); }

private:
    std::map<std::string, AgentId, std::less<>> issuers_;
};

/// Rewrites iou(c, M) to M wherever c is the registered issuer of M.
Claim normalize(const Claim& claim, const FiatRegistry& reg);
Bundle normalize(const Bundle& bundle, const FiatRegistry& reg);

// ---------------------------------------------------------------------------
// Text syntax: `DKK`, `good:R`, `iou(0,G)`, `iou(Bank1,iou(CB,DKK))`;
// bundles `G + iou(1,R) - iou(0,G)`, `50 DKK + 1 good:bike`, `0`.

struct ClaimSyntax
{
    /// Returns the uniqueness flag of a declared kind, nullopt if undeclared.
    std::function<std::optional<bool>(std::string_view)> kind;
    std::function<bool(std::string_view)> agent;
    Scales scales;
};

Claim parse_claim(std::string_view text, const ClaimSyntax& syntax = {});
Bundle parse_bundle(std::string_view text, const ClaimSyntax& syntax = {});
Holdings parse_holdings(std::string_view text, const ClaimSyntax& syntax = {});

int decimals_of(const Claim& claim, const Scales& scales);
std::string to_string(const Bundle& bundle, const Scales& scales = {});
std::string to_string(const Holdings& holdings, const Scales& scales = {});

} // namespace moneta
