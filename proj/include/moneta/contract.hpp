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

// Contracts as classifiers of event sequences. A contract is advanced by
// taking its derivative with respect to each event it binds; the residual
// is the contract of remaining obligations.

#include "moneta/ledger.hpp"

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

namespace moneta {

/// Template of a transfer event. Unset fields match anything.
struct EventPattern
{
    std::optional<AgentId> from;
    std::optional<AgentId> to;
    std::optional<Bundle> bundle;
    std::optional<TransferMode> mode;

    bool matches(const Event& e) const;
    /// Some concrete event at `time` that this pattern matches.
    Event representative(std::uint64_t time) const;
    std::string to_string() const;

    bool operator==(const EventPattern&) const = default;
};

/// Inclusive logical-time bounds.
struct Window
{
    std::uint64_t earliest = 0;
    std::uint64_t latest = 0;

    bool contains(std::uint64_t t) const { return earliest <= t && t <= latest; }
    auto operator<=>(const Window&) const = default;
};

class Contract
{
public:
    enum class Kind
    {
        Done,
        Fail,
        Atom,
        Then,
        Or,
        Both,
    };

    // Smart constructors; they simplify units and zeros, so structurally
    // different inputs may produce the same (language-equal) contract.
    static Contract done();
    static Contract fail();
    static Contract atom(EventPattern pattern, Window window);
    static Contract then(const Contract& first, const Contract& second);
    static Contract either(const Contract& a, const Contract& b);
    static Contract both(const Contract& a, const Contract& b);

    Kind kind() const noexcept;
    const EventPattern& pattern() const;
    const Window& window() const;
    const Contract& left() const;
    const Contract& right() const;

    /// Accepts the empty continuation.
    bool nullable() const noexcept;
    /// Latest time any atom can still fire; nullopt when there are no atoms.
    std::optional<std::uint64_t> horizon() const noexcept;
    std::size_t size() const noexcept;

    std::string to_string() const;

    friend std::strong_ordering operator<=>(const Contract& a, const Contract& b);
    friend bool operator==(const Contract& a, const Contract& b) { return (a <=> b) == 0; }

private:
    struct Node;
    explicit Contract(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Residual after `e`. Alternatives (Or, and the interleavings of Both) are
/// kept as a set of residuals rather than committed at the first event.
Contract derivative(const Contract& c, const Event& e);

/// True if some atom of the contract matches `e`, i.e. the contract has an
/// opinion about it.
bool binds(const Contract& c, const Event& e);

/// True if some event sequence with times >= now completes the contract.
/// Decided by a bounded search over atom firings and window boundaries.
bool viable(const Contract& c, std::uint64_t now);

enum class ContractStatus
{
    Live,
    Completed,
    Breached,
};

std::string_view to_string(ContractStatus status);

ContractStatus classify(const Contract& c, std::uint64_t now = 0);

struct ContractState
{
    Contract residual;
    ContractStatus status;
    /// Earliest time the next event may carry.
    std::uint64_t now = 0;

    static ContractState start(Contract c, std::uint64_t now = 0);
};

/// Throws RejectedEvent if the contract does not permit `e` now.
ContractState advance(const ContractState& cs, const Event& e);
/// Moves the clock without an event; may turn a live contract breached.
ContractState tick(const ContractState& cs, std::uint64_t now);

/// Both(Atom(a -> b, x), Atom(b -> a, y)) within `window`.
Contract make_exchange(const AgentId& a, const AgentId& b, const Bundle& x, const Bundle& y, Window window);

/// Then(initial exchange, Or(repayment, default)). The borrower's note is
/// iou(borrower, u) for each principal claim u (with the lender's own IOU
/// stripped). With collateral C the parties also swap iou(lender, C) for
/// iou(borrower, C); on default the borrower hands over C and the lender
/// returns both notes. Repayment is due within [start, start + term]; the
/// default branch opens at start + term + 1 and stays open for one more
/// term.
Contract make_loan(const AgentId& lender, const AgentId& borrower, const Bundle& principal,
                   const std::optional<Bundle>& collateral, std::uint64_t term, std::uint64_t start = 0);

} // namespace moneta
