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

#include "moneta/contract.hpp"

#include "moneta/error.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <vector>

namespace moneta {

// ---------------------------------------------------------------------------
// EventPattern

bool EventPattern::matches(const Event& e) const
{
    const auto* t = std::get_if<Transfer>(&e.body);
    if (!t)
        return false;
    if (from && *from != t->from)
        return false;
    if (to && *to != t->to)
        return false;
    if (mode && *mode != t->mode)
        return false;
    if (bundle && *bundle != t->bundle)
        return false;
    return true;
}

Event EventPattern::representative(std::uint64_t time) const
{
    Transfer t;
    t.from = from.value_or(AgentId("*"));
    t.to = to.value_or(AgentId("*"));
    t.bundle = bundle.value_or(Bundle{});
    t.mode = mode.value_or(TransferMode::Balance);
    return Event{std::move(t), time};
}

std::string EventPattern::to_string() const
{
    std::string s = (from ? from->value : "*") + "->" + (to ? to->value : "*");
    if (bundle)
        s += " " + moneta::to_string(*bundle);
    if (mode)
        s += " (" + std::string(moneta::to_string(*mode)) + ")";
    return s;
}

namespace {

std::strong_ordering compare_bundles(const Bundle& a, const Bundle& b)
{
    if (auto c = a.size() <=> b.size(); c != 0)
        return c;
    for (auto x = a.begin(), y = b.begin(); x != a.end(); ++x, ++y)
    {
        if (auto c = x->claim <=> y->claim; c != 0)
            return c;
        if (x->qty != y->qty)
            return x->qty < y->qty ? std::strong_ordering::less : std::strong_ordering::greater;
    }
    return std::strong_ordering::equal;
}

std::strong_ordering compare_patterns(const EventPattern& a, const EventPattern& b)
{
    if (auto c = a.from <=> b.from; c != 0)
        return c;
    if (auto c = a.to <=> b.to; c != 0)
        return c;
    if (auto c = a.mode <=> b.mode; c != 0)
        return c;
    if (a.bundle.has_value() != b.bundle.has_value())
        return a.bundle.has_value() ? std::strong_ordering::greater : std::strong_ordering::less;
    if (a.bundle)
        return compare_bundles(*a.bundle, *b.bundle);
    return std::strong_ordering::equal;
}

} // namespace

// ---------------------------------------------------------------------------
// Contract nodes

struct Contract::Node
{
    Kind kind;
    EventPattern pattern;
    Window window;
    std::optional<Contract> left;
    std::optional<Contract> right;
    bool nullable;
    std::optional<std::uint64_t> horizon;
    std::size_t size;
};

namespace {

std::optional<std::uint64_t> max_horizon(std::optional<std::uint64_t> a, std::optional<std::uint64_t> b)
{
    if (!a)
        return b;
    if (!b)
        return a;
    return std::max(*a, *b);
}

} // namespace

Contract Contract::done()
{
    static const Contract kDone(std::make_shared<const Node>(
        Node{Kind::Done, {}, {}, std::nullopt, std::nullopt, true, std::nullopt, 1}));
    return kDone;
}

Contract Contract::fail()
{
    static const Contract kFail(std::make_shared<const Node>(
        Node{Kind::Fail, {}, {}, std::nullopt, std::nullopt, false, std::nullopt, 1}));
    return kFail;
}

Contract Contract::atom(EventPattern pattern, Window window)
{
    if (window.earliest > window.latest)
        moneta::fail(ErrorCode::InvalidArgument, "window earliest after latest");
    const auto latest = window.latest;
    return Contract(std::make_shared<const Node>(
        Node{Kind::Atom, std::move(pattern), window, std::nullopt, std::nullopt, false, latest, 1}));
}

Contract Contract::then(const Contract& first, const Contract& second)
{
    if (first.kind() == Kind::Fail || second.kind() == Kind::Fail)
        return fail();
    if (first.kind() == Kind::Done)
        return second;
    if (second.kind() == Kind::Done)
        return first;
    return Contract(std::make_shared<const Node>(Node{Kind::Then, {}, {}, first, second,
                                                      first.nullable() && second.nullable(),
                                                      max_horizon(first.horizon(), second.horizon()),
                                                      1 + first.size() + second.size()}));
}

Contract Contract::either(const Contract& a, const Contract& b)
{
    if (a.kind() == Kind::Fail)
        return b;
    if (b.kind() == Kind::Fail)
        return a;
    const auto order = a <=> b;
    if (order == 0)
        return a;
    // Or is commutative; a canonical operand order lets duplicates collapse.
    const Contract& lo = order < 0 ? a : b;
    const Contract& hi = order < 0 ? b : a;
    return Contract(std::make_shared<const Node>(Node{Kind::Or, {}, {}, lo, hi, lo.nullable() || hi.nullable(),
                                                      max_horizon(lo.horizon(), hi.horizon()),
                                                      1 + lo.size() + hi.size()}));
}

Contract Contract::both(const Contract& a, const Contract& b)
{
    if (a.kind() == Kind::Fail || b.kind() == Kind::Fail)
        return fail();
    if (a.kind() == Kind::Done)
        return b;
    if (b.kind() == Kind::Done)
        return a;
    return Contract(std::make_shared<const Node>(Node{Kind::Both, {}, {}, a, b, a.nullable() && b.nullable(),
                                                      max_horizon(a.horizon(), b.horizon()),
                                                      1 + a.size() + b.size()}));
}

Contract::Kind Contract::kind() const noexcept
{
    return node_->kind;
}

const EventPattern& Contract::pattern() const
{
    if (kind() != Kind::Atom)
        moneta::fail(ErrorCode::InvalidArgument, "pattern() on non-atom contract");
    return node_->pattern;
}

const Window& Contract::window() const
{
    if (kind() != Kind::Atom)
        moneta::fail(ErrorCode::InvalidArgument, "window() on non-atom contract");
    return node_->window;
}

const Contract& Contract::left() const
{
    if (!node_->left)
        moneta::fail(ErrorCode::InvalidArgument, "left() on leaf contract");
    return *node_->left;
}

const Contract& Contract::right() const
{
    if (!node_->right)
        moneta::fail(ErrorCode::InvalidArgument, "right() on leaf contract");
    return *node_->right;
}

bool Contract::nullable() const noexcept
{
    return node_->nullable;
}

std::optional<std::uint64_t> Contract::horizon() const noexcept
{
    return node_->horizon;
}

std::size_t Contract::size() const noexcept
{
    return node_->size;
}

std::string Contract::to_string() const
{
    switch (kind())
    {
    case Kind::Done: return "done";
    case Kind::Fail: return "fail";
    case Kind::Atom:
        return "atom(" + pattern().to_string() + " @" + std::to_string(window().earliest) + ".."
               + std::to_string(window().latest) + ")";
    case Kind::Then: return "then(" + left().to_string() + ", " + right().to_string() + ")";
    case Kind::Or: return "or(" + left().to_string() + ", " + right().to_string() + ")";
    case Kind::Both: return "both(" + left().to_string() + ", " + right().to_string() + ")";
    }
    return "?";
}

std::strong_ordering operator<=>(const Contract& a, const Contract& b)
{
    if (a.node_ == b.node_)
        return std::strong_ordering::equal;
    if (auto c = a.kind() <=> b.kind(); c != 0)
        return c;
    switch (a.kind())
    {
    case Contract::Kind::Done:
    case Contract::Kind::Fail: return std::strong_ordering::equal;
    case Contract::Kind::Atom:
        if (auto c = a.window() <=> b.window(); c != 0)
            return c;
        return compare_patterns(a.pattern(), b.pattern());
    default:
        if (auto c = a.size() <=> b.size(); c != 0)
            return c;
        if (auto c = a.left() <=> b.left(); c != 0)
            return c;
        return a.right() <=> b.right();
    }
}

// ---------------------------------------------------------------------------
// Residuation

Contract derivative(const Contract& c, const Event& e)
{
    using K = Contract::Kind;
    switch (c.kind())
    {
    case K::Done:
    case K::Fail: return Contract::fail();
    case K::Atom:
        return (c.window().contains(e.time) && c.pattern().matches(e)) ? Contract::done() : Contract::fail();
    case K::Then: {
        Contract first = Contract::then(derivative(c.left(), e), c.right());
        if (!c.left().nullable())
            return first;
        return Contract::either(first, derivative(c.right(), e));
    }
    case K::Or: return Contract::either(derivative(c.left(), e), derivative(c.right(), e));
    case K::Both:
        return Contract::either(Contract::both(derivative(c.left(), e), c.right()),
                                Contract::both(c.left(), derivative(c.right(), e)));
    }
    return Contract::fail();
}

bool binds(const Contract& c, const Event& e)
{
    switch (c.kind())
    {
    case Contract::Kind::Done:
    case Contract::Kind::Fail: return false;
    case Contract::Kind::Atom: return c.pattern().matches(e);
    default: return binds(c.left(), e) || binds(c.right(), e);
    }
}

namespace {

void collect_atoms(const Contract& c, std::vector<Contract>& out)
{
    switch (c.kind())
    {
    case Contract::Kind::Done:
    case Contract::Kind::Fail: return;
    case Contract::Kind::Atom:
        if (std::find(out.begin(), out.end(), c) == out.end())
            out.push_back(c);
        return;
    default:
        collect_atoms(c.left(), out);
        collect_atoms(c.right(), out);
    }
}

} // namespace

bool viable(const Contract& c, std::uint64_t now)
{
    // Search over (residual, next free time). From time t the next event
    // either fires at t (one representative event per atom; an event that
    // matches several atoms only adds alternatives) or we wait until the
    // next window opens.
    using State = std::pair<Contract, std::uint64_t>;
    std::set<State> seen;
    std::deque<State> queue;
    auto push = [&](Contract r, std::uint64_t t) {
        if (r.kind() == Contract::Kind::Fail)
            return;
        State s{std::move(r), t};
        if (seen.insert(s).second)
            queue.push_back(std::move(s));
    };
    push(c, now);
    while (!queue.empty())
    {
        auto [r, t] = std::move(queue.front());
        queue.pop_front();
        if (r.nullable())
            return true;
        const auto horizon = r.horizon();
        if (!horizon || t > *horizon)
            continue;
        std::vector<Contract> atoms;
        collect_atoms(r, atoms);
        std::optional<std::uint64_t> next_open;
        for (const auto& a : atoms)
        {
            const Window& w = a.window();
            if (w.contains(t))
                push(derivative(r, a.pattern().representative(t)), t + 1);
            else if (w.earliest > t && (!next_open || w.earliest < *next_open))
                next_open = w.earliest;
        }
        if (next_open)
            push(r, *next_open);
    }
    return false;
}

std::string_view to_string(ContractStatus status)
{
    switch (status)
    {
    case ContractStatus::Live: return "live";
    case ContractStatus::Completed: return "completed";
    case ContractStatus::Breached: return "breached";
    }
    return "?";
}

ContractStatus classify(const Contract& c, std::uint64_t now)
{
    if (c.nullable())
        return ContractStatus::Completed;
    if (!viable(c, now))
        return ContractStatus::Breached;
    return ContractStatus::Live;
}

ContractState ContractState::start(Contract c, std::uint64_t now)
{
    const ContractStatus status = classify(c, now);
    return ContractState{std::move(c), status, now};
}

ContractState advance(const ContractState& cs, const Event& e)
{
    if (cs.status == ContractStatus::Breached)
        fail(ErrorCode::RejectedEvent, "contract already breached");
    if (e.time < cs.now)
        fail(ErrorCode::NonMonotoneTime, "event at t=" + std::to_string(e.time) + " precedes contract clock");
    Contract next = derivative(cs.residual, e);
    if (next.kind() == Contract::Kind::Fail)
        fail(ErrorCode::RejectedEvent, "contract does not permit " + describe(e));
    return ContractState::start(std::move(next), e.time + 1);
}

ContractState tick(const ContractState& cs, std::uint64_t now)
{
    if (now < cs.now)
        return cs;
    if (cs.status != ContractStatus::Live)
        return ContractState{cs.residual, cs.status, now};
    return ContractState::start(cs.residual, now);
}

// ---------------------------------------------------------------------------
// Standard contracts

Contract make_exchange(const AgentId& a, const AgentId& b, const Bundle& x, const Bundle& y, Window window)
{
    if (x.has_negative() || y.has_negative())
        fail(ErrorCode::NegativeEntry, "exchange bundles must be non-negative");
    if (x.empty() || y.empty())
        fail(ErrorCode::DegenerateExchange, "an exchange needs something on both sides");
    return Contract::both(Contract::atom(EventPattern{a, b, x, std::nullopt}, window),
                          Contract::atom(EventPattern{b, a, y, std::nullopt}, window));
}

Contract make_loan(const AgentId& lender, const AgentId& borrower, const Bundle& principal,
                   const std::optional<Bundle>& collateral, std::uint64_t term, std::uint64_t start)
{
    if (principal.empty() || principal.has_negative())
        fail(ErrorCode::InvalidArgument, "loan principal must be positive");
    Bundle note;
    for (const auto& e : principal)
    {
        const Claim& u = (e.claim.is_iou() && e.claim.issuer() == lender) ? e.claim.underlying() : e.claim;
        note.add(Claim::iou(borrower, u), e.qty);
    }
    Bundle lender_receipt, borrower_receipt;
    if (collateral)
    {
        if (collateral->empty() || collateral->has_negative())
            fail(ErrorCode::InvalidArgument, "collateral must be positive");
        for (const auto& e : *collateral)
        {
            lender_receipt.add(Claim::iou(lender, e.claim), e.qty);
            borrower_receipt.add(Claim::iou(borrower, e.claim), e.qty);
        }
    }
    const Window due{start, start + term};
    const Bundle lent = principal + lender_receipt;
    const Bundle pledged = note + borrower_receipt;
    const Contract initial = make_exchange(lender, borrower, lent, pledged, due);
    const Contract repay = make_exchange(borrower, lender, lent, pledged, due);
    if (!collateral)
        return Contract::then(initial, repay);
    const Window grace{start + term + 1, start + 2 * term + 1};
    const Contract seize = make_exchange(borrower, lender, *collateral + lender_receipt, pledged, grace);
    return Contract::then(initial, Contract::either(repay, seize));
}

} // namespace moneta
