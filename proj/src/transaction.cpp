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

#include "moneta/transaction.hpp"

#include <algorithm>

namespace moneta {

std::string_view to_string(TxnPhase phase)
{
    switch (phase)
    {
    case TxnPhase::Idle: return "idle";
    case TxnPhase::Prepared: return "prepared";
    case TxnPhase::Committed: return "committed";
    case TxnPhase::Aborted: return "aborted";
    }
    return "?";
}

ResourceId escrow_of(const std::string& txn, std::size_t leg)
{
    return ResourceId("escrow:" + txn + ":" + std::to_string(leg));
}

namespace {

ResourceId source_of(const Transfer& t) { return t.source.value_or(account_of(t.from)); }
ResourceId target_of(const Transfer& t) { return t.target.value_or(account_of(t.to)); }

void require_agent(const OwnershipState& s, const AgentId& a)
{
    if (!s.has_agent(a))
        fail(ErrorCode::UnknownAgent, "unknown agent '" + a.value + "'");
}

} // namespace

TxnPhase TransactionManager::prepare(OwnershipState& state, const Transaction& txn)
{
    if (txn.legs.empty())
        fail(ErrorCode::EmptyTransaction, "transaction '" + txn.id + "' has no legs");
    if (records_.count(txn.id))
        fail(ErrorCode::DuplicateId, "transaction id '" + txn.id + "' already used");

    OwnershipState next = state;
    bool added_agent = false;
    if (!next.has_agent(agent_))
    {
        next.add_agent(agent_);
        added_agent = true;
    }
    Record r{txn, TxnPhase::Idle, 0, std::nullopt};
    try
    {
        for (std::size_t i = 0; i < txn.legs.size(); ++i)
        {
            const Transfer& leg = txn.legs[i];
            require_agent(next, leg.from);
            require_agent(next, leg.to);
            if (leg.mode == TransferMode::Control)
            {
                if (!leg.source)
                    fail(ErrorCode::InvalidArgument, "control leg needs the resource id to hand over");
                if (!leg.bundle.empty() && normalize(leg.bundle, fiat_) != next.balance(*leg.source))
                    fail(ErrorCode::ValueMismatch, "'" + leg.source->value + "' does not hold " + to_string(leg.bundle));
                next.transfer_control(*leg.source, leg.from, agent_);
            }
            else
            {
                const ResourceId src = source_of(leg), dst = target_of(leg);
                if (next.controller(src) != leg.from)
                    fail(ErrorCode::NotController, leg.from.value + " does not control '" + src.value + "'");
                if (next.controller(dst) != leg.to)
                    fail(ErrorCode::NotController, leg.to.value + " does not control '" + dst.value + "'");
                const ResourceId escrow = escrow_of(txn.id, i);
                next.create(escrow, agent_, ResourceKind::Account);
                next.transfer_balance(src, escrow, normalize(leg.bundle, fiat_));
            }
            r.escrowed = i + 1;
        }
    }
    catch (const Error& e)
    {
        // Nothing of `next` is kept, so every earlier escrow is released.
        r.phase = TxnPhase::Aborted;
        r.escrowed = 0;
        r.cause = e;
        records_.emplace(txn.id, std::move(r));
        return TxnPhase::Aborted;
    }
    r.phase = TxnPhase::Prepared;
    state = std::move(next);
    if (added_agent)
        registered_agent_ = true;
    ++open_;
    records_.emplace(txn.id, std::move(r));
    return TxnPhase::Prepared;
}

void TransactionManager::commit(OwnershipState& state, const std::string& id)
{
    auto it = records_.find(id);
    if (it == records_.end() || it->second.phase != TxnPhase::Prepared)
        fail(ErrorCode::WrongPhase, "commit of transaction '" + id + "' in phase "
                                        + std::string(to_string(phase(id))));
    Record& r = it->second;
    OwnershipState next = state;
    for (std::size_t i = 0; i < r.txn.legs.size(); ++i)
    {
        const Transfer& leg = r.txn.legs[i];
        if (leg.mode == TransferMode::Control)
        {
            next.transfer_control(*leg.source, agent_, leg.to);
            continue;
        }
        const ResourceId escrow = escrow_of(id, i);
        next.transfer_balance(escrow, target_of(leg), next.balance(escrow));
        next.remove(escrow);
    }
    state = std::move(next);
    r.phase = TxnPhase::Committed;
    r.escrowed = 0;
    --open_;
    retire_agent_if_idle(state);
}

void TransactionManager::release(OwnershipState& state, Record& r)
{
    OwnershipState next = state;
    for (std::size_t i = r.escrowed; i-- > 0;)
    {
        const Transfer& leg = r.txn.legs[i];
        if (leg.mode == TransferMode::Control)
        {
            next.transfer_control(*leg.source, agent_, leg.from);
            continue;
        }
        const ResourceId escrow = escrow_of(r.txn.id, i);
        next.transfer_balance(escrow, source_of(leg), next.balance(escrow));
        next.remove(escrow);
    }
    state = std::move(next);
    r.escrowed = 0;
}

void TransactionManager::abort(OwnershipState& state, const std::string& id)
{
    auto it = records_.find(id);
    if (it == records_.end())
        return; // Idle: nothing to undo
    Record& r = it->second;
    switch (r.phase)
    {
    case TxnPhase::Idle:
    case TxnPhase::Aborted: return;
    case TxnPhase::Committed: fail(ErrorCode::WrongPhase, "transaction '" + id + "' already committed");
    case TxnPhase::Prepared: break;
    }
    release(state, r);
    r.phase = TxnPhase::Aborted;
    --open_;
    retire_agent_if_idle(state);
}

TxnPhase TransactionManager::execute(OwnershipState& state, const Transaction& txn)
{
    if (prepare(state, txn) == TxnPhase::Aborted)
        return TxnPhase::Aborted;
    commit(state, txn.id);
    return TxnPhase::Committed;
}

TxnPhase TransactionManager::phase(const std::string& id) const
{
    auto it = records_.find(id);
    return it == records_.end() ? TxnPhase::Idle : it->second.phase;
}

std::optional<Error> TransactionManager::cause(const std::string& id) const
{
    auto it = records_.find(id);
    if (it == records_.end())
        return std::nullopt;
    return it->second.cause;
}

void TransactionManager::retire_agent_if_idle(OwnershipState& state)
{
    if (open_ != 0 || !registered_agent_)
        return;
    state.remove_agent(agent_);
    registered_agent_ = false;
}

// ---------------------------------------------------------------------------
// Netting

namespace {

struct Endpoint
{
    AgentId agent;
    ResourceId rid;

    auto operator<=>(const Endpoint&) const = default;
};

std::optional<ResourceId> non_default(const Endpoint& e)
{
    if (e.rid == account_of(e.agent))
        return std::nullopt;
    return e.rid;
}

} // namespace

std::vector<Transfer> net(const std::vector<Transfer>& transfers)
{
    // Net position per endpoint and claim; settled greedily from payers to
    // receivers in endpoint order, so each pair meets at most once per claim.
    std::map<Claim, std::map<Endpoint, Quantity>> position;
    std::vector<Transfer> passthrough;
    for (const Transfer& t : transfers)
    {
        if (t.mode == TransferMode::Control)
        {
            passthrough.push_back(t);
            continue;
        }
        const Endpoint a{t.from, source_of(t)}, b{t.to, target_of(t)};
        if (a == b)
            continue;
        for (const auto& e : t.bundle)
        {
            auto& m = position[e.claim];
            m[a] = checked_sub(m[a], e.qty);
            m[b] = checked_add(m[b], e.qty);
        }
    }
    std::map<std::pair<Endpoint, Endpoint>, Bundle> settle;
    for (const auto& [claim, m] : position)
    {
        std::vector<std::pair<Endpoint, Quantity>> payers, receivers;
        for (const auto& [ep, q] : m)
        {
            if (q < 0)
                payers.emplace_back(ep, -q);
            else if (q > 0)
                receivers.emplace_back(ep, q);
        }
        std::size_t r = 0;
        for (auto& [payer, owed] : payers)
            while (owed > 0)
            {
                auto& [receiver, due] = receivers[r];
                const Quantity q = std::min(owed, due);
                settle[{payer, receiver}].add(claim, q);
                owed -= q;
                due -= q;
                if (due == 0)
                    ++r;
            }
    }
    std::vector<Transfer> out;
    for (const auto& [pair, bundle] : settle)
    {
        const auto& [from, to] = pair;
        out.push_back(Transfer{from.agent, to.agent, bundle, TransferMode::Balance, non_default(from), non_default(to)});
    }
    out.insert(out.end(), passthrough.begin(), passthrough.end());
    return out;
}

void apply_sequential(OwnershipState& state, const std::vector<Transfer>& transfers, const FiatRegistry& fiat)
{
    OwnershipState next = state;
    for (const Transfer& t : transfers)
        apply_transfer(next, t, fiat);
    state = std::move(next);
}

void apply_batch(OwnershipState& state, const std::vector<Transfer>& transfers, const FiatRegistry& fiat)
{
    OwnershipState next = state;
    std::vector<std::pair<ResourceId, Bundle>> deltas;
    for (const Transfer& t : transfers)
    {
        if (t.mode == TransferMode::Control)
            continue;
        require_agent(next, t.from);
        require_agent(next, t.to);
        const ResourceId src = source_of(t), dst = target_of(t);
        if (next.controller(src) != t.from)
            fail(ErrorCode::NotController, t.from.value + " does not control '" + src.value + "'");
        if (next.controller(dst) != t.to)
            fail(ErrorCode::NotController, t.to.value + " does not control '" + dst.value + "'");
        if (t.bundle.has_negative())
            fail(ErrorCode::NegativeEntry, "liabilities are not transferable: " + to_string(t.bundle));
        const Bundle b = normalize(t.bundle, fiat);
        deltas.emplace_back(src, -b);
        deltas.emplace_back(dst, b);
    }
    next.adjust_balances(deltas);
    for (const Transfer& t : transfers)
        if (t.mode == TransferMode::Control)
            apply_transfer(next, t, fiat);
    state = std::move(next);
}

} // namespace moneta
