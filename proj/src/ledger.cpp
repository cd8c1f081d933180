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

#include "moneta/ledger.hpp"

#include "moneta/error.hpp"

#include <algorithm>

namespace moneta {

std::string_view to_string(ResourceKind kind)
{
    switch (kind)
    {
    case ResourceKind::Account: return "account";
    case ResourceKind::Token: return "token";
    case ResourceKind::Liability: return "liability";
    }
    return "?";
}

std::string_view to_string(Privacy privacy)
{
    switch (privacy)
    {
    case Privacy::Public: return "public";
    case Privacy::ThirdParty: return "third-party";
    case Privacy::Private: return "private";
    }
    return "?";
}

ResourceId account_of(const AgentId& agent)
{
    return ResourceId("acct:" + agent.value);
}

ResourceId liability_ledger_of(const AgentId& agent)
{
    return ResourceId("liab:" + agent.value);
}

// ---------------------------------------------------------------------------
// queries

const Slot& OwnershipState::slot(const ResourceId& rid) const
{
    auto it = slots_.find(rid);
    if (it == slots_.end())
        fail(ErrorCode::UnknownResource, "no resource id '" + rid.value + "'");
    return it->second;
}

Slot& OwnershipState::slot_mut(const ResourceId& rid)
{
    auto it = slots_.find(rid);
    if (it == slots_.end())
        fail(ErrorCode::UnknownResource, "no resource id '" + rid.value + "'");
    return it->second;
}

Bundle OwnershipState::holdings_of(const AgentId& agent) const
{
    Bundle sum;
    for (const auto& [rid, s] : slots_)
        if (s.controller == agent)
            sum += s.balance;
    return sum;
}

Holdings OwnershipState::gross_holdings_of(const AgentId& agent) const
{
    Holdings h;
    for (const auto& [rid, s] : slots_)
    {
        if (s.controller != agent)
            continue;
        if (s.kind == ResourceKind::Liability)
            h.liabilities += s.balance;
        else
            h.assets += s.balance;
    }
    return h;
}

std::vector<ResourceId> OwnershipState::ids_of(const AgentId& agent) const
{
    std::vector<ResourceId> ids;
    for (const auto& [rid, s] : slots_)
        if (s.controller == agent)
            ids.push_back(rid);
    return ids;
}

Bundle OwnershipState::total() const
{
    Bundle sum;
    for (const auto& [rid, s] : slots_)
        sum += s.balance;
    return sum;
}

std::optional<Bundle> OwnershipState::visible_balance(const AgentId& observer, const ResourceId& rid) const
{
    const Slot& s = slot(rid);
    switch (s.privacy)
    {
    case Privacy::Public:
        return s.balance;
    case Privacy::ThirdParty:
        if (observer == s.controller || (s.manager && observer == *s.manager))
            return s.balance;
        return std::nullopt;
    case Privacy::Private:
        if (observer == s.controller)
            return s.balance;
        return std::nullopt;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// construction

void OwnershipState::add_agent(const AgentId& agent)
{
    if (agent.value.empty())
        fail(ErrorCode::InvalidArgument, "empty agent id");
    if (!agents_.insert(agent).second)
        return;
    slots_.try_emplace(account_of(agent), Slot{agent, {}, ResourceKind::Account, Privacy::Public, std::nullopt});
    slots_.try_emplace(liability_ledger_of(agent), Slot{agent, {}, ResourceKind::Liability, Privacy::Private, std::nullopt});
}

void OwnershipState::create(const ResourceId& rid, const AgentId& controller, ResourceKind kind, Bundle balance,
                            Privacy privacy, std::optional<AgentId> manager)
{
    if (rid.value.empty())
        fail(ErrorCode::InvalidArgument, "empty resource id");
    if (slots_.count(rid))
        fail(ErrorCode::DuplicateResource, "resource id '" + rid.value + "' already exists");
    if (!has_agent(controller))
        fail(ErrorCode::UnknownAgent, "unknown agent '" + controller.value + "'");
    if (kind != ResourceKind::Liability && balance.has_negative())
        fail(ErrorCode::NegativeEntry, "negative balance outside a liability ledger");
    slots_.emplace(rid, Slot{controller, std::move(balance), kind, privacy, std::move(manager)});
}

void OwnershipState::remove(const ResourceId& rid)
{
    if (!slot(rid).balance.empty())
        fail(ErrorCode::ValueMismatch, "cannot remove non-empty resource '" + rid.value + "'");
    slots_.erase(rid);
}

void OwnershipState::remove_agent(const AgentId& agent)
{
    if (!has_agent(agent))
        fail(ErrorCode::UnknownAgent, "unknown agent '" + agent.value + "'");
    const ResourceId acct = account_of(agent), liab = liability_ledger_of(agent);
    for (const auto& [rid, s] : slots_)
    {
        if (s.controller == agent && rid != acct && rid != liab)
            fail(ErrorCode::InvalidArgument, agent.value + " still controls '" + rid.value + "'");
        if ((rid == acct || rid == liab) && !s.balance.empty())
            fail(ErrorCode::ValueMismatch, agent.value + " still holds " + to_string(s.balance));
    }
    slots_.erase(acct);
    slots_.erase(liab);
    agents_.erase(agent);
}

void OwnershipState::endow(const ResourceId& rid, const Bundle& bundle)
{
    Slot& s = slot_mut(rid);
    if (s.kind != ResourceKind::Account)
        fail(ErrorCode::TokenImmutable, "endowments go to accounts, not '" + rid.value + "'");
    if (bundle.has_negative())
        fail(ErrorCode::NegativeEntry, "negative endowment");
    s.balance += bundle;
}

void OwnershipState::withdraw(const ResourceId& rid, const Bundle& bundle)
{
    Slot& s = slot_mut(rid);
    if (s.kind != ResourceKind::Account)
        fail(ErrorCode::TokenImmutable, "withdrawals come from accounts, not '" + rid.value + "'");
    if (bundle.has_negative())
        fail(ErrorCode::NegativeEntry, "negative withdrawal");
    if (!s.balance.covers(bundle))
        fail(ErrorCode::InsufficientBalance, "'" + rid.value + "' holds " + to_string(s.balance));
    s.balance -= bundle;
}

OwnershipState OwnershipState::restricted(const std::function<bool(const ResourceId&)>& keep) const
{
    OwnershipState out;
    out.agents_ = agents_;
    out.next_token_ = next_token_;
    for (const auto& [rid, s] : slots_)
        if (keep(rid))
            out.slots_.emplace(rid, s);
    return out;
}

OwnershipState OwnershipState::merged(const std::vector<OwnershipState>& parts)
{
    OwnershipState out;
    for (const auto& p : parts)
    {
        out.agents_.insert(p.agents_.begin(), p.agents_.end());
        out.next_token_ = std::max(out.next_token_, p.next_token_);
        for (const auto& [rid, s] : p.slots_)
            if (!out.slots_.emplace(rid, s).second)
                fail(ErrorCode::DuplicateResource, "'" + rid.value + "' appears in two partitions");
    }
    return out;
}

// ---------------------------------------------------------------------------
// operations

void OwnershipState::transfer_control(const ResourceId& rid, const AgentId& from, const AgentId& to)
{
    Slot& s = slot_mut(rid);
    if (s.controller != from)
        fail(ErrorCode::NotController,
             "'" + rid.value + "' is controlled by " + s.controller.value + ", not " + from.value);
    if (s.kind == ResourceKind::Liability)
        fail(ErrorCode::LiabilityLocked, "liability ledger '" + rid.value + "' is not transferable");
    if (!has_agent(to))
        fail(ErrorCode::UnknownAgent, "unknown agent '" + to.value + "'");
    s.controller = to;
}

void OwnershipState::transfer_balance(const ResourceId& src, const ResourceId& dst, const Bundle& bundle)
{
    Slot& from = slot_mut(src);
    Slot& to = slot_mut(dst);
    for (const Slot* s : {&from, &to})
    {
        if (s->kind == ResourceKind::Liability)
            fail(ErrorCode::LiabilityLocked, "liability ledgers are not transferable");
        if (s->kind == ResourceKind::Token)
            fail(ErrorCode::TokenImmutable, "token balances cannot change; transfer control instead");
    }
    if (bundle.has_negative())
        fail(ErrorCode::NegativeEntry, "liabilities are not transferable: " + to_string(bundle));
    if (bundle.empty() || src == dst)
        return;
    if (!from.balance.covers(bundle))
        fail(ErrorCode::InsufficientBalance,
             "'" + src.value + "' holds " + to_string(from.balance) + ", cannot send " + to_string(bundle));
    Bundle new_from = from.balance - bundle;
    Bundle new_to = to.balance + bundle;
    from.balance = std::move(new_from);
    to.balance = std::move(new_to);
}

void OwnershipState::adjust_balances(const std::vector<std::pair<ResourceId, Bundle>>& deltas)
{
    std::map<ResourceId, Bundle> next;
    Bundle sum;
    for (const auto& [rid, d] : deltas)
    {
        const Slot& s = slot(rid);
        if (s.kind == ResourceKind::Liability)
            fail(ErrorCode::LiabilityLocked, "liability ledgers are not transferable");
        if (s.kind == ResourceKind::Token && !d.empty())
            fail(ErrorCode::TokenImmutable, "token balances cannot change; transfer control instead");
        auto it = next.try_emplace(rid, s.balance).first;
        it->second += d;
        sum += d;
    }
    if (!sum.empty())
        fail(ErrorCode::ValueMismatch, "balance adjustments do not cancel: " + to_string(sum));
    for (const auto& [rid, b] : next)
        if (b.has_negative())
            fail(ErrorCode::InsufficientBalance, "'" + rid.value + "' would hold " + to_string(b));
    for (auto& [rid, b] : next)
        slots_.at(rid).balance = std::move(b);
}

ResourceId OwnershipState::fresh_token_id()
{
    for (;;)
    {
        ResourceId rid("tok:" + std::to_string(next_token_++));
        if (!slots_.count(rid))
            return rid;
    }
}

std::vector<ResourceId> OwnershipState::retire_and_issue(const AgentId& agent, const std::vector<ResourceId>& retired,
                                                         const std::vector<std::pair<ResourceKind, Bundle>>& issued)
{
    Bundle in;
    std::set<ResourceId> seen;
    for (const auto& rid : retired)
    {
        const Slot& s = slot(rid);
        if (s.controller != agent)
            fail(ErrorCode::NotController, "'" + rid.value + "' is not controlled by " + agent.value);
        if (s.kind == ResourceKind::Liability)
            fail(ErrorCode::LiabilityLocked, "cannot retire liability ledger '" + rid.value + "'");
        if (!seen.insert(rid).second)
            fail(ErrorCode::InvalidArgument, "'" + rid.value + "' retired twice");
        in += s.balance;
    }
    Bundle out;
    for (const auto& [kind, b] : issued)
    {
        if (kind == ResourceKind::Liability)
            fail(ErrorCode::InvalidArgument, "cannot issue a liability ledger");
        if (b.has_negative())
            fail(ErrorCode::NegativeEntry, "issued bundle has a negative entry");
        out += b;
    }
    if (in != out)
        fail(ErrorCode::ValueMismatch, "retired " + to_string(in) + " but issuing " + to_string(out));

    OwnershipState next = *this;
    for (const auto& rid : retired)
        next.slots_.erase(rid);
    std::vector<ResourceId> ids;
    for (const auto& [kind, b] : issued)
    {
        ResourceId rid = next.fresh_token_id();
        next.slots_.emplace(rid, Slot{agent, b, kind, Privacy::Public, std::nullopt});
        ids.push_back(std::move(rid));
    }
    *this = std::move(next);
    return ids;
}

ResourceId OwnershipState::mint_token(const ResourceId& account, const Bundle& bundle)
{
    const Slot& s = slot(account);
    if (s.kind != ResourceKind::Account)
        fail(ErrorCode::TokenImmutable, "tokens are minted from accounts");
    if (bundle.empty() || bundle.has_negative())
        fail(ErrorCode::NegativeEntry, "token balance must be non-empty and non-negative");
    if (!s.balance.covers(bundle))
        fail(ErrorCode::InsufficientBalance, "'" + account.value + "' cannot fund token " + to_string(bundle));
    ResourceId rid = fresh_token_id();
    slots_.emplace(rid, Slot{s.controller, bundle, ResourceKind::Token, Privacy::Public, std::nullopt});
    slot_mut(account).balance -= bundle;
    return rid;
}

void OwnershipState::melt_token(const ResourceId& token, const ResourceId& account)
{
    const Slot& t = slot(token);
    const Slot& a = slot(account);
    if (t.kind != ResourceKind::Token)
        fail(ErrorCode::InvalidArgument, "'" + token.value + "' is not a token");
    if (a.kind != ResourceKind::Account)
        fail(ErrorCode::TokenImmutable, "tokens melt into accounts");
    if (t.controller != a.controller)
        fail(ErrorCode::NotController, "'" + token.value + "' and '" + account.value + "' have different controllers");
    Bundle merged = a.balance + t.balance;
    slot_mut(account).balance = std::move(merged);
    slots_.erase(token);
}

void OwnershipState::issue(const AgentId& issuer, const Claim& underlying, Quantity qty, const FiatRegistry& reg)
{
    if (qty <= 0)
        fail(ErrorCode::InvalidArgument, "IOU quantity must be positive");
    if (!has_agent(issuer))
        fail(ErrorCode::UnknownAgent, "unknown agent '" + issuer.value + "'");
    auto [asset, liability] = issue_iou(issuer, underlying, qty);
    asset = normalize(asset, reg);
    liability = normalize(liability, reg);
    Slot& acct = slot_mut(account_of(issuer));
    Slot& liab = slot_mut(liability_ledger_of(issuer));
    Bundle new_acct = acct.balance + asset;
    Bundle new_liab = liab.balance + liability;
    acct.balance = std::move(new_acct);
    liab.balance = std::move(new_liab);
}

void OwnershipState::annihilate(const AgentId& agent, const Claim& underlying, Quantity qty, const FiatRegistry& reg)
{
    if (qty <= 0)
        fail(ErrorCode::InvalidArgument, "annihilation quantity must be positive");
    const Claim note = normalize(Claim::iou(agent, underlying), reg);
    Slot& acct = slot_mut(account_of(agent));
    Slot& liab = slot_mut(liability_ledger_of(agent));
    if (acct.balance.get(note) < qty || liab.balance.get(note) > -qty)
        fail(ErrorCode::InsufficientPosition,
             agent.value + " cannot cancel " + moneta::to_string(qty) + " " + note.to_string());
    Bundle new_acct = acct.balance;
    Bundle new_liab = liab.balance;
    new_acct.add(note, -qty);
    new_liab.add(note, qty);
    acct.balance = std::move(new_acct);
    liab.balance = std::move(new_liab);
}

void OwnershipState::mint_fiat(const AgentId& cb, const std::string& currency, Quantity qty, const FiatRegistry& reg)
{
    auto issuer = reg.issuer_of(currency);
    if (!issuer || *issuer != cb)
        fail(ErrorCode::NotIssuer, cb.value + " is not the issuer of " + currency);
    if (qty == 0)
        return;
    issue(cb, Claim::base(currency), qty, reg);
}

void OwnershipState::transform(const AgentId& agent, const Bundle& consumed, const Bundle& produced)
{
    if (consumed.has_negative() || produced.has_negative())
        fail(ErrorCode::NegativeEntry, "transformations consume and produce non-negative bundles");
    Slot& acct = slot_mut(account_of(agent));
    if (!acct.balance.covers(consumed))
        fail(ErrorCode::InsufficientBalance, agent.value + " does not hold " + to_string(consumed));
    Bundle next = acct.balance - consumed + produced;
    acct.balance = std::move(next);
}

// ---------------------------------------------------------------------------
// pure forms

OwnershipState transfer_control(const OwnershipState& s, const ResourceId& rid, const AgentId& from,
                                const AgentId& to)
{
    OwnershipState next = s;
    next.transfer_control(rid, from, to);
    return next;
}

OwnershipState transfer_balance(const OwnershipState& s, const ResourceId& src, const ResourceId& dst,
                                const Bundle& bundle)
{
    OwnershipState next = s;
    next.transfer_balance(src, dst, bundle);
    return next;
}

OwnershipState retire_and_issue(const OwnershipState& s, const AgentId& agent, const std::vector<ResourceId>& retired,
                                const std::vector<std::pair<ResourceKind, Bundle>>& issued)
{
    OwnershipState next = s;
    next.retire_and_issue(agent, retired, issued);
    return next;
}

OwnershipState mint_fiat(const OwnershipState& s, const AgentId& cb, const std::string& currency, Quantity qty,
                         const FiatRegistry& reg)
{
    OwnershipState next = s;
    next.mint_fiat(cb, currency, qty, reg);
    return next;
}

} // namespace moneta
