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

// Ownership state (control map composed with balance map), REA events and
// the world that applies them.

#include "moneta/resource.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

namespace moneta {

struct ResourceId
{
    std::string value;

    ResourceId() = default;
    ResourceId(std::string v) : value(std::move(v)) {}
    ResourceId(const char* v) : value(v) {}

    auto operator<=>(const ResourceId&) const = default;
    bool operator==(const ResourceId&) const = default;
};

enum class ResourceKind
{
    Account,   ///< mutable balance, moved by balance updates
    Token,     ///< immutable balance, moved by control transfer
    Liability, ///< an issuer's liability ledger; never transferable
};

/// Who may read a balance through OwnershipState::visible_balance.
enum class Privacy
{
    Public,
    ThirdParty, ///< controller and the resource manager
    Private,    ///< controller only
};

std::string_view to_string(ResourceKind kind);
std::string_view to_string(Privacy privacy);

struct Slot
{
    AgentId controller;
    Bundle balance;
    ResourceKind kind = ResourceKind::Account;
    Privacy privacy = Privacy::Public;
    std::optional<AgentId> manager;

    bool operator==(const Slot&) const = default;
};

/// Conventional ids created by OwnershipState::add_agent.
ResourceId account_of(const AgentId& agent);
ResourceId liability_ledger_of(const AgentId& agent);

/// Control map and balance map share one key set, so they are stored
/// together as rid -> Slot. Copying the state takes a snapshot; the
/// mutating members validate before they write and leave the state
/// untouched when they throw.
class OwnershipState
{
public:
    // -- queries ----------------------------------------------------------
    bool contains(const ResourceId& rid) const { return slots_.count(rid) != 0; }
    const Slot& slot(const ResourceId& rid) const;
    const AgentId& controller(const ResourceId& rid) const { return slot(rid).controller; }
    const Bundle& balance(const ResourceId& rid) const { return slot(rid).balance; }
    const std::map<ResourceId, Slot>& slots() const noexcept { return slots_; }
    bool has_agent(const AgentId& agent) const { return agents_.count(agent) != 0; }
    const std::set<AgentId>& agents() const noexcept { return agents_; }

    /// Sum of the balances of every id the agent controls.
    Bundle holdings_of(const AgentId& agent) const;
    /// Same sum with liability ledgers kept apart from assets.
    Holdings gross_holdings_of(const AgentId& agent) const;
    std::vector<ResourceId> ids_of(const AgentId& agent) const;
    /// Signed sum of all balances.
    Bundle total() const;

    std::optional<Bundle> visible_balance(const AgentId& observer, const ResourceId& rid) const;

    // -- construction -----------------------------------------------------
    /// Registers an agent with an empty default account and liability
    /// ledger. Idempotent.
    void add_agent(const AgentId& agent);
    void create(const ResourceId& rid, const AgentId& controller, ResourceKind kind, Bundle balance = {},
                Privacy privacy = Privacy::Public, std::optional<AgentId> manager = std::nullopt);
    /// Removes an id whose balance is empty.
    void remove(const ResourceId& rid);
    /// Inverse of add_agent; the agent must control nothing but its empty
    /// default account and liability ledger.
    void remove_agent(const AgentId& agent);
    /// Adds an outside endowment to an account (initial state only; breaks
    /// conservation by construction).
    void endow(const ResourceId& rid, const Bundle& bundle);
    /// Inverse of endow. Used where value leaves this state for another
    /// partition; the caller accounts for it.
    void withdraw(const ResourceId& rid, const Bundle& bundle);

    /// Copy keeping only the ids `keep` accepts; every agent is kept.
    OwnershipState restricted(const std::function<bool(const ResourceId&)>& keep) const;
    /// Union of states over disjoint id sets (DuplicateResource otherwise).
    static OwnershipState merged(const std::vector<OwnershipState>& parts);

    // -- operations (in place) --------------------------------------------
    void transfer_control(const ResourceId& rid, const AgentId& from, const AgentId& to);
    void transfer_balance(const ResourceId& src, const ResourceId& dst, const Bundle& bundle);
    /// Returns the ids created for `issued`, in order.
    std::vector<ResourceId> retire_and_issue(const AgentId& agent, const std::vector<ResourceId>& retired,
                                             const std::vector<std::pair<ResourceKind, Bundle>>& issued);
    /// Moves `bundle` out of an account into a fresh token of the same controller.
    ResourceId mint_token(const ResourceId& account, const Bundle& bundle);
    /// Inverse of mint_token: the token's balance returns to an account of
    /// the same controller and the token id is retired.
    void melt_token(const ResourceId& token, const ResourceId& account);
    void issue(const AgentId& issuer, const Claim& underlying, Quantity qty, const FiatRegistry& reg);
    void annihilate(const AgentId& agent, const Claim& underlying, Quantity qty, const FiatRegistry& reg);
    void mint_fiat(const AgentId& cb, const std::string& currency, Quantity qty, const FiatRegistry& reg);
    void transform(const AgentId& agent, const Bundle& consumed, const Bundle& produced);
    /// Adds each delta to its account in one step. The deltas must sum to
    /// zero and leave every balance non-negative.
    void adjust_balances(const std::vector<std::pair<ResourceId, Bundle>>& deltas);

    bool operator==(const OwnershipState&) const = default;

private:
    Slot& slot_mut(const ResourceId& rid);
    ResourceId fresh_token_id();

    std::map<ResourceId, Slot> slots_;
    std::set<AgentId> agents_;
    std::uint64_t next_token_ = 1;
};

// Pure forms of the state operations.
OwnershipState transfer_control(const OwnershipState& s, const ResourceId& rid, const AgentId& from,
                                const AgentId& to);
OwnershipState transfer_balance(const OwnershipState& s, const ResourceId& src, const ResourceId& dst,
                                const Bundle& bundle);
OwnershipState retire_and_issue(const OwnershipState& s, const AgentId& agent,
                                const std::vector<ResourceId>& retired,
                                const std::vector<std::pair<ResourceKind, Bundle>>& issued);
OwnershipState mint_fiat(const OwnershipState& s, const AgentId& cb, const std::string& currency, Quantity qty,
                         const FiatRegistry& reg);

// ---------------------------------------------------------------------------
// Events

enum class TransferMode
{
    Balance,
    Control,
};

std::string_view to_string(TransferMode mode);

struct Transfer
{
    AgentId from;
    AgentId to;
    Bundle bundle;
    TransferMode mode = TransferMode::Balance;
    /// Balance mode: defaults to the agents' accounts. Control mode: the id
    /// whose control moves (required).
    std::optional<ResourceId> source;
    std::optional<ResourceId> target;

    bool operator==(const Transfer&) const = default;
};

struct Transformation
{
    AgentId agent;
    Bundle consumed;
    Bundle produced;

    bool operator==(const Transformation&) const = default;
};

/// IOU pair creation: a transformation of nothing into asset + liability.
struct Issue
{
    AgentId issuer;
    Claim underlying;
    Quantity qty;

    bool operator==(const Issue&) const = default;
};

/// The inverse of Issue, once the IOU is back with its issuer.
struct Annihilation
{
    AgentId agent;
    Claim underlying;
    Quantity qty;

    bool operator==(const Annihilation&) const = default;
};

struct Communication
{
    AgentId from;
    AgentId to;
    std::string fact;

    bool operator==(const Communication&) const = default;
};

struct Conclusion
{
    AgentId agent;
    std::vector<std::string> premises;
    std::string fact;

    bool operator==(const Conclusion&) const = default;
};

struct Observation
{
    AgentId agent;
    std::string fact;

    bool operator==(const Observation&) const = default;
};

using EventBody = std::variant<Transfer, Transformation, Issue, Annihilation, Communication, Conclusion, Observation>;

struct Event
{
    EventBody body;
    std::uint64_t time = 0;

    bool operator==(const Event&) const = default;
};

std::string describe(const Event& e);

/// Applies a transfer to the ownership state alone (no clock, no knowledge).
void apply_transfer(OwnershipState& s, const Transfer& t, const FiatRegistry& reg = {});

class KnowledgeState
{
public:
    bool knows(const AgentId& agent, const std::string& fact) const;
    void learn(const AgentId& agent, const std::string& fact);
    const std::set<std::string>& facts_of(const AgentId& agent) const;

    bool operator==(const KnowledgeState&) const = default;

private:
    std::map<AgentId, std::set<std::string>> facts_;
};

/// Ownership plus knowledge plus the fiat registry that normalizes claims.
struct World
{
    OwnershipState state;
    KnowledgeState knowledge;
    FiatRegistry fiat;
    std::optional<std::uint64_t> last_time;

    /// In-place apply with strong exception guarantee.
    void apply(const Event& e);
};

World apply_event(const World& world, const Event& e);

/// Change of the signed world total an event causes (zero for everything
/// but Transformation).
Bundle total_delta(const Event& e);

} // namespace moneta
