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

// All-or-nothing execution of multi-leg transactions. Prepare moves every
// sent bundle into an escrow id controlled by the transaction manager's
// own agent; commit pays the escrows out, abort pays them back.

#include "moneta/error.hpp"
#include "moneta/ledger.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace moneta {

struct Transaction
{
    std::string id;
    std::vector<Transfer> legs;

    bool operator==(const Transaction&) const = default;
};

enum class TxnPhase
{
    Idle,
    Prepared,
    Committed,
    Aborted,
};

std::string_view to_string(TxnPhase phase);

ResourceId escrow_of(const std::string& txn, std::size_t leg);

class TransactionManager
{
public:
    explicit TransactionManager(AgentId agent = AgentId("tm"), FiatRegistry fiat = {})
        : agent_(std::move(agent)), fiat_(std::move(fiat))
    {
    }

    const AgentId& agent() const noexcept { return agent_; }

    /// Escrows every leg in list order. The first failing leg releases the
    /// earlier escrows and leaves the transaction Aborted; the cause is kept.
    /// Throws EmptyTransaction, DuplicateId for a reused id.
    TxnPhase prepare(OwnershipState& state, const Transaction& txn);
    /// Throws WrongPhase unless Prepared.
    void commit(OwnershipState& state, const std::string& id);
    /// No-op at Idle or Aborted; throws WrongPhase after commit.
    void abort(OwnershipState& state, const std::string& id);

    /// prepare then commit; returns Committed or Aborted.
    TxnPhase execute(OwnershipState& state, const Transaction& txn);

    TxnPhase phase(const std::string& id) const;
    /// Why the transaction aborted, if it did during prepare.
    std::optional<Error> cause(const std::string& id) const;

private:
    struct Record
    {
        Transaction txn;
        TxnPhase phase = TxnPhase::Idle;
        std::size_t escrowed = 0; // legs [0, escrowed) hold escrow
        std::optional<Error> cause;
    };

    void release(OwnershipState& state, Record& r);
    void retire_agent_if_idle(OwnershipState& state);

    AgentId agent_;
    FiatRegistry fiat_;
    std::map<std::string, Record> records_;
    bool registered_agent_ = false;
    std::size_t open_ = 0;
};

/// Multilateral netting: each party's net position per claim is settled
/// by at most one transfer per agent pair and claim, so a closed cycle
/// nets to nothing. Control-mode transfers pass through unchanged, after
/// the netted ones.
std::vector<Transfer> net(const std::vector<Transfer>& transfers);

/// Applies the list one transfer at a time.
void apply_sequential(OwnershipState& state, const std::vector<Transfer>& transfers, const FiatRegistry& fiat = {});

/// Applies the list as one batch: all balance changes at once, rejected
/// (InsufficientBalance, state untouched) only if some final balance would
/// go negative. Netted lists need batch semantics, since a net flow can
/// depend on funds that arrive elsewhere in the same batch.
void apply_batch(OwnershipState& state, const std::vector<Transfer>& transfers, const FiatRegistry& fiat = {});

} // namespace moneta
