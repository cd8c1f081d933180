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

// Deterministic simulation of two-phase commit across resource-manager
// nodes, each the sole authority for a partition of resource ids. Runs
// single-threaded under a seeded scheduler; crash faults are data.

#include "moneta/ledger.hpp"
#include "moneta/transaction.hpp"

#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace moneta {

using NodeId = std::string;

/// Protocol points at which a node can crash. For a participant: start
/// (down from the outset), prepare (on receiving Prepare, message lost),
/// vote (after escrowing, before the vote leaves), decision (on receiving
/// Commit/Abort, message lost), ack (after applying, before the Ack).
/// For the coordinator: start (before any Prepare), prepare (after sending
/// them), vote (on the first Vote), decision (after logging it and telling
/// only the first participant), ack (on the first Ack).
enum class Phase
{
    Start,
    Prepare,
    Vote,
    Decision,
    Ack,
};

inline constexpr Phase kAllPhases[] = {Phase::Start, Phase::Prepare, Phase::Vote, Phase::Decision, Phase::Ack};

std::string_view to_string(Phase p);
/// Throws InvalidArgument for an unknown name.
Phase parse_phase(std::string_view name);

struct FaultPoint
{
    NodeId node;
    Phase phase;

    bool operator==(const FaultPoint&) const = default;
};

using FaultPlan = std::vector<FaultPoint>;

/// Parses `node2@prepare`.
FaultPoint parse_fault_point(std::string_view text);

enum class MsgKind
{
    Prepare,
    Vote,
    Commit,
    Abort,
    Ack,
    Query, ///< in-doubt participant asking for the outcome
};

std::string_view to_string(MsgKind k);

struct WireMsg
{
    MsgKind kind;
    std::string txn;
    NodeId from;
    NodeId to;
    bool yes = false;              ///< Vote only
    std::vector<std::size_t> legs; ///< Prepare only: legs touching the receiver
};

struct Partition
{
    NodeId node;
    OwnershipState state;
};

/// Splits a state by agent: agent i (in sorted order) and every id it
/// controls go to nodes[i % nodes.size()].
std::vector<Partition> partition_by_agent(const OwnershipState& s, const std::vector<NodeId>& nodes);

struct RunResult
{
    TxnPhase outcome = TxnPhase::Aborted;
    std::vector<std::string> trace;
    std::uint64_t steps = 0;
    /// Conservation (with in-transit value) held after every delivery.
    bool conserved = true;
    bool terminated = true;
};

class SimNet
{
public:
    SimNet(std::vector<Partition> partitions, std::uint64_t seed, FaultPlan plan = {}, std::uint64_t timeout = 50);

    /// Runs the protocol for one transaction to quiescence: every message
    /// delivered or lost, crashed nodes recovered, in-doubt participants
    /// resolved. Throws EmptyTransaction, InvalidArgument for control legs
    /// or legs whose ids no node owns.
    RunResult run_txn(const NodeId& coordinator, const Transaction& txn);

    const std::vector<Partition>& partitions() const noexcept { return parts_; }
    OwnershipState global_state() const;
    const NodeId& owner_of(const ResourceId& rid) const;

private:
    enum class PState
    {
        None,
        Prepared,
        Committed,
        Aborted,
    };
    struct Participant
    {
        PState state = PState::None;
        std::vector<std::size_t> legs;
        std::optional<std::uint64_t> query_at;
    };
    struct Coordinator
    {
        std::vector<NodeId> participants;
        std::set<NodeId> yes;
        std::optional<bool> decision; // logged: true = commit
        std::set<NodeId> acked;
        std::optional<std::uint64_t> vote_deadline;
        std::optional<std::uint64_t> ack_deadline;
        bool started = false;
    };
    enum class LegSource
    {
        Untouched,
        Escrowed,
        PaidOut,
        Returned,
    };

    Partition& part(const NodeId& n);
    void send(WireMsg m);
    bool crash_point(const NodeId& n, Phase p);
    void deliver(const WireMsg& m);
    void coordinator_start();
    void coordinator_recv(const WireMsg& m);
    void decide(bool commit);
    void broadcast_decision(const std::vector<NodeId>& to);
    void participant_recv(const WireMsg& m);
    bool participant_prepare(const NodeId& n, const std::vector<std::size_t>& legs);
    void participant_apply(const NodeId& n, bool commit);
    void recover(const NodeId& n);
    void fire_timers();
    std::optional<std::uint64_t> next_timer() const;
    bool check_conservation() const;
    void retire_rm_agent(const NodeId& n);

    std::vector<Partition> parts_;
    std::map<ResourceId, NodeId> owner_;
    std::mt19937_64 rng_;
    FaultPlan plan_;
    std::uint64_t timeout_;
    std::uint64_t clock_ = 0;

    // per-run state
    const Transaction* txn_ = nullptr;
    NodeId coord_;
    std::map<std::pair<NodeId, NodeId>, std::deque<WireMsg>> queues_;
    std::set<NodeId> crashed_;
    std::map<NodeId, Participant> participants_;
    Coordinator coordinator_;
    std::vector<LegSource> leg_source_;
    std::vector<bool> leg_credited_;
    Bundle initial_total_;
    RunResult* result_ = nullptr;
};

/// One single-crash plan per (node, phase); empty for an empty transaction.
std::vector<FaultPlan> enumerate_fault_points(const Transaction& txn, const std::vector<NodeId>& nodes,
                                              const std::vector<Phase>& phases = {std::begin(kAllPhases),
                                                                                  std::end(kAllPhases)});

} // namespace moneta
