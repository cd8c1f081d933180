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

#include "moneta/settlement.hpp"

#include "moneta/error.hpp"

#include <algorithm>

namespace moneta {

std::string_view to_string(Phase p)
{
    switch (p)
    {
    case Phase::Start: return "start";
    case Phase::Prepare: return "prepare";
    case Phase::Vote: return "vote";
    case Phase::Decision: return "decision";
    case Phase::Ack: return "ack";
    }
    return "?";
}

Phase parse_phase(std::string_view name)
{
    for (Phase p : kAllPhases)
        if (to_string(p) == name)
            return p;
    fail(ErrorCode::InvalidArgument, "unknown protocol phase '" + std::string(name) + "'");
}

FaultPoint parse_fault_point(std::string_view text)
{
    const auto at = text.find('@');
    if (at == std::string_view::npos || at == 0)
        fail(ErrorCode::InvalidArgument, "fault point must look like node@phase, got '" + std::string(text) + "'");
    return FaultPoint{NodeId(text.substr(0, at)), parse_phase(text.substr(at + 1))};
}

std::string_view to_string(MsgKind k)
{
    switch (k)
    {
    case MsgKind::Prepare: return "Prepare";
    case MsgKind::Vote: return "Vote";
    case MsgKind::Commit: return "Commit";
    case MsgKind::Abort: return "Abort";
    case MsgKind::Ack: return "Ack";
    case MsgKind::Query: return "Query";
    }
    return "?";
}

std::vector<Partition> partition_by_agent(const OwnershipState& s, const std::vector<NodeId>& nodes)
{
    if (nodes.empty())
        fail(ErrorCode::InvalidArgument, "need at least one node");
    std::map<AgentId, std::size_t> home;
    std::size_t i = 0;
    for (const auto& a : s.agents())
        home[a] = i++ % nodes.size();
    std::vector<Partition> out;
    for (std::size_t n = 0; n < nodes.size(); ++n)
        out.push_back(Partition{nodes[n], s.restricted([&](const ResourceId& rid) {
                                    return home.at(s.controller(rid)) == n;
                                })});
    return out;
}

namespace {

AgentId rm_agent(const NodeId& n) { return AgentId("rm:" + n); }
ResourceId source_of(const Transfer& t) { return t.source.value_or(account_of(t.from)); }
ResourceId target_of(const Transfer& t) { return t.target.value_or(account_of(t.to)); }

} // namespace

SimNet::SimNet(std::vector<Partition> partitions, std::uint64_t seed, FaultPlan plan, std::uint64_t timeout)
    : parts_(std::move(partitions)), rng_(seed), plan_(std::move(plan)), timeout_(timeout)
{
    for (const auto& p : parts_)
        for (const auto& [rid, slot] : p.state.slots())
            if (!owner_.emplace(rid, p.node).second)
                fail(ErrorCode::DuplicateResource, "'" + rid.value + "' owned by two nodes");
}

Partition& SimNet::part(const NodeId& n)
{
    for (auto& p : parts_)
        if (p.node == n)
            return p;
    fail(ErrorCode::InvalidArgument, "unknown node '" + n + "'");
}

const NodeId& SimNet::owner_of(const ResourceId& rid) const
{
    auto it = owner_.find(rid);
    if (it == owner_.end())
        fail(ErrorCode::UnknownResource, "no node owns '" + rid.value + "'");
    return it->second;
}

OwnershipState SimNet::global_state() const
{
    std::vector<OwnershipState> states;
    for (const auto& p : parts_)
        states.push_back(p.state);
    return OwnershipState::merged(states);
}

void SimNet::send(WireMsg m)
{
    queues_[{m.from, m.to}].push_back(std::move(m));
}

bool SimNet::crash_point(const NodeId& n, Phase p)
{
    auto it = std::find(plan_.begin(), plan_.end(), FaultPoint{n, p});
    if (it == plan_.end())
        return false;
    plan_.erase(it);
    crashed_.insert(n);
    result_->trace.push_back("t=" + std::to_string(clock_) + " " + n + " crashed at " + std::string(to_string(p)));
    return true;
}

RunResult SimNet::run_txn(const NodeId& coordinator, const Transaction& txn)
{
    if (txn.legs.empty())
        fail(ErrorCode::EmptyTransaction, "transaction '" + txn.id + "' has no legs");
    std::set<NodeId> involved;
    for (const auto& leg : txn.legs)
    {
        if (leg.mode != TransferMode::Balance)
            fail(ErrorCode::InvalidArgument, "the settlement harness moves balances only");
        involved.insert(owner_of(source_of(leg)));
        involved.insert(owner_of(target_of(leg)));
    }

    RunResult result;
    result_ = &result;
    txn_ = &txn;
    coord_ = coordinator;
    queues_.clear();
    crashed_.clear();
    participants_.clear();
    coordinator_ = Coordinator{};
    coordinator_.participants.assign(involved.begin(), involved.end());
    for (const auto& n : involved)
        participants_[n];
    leg_source_.assign(txn.legs.size(), LegSource::Untouched);
    leg_credited_.assign(txn.legs.size(), false);
    initial_total_ = global_state().total();

    std::set<NodeId> everyone(involved);
    everyone.insert(coord_);
    for (const auto& p : parts_)
        everyone.insert(p.node);
    for (const auto& n : everyone)
        crash_point(n, Phase::Start);
    if (!crashed_.count(coord_))
        coordinator_start();

    constexpr std::uint64_t kMaxSteps = 1'000'000;
    for (std::uint64_t guard = 0;; ++guard)
    {
        if (guard == kMaxSteps)
        {
            result.terminated = false;
            break;
        }
        fire_timers();
        std::vector<std::deque<WireMsg>*> ready;
        for (auto& [key, q] : queues_)
            if (!q.empty())
                ready.push_back(&q);
        if (!ready.empty())
        {
            auto& q = *ready[std::uniform_int_distribution<std::size_t>(0, ready.size() - 1)(rng_)];
            WireMsg m = std::move(q.front());
            q.pop_front();
            ++clock_;
            ++result.steps;
            deliver(m);
            if (!check_conservation())
                result.conserved = false;
            continue;
        }
        if (!crashed_.empty())
        {
            const std::vector<NodeId> down(crashed_.begin(), crashed_.end());
            for (const auto& n : down)
                recover(n);
            continue;
        }
        if (auto t = next_timer())
        {
            clock_ = std::max(clock_, *t);
            continue;
        }
        break;
    }
    result.outcome = coordinator_.decision.value_or(false) ? TxnPhase::Committed : TxnPhase::Aborted;
    txn_ = nullptr;
    result_ = nullptr;
    return result;
}

void SimNet::deliver(const WireMsg& m)
{
    std::string line = "t=" + std::to_string(clock_) + " " + m.from + "→" + m.to + " "
                       + std::string(to_string(m.kind)) + " txn=" + m.txn;
    if (m.kind == MsgKind::Vote)
        line += m.yes ? " yes" : " no";
    if (crashed_.count(m.to))
    {
        result_->trace.push_back(line + " (lost)");
        return;
    }
    result_->trace.push_back(line);
    if (m.to == coord_ && (m.kind == MsgKind::Vote || m.kind == MsgKind::Ack || m.kind == MsgKind::Query))
        coordinator_recv(m);
    else
        participant_recv(m);
}

// ---------------------------------------------------------------------------
// coordinator

void SimNet::coordinator_start()
{
    coordinator_.started = true;
    for (const auto& n : coordinator_.participants)
    {
        WireMsg m{MsgKind::Prepare, txn_->id, coord_, n, false, {}};
        for (std::size_t i = 0; i < txn_->legs.size(); ++i)
        {
            const auto& leg = txn_->legs[i];
            if (owner_of(source_of(leg)) == n || owner_of(target_of(leg)) == n)
                m.legs.push_back(i);
        }
        send(std::move(m));
    }
    coordinator_.vote_deadline = clock_ + timeout_;
    crash_point(coord_, Phase::Prepare);
}

void SimNet::coordinator_recv(const WireMsg& m)
{
    switch (m.kind)
    {
    case MsgKind::Vote:
        if (crash_point(coord_, Phase::Vote) || coordinator_.decision)
            return;
        if (!m.yes)
        {
            decide(false);
            return;
        }
        coordinator_.yes.insert(m.from);
        if (coordinator_.yes.size() == coordinator_.participants.size())
            decide(true);
        return;
    case MsgKind::Ack:
        if (crash_point(coord_, Phase::Ack))
            return;
        coordinator_.acked.insert(m.from);
        return;
    case MsgKind::Query:
        // Presumed abort: no logged decision means nobody was told commit.
        if (!coordinator_.decision)
            decide(false);
        else
            broadcast_decision({m.from});
        return;
    default: fail(ErrorCode::InvalidArgument, "coordinator got " + std::string(to_string(m.kind)));
    }
}

void SimNet::decide(bool commit)
{
    coordinator_.decision = commit;
    coordinator_.vote_deadline.reset();
    coordinator_.ack_deadline = clock_ + timeout_;
    const auto& ps = coordinator_.participants;
    for (std::size_t i = 0; i < ps.size(); ++i)
    {
        broadcast_decision({ps[i]});
        if (i == 0 && crash_point(coord_, Phase::Decision))
            return;
    }
}

void SimNet::broadcast_decision(const std::vector<NodeId>& to)
{
    for (const auto& n : to)
        send(WireMsg{*coordinator_.decision ? MsgKind::Commit : MsgKind::Abort, txn_->id, coord_, n, false, {}});
}

// ---------------------------------------------------------------------------
// participants

void SimNet::participant_recv(const WireMsg& m)
{
    const NodeId& n = m.to;
    Participant& p = participants_.at(n);
    switch (m.kind)
    {
    case MsgKind::Prepare: {
        if (crash_point(n, Phase::Prepare))
            return;
        bool ok = p.state == PState::Prepared || p.state == PState::Committed;
        if (p.state == PState::None)
            ok = participant_prepare(n, m.legs);
        if (crash_point(n, Phase::Vote))
            return;
        send(WireMsg{MsgKind::Vote, txn_->id, n, coord_, ok, {}});
        if (p.state == PState::Prepared)
            p.query_at = clock_ + timeout_;
        return;
    }
    case MsgKind::Commit:
    case MsgKind::Abort:
        if (crash_point(n, Phase::Decision))
            return;
        participant_apply(n, m.kind == MsgKind::Commit);
        if (crash_point(n, Phase::Ack))
            return;
        send(WireMsg{MsgKind::Ack, txn_->id, n, coord_, false, {}});
        return;
    default: fail(ErrorCode::InvalidArgument, n + " got " + std::string(to_string(m.kind)));
    }
}

bool SimNet::participant_prepare(const NodeId& n, const std::vector<std::size_t>& legs)
{
    Participant& p = participants_.at(n);
    Partition& pt = part(n);
    OwnershipState next = pt.state;
    std::vector<std::size_t> escrowed;
    try
    {
        if (!next.has_agent(rm_agent(n)))
            next.add_agent(rm_agent(n));
        for (std::size_t i : legs)
        {
            const Transfer& leg = txn_->legs[i];
            const ResourceId src = source_of(leg), dst = target_of(leg);
            if (owner_of(src) == n)
            {
                if (next.controller(src) != leg.from)
                    fail(ErrorCode::NotController, leg.from.value + " does not control '" + src.value + "'");
                const ResourceId escrow = escrow_of(txn_->id, i);
                next.create(escrow, rm_agent(n), ResourceKind::Account);
                next.transfer_balance(src, escrow, leg.bundle);
                escrowed.push_back(i);
            }
            if (owner_of(dst) == n && next.controller(dst) != leg.to)
                fail(ErrorCode::NotController, leg.to.value + " does not control '" + dst.value + "'");
        }
    }
    catch (const Error&)
    {
        p.state = PState::Aborted;
        return false;
    }
    pt.state = std::move(next);
    for (std::size_t i : escrowed)
        leg_source_[i] = LegSource::Escrowed;
    p.state = PState::Prepared;
    p.legs = legs;
    return true;
}

void SimNet::participant_apply(const NodeId& n, bool commit)
{
    Participant& p = participants_.at(n);
    p.query_at.reset();
    if (p.state == PState::Committed || p.state == PState::Aborted)
    {
        if ((p.state == PState::Committed) != commit)
            fail(ErrorCode::WrongPhase, n + " told to " + (commit ? "commit" : "abort") + " after the opposite");
        return;
    }
    if (p.state == PState::None)
    {
        if (commit)
            fail(ErrorCode::WrongPhase, n + " told to commit without having prepared");
        p.state = PState::Aborted;
        return;
    }
    OwnershipState& s = part(n).state;
    for (std::size_t i : p.legs)
    {
        const Transfer& leg = txn_->legs[i];
        if (owner_of(source_of(leg)) == n)
        {
            const ResourceId escrow = escrow_of(txn_->id, i);
            if (commit)
                s.withdraw(escrow, s.balance(escrow));
            else
                s.transfer_balance(escrow, source_of(leg), s.balance(escrow));
            s.remove(escrow);
            leg_source_[i] = commit ? LegSource::PaidOut : LegSource::Returned;
        }
        if (commit && owner_of(target_of(leg)) == n)
        {
            s.endow(target_of(leg), leg.bundle);
            leg_credited_[i] = true;
        }
    }
    p.state = commit ? PState::Committed : PState::Aborted;
    retire_rm_agent(n);
}

void SimNet::retire_rm_agent(const NodeId& n)
{
    OwnershipState& s = part(n).state;
    if (s.has_agent(rm_agent(n)))
        s.remove_agent(rm_agent(n));
}

// ---------------------------------------------------------------------------
// recovery and timers

void SimNet::recover(const NodeId& n)
{
    crashed_.erase(n);
    result_->trace.push_back("t=" + std::to_string(clock_) + " " + n + " recovered");
    if (n == coord_)
    {
        coordinator_.vote_deadline.reset();
        if (!coordinator_.decision)
            decide(false);
        else
        {
            std::vector<NodeId> pending;
            for (const auto& q : coordinator_.participants)
                if (!coordinator_.acked.count(q))
                    pending.push_back(q);
            broadcast_decision(pending);
            coordinator_.ack_deadline = clock_ + timeout_;
        }
    }
    auto it = participants_.find(n);
    if (it != participants_.end() && it->second.state == PState::Prepared)
    {
        send(WireMsg{MsgKind::Query, txn_->id, n, coord_, false, {}});
        it->second.query_at = clock_ + timeout_;
    }
}

std::optional<std::uint64_t> SimNet::next_timer() const
{
    std::optional<std::uint64_t> t;
    auto consider = [&](std::optional<std::uint64_t> d) {
        if (d && (!t || *d < *t))
            t = d;
    };
    if (!crashed_.count(coord_))
    {
        if (!coordinator_.decision)
            consider(coordinator_.vote_deadline);
        else if (coordinator_.acked.size() < coordinator_.participants.size())
            consider(coordinator_.ack_deadline);
    }
    for (const auto& [n, p] : participants_)
        if (!crashed_.count(n) && p.state == PState::Prepared)
            consider(p.query_at);
    return t;
}

void SimNet::fire_timers()
{
    const bool coord_up = !crashed_.count(coord_);
    if (coord_up && !coordinator_.decision && coordinator_.vote_deadline && clock_ >= *coordinator_.vote_deadline)
        decide(false);
    if (coord_up && coordinator_.decision && coordinator_.ack_deadline && clock_ >= *coordinator_.ack_deadline)
    {
        std::vector<NodeId> pending;
        for (const auto& q : coordinator_.participants)
            if (!coordinator_.acked.count(q))
                pending.push_back(q);
        if (pending.empty())
            coordinator_.ack_deadline.reset();
        else
        {
            broadcast_decision(pending);
            coordinator_.ack_deadline = clock_ + timeout_;
        }
    }
    for (auto& [n, p] : participants_)
        if (!crashed_.count(n) && p.state == PState::Prepared && p.query_at && clock_ >= *p.query_at)
        {
            send(WireMsg{MsgKind::Query, txn_->id, n, coord_, false, {}});
            p.query_at = clock_ + timeout_;
        }
}

bool SimNet::check_conservation() const
{
    // Value paid out of an escrow but not yet credited is in transit; value
    // credited while its escrow still stands is counted twice.
    Bundle total;
    for (const auto& p : parts_)
        total += p.state.total();
    for (std::size_t i = 0; i < leg_source_.size(); ++i)
    {
        const Bundle& b = txn_->legs[i].bundle;
        if (leg_source_[i] == LegSource::PaidOut && !leg_credited_[i])
            total += b;
        if (leg_source_[i] == LegSource::Escrowed && leg_credited_[i])
            total -= b;
    }
    return total == initial_total_;
}

std::vector<FaultPlan> enumerate_fault_points(const Transaction& txn, const std::vector<NodeId>& nodes,
                                              const std::vector<Phase>& phases)
{
    std::vector<FaultPlan> out;
    if (txn.legs.empty())
        return out;
    for (const auto& n : nodes)
        for (Phase p : phases)
            out.push_back(FaultPlan{FaultPoint{n, p}});
    return out;
}

} // namespace moneta
