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

#include "doctest.h"
#include "test_util.hpp"

#include "moneta/error.hpp"
#include "moneta/settlement.hpp"

#include <algorithm>
#include <random>

using namespace moneta;
using namespace moneta::test;

namespace {

OwnershipState market()
{
    OwnershipState s;
    for (const char* a : {"A", "B", "C", "D"})
        s.add_agent(a);
    s.endow(account_of("A"), parse_bundle("50 DKK"));
    s.endow(account_of("B"), parse_bundle("1 good:bike + 5 DKK"));
    s.endow(account_of("C"), parse_bundle("20 EUR"));
    return s;
}

Transaction bike_deal()
{
    return Transaction{"7", {Transfer{"A", "B", parse_bundle("50 DKK")}, Transfer{"B", "A", parse_bundle("1 good:bike")}}};
}

const std::vector<NodeId> kTwo = {"node1", "node2"};

} // namespace

TEST_CASE("fault-free run commits and matches single-node execution")
{
    const OwnershipState s = market();
    SimNet net(partition_by_agent(s, kTwo), 42);
    CHECK(net.owner_of(account_of("A")) == "node1");
    CHECK(net.owner_of(account_of("B")) == "node2");
    const RunResult r = net.run_txn("node1", bike_deal());
    CHECK(r.outcome == TxnPhase::Committed);
    CHECK(r.conserved);
    CHECK(r.terminated);
    OwnershipState expected = s;
    apply_sequential(expected, bike_deal().legs);
    CHECK(net.global_state().slots() == expected.slots());
    REQUIRE(!r.trace.empty());
    CHECK(r.trace.front().rfind("t=1 node1→node", 0) == 0);
    CHECK(r.trace.front().find("Prepare txn=7") != std::string::npos);
}

TEST_CASE("a participant crashing before it votes aborts everywhere")
{
    const OwnershipState s = market();
    SimNet net(partition_by_agent(s, kTwo), 1, {FaultPoint{"node2", Phase::Prepare}});
    const RunResult r = net.run_txn("node1", bike_deal());
    CHECK(r.outcome == TxnPhase::Aborted);
    CHECK(r.conserved);
    CHECK(net.global_state().slots() == s.slots());
}

TEST_CASE("a no vote aborts everywhere")
{
    const OwnershipState s = market();
    SimNet net(partition_by_agent(s, kTwo), 5);
    Transaction t{"8", {Transfer{"A", "B", parse_bundle("50 DKK")}, Transfer{"B", "A", parse_bundle("6 DKK")}}};
    const RunResult r = net.run_txn("node1", t);
    CHECK(r.outcome == TxnPhase::Aborted);
    CHECK(net.global_state().slots() == s.slots());
    CHECK(std::any_of(r.trace.begin(), r.trace.end(),
                      [](const std::string& l) { return l.find("node2→node1 Vote txn=8 no") != std::string::npos; }));
}

TEST_CASE("coordinator crash after a partial decision resolves by recovery")
{
    const OwnershipState s = market();
    SimNet net(partition_by_agent(s, kTwo), 3, {FaultPoint{"coord", Phase::Decision}});
    const RunResult r = net.run_txn("coord", bike_deal());
    CHECK(r.outcome == TxnPhase::Committed);
    CHECK(r.conserved);
    OwnershipState expected = s;
    apply_sequential(expected, bike_deal().legs);
    CHECK(net.global_state().slots() == expected.slots());
    CHECK(std::any_of(r.trace.begin(), r.trace.end(),
                      [](const std::string& l) { return l.find("coord recovered") != std::string::npos; }));
}

TEST_CASE("fault-point enumeration counts")
{
    CHECK(enumerate_fault_points(bike_deal(), kTwo).size() == 10);
    CHECK(enumerate_fault_points(Transaction{"e", {}}, kTwo).empty());
    CHECK(enumerate_fault_points(bike_deal(), {"a", "b", "c"},
                                 {Phase::Prepare, Phase::Vote, Phase::Decision, Phase::Ack})
              .size()
          == 12);
    CHECK(parse_fault_point("node2@prepare") == FaultPoint{"node2", Phase::Prepare});
    CHECK_THROWS_AS(parse_fault_point("node2@lunch"), Error);
    CHECK_THROWS_AS(parse_fault_point("node2"), Error);
}

TEST_CASE("identical seeds and plans give identical executions")
{
    const OwnershipState s = market();
    for (std::uint64_t seed : {0u, 1u, 17u})
        for (const auto& plan : enumerate_fault_points(bike_deal(), {"node1", "node2"}))
        {
            SimNet a(partition_by_agent(s, kTwo), seed, plan), b(partition_by_agent(s, kTwo), seed, plan);
            const RunResult ra = a.run_txn("node1", bike_deal()), rb = b.run_txn("node1", bike_deal());
            CHECK(ra.trace == rb.trace);
            CHECK(ra.outcome == rb.outcome);
            CHECK(a.global_state() == b.global_state());
        }
}

TEST_CASE("renaming nodes does not change outcomes")
{
    const OwnershipState s = market();
    for (std::uint64_t seed = 0; seed < 20; ++seed)
    {
        SimNet a(partition_by_agent(s, {"n1", "n2", "n3"}), seed);
        SimNet b(partition_by_agent(s, {"z9", "m4", "a0"}), seed);
        const RunResult ra = a.run_txn("n2", bike_deal()), rb = b.run_txn("m4", bike_deal());
        CHECK(ra.outcome == rb.outcome);
        CHECK(a.global_state().slots() == b.global_state().slots());
        CHECK(ra.steps == rb.steps);
    }
}

TEST_CASE("atomicity under every single-crash plan")
{
    std::mt19937_64 rng(2024);
    const std::vector<AgentId> agents = {"A", "B", "C", "D", "E"};
    std::uniform_int_distribution<int> qty(0, 20), pick(0, 4), legs(1, 4), nodes(1, 3);
    std::size_t runs = 0, commits = 0;
    for (int round = 0; round < 40; ++round)
    {
        OwnershipState s;
        for (const auto& a : agents)
        {
            s.add_agent(a);
            s.endow(account_of(a), Bundle{{base("DKK"), qty(rng)}});
        }
        Transaction t{"t" + std::to_string(round), {}};
        for (int i = legs(rng); i > 0; --i)
            t.legs.push_back(Transfer{agents[static_cast<std::size_t>(pick(rng))],
                                      agents[static_cast<std::size_t>(pick(rng))],
                                      Bundle{{base("DKK"), qty(rng) + 1}}});
        std::optional<OwnershipState> all = s;
        try
        {
            apply_sequential(*all, t.legs);
        }
        catch (const Error&)
        {
            all.reset();
        }
        std::vector<NodeId> names;
        for (int i = nodes(rng); i > 0; --i)
            names.push_back("node" + std::to_string(names.size() + 1));
        std::vector<NodeId> targets = names;
        targets.push_back("coord");
        for (const auto& plan : enumerate_fault_points(t, targets))
        {
            SimNet net(partition_by_agent(s, names), static_cast<std::uint64_t>(round), plan, 10);
            const RunResult r = net.run_txn("coord", t);
            ++runs;
            CHECK(r.terminated);
            CHECK(r.conserved);
            const auto final = net.global_state().slots();
            if (r.outcome == TxnPhase::Committed)
            {
                ++commits;
                REQUIRE(all);
                CHECK(final == all->slots());
            }
            else
                CHECK(final == s.slots());
        }
    }
    CHECK(runs > 100);
    CHECK(commits > 0);
}
