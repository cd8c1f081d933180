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

#include "contract_oracle.hpp"
#include "doctest.h"
#include "test_util.hpp"

#include "moneta/contract.hpp"
#include "moneta/error.hpp"

#include <random>
#include <tuple>

using namespace moneta;
using namespace moneta::test;

namespace {

Event xfer(const AgentId& from, const AgentId& to, const std::string& bundle, std::uint64_t t)
{
    return Event{Transfer{from, to, parse_bundle(bundle)}, t};
}

ErrorCode code_of(auto&& fn)
{
    try
    {
        fn();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::InvalidArgument;
}

// Ledger replays: the world sees every event, the contract only those it binds.
struct Replay
{
    World world;
    ContractState contract;

    Replay(Contract c, std::initializer_list<std::pair<const char*, const char*>> endowments)
        : contract(ContractState::start(std::move(c)))
    {
        for (const auto& [agent, bundle] : endowments)
        {
            world.state.add_agent(agent);
            world.state.endow(account_of(agent), parse_bundle(bundle));
        }
    }

    void step(const Event& e)
    {
        world.apply(e);
        if (binds(contract.residual, e))
            contract = advance(contract, e);
        else
            contract = tick(contract, e.time + 1);
    }

    Holdings of(const AgentId& a) const { return world.state.gross_holdings_of(a); }
};

} // namespace

TEST_CASE("exchange residual requires the other leg")
{
    const Contract ex = make_exchange("A", "B", parse_bundle("50 DKK"), parse_bundle("1 good:bike"), Window{0, 10});
    auto cs = ContractState::start(ex);
    CHECK(cs.status == ContractStatus::Live);
    cs = advance(cs, xfer("A", "B", "50 DKK", 1));
    CHECK(cs.status == ContractStatus::Live);
    REQUIRE(cs.residual.kind() == Contract::Kind::Atom);
    CHECK(cs.residual.pattern().from == AgentId("B"));
    CHECK(cs.residual.pattern().bundle == parse_bundle("1 good:bike"));
    // Repeating the first leg is not permitted.
    CHECK(code_of([&] { (void)advance(cs, xfer("A", "B", "50 DKK", 2)); }) == ErrorCode::RejectedEvent);
    cs = advance(cs, xfer("B", "A", "1 good:bike", 2));
    CHECK(cs.status == ContractStatus::Completed);

    // Legs in either order.
    auto other = advance(ContractState::start(ex), xfer("B", "A", "1 good:bike", 0));
    other = advance(other, xfer("A", "B", "50 DKK", 3));
    CHECK(other.status == ContractStatus::Completed);
}

TEST_CASE("completed contracts reject further events")
{
    auto cs = ContractState::start(Contract::done());
    CHECK(cs.status == ContractStatus::Completed);
    CHECK(code_of([&] { (void)advance(cs, xfer("A", "B", "1 DKK", 0)); }) == ErrorCode::RejectedEvent);
}

TEST_CASE("classify")
{
    CHECK(classify(Contract::done()) == ContractStatus::Completed);
    CHECK(classify(Contract::fail()) == ContractStatus::Breached);

    const Contract pay = Contract::atom(EventPattern{AgentId("A"), AgentId("B"), parse_bundle("5 DKK"), {}}, {0, 5});
    CHECK(classify(pay, 0) == ContractStatus::Live);
    CHECK(classify(pay, 5) == ContractStatus::Live);
    CHECK(classify(pay, 6) == ContractStatus::Breached);
    CHECK(classify(pay, 9) == ContractStatus::Breached);

    const Contract deliver =
        Contract::atom(EventPattern{AgentId("B"), AgentId("A"), parse_bundle("1 good:bike"), {}}, {0, 10});
    auto cs = ContractState::start(Contract::then(pay, deliver));
    cs = advance(cs, xfer("A", "B", "5 DKK", 3));
    CHECK(cs.status == ContractStatus::Live);
    CHECK(tick(cs, 10).status == ContractStatus::Live);
    CHECK(tick(cs, 11).status == ContractStatus::Breached);

    // Sequencing that cannot fit its windows is breached from the start.
    const Contract late_first = Contract::then(
        Contract::atom(EventPattern{AgentId("A"), {}, {}, {}}, {4, 4}),
        Contract::atom(EventPattern{AgentId("B"), {}, {}, {}}, {0, 4}));
    CHECK(classify(late_first) == ContractStatus::Breached);
    // Both legs needing the same single instant cannot both fire.
    const Contract same_slot = Contract::both(Contract::atom(EventPattern{AgentId("A"), {}, {}, {}}, {2, 2}),
                                              Contract::atom(EventPattern{AgentId("B"), {}, {}, {}}, {2, 2}));
    CHECK(classify(same_slot) == ContractStatus::Breached);
}

TEST_CASE("event times must not run backwards")
{
    const Contract ex = make_exchange("A", "B", parse_bundle("1 DKK"), parse_bundle("1 G"), Window{0, 10});
    auto cs = advance(ContractState::start(ex), xfer("A", "B", "1 DKK", 5));
    CHECK(code_of([&] { (void)advance(cs, xfer("B", "A", "1 G", 4)); }) == ErrorCode::NonMonotoneTime);
}

TEST_CASE("make_exchange instantiations and errors")
{
    // goods for money
    auto g = make_exchange("A", "B", parse_bundle("50 DKK"), parse_bundle("1 good:bike"), Window{0, 10});
    CHECK(g.kind() == Contract::Kind::Both);
    // money now for money later: two exchanges in sequence
    auto now = make_exchange("0", "1", parse_bundle("G"), parse_bundle("iou(1,G)"), Window{0, 3});
    auto later = make_exchange("1", "0", parse_bundle("G"), parse_bundle("iou(1,G)"), Window{4, 8});
    auto cs = ContractState::start(Contract::then(now, later));
    cs = advance(cs, xfer("0", "1", "G", 0));
    cs = advance(cs, xfer("1", "0", "iou(1,G)", 1));
    CHECK(cs.status == ContractStatus::Live);
    CHECK(code_of([&] { (void)advance(cs, xfer("1", "0", "G", 2)); }) == ErrorCode::RejectedEvent);
    cs = advance(cs, xfer("1", "0", "G", 5));
    cs = advance(cs, xfer("0", "1", "iou(1,G)", 6));
    CHECK(cs.status == ContractStatus::Completed);

    CHECK(code_of([] { (void)make_exchange("A", "B", Bundle{}, parse_bundle("G"), Window{0, 1}); })
          == ErrorCode::DegenerateExchange);
    CHECK(code_of([] { (void)make_exchange("A", "B", parse_bundle("G - DKK"), parse_bundle("G"), Window{0, 1}); })
          == ErrorCode::NegativeEntry);
}

TEST_CASE("loan of commodity money with no security replays to completion")
{
    Replay r(make_loan("0", "1", parse_bundle("G"), std::nullopt, 10),
             {{"0", "G"}, {"1", "R"}, {"2", "S"}, {"3", "T"}});
    r.step({Issue{"1", base("G"), 1}, 0});
    CHECK(r.of("1") == parse_holdings("R + iou(1,G) - iou(1,G)"));
    r.step(xfer("0", "1", "G", 1));
    r.step(xfer("1", "0", "iou(1,G)", 2));
    CHECK(r.of("0") == parse_holdings("iou(1,G)"));
    CHECK(r.of("1") == parse_holdings("R + G - iou(1,G)"));
    CHECK(r.contract.status == ContractStatus::Live);
    r.step(xfer("1", "2", "G", 3));
    r.step(xfer("2", "1", "S", 4));
    r.step(xfer("2", "3", "G", 5));
    r.step(xfer("3", "2", "T", 6));
    r.step(xfer("3", "1", "G", 7));
    r.step(xfer("1", "3", "R", 8));
    CHECK(r.of("1") == parse_holdings("G + S - iou(1,G)"));
    r.step(xfer("1", "0", "G", 9));
    r.step(xfer("0", "1", "iou(1,G)", 10));
    CHECK(r.contract.status == ContractStatus::Completed);
    CHECK(r.of("1") == parse_holdings("iou(1,G) + S - iou(1,G)"));
    r.step({Annihilation{"1", base("G"), 1}, 11});
    CHECK(r.of("0") == parse_holdings("G"));
    CHECK(r.of("1") == parse_holdings("S"));
    CHECK(r.of("2") == parse_holdings("T"));
    CHECK(r.of("3") == parse_holdings("R"));
}

namespace {

Replay collateral_loan_opening(std::uint64_t term)
{
    Replay r(make_loan("0", "1", parse_bundle("iou(0,G)"), parse_bundle("C"), term),
             {{"0", "G"}, {"1", "C + R"}, {"2", "S"}, {"3", "T"}});
    r.step({Issue{"0", base("G"), 1}, 0});
    r.step({Issue{"0", base("C"), 1}, 1});
    r.step({Issue{"1", base("G"), 1}, 2});
    r.step({Issue{"1", base("C"), 1}, 3});
    CHECK(r.of("0") == parse_holdings("G + iou(0,G) - iou(0,G) + iou(0,C) - iou(0,C)"));
    CHECK(r.of("1") == parse_holdings("C + R + iou(1,G) - iou(1,G) + iou(1,C) - iou(1,C)"));
    r.step(xfer("0", "1", "iou(0,G) + iou(0,C)", 4));
    r.step(xfer("1", "0", "iou(1,G) + iou(1,C)", 5));
    CHECK(r.of("0") == parse_holdings("G + iou(1,G) - iou(0,G) + iou(1,C) - iou(0,C)"));
    CHECK(r.of("1") == parse_holdings("C + R + iou(0,G) - iou(1,G) + iou(0,C) - iou(1,C)"));
    r.step(xfer("1", "2", "iou(0,G)", 6));
    r.step(xfer("2", "1", "S", 7));
    r.step(xfer("2", "3", "iou(0,G)", 8));
    r.step(xfer("3", "2", "T", 9));
    CHECK(r.of("1") == parse_holdings("C + R + S - iou(1,G) + iou(0,C) - iou(1,C)"));
    CHECK(r.of("3") == parse_holdings("iou(0,G)"));
    CHECK(r.contract.status == ContractStatus::Live);
    return r;
}

} // namespace

TEST_CASE("collateral loan happy path replays to completion")
{
    Replay r = collateral_loan_opening(20);
    r.step(xfer("3", "1", "iou(0,G)", 10));
    r.step(xfer("1", "3", "R", 11));
    CHECK(r.of("1") == parse_holdings("C + iou(0,G) + S - iou(1,G) + iou(0,C) - iou(1,C)"));
    r.step(xfer("1", "0", "iou(0,G) + iou(0,C)", 12));
    r.step(xfer("0", "1", "iou(1,G) + iou(1,C)", 13));
    CHECK(r.contract.status == ContractStatus::Completed);
    CHECK(r.of("0") == parse_holdings("G + iou(0,G) - iou(0,G) + iou(0,C) - iou(0,C)"));
    CHECK(r.of("1") == parse_holdings("C + iou(1,G) + S - iou(1,G) + iou(1,C) - iou(1,C)"));
    for (auto [agent, u, t] : {std::tuple{"0", "G", 14}, {"0", "C", 15}, {"1", "G", 16}, {"1", "C", 17}})
        r.step({Annihilation{agent, base(u), 1}, static_cast<std::uint64_t>(t)});
    CHECK(r.of("0") == parse_holdings("G"));
    CHECK(r.of("1") == parse_holdings("C + S"));
    CHECK(r.of("2") == parse_holdings("T"));
    CHECK(r.of("3") == parse_holdings("R"));
}

TEST_CASE("collateral loan accepts the default path; the lender ends holding C")
{
    Replay r = collateral_loan_opening(10);
    // Nothing repaid by the end of the term; the default branch opens at 11.
    r.contract = tick(r.contract, 11);
    CHECK(r.contract.status == ContractStatus::Live);
    r.step(xfer("1", "0", "C + iou(0,C)", 11));
    r.step(xfer("0", "1", "iou(1,G) + iou(1,C)", 12));
    CHECK(r.contract.status == ContractStatus::Completed);
    CHECK(r.of("0") == parse_holdings("G + C - iou(0,G) + iou(0,C) - iou(0,C)"));
    CHECK(r.of("1") == parse_holdings("iou(1,G) + R + S - iou(1,G) + iou(1,C) - iou(1,C)"));
    r.step({Annihilation{"0", base("C"), 1}, 13});
    r.step({Annihilation{"1", base("G"), 1}, 14});
    r.step({Annihilation{"1", base("C"), 1}, 15});
    CHECK(r.of("0") == parse_holdings("G + C - iou(0,G)"));
    CHECK(r.of("1") == parse_holdings("R + S"));
    CHECK(r.of("2") == parse_holdings("T"));
    CHECK(r.of("3") == parse_holdings("iou(0,G)"));
}

TEST_CASE("collateral default cannot be taken early, nor repayment late")
{
    Replay early = collateral_loan_opening(10);
    CHECK(code_of([&] { (void)advance(early.contract, xfer("1", "0", "C + iou(0,C)", 10)); })
          == ErrorCode::RejectedEvent);
    Replay late = collateral_loan_opening(10);
    CHECK(code_of([&] { (void)advance(late.contract, xfer("1", "0", "iou(0,G) + iou(0,C)", 11)); })
          == ErrorCode::RejectedEvent);
    // Past both windows the loan is manifestly breached.
    CHECK(tick(late.contract, 22).status == ContractStatus::Breached);
}

TEST_CASE("residuation agrees with brute-force acceptance (depth <= 2, sampled depth 3)")
{
    oracle::Checker checker(oracle::standard_alphabet());
    const auto r = checker.run(3, 97);
    INFO(r.first_mismatch);
    CHECK(r.mismatches == 0);
    CHECK(r.trees > 400);
}

namespace {

Contract random_contract(std::mt19937_64& rng, int depth)
{
    static const auto alphabet = oracle::standard_alphabet();
    std::uniform_int_distribution<int> pick(0, depth > 1 ? 8 : 5);
    const int k = pick(rng);
    if (k == 0)
        return Contract::done();
    if (k == 1)
        return Contract::fail();
    if (k < 6)
        return Contract::atom(alphabet.patterns[static_cast<std::size_t>(k - 2)],
                              alphabet.windows[static_cast<std::size_t>(k - 2)]);
    Contract a = random_contract(rng, depth - 1), b = random_contract(rng, depth - 1);
    if (k == 6)
        return Contract::then(a, b);
    if (k == 7)
        return Contract::either(a, b);
    return Contract::both(a, b);
}

} // namespace

TEST_CASE("advance never revives a breached contract; Both commutes")
{
    const auto alphabet = oracle::standard_alphabet();
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> ev(0, oracle::kEvents - 1);
    for (int i = 0; i < 2000; ++i)
    {
        const Contract a = random_contract(rng, 3), b = random_contract(rng, 3);
        Contract ab = Contract::both(a, b), ba = Contract::both(b, a);
        Contract c = Contract::then(a, b);
        bool breached = false;
        for (std::uint64_t t = 0; t < 7; ++t)
        {
            Event e = alphabet.events[static_cast<std::size_t>(ev(rng))];
            e.time = t;
            c = derivative(c, e);
            ab = derivative(ab, e);
            ba = derivative(ba, e);
            CHECK(ab.nullable() == ba.nullable());
            const auto status = classify(c, t + 1);
            if (breached)
                CHECK(status == ContractStatus::Breached);
            breached = status == ContractStatus::Breached;
        }
    }
}

TEST_CASE("completing an exchange moves exactly the promised bundles")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> q(1, 40);
    for (int i = 0; i < 200; ++i)
    {
        const Bundle x{{base("DKK"), q(rng)}}, y{{base("G"), q(rng)}, {base("EUR"), q(rng)}};
        World w;
        w.state.add_agent("A");
        w.state.add_agent("B");
        w.state.endow(account_of("A"), Bundle{{base("DKK"), 100}});
        w.state.endow(account_of("B"), Bundle{{base("G"), 100}, {base("EUR"), 100}});
        const World before = w;
        auto cs = ContractState::start(make_exchange("A", "B", x, y, Window{0, 5}));
        for (const Event& e : {Event{Transfer{"B", "A", y}, 1}, Event{Transfer{"A", "B", x}, 2}})
        {
            w.apply(e);
            cs = advance(cs, e);
        }
        REQUIRE(cs.status == ContractStatus::Completed);
        CHECK(w.state.holdings_of("A") - before.state.holdings_of("A") == y - x);
        CHECK(w.state.holdings_of("B") - before.state.holdings_of("B") == x - y);
    }
}
