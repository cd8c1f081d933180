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
#include "moneta/monetary.hpp"

#include <random>

using namespace moneta;
using namespace moneta::test;

namespace {

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

const Claim M = Claim::base("DKK");

OwnershipState town(std::initializer_list<std::pair<const char*, Quantity>> cash)
{
    OwnershipState s;
    s.add_agent("B1");
    for (const auto& [who, q] : cash)
    {
        s.add_agent(who);
        if (q > 0)
            s.endow(account_of(who), Bundle::of(M, q));
    }
    return s;
}

Bank bank(Rational r) { return Bank(BankConfig{"B1", r, M}); }

} // namespace

TEST_CASE("deposits move money into reserves against bank IOUs")
{
    OwnershipState s = town({{"A", 150}});
    const Bank b = bank(Rational(1, 10));
    b.deposit(s, "A", 100);
    CHECK(b.reserves(s) == 100);
    CHECK(b.deposits(s) == 100);
    CHECK(s.holdings_of("A") == Bundle{{M, 50}, {iou("B1", M), 100}});
    CHECK(b.deposit_ledger(s) == std::map<AgentId, Quantity>{{"A", 100}});
    const OwnershipState snap = s;
    b.deposit(s, "A", 0);
    CHECK(s == snap);
    CHECK(code_of([&] { b.deposit(s, "A", 51); }) == ErrorCode::InsufficientBalance);
    CHECK(s == snap);
    CHECK(s.total() == Bundle{{M, 150}});
}

TEST_CASE("a 10% reserve admits ten times its reserves in deposits")
{
    OwnershipState s = town({{"A", 100}, {"C", 0}});
    const Bank b = bank(Rational(1, 10));
    b.deposit(s, "A", 100);
    CHECK(b.lending_capacity(s) == 900);
    OwnershipState over = s;
    CHECK(code_of([&] { b.loan(over, "C", 901); }) == ErrorCode::ReserveBreach);
    CHECK(over == s);
    b.loan(s, "C", 900);
    CHECK(b.deposits(s) == 1000);
    CHECK(s.gross_holdings_of("C").assets == Bundle{{iou("B1", M), 900}});
    CHECK(s.holdings_of("B1").get(iou("C", M)) == 900);
    CHECK(code_of([&] { b.loan(s, "C", 1); }) == ErrorCode::ReserveBreach);
    CHECK(b.seigniorage(s) == Rational(9, 10));

    // repayment destroys the deposit money
    b.repay(s, "C", 400);
    CHECK(b.deposits(s) == 600);
    CHECK(s.holdings_of("B1").get(iou("C", M)) == 500);
    b.check_reserve(s);
}

TEST_CASE("full reserve: no loan beyond owned reserves")
{
    OwnershipState s = town({{"A", 100}, {"C", 0}});
    s.endow(account_of("B1"), Bundle::of(M, 30)); // bank equity
    const Bank b = bank(Rational(1));
    b.deposit(s, "A", 100);
    CHECK(b.seigniorage(s) == Rational(0));
    b.loan(s, "C", 30);
    CHECK(code_of([&] { b.loan(s, "C", 1); }) == ErrorCode::ReserveBreach);
    CHECK(b.seigniorage(s) == Rational(0));
    CHECK(bank(Rational(1, 10)).seigniorage(town({})) == Rational(0));
}

TEST_CASE("collateralised bank loan records the collateral claim")
{
    OwnershipState s = town({{"A", 100}, {"C", 0}});
    const Bank b = bank(Rational(1, 10));
    b.deposit(s, "A", 100);
    b.loan(s, "C", 10, Bundle{{base("car"), 1}});
    CHECK(s.holdings_of("B1").get(iou("C", base("car"))) == 1);
    CHECK(s.total() == Bundle{{M, 100}});
}

TEST_CASE("bank run on a 10% bank")
{
    OwnershipState s = town({{"A", 100}, {"C", 0}});
    const Bank b = bank(Rational(1, 10));
    b.deposit(s, "A", 100);
    b.loan(s, "C", 900);
    const RunOutcome r = b.run(s, {{"A", 100}, {"C", 900}});
    CHECK(r.redeemed == 100);
    CHECK(r.defaulted);
    CHECK(r.haircut == Rational(0));
    CHECK(r.paid == std::vector<std::pair<AgentId, Quantity>>{{"A", 100}, {"C", 0}});
    CHECK(b.reserves(s) == 0);

    // demand within reserves: no default even below full reserve
    OwnershipState t = town({{"A", 100}, {"C", 0}});
    b.deposit(t, "A", 100);
    b.loan(t, "C", 900);
    const RunOutcome small = b.run(t, {{"C", 60}, {"A", 40}});
    CHECK(!small.defaulted);
    CHECK(small.redeemed == 100);
    CHECK(small.haircut == Rational(1));
}

TEST_CASE("haircut spreads remaining reserves over remaining claims")
{
    OwnershipState s = town({{"A", 100}, {"C", 0}});
    const Bank b = bank(Rational(1, 10));
    b.deposit(s, "A", 100);
    b.loan(s, "C", 300);
    // a demand above holdings is capped; default only when reserves run dry
    const RunOutcome r = b.run(s, {{"A", 1000}});
    CHECK(!r.defaulted);
    CHECK(r.redeemed == 100);
    const RunOutcome r2 = b.run(s, {{"C", 1}});
    CHECK(r2.defaulted);
    CHECK(r2.haircut == Rational(0));
}

TEST_CASE("full reserve never defaults (exhaustive small queues)")
{
    const Bank b = bank(Rational(1));
    const std::vector<AgentId> people = {"a", "b", "c", "d", "e"};
    const Quantity amounts[] = {1, 5, 10, 20};
    std::size_t runs = 0;
    for (std::size_t n = 1; n <= people.size(); ++n)
    {
        OwnershipState s;
        s.add_agent("B1");
        s.endow(account_of("B1"), Bundle::of(M, 4)); // equity, lent out below
        for (std::size_t i = 0; i < n; ++i)
        {
            s.add_agent(people[i]);
            s.endow(account_of(people[i]), Bundle::of(M, 4));
            b.deposit(s, people[i], static_cast<Quantity>(1 + i % 4));
        }
        b.loan(s, people[0], 4);
        std::vector<std::pair<AgentId, Quantity>> requests;
        for (std::size_t i = 0; i < n; ++i)
            for (Quantity q : amounts)
                requests.emplace_back(people[i], q);
        const std::size_t k = requests.size();
        for (std::size_t x = 0; x < k; ++x)
            for (std::size_t y = 0; y <= k; ++y)
                for (std::size_t z = 0; z <= k; ++z)
                {
                    std::vector<std::pair<AgentId, Quantity>> queue{requests[x]};
                    if (y < k)
                        queue.push_back(requests[y]);
                    if (z < k)
                        queue.push_back(requests[z]);
                    OwnershipState t = s;
                    const RunOutcome r = b.run(t, queue);
                    ++runs;
                    if (r.defaulted)
                        FAIL("full-reserve bank defaulted");
                }
    }
    CHECK(runs > 1000);
}

TEST_CASE("money multiplier: greedy lending reaches reserves / r")
{
    for (auto [num, den] : {std::pair{1, 10}, {1, 5}, {1, 3}, {3, 7}, {1, 1}})
        for (Quantity reserves : {7, 100, 333})
        {
            const Rational r(num, den);
            OwnershipState s = town({{"A", reserves}, {"C", 0}});
            const Bank b = bank(r);
            b.deposit(s, "A", reserves);
            for (;;)
            {
                const Quantity q = b.lending_capacity(s);
                if (q == 0)
                    break;
                b.loan(s, "C", q);
            }
            const Rational bound = Rational(reserves) / r;
            CHECK(Rational(b.deposits(s)) <= bound);
            CHECK(Rational(b.deposits(s)) > bound - 1);
            b.check_reserve(s);
        }
}

TEST_CASE("reserve invariant holds after every operation")
{
    std::mt19937_64 rng(5);
    const Bank b = bank(Rational(1, 5));
    for (int round = 0; round < 100; ++round)
    {
        OwnershipState s = town({{"A", 100}, {"C", 50}, {"D", 0}});
        for (int step = 0; step < 30; ++step)
        {
            const AgentId who = std::vector<AgentId>{"A", "C", "D"}[rng() % 3];
            const Quantity q = static_cast<Quantity>(rng() % 200);
            try
            {
                switch (rng() % 3)
                {
                case 0: b.deposit(s, who, q); break;
                case 1: b.loan(s, who, q); break;
                default: b.repay(s, who, q); break;
                }
            }
            catch (const Error&)
            {
            }
            CHECK_NOTHROW(b.check_reserve(s));
            CHECK(s.total() == Bundle{{M, 150}});
        }
    }
}

namespace {

OwnershipState invoice_world()
{
    OwnershipState s;
    for (const char* a : {"Seller", "Buyer", "F1", "F2"})
        s.add_agent(a);
    const Claim dai = base("DAI");
    s.endow(account_of("Buyer"), Bundle::of(dai, 10000));
    s.endow(account_of("F1"), Bundle::of(dai, 5000));
    s.endow(account_of("F2"), Bundle::of(dai, 5000));
    return s;
}

InvoiceDeal standard_deal(std::vector<std::pair<AgentId, Quantity>> buys)
{
    InvoiceDeal d;
    d.seller = "Seller";
    d.buyer = "Buyer";
    d.face = 10000; // 100.00 DAI
    d.tokens = 100;
    d.price = Rational(98, 100);
    d.threshold = Rational(70, 100);
    d.purchases = std::move(buys);
    return d;
}

} // namespace

TEST_CASE("invoice tokenization pays early and settles at par")
{
    // Independent arithmetic, in whole DAI.
    const Rational face(100), price(98, 100);
    const Rational sold_value = Rational(70, 100) * face;
    const Rational early = sold_value * price;        // 68.6
    const Rational profit = sold_value * (1 - price); // 1.4
    const Rational retained = face - sold_value;      // 30
    CHECK(early == Rational(686, 10));
    CHECK(profit == Rational(7, 5));

    OwnershipState s = invoice_world();
    const OwnershipState initial = s;
    const InvoiceReport r = run_invoice_deal(s, standard_deal({{"F1", 40}, {"F2", 30}}));
    auto major = [](Quantity minor) { return Rational(minor, 100); };
    CHECK(r.tokens_sold == 70);
    CHECK(major(r.early_payment) == early);
    CHECK(major(r.financier_profit) == profit);
    CHECK(major(r.seller_retained) == retained);
    CHECK(major(r.net.at("Seller")) == early + retained);
    CHECK(major(r.net.at("Buyer")) == -face);
    Quantity sum = 0;
    for (const auto& [who, q] : r.net)
        sum += q;
    CHECK(sum == 0);
    // no IOUs or tokens left behind
    CHECK(s.total() == initial.total());
    for (const auto& [rid, slot] : s.slots())
        CHECK(slot.kind != ResourceKind::Token);
    CHECK(!s.has_agent("invoice-escrow"));
    CHECK(s.balance(liability_ledger_of("Seller")).empty());
}

TEST_CASE("one token short of the threshold aborts atomically")
{
    OwnershipState s = invoice_world();
    const OwnershipState initial = s;
    CHECK(code_of([&] { (void)run_invoice_deal(s, standard_deal({{"F1", 40}, {"F2", 29}})); })
          == ErrorCode::UnderFunded);
    CHECK(s == initial);
}

TEST_CASE("invoice edge cases")
{
    OwnershipState s = invoice_world();
    InvoiceDeal at_par = standard_deal({{"F1", 50}, {"F2", 50}});
    at_par.price = Rational(1);
    const InvoiceReport r = run_invoice_deal(s, at_par);
    CHECK(r.financier_profit == 0);

    OwnershipState t = invoice_world();
    InvoiceDeal bad = standard_deal({{"F1", 70}});
    bad.price = Rational(101, 100);
    CHECK(code_of([&] { (void)run_invoice_deal(t, bad); }) == ErrorCode::InvalidArgument);
    bad = standard_deal({{"F1", 70}, {"F2", 31}});
    CHECK(code_of([&] { (void)run_invoice_deal(t, bad); }) == ErrorCode::InvalidArgument);

    // A financier who cannot pay simply does not count toward the threshold.
    OwnershipState u = invoice_world();
    u.add_agent("Poor");
    const InvoiceReport partial = run_invoice_deal(u, standard_deal({{"Poor", 10}, {"F1", 50}, {"F2", 20}}));
    CHECK(partial.tokens_sold == 70);
    CHECK(partial.net.at("Poor") == 0);
}
