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

#include "moneta/error.hpp"
#include "moneta/monetary.hpp"

#include <algorithm>
#include <limits>

namespace moneta {

Bank::Bank(BankConfig cfg, FiatRegistry fiat) : cfg_(std::move(cfg)), fiat_(std::move(fiat))
{
    if (cfg_.reserve_ratio < Rational(0) || cfg_.reserve_ratio > Rational(1))
        fail(ErrorCode::InvalidArgument, "reserve ratio must lie in [0, 1]");
    cfg_.money = normalize(cfg_.money, fiat_);
}

Claim Bank::note() const
{
    return normalize(Claim::iou(cfg_.bank, cfg_.money), fiat_);
}

Quantity Bank::reserves(const OwnershipState& s) const
{
    return s.balance(account_of(cfg_.bank)).get(cfg_.money);
}

Quantity Bank::deposits(const OwnershipState& s) const
{
    const Claim n = note();
    const Quantity outstanding = -s.balance(liability_ledger_of(cfg_.bank)).get(n);
    return outstanding - s.balance(account_of(cfg_.bank)).get(n);
}

std::map<AgentId, Quantity> Bank::deposit_ledger(const OwnershipState& s) const
{
    const Claim n = note();
    std::map<AgentId, Quantity> out;
    for (const auto& a : s.agents())
        if (a != cfg_.bank)
            if (const Quantity q = s.balance(account_of(a)).get(n); q != 0)
                out[a] = q;
    return out;
}

void Bank::check_reserve(const OwnershipState& s) const
{
    const Quantity r = reserves(s), d = deposits(s);
    if (Rational(r) < cfg_.reserve_ratio * Rational(d))
        fail(ErrorCode::ReserveBreach, cfg_.bank.value + " holds " + to_string(r) + " in reserve against "
                                           + to_string(d) + " of deposits at ratio "
                                           + to_string(cfg_.reserve_ratio));
}

Quantity Bank::lending_capacity(const OwnershipState& s) const
{
    const Rational& r = cfg_.reserve_ratio;
    if (r == Rational(0))
        return std::numeric_limits<Quantity>::max();
    // largest q with reserves >= r (deposits + q)
    const Rational limit = Rational(reserves(s)) / r;
    const Quantity whole = limit.numerator() / limit.denominator();
    return std::max<Quantity>(0, whole - deposits(s));
}

void Bank::deposit(OwnershipState& s, const AgentId& customer, Quantity qty) const
{
    if (qty < 0)
        fail(ErrorCode::InvalidArgument, "negative deposit");
    if (qty == 0)
        return;
    OwnershipState next = s;
    next.transfer_balance(account_of(customer), account_of(cfg_.bank), Bundle::of(cfg_.money, qty));
    next.issue(cfg_.bank, cfg_.money, qty, fiat_);
    next.transfer_balance(account_of(cfg_.bank), account_of(customer), Bundle::of(note(), qty));
    check_reserve(next);
    s = std::move(next);
}

void Bank::loan(OwnershipState& s, const AgentId& borrower, Quantity qty, const std::optional<Bundle>& collateral) const
{
    if (qty <= 0)
        fail(ErrorCode::InvalidArgument, "loan amount must be positive");
    if (Rational(reserves(s)) < cfg_.reserve_ratio * Rational(checked_add(deposits(s), qty)))
        fail(ErrorCode::ReserveBreach, "a loan of " + to_string(qty) + " would leave " + cfg_.bank.value
                                           + " below its reserve requirement");
    OwnershipState next = s;
    next.issue(cfg_.bank, cfg_.money, qty, fiat_);
    next.transfer_balance(account_of(cfg_.bank), account_of(borrower), Bundle::of(note(), qty));
    Bundle pledge;
    next.issue(borrower, cfg_.money, qty, fiat_);
    pledge.add(normalize(Claim::iou(borrower, cfg_.money), fiat_), qty);
    if (collateral)
        for (const auto& e : *collateral)
        {
            if (e.qty <= 0)
                fail(ErrorCode::NegativeEntry, "collateral must be positive");
            next.issue(borrower, e.claim, e.qty, fiat_);
            pledge.add(normalize(Claim::iou(borrower, e.claim), fiat_), e.qty);
        }
    next.transfer_balance(account_of(borrower), account_of(cfg_.bank), pledge);
    check_reserve(next);
    s = std::move(next);
}

void Bank::repay(OwnershipState& s, const AgentId& borrower, Quantity qty) const
{
    if (qty <= 0)
        fail(ErrorCode::InvalidArgument, "repayment must be positive");
    const Claim loan_note = normalize(Claim::iou(borrower, cfg_.money), fiat_);
    OwnershipState next = s;
    next.transfer_balance(account_of(borrower), account_of(cfg_.bank), Bundle::of(note(), qty));
    next.transfer_balance(account_of(cfg_.bank), account_of(borrower), Bundle::of(loan_note, qty));
    next.annihilate(cfg_.bank, cfg_.money, qty, fiat_);
    next.annihilate(borrower, cfg_.money, qty, fiat_);
    check_reserve(next);
    s = std::move(next);
}

RunOutcome Bank::run(OwnershipState& s, const std::vector<std::pair<AgentId, Quantity>>& queue) const
{
    OwnershipState next = s;
    RunOutcome out;
    const Claim n = note();
    for (const auto& [customer, demand] : queue)
    {
        if (demand < 0)
            fail(ErrorCode::InvalidArgument, "negative redemption demand");
        const Quantity want = std::min(demand, next.balance(account_of(customer)).get(n));
        const Quantity pay = std::min(want, reserves(next));
        if (pay > 0)
        {
            next.transfer_balance(account_of(customer), account_of(cfg_.bank), Bundle::of(n, pay));
            next.transfer_balance(account_of(cfg_.bank), account_of(customer), Bundle::of(cfg_.money, pay));
            next.annihilate(cfg_.bank, cfg_.money, pay, fiat_);
        }
        out.paid.emplace_back(customer, pay);
        out.redeemed += pay;
        if (pay < want)
            out.defaulted = true;
    }
    if (out.defaulted)
    {
        const Quantity claims = deposits(next);
        out.haircut = claims > 0 ? std::min(Rational(1), Rational(reserves(next), claims)) : Rational(1);
    }
    s = std::move(next);
    return out;
}

Rational Bank::seigniorage(const OwnershipState& s) const
{
    const Quantity d = deposits(s);
    if (d == 0)
        return Rational(0);
    return std::max(Rational(0), Rational(d - reserves(s), d));
}

} // namespace moneta
