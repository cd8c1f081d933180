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

// Banking on top of the ownership state. A bank's reserves are the base
// money in its account; its deposits are the bank IOUs other agents hold.
// Loans create deposits ex nihilo against the borrower's note.

#include "moneta/ledger.hpp"
#include "moneta/quantity.hpp"
#include "moneta/transaction.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace moneta {

struct BankConfig
{
    AgentId bank;
    Rational reserve_ratio{1};
    Claim money = Claim::base("M");
};

struct RunOutcome
{
    Quantity redeemed = 0;
    bool defaulted = false;
    /// Fraction of face value left for unpaid claims: remaining reserves /
    /// remaining claims after a default, 1 otherwise.
    Rational haircut{1};
    std::vector<std::pair<AgentId, Quantity>> paid;
};

class Bank
{
public:
    /// Throws InvalidArgument unless 0 <= r <= 1.
    explicit Bank(BankConfig cfg, FiatRegistry fiat = {});

    const BankConfig& config() const noexcept { return cfg_; }
    Claim note() const; ///< iou(bank, money), normalized

    Quantity reserves(const OwnershipState& s) const;
    /// Bank IOUs held by anyone but the bank.
    Quantity deposits(const OwnershipState& s) const;
    /// Per-holder bank IOUs, for holders' default accounts.
    std::map<AgentId, Quantity> deposit_ledger(const OwnershipState& s) const;

    /// Customer's money moves to reserves against freshly issued bank IOUs.
    void deposit(OwnershipState& s, const AgentId& customer, Quantity qty) const;
    /// New deposit money for the borrower against the borrower's note (and
    /// an IOU on each collateral claim). ReserveBreach if reserves would
    /// fall below r x (deposits + qty).
    void loan(OwnershipState& s, const AgentId& borrower, Quantity qty,
              const std::optional<Bundle>& collateral = std::nullopt) const;
    /// Borrower hands back bank IOUs for its note; both are annihilated.
    void repay(OwnershipState& s, const AgentId& borrower, Quantity qty) const;
    /// Redemptions in queue order, paid 1:1 from reserves until they run
    /// out. Demands are capped at what the customer holds. The reserve
    /// requirement is not enforced during a run.
    RunOutcome run(OwnershipState& s, const std::vector<std::pair<AgentId, Quantity>>& queue) const;

    /// (deposits - reserves) / deposits, floored at 0; 0 without deposits.
    Rational seigniorage(const OwnershipState& s) const;

    /// Throws ReserveBreach if reserves < r x deposits.
    void check_reserve(const OwnershipState& s) const;
    /// Largest loan the reserve requirement admits now.
    Quantity lending_capacity(const OwnershipState& s) const;

private:
    BankConfig cfg_;
    FiatRegistry fiat_;
};

// ---------------------------------------------------------------------------
// Invoice tokenization

struct InvoiceDeal
{
    AgentId seller;
    AgentId buyer;
    Claim currency = Claim::base("DAI");
    /// In minor units of the currency.
    Quantity face = 0;
    Quantity tokens = 0;
    Rational price{98, 100};
    Rational threshold{70, 100};
    std::uint64_t maturity = 60;
    /// Token purchase orders in submission order.
    std::vector<std::pair<AgentId, Quantity>> purchases;

    bool operator==(const InvoiceDeal&) const = default;
};

struct InvoiceReport
{
    Quantity tokens_sold = 0;
    Quantity early_payment = 0;   ///< minor units
    Quantity financier_profit = 0; ///< minor units, aggregate
    Quantity seller_retained = 0;  ///< minor units kept from the buyer's payment
    /// Change in currency holdings per party, minor units.
    std::map<AgentId, Quantity> net;
};

/// Runs the whole flow on `s`: the buyer's invoice IOU goes to the seller,
/// the seller tokenizes a note on itself, financiers' purchases are
/// escrowed, and financing completes once the sold fraction reaches the
/// threshold. At maturity the buyer pays face and token holders redeem at
/// par. UnderFunded (state untouched) if the threshold is not reached.
InvoiceReport run_invoice_deal(OwnershipState& s, const InvoiceDeal& deal, const FiatRegistry& fiat = {});

} // namespace moneta
