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

#include <set>

namespace moneta {

namespace {

void validate(const InvoiceDeal& d)
{
    if (d.face <= 0 || d.tokens <= 0)
        fail(ErrorCode::InvalidArgument, "invoice face and token count must be positive");
    if (d.face % d.tokens != 0)
        fail(ErrorCode::InvalidArgument, "face must split evenly into tokens");
    if (d.price <= Rational(0) || d.price > Rational(1))
        fail(ErrorCode::InvalidArgument, "price must lie in (0, 1]");
    if (d.threshold <= Rational(0) || d.threshold > Rational(1))
        fail(ErrorCode::InvalidArgument, "threshold must lie in (0, 1]");
    const Rational per_token = d.price * Rational(d.face / d.tokens);
    if (per_token.denominator() != 1)
        fail(ErrorCode::InvalidArgument, "token price " + to_string(per_token) + " is not a whole minor unit");
    Quantity ordered = 0;
    for (const auto& [who, n] : d.purchases)
    {
        if (n <= 0)
            fail(ErrorCode::InvalidArgument, "purchase of a non-positive token count");
        if (who == d.seller || who == d.buyer)
            fail(ErrorCode::InvalidArgument, "financiers must be third parties");
        ordered = checked_add(ordered, n);
    }
    if (ordered > d.tokens)
        fail(ErrorCode::InvalidArgument, "more tokens ordered than issued");
}

} // namespace

InvoiceReport run_invoice_deal(OwnershipState& s, const InvoiceDeal& deal, const FiatRegistry& fiat)
{
    validate(deal);
    const Claim cur = normalize(deal.currency, fiat);
    const Quantity unit = deal.face / deal.tokens;
    const Quantity token_price = boost::rational_cast<Quantity>(deal.price * Rational(unit));
    const AgentId& seller = deal.seller;
    const AgentId& buyer = deal.buyer;

    std::set<AgentId> parties{seller, buyer};
    for (const auto& [who, n] : deal.purchases)
        parties.insert(who);
    std::map<AgentId, Quantity> before;
    for (const auto& p : parties)
        before[p] = s.holdings_of(p).get(cur);

    OwnershipState next = s;
    // 1. the invoice: the buyer's promise to pay face, held by the seller
    next.issue(buyer, cur, deal.face, fiat);
    next.transfer_balance(account_of(buyer), account_of(seller), Bundle::of(normalize(Claim::iou(buyer, cur), fiat), deal.face));
    // 2. tokenized as notes on the seller, one unit of face each
    next.issue(seller, cur, deal.face, fiat);
    const Bundle token_value = Bundle::of(normalize(Claim::iou(seller, cur), fiat), unit);
    std::vector<ResourceId> tokens;
    for (Quantity i = 0; i < deal.tokens; ++i)
        tokens.push_back(next.mint_token(account_of(seller), token_value));

    // 3. purchases are escrowed until financing completes
    AgentId escrow_agent("invoice-escrow");
    while (next.has_agent(escrow_agent))
        escrow_agent = AgentId(escrow_agent.value + "'");
    TransactionManager tm(escrow_agent, fiat);
    std::vector<std::string> prepared;
    std::vector<std::pair<AgentId, std::vector<ResourceId>>> holders;
    std::size_t cursor = 0;
    for (std::size_t k = 0; k < deal.purchases.size(); ++k)
    {
        const auto& [financier, n] = deal.purchases[k];
        Transaction t{"buy" + std::to_string(k), {}};
        t.legs.push_back(Transfer{financier, seller, Bundle::of(cur, checked_mul(token_price, n)),
                                  TransferMode::Balance, std::nullopt, std::nullopt});
        std::vector<ResourceId> bought(tokens.begin() + static_cast<std::ptrdiff_t>(cursor),
                                       tokens.begin() + static_cast<std::ptrdiff_t>(cursor + static_cast<std::size_t>(n)));
        for (const auto& tok : bought)
            t.legs.push_back(Transfer{seller, financier, token_value, TransferMode::Control, tok, std::nullopt});
        if (tm.prepare(next, t) == TxnPhase::Prepared)
        {
            prepared.push_back(t.id);
            holders.emplace_back(financier, std::move(bought));
            cursor += static_cast<std::size_t>(n);
        }
    }
    const Quantity sold = static_cast<Quantity>(cursor);
    // 4. financing completes only at the threshold; otherwise nothing happened
    if (Rational(sold, deal.tokens) < deal.threshold)
        fail(ErrorCode::UnderFunded, to_string(sold) + " of " + to_string(deal.tokens)
                                         + " tokens sold, below the threshold " + to_string(deal.threshold));
    // 5. early payment to the seller
    for (const auto& id : prepared)
        tm.commit(next, id);
    for (std::size_t i = cursor; i < tokens.size(); ++i)
        next.melt_token(tokens[i], account_of(seller));
    if (sold < deal.tokens)
        next.annihilate(seller, cur, (deal.tokens - sold) * unit, fiat);

    // 6-7. at maturity the buyer pays face and gets its invoice back
    next.transfer_balance(account_of(buyer), account_of(seller), Bundle::of(cur, deal.face));
    next.transfer_balance(account_of(seller), account_of(buyer), Bundle::of(normalize(Claim::iou(buyer, cur), fiat), deal.face));
    next.annihilate(buyer, cur, deal.face, fiat);

    // 8-9. token holders redeem at par
    for (const auto& [holder, toks] : holders)
    {
        for (const auto& tok : toks)
        {
            next.transfer_control(tok, holder, seller);
            next.melt_token(tok, account_of(seller));
        }
        const Quantity n = static_cast<Quantity>(toks.size());
        next.transfer_balance(account_of(seller), account_of(holder), Bundle::of(cur, n * unit));
        next.annihilate(seller, cur, n * unit, fiat);
    }

    InvoiceReport report;
    report.tokens_sold = sold;
    report.early_payment = sold * token_price;
    report.seller_retained = deal.face - sold * unit;
    for (const auto& p : parties)
        report.net[p] = next.holdings_of(p).get(cur) - before[p];
    for (const auto& p : parties)
        if (p != seller && p != buyer)
            report.financier_profit += report.net[p];
    s = std::move(next);
    return report;
}

} // namespace moneta
