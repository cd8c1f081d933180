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

// Scenario files: a line-oriented language of declarations followed by
// steps. One step per line; `;` joins several commands into one atomic
// step (one table row). `#` starts a comment.
//
//   agent <id> [central-bank]
//   currency <sym> issuer <id> [decimals <n>]
//   good <kind> [unique]
//   endow <id> <bundle>
//   bank <id> reserve <ratio> [money <sym>]
//
//   issue <issuer> <bundle>            annihilate <agent> <bundle>
//   transfer <from> <to> <bundle>      give <from> <to> <token-id>
//   mint <agent> <bundle>              redeem <holder> <bundle>
//   exchange [id] <a> <b> : <x> / <y>
//   txn [id] { transfer ...; transfer ... }
//   contract <name> exchange <a> <b> : <x> / <y> window <t0>..<t1>
//   contract <name> loan lender=<id> borrower=<id> principal=<bundle>
//                        [collateral=<bundle>] term=<n>
//   advance <ticks>
//   deposit <customer> <bank> <amount>
//   bankloan <bank> <borrower> <amount> [collateral <bundle>]
//   repay <bank> <borrower> <amount>
//   bankrun <bank> [<id>:<qty>, ...]
//   invoice seller=<id> buyer=<id> face=<n> tokens=<n> price=<r>
//           threshold=<r> maturity=<n> buys=<id>:<n>,... [currency=<sym>]
//   crash <node>@<phase>
//   expect row <cell> | <cell> | ...   expect holdings <id> = <holdings>
//   expect total = <bundle>            expect conserved
//   expect txn <id> committed|aborted  expect contract <name> <status>
//   expect error <ErrorCode>           expect <metric> [<subject>] = <value>

#include "moneta/contract.hpp"
#include "moneta/ledger.hpp"
#include "moneta/monetary.hpp"
#include "moneta/resource.hpp"
#include "moneta/settlement.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace moneta::scenario {

struct Position
{
    std::size_t line = 0;
    std::size_t column = 0;
};

// -- declarations ---------------------------------------------------------

struct AgentDecl
{
    AgentId id;
    bool central_bank = false;
    bool operator==(const AgentDecl&) const = default;
};

struct CurrencyDecl
{
    std::string symbol;
    AgentId issuer;
    int decimals = 0;
    bool operator==(const CurrencyDecl&) const = default;
};

struct GoodDecl
{
    std::string kind;
    bool unique = false;
    bool operator==(const GoodDecl&) const = default;
};

struct EndowDecl
{
    AgentId agent;
    Bundle bundle;
    bool operator==(const EndowDecl&) const = default;
};

struct BankDecl
{
    AgentId bank;
    Rational reserve{1};
    std::string money;
    bool operator==(const BankDecl&) const = default;
};

using Decl = std::variant<AgentDecl, CurrencyDecl, GoodDecl, EndowDecl, BankDecl>;

// -- commands -------------------------------------------------------------

struct IssueCmd
{
    AgentId issuer;
    Bundle bundle;
    bool operator==(const IssueCmd&) const = default;
};

struct AnnihilateCmd
{
    AgentId agent;
    Bundle bundle;
    bool operator==(const AnnihilateCmd&) const = default;
};

struct TransferCmd
{
    AgentId from;
    AgentId to;
    Bundle bundle;
    bool operator==(const TransferCmd&) const = default;
};

struct GiveCmd
{
    AgentId from;
    AgentId to;
    ResourceId token;
    bool operator==(const GiveCmd&) const = default;
};

struct MintCmd
{
    AgentId agent;
    Bundle bundle;
    bool operator==(const MintCmd&) const = default;
};

struct RedeemCmd
{
    AgentId holder;
    Bundle bundle;
    bool operator==(const RedeemCmd&) const = default;
};

/// Empty id: the runner names it `s<step>`.
struct ExchangeCmd
{
    std::string id;
    AgentId a;
    AgentId b;
    Bundle x;
    Bundle y;
    bool operator==(const ExchangeCmd&) const = default;
};

struct TxnCmd
{
    std::string id;
    std::vector<TransferCmd> legs;
    bool operator==(const TxnCmd&) const = default;
};

struct ExchangeTerms
{
    AgentId a;
    AgentId b;
    Bundle x;
    Bundle y;
    Window window;
    bool operator==(const ExchangeTerms&) const = default;
};

struct LoanTerms
{
    AgentId lender;
    AgentId borrower;
    Bundle principal;
    std::optional<Bundle> collateral;
    std::uint64_t term = 0;
    bool operator==(const LoanTerms&) const = default;
};

struct ContractCmd
{
    std::string name;
    std::variant<ExchangeTerms, LoanTerms> terms;
    bool operator==(const ContractCmd&) const = default;
};

struct AdvanceCmd
{
    std::uint64_t ticks = 0;
    bool operator==(const AdvanceCmd&) const = default;
};

struct DepositCmd
{
    AgentId customer;
    AgentId bank;
    Bundle amount;
    bool operator==(const DepositCmd&) const = default;
};

struct BankLoanCmd
{
    AgentId bank;
    AgentId borrower;
    Bundle amount;
    std::optional<Bundle> collateral;
    bool operator==(const BankLoanCmd&) const = default;
};

struct RepayCmd
{
    AgentId bank;
    AgentId borrower;
    Bundle amount;
    bool operator==(const RepayCmd&) const = default;
};

/// Quantities in minor units of the bank's money.
struct BankRunCmd
{
    AgentId bank;
    std::vector<std::pair<AgentId, Quantity>> queue;
    bool operator==(const BankRunCmd&) const = default;
};

struct InvoiceCmd
{
    InvoiceDeal deal;
    bool operator==(const InvoiceCmd&) const = default;
};

struct CrashCmd
{
    FaultPoint point;
    bool operator==(const CrashCmd&) const = default;
};

struct ExpectRow
{
    std::vector<Holdings> cells;
    bool operator==(const ExpectRow&) const = default;
};

struct ExpectHoldings
{
    AgentId agent;
    Holdings holdings;
    bool operator==(const ExpectHoldings&) const = default;
};

struct ExpectTotal
{
    Bundle total;
    bool operator==(const ExpectTotal&) const = default;
};

struct ExpectConserved
{
    bool operator==(const ExpectConserved&) const = default;
};

struct ExpectTxn
{
    std::string id;
    bool committed = true;
    bool operator==(const ExpectTxn&) const = default;
};

struct ExpectContract
{
    std::string name;
    ContractStatus status = ContractStatus::Live;
    bool operator==(const ExpectContract&) const = default;
};

/// The previous step failed with this code.
struct ExpectError
{
    ErrorCode code = ErrorCode::InvalidArgument;
    bool operator==(const ExpectError&) const = default;
};

enum class Metric
{
    Reserves,    ///< bank, major units
    Deposits,    ///< bank, major units
    Capacity,    ///< bank, major units
    Seigniorage, ///< bank
    Redeemed,    ///< last run, major units
    Haircut,     ///< last run
    Defaulted,   ///< last run, 0 or 1
    Sold,        ///< last invoice, tokens
    Early,       ///< last invoice, major units
    Profit,      ///< last invoice, major units
    Retained,    ///< last invoice, major units
    Net,         ///< last invoice, per party, major units
    Clock,
};

std::string_view to_string(Metric m);

/// `expect seigniorage B1 = 9/10`, `expect run redeemed = 100`,
/// `expect invoice net F1 = 0.8`, `expect clock = 60`.
struct ExpectMetric
{
    Metric metric = Metric::Clock;
    std::string subject;
    Rational value{0};
    bool operator==(const ExpectMetric&) const = default;
};

using Command = std::variant<IssueCmd, AnnihilateCmd, TransferCmd, GiveCmd, MintCmd, RedeemCmd, ExchangeCmd, TxnCmd,
                             ContractCmd, AdvanceCmd, DepositCmd, BankLoanCmd, RepayCmd, BankRunCmd, InvoiceCmd,
                             CrashCmd, ExpectRow, ExpectHoldings, ExpectTotal, ExpectConserved, ExpectTxn,
                             ExpectContract, ExpectError, ExpectMetric>;

bool is_expectation(const Command& c);

struct Step
{
    std::vector<Command> commands;
    Position pos;

    /// Positions are not part of the value.
    bool operator==(const Step& o) const { return commands == o.commands; }
};

struct Scenario
{
    std::vector<Decl> decls;
    std::vector<Step> steps;

    bool operator==(const Scenario&) const = default;

    std::vector<AgentId> agents() const;
    Scales scales() const;
    ClaimSyntax syntax() const;
    FiatRegistry fiat() const;
};

/// Throws SyntaxError, UndeclaredId or DuplicateId; messages start with
/// `line:column:`.
Scenario parse_scenario(std::string_view text);

/// Canonical text; parse_scenario(render(s)) == s.
std::string render(const Scenario& s);
std::string render(const Command& c, const Scenario& context);

// -- running --------------------------------------------------------------

struct RunOptions
{
    /// Set: transactions settle by two-phase commit over this many
    /// resource-manager nodes, `node1`..`nodeN`, partitioned by agent.
    std::optional<std::size_t> nodes;
    std::uint64_t seed = 0;
    /// Applied to every transaction in addition to `crash` steps.
    FaultPlan faults;
};

struct Row
{
    std::size_t step = 0; ///< 0 is the initial state
    std::string command;
    std::vector<Holdings> cells;
};

struct Assertion
{
    std::size_t step = 0;
    std::string text;
    bool passed = false;
    std::string detail;
};

struct Report
{
    std::vector<AgentId> agents;
    Scales scales;
    std::vector<Row> rows;
    std::vector<Assertion> assertions;
    /// Step outcomes: `txn s3 committed`, `step 4 failed: ...`.
    std::vector<std::string> log;
    /// Delivered-message trace under RunOptions::nodes.
    std::vector<std::string> trace;

    bool passed() const;
};

Report run_scenario(const Scenario& s, const RunOptions& opts = {});

/// Holdings table, then the log and assertion results.
std::string render_table(const Report& r);
std::string render_json(const Report& r, const std::string& name = "");

/// Rows of a golden file: one line per state, cells separated by `|`,
/// `#` comments. The first non-comment line names the columns.
struct Golden
{
    std::vector<std::string> columns;
    std::vector<std::vector<Holdings>> rows;
};

Golden parse_golden(std::string_view text, const ClaimSyntax& syntax = {});

/// Empty when every row matches structurally; otherwise one line per
/// difference.
std::vector<std::string> compare_golden(const Report& r, const Golden& g);

/// One scenario of a corpus directory: `<name>.mny`, checked against
/// `<name>.golden` when that file exists.
struct CorpusEntry
{
    std::string name;
    bool passed = false;
    std::vector<std::string> problems;
    Report report;
};

/// Runs every `.mny` file in `dir`, in name order.
std::vector<CorpusEntry> run_corpus(const std::string& dir);

/// Throws InvalidArgument if the file cannot be read.
std::string read_file(const std::string& path);

// -- throughput -----------------------------------------------------------

struct BenchReport
{
    std::uint64_t transfers = 0;
    std::size_t accounts = 0;
    double seconds = 0;
    double rate = 0;         ///< transfers per second
    long peak_rss_kb = 0;
    bool conserved = false;
};

/// Random valid balance transfers between `accounts` funded accounts.
BenchReport bench_transfers(std::uint64_t n, std::size_t accounts, std::uint64_t seed);

} // namespace moneta::scenario
