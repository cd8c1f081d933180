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
#include "moneta/scenario.hpp"
#include "moneta/transaction.hpp"
#include "scenario_internal.hpp"

#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace moneta::scenario {

using detail::overloaded;
using moneta::to_string;

bool Report::passed() const
{
    return std::all_of(assertions.begin(), assertions.end(), [](const Assertion& a) { return a.passed; });
}

namespace {

std::string cells_text(const std::vector<Holdings>& cells, const Scales& sc)
{
    std::string s;
    for (std::size_t i = 0; i < cells.size(); ++i)
        s += (i ? " | " : "") + to_string(cells[i], sc);
    return s;
}

Rational major(Quantity minor, int decimals)
{
    return Rational(minor, pow10(decimals));
}

class Runner
{
public:
    Runner(const Scenario& s, const RunOptions& opts) : sc_(s), opts_(opts), tm_(AgentId("tm"), s.fiat())
    {
        w_.fiat = s.fiat();
        scales_ = s.scales();
        rep_.agents = s.agents();
        rep_.scales = scales_;
        for (const auto& d : s.decls)
        {
            if (const auto* a = std::get_if<AgentDecl>(&d))
                w_.state.add_agent(a->id);
            else if (const auto* e = std::get_if<EndowDecl>(&d))
                w_.state.endow(account_of(e->agent), normalize(e->bundle, w_.fiat));
            else if (const auto* b = std::get_if<BankDecl>(&d))
                banks_.emplace(b->bank, Bank(BankConfig{b->bank, b->reserve, Claim::base(b->money)}, w_.fiat));
        }
        initial_ = w_.state.total();
        rep_.rows.push_back(Row{0, "initial", cells()});
    }

    Report run()
    {
        std::optional<std::size_t> broken_at;
        for (std::size_t i = 0; i < sc_.steps.size(); ++i)
        {
            step_ = i + 1;
            const Step& step = sc_.steps[i];
            const bool checks_error = std::holds_alternative<ExpectError>(step.commands.front());
            if (pending_ && !checks_error)
                unexpected_error();
            if (checks_error && !pending_)
            {
                assertion(render(step.commands.front(), sc_), false, "the previous step succeeded");
                run_step(step, 1);
            }
            else
                run_step(step, 0);
            if (!broken_at && w_.state.total() != initial_)
                broken_at = step_;
        }
        if (pending_)
            unexpected_error();
        step_ = sc_.steps.size();
        assertion("world total constant at every step", !broken_at,
                  broken_at ? "changed at step " + std::to_string(*broken_at) + ": "
                                  + to_string(w_.state.total(), scales_)
                            : "");
        return std::move(rep_);
    }

private:
    struct Snapshot
    {
        World world;
        std::uint64_t clock;
        std::map<std::string, ContractState> contracts;
    };

    void run_step(const Step& step, std::size_t first)
    {
        const Snapshot snap{w_, clock_, contracts_};
        mutated_ = false;
        try
        {
            for (std::size_t k = first; k < step.commands.size(); ++k)
                execute(step.commands[k], k);
        }
        catch (const Error& e)
        {
            w_ = snap.world;
            clock_ = snap.clock;
            contracts_ = snap.contracts;
            pending_ = e;
            pending_step_ = step_;
            rep_.log.push_back("step " + std::to_string(step_) + " failed: " + e.what());
            return;
        }
        if (mutated_)
        {
            std::string text;
            for (std::size_t k = 0; k < step.commands.size(); ++k)
                text += (k ? "; " : "") + render(step.commands[k], sc_);
            rep_.rows.push_back(Row{step_, text, cells()});
        }
    }

    std::vector<Holdings> cells() const
    {
        std::vector<Holdings> out;
        for (const auto& a : rep_.agents)
            out.push_back(w_.state.gross_holdings_of(a));
        return out;
    }

    void assertion(std::string text, bool ok, std::string detail)
    {
        rep_.assertions.push_back(Assertion{step_, std::move(text), ok, std::move(detail)});
    }

    void unexpected_error()
    {
        rep_.assertions.push_back(Assertion{pending_step_, "step " + std::to_string(pending_step_) + " runs", false,
                                            pending_->what()});
        pending_.reset();
    }

    // -- events -----------------------------------------------------------
    void apply(EventBody body)
    {
        const Event e{std::move(body), clock_++};
        w_.apply(e);
        feed(e);
        mutated_ = true;
    }

    void feed(const Event& e)
    {
        for (auto& [name, cs] : contracts_)
        {
            if (cs.status != ContractStatus::Live || !binds(cs.residual, e))
                continue;
            try
            {
                cs = advance(cs, e);
            }
            catch (const Error& x)
            {
                if (x.code() != ErrorCode::RejectedEvent)
                    throw;
                cs.status = ContractStatus::Breached;
            }
            if (cs.status != ContractStatus::Live)
                rep_.log.push_back("step " + std::to_string(step_) + ": contract " + name + " "
                                   + std::string(to_string(cs.status)));
        }
    }

    void tick_contracts()
    {
        for (auto& [name, cs] : contracts_)
        {
            const ContractStatus before = cs.status;
            cs = tick(cs, clock_);
            if (before == ContractStatus::Live && cs.status != ContractStatus::Live)
                rep_.log.push_back("step " + std::to_string(step_) + ": contract " + name + " "
                                   + std::string(to_string(cs.status)));
        }
    }

    void settle(const std::string& id, const std::vector<TransferCmd>& legs)
    {
        Transaction txn{id, {}};
        for (const auto& l : legs)
            txn.legs.push_back(Transfer{l.from, l.to, l.bundle, TransferMode::Balance, std::nullopt, std::nullopt});
        bool committed = false;
        std::string cause;
        if (opts_.nodes)
        {
            std::vector<NodeId> nodes;
            for (std::size_t n = 1; n <= *opts_.nodes; ++n)
                nodes.push_back("node" + std::to_string(n));
            FaultPlan plan = opts_.faults;
            plan.insert(plan.end(), crashes_.begin(), crashes_.end());
            crashes_.clear();
            SimNet net(partition_by_agent(w_.state, nodes), opts_.seed, plan);
            const RunResult r = net.run_txn(nodes.front(), txn);
            rep_.trace.push_back("# txn " + id);
            rep_.trace.insert(rep_.trace.end(), r.trace.begin(), r.trace.end());
            if (!r.conserved)
                assertion("txn " + id + " conserves value across partitions", false, "in-transit check failed");
            committed = r.outcome == TxnPhase::Committed;
            if (!committed)
                cause = r.terminated ? "protocol" : "blocked";
            w_.state = net.global_state();
        }
        else
        {
            committed = tm_.execute(w_.state, txn) == TxnPhase::Committed;
            if (!committed)
                if (auto c = tm_.cause(id))
                    cause = std::string(to_string(c->code()));
        }
        txns_[id] = committed;
        if (committed)
        {
            for (const auto& t : txn.legs)
                feed(Event{t, clock_++});
            mutated_ = true;
            rep_.log.push_back("step " + std::to_string(step_) + ": txn " + id + " committed");
        }
        else
            rep_.log.push_back("step " + std::to_string(step_) + ": txn " + id + " aborted(" + cause + ")");
    }

    const Bank& bank(const AgentId& b) const { return banks_.at(b); }

    int decimals_of_money(const AgentId& b) const
    {
        return moneta::decimals_of(bank(b).config().money, scales_);
    }

    // -- commands ---------------------------------------------------------
    void execute(const Command& c, std::size_t index)
    {
        std::visit(
            overloaded{
                [&](const IssueCmd& x) {
                    for (const auto& e : x.bundle)
                        apply(Issue{x.issuer, e.claim, e.qty});
                },
                [&](const AnnihilateCmd& x) {
                    for (const auto& e : x.bundle)
                        apply(Annihilation{x.agent, e.claim, e.qty});
                },
                [&](const TransferCmd& x) {
                    apply(Transfer{x.from, x.to, x.bundle, TransferMode::Balance, std::nullopt, std::nullopt});
                },
                [&](const GiveCmd& x) {
                    apply(Transfer{x.from, x.to, Bundle{}, TransferMode::Control, x.token, std::nullopt});
                },
                [&](const MintCmd& x) {
                    const ResourceId t = w_.state.mint_token(account_of(x.agent), normalize(x.bundle, w_.fiat));
                    rep_.log.push_back("step " + std::to_string(step_) + ": minted " + t.value);
                    mutated_ = true;
                },
                [&](const RedeemCmd& x) {
                    for (const auto& e : x.bundle)
                    {
                        const AgentId issuer = e.claim.issuer();
                        apply(Transfer{x.holder, issuer, Bundle::of(e.claim, e.qty), TransferMode::Balance,
                                       std::nullopt, std::nullopt});
                        apply(Transfer{issuer, x.holder, Bundle::of(e.claim.underlying(), e.qty),
                                       TransferMode::Balance, std::nullopt, std::nullopt});
                        apply(Annihilation{issuer, e.claim.underlying(), e.qty});
                    }
                },
                [&](const ExchangeCmd& x) {
                    settle(detail::txn_id(x.id, step_, index),
                           {TransferCmd{x.a, x.b, x.x}, TransferCmd{x.b, x.a, x.y}});
                },
                [&](const TxnCmd& x) { settle(detail::txn_id(x.id, step_, index), x.legs); },
                [&](const ContractCmd& x) {
                    Contract k = Contract::done();
                    if (const auto* e = std::get_if<ExchangeTerms>(&x.terms))
                        k = make_exchange(e->a, e->b, e->x, e->y, e->window);
                    else
                    {
                        const auto& l = std::get<LoanTerms>(x.terms);
                        k = make_loan(l.lender, l.borrower, l.principal, l.collateral, l.term, clock_);
                    }
                    contracts_.insert_or_assign(x.name, ContractState::start(k, clock_));
                    rep_.log.push_back("step " + std::to_string(step_) + ": contract " + x.name + " "
                                       + std::string(to_string(contracts_.at(x.name).status)) + " from t="
                                       + std::to_string(clock_));
                },
                [&](const AdvanceCmd& x) {
                    clock_ += x.ticks;
                    tick_contracts();
                },
                [&](const DepositCmd& x) {
                    bank(x.bank).deposit(w_.state, x.customer, x.amount.begin()->qty);
                    mutated_ = true;
                },
                [&](const BankLoanCmd& x) {
                    bank(x.bank).loan(w_.state, x.borrower, x.amount.begin()->qty, x.collateral);
                    mutated_ = true;
                },
                [&](const RepayCmd& x) {
                    bank(x.bank).repay(w_.state, x.borrower, x.amount.begin()->qty);
                    mutated_ = true;
                },
                [&](const BankRunCmd& x) {
                    last_run_ = bank(x.bank).run(w_.state, x.queue);
                    last_run_bank_ = x.bank;
                    const int dec = decimals_of_money(x.bank);
                    rep_.log.push_back("step " + std::to_string(step_) + ": bankrun " + x.bank.value + " redeemed "
                                       + format_scaled(last_run_->redeemed, dec)
                                       + (last_run_->defaulted ? " defaulted" : " solvent") + " haircut "
                                       + to_string(last_run_->haircut));
                    mutated_ = true;
                },
                [&](const InvoiceCmd& x) {
                    last_invoice_ = run_invoice_deal(w_.state, x.deal, w_.fiat);
                    last_deal_ = x.deal;
                    clock_ += x.deal.maturity;
                    tick_contracts();
                    const int dec = moneta::decimals_of(x.deal.currency, scales_);
                    rep_.log.push_back("step " + std::to_string(step_) + ": invoice sold "
                                       + to_string(last_invoice_->tokens_sold) + " early "
                                       + format_scaled(last_invoice_->early_payment, dec) + " profit "
                                       + format_scaled(last_invoice_->financier_profit, dec));
                    mutated_ = true;
                },
                [&](const CrashCmd& x) {
                    if (opts_.nodes)
                        crashes_.push_back(x.point);
                    else
                        rep_.log.push_back("step " + std::to_string(step_) + ": crash " + x.point.node
                                           + " ignored (no network)");
                },
                [&](const auto& expectation) { check(expectation, c); },
            },
            c);
    }

    // -- expectations -----------------------------------------------------
    void check(const ExpectRow& x, const Command& c)
    {
        const auto got = cells();
        assertion(render(c, sc_), got == x.cells, got == x.cells ? "" : "got " + cells_text(got, scales_));
    }

    void check(const ExpectHoldings& x, const Command& c)
    {
        const Holdings got = w_.state.gross_holdings_of(x.agent);
        assertion(render(c, sc_), got == x.holdings, got == x.holdings ? "" : "got " + to_string(got, scales_));
    }

    void check(const ExpectTotal& x, const Command& c)
    {
        const Bundle got = w_.state.total();
        assertion(render(c, sc_), got == x.total, got == x.total ? "" : "got " + to_string(got, scales_));
    }

    void check(const ExpectConserved&, const Command& c)
    {
        const Bundle got = w_.state.total();
        assertion(render(c, sc_), got == initial_,
                  got == initial_ ? "" : "total " + to_string(got, scales_) + ", initially "
                                             + to_string(initial_, scales_));
    }

    void check(const ExpectTxn& x, const Command& c)
    {
        auto it = txns_.find(x.id);
        if (it == txns_.end())
            return assertion(render(c, sc_), false, "transaction never ran");
        assertion(render(c, sc_), it->second == x.committed, it->second ? "committed" : "aborted");
    }

    void check(const ExpectContract& x, const Command& c)
    {
        auto it = contracts_.find(x.name);
        if (it == contracts_.end())
            return assertion(render(c, sc_), false, "contract not registered");
        assertion(render(c, sc_), it->second.status == x.status,
                  "status " + std::string(to_string(it->second.status)) + ", residual "
                      + it->second.residual.to_string());
    }

    void check(const ExpectError& x, const Command& c)
    {
        const bool ok = pending_ && pending_->code() == x.code;
        assertion(render(c, sc_), ok, pending_ ? pending_->what() : "no error");
        pending_.reset();
    }

    void check(const ExpectMetric& x, const Command& c)
    {
        std::optional<Rational> got;
        std::string why;
        const OwnershipState& s = w_.state;
        switch (x.metric)
        {
        case Metric::Reserves:
            got = major(bank(x.subject).reserves(s), decimals_of_money(x.subject));
            break;
        case Metric::Deposits:
            got = major(bank(x.subject).deposits(s), decimals_of_money(x.subject));
            break;
        case Metric::Capacity:
            got = major(bank(x.subject).lending_capacity(s), decimals_of_money(x.subject));
            break;
        case Metric::Seigniorage: got = bank(x.subject).seigniorage(s); break;
        case Metric::Redeemed:
        case Metric::Haircut:
        case Metric::Defaulted:
            if (!last_run_)
            {
                why = "no bank run yet";
                break;
            }
            if (x.metric == Metric::Redeemed)
                got = major(last_run_->redeemed, decimals_of_money(last_run_bank_));
            else if (x.metric == Metric::Haircut)
                got = last_run_->haircut;
            else
                got = Rational(last_run_->defaulted ? 1 : 0);
            break;
        case Metric::Sold:
        case Metric::Early:
        case Metric::Profit:
        case Metric::Retained:
        case Metric::Net: {
            if (!last_invoice_)
            {
                why = "no invoice yet";
                break;
            }
            const int dec = moneta::decimals_of(last_deal_->currency, scales_);
            const InvoiceReport& r = *last_invoice_;
            if (x.metric == Metric::Sold)
                got = Rational(r.tokens_sold);
            else if (x.metric == Metric::Early)
                got = major(r.early_payment, dec);
            else if (x.metric == Metric::Profit)
                got = major(r.financier_profit, dec);
            else if (x.metric == Metric::Retained)
                got = major(r.seller_retained, dec);
            else
            {
                auto it = r.net.find(AgentId(x.subject));
                got = major(it == r.net.end() ? 0 : it->second, dec);
            }
            break;
        }
        case Metric::Clock: got = Rational(static_cast<Quantity>(clock_)); break;
        }
        if (!got)
            return assertion(render(c, sc_), false, why);
        assertion(render(c, sc_), *got == x.value, "got " + to_string(*got));
    }

    const Scenario& sc_;
    RunOptions opts_;
    Report rep_;
    Scales scales_;
    World w_;
    Bundle initial_;
    std::uint64_t clock_ = 0;
    std::size_t step_ = 0;
    bool mutated_ = false;
    TransactionManager tm_;
    std::map<std::string, ContractState> contracts_;
    std::map<AgentId, Bank> banks_;
    std::map<std::string, bool> txns_;
    FaultPlan crashes_;
    std::optional<RunOutcome> last_run_;
    AgentId last_run_bank_;
    std::optional<InvoiceReport> last_invoice_;
    std::optional<InvoiceDeal> last_deal_;
    std::optional<Error> pending_;
    std::size_t pending_step_ = 0;
};

} // namespace

Report run_scenario(const Scenario& s, const RunOptions& opts)
{
    return Runner(s, opts).run();
}

std::string render_table(const Report& r)
{
    std::vector<std::vector<std::string>> grid;
    std::vector<std::string> header{"step"};
    for (const auto& a : r.agents)
        header.push_back(a.value);
    grid.push_back(header);
    for (const auto& row : r.rows)
    {
        std::vector<std::string> line{std::to_string(row.step)};
        for (const auto& h : row.cells)
            line.push_back(to_string(h, r.scales));
        grid.push_back(std::move(line));
    }
    std::vector<std::size_t> width(header.size(), 0);
    for (const auto& line : grid)
        for (std::size_t i = 0; i < line.size(); ++i)
            width[i] = std::max(width[i], line[i].size());

    std::string out;
    auto emit = [&](const std::vector<std::string>& line) {
        std::string s;
        for (std::size_t i = 0; i < line.size(); ++i)
        {
            if (i)
                s += " | ";
            s += i == 0 ? std::string(width[i] - line[i].size(), ' ') + line[i]
                        : line[i] + std::string(width[i] - line[i].size(), ' ');
        }
        while (!s.empty() && s.back() == ' ')
            s.pop_back();
        out += s + "\n";
    };
    emit(grid[0]);
    std::string rule;
    for (std::size_t i = 0; i < width.size(); ++i)
        rule += (i ? "-+-" : "") + std::string(width[i], '-');
    out += rule + "\n";
    for (std::size_t i = 1; i < grid.size(); ++i)
        emit(grid[i]);

    if (!r.log.empty())
    {
        out += "\n";
        for (const auto& l : r.log)
            out += l + "\n";
    }
    if (!r.trace.empty())
    {
        out += "\ntrace:\n";
        for (const auto& l : r.trace)
            out += "  " + l + "\n";
    }
    std::size_t ok = 0;
    out += "\n";
    for (const auto& a : r.assertions)
    {
        ok += a.passed;
        out += std::string(a.passed ? "PASS" : "FAIL") + "  step " + std::to_string(a.step) + "  " + a.text;
        if (!a.passed && !a.detail.empty())
            out += "  (" + a.detail + ")";
        out += "\n";
    }
    out += std::to_string(ok) + "/" + std::to_string(r.assertions.size()) + " assertions passed\n";
    return out;
}

std::string render_json(const Report& r, const std::string& name)
{
    nlohmann::ordered_json j;
    if (!name.empty())
        j["scenario"] = name;
    j["agents"] = nlohmann::ordered_json::array();
    for (const auto& a : r.agents)
        j["agents"].push_back(a.value);
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : r.rows)
    {
        nlohmann::ordered_json cells = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.cells.size(); ++i)
            cells[r.agents[i].value] = to_string(row.cells[i], r.scales);
        j["rows"].push_back({{"step", row.step}, {"command", row.command}, {"holdings", cells}});
    }
    j["log"] = r.log;
    if (!r.trace.empty())
        j["trace"] = r.trace;
    j["assertions"] = nlohmann::ordered_json::array();
    for (const auto& a : r.assertions)
        j["assertions"].push_back(
            {{"step", a.step}, {"text", a.text}, {"passed", a.passed}, {"detail", a.detail}});
    j["passed"] = r.passed();
    return j.dump(2) + "\n";
}

Golden parse_golden(std::string_view text, const ClaimSyntax& syntax)
{
    Golden g;
    std::size_t lineno = 0;
    std::size_t begin = 0;
    while (begin < text.size())
    {
        std::size_t end = text.find('\n', begin);
        if (end == std::string_view::npos)
            end = text.size();
        ++lineno;
        std::string line(text.substr(begin, end - begin));
        begin = end + 1;
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        std::vector<std::string> cells;
        std::size_t from = 0;
        for (;;)
        {
            const auto bar = line.find('|', from);
            std::string cell = line.substr(from, bar == std::string::npos ? std::string::npos : bar - from);
            const auto a = cell.find_first_not_of(" \t\r");
            const auto b = cell.find_last_not_of(" \t\r");
            cells.push_back(a == std::string::npos ? "" : cell.substr(a, b - a + 1));
            if (bar == std::string::npos)
                break;
            from = bar + 1;
        }
        if (g.columns.empty())
        {
            g.columns = std::move(cells);
            continue;
        }
        if (cells.size() != g.columns.size())
            fail(ErrorCode::SyntaxError, std::to_string(lineno) + ":1: golden row has " + std::to_string(cells.size())
                                             + " cells, expected " + std::to_string(g.columns.size()));
        std::vector<Holdings> row;
        for (const auto& c : cells)
        {
            try
            {
                row.push_back(parse_holdings(c, syntax));
            }
            catch (const Error& e)
            {
                fail(e.code(), std::to_string(lineno) + ":1: " + e.what());
            }
        }
        g.rows.push_back(std::move(row));
    }
    if (g.columns.empty())
        fail(ErrorCode::SyntaxError, "1:1: empty golden file");
    return g;
}

std::vector<std::string> compare_golden(const Report& r, const Golden& g)
{
    std::vector<std::string> diffs;
    std::vector<std::string> names;
    for (const auto& a : r.agents)
        names.push_back(a.value);
    if (names != g.columns)
    {
        diffs.push_back("columns differ");
        return diffs;
    }
    if (r.rows.size() != g.rows.size())
        diffs.push_back("expected " + std::to_string(g.rows.size()) + " rows, got " + std::to_string(r.rows.size()));
    const std::size_t n = std::min(r.rows.size(), g.rows.size());
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < names.size(); ++k)
            if (r.rows[i].cells[k] != g.rows[i][k])
                diffs.push_back("row " + std::to_string(i + 1) + " agent " + names[k] + ": expected "
                                + to_string(g.rows[i][k], r.scales) + ", got "
                                + to_string(r.rows[i].cells[k], r.scales));
    return diffs;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(ErrorCode::InvalidArgument, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<CorpusEntry> run_corpus(const std::string& dir)
{
    namespace fs = std::filesystem;
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".mny")
            files.push_back(e.path());
    std::sort(files.begin(), files.end());

    std::vector<CorpusEntry> out;
    for (const auto& f : files)
    {
        CorpusEntry entry;
        entry.name = f.stem().string();
        try
        {
            const Scenario s = parse_scenario(read_file(f.string()));
            entry.report = run_scenario(s);
            for (const auto& a : entry.report.assertions)
                if (!a.passed)
                    entry.problems.push_back("step " + std::to_string(a.step) + ": " + a.text
                                             + (a.detail.empty() ? "" : " (" + a.detail + ")"));
            fs::path golden = f;
            golden.replace_extension(".golden");
            if (fs::exists(golden))
            {
                const auto diffs = compare_golden(entry.report, parse_golden(read_file(golden.string()), s.syntax()));
                entry.problems.insert(entry.problems.end(), diffs.begin(), diffs.end());
            }
        }
        catch (const Error& e)
        {
            entry.problems.push_back(f.filename().string() + ":" + e.what());
        }
        entry.passed = entry.problems.empty();
        out.push_back(std::move(entry));
    }
    return out;
}

} // namespace moneta::scenario
