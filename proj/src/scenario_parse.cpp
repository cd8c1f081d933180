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
#include "scenario_internal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>

namespace moneta::scenario {

using detail::overloaded;

std::string_view to_string(Metric m)
{
    switch (m)
    {
    case Metric::Reserves: return "reserves";
    case Metric::Deposits: return "deposits";
    case Metric::Capacity: return "capacity";
    case Metric::Seigniorage: return "seigniorage";
    case Metric::Redeemed: return "run redeemed";
    case Metric::Haircut: return "run haircut";
    case Metric::Defaulted: return "run defaulted";
    case Metric::Sold: return "invoice sold";
    case Metric::Early: return "invoice early";
    case Metric::Profit: return "invoice profit";
    case Metric::Retained: return "invoice retained";
    case Metric::Net: return "invoice net";
    case Metric::Clock: return "clock";
    }
    return "?";
}

bool is_expectation(const Command& c)
{
    return std::holds_alternative<ExpectRow>(c) || std::holds_alternative<ExpectHoldings>(c)
           || std::holds_alternative<ExpectTotal>(c) || std::holds_alternative<ExpectConserved>(c)
           || std::holds_alternative<ExpectTxn>(c) || std::holds_alternative<ExpectContract>(c)
           || std::holds_alternative<ExpectError>(c) || std::holds_alternative<ExpectMetric>(c);
}

std::vector<AgentId> Scenario::agents() const
{
    std::vector<AgentId> out;
    for (const auto& d : decls)
        if (const auto* a = std::get_if<AgentDecl>(&d))
            out.push_back(a->id);
    return out;
}

Scales Scenario::scales() const
{
    Scales out;
    for (const auto& d : decls)
        if (const auto* c = std::get_if<CurrencyDecl>(&d); c && c->decimals > 0)
            out[c->symbol] = c->decimals;
    return out;
}

ClaimSyntax Scenario::syntax() const
{
    std::map<std::string, bool, std::less<>> kinds;
    std::set<std::string, std::less<>> agents;
    for (const auto& d : decls)
    {
        if (const auto* g = std::get_if<GoodDecl>(&d))
            kinds[g->kind] = g->unique;
        else if (const auto* c = std::get_if<CurrencyDecl>(&d))
            kinds[c->symbol] = false;
        else if (const auto* a = std::get_if<AgentDecl>(&d))
            agents.insert(a->id.value);
    }
    ClaimSyntax syn;
    syn.kind = [kinds](std::string_view k) -> std::optional<bool> {
        auto it = kinds.find(k);
        if (it == kinds.end())
            return std::nullopt;
        return it->second;
    };
    syn.agent = [agents](std::string_view a) { return agents.count(a) != 0; };
    syn.scales = scales();
    return syn;
}

FiatRegistry Scenario::fiat() const
{
    FiatRegistry reg;
    for (const auto& d : decls)
        if (const auto* c = std::get_if<CurrencyDecl>(&d))
            reg.register_currency(c->symbol, c->issuer);
    return reg;
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> words(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size())
    {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        const std::size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i])))
            ++i;
        if (i > start)
            out.push_back(s.substr(start, i - start));
    }
    return out;
}

/// Everything after `tok`, which must be a view into `whole`.
std::string_view after(std::string_view whole, std::string_view tok)
{
    const auto off = static_cast<std::size_t>(tok.data() + tok.size() - whole.data());
    return trim(whole.substr(off));
}

/// Splits on `sep` outside (), [] and {}.
std::vector<std::string_view> split_top(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    int depth = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i < s.size(); ++i)
    {
        const char c = s[i];
        if (c == '(' || c == '[' || c == '{')
            ++depth;
        else if (c == ')' || c == ']' || c == '}')
            --depth;
        else if (c == sep && depth == 0)
        {
            out.push_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    out.push_back(trim(s.substr(start)));
    return out;
}

bool valid_id(std::string_view s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

class Parser
{
public:
    Scenario run(std::string_view text)
    {
        std::size_t lineno = 0;
        std::size_t begin = 0;
        while (begin <= text.size())
        {
            std::size_t end = text.find('\n', begin);
            if (end == std::string_view::npos)
                end = text.size();
            ++lineno;
            std::string_view line = text.substr(begin, end - begin);
            if (!line.empty() && line.back() == '\r')
                line.remove_suffix(1);
            if (auto hash = line.find('#'); hash != std::string_view::npos)
                line = line.substr(0, hash);
            line_ = line;
            lineno_ = lineno;
            if (!trim(line).empty())
                parse_line(trim(line));
            begin = end + 1;
        }
        if (out_.steps.empty())
            fail(ErrorCode::SyntaxError, std::to_string(lineno_ == 0 ? 1 : lineno_) + ":1: scenario has no steps");
        return std::move(out_);
    }

private:
    // -- diagnostics ------------------------------------------------------
    Position at(std::string_view v) const
    {
        return Position{lineno_, static_cast<std::size_t>(v.data() - line_.data()) + 1};
    }

    [[noreturn]] void error(ErrorCode code, std::string_view where, const std::string& msg) const
    {
        const Position p = at(where);
        fail(code, std::to_string(p.line) + ":" + std::to_string(p.column) + ": " + msg);
    }

    static std::string bare(const Error& e)
    {
        std::string w = e.what();
        const auto colon = w.find(": ");
        return colon == std::string::npos ? w : w.substr(colon + 2);
    }

    // -- pieces -----------------------------------------------------------
    AgentId agent(std::string_view tok) const
    {
        if (!agents_.count(std::string(tok)))
            error(ErrorCode::UndeclaredId, tok, "undeclared agent '" + std::string(tok) + "'");
        return AgentId(std::string(tok));
    }

    Bundle bundle(std::string_view text, std::string_view where, bool positive = true) const
    {
        if (trim(text).empty())
            error(ErrorCode::SyntaxError, where, "expected a bundle");
        Bundle b;
        try
        {
            b = parse_bundle(text, syntax_);
        }
        catch (const Error& e)
        {
            error(e.code(), text, bare(e));
        }
        if (positive && (b.empty() || b.has_negative()))
            error(ErrorCode::SyntaxError, text, "bundle must be positive");
        return b;
    }

    Holdings holdings(std::string_view text) const
    {
        if (text.empty())
            error(ErrorCode::SyntaxError, text, "expected holdings");
        try
        {
            return parse_holdings(text, syntax_);
        }
        catch (const Error& e)
        {
            error(e.code(), text, bare(e));
        }
    }

    std::uint64_t number(std::string_view tok) const
    {
        std::uint64_t v = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc() || p != tok.data() + tok.size())
            error(ErrorCode::SyntaxError, tok, "expected a non-negative integer, got '" + std::string(tok) + "'");
        return v;
    }

    Rational rational(std::string_view tok) const
    {
        try
        {
            return parse_rational(tok);
        }
        catch (const Error&)
        {
            error(ErrorCode::SyntaxError, tok, "expected a number, got '" + std::string(tok) + "'");
        }
    }

    Quantity scaled(std::string_view tok, int decimals) const
    {
        try
        {
            return parse_scaled(tok, decimals);
        }
        catch (const Error& e)
        {
            error(ErrorCode::SyntaxError, tok, bare(e));
        }
    }

    void need(const std::vector<std::string_view>& w, std::size_t n, std::string_view where,
              const char* usage) const
    {
        if (w.size() < n)
            error(ErrorCode::SyntaxError, where.empty() ? line_ : where, std::string("usage: ") + usage);
    }

    void exact(const std::vector<std::string_view>& w, std::size_t n, std::string_view where,
               const char* usage) const
    {
        if (w.size() != n)
            error(ErrorCode::SyntaxError, w.size() > n ? w[n] : where, std::string("usage: ") + usage);
    }

    /// A single positive amount of the bank's money.
    Bundle money_amount(std::string_view text, std::string_view where, const AgentId& bank) const
    {
        Bundle b = bundle(text, where);
        const std::string& money = banks_.at(bank.value);
        if (b.size() != 1 || b.begin()->claim != Claim::base(money))
            error(ErrorCode::SyntaxError, text, "expected an amount of " + money);
        return b;
    }

    AgentId bank(std::string_view tok) const
    {
        if (!banks_.count(std::string(tok)))
            error(ErrorCode::UndeclaredId, tok, "undeclared bank '" + std::string(tok) + "'");
        return AgentId(std::string(tok));
    }

    int decimals(const std::string& currency) const
    {
        auto it = currencies_.find(currency);
        return it == currencies_.end() ? 0 : it->second;
    }

    /// `key=value key=value ...`; values may contain spaces.
    std::map<std::string, std::string_view> keyed(std::string_view text, std::set<std::string> keys) const
    {
        std::map<std::string, std::string_view> out;
        std::string current;
        const char* value_begin = nullptr;
        const char* value_end = nullptr;
        auto flush = [&] {
            if (!current.empty())
                out[current] = std::string_view(value_begin, static_cast<std::size_t>(value_end - value_begin));
        };
        for (auto w : words(text))
        {
            const auto eq = w.find('=');
            if (eq != std::string_view::npos && eq > 0)
            {
                const std::string key(w.substr(0, eq));
                if (!keys.count(key))
                    error(ErrorCode::SyntaxError, w, "unknown key '" + key + "'");
                if (out.count(key) || key == current)
                    error(ErrorCode::SyntaxError, w, "repeated key '" + key + "'");
                flush();
                current = key;
                value_begin = w.data() + eq + 1;
                value_end = w.data() + w.size();
                continue;
            }
            if (current.empty())
                error(ErrorCode::SyntaxError, w, "expected key=value");
            value_end = w.data() + w.size();
        }
        flush();
        for (const auto& [k, v] : out)
            if (trim(v).empty())
                error(ErrorCode::SyntaxError, v, "empty value for '" + k + "'");
        return out;
    }

    std::string_view required(const std::map<std::string, std::string_view>& kv, const std::string& key,
                              std::string_view where) const
    {
        auto it = kv.find(key);
        if (it == kv.end())
            error(ErrorCode::SyntaxError, where, "missing " + key + "=");
        return it->second;
    }

    void new_txn_id(std::string_view tok)
    {
        if (!txn_ids_.insert(std::string(tok)).second)
            error(ErrorCode::DuplicateId, tok, "transaction '" + std::string(tok) + "' already exists");
    }

    // -- lines ------------------------------------------------------------
    void parse_line(std::string_view line)
    {
        const auto w = words(line);
        static const std::set<std::string_view> declarations = {"agent", "currency", "good", "endow", "bank"};
        if (declarations.count(w[0]))
        {
            if (!out_.steps.empty())
                error(ErrorCode::SyntaxError, w[0], "declaration after the first step");
            out_.decls.push_back(declaration(line, w));
            syntax_ = out_.syntax();
            return;
        }
        Step step;
        step.pos = at(line);
        const std::size_t number = out_.steps.size() + 1;
        std::size_t index = 0;
        for (auto part : split_top(line, ';'))
        {
            if (part.empty())
                error(ErrorCode::SyntaxError, line, "empty command");
            step.commands.push_back(command(part, number, index++));
        }
        out_.steps.push_back(std::move(step));
    }

    Decl declaration(std::string_view line, const std::vector<std::string_view>& w)
    {
        if (w[0] == "agent")
        {
            need(w, 2, w[0], "agent <id> [central-bank]");
            if (!valid_id(w[1]))
                error(ErrorCode::SyntaxError, w[1], "agent ids are letters, digits and '_'");
            if (w.size() > 3 || (w.size() == 3 && w[2] != "central-bank"))
                error(ErrorCode::SyntaxError, w.back(), "usage: agent <id> [central-bank]");
            if (!agents_.insert(std::string(w[1])).second)
                error(ErrorCode::DuplicateId, w[1], "agent '" + std::string(w[1]) + "' declared twice");
            return AgentDecl{AgentId(std::string(w[1])), w.size() == 3};
        }
        if (w[0] == "currency")
        {
            if (w.size() != 4 && w.size() != 6)
                error(ErrorCode::SyntaxError, w[0], "usage: currency <sym> issuer <id> [decimals <n>]");
            if (w[2] != "issuer" || (w.size() == 6 && w[4] != "decimals"))
                error(ErrorCode::SyntaxError, w[2], "usage: currency <sym> issuer <id> [decimals <n>]");
            new_kind(w[1]);
            CurrencyDecl c{std::string(w[1]), agent(w[3]), 0};
            if (w.size() == 6)
            {
                const auto d = number(w[5]);
                if (d > 18)
                    error(ErrorCode::SyntaxError, w[5], "at most 18 decimals");
                c.decimals = static_cast<int>(d);
            }
            currencies_[c.symbol] = c.decimals;
            return c;
        }
        if (w[0] == "good")
        {
            need(w, 2, w[0], "good <kind> [unique]");
            if (w.size() > 3 || (w.size() == 3 && w[2] != "unique"))
                error(ErrorCode::SyntaxError, w.back(), "usage: good <kind> [unique]");
            new_kind(w[1]);
            return GoodDecl{std::string(w[1]), w.size() == 3};
        }
        if (w[0] == "endow")
        {
            need(w, 3, w[0], "endow <id> <bundle>");
            return EndowDecl{agent(w[1]), bundle(after(line, w[1]), w[1])};
        }
        // bank
        if (w.size() != 4 && w.size() != 6)
            error(ErrorCode::SyntaxError, w[0], "usage: bank <id> reserve <ratio> [money <sym>]");
        if (w[2] != "reserve" || (w.size() == 6 && w[4] != "money"))
            error(ErrorCode::SyntaxError, w[2], "usage: bank <id> reserve <ratio> [money <sym>]");
        const AgentId id = agent(w[1]);
        if (banks_.count(id.value))
            error(ErrorCode::DuplicateId, w[1], "bank '" + id.value + "' declared twice");
        const Rational r = rational(w[3]);
        if (r < Rational(0) || r > Rational(1))
            error(ErrorCode::SyntaxError, w[3], "reserve ratio must lie in [0, 1]");
        std::string money;
        if (w.size() == 6)
        {
            money = std::string(w[5]);
            if (!currencies_.count(money))
                error(ErrorCode::UndeclaredId, w[5], "undeclared currency '" + money + "'");
        }
        else if (currencies_.size() == 1)
            money = currencies_.begin()->first;
        else
            error(ErrorCode::SyntaxError, w[0], "bank needs 'money <sym>' unless exactly one currency is declared");
        banks_[id.value] = money;
        return BankDecl{id, r, money};
    }

    void new_kind(std::string_view tok)
    {
        if (!valid_id(tok))
            error(ErrorCode::SyntaxError, tok, "kinds are letters, digits and '_'");
        if (!kinds_.insert(std::string(tok)).second)
            error(ErrorCode::DuplicateId, tok, "resource kind '" + std::string(tok) + "' declared twice");
    }

    Command command(std::string_view text, std::size_t step, std::size_t index)
    {
        const auto w = words(text);
        const std::string_view verb = w[0];
        if (verb == "issue" || verb == "annihilate" || verb == "mint" || verb == "redeem")
        {
            need(w, 3, verb, "<verb> <agent> <bundle>");
            const AgentId a = agent(w[1]);
            Bundle b = bundle(after(text, w[1]), w[1]);
            if (verb == "issue")
                return IssueCmd{a, b};
            if (verb == "annihilate")
                return AnnihilateCmd{a, b};
            if (verb == "mint")
                return MintCmd{a, b};
            for (const auto& e : b)
                if (!e.claim.is_iou())
                    error(ErrorCode::SyntaxError, w[2], "redeem takes IOUs");
            return RedeemCmd{a, b};
        }
        if (verb == "transfer")
            return transfer(text, w);
        if (verb == "give")
        {
            exact(w, 4, verb, "give <from> <to> <token-id>");
            return GiveCmd{agent(w[1]), agent(w[2]), ResourceId(std::string(w[3]))};
        }
        if (verb == "exchange")
            return exchange(text, step, index);
        if (verb == "txn")
            return txn(text, step, index);
        if (verb == "contract")
            return contract(text, w);
        if (verb == "advance")
        {
            exact(w, 2, verb, "advance <ticks>");
            return AdvanceCmd{number(w[1])};
        }
        if (verb == "deposit")
        {
            need(w, 4, verb, "deposit <customer> <bank> <amount>");
            const AgentId c = agent(w[1]);
            const AgentId b = bank(w[2]);
            return DepositCmd{c, b, money_amount(after(text, w[2]), w[2], b)};
        }
        if (verb == "bankloan")
        {
            need(w, 4, verb, "bankloan <bank> <borrower> <amount> [collateral <bundle>]");
            const AgentId b = bank(w[1]);
            const AgentId borrower = agent(w[2]);
            std::string_view rest = after(text, w[2]);
            std::optional<Bundle> collateral;
            if (auto k = rest.find("collateral"); k != std::string_view::npos)
            {
                const std::string_view kw = rest.substr(k, 10);
                collateral = bundle(after(rest, kw), kw);
                rest = trim(rest.substr(0, k));
            }
            return BankLoanCmd{b, borrower, money_amount(rest, w[2], b), collateral};
        }
        if (verb == "repay")
        {
            need(w, 4, verb, "repay <bank> <borrower> <amount>");
            const AgentId b = bank(w[1]);
            const AgentId borrower = agent(w[2]);
            return RepayCmd{b, borrower, money_amount(after(text, w[2]), w[2], b)};
        }
        if (verb == "bankrun")
            return bankrun(text, w);
        if (verb == "invoice")
            return invoice(text, w);
        if (verb == "crash")
        {
            exact(w, 2, verb, "crash <node>@<phase>");
            try
            {
                return CrashCmd{parse_fault_point(w[1])};
            }
            catch (const Error& e)
            {
                error(ErrorCode::SyntaxError, w[1], bare(e));
            }
        }
        if (verb == "expect")
            return expect(text, w);
        error(ErrorCode::SyntaxError, verb, "unknown command '" + std::string(verb) + "'");
    }

    TransferCmd transfer(std::string_view text, const std::vector<std::string_view>& w) const
    {
        need(w, 4, w[0], "transfer <from> <to> <bundle>");
        return TransferCmd{agent(w[1]), agent(w[2]), bundle(after(text, w[2]), w[2])};
    }

    /// `<a> <b> : <x> / <y>` with the words before ':' already split off.
    void legs(std::string_view text, std::string_view colon_tail, Bundle& x, Bundle& y) const
    {
        const auto slash = colon_tail.find('/');
        if (slash == std::string_view::npos)
            error(ErrorCode::SyntaxError, text, "expected '<x> / <y>'");
        x = bundle(trim(colon_tail.substr(0, slash)), colon_tail);
        y = bundle(trim(colon_tail.substr(slash + 1)), colon_tail.substr(slash));
    }

    ExchangeCmd exchange(std::string_view text, std::size_t step, std::size_t index)
    {
        const auto colon = text.find(':');
        if (colon == std::string_view::npos)
            error(ErrorCode::SyntaxError, text, "usage: exchange [id] <a> <b> : <x> / <y>");
        const auto head = words(text.substr(0, colon));
        if (head.size() != 3 && head.size() != 4)
            error(ErrorCode::SyntaxError, text, "usage: exchange [id] <a> <b> : <x> / <y>");
        ExchangeCmd c;
        if (head.size() == 4)
        {
            c.id = std::string(head[1]);
            new_txn_id(head[1]);
        }
        else
            new_txn_id(detail::txn_id("", step, index));
        c.a = agent(head[head.size() - 2]);
        c.b = agent(head.back());
        legs(text, text.substr(colon + 1), c.x, c.y);
        return c;
    }

    TxnCmd txn(std::string_view text, std::size_t step, std::size_t index)
    {
        const auto open = text.find('{');
        const auto close = text.rfind('}');
        if (open == std::string_view::npos || close == std::string_view::npos || close < open
            || !trim(text.substr(close + 1)).empty())
            error(ErrorCode::SyntaxError, text, "usage: txn [id] { transfer ...; ... }");
        const auto head = words(text.substr(0, open));
        if (head.size() > 2)
            error(ErrorCode::SyntaxError, head[2], "usage: txn [id] { transfer ...; ... }");
        TxnCmd t;
        if (head.size() == 2)
        {
            t.id = std::string(head[1]);
            new_txn_id(head[1]);
        }
        else
            new_txn_id(detail::txn_id("", step, index));
        const std::string_view body = text.substr(open + 1, close - open - 1);
        if (trim(body).empty())
            error(ErrorCode::SyntaxError, body, "empty transaction");
        for (auto leg : split_top(body, ';'))
        {
            if (leg.empty())
                continue;
            const auto lw = words(leg);
            if (lw[0] != "transfer")
                error(ErrorCode::SyntaxError, lw[0], "transactions hold transfers only");
            t.legs.push_back(transfer(leg, lw));
        }
        return t;
    }

    ContractCmd contract(std::string_view text, const std::vector<std::string_view>& w)
    {
        need(w, 3, w[0], "contract <name> exchange|loan ...");
        if (!valid_id(w[1]))
            error(ErrorCode::SyntaxError, w[1], "contract names are letters, digits and '_'");
        if (!contracts_.insert(std::string(w[1])).second)
            error(ErrorCode::DuplicateId, w[1], "contract '" + std::string(w[1]) + "' already exists");
        ContractCmd c;
        c.name = std::string(w[1]);
        const std::string_view rest = after(text, w[2]);
        if (w[2] == "exchange")
        {
            const auto colon = rest.find(':');
            const auto win = rest.rfind(" window ");
            if (colon == std::string_view::npos || win == std::string_view::npos || win < colon)
                error(ErrorCode::SyntaxError, w[2],
                      "usage: contract <name> exchange <a> <b> : <x> / <y> window <t0>..<t1>");
            const auto head = words(rest.substr(0, colon));
            if (head.size() != 2)
                error(ErrorCode::SyntaxError, rest, "expected two agents before ':'");
            ExchangeTerms t;
            t.a = agent(head[0]);
            t.b = agent(head[1]);
            legs(rest, rest.substr(colon + 1, win - colon - 1), t.x, t.y);
            const std::string_view range = trim(rest.substr(win + 8));
            const auto dots = range.find("..");
            if (dots == std::string_view::npos)
                error(ErrorCode::SyntaxError, range, "expected <t0>..<t1>");
            t.window = Window{number(range.substr(0, dots)), number(range.substr(dots + 2))};
            if (t.window.earliest > t.window.latest)
                error(ErrorCode::SyntaxError, range, "empty window");
            c.terms = t;
            return c;
        }
        if (w[2] != "loan")
            error(ErrorCode::SyntaxError, w[2], "expected 'exchange' or 'loan'");
        const auto kv = keyed(rest, {"lender", "borrower", "principal", "collateral", "term"});
        LoanTerms t;
        t.lender = agent(trim(required(kv, "lender", w[2])));
        t.borrower = agent(trim(required(kv, "borrower", w[2])));
        const auto principal = required(kv, "principal", w[2]);
        t.principal = bundle(principal, principal);
        if (auto it = kv.find("collateral"); it != kv.end())
            t.collateral = bundle(it->second, it->second);
        t.term = number(trim(required(kv, "term", w[2])));
        c.terms = t;
        return c;
    }

    BankRunCmd bankrun(std::string_view text, const std::vector<std::string_view>& w) const
    {
        need(w, 3, w[0], "bankrun <bank> [<id>:<qty>, ...]");
        BankRunCmd r;
        r.bank = bank(w[1]);
        const std::string_view list = after(text, w[1]);
        if (list.size() < 2 || list.front() != '[' || list.back() != ']')
            error(ErrorCode::SyntaxError, list, "expected [<id>:<qty>, ...]");
        const int dec = decimals(banks_.at(r.bank.value));
        const std::string_view inner = trim(list.substr(1, list.size() - 2));
        if (inner.empty())
            return r;
        for (auto item : split_top(inner, ','))
        {
            const auto colon = item.find(':');
            if (colon == std::string_view::npos)
                error(ErrorCode::SyntaxError, item, "expected <id>:<qty>");
            const AgentId who = agent(trim(item.substr(0, colon)));
            const std::string_view q = trim(item.substr(colon + 1));
            const Quantity qty = scaled(q, dec);
            if (qty < 0)
                error(ErrorCode::SyntaxError, q, "negative demand");
            r.queue.emplace_back(who, qty);
        }
        return r;
    }

    InvoiceCmd invoice(std::string_view text, const std::vector<std::string_view>& w) const
    {
        const auto kv = keyed(after(text, w[0]), {"seller", "buyer", "currency", "face", "tokens", "price",
                                                  "threshold", "maturity", "buys"});
        InvoiceDeal d;
        d.seller = agent(trim(required(kv, "seller", w[0])));
        d.buyer = agent(trim(required(kv, "buyer", w[0])));
        std::string currency;
        if (auto it = kv.find("currency"); it != kv.end())
        {
            currency = std::string(trim(it->second));
            if (!currencies_.count(currency))
                error(ErrorCode::UndeclaredId, it->second, "undeclared currency '" + currency + "'");
        }
        else if (currencies_.size() == 1)
            currency = currencies_.begin()->first;
        else
            error(ErrorCode::SyntaxError, w[0], "invoice needs currency=<sym>");
        d.currency = Claim::base(currency);
        const int dec = decimals(currency);
        d.face = scaled(trim(required(kv, "face", w[0])), dec);
        d.tokens = static_cast<Quantity>(number(trim(required(kv, "tokens", w[0]))));
        d.price = rational(trim(required(kv, "price", w[0])));
        d.threshold = rational(trim(required(kv, "threshold", w[0])));
        d.maturity = number(trim(required(kv, "maturity", w[0])));
        const std::string_view buys = required(kv, "buys", w[0]);
        for (auto item : split_top(buys, ','))
        {
            const auto colon = item.find(':');
            if (colon == std::string_view::npos)
                error(ErrorCode::SyntaxError, item, "expected <id>:<tokens>");
            d.purchases.emplace_back(agent(trim(item.substr(0, colon))),
                                     static_cast<Quantity>(number(trim(item.substr(colon + 1)))));
        }
        return InvoiceCmd{d};
    }

    Command expect(std::string_view text, const std::vector<std::string_view>& w) const
    {
        need(w, 2, w[0], "expect <what> ...");
        const std::string_view what = w[1];
        if (what == "row")
        {
            ExpectRow r;
            const auto cells = split_top(after(text, what), '|');
            if (cells.size() != agents_order().size())
                error(ErrorCode::SyntaxError, what,
                      "row has " + std::to_string(cells.size()) + " cells, expected "
                          + std::to_string(agents_order().size()));
            for (auto c : cells)
                r.cells.push_back(holdings(c));
            return r;
        }
        if (what == "holdings")
        {
            need(w, 5, what, "expect holdings <id> = <holdings>");
            if (w[3] != "=")
                error(ErrorCode::SyntaxError, w[3], "expected '='");
            return ExpectHoldings{agent(w[2]), holdings(after(text, w[3]))};
        }
        if (what == "total")
        {
            need(w, 4, what, "expect total = <bundle>");
            if (w[2] != "=")
                error(ErrorCode::SyntaxError, w[2], "expected '='");
            return ExpectTotal{bundle(after(text, w[2]), w[2], false)};
        }
        if (what == "conserved")
        {
            exact(w, 2, what, "expect conserved");
            return ExpectConserved{};
        }
        if (what == "txn")
        {
            exact(w, 4, what, "expect txn <id> committed|aborted");
            if (!txn_ids_.count(std::string(w[2])))
                error(ErrorCode::UndeclaredId, w[2], "unknown transaction '" + std::string(w[2]) + "'");
            if (w[3] != "committed" && w[3] != "aborted")
                error(ErrorCode::SyntaxError, w[3], "expected committed or aborted");
            return ExpectTxn{std::string(w[2]), w[3] == "committed"};
        }
        if (what == "contract")
        {
            exact(w, 4, what, "expect contract <name> live|completed|breached");
            if (!contracts_.count(std::string(w[2])))
                error(ErrorCode::UndeclaredId, w[2], "unknown contract '" + std::string(w[2]) + "'");
            for (auto s : {ContractStatus::Live, ContractStatus::Completed, ContractStatus::Breached})
                if (w[3] == to_string(s))
                    return ExpectContract{std::string(w[2]), s};
            error(ErrorCode::SyntaxError, w[3], "expected live, completed or breached");
        }
        if (what == "error")
        {
            exact(w, 3, what, "expect error <code>");
            ErrorCode code;
            if (!parse_error_code(w[2], code))
                error(ErrorCode::SyntaxError, w[2], "unknown error code '" + std::string(w[2]) + "'");
            return ExpectError{code};
        }
        return metric(text, w);
    }

    ExpectMetric metric(std::string_view text, const std::vector<std::string_view>& w) const
    {
        const auto eq = std::find(w.begin(), w.end(), std::string_view("="));
        if (eq == w.end() || eq + 2 != w.end())
            error(ErrorCode::SyntaxError, w[1], "usage: expect <metric> [<subject>] = <value>");
        const std::vector<std::string_view> lhs(w.begin() + 1, eq);
        const std::string_view value = *(eq + 1);
        ExpectMetric m;
        static const std::map<std::string_view, Metric> bank_metrics = {{"reserves", Metric::Reserves},
                                                                        {"deposits", Metric::Deposits},
                                                                        {"capacity", Metric::Capacity},
                                                                        {"seigniorage", Metric::Seigniorage}};
        static const std::map<std::string_view, Metric> run_metrics = {
            {"redeemed", Metric::Redeemed}, {"haircut", Metric::Haircut}, {"defaulted", Metric::Defaulted}};
        static const std::map<std::string_view, Metric> invoice_metrics = {{"sold", Metric::Sold},
                                                                           {"early", Metric::Early},
                                                                           {"profit", Metric::Profit},
                                                                           {"retained", Metric::Retained},
                                                                           {"net", Metric::Net}};
        if (auto it = bank_metrics.find(lhs[0]); it != bank_metrics.end())
        {
            if (lhs.size() != 2)
                error(ErrorCode::SyntaxError, lhs[0], "usage: expect " + std::string(lhs[0]) + " <bank> = <value>");
            m.metric = it->second;
            m.subject = bank(lhs[1]).value;
        }
        else if (lhs[0] == "run" || lhs[0] == "invoice")
        {
            const auto& table = lhs[0] == "run" ? run_metrics : invoice_metrics;
            auto it2 = lhs.size() >= 2 ? table.find(lhs[1]) : table.end();
            if (it2 == table.end())
                error(ErrorCode::SyntaxError, lhs.size() >= 2 ? lhs[1] : lhs[0], "unknown metric");
            m.metric = it2->second;
            const std::size_t want = m.metric == Metric::Net ? 3 : 2;
            if (lhs.size() != want)
                error(ErrorCode::SyntaxError, lhs[0], "wrong number of words before '='");
            if (m.metric == Metric::Net)
                m.subject = agent(lhs[2]).value;
        }
        else if (lhs[0] == "clock" && lhs.size() == 1)
            m.metric = Metric::Clock;
        else
            error(ErrorCode::SyntaxError, lhs[0], "unknown expectation '" + std::string(lhs[0]) + "'");
        if (m.metric == Metric::Defaulted && (value == "true" || value == "false"))
            m.value = Rational(value == "true" ? 1 : 0);
        else
            m.value = rational(value);
        (void)text;
        return m;
    }

    std::vector<AgentId> agents_order() const { return out_.agents(); }

    Scenario out_;
    ClaimSyntax syntax_;
    std::string_view line_;
    std::size_t lineno_ = 0;
    std::set<std::string> agents_;
    std::set<std::string> kinds_;
    std::map<std::string, int> currencies_;
    std::map<std::string, std::string> banks_;
    std::set<std::string> contracts_;
    std::set<std::string> txn_ids_;
};

// -- rendering --------------------------------------------------------------

std::string render_decl(const Decl& d, const Scales& sc)
{
    return std::visit(
        overloaded{
            [](const AgentDecl& a) { return "agent " + a.id.value + (a.central_bank ? " central-bank" : ""); },
            [](const CurrencyDecl& c) {
                std::string s = "currency " + c.symbol + " issuer " + c.issuer.value;
                if (c.decimals > 0)
                    s += " decimals " + std::to_string(c.decimals);
                return s;
            },
            [](const GoodDecl& g) { return "good " + g.kind + (g.unique ? " unique" : ""); },
            [&](const EndowDecl& e) { return "endow " + e.agent.value + " " + moneta::to_string(e.bundle, sc); },
            [](const BankDecl& b) {
                return "bank " + b.bank.value + " reserve " + moneta::to_string(b.reserve) + " money " + b.money;
            },
        },
        d);
}

std::string render_transfer(const TransferCmd& t, const Scales& sc)
{
    return "transfer " + t.from.value + " " + t.to.value + " " + moneta::to_string(t.bundle, sc);
}

std::string scaled_text(Quantity q, const std::string& currency, const Scales& sc)
{
    return format_scaled(q, decimals_of(Claim::base(currency), sc));
}

} // namespace

Scenario parse_scenario(std::string_view text)
{
    return Parser().run(text);
}

std::string render(const Command& c, const Scenario& context)
{
    const Scales sc = context.scales();
    auto b = [&](const Bundle& x) { return moneta::to_string(x, sc); };
    auto h = [&](const Holdings& x) { return moneta::to_string(x, sc); };
    return std::visit(
        overloaded{
            [&](const IssueCmd& x) { return "issue " + x.issuer.value + " " + b(x.bundle); },
            [&](const AnnihilateCmd& x) { return "annihilate " + x.agent.value + " " + b(x.bundle); },
            [&](const TransferCmd& x) { return render_transfer(x, sc); },
            [&](const GiveCmd& x) { return "give " + x.from.value + " " + x.to.value + " " + x.token.value; },
            [&](const MintCmd& x) { return "mint " + x.agent.value + " " + b(x.bundle); },
            [&](const RedeemCmd& x) { return "redeem " + x.holder.value + " " + b(x.bundle); },
            [&](const ExchangeCmd& x) {
                return "exchange " + (x.id.empty() ? "" : x.id + " ") + x.a.value + " " + x.b.value + " : "
                       + b(x.x) + " / " + b(x.y);
            },
            [&](const TxnCmd& x) {
                std::string s = "txn " + (x.id.empty() ? "" : x.id + " ") + "{ ";
                for (std::size_t i = 0; i < x.legs.size(); ++i)
                    s += (i ? "; " : "") + render_transfer(x.legs[i], sc);
                return s + " }";
            },
            [&](const ContractCmd& x) {
                std::string s = "contract " + x.name + " ";
                if (const auto* e = std::get_if<ExchangeTerms>(&x.terms))
                    return s + "exchange " + e->a.value + " " + e->b.value + " : " + b(e->x) + " / " + b(e->y)
                           + " window " + std::to_string(e->window.earliest) + ".."
                           + std::to_string(e->window.latest);
                const auto& l = std::get<LoanTerms>(x.terms);
                s += "loan lender=" + l.lender.value + " borrower=" + l.borrower.value + " principal=" + b(l.principal);
                if (l.collateral)
                    s += " collateral=" + b(*l.collateral);
                return s + " term=" + std::to_string(l.term);
            },
            [&](const AdvanceCmd& x) { return "advance " + std::to_string(x.ticks); },
            [&](const DepositCmd& x) { return "deposit " + x.customer.value + " " + x.bank.value + " " + b(x.amount); },
            [&](const BankLoanCmd& x) {
                std::string s = "bankloan " + x.bank.value + " " + x.borrower.value + " " + b(x.amount);
                if (x.collateral)
                    s += " collateral " + b(*x.collateral);
                return s;
            },
            [&](const RepayCmd& x) { return "repay " + x.bank.value + " " + x.borrower.value + " " + b(x.amount); },
            [&](const BankRunCmd& x) {
                std::string money;
                for (const auto& d : context.decls)
                    if (const auto* bd = std::get_if<BankDecl>(&d); bd && bd->bank == x.bank)
                        money = bd->money;
                std::string s = "bankrun " + x.bank.value + " [";
                for (std::size_t i = 0; i < x.queue.size(); ++i)
                    s += (i ? ", " : "") + x.queue[i].first.value + ":" + scaled_text(x.queue[i].second, money, sc);
                return s + "]";
            },
            [&](const InvoiceCmd& x) {
                const auto& d = x.deal;
                const std::string cur = d.currency.kind();
                std::string s = "invoice seller=" + d.seller.value + " buyer=" + d.buyer.value + " currency=" + cur
                                + " face=" + scaled_text(d.face, cur, sc) + " tokens=" + moneta::to_string(d.tokens)
                                + " price=" + moneta::to_string(d.price) + " threshold="
                                + moneta::to_string(d.threshold) + " maturity=" + std::to_string(d.maturity)
                                + " buys=";
                for (std::size_t i = 0; i < d.purchases.size(); ++i)
                    s += (i ? "," : "") + d.purchases[i].first.value + ":" + moneta::to_string(d.purchases[i].second);
                return s;
            },
            [&](const CrashCmd& x) {
                return "crash " + x.point.node + "@" + std::string(moneta::to_string(x.point.phase));
            },
            [&](const ExpectRow& x) {
                std::string s = "expect row ";
                for (std::size_t i = 0; i < x.cells.size(); ++i)
                    s += (i ? " | " : "") + h(x.cells[i]);
                return s;
            },
            [&](const ExpectHoldings& x) { return "expect holdings " + x.agent.value + " = " + h(x.holdings); },
            [&](const ExpectTotal& x) { return "expect total = " + b(x.total); },
            [&](const ExpectConserved&) { return std::string("expect conserved"); },
            [&](const ExpectTxn& x) {
                return "expect txn " + x.id + (x.committed ? " committed" : " aborted");
            },
            [&](const ExpectContract& x) {
                return "expect contract " + x.name + " " + std::string(moneta::to_string(x.status));
            },
            [&](const ExpectError& x) { return "expect error " + std::string(moneta::to_string(x.code)); },
            [&](const ExpectMetric& x) {
                std::string s = "expect " + std::string(to_string(x.metric));
                if (!x.subject.empty())
                    s += " " + x.subject;
                if (x.metric == Metric::Defaulted)
                    return s + " = " + (x.value == Rational(0) ? "false" : "true");
                return s + " = " + moneta::to_string(x.value);
            },
        },
        c);
}

std::string render(const Scenario& s)
{
    const Scales sc = s.scales();
    std::string out;
    for (const auto& d : s.decls)
        out += render_decl(d, sc) + "\n";
    for (const auto& step : s.steps)
    {
        for (std::size_t i = 0; i < step.commands.size(); ++i)
            out += (i ? "; " : "") + render(step.commands[i], s);
        out += "\n";
    }
    return out;
}

} // namespace moneta::scenario
