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

#include "moneta/resource.hpp"

#include "moneta/error.hpp"

#include <algorithm>
#include <cctype>
#include <variant>

namespace moneta {

// ---------------------------------------------------------------------------
// Claim

struct Claim::Node
{
    struct Base
    {
        std::string kind;
        bool unique;
    };
    struct Iou
    {
        AgentId issuer;
        Claim underlying;
    };

    std::variant<Base, Iou> value;
    std::size_t depth;
};

Claim Claim::base(std::string kind, bool unique)
{
    if (kind.empty())
        fail(ErrorCode::InvalidArgument, "empty resource kind");
    return Claim(std::make_shared<const Node>(Node{Node::Base{std::move(kind), unique}, 0}));
}

Claim Claim::iou(AgentId issuer, Claim underlying)
{
    if (issuer.value.empty())
        fail(ErrorCode::InvalidArgument, "empty issuer");
    const std::size_t depth = underlying.depth() + 1;
    return Claim(std::make_shared<const Node>(Node{Node::Iou{std::move(issuer), std::move(underlying)}, depth}));
}

bool Claim::is_base() const noexcept
{
    return std::holds_alternative<Node::Base>(node_->value);
}

const std::string& Claim::kind() const
{
    if (!is_base())
        fail(ErrorCode::InvalidArgument, "kind() on IOU claim " + to_string());
    return std::get<Node::Base>(node_->value).kind;
}

bool Claim::unique() const
{
    return is_base() && std::get<Node::Base>(node_->value).unique;
}

const AgentId& Claim::issuer() const
{
    if (is_base())
        fail(ErrorCode::InvalidArgument, "issuer() on base claim " + to_string());
    return std::get<Node::Iou>(node_->value).issuer;
}

const Claim& Claim::underlying() const
{
    if (is_base())
        fail(ErrorCode::InvalidArgument, "underlying() on base claim " + to_string());
    return std::get<Node::Iou>(node_->value).underlying;
}

const Claim& Claim::leaf() const
{
    const Claim* c = this;
    while (!c->is_base())
        c = &c->underlying();
    return *c;
}

std::size_t Claim::depth() const noexcept
{
    return node_->depth;
}

std::string Claim::to_string() const
{
    if (is_base())
        return kind();
    return "iou(" + issuer().value + "," + underlying().to_string() + ")";
}

std::strong_ordering operator<=>(const Claim& a, const Claim& b)
{
    if (a.node_ == b.node_)
        return std::strong_ordering::equal;
    const bool ab = a.is_base();
    const bool bb = b.is_base();
    if (ab != bb)
        return ab ? std::strong_ordering::less : std::strong_ordering::greater;
    if (ab)
    {
        const auto& x = std::get<Claim::Node::Base>(a.node_->value);
        const auto& y = std::get<Claim::Node::Base>(b.node_->value);
        if (auto c = x.kind <=> y.kind; c != 0)
            return c;
        return x.unique <=> y.unique;
    }
    const auto& x = std::get<Claim::Node::Iou>(a.node_->value);
    const auto& y = std::get<Claim::Node::Iou>(b.node_->value);
    if (auto c = x.issuer <=> y.issuer; c != 0)
        return c;
    return x.underlying <=> y.underlying;
}

// ---------------------------------------------------------------------------
// Bundle

namespace {

void check_unique(const Claim& claim, Quantity qty)
{
    if (claim.unique() && (qty > 1 || qty < -1))
        fail(ErrorCode::UniqueViolation,
             "unique resource " + claim.to_string() + " with quantity " + moneta::to_string(qty));
}

} // namespace

Bundle::Bundle(std::initializer_list<std::pair<Claim, Quantity>> entries)
{
    for (const auto& [claim, qty] : entries)
        add(claim, qty);
}

Bundle Bundle::of(const Claim& claim, Quantity qty)
{
    Bundle b;
    b.add(claim, qty);
    return b;
}

Quantity Bundle::get(const Claim& claim) const
{
    auto it = std::lower_bound(entries_.begin(), entries_.end(), claim,
                               [](const Entry& e, const Claim& c) { return e.claim < c; });
    return (it != entries_.end() && it->claim == claim) ? it->qty : 0;
}

Bundle& Bundle::add(const Claim& claim, Quantity qty)
{
    if (qty == 0)
        return *this;
    auto it = std::lower_bound(entries_.begin(), entries_.end(), claim,
                               [](const Entry& e, const Claim& c) { return e.claim < c; });
    if (it != entries_.end() && it->claim == claim)
    {
        const Quantity sum = checked_add(it->qty, qty);
        check_unique(claim, sum);
        if (sum == 0)
            entries_.erase(it);
        else
            it->qty = sum;
    }
    else
    {
        check_unique(claim, qty);
        entries_.insert(it, Entry{claim, qty});
    }
    return *this;
}

Bundle& Bundle::operator+=(const Bundle& other)
{
    if (other.empty())
        return *this;
    std::vector<Entry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end())
    {
        if (b == other.entries_.end() || (a != entries_.end() && a->claim < b->claim))
            merged.push_back(*a++);
        else if (a == entries_.end() || b->claim < a->claim)
            merged.push_back(*b++);
        else
        {
            const Quantity sum = checked_add(a->qty, b->qty);
            check_unique(a->claim, sum);
            if (sum != 0)
                merged.push_back(Entry{a->claim, sum});
            ++a;
            ++b;
        }
    }
    entries_ = std::move(merged);
    return *this;
}

Bundle& Bundle::operator-=(const Bundle& other)
{
    return *this += -other;
}

Bundle Bundle::operator-() const
{
    Bundle out = *this;
    for (auto& e : out.entries_)
        e.qty = checked_sub(0, e.qty);
    return out;
}

bool Bundle::has_negative() const noexcept
{
    return std::any_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.qty < 0; });
}

bool Bundle::has_positive() const noexcept
{
    return std::any_of(entries_.begin(), entries_.end(), [](const Entry& e) { return e.qty > 0; });
}

Bundle Bundle::positive_part() const
{
    Bundle out;
    for (const auto& e : entries_)
        if (e.qty > 0)
            out.entries_.push_back(e);
    return out;
}

Bundle Bundle::negative_part() const
{
    Bundle out;
    for (const auto& e : entries_)
        if (e.qty < 0)
            out.entries_.push_back(e);
    return out;
}

bool Bundle::covers(const Bundle& other) const
{
    for (const auto& e : other.entries_)
        if (e.qty > 0 && get(e.claim) < e.qty)
            return false;
    return true;
}

Bundle operator+(Bundle a, const Bundle& b)
{
    a += b;
    return a;
}

Bundle operator-(Bundle a, const Bundle& b)
{
    a -= b;
    return a;
}

Bundle world_total(std::span<const Bundle> bundles)
{
    Bundle total;
    for (const auto& b : bundles)
        total += b;
    return total;
}

// ---------------------------------------------------------------------------
// IOUs

std::pair<Bundle, Bundle> issue_iou(const AgentId& issuer, const Claim& underlying, Quantity qty)
{
    if (qty <= 0)
        fail(ErrorCode::InvalidArgument, "IOU quantity must be positive");
    const Claim note = Claim::iou(issuer, underlying);
    return {Bundle::of(note, qty), Bundle::of(note, -qty)};
}

Holdings annihilate(const Holdings& holder, const AgentId& issuer, const Claim& underlying, Quantity qty)
{
    if (qty <= 0)
        fail(ErrorCode::InvalidArgument, "annihilation quantity must be positive");
    const Claim note = Claim::iou(issuer, underlying);
    if (holder.assets.get(note) < qty || holder.liabilities.get(note) > -qty)
        fail(ErrorCode::InsufficientPosition,
             "cannot cancel " + moneta::to_string(qty) + " " + note.to_string() + ": holds "
                 + moneta::to_string(holder.assets.get(note)) + " against liability "
                 + moneta::to_string(holder.liabilities.get(note)));
    Holdings out = holder;
    out.assets.add(note, -qty);
    out.liabilities.add(note, qty);
    return out;
}

// ---------------------------------------------------------------------------
// Fiat

void FiatRegistry::register_currency(const std::string& currency, const AgentId& issuer)
{
    auto it = issuers_.find(currency);
    if (it != issuers_.end() && it->second != issuer)
        fail(ErrorCode::DuplicateId,
             "currency " + currency + " already issued by " + it->second.value);
    issuers_[currency] = issuer;
}

std::optional<AgentId> FiatRegistry::issuer_of(std::string_view currency) const
{
    auto it = issuers_.find(currency);
    if (it == issuers_.end())
        return std::nullopt;
    return it->second;
}

Claim normalize(const Claim& claim, const FiatRegistry& reg)
{
    if (claim.is_base() || reg.empty())
        return claim;
    Claim inner = normalize(claim.underlying(), reg);
    if (inner.is_base())
    {
        auto issuer = reg.issuer_of(inner.kind());
        if (issuer && *issuer == claim.issuer())
            return inner;
    }
    if (inner == claim.underlying())
        return claim;
    return Claim::iou(claim.issuer(), std::move(inner));
}

Bundle normalize(const Bundle& bundle, const FiatRegistry& reg)
{
    if (reg.empty())
        return bundle;
    Bundle out;
    for (const auto& e : bundle)
        out.add(normalize(e.claim, reg), e.qty);
    return out;
}

// ---------------------------------------------------------------------------
// Text syntax

namespace {

bool is_ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class ClaimParser
{
public:
    ClaimParser(std::string_view text, const ClaimSyntax& syntax) : text_(text), syntax_(syntax) {}

    Claim parse_claim_only()
    {
        Claim c = claim();
        skip_ws();
        if (pos_ != text_.size())
            error("trailing input");
        return c;
    }

    /// Parses signed terms; calls sink(sign, qty, claim) per term.
    template <typename Sink>
    void parse_terms(Sink&& sink)
    {
        skip_ws();
        if (pos_ == text_.size())
            error("empty bundle");
        // `0` on its own is the empty bundle.
        {
            std::size_t save = pos_;
            if (peek() == '0')
            {
                ++pos_;
                skip_ws();
                if (pos_ == text_.size())
                    return;
            }
            pos_ = save;
        }
        int sign = 1;
        if (peek() == '-')
        {
            sign = -1;
            ++pos_;
        }
        else if (peek() == '+')
        {
            ++pos_;
        }
        for (;;)
        {
            skip_ws();
            term(sign, sink);
            skip_ws();
            if (pos_ == text_.size())
                return;
            if (peek() == '+')
                sign = 1;
            else if (peek() == '-')
                sign = -1;
            else
                error("expected '+' or '-'");
            ++pos_;
        }
    }

private:
    template <typename Sink>
    void term(int sign, Sink&& sink)
    {
        std::string qty_text;
        if (std::isdigit(static_cast<unsigned char>(peek())))
        {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.'))
                ++pos_;
            const std::size_t end = pos_;
            skip_ws();
            if (pos_ == text_.size() || text_[pos_] == '+' || text_[pos_] == '-' || !is_ident_char(text_[pos_])
                || end == pos_)
            {
                // A bare identifier that starts with a digit is a claim, not a quantity.
                pos_ = start;
            }
            else
            {
                qty_text = std::string(text_.substr(start, end - start));
            }
        }
        Claim c = claim();
        Quantity qty = qty_text.empty() ? pow10(decimals_of(c, syntax_.scales))
                                        : parse_scaled(qty_text, decimals_of(c, syntax_.scales));
        if (qty == 0)
            error("zero quantity");
        sink(sign, qty, c);
    }

    Claim claim()
    {
        skip_ws();
        std::string word = ident();
        if (word == "iou" && peek() == '(')
        {
            ++pos_;
            skip_ws();
            std::string issuer = ident();
            if (syntax_.agent && !syntax_.agent(issuer))
                error("undeclared agent '" + issuer + "'", ErrorCode::UndeclaredId);
            skip_ws();
            expect(',');
            Claim inner = claim();
            skip_ws();
            expect(')');
            return Claim::iou(AgentId(issuer), std::move(inner));
        }
        bool explicit_good = false;
        if (word == "good" && peek() == ':')
        {
            ++pos_;
            word = ident();
            explicit_good = true;
        }
        bool unique = false;
        if (syntax_.kind)
        {
            auto declared = syntax_.kind(word);
            if (!declared)
                error("undeclared resource '" + word + "'", ErrorCode::UndeclaredId);
            unique = *declared;
        }
        (void)explicit_good;
        return Claim::base(word, unique);
    }

    std::string ident()
    {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_]))
            ++pos_;
        if (start == pos_)
            error("expected identifier");
        return std::string(text_.substr(start, pos_ - start));
    }

    void expect(char c)
    {
        if (peek() != c)
            error(std::string("expected '") + c + "'");
        ++pos_;
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void skip_ws()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
            ++pos_;
    }

    [[noreturn]] void error(const std::string& msg, ErrorCode code = ErrorCode::SyntaxError) const
    {
        fail(code, msg + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(text_) + "'");
    }

    std::string_view text_;
    const ClaimSyntax& syntax_;
    std::size_t pos_ = 0;
};

std::string render_term(const Claim& claim, Quantity magnitude, const Scales& scales)
{
    const int decimals = decimals_of(claim, scales);
    if (magnitude == pow10(decimals))
        return claim.to_string();
    return format_scaled(magnitude, decimals) + " " + claim.to_string();
}

void append_terms(std::string& out, const Bundle& bundle, bool& first, const Scales& scales)
{
    for (const auto& e : bundle)
    {
        const bool negative = e.qty < 0;
        if (first)
            out += negative ? "- " : "";
        else
            out += negative ? " - " : " + ";
        first = false;
        out += render_term(e.claim, negative ? -e.qty : e.qty, scales);
    }
}

} // namespace

Claim parse_claim(std::string_view text, const ClaimSyntax& syntax)
{
    return ClaimParser(text, syntax).parse_claim_only();
}

Bundle parse_bundle(std::string_view text, const ClaimSyntax& syntax)
{
    Bundle out;
    ClaimParser(text, syntax).parse_terms([&](int sign, Quantity qty, const Claim& c) { out.add(c, sign * qty); });
    return out;
}

Holdings parse_holdings(std::string_view text, const ClaimSyntax& syntax)
{
    Holdings out;
    ClaimParser(text, syntax).parse_terms([&](int sign, Quantity qty, const Claim& c) {
        if (sign > 0)
            out.assets.add(c, qty);
        else
            out.liabilities.add(c, -qty);
    });
    return out;
}

int decimals_of(const Claim& claim, const Scales& scales)
{
    const auto& leaf = claim.leaf();
    auto it = scales.find(leaf.kind());
    return it == scales.end() ? 0 : it->second;
}

std::string to_string(const Bundle& bundle, const Scales& scales)
{
    if (bundle.empty())
        return "0";
    std::string out;
    bool first = true;
    // Positive terms first, mirroring `G + iou(1,R) - iou(0,G)`.
    append_terms(out, bundle.positive_part(), first, scales);
    append_terms(out, bundle.negative_part(), first, scales);
    return out;
}

std::string to_string(const Holdings& holdings, const Scales& scales)
{
    if (holdings.assets.empty() && holdings.liabilities.empty())
        return "0";
    std::string out;
    bool first = true;
    append_terms(out, holdings.assets, first, scales);
    append_terms(out, holdings.liabilities, first, scales);
    return out;
}

} // namespace moneta
