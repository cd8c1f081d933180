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

// Brute-force acceptance oracle for contracts. Languages are computed
// bottom-up as explicit sets of timed words, independently of the
// derivative code, then compared with residuation on every event sequence
// up to a length bound.

#include "moneta/contract.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace moneta::oracle {

constexpr int kEvents = 4;
constexpr int kTemplates = 4;
constexpr int kMaxLen = 6;

/// Timed word: up to 6 (event, time) letters packed 5 bits each, length in
/// the top bits. Times are strictly increasing within a word.
using Word = std::uint64_t;

inline int word_len(Word w) { return static_cast<int>(w >> 60); }
inline int letter_event(Word w, int i) { return static_cast<int>((w >> (5 * i)) & 3); }
inline int letter_time(Word w, int i) { return static_cast<int>((w >> (5 * i + 2)) & 7); }

inline Word push_letter(Word w, int event, int time)
{
    const int n = word_len(w);
    const Word body = w & ((Word(1) << 60) - 1);
    return (Word(n + 1) << 60) | body | (Word(event | (time << 2)) << (5 * n));
}

using Language = std::vector<Word>; // sorted, unique

struct Alphabet
{
    std::array<Event, kEvents> events;
    std::array<EventPattern, kTemplates> patterns;
    std::array<Window, kTemplates> windows;
    // Hand-written match table; deliberately not derived from EventPattern.
    bool match[kTemplates][kEvents];
};

inline Alphabet standard_alphabet()
{
    const Claim dkk = Claim::base("DKK");
    const Claim g = Claim::base("G");
    Alphabet a{};
    auto pay = [](const char* from, const char* to, const Claim& c) {
        Transfer t;
        t.from = AgentId(from);
        t.to = AgentId(to);
        t.bundle = Bundle{{c, 1}};
        return Event{t, 0};
    };
    a.events = {pay("A", "B", dkk), pay("B", "A", dkk), pay("A", "B", g), pay("C", "A", dkk)};
    // T0: exactly A->B 1 DKK. T1: anything B->A. T2: anything from A, early.
    // T3: anything to A, late. T0/T2 and T1/T3 overlap.
    a.patterns = {EventPattern{AgentId("A"), AgentId("B"), Bundle{{dkk, 1}}, std::nullopt},
                  EventPattern{AgentId("B"), AgentId("A"), std::nullopt, std::nullopt},
                  EventPattern{AgentId("A"), std::nullopt, std::nullopt, std::nullopt},
                  EventPattern{std::nullopt, AgentId("A"), std::nullopt, std::nullopt}};
    a.windows = {Window{0, 5}, Window{0, 5}, Window{0, 2}, Window{3, 5}};
    const bool table[kTemplates][kEvents] = {
        {true, false, false, false},
        {false, true, false, false},
        {true, false, true, false},
        {false, true, false, true},
    };
    for (int t = 0; t < kTemplates; ++t)
        for (int e = 0; e < kEvents; ++e)
            a.match[t][e] = table[t][e];
    return a;
}

inline void normalize(Language& l)
{
    std::sort(l.begin(), l.end());
    l.erase(std::unique(l.begin(), l.end()), l.end());
}

inline Language atom_language(const Alphabet& a, int tmpl)
{
    Language l;
    for (int e = 0; e < kEvents; ++e)
        if (a.match[tmpl][e])
            for (int t = 0; t < kMaxLen; ++t)
                if (a.windows[tmpl].contains(static_cast<std::uint64_t>(t)))
                    l.push_back(push_letter(0, e, t));
    normalize(l);
    return l;
}

inline Language concat(const Language& x, const Language& y)
{
    Language out;
    for (Word u : x)
        for (Word v : y)
        {
            const int nu = word_len(u), nv = word_len(v);
            if (nu + nv > kMaxLen)
                continue;
            if (nu > 0 && nv > 0 && letter_time(u, nu - 1) >= letter_time(v, 0))
                continue;
            Word w = u;
            for (int i = 0; i < nv; ++i)
                w = push_letter(w, letter_event(v, i), letter_time(v, i));
            out.push_back(w);
        }
    normalize(out);
    return out;
}

inline Language shuffle(const Language& x, const Language& y)
{
    Language out;
    for (Word u : x)
        for (Word v : y)
        {
            const int nu = word_len(u), nv = word_len(v);
            if (nu + nv > kMaxLen)
                continue;
            // Distinct times fix the interleaving.
            Word w = 0;
            int i = 0, j = 0;
            bool clash = false;
            while (i < nu || j < nv)
            {
                if (j == nv || (i < nu && letter_time(u, i) < letter_time(v, j)))
                {
                    w = push_letter(w, letter_event(u, i), letter_time(u, i));
                    ++i;
                }
                else if (i == nu || letter_time(v, j) < letter_time(u, i))
                {
                    w = push_letter(w, letter_event(v, j), letter_time(v, j));
                    ++j;
                }
                else
                {
                    clash = true;
                    break;
                }
            }
            if (!clash)
                out.push_back(w);
        }
    normalize(out);
    return out;
}

inline Language unite(const Language& x, const Language& y)
{
    Language out = x;
    out.insert(out.end(), y.begin(), y.end());
    normalize(out);
    return out;
}

enum class Op
{
    Done,
    Fail,
    Atom,
    Then,
    Or,
    Both,
};

struct Tree
{
    Op op;
    int atom = -1;
    int left = -1;
    int right = -1;
};

struct Result
{
    std::size_t trees = 0;
    std::size_t sequences = 0;
    std::size_t mismatches = 0;
    std::string first_mismatch;
};

class Checker
{
public:
    explicit Checker(Alphabet alphabet) : a_(std::move(alphabet)) {}

    /// Exhaustive over all trees of depth <= max_depth; trees at the
    /// deepest level are sampled with `stride` (1 = all).
    Result run(int max_depth, std::size_t stride = 1)
    {
        Result result;
        build_level1();
        std::size_t level_start = 0;
        for (int depth = 1; depth <= max_depth; ++depth)
        {
            const std::size_t level_end = pool_.size();
            if (depth == max_depth)
            {
                for (std::size_t i = 0; i < level_end; ++i)
                    if (i < level_start || (i - level_start) % stride == 0)
                        check(i, result);
                break;
            }
            // Next level: every op over every pair of trees so far.
            for (Op op : {Op::Then, Op::Or, Op::Both})
                for (std::size_t l = 0; l < level_end; ++l)
                    for (std::size_t r = 0; r < level_end; ++r)
                        if (l >= level_start || r >= level_start)
                            add_composite(op, static_cast<int>(l), static_cast<int>(r), depth + 1 == max_depth);
            level_start = level_end;
        }
        return result;
    }

    std::string render(int index) const
    {
        const Tree& t = pool_[static_cast<std::size_t>(index)];
        switch (t.op)
        {
        case Op::Done: return "done";
        case Op::Fail: return "fail";
        case Op::Atom: return "T" + std::to_string(t.atom);
        case Op::Then: return "then(" + render(t.left) + "," + render(t.right) + ")";
        case Op::Or: return "or(" + render(t.left) + "," + render(t.right) + ")";
        case Op::Both: return "both(" + render(t.left) + "," + render(t.right) + ")";
        }
        return "?";
    }

private:
    void build_level1()
    {
        pool_.clear();
        langs_.clear();
        contracts_.clear();
        add(Tree{Op::Done}, Language{0}, Contract::done());
        add(Tree{Op::Fail}, Language{}, Contract::fail());
        for (int k = 0; k < kTemplates; ++k)
            add(Tree{Op::Atom, k}, atom_language(a_, k), Contract::atom(a_.patterns[k], a_.windows[k]));
    }

    void add(Tree t, Language l, Contract c)
    {
        pool_.push_back(t);
        langs_.push_back(std::move(l));
        contracts_.push_back(std::move(c));
    }

    void add_composite(Op op, int l, int r, bool deepest)
    {
        const auto& ll = langs_[static_cast<std::size_t>(l)];
        const auto& lr = langs_[static_cast<std::size_t>(r)];
        const auto& cl = contracts_[static_cast<std::size_t>(l)];
        const auto& cr = contracts_[static_cast<std::size_t>(r)];
        Tree t{op, -1, l, r};
        (void)deepest;
        switch (op)
        {
        case Op::Then: add(t, concat(ll, lr), Contract::then(cl, cr)); break;
        case Op::Or: add(t, unite(ll, lr), Contract::either(cl, cr)); break;
        case Op::Both: add(t, shuffle(ll, lr), Contract::both(cl, cr)); break;
        default: break;
        }
    }

    static bool dense(Word w, int n)
    {
        for (int i = 0; i < n; ++i)
            if (letter_time(w, i) != i)
                return false;
        return true;
    }

    static Word prefix(Word w, int n)
    {
        Word p = 0;
        for (int i = 0; i < n; ++i)
            p = push_letter(p, letter_event(w, i), letter_time(w, i));
        return p;
    }

    void check(std::size_t index, Result& result)
    {
        ++result.trees;
        const Language& lang = langs_[index];
        // Words accepted with dense times 0..n-1, and dense prefixes of any
        // accepted word (the contract is still completable after them).
        Language accepted, completable;
        for (Word w : lang)
        {
            const int n = word_len(w);
            if (dense(w, n))
                accepted.push_back(w);
            for (int k = 0; k <= n && dense(w, k); ++k)
                completable.push_back(prefix(w, k));
        }
        normalize(accepted);
        normalize(completable);
        walk(index, contracts_[index], 0, result, accepted, completable);
    }

    void walk(std::size_t index, const Contract& residual, Word w, Result& result, const Language& accepted,
              const Language& completable)
    {
        ++result.sequences;
        const int n = word_len(w);
        const bool in_lang = std::binary_search(accepted.begin(), accepted.end(), w);
        const bool can_complete = std::binary_search(completable.begin(), completable.end(), w);
        const bool by_residual = residual.nullable();
        const bool residual_viable = residual.kind() != Contract::Kind::Fail
                                     && viable(residual, static_cast<std::uint64_t>(n));
        if (by_residual != in_lang || residual_viable != can_complete)
        {
            if (result.mismatches++ == 0)
                result.first_mismatch = render(static_cast<int>(index)) + " on word of length " + std::to_string(n)
                                        + (by_residual != in_lang ? " (acceptance)" : " (viability)");
        }
        if (residual.kind() == Contract::Kind::Fail || n == kMaxLen)
            return;
        for (int e = 0; e < kEvents; ++e)
        {
            Event ev = a_.events[static_cast<std::size_t>(e)];
            ev.time = static_cast<std::uint64_t>(n);
            walk(index, derivative(residual, ev), push_letter(w, e, n), result, accepted, completable);
        }
    }

    Alphabet a_;
    std::vector<Tree> pool_;
    std::vector<Language> langs_;
    std::vector<Contract> contracts_;
};

} // namespace moneta::oracle
