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
#include "moneta/ledger.hpp"

namespace moneta {

std::string_view to_string(TransferMode mode)
{
    return mode == TransferMode::Balance ? "balance" : "control";
}

bool KnowledgeState::knows(const AgentId& agent, const std::string& fact) const
{
    auto it = facts_.find(agent);
    return it != facts_.end() && it->second.count(fact) != 0;
}

void KnowledgeState::learn(const AgentId& agent, const std::string& fact)
{
    facts_[agent].insert(fact);
}

const std::set<std::string>& KnowledgeState::facts_of(const AgentId& agent) const
{
    static const std::set<std::string> kNone;
    auto it = facts_.find(agent);
    return it == facts_.end() ? kNone : it->second;
}

namespace {

template <class... Ts>
struct overloaded : Ts...
{
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_agent(const OwnershipState& s, const AgentId& a)
{
    if (!s.has_agent(a))
        fail(ErrorCode::UnknownAgent, "unknown agent '" + a.value + "'");
}

} // namespace

void apply_transfer(OwnershipState& s, const Transfer& t, const FiatRegistry& reg)
{
    require_agent(s, t.from);
    require_agent(s, t.to);
    if (t.mode == TransferMode::Control)
    {
        if (!t.source)
            fail(ErrorCode::InvalidArgument, "control transfer needs the resource id to hand over");
        if (!t.bundle.empty() && normalize(t.bundle, reg) != s.balance(*t.source))
            fail(ErrorCode::ValueMismatch,
                 "'" + t.source->value + "' holds " + to_string(s.balance(*t.source)) + ", not "
                     + to_string(t.bundle));
        s.transfer_control(*t.source, t.from, t.to);
        return;
    }
    const ResourceId src = t.source.value_or(account_of(t.from));
    const ResourceId dst = t.target.value_or(account_of(t.to));
    if (s.controller(src) != t.from)
        fail(ErrorCode::NotController, t.from.value + " does not control '" + src.value + "'");
    if (s.controller(dst) != t.to)
        fail(ErrorCode::NotController, t.to.value + " does not control '" + dst.value + "'");
    s.transfer_balance(src, dst, normalize(t.bundle, reg));
}

void World::apply(const Event& e)
{
    if (last_time && e.time <= *last_time)
        fail(ErrorCode::NonMonotoneTime,
             "event time " + std::to_string(e.time) + " not after " + std::to_string(*last_time));
    // Ownership operations are strongly exception-safe on their own; the
    // knowledge updates below cannot fail after validation.
    std::visit(overloaded{
                   [&](const Transfer& t) { apply_transfer(state, t, fiat); },
                   [&](const Transformation& t) {
                       require_agent(state, t.agent);
                       state.transform(t.agent, normalize(t.consumed, fiat), normalize(t.produced, fiat));
                   },
                   [&](const Issue& i) {
                       state.issue(i.issuer, normalize(i.underlying, fiat), i.qty, fiat);
                   },
                   [&](const Annihilation& a) {
                       require_agent(state, a.agent);
                       state.annihilate(a.agent, normalize(a.underlying, fiat), a.qty, fiat);
                   },
                   [&](const Communication& c) {
                       require_agent(state, c.from);
                       require_agent(state, c.to);
                       if (!knowledge.knows(c.from, c.fact))
                           fail(ErrorCode::UnknownFact, c.from.value + " does not know '" + c.fact + "'");
                       knowledge.learn(c.to, c.fact);
                   },
                   [&](const Conclusion& c) {
                       require_agent(state, c.agent);
                       for (const auto& p : c.premises)
                           if (!knowledge.knows(c.agent, p))
                               fail(ErrorCode::UnknownFact, c.agent.value + " does not know premise '" + p + "'");
                       knowledge.learn(c.agent, c.fact);
                   },
                   [&](const Observation& o) {
                       require_agent(state, o.agent);
                       knowledge.learn(o.agent, o.fact);
                   },
               },
               e.body);
    last_time = e.time;
}

World apply_event(const World& world, const Event& e)
{
    World next = world;
    next.apply(e);
    return next;
}

Bundle total_delta(const Event& e)
{
    if (const auto* t = std::get_if<Transformation>(&e.body))
        return t->produced - t->consumed;
    return {};
}

std::string describe(const Event& e)
{
    std::string body = std::visit(
        overloaded{
            [](const Transfer& t) {
                return "transfer " + t.from.value + "->" + t.to.value + " " + to_string(t.bundle) + " ("
                       + std::string(to_string(t.mode)) + ")";
            },
            [](const Transformation& t) {
                return "transform " + t.agent.value + " " + to_string(t.consumed) + " -> " + to_string(t.produced);
            },
            [](const Issue& i) {
                return "issue " + i.issuer.value + " " + moneta::to_string(i.qty) + " "
                       + Claim::iou(i.issuer, i.underlying).to_string();
            },
            [](const Annihilation& a) {
                return "annihilate " + a.agent.value + " " + moneta::to_string(a.qty) + " "
                       + Claim::iou(a.agent, a.underlying).to_string();
            },
            [](const Communication& c) { return "tell " + c.from.value + "->" + c.to.value + " '" + c.fact + "'"; },
            [](const Conclusion& c) { return "conclude " + c.agent.value + " '" + c.fact + "'"; },
            [](const Observation& o) { return "observe " + o.agent.value + " '" + o.fact + "'"; },
        },
        e.body);
    return "t=" + std::to_string(e.time) + " " + body;
}

} // namespace moneta
