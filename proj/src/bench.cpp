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

#include <sys/resource.h>

#include <chrono>
#include <random>

namespace moneta::scenario {

BenchReport bench_transfers(std::uint64_t n, std::size_t accounts, std::uint64_t seed)
{
    if (n < 1)
        fail(ErrorCode::InvalidArgument, "bench needs n >= 1");
    if (accounts < 2)
        fail(ErrorCode::InvalidArgument, "bench needs at least two accounts");

    const Claim money = Claim::base("DKK");
    constexpr Quantity kFunding = 1'000'000;
    OwnershipState s;
    std::vector<ResourceId> ids;
    ids.reserve(accounts);
    for (std::size_t i = 0; i < accounts; ++i)
    {
        const AgentId a("a" + std::to_string(i));
        s.add_agent(a);
        ids.push_back(account_of(a));
        s.endow(ids.back(), Bundle::of(money, kFunding));
    }
    const Bundle initial = s.total();

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, accounts - 1);
    const auto start = std::chrono::steady_clock::now();
    for (std::uint64_t k = 0; k < n; ++k)
    {
        std::size_t from = pick(rng);
        Quantity have = s.balance(ids[from]).get(money);
        while (have == 0)
        {
            from = pick(rng);
            have = s.balance(ids[from]).get(money);
        }
        std::size_t to = pick(rng);
        while (to == from)
            to = pick(rng);
        const auto cap = static_cast<std::uint64_t>(std::min<Quantity>(have, 10'000));
        const auto qty = static_cast<Quantity>(std::uniform_int_distribution<std::uint64_t>(1, cap)(rng));
        s.transfer_balance(ids[from], ids[to], Bundle::of(money, qty));
    }
    const auto stop = std::chrono::steady_clock::now();

    BenchReport r;
    r.transfers = n;
    r.accounts = accounts;
    r.seconds = std::chrono::duration<double>(stop - start).count();
    r.rate = r.seconds > 0 ? static_cast<double>(n) / r.seconds : 0;
    rusage ru{};
    getrusage(RUSAGE_SELF, &ru);
    r.peak_rss_kb = ru.ru_maxrss;
    r.conserved = s.total() == initial;
    return r;
}

} // namespace moneta::scenario
