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

#include "moneta/scenario.hpp"

#include <string>

namespace moneta::scenario::detail {

template <class... F>
struct overloaded : F...
{
    using F::operator()...;
};
template <class... F>
overloaded(F...) -> overloaded<F...>;

/// Name of the transaction an exchange or txn command runs as. Steps count
/// from 1; `index` is the command's place within its step.
inline std::string txn_id(const std::string& given, std::size_t step, std::size_t index)
{
    if (!given.empty())
        return given;
    std::string id = "s" + std::to_string(step);
    if (index > 0)
        id += "." + std::to_string(index);
    return id;
}

} // namespace moneta::scenario::detail
