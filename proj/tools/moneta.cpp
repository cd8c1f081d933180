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

// moneta: run scenario files, settle them over a simulated network,
// measure transfer throughput, check the bundled figure corpus.

#include "moneta/error.hpp"
#include "moneta/scenario.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>

namespace ms = moneta::scenario;

namespace {

int run_file(const std::string& path, const ms::RunOptions& opts, const std::string& format)
{
    ms::Scenario s;
    try
    {
        s = ms::parse_scenario(ms::read_file(path));
    }
    catch (const moneta::Error& e)
    {
        std::cerr << path << ":" << e.what() << "\n";
        return 2;
    }
    const ms::Report r = ms::run_scenario(s, opts);
    std::cout << (format == "json" ? ms::render_json(r, path) : ms::render_table(r));
    return r.passed() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"moneta: contract-backed digital cash engine"};
    app.require_subcommand(1);

    std::string file;
    std::string format = "table";
    const auto formats = CLI::IsMember({"table", "json"});

    auto* run = app.add_subcommand("run", "run a scenario file and check its expectations");
    run->add_option("file", file, "scenario (.mny)")->required()->check(CLI::ExistingFile);
    run->add_option("--format", format, "table or json")->check(formats);

    std::size_t nodes = 3;
    std::uint64_t seed = 0;
    std::vector<std::string> crashes;
    auto* sim = app.add_subcommand("simulate", "settle transactions by two-phase commit over simulated nodes");
    sim->add_option("file", file, "scenario (.mny)")->required()->check(CLI::ExistingFile);
    sim->add_option("--nodes", nodes, "resource-manager nodes")->check(CLI::Range(1, 64));
    sim->add_option("--seed", seed, "scheduler seed");
    sim->add_option("--crash", crashes, "fault point node@phase (repeatable)");
    sim->add_option("--format", format, "table or json")->check(formats);

    std::uint64_t n = 1'500'000;
    std::size_t accounts = 5000;
    auto* bench = app.add_subcommand("bench", "random balance transfers, reporting rate and peak memory");
    bench->add_option("--n", n, "transfers")->check(CLI::PositiveNumber);
    bench->add_option("--accounts", accounts, "accounts")->check(CLI::Range(2, 100'000'000));
    bench->add_option("--seed", seed, "seed");
    bench->add_option("--format", format, "table or json")->check(formats);

    std::string dir = MONETA_SCENARIO_DIR;
    auto* goldens = app.add_subcommand("goldens", "run the bundled scenario corpus against its golden tables");
    goldens->add_option("--dir", dir, "corpus directory")->check(CLI::ExistingDirectory);

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (*run)
            return run_file(file, {}, format);
        if (*sim)
        {
            ms::RunOptions opts;
            opts.nodes = nodes;
            opts.seed = seed;
            for (const auto& c : crashes)
                opts.faults.push_back(moneta::parse_fault_point(c));
            return run_file(file, opts, format);
        }
        if (*bench)
        {
            const ms::BenchReport r = ms::bench_transfers(n, accounts, seed);
            if (format == "json")
            {
                nlohmann::ordered_json j{{"transfers", r.transfers}, {"accounts", r.accounts},
                                         {"seconds", r.seconds},     {"rate", r.rate},
                                         {"peak_rss_kb", r.peak_rss_kb}, {"conserved", r.conserved}};
                std::cout << j.dump(2) << "\n";
            }
            else
            {
                std::printf("transfers   %llu\naccounts    %zu\nseconds     %.3f\nrate        %.0f/s\n"
                            "peak rss    %ld KiB\nconserved   %s\n",
                            static_cast<unsigned long long>(r.transfers), r.accounts, r.seconds, r.rate,
                            r.peak_rss_kb, r.conserved ? "yes" : "NO");
            }
            return r.conserved ? 0 : 1;
        }
        bool all = true;
        for (const auto& e : ms::run_corpus(dir))
        {
            std::cout << (e.passed ? "PASS  " : "FAIL  ") << e.name << "  (" << e.report.rows.size() << " rows)\n";
            for (const auto& p : e.problems)
                std::cout << "      " << p << "\n";
            all = all && e.passed;
        }
        return all ? 0 : 1;
    }
    catch (const moneta::Error& e)
    {
        std::cerr << "moneta: " << e.what() << "\n";
        return 2;
    }
}
