// SPDX-License-Identifier: Apache-2.0
//
// hmimos: near-field tri-polarized holographic MIMO surface simulator
// Copyright (C) 2026 The hmimos authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

// Command-line runner. Exit codes: 0 ok, 1 runtime/I-O failure,
// 2 configuration error, 3 precoder degeneracy.

#include <hmimos/hmimos.hpp>

#include <CLI11.hpp>

#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

namespace
{

int fail(const std::string &stage, const std::string &msg, int code)
{
    std::cerr << "hmimos: " << stage << ": " << msg << "\n";
    return code;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Near-field tri-polarized holographic MIMO surface simulator"};
    app.fallthrough();

    std::string scenario_path, preset, out_dir = ".", snr, schemes, pa;
    double tol = -1.0;
    app.add_option("--scenario", scenario_path, "Scenario file (flat key = value)");
    app.add_option("--preset", preset, "Figure preset: fig4 .. fig13");
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--snr", snr, "SNR sweep start:step:stop in dB");
    app.add_option("--schemes,--scheme", schemes, "Precoding schemes: uc,two-layer");
    app.add_option("--pa", pa, "Power allocations: pa1,pa2,pa3");
    app.add_option("--tol", tol, "Rank tolerance relative to the largest singular value");

    using pipeline = std::function<hmimos::table_list(const hmimos::flat_config &)>;
    const std::map<std::string, pipeline> pipelines = {
        {"channel", hmimos::run_channel},       {"correlation", hmimos::run_correlation},
        {"dof", hmimos::run_dof},               {"capacity", hmimos::run_capacity},
        {"precode-sweep", hmimos::run_precode_sweep}};
    std::map<std::string, CLI::App *> subs;
    for (const auto &kv : pipelines)
        subs[kv.first] = app.add_subcommand(kv.first, "Run the " + kv.first + " pipeline");
    app.require_subcommand(0, 1);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return 2;
    }

    std::string stage = "config";
    try
    {
        hmimos::table_list tables;
        std::string chosen;
        for (const auto &kv : subs)
            if (kv.second->parsed())
                chosen = kv.first;

        if (!preset.empty())
        {
            if (!chosen.empty())
                return fail(stage, "--preset cannot be combined with a subcommand", 2);
            stage = preset;
            tables = hmimos::run_preset(preset);
        }
        else
        {
            if (chosen.empty())
                return fail(stage, "no subcommand or --preset given (see --help)", 2);
            if (scenario_path.empty())
                return fail(stage, "--scenario is required for " + chosen, 2);
            hmimos::flat_config cfg = hmimos::flat_config::load(scenario_path);
            if (!snr.empty())
                cfg.set("sweep.snr", snr);
            if (!schemes.empty())
                cfg.set("sweep.schemes", schemes);
            if (!pa.empty())
                cfg.set("sweep.pa", pa);
            if (tol >= 0.0)
                cfg.set("precoder.tol", tol);
            stage = chosen;
            tables = pipelines.at(chosen)(cfg);
        }

        stage = "output";
        std::filesystem::create_directories(out_dir);
        for (const auto &t : tables)
        {
            t.write(out_dir);
            std::cout << out_dir << "/" << t.name() << " (" << t.rows() << " rows)\n";
        }
    }
    catch (const hmimos::config_error &e)
    {
        return fail(stage, e.what(), 2);
    }
    catch (const hmimos::geometry_error &e)
    {
        return fail(stage, e.what(), 2);
    }
    catch (const hmimos::singularity_error &e)
    {
        return fail(stage, e.what(), 2);
    }
    catch (const hmimos::degeneracy_error &e)
    {
        return fail(stage, std::string(e.what()) + " [block " + e.block() + "]", 3);
    }
    catch (const hmimos::capacity_error &e)
    {
        return fail(stage, e.what(), 3);
    }
    catch (const std::exception &e)
    {
        return fail(stage, e.what(), 1);
    }
    return 0;
}
