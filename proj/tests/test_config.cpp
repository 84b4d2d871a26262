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


#include "test_support.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hmimos;
namespace fs = std::filesystem;

namespace
{

struct cli_result
{
    int code;
    std::string err;
};

fs::path scratch(const std::string &tag)
{
    const fs::path p = fs::temp_directory_path() / ("hmimos_test_" + tag);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

cli_result run_cli(const std::string &args, const fs::path &dir)
{
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = std::string(HMIMOS_CLI_PATH) + " " + args + " > " + (dir / "stdout.txt").string() +
                            " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    std::ifstream f(err);
    std::stringstream ss;
    ss << f.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string scenario_file(const std::string &name) { return std::string(HMIMOS_SCENARIO_DIR) + "/" + name; }

size_t data_rows(const fs::path &csv)
{
    std::ifstream f(csv);
    std::string line;
    size_t n = 0;
    while (std::getline(f, line))
        ++n;
    return n >= 2 ? n - 2 : 0;
}

const char *small_three_user = R"(
scenario.name = small
scenario.users = 3
tx.nx = 6
tx.ny = 6
rx.nx = 2
rx.ny = 1
user1.z = 1
user1.x = 0.3
user2.z = 2
user2.y = -0.4
user3.z = 3
user3.x = -0.2
)";

} // namespace

TEST_CASE("flat config parses keys values and comments")
{
    const auto c = flat_config::parse("# header\n tx.nx = 5  # trailing\n\nuser1.z=2.5\nscenario.name = a b\n");
    CHECK(c.integer("tx.nx", 0) == 5);
    CHECK(c.real("user1.z") == 2.5);
    CHECK(c.str("scenario.name", "") == "a b");
    CHECK_FALSE(c.has("tx.ny"));
    CHECK(c.real("tx.dx", 0.4) == 0.4);
}

TEST_CASE("flat config rejects malformed lines and values")
{
    CHECK_THROWS_AS(flat_config::parse("tx.nx 5\n"), config_error);
    CHECK_THROWS_AS(flat_config::parse(" = 5\n"), config_error);
    const auto c = flat_config::parse("tx.nx = five\nflag = maybe\n");
    CHECK_THROWS_AS(c.integer("tx.nx", 1), config_error);
    CHECK_THROWS_AS(c.flag("flag", true), config_error);
    CHECK_THROWS_AS(c.real("missing"), config_error);
    CHECK_THROWS_AS(flat_config::load("/nonexistent/scenario.cfg"), config_error);
}

TEST_CASE("resolved configuration lists defaults that were read")
{
    const auto c = flat_config::parse("b = 2\n");
    c.real("a", 0.1);
    CHECK(c.resolved() == "a=0.1; b=2");
}

TEST_CASE("sweeps expand start step stop")
{
    const auto s = parse_sweep("-10:2:20");
    REQUIRE(s.size() == 16);
    CHECK(s.front() == -10.0);
    CHECK(s.back() == 20.0);
    CHECK(parse_sweep("0:5:12") == std::vector<double>{0.0, 5.0, 10.0});
    CHECK(parse_sweep("7") == std::vector<double>{7.0});
    CHECK(parse_sweep("20:-10:0") == std::vector<double>{20.0, 10.0, 0.0});
    CHECK_THROWS_AS(parse_sweep("0:0:5"), config_error);
    CHECK_THROWS_AS(parse_sweep("5:1:0"), config_error);
    CHECK_THROWS_AS(parse_sweep("1:2"), config_error);
}

TEST_CASE("scenario keys build surfaces and users")
{
    const auto c = flat_config::parse("scenario.users = 2\ntx.nx = 3\ntx.ny = 2\nrx.nx = 2\nuser1.z = 1\n"
                                      "user2.z = 4\nuser2.x = 0.5\nuser2.nx = 1\nuser2.ny = 1\n");
    const scenario sc = scenario_from_config(c);
    CHECK(sc.tx_count() == 6);
    CHECK(sc.tx.dx == 0.4);
    REQUIRE(sc.users.size() == 2);
    CHECK(patch_count(sc.users[0].surface) == 4);
    CHECK(patch_count(sc.users[1].surface) == 1);
    CHECK(sc.rx_surface(1).center.x() == 0.5);
    CHECK(sc.users[1].distance == 4.0);
}

TEST_CASE("scenario without a user distance is a configuration error")
{
    CHECK_THROWS_AS(scenario_from_config(flat_config::parse("scenario.users = 1\n")), config_error);
    CHECK_THROWS_AS(scenario_from_config(flat_config::parse("user1.z = -1\n")), config_error);
    CHECK_THROWS_AS(scenario_from_config(flat_config::parse("user1.z = 1\ntx.layout = hexagon\n")), config_error);
}

TEST_CASE("thread count comes from the override then the environment")
{
    set_thread_count(0);
    ::setenv("HMIMOS_THREADS", "3", 1);
    CHECK(thread_count() == 3);
    set_thread_count(2);
    CHECK(thread_count() == 2);
    set_thread_count(0);
    ::setenv("HMIMOS_THREADS", "junk", 1);
    CHECK(thread_count() == 1);
    ::unsetenv("HMIMOS_THREADS");
    CHECK(thread_count() == 1);
}

TEST_CASE("parallel loop visits each index once and rethrows")
{
    set_thread_count(4);
    std::vector<std::atomic<int>> hits(1000);
    parallel_for(1000, [&](long i) { hits[size_t(i)]++; });
    for (const auto &h : hits)
        CHECK(h.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, [](long i) {
                        if (i == 7)
                            throw domain_error("boom");
                    }),
                    domain_error);
    set_thread_count(0);
}

TEST_CASE("csv tables carry a comment line and reject ragged rows")
{
    csv_table t("x.csv", "config: a=1", {"a", "b"});
    t.row({std::string("u"), 0.1});
    CHECK(t.text() == "# config: a=1\na,b\nu,0.10000000000000001\n");
    CHECK_THROWS_AS(t.row({1L}), dimension_error);
}

TEST_CASE("channel pipeline writes every complex entry")
{
    const auto tables = run_channel(flat_config::load(scenario_file("two_user.cfg")));
    REQUIRE(tables.size() == 2);
    CHECK(tables[0].name() == "channel.csv");
    CHECK(tables[0].rows() == 24 * 48);
    CHECK(tables[0].text().rfind("# config: ", 0) == 0);
    CHECK(tables[1].rows() == 2);
}

TEST_CASE("precode sweep has one row per scheme allocation and SNR")
{
    auto c = flat_config::parse(small_three_user);
    c.set("sweep.snr", "-10:2:20");
    const auto tables = run_precode_sweep(c);
    REQUIRE(tables[0].name() == "se.csv");
    CHECK(tables[0].rows() == 2 * 3 * 16);
    CHECK(tables[0].text().find("precoder.tol=1e-10") != std::string::npos);
}

TEST_CASE("CLI channel run writes the 2-user channel")
{
    const fs::path dir = scratch("channel");
    const auto r = run_cli("channel --scenario " + scenario_file("two_user.cfg") + " --out " + (dir / "out").string(), dir);
    CHECK(r.code == 0);
    CHECK(data_rows(dir / "out" / "channel.csv") == 1152);
}

TEST_CASE("CLI precode sweep honors the grid flags")
{
    const fs::path dir = scratch("sweep");
    {
        std::ofstream f(dir / "small.cfg");
        f << small_three_user;
    }
    const auto r = run_cli("precode-sweep --scenario " + (dir / "small.cfg").string() +
                               " --schemes uc,two-layer --pa pa1,pa2,pa3 --snr -10:2:20 --tol 1e-10 --out " +
                               (dir / "out").string(),
                           dir);
    CHECK(r.code == 0);
    CHECK(data_rows(dir / "out" / "se.csv") == 96);
}

TEST_CASE("CLI rejects four users for user clustering")
{
    const fs::path dir = scratch("k4");
    const auto r = run_cli("precode-sweep --scenario " + scenario_file("four_user.cfg") + " --scheme uc --out " +
                               (dir / "out").string(),
                           dir);
    CHECK(r.code == 2);
    CHECK(r.err.find("K must be divisible by 3") != std::string::npos);
}

TEST_CASE("CLI reports a degenerate precoder with the block name")
{
    const fs::path dir = scratch("degenerate");
    {
        std::ofstream f(dir / "boresight.cfg");
        f << "tx.nx = 1\ntx.ny = 1\nrx.nx = 1\nrx.ny = 1\nuser1.z = 1\n";
    }
    const auto r = run_cli("precode-sweep --scenario " + (dir / "boresight.cfg").string() + " --scheme two-layer --out " +
                               (dir / "out").string(),
                           dir);
    CHECK(r.code == 3);
    CHECK(r.err.find("H_xy") != std::string::npos);
    CHECK(r.err.find("precode-sweep") != std::string::npos);
}

TEST_CASE("CLI rejects unknown presets and bad invocations")
{
    const fs::path dir = scratch("bad");
    CHECK(run_cli("--preset fig99 --out " + dir.string(), dir).code == 2);
    CHECK(run_cli("--preset fig4 channel --out " + dir.string(), dir).code == 2);
    CHECK(run_cli("channel --out " + dir.string(), dir).code == 2);
    CHECK(run_cli("channel --scenario /nonexistent.cfg --out " + dir.string(), dir).code == 2);
    CHECK(run_cli("--snr", dir).code == 2);
}

TEST_CASE("CLI preset writes figure tables")
{
    const fs::path dir = scratch("preset");
    const auto r = run_cli("--preset fig4 --out " + (dir / "out").string(), dir);
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "out" / "fig4_correlation.csv"));
}

TEST_CASE("figure presets cover the advertised setups")
{
    const auto f4 = run_preset("fig4");
    REQUIRE(f4.size() == 1);
    // three spacings, patch 1 against each of the 50 patches
    CHECK(f4[0].rows() == 3 * 50);
    CHECK(preset_names().size() == 10);
    CHECK_THROWS_AS(run_preset("fig3"), config_error);
}
