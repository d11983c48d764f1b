// Copyright 2026 The fbqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "fbqc/config.hpp"

namespace fs = std::filesystem;
using namespace fbqc;

namespace {

struct Run {
    int status;
    std::string out;
};

Run run(const std::string &args) {
    std::string cmd = std::string(FBQC_CLI) + " " + args + " 2>/dev/null";
    FILE *pipe = popen(cmd.c_str(), "r");
    std::string out;
    std::array<char, 4096> buf;
    while (std::size_t n = fread(buf.data(), 1, buf.size(), pipe)) {
        out.append(buf.data(), n);
    }
    int st = pclose(pipe);
    return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string &name) {
    fs::path d = fs::temp_directory_path() / ("fbqc_cli_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

bool contains(const std::string &hay, const std::string &needle) {
    return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST(Cli, InspectFourLineExample) {
    auto r = run("inspect --example fig3");
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(contains(r.out, "S_out (4)\n  X1Z2\n  m2 m4 Z1X2Z7\n  m1 m3 Z2X7Z8\n  Z7X8\n")) << r.out;
    EXPECT_TRUE(contains(r.out, "oracle agreement 16/16"));
}

TEST(Cli, InspectBellExample) {
    auto r = run("inspect --example fig4");
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(contains(r.out, "m^XX_{2,5} m^ZZ_{6,9} m^XX_{10,14} m^ZZ_{4,13} = +1")) << r.out;
    EXPECT_TRUE(contains(r.out, "m^XX_{3,7} m^ZZ_{8,11} m^XX_{12,15} m^ZZ_{4,13} = +1"));
    EXPECT_TRUE(contains(r.out, "m^ZZ_{4,13} X1X16"));
    EXPECT_TRUE(contains(r.out, "oracle agreement 50/50"));
}

TEST(Cli, InspectLatticeWritesGraphsAndNetwork) {
    auto dir = scratch("inspect");
    auto r = run("inspect --kind six-ring --size 2 --graph --dump-network --out " + dir.string());
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "degree histogram 12:8"));
    EXPECT_TRUE(fs::exists(dir / "six-ring_L2_primal.edges"));
    EXPECT_TRUE(fs::exists(dir / "six-ring_L2_dual.edges"));
    EXPECT_EQ(slurp(dir / "six-ring_L2.network").rfind("fbqc-network v1\n", 0), 0u);
    auto r4 = run("inspect --kind four-star --size 2");
    EXPECT_TRUE(contains(r4.out, "degree histogram 24:8")) << r4.out;
}

TEST(Cli, UsageErrorsExitWithTwo) {
    EXPECT_EQ(run("inspect --kind hexagon").status, 2);
    EXPECT_EQ(run("inspect --kind four-star --size 1").status, 2);
    EXPECT_EQ(run("simulate --kind six-ring --size 4 --p-erasure 0.1 --trials 0").status, 2);
    EXPECT_EQ(run("simulate --kind six-ring --size 4 --p-erasure 1.5").status, 2);
    EXPECT_EQ(run("sweep --kind six-ring --sizes 4 --x-min 0.2 --x-max 0.1").status, 2);
    EXPECT_EQ(run("frobnicate").status, 2);
    auto dir = scratch("badcfg");
    std::ofstream(dir / "bad.ini") << "[simulate]\nkind = six-ring\ntrails = 100\n";
    EXPECT_EQ(run("--config " + (dir / "bad.ini").string() + " simulate").status, 2);
    std::ofstream(dir / "bad2.ini") << "[simulaet]\nkind = six-ring\n";
    EXPECT_EQ(run("--config " + (dir / "bad2.ini").string() + " simulate").status, 2);
}

TEST(Cli, ConfigRoundTrip) {
    std::string text =
        "[sweep]\nkind = four-star\nsizes = 8,10,12\nx_min = 0.055\nx_max = 0.085\ntrials = 15000\n\n"
        "[lossmap]\nerasure_threshold = 0.1198\n";
    auto cfg = CampaignConfig::parse(text);
    auto again = CampaignConfig::parse(cfg.serialize());
    EXPECT_TRUE(cfg == again);
    EXPECT_EQ(again.section("sweep").at("x_max"), "0.085");
    EXPECT_THROW(CampaignConfig::parse("[sweep]\nbogus = 1\n"), ConfigError);
    EXPECT_THROW(CampaignConfig::parse("[nonsense]\nkind = six-ring\n"), ConfigError);
}

TEST(Cli, SimulateFromConfigWithFlagOverride) {
    auto dir = scratch("simcfg");
    std::ofstream(dir / "sim.ini") << "[simulate]\nkind = six-ring\nsize = 4\np_erasure = 0.3\ntrials = 200\nseed = 9\n";
    auto r = run("--config " + (dir / "sim.ini").string() + " simulate --p-erasure 0");
    ASSERT_EQ(r.status, 0);
    EXPECT_TRUE(contains(r.out, "six-ring,4,0,0,0,200,0,0,")) << r.out;
    auto lo = run("simulate --kind six-ring --size 4 --p-fail 0.25 --encoded --trials 100 --out " + dir.string() +
                  " --dump-matching 2");
    ASSERT_EQ(lo.status, 0) << lo.out;
    EXPECT_TRUE(contains(lo.out, "six-ring,4,0,0.04296875,0,100,"));
    EXPECT_EQ(slurp(dir / "matching_problems.txt").rfind("# trial 0\nterminals ", 0), 0u);
}

TEST(Cli, SweepIsReproducible) {
    auto a = scratch("sweep_a"), b = scratch("sweep_b");
    std::string args = "threshold --kind six-ring --sizes 3,4 --x-min 0.05 --x-max 0.3 --points 5 --trials 300 --seed 4";
    ASSERT_EQ(run(args + " --workers 1 --out " + a.string()).status, 0);
    ASSERT_EQ(run(args + " --workers 8 --out " + b.string()).status, 0);
    for (const char *f : {"points.csv", "series_L3.dat", "series_L4.dat"}) {
        EXPECT_FALSE(slurp(a / f).empty()) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    auto pts = slurp(a / "points.csv");
    EXPECT_EQ(std::count(pts.begin(), pts.end(), '\n'), 11);
}

TEST(Cli, LossMap) {
    auto dir = scratch("lossmap");
    auto r = run("lossmap --out " + dir.string());
    ASSERT_EQ(r.status, 0);
    std::istringstream in(slurp(dir / "lossmap.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "curve,p_fail,p_loss_star,boosting_point");
    double at_quarter = -1, best = 0, best_pf = 0, at_half = -1;
    std::size_t zero_rows = 0;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string curve, pf, loss, boost;
        std::getline(ls, curve, ',');
        std::getline(ls, pf, ',');
        std::getline(ls, loss, ',');
        std::getline(ls, boost, ',');
        if (curve != "six-ring-encoded") {
            zero_rows += std::stod(loss) == 0 && curve == "four-star" && std::stod(pf) == 0.25;
            continue;
        }
        double p = std::stod(pf), l = std::stod(loss);
        if (p == 0.25) {
            at_quarter = l;
            EXPECT_EQ(boost, "1");
        }
        if (p == 0.5) {
            at_half = l;
        }
        if (l > best) {
            best = l, best_pf = p;
        }
    }
    EXPECT_NEAR(at_quarter, 0.027, 0.002);
    EXPECT_EQ(at_half, 0);
    EXPECT_EQ(zero_rows, 1u);
    // Loss tolerance peaks at an interior failure probability.
    EXPECT_GT(best_pf, 1.0 / 64);
    EXPECT_LT(best_pf, 0.432);
}

TEST(Cli, AlgebraOnDumpedNetwork) {
    auto dir = scratch("algebra");
    ASSERT_EQ(run("inspect --example fig3 --dump-network --out " + dir.string()).status, 0);
    auto net = (dir / "fig3.network").string();
    auto r = run("algebra --network " + net + " --outcomes +-++");
    ASSERT_EQ(r.status, 0) << r.out;
    EXPECT_TRUE(contains(r.out, "  -Z1X2Z7\n")) << r.out;
    EXPECT_TRUE(contains(r.out, "  +Z2X7Z8\n"));
    EXPECT_EQ(run("algebra --network " + net + " --outcomes ++").status, 2);
    std::ofstream(dir / "broken.network") << "fbqc-network v1\nqubits two\n";
    EXPECT_EQ(run("algebra --network " + (dir / "broken.network").string()).status, 2);
}
