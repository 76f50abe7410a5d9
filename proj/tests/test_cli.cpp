/*
 * Copyright 2026 The pgsi authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sys/wait.h>

#include "pg/io.hpp"
#include "pg/oracle.hpp"

using namespace pg;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code = -1;
    std::string out, err;
};

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() / ("pgsi_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    std::string write(const std::string& name, const std::string& text) const
    {
        std::ofstream(path(name)) << text;
        return path(name);
    }
    static std::string slurp(const std::string& file)
    {
        std::ifstream in(file);
        return {std::istreambuf_iterator<char>(in), {}};
    }
    Outcome run(const std::string& args) const
    {
        std::string err = path("stderr.txt");
        std::string cmd = std::string(PGSI_BIN) + " " + args + " 2>" + err;
        Outcome r;
        FILE* p = ::popen(cmd.c_str(), "r");
        if (!p) return r;
        char buf[4096];
        std::size_t n;
        while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
        int status = ::pclose(p);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.err = slurp(err);
        return r;
    }

    fs::path dir_;
};

const char* kCyclePair = "parity 1;\n0 2 0 1;\n1 1 1 0;\n";

} // namespace

TEST_F(Cli, SolveLocal)
{
    auto f = write("g1.pg", kCyclePair);
    auto r = run("solve " + f);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "paritysol 1;\n0 0 1;\n1 0;\n");
}

TEST_F(Cli, SolveGlobalFromStdin)
{
    auto f = write("g1.pg", kCyclePair);
    auto r = run("solve --mode global - < " + f);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "paritysol 1;\n0 0 1;\n1 0;\n");
}

TEST_F(Cli, SolveWithStatsAndTrace)
{
    auto f = write("g1.pg", kCyclePair);
    auto r = run("solve --stats --check-invariants --trace " + path("t.jsonl") + " " + f);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("winner: 0"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("visited: 2"), std::string::npos) << r.err;
    EXPECT_NE(r.err.find("time-ms:"), std::string::npos);
    std::string trace = slurp(path("t.jsonl"));
    EXPECT_NE(trace.find("{\"kind\":\"expand\""), std::string::npos) << trace;

    r = run("solve --trace " + path("t.txt") + " --trace-format text " + f);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(slurp(path("t.txt")).find("expand [player 0]"), std::string::npos);
}

TEST_F(Cli, SparseIdsAreKept)
{
    auto f = write("s.pg", "parity 40;\n40 2 0 7;\n7 1 1 40;\n");
    auto r = run("solve --start 40 " + f);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "paritysol 40;\n7 0;\n40 0 7;\n");
    r = run("solve --start 3 " + f);
    EXPECT_EQ(r.code, 2);
}

TEST_F(Cli, InputErrorsExitWithTwo)
{
    auto f = write("bad.pg", "parity 1;\n0 2 0 1;\n1 1 3 0;\n");
    auto r = run("solve " + f);
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("3:5"), std::string::npos) << r.err;
    EXPECT_EQ(run("solve " + path("missing.pg")).code, 2);
    EXPECT_EQ(run("solve --policy nonsense --mode global " + write("g.pg", kCyclePair)).code, 2);
    EXPECT_NE(run("frobnicate").code, 0);
}

TEST_F(Cli, VerifyRoundTrip)
{
    auto game = write("g.pg", run("gen clustered --nodes 80 --seed 4").out);
    auto sol = write("g.sol", run("solve --mode global " + game).out);
    auto r = run("verify --game " + game + " --solution " + sol);
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "ok\n");

    // flip one winner: verification must fail
    auto broken = write("b.sol", "paritysol 1;\n0 1;\n1 1;\n");
    auto g1 = write("g1.pg", kCyclePair);
    EXPECT_EQ(run("verify --game " + g1 + " --solution " + broken).code, 1);
}

TEST_F(Cli, SolutionsAgreeWithOracle)
{
    for (int seed = 0; seed < 5; ++seed) {
        std::string text = run("gen clustered --nodes 40 --cluster-size 4 10 --seed " + std::to_string(seed)).out;
        auto game = write("c.pg", text);
        auto doc = io::parse_solution(run("solve --expansion bfs:2 " + game).out, io::parse_pgsolver(text));
        auto truth = oracle::solve_recursive(io::parse_pgsolver(text).game);
        ASSERT_TRUE(doc.winner.contains(0));
        for (auto [v, w] : doc.winner) EXPECT_EQ(truth.winner[v], w);
    }
}

TEST_F(Cli, GenIsDeterministic)
{
    auto a = run("gen clustered --nodes 200 --seed 9 --priorities 0 6 --bias 0.3");
    auto b = run("gen clustered --nodes 200 --seed 9 --priorities 0 6 --bias 0.3");
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(io::parse_pgsolver(a.out).game.size(), 200u);
    EXPECT_EQ(run("gen fixture g1").out, kCyclePair);
    EXPECT_EQ(run("gen fixture g3").out, "parity 0;\n0 5 0 ;\n");
    EXPECT_EQ(io::parse_pgsolver(run("gen fixture locality:50").out).game.size(), 52u);
}

TEST_F(Cli, ConvertAndDot)
{
    auto f = write("g.pg", "1 1 1 0;\n0 2 0 1;\n");
    EXPECT_EQ(run("convert " + f).out, kCyclePair);
    auto sol = write("g.sol", "paritysol 1;\n0 0 1;\n1 0;\n");
    auto dot = run("convert --dot --solution " + sol + " " + f).out;
    EXPECT_NE(dot.find("digraph"), std::string::npos);
    EXPECT_NE(dot.find("n0 -> n1 [style=bold"), std::string::npos);
    auto r = run("solve --dot " + path("g.dot") + " " + f);
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(slurp(path("g.dot")).find("shape=diamond"), std::string::npos);
}

TEST_F(Cli, BenchCsv)
{
    auto r = run("bench --sizes 50,100 --runs 2 --seed 1 --csv");
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.rfind("size,global_ms,local_visited_mean,local_ms\n", 0), 0u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 3);
}
