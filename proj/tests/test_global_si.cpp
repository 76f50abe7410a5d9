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

#include "pg/generators.hpp"
#include "pg/global_si.hpp"
#include "pg/oracle.hpp"
#include "pg/verify.hpp"
#include "support/random_games.hpp"

using namespace pg;

namespace {

void expect_sound(const ParityGame& g, const GlobalSolution& s)
{
    Player q = s.player;
    EXPECT_TRUE(verify_winning_strategy(g, q, s.won[index(q)], s.strategy).ok);
    EXPECT_TRUE(verify_winning_strategy(g, opponent(q), s.won[index(opponent(q))], s.counter).ok);
    EXPECT_EQ(s.won[0].size() + s.won[1].size(), g.size());
}

} // namespace

TEST(GlobalSI, CyclePair)
{
    auto g = gen::gen_cycle_pair();
    auto s = solve_global(g, Player::P0, all_max_policy());
    EXPECT_EQ(s.won[0], (NodeSet{0, 1}));
    EXPECT_TRUE(s.won[1].empty());
    EXPECT_EQ(s.strategy.moves, (std::map<NodeId, NodeId>{{0, 1}}));
    EXPECT_EQ(s.iterations, 1u);
    expect_sound(g, s);
}

TEST(GlobalSI, Sink)
{
    auto g = gen::gen_sink(5, Player::P0);
    auto s = solve_global(g, Player::P0, all_max_policy());
    EXPECT_TRUE(s.won[0].empty());
    EXPECT_EQ(s.won[1], NodeSet{0});
    EXPECT_EQ(s.iterations, 0u);
}

TEST(GlobalSI, TwoCycleChoice)
{
    auto g = gen::gen_two_cycle_choice();
    auto s = solve_global(g, Player::P0, all_max_policy());
    EXPECT_EQ(s.won[0], (NodeSet{0, 1, 2}));
    EXPECT_EQ(s.strategy.find(0), std::optional<NodeId>(1));
    expect_sound(g, s);
}

TEST(GlobalSI, SingleSwitchOnCyclePair)
{
    auto g = gen::gen_cycle_pair();
    std::vector<TraceEvent> events;
    GlobalOptions opt;
    opt.events = [&](const TraceEvent& e) { events.push_back(e); };
    auto s = solve_global(g, Player::P0, single_switch_policy(5), opt);
    EXPECT_EQ(s.won[0], (NodeSet{0, 1}));
    int improves = 0;
    for (const auto& e : events)
        if (e.kind == EventKind::improve) {
            ++improves;
            EXPECT_EQ(e.switches, (std::vector<std::pair<NodeId, NodeId>>{{0, 1}}));
        }
    EXPECT_EQ(improves, 1);
}

TEST(GlobalSI, AllMaxPicksInfinitySuccessor)
{
    ParityGame g({{Player::P0, 0, {1, 2}, {}}, {Player::P0, 1, {}, {}}, {Player::P1, 1, {}, {}}});
    auto s = solve_global(g, Player::P0, all_max_policy());
    EXPECT_EQ(s.strategy.find(0), std::optional<NodeId>(2));
}

TEST(GlobalSI, AllMaxTieBreakIsDeterministic)
{
    // 1 and 2 are both opponent sinks (infinity); the reward-order-least node wins the tie
    ParityGame g({{Player::P0, 0, {2, 1}, {}}, {Player::P1, 3, {}, {}}, {Player::P1, 1, {}, {}}});
    auto a = solve_global(g, Player::P0, all_max_policy());
    auto b = solve_global(g, Player::P0, all_max_policy());
    EXPECT_EQ(a.strategy, b.strategy);
    // odd priorities: the more relevant node 1 (priority 3) is less rewarding
    EXPECT_EQ(a.strategy.find(0), std::optional<NodeId>(1));
}

TEST(GlobalSI, PolicyContract)
{
    auto g = gen::gen_two_cycle_choice();
    ImprovementPolicy lazy = [](const ParityGame&, Player, const Strategy& s, const GameValuation&,
                                const NodeSet&) { return s; };
    EXPECT_THROW(solve_global(g, Player::P0, lazy), PolicyContractError);
    ImprovementPolicy wrong = [](const ParityGame&, Player, const Strategy&, const GameValuation&, const NodeSet&) {
        return Strategy(Player::P0, {{0, 0}});
    };
    EXPECT_THROW(solve_global(g, Player::P0, wrong), PolicyContractError);
    ImprovementPolicy other = [](const ParityGame&, Player, const Strategy&, const GameValuation&, const NodeSet&) {
        return Strategy(Player::P1);
    };
    EXPECT_THROW(solve_global(g, Player::P0, other), PolicyContractError);
}

TEST(GlobalSI, RejectsMalformedGame)
{
    ParityGame g({{Player::P0, 0, {4}, {}}});
    EXPECT_THROW(solve_global(g, Player::P0, all_max_policy()), std::invalid_argument);
}

TEST(GlobalSI, NonTurnBasedInput)
{
    // a cycle entirely inside player 1's nodes, plus player 0 self-loops
    ParityGame g({{Player::P1, 1, {1}, {}},
                  {Player::P1, 0, {0, 2}, {}},
                  {Player::P0, 2, {2, 0}, {}}});
    auto rec = oracle::solve_recursive(g);
    for (Player q : {Player::P0, Player::P1}) {
        auto s = solve_global(g, q, all_max_policy());
        EXPECT_EQ(s.won[0], rec.region(Player::P0));
        ASSERT_TRUE(s.normalized);
        expect_sound(g, s);
    }
}

TEST(GlobalSI, MatchesOraclesAndIsMonotone)
{
    std::mt19937_64 rng(17);
    for (int i = 0; i < 300; ++i) {
        auto g = pgtest::random_game(rng, 1 + rng() % 9, 3, 5, i % 4 == 0 ? 0.2 : 0.0);
        auto rec = oracle::solve_recursive(g);
        std::array<NodeSet, 2> first;
        for (Player q : {Player::P0, Player::P1}) {
            GlobalOptions opt;
            opt.record_valuations = true;
            opt.cross_check = true;
            auto s = solve_global(g, q, i % 2 ? single_switch_policy(i) : all_max_policy(), opt);
            ASSERT_EQ(s.won[0], rec.region(Player::P0)) << "game " << i;
            expect_sound(g, s);
            if (q == Player::P0) first = s.won;
            else ASSERT_EQ(s.won, first);

            for (std::size_t t = 1; t < s.valuations.size(); ++t) {
                const auto& a = s.valuations[t - 1];
                const auto& b = s.valuations[t];
                bool strict = false;
                for (std::size_t v = 0; v < a.size(); ++v) {
                    auto c = compare(q, a[v], b[v]);
                    ASSERT_TRUE(c <= 0) << "game " << i << " node " << v << " got worse";
                    strict = strict || c < 0;
                }
                ASSERT_TRUE(strict);
            }
        }
    }
}

TEST(GlobalSI, SingleSwitchIsDeterministic)
{
    gen::ClusterParams p;
    p.total_nodes = 200;
    p.seed = 3;
    auto g = gen::gen_clustered(p);
    auto a = solve_global(g, Player::P1, single_switch_policy(9));
    auto b = solve_global(g, Player::P1, single_switch_policy(9));
    EXPECT_EQ(a.won, b.won);
    EXPECT_EQ(a.strategy, b.strategy);
    EXPECT_EQ(a.iterations, b.iterations);
}
