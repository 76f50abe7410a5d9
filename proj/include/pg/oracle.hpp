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

#pragma once

// Reference solvers. Deliberately share nothing with the strategy
// improvement code beyond the game representation.

#include <array>
#include <deque>
#include <unordered_map>

#include "game.hpp"

namespace pg::oracle {

struct Solution {
    std::vector<Player> winner;
    std::array<Strategy, 2> strategy{Strategy(Player::P0), Strategy(Player::P1)};

    NodeSet region(Player p) const
    {
        NodeSet out;
        for (NodeId v = 0; v < winner.size(); ++v)
            if (winner[v] == p) out.insert(v);
        return out;
    }
};

namespace detail {

/// Nodes from which `chooser` (who makes every move) can force a play it wins.
/// `fixed` holds the other player's one move per node (kNone at sinks).
inline std::vector<char> one_player_wins(const ParityGame& g, Player chooser, const std::vector<NodeId>& fixed)
{
    constexpr NodeId kNone = ~NodeId{0};
    const std::size_t n = g.size();
    auto succ = [&](NodeId v) -> std::vector<NodeId> {
        if (g.owner(v) == chooser) return {g.successors(v).begin(), g.successors(v).end()};
        if (fixed[v] == kNone) return {};
        return {fixed[v]};
    };
    // goals: sinks of the other player, and nodes of chooser-parity sitting on
    // a cycle of no higher priority
    std::vector<char> goal(n, 0);
    for (NodeId v = 0; v < n; ++v) {
        if (g.owner(v) != chooser && succ(v).empty()) {
            goal[v] = 1;
            continue;
        }
        if (favors(g.priority(v)) != chooser) continue;
        Priority cap = g.priority(v);
        std::vector<char> seen(n, 0);
        std::deque<NodeId> queue;
        for (NodeId u : succ(v))
            if (g.priority(u) <= cap && !seen[u]) seen[u] = 1, queue.push_back(u);
        while (!queue.empty() && !seen[v]) {
            NodeId x = queue.front();
            queue.pop_front();
            for (NodeId u : succ(x))
                if (g.priority(u) <= cap && !seen[u]) seen[u] = 1, queue.push_back(u);
        }
        goal[v] = seen[v];
    }
    // backward reachability of goals
    std::vector<std::vector<NodeId>> rev(n);
    for (NodeId v = 0; v < n; ++v)
        for (NodeId u : succ(v)) rev[u].push_back(v);
    std::vector<char> win = goal;
    std::deque<NodeId> queue;
    for (NodeId v = 0; v < n; ++v)
        if (win[v]) queue.push_back(v);
    while (!queue.empty()) {
        NodeId x = queue.front();
        queue.pop_front();
        for (NodeId p : rev[x])
            if (!win[p]) win[p] = 1, queue.push_back(p);
    }
    return win;
}

} // namespace detail

/**
 * Enumerates every positional strategy of each player and keeps the one
 * winning the most nodes against all counter-plays. Only for tiny games.
 */
inline Solution solve_exhaustive(const ParityGame& g)
{
    constexpr std::size_t kMaxNodes = 10;
    constexpr double kMaxCombinations = 1e6;
    if (g.size() > kMaxNodes) throw std::invalid_argument("solve_exhaustive: more than 10 nodes");
    double combos = 1;
    for (NodeId v = 0; v < g.size(); ++v) combos *= std::max<std::size_t>(1, g.successors(v).size());
    if (combos > kMaxCombinations) throw std::invalid_argument("solve_exhaustive: too many strategy combinations");

    const std::size_t n = g.size();
    Solution sol;
    sol.winner.assign(n, Player::P0);
    std::array<std::vector<char>, 2> won;

    for (int pi = 0; pi < 2; ++pi) {
        Player p = player_of(pi);
        std::vector<NodeId> mine;
        for (NodeId v = 0; v < n; ++v)
            if (g.owner(v) == p && !g.successors(v).empty()) mine.push_back(v);
        std::vector<std::size_t> choice(mine.size(), 0);
        std::vector<char> best(n, 0);
        std::size_t best_count = 0;
        std::vector<NodeId> best_moves;
        bool have_best = false;
        while (true) {
            std::vector<NodeId> fixed(n, ~NodeId{0});
            for (std::size_t i = 0; i < mine.size(); ++i) fixed[mine[i]] = g.successors(mine[i])[choice[i]];
            auto other = detail::one_player_wins(g, opponent(p), fixed);
            std::size_t count = 0;
            for (NodeId v = 0; v < n; ++v) count += !other[v];
            if (!have_best || count > best_count) {
                have_best = true;
                best_count = count;
                best_moves = fixed;
                for (NodeId v = 0; v < n; ++v) best[v] = !other[v];
            }
            std::size_t i = 0;
            while (i < mine.size() && ++choice[i] == g.successors(mine[i]).size()) choice[i++] = 0;
            if (i == mine.size()) break;
        }
        won[pi] = best;
        for (NodeId v = 0; v < n; ++v)
            if (best[v] && g.owner(v) == p) sol.strategy[pi].set(v, best_moves[v]);
    }

    for (NodeId v = 0; v < n; ++v) {
        if (won[0][v] == won[1][v]) throw std::logic_error("solve_exhaustive: regions do not partition the game");
        sol.winner[v] = won[0][v] ? Player::P0 : Player::P1;
    }
    return sol;
}

namespace detail {

/// Attractor inside the subgame `alive`; opponent nodes only look at alive successors.
inline std::vector<NodeId> attract(const ParityGame& g, const std::vector<char>& alive, Player p,
                                   std::vector<NodeId> target, std::vector<char>& in, Strategy& strat)
{
    std::unordered_map<NodeId, NodeSet> open;
    std::vector<NodeId> region;
    std::deque<NodeId> queue;
    for (NodeId v : target) {
        if (!in[v]) {
            in[v] = 1;
            region.push_back(v);
        }
        queue.push_back(v);
    }
    while (!queue.empty()) {
        NodeId w = queue.front();
        queue.pop_front();
        for (NodeId v : g.predecessors(w)) {
            if (!alive[v] || in[v]) continue;
            if (g.owner(v) == p) {
                strat.set(v, w);
            } else {
                auto [it, fresh] = open.try_emplace(v);
                if (fresh) {
                    for (NodeId u : g.successors(v))
                        if (alive[u] && !in[u]) it->second.insert(u);
                } else {
                    it->second.erase(w);
                }
                if (!it->second.empty()) continue;
            }
            in[v] = 1;
            region.push_back(v);
            queue.push_back(v);
        }
    }
    return region;
}

inline void zielonka(const ParityGame& g, std::vector<char> alive, Solution& sol)
{
    std::vector<NodeId> nodes;
    Priority top = 0;
    for (NodeId v = 0; v < g.size(); ++v) {
        if (!alive[v]) continue;
        nodes.push_back(v);
        top = std::max(top, g.priority(v));
    }
    if (nodes.empty()) return;
    Player p = favors(top);
    int pi = index(p);

    std::vector<NodeId> tops;
    for (NodeId v : nodes)
        if (g.priority(v) == top) tops.push_back(v);
    std::vector<char> in(g.size(), 0);
    Strategy attr_p(p);
    auto region = attract(g, alive, p, tops, in, attr_p);

    std::vector<char> rest = alive;
    for (NodeId v : region) rest[v] = 0;
    Solution sub = sol;
    zielonka(g, rest, sub);

    bool opponent_wins_something = false;
    for (NodeId v : nodes)
        if (rest[v] && sub.winner[v] != p) opponent_wins_something = true;

    if (!opponent_wins_something) {
        for (NodeId v : nodes) sol.winner[v] = p;
        for (auto [v, u] : sub.strategy[pi].moves)
            if (rest[v]) sol.strategy[pi].set(v, u);
        for (auto [v, u] : attr_p.moves) sol.strategy[pi].set(v, u);
        for (NodeId v : tops) {
            if (g.owner(v) != p || attr_p.contains(v)) continue;
            for (NodeId u : g.successors(v))
                if (alive[u]) {
                    sol.strategy[pi].set(v, u);
                    break;
                }
        }
        return;
    }

    Player o = opponent(p);
    int oi = index(o);
    std::vector<NodeId> lost;
    for (NodeId v : nodes)
        if (rest[v] && sub.winner[v] == o) lost.push_back(v);
    std::vector<char> in_o(g.size(), 0);
    Strategy attr_o(o);
    auto taken = attract(g, alive, o, lost, in_o, attr_o);
    for (NodeId v : lost)
        if (auto u = sub.strategy[oi].find(v)) attr_o.set(v, *u);

    std::vector<char> remain = alive;
    for (NodeId v : taken) remain[v] = 0;
    zielonka(g, remain, sol);
    for (NodeId v : taken) sol.winner[v] = o;
    for (auto [v, u] : attr_o.moves)
        if (in_o[v]) sol.strategy[oi].set(v, u);
}

} // namespace detail

/**
 * Recursive attractor decomposition on the highest priority. Sinks are
 * settled first: a sink is lost by its owner, and the attractors of those
 * losses are removed before recursing on the (then total) rest.
 */
inline Solution solve_recursive(const ParityGame& g)
{
    const std::size_t n = g.size();
    Solution sol;
    sol.winner.assign(n, Player::P0);
    std::vector<char> alive(n, 1);

    for (int round = 0; round < 2; ++round) {
        Player loser = player_of(round);
        Player w = opponent(loser);
        std::vector<NodeId> sinks;
        for (NodeId v = 0; v < n; ++v)
            if (alive[v] && g.owner(v) == loser && g.successors(v).empty()) sinks.push_back(v);
        std::vector<char> in(n, 0);
        Strategy attr(w);
        auto region = detail::attract(g, alive, w, sinks, in, attr);
        for (NodeId v : region) {
            alive[v] = 0;
            sol.winner[v] = w;
        }
        for (auto [v, u] : attr.moves) sol.strategy[index(w)].set(v, u);
    }
    detail::zielonka(g, alive, sol);

    for (int pi = 0; pi < 2; ++pi) {
        Strategy& s = sol.strategy[pi];
        for (auto it = s.moves.begin(); it != s.moves.end();)
            it = sol.winner[it->first] == player_of(pi) ? std::next(it) : s.moves.erase(it);
    }
    return sol;
}

} // namespace pg::oracle
