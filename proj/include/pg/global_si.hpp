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

#include <array>
#include <memory>
#include <random>

#include "events.hpp"
#include "valuation.hpp"

namespace pg {

/// A policy broke the improvement contract (non-arena edge, or no strict gain).
class PolicyContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/**
 * Maps the current strategy to the next one. Every chosen edge must be at
 * least as good as the current choice, and at least one must be strictly
 * better whenever `improvable` is non-empty.
 */
using ImprovementPolicy = std::function<Strategy(const ParityGame&, Player, const Strategy&, const GameValuation&,
                                                 const NodeSet& improvable)>;

namespace detail {

/// The ≺_q-greatest successor valuation of v; ties to the ≺_q-least node.
inline NodeId best_successor(const ParityGame& g, Player q, const GameValuation& xi, NodeId v)
{
    std::optional<NodeId> best;
    for (NodeId u : g.successors(v)) {
        if (!best) {
            best = u;
            continue;
        }
        if (u == *best) continue;
        auto c = compare(q, xi[u], xi[*best]);
        if (c > 0 || (c == 0 && reward_less(g, q, u, *best))) best = u;
    }
    return *best;
}

} // namespace detail

/// Switches every improvable node to its best successor.
inline ImprovementPolicy all_max_policy()
{
    return [](const ParityGame& g, Player q, const Strategy& s, const GameValuation& xi, const NodeSet& improvable) {
        Strategy next = s;
        for (NodeId v : improvable) next.set(v, detail::best_successor(g, q, xi, v));
        return next;
    };
}

/// Switches one uniformly chosen improvable node to a uniformly chosen strictly better successor.
inline ImprovementPolicy single_switch_policy(std::uint64_t seed)
{
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](const ParityGame& g, Player q, const Strategy& s, const GameValuation& xi,
                 const NodeSet& improvable) {
        Strategy next = s;
        if (improvable.empty()) return next;
        std::uniform_int_distribution<std::size_t> pick_node(0, improvable.size() - 1);
        NodeId v = *std::next(improvable.begin(), static_cast<std::ptrdiff_t>(pick_node(*rng)));
        auto moves = dense_moves(g, s);
        NodeValuation base = switch_base(moves, xi, v);
        NodeSet better;
        for (NodeId u : g.successors(v))
            if (compare(q, base, xi[u]) < 0) better.insert(u);
        std::uniform_int_distribution<std::size_t> pick_succ(0, better.size() - 1);
        next.set(v, *std::next(better.begin(), static_cast<std::ptrdiff_t>(pick_succ(*rng))));
        return next;
    };
}

struct GlobalOptions {
    EventSink events;
    /// Keep Ξ after every evaluation (on the solver's game, see GlobalSolution::game).
    bool record_valuations = false;
    /// Recompute Ξ from scratch after every step and compare with the incremental result.
    bool cross_check = false;
};

struct GlobalSolution {
    Player player = Player::P0;
    std::array<NodeSet, 2> won;
    /// Winning strategy of `player` on won[player].
    Strategy strategy;
    /// Counter-strategy of the opponent on won[opponent].
    Strategy counter;
    std::size_t iterations = 0;
    std::size_t evaluation_steps = 0;
    /// Normalized game the iteration ran on (differs from the input only if
    /// the input was not turn-based); recorded valuations refer to it.
    std::shared_ptr<const TurnBasedGame> normalized;
    std::vector<GameValuation> valuations;
};

namespace detail {

inline GlobalSolution iterate(const ParityGame& g, Player q, const ImprovementPolicy& policy,
                              const GlobalOptions& opt)
{
    GlobalSolution sol;
    sol.player = q;
    Strategy sigma(q);
    std::vector<NodeId> moves(g.size(), kNoMove);
    GameValuation xi(g.size());

    auto emit_values = [&](const NodeSet& changed) {
        if (!opt.events) return;
        TraceEvent e{EventKind::evaluate, q, {}, {}, {}};
        for (NodeId v : changed) e.values.emplace_back(v, xi[v]);
        opt.events(e);
    };

    NodeSet all;
    for (NodeId v = 0; v < g.size(); ++v) all.insert(v);
    emit_values(propagate(g, q, moves, xi, all, &sol.evaluation_steps));
    if (opt.record_valuations) sol.valuations.push_back(xi);

    while (true) {
        NodeSet improvable;
        for (NodeId v = 0; v < g.size(); ++v)
            if (g.owner(v) == q && improvable_at(g, q, moves, xi, v)) improvable.insert(v);
        if (improvable.empty()) break;

        Strategy next = policy(g, q, sigma, xi, improvable);
        if (next.owner != q) throw PolicyContractError("policy returned a strategy of the other player");
        try {
            check_strategy(g, next);
        } catch (const std::invalid_argument& e) {
            throw PolicyContractError(std::string("policy returned an invalid strategy: ") + e.what());
        }
        NodeSet switched;
        bool strict = false;
        for (auto [v, u] : sigma.moves)
            if (!next.contains(v)) throw PolicyContractError("policy dropped the decision at " + std::to_string(v));
        TraceEvent e{EventKind::improve, q, {}, {}, {}};
        for (auto [v, u] : next.moves) {
            if (moves[v] == u) continue;
            auto c = compare(q, switch_base(moves, xi, v), xi[u]);
            if (c > 0)
                throw PolicyContractError("switch " + std::to_string(v) + "->" + std::to_string(u) +
                                          " leaves the improvement arena");
            strict = strict || c < 0;
            switched.insert(v);
            e.switches.emplace_back(v, u);
        }
        if (!strict) throw PolicyContractError("policy made no strict improvement");
        if (opt.events) opt.events(e);

        sigma = std::move(next);
        for (NodeId v : switched) moves[v] = sigma.moves.at(v);
        emit_values(propagate(g, q, moves, xi, switched, &sol.evaluation_steps));
        if (opt.cross_check && evaluate_strategy(g, q, sigma) != xi)
            throw std::logic_error("incremental evaluation diverged from full evaluation");
        if (opt.record_valuations) sol.valuations.push_back(xi);
        ++sol.iterations;
    }

    Strategy tau = counter_strategy(g, q, xi);
    sol.strategy = Strategy(q);
    sol.counter = Strategy(opponent(q));
    for (NodeId v = 0; v < g.size(); ++v) {
        Player w = xi[v].is_infinite() ? q : opponent(q);
        sol.won[index(w)].insert(v);
        if (g.owner(v) != w) continue;
        if (w == q) {
            if (moves[v] != kNoMove) sol.strategy.set(v, moves[v]);
        } else if (auto u = tau.find(v)) {
            sol.counter.set(v, *u);
        }
    }
    return sol;
}

} // namespace detail

/**
 * Strategy iteration for player q from the empty strategy until no node is
 * improvable. Games that are not turn-based are solved on their
 * make_turn_based() normalization and the result is mapped back.
 */
inline GlobalSolution solve_global(const ParityGame& g, Player q, const ImprovementPolicy& policy,
                                   const GlobalOptions& opt = {})
{
    if (!validate(g).empty()) throw std::invalid_argument("solve_global: malformed game");
    if (is_turn_based(g)) return detail::iterate(g, q, policy, opt);

    auto tb = std::make_shared<TurnBasedGame>(make_turn_based(g));
    GlobalSolution sol = detail::iterate(tb->game, q, policy, opt);
    for (auto& w : sol.won) w = tb->project(w);
    sol.strategy = tb->project(sol.strategy);
    sol.counter = tb->project(sol.counter);
    sol.normalized = std::move(tb);
    return sol;
}

} // namespace pg
