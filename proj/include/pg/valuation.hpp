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

#include <compare>
#include <deque>
#include <limits>

#include "game.hpp"

namespace pg {

/// Position of a node in the relevance order: by priority, ties by id.
struct RelevanceKey {
    Priority priority = 0;
    NodeId node = 0;

    friend auto operator<=>(const RelevanceKey&, const RelevanceKey&) = default;
};

inline RelevanceKey key(const ParityGame& g, NodeId v) { return {g.priority(v), v}; }

/**
 * Reward order for player q: v ≺_q u when u is the more profitable node for q.
 * q-priorities rank above opponent priorities; among q-priorities more
 * relevant is better, among opponent priorities more relevant is worse.
 */
inline bool reward_less(Player q, RelevanceKey v, RelevanceKey u)
{
    if (v == u) throw std::invalid_argument("reward_less: nodes must differ");
    bool u_good = favors(u.priority) == q;
    bool v_good = favors(v.priority) == q;
    if (u_good && v < u) return true;
    if (u_good && !v_good) return true;
    return !u_good && !v_good && u < v;
}

inline bool reward_less(const ParityGame& g, Player q, NodeId v, NodeId u)
{
    return reward_less(q, key(g, v), key(g, u));
}

/**
 * Either a finite node set (the nodes a play visits before escaping) or
 * infinity (the play is won by the evaluating player). Finite sets are kept
 * sorted by descending relevance, so comparing two valuations is a single
 * merge pass, O(|M| + |N|).
 */
class NodeValuation {
public:
    NodeValuation() = default;

    static NodeValuation infinity()
    {
        NodeValuation x;
        x.infinite_ = true;
        return x;
    }
    static NodeValuation of(std::vector<RelevanceKey> nodes)
    {
        std::sort(nodes.begin(), nodes.end(), std::greater<>());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
        NodeValuation x;
        x.nodes_ = std::move(nodes);
        return x;
    }

    bool is_infinite() const noexcept { return infinite_; }
    bool is_finite() const noexcept { return !infinite_; }
    std::span<const RelevanceKey> nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    bool contains(RelevanceKey k) const
    {
        return std::binary_search(nodes_.begin(), nodes_.end(), k, std::greater<>());
    }

    /// θ ⊕ v: infinity once the play revisits a node, otherwise θ ∪ {v}.
    NodeValuation plus(RelevanceKey k) const
    {
        if (infinite_) return *this;
        auto pos = std::lower_bound(nodes_.begin(), nodes_.end(), k, std::greater<>());
        if (pos != nodes_.end() && *pos == k) return infinity();
        NodeValuation x;
        x.nodes_.reserve(nodes_.size() + 1);
        x.nodes_.insert(x.nodes_.end(), nodes_.begin(), pos);
        x.nodes_.push_back(k);
        x.nodes_.insert(x.nodes_.end(), pos, nodes_.end());
        return x;
    }

    friend bool operator==(const NodeValuation&, const NodeValuation&) = default;

private:
    bool infinite_ = false;
    std::vector<RelevanceKey> nodes_;
};

inline NodeValuation add_node(const NodeValuation& theta, RelevanceKey v) { return theta.plus(v); }

/// Total order ≺_q on node valuations (infinity on top).
inline std::strong_ordering compare(Player q, const NodeValuation& a, const NodeValuation& b)
{
    if (a.is_infinite() || b.is_infinite()) {
        if (a.is_infinite() == b.is_infinite()) return std::strong_ordering::equal;
        return a.is_infinite() ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    auto x = a.nodes();
    auto y = b.nodes();
    std::size_t i = 0, j = 0;
    while (i < x.size() && j < y.size() && x[i] == y[j]) ++i, ++j;
    if (i == x.size() && j == y.size()) return std::strong_ordering::equal;
    // the first difference is the most relevant node of the symmetric difference
    bool in_a = j == y.size() || (i < x.size() && x[i] > y[j]);
    const RelevanceKey& d = in_a ? x[i] : y[j];
    bool good = favors(d.priority) == q;
    if (in_a) return good ? std::strong_ordering::greater : std::strong_ordering::less;
    return good ? std::strong_ordering::less : std::strong_ordering::greater;
}

inline bool val_less(Player q, const NodeValuation& a, const NodeValuation& b)
{
    auto c = compare(q, a, b);
    if (c == std::strong_ordering::equal) throw std::invalid_argument("val_less: valuations must differ");
    return c == std::strong_ordering::less;
}

/// Dense valuation of every node of an explicit game.
using GameValuation = std::vector<NodeValuation>;

/**
 * Valuation induced by a single loopless path for its first node: infinity
 * when the path ends at an opponent node, else the set of its nodes.
 */
inline NodeValuation path_theta(const ParityGame& g, Player q, std::span<const NodeId> path)
{
    if (path.empty()) throw std::invalid_argument("path_theta: empty path");
    std::vector<RelevanceKey> keys;
    NodeSet seen;
    for (std::size_t i = 0; i < path.size(); ++i) {
        NodeId v = path[i];
        if (!g.contains(v)) throw std::invalid_argument("path_theta: unknown node");
        if (!seen.insert(v).second) throw std::invalid_argument("path_theta: path is not loopless");
        if (i + 1 < path.size()) {
            auto s = g.successors(v);
            if (std::find(s.begin(), s.end(), path[i + 1]) == s.end())
                throw std::invalid_argument("path_theta: step is not an edge");
        }
        keys.push_back(key(g, v));
    }
    if (g.owner(path.back()) != q) return NodeValuation::infinity();
    return NodeValuation::of(std::move(keys));
}

/// Strategy stored densely: kNoMove marks an escape.
constexpr NodeId kNoMove = std::numeric_limits<NodeId>::max();

inline std::vector<NodeId> dense_moves(const ParityGame& g, const Strategy& s)
{
    std::vector<NodeId> out(g.size(), kNoMove);
    for (auto [v, u] : s.moves) out.at(v) = u;
    return out;
}

/**
 * The local consistency target for v: {v} for escapes, Ξ(σ(v)) ⊕ v for
 * committed q-nodes and the ≺_q-least Ξ(u) ⊕ v over successors for opponent
 * nodes (infinity at an opponent sink).
 */
inline NodeValuation consistent_value(const ParityGame& g, Player q, std::span<const NodeId> moves,
                                      const GameValuation& xi, NodeId v)
{
    RelevanceKey k = key(g, v);
    if (g.owner(v) == q) {
        if (moves[v] == kNoMove) return NodeValuation::of({k});
        return xi[moves[v]].plus(k);
    }
    std::optional<NodeValuation> best;
    for (NodeId u : g.successors(v)) {
        NodeValuation c = xi[u].plus(k);
        if (!best || compare(q, c, *best) < 0) best = std::move(c);
    }
    return best ? std::move(*best) : NodeValuation::infinity();
}

/**
 * Worklist fixpoint: re-evaluates nodes of `work` until every node is
 * consistent, pushing predecessors of changed nodes. Returns the nodes whose
 * value changed. `steps` counts worklist pops.
 */
inline NodeSet propagate(const ParityGame& g, Player q, std::span<const NodeId> moves, GameValuation& xi,
                         NodeSet work, std::size_t* steps = nullptr)
{
    NodeSet changed;
    std::vector<char> queued(g.size(), 0);
    std::deque<NodeId> queue;
    for (NodeId v : work) {
        queued[v] = 1;
        queue.push_back(v);
    }
    while (!queue.empty()) {
        NodeId v = queue.front();
        queue.pop_front();
        queued[v] = 0;
        if (steps) ++*steps;
        NodeValuation theta = consistent_value(g, q, moves, xi, v);
        if (theta == xi[v]) continue;
        xi[v] = std::move(theta);
        changed.insert(v);
        for (NodeId p : g.predecessors(v)) {
            if (!queued[p]) {
                queued[p] = 1;
                queue.push_back(p);
            }
        }
    }
    return changed;
}

/// Ξ_{q,σ}: the valuation of every node under σ and the opponent's best responses.
inline GameValuation evaluate_strategy(const ParityGame& g, Player q, const Strategy& s)
{
    if (s.owner != q) throw std::invalid_argument("evaluate_strategy: strategy belongs to the other player");
    check_strategy(g, s);
    GameValuation xi(g.size());
    NodeSet all;
    for (NodeId v = 0; v < g.size(); ++v) all.insert(v);
    auto moves = dense_moves(g, s);
    propagate(g, q, moves, xi, std::move(all));
    return xi;
}

/// Picks the ≺_q-least valuation among `candidates`, ties to the ≺_q-least node.
template <class Range, class ValueOf>
std::optional<NodeId> least_successor(const ParityGame& g, Player q, const Range& candidates, ValueOf value_of)
{
    std::optional<NodeId> best;
    for (NodeId u : candidates) {
        if (!best) {
            best = u;
            continue;
        }
        if (u == *best) continue;
        auto c = compare(q, value_of(u), value_of(*best));
        if (c < 0 || (c == 0 && reward_less(g, q, u, *best))) best = u;
    }
    return best;
}

/// τ_Ξ: the opponent picks the ≺_q-least successor valuation; sinks stay undefined.
inline Strategy counter_strategy(const ParityGame& g, Player q, const GameValuation& xi)
{
    Strategy tau(opponent(q));
    for (NodeId v = 0; v < g.size(); ++v) {
        if (g.owner(v) == q) continue;
        auto u = least_successor(g, q, g.successors(v), [&](NodeId w) -> const NodeValuation& { return xi[w]; });
        if (u) tau.set(v, *u);
    }
    return tau;
}

inline NodeSet consistent_nodes(const ParityGame& g, Player q, const Strategy& s, const GameValuation& xi)
{
    auto moves = dense_moves(g, s);
    NodeSet out;
    for (NodeId v = 0; v < g.size(); ++v)
        if (consistent_value(g, q, moves, xi, v) == xi[v]) out.insert(v);
    return out;
}

/// Value an improving switch at v has to beat: Ξ(σ(v)), or ∅ when v escapes.
inline NodeValuation switch_base(std::span<const NodeId> moves, const GameValuation& xi, NodeId v)
{
    return moves[v] == kNoMove ? NodeValuation{} : xi[moves[v]];
}

inline bool is_improvement_edge(const ParityGame& g, Player q, const Strategy& s, const GameValuation& xi, NodeId v,
                                NodeId u)
{
    if (g.owner(v) != q) throw std::invalid_argument("is_improvement_edge: node not owned by the player");
    auto succ = g.successors(v);
    if (std::find(succ.begin(), succ.end(), u) == succ.end())
        throw std::invalid_argument("is_improvement_edge: not an edge");
    auto moves = dense_moves(g, s);
    return compare(q, switch_base(moves, xi, v), xi[u]) < 0;
}

inline bool improvable_at(const ParityGame& g, Player q, std::span<const NodeId> moves, const GameValuation& xi,
                          NodeId v)
{
    NodeValuation base = switch_base(moves, xi, v);
    if (base.is_infinite()) return false;
    for (NodeId u : g.successors(v))
        if (compare(q, base, xi[u]) < 0) return true;
    return false;
}

/// q-nodes with a strictly improving successor.
inline NodeSet improvable_nodes(const ParityGame& g, Player q, const Strategy& s, const GameValuation& xi)
{
    auto moves = dense_moves(g, s);
    NodeSet out;
    for (NodeId v = 0; v < g.size(); ++v)
        if (g.owner(v) == q && improvable_at(g, q, moves, xi, v)) out.insert(v);
    return out;
}

} // namespace pg
