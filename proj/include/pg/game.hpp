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

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

namespace pg {

using NodeId = std::uint32_t;
using Priority = std::uint32_t;
using NodeSet = std::set<NodeId>;

enum class Player : std::uint8_t { P0 = 0, P1 = 1 };

constexpr Player opponent(Player p) noexcept { return p == Player::P0 ? Player::P1 : Player::P0; }
constexpr int index(Player p) noexcept { return static_cast<int>(p); }
constexpr Player player_of(int i) { return i == 0 ? Player::P0 : Player::P1; }

/// The player that wins an infinite play whose dominating priority is `p`.
constexpr Player favors(Priority p) noexcept { return (p & 1U) ? Player::P1 : Player::P0; }

/**
 * A positional, possibly partial strategy. Nodes outside `moves` are
 * "escapes": the owner declines to commit to any successor.
 */
struct Strategy {
    Player owner = Player::P0;
    std::map<NodeId, NodeId> moves;

    Strategy() = default;
    explicit Strategy(Player p) : owner(p) {}
    Strategy(Player p, std::map<NodeId, NodeId> m) : owner(p), moves(std::move(m)) {}

    bool contains(NodeId v) const { return moves.contains(v); }
    std::optional<NodeId> find(NodeId v) const
    {
        auto it = moves.find(v);
        if (it == moves.end()) return std::nullopt;
        return it->second;
    }
    void set(NodeId v, NodeId u) { moves[v] = u; }
    void erase(NodeId v) { moves.erase(v); }
    std::size_t size() const { return moves.size(); }
    bool empty() const { return moves.empty(); }

    friend bool operator==(const Strategy&, const Strategy&) = default;
};

/// What a game source reports about one node.
struct NodeInfo {
    Player owner = Player::P0;
    Priority priority = 0;
    std::vector<NodeId> successors;
};

/**
 * Explicit parity game. Immutable after construction; predecessor lists are
 * derived (deduplicated, ascending). Successor lists may be empty (sinks).
 * Successor ids that do not name a node are kept verbatim so that validate()
 * can report them; they are left out of the predecessor lists.
 */
class ParityGame {
public:
    struct Node {
        Player owner = Player::P0;
        Priority priority = 0;
        std::vector<NodeId> successors;
        std::string name;
    };

    ParityGame() = default;

    explicit ParityGame(std::vector<Node> nodes) : nodes_(std::move(nodes)), preds_(nodes_.size())
    {
        for (NodeId v = 0; v < nodes_.size(); ++v) {
            for (NodeId u : nodes_[v].successors) {
                if (u < nodes_.size()) preds_[u].push_back(v);
            }
        }
        for (auto& p : preds_) p.erase(std::unique(p.begin(), p.end()), p.end());
    }

    std::size_t size() const noexcept { return nodes_.size(); }
    bool empty() const noexcept { return nodes_.empty(); }
    bool contains(NodeId v) const noexcept { return v < nodes_.size(); }

    const Node& node(NodeId v) const { return nodes_.at(v); }
    const std::vector<Node>& nodes() const noexcept { return nodes_; }
    Player owner(NodeId v) const { return nodes_.at(v).owner; }
    Priority priority(NodeId v) const { return nodes_.at(v).priority; }
    const std::string& name(NodeId v) const { return nodes_.at(v).name; }
    std::span<const NodeId> successors(NodeId v) const { return nodes_.at(v).successors; }
    std::span<const NodeId> predecessors(NodeId v) const { return preds_.at(v); }

    std::size_t edge_count() const
    {
        std::size_t m = 0;
        for (const auto& n : nodes_) m += n.successors.size();
        return m;
    }

    Priority max_priority() const
    {
        Priority p = 0;
        for (const auto& n : nodes_) p = std::max(p, n.priority);
        return p;
    }

    friend bool operator==(const ParityGame& a, const ParityGame& b)
    {
        if (a.size() != b.size()) return false;
        for (NodeId v = 0; v < a.size(); ++v) {
            const auto& x = a.nodes_[v];
            const auto& y = b.nodes_[v];
            if (x.owner != y.owner || x.priority != y.priority || x.successors != y.successors || x.name != y.name)
                return false;
        }
        return true;
    }

private:
    std::vector<Node> nodes_;
    std::vector<std::vector<NodeId>> preds_;
};

struct Violation {
    NodeId node = 0;
    std::string rule;
    std::string detail;
};

/// Structural checks on an explicit game; empty result means well-formed.
inline std::vector<Violation> validate(const ParityGame& g)
{
    std::vector<Violation> out;
    for (NodeId v = 0; v < g.size(); ++v) {
        const auto& n = g.node(v);
        if (n.owner != Player::P0 && n.owner != Player::P1)
            out.push_back({v, "owner", "owner is neither 0 nor 1"});
        for (NodeId u : n.successors) {
            if (!g.contains(u))
                out.push_back({v, "dangling-edge", "successor " + std::to_string(u) + " does not exist"});
        }
    }
    // predecessor lists must be the transpose of the successor lists
    std::vector<std::set<NodeId>> expect(g.size());
    for (NodeId v = 0; v < g.size(); ++v)
        for (NodeId u : g.successors(v))
            if (g.contains(u)) expect[u].insert(v);
    for (NodeId u = 0; u < g.size(); ++u) {
        auto preds = g.predecessors(u);
        if (!std::equal(preds.begin(), preds.end(), expect[u].begin(), expect[u].end()))
            out.push_back({u, "predecessors", "predecessor list is not the transpose of the edge relation"});
    }
    return out;
}

inline bool is_total(const ParityGame& g)
{
    return std::all_of(g.nodes().begin(), g.nodes().end(), [](const auto& n) { return !n.successors.empty(); });
}

/// True iff every edge connects nodes of different owners.
inline bool is_turn_based(const ParityGame& g)
{
    for (NodeId v = 0; v < g.size(); ++v)
        for (NodeId u : g.successors(v))
            if (g.owner(u) == g.owner(v)) return false;
    return true;
}

inline void check_strategy(const ParityGame& g, const Strategy& s)
{
    for (auto [v, u] : s.moves) {
        if (!g.contains(v) || !g.contains(u))
            throw std::invalid_argument("strategy mentions unknown node " + std::to_string(g.contains(v) ? u : v));
        if (g.owner(v) != s.owner)
            throw std::invalid_argument("strategy assigns node " + std::to_string(v) + " not owned by its player");
        auto succ = g.successors(v);
        if (std::find(succ.begin(), succ.end(), u) == succ.end())
            throw std::invalid_argument("strategy move " + std::to_string(v) + "->" + std::to_string(u) +
                                        " is not an edge");
    }
}

/**
 * G restricted by a strategy: nodes of the strategy's owner keep only their
 * chosen edge; owner nodes without a choice become sinks.
 */
inline ParityGame strategy_subgame(const ParityGame& g, const Strategy& s)
{
    check_strategy(g, s);
    std::vector<ParityGame::Node> nodes = g.nodes();
    for (NodeId v = 0; v < nodes.size(); ++v) {
        if (nodes[v].owner != s.owner) continue;
        if (auto u = s.find(v))
            nodes[v].successors = {*u};
        else
            nodes[v].successors.clear();
    }
    return ParityGame(std::move(nodes));
}

/**
 * Result of make_turn_based(). Original nodes keep their ids; every
 * same-owner edge u->w is routed through a fresh node x >= original_size
 * with through[x - original_size] == w.
 */
struct TurnBasedGame {
    ParityGame game;
    std::size_t original_size = 0;
    std::vector<NodeId> through;

    bool is_inserted(NodeId v) const { return v >= original_size; }
    NodeId target(NodeId x) const { return is_inserted(x) ? through.at(x - original_size) : x; }

    /// Maps a strategy of the normalized game back onto the original nodes.
    Strategy project(const Strategy& s) const
    {
        Strategy out(s.owner);
        for (auto [v, u] : s.moves)
            if (!is_inserted(v)) out.set(v, target(u));
        return out;
    }

    NodeSet project(const NodeSet& w) const
    {
        NodeSet out;
        for (NodeId v : w)
            if (!is_inserted(v)) out.insert(v);
        return out;
    }
};

/// Inserts an opposite-owner pass-through node of priority 0 on every same-owner edge.
inline TurnBasedGame make_turn_based(const ParityGame& g)
{
    TurnBasedGame tb;
    tb.original_size = g.size();
    std::vector<ParityGame::Node> nodes = g.nodes();
    std::vector<ParityGame::Node> extra;
    for (NodeId v = 0; v < g.size(); ++v) {
        for (NodeId& u : nodes[v].successors) {
            if (!g.contains(u) || g.owner(u) != g.owner(v)) continue;
            NodeId x = static_cast<NodeId>(g.size() + extra.size());
            extra.push_back({opponent(g.owner(v)), 0, {u}, {}});
            tb.through.push_back(u);
            u = x;
        }
    }
    nodes.insert(nodes.end(), std::make_move_iterator(extra.begin()), std::make_move_iterator(extra.end()));
    tb.game = ParityGame(std::move(nodes));
    return tb;
}

/**
 * On-demand view of a game. query() must be pure: the same id yields the
 * same answer every time.
 */
class GameSource {
public:
    virtual ~GameSource() = default;
    virtual NodeInfo query(NodeId v) const = 0;
    virtual NodeId initial() const = 0;
    virtual bool has_node(NodeId v) const = 0;
};

/// GameSource over an explicit game; remembers which ids were asked for.
class ExplicitSource final : public GameSource {
public:
    explicit ExplicitSource(const ParityGame& g, NodeId start = 0) : game_(g), start_(start) {}

    NodeInfo query(NodeId v) const override
    {
        if (!game_.contains(v)) throw std::out_of_range("query of unknown node " + std::to_string(v));
        queried_.insert(v);
        const auto& n = game_.node(v);
        return {n.owner, n.priority, n.successors};
    }
    NodeId initial() const override { return start_; }
    bool has_node(NodeId v) const override { return game_.contains(v); }

    const std::unordered_set<NodeId>& queried() const { return queried_; }
    const ParityGame& game() const { return game_; }

private:
    const ParityGame& game_;
    NodeId start_;
    mutable std::unordered_set<NodeId> queried_;
};

/**
 * Lazy normalization for sources whose size is unknown: each edge v->w is
 * replaced by v->x->w where x is owned by the opponent of v's owner and has
 * priority 0. Pass-through ids are handed out from kFirstInserted upward in
 * query order; base ids must stay below kFirstInserted.
 */
class TurnBasedSource final : public GameSource {
public:
    static constexpr NodeId kFirstInserted = NodeId{1} << 31;

    explicit TurnBasedSource(const GameSource& base) : base_(base) {}

    NodeInfo query(NodeId v) const override
    {
        if (v >= kFirstInserted) {
            const auto& e = inserted_.at(v - kFirstInserted);
            return {e.owner, 0, {e.target}};
        }
        NodeInfo info = base_.query(v);
        auto [it, fresh] = first_id_.try_emplace(v, static_cast<NodeId>(kFirstInserted + inserted_.size()));
        if (fresh) {
            for (NodeId w : info.successors) inserted_.push_back({opponent(info.owner), w});
        }
        for (std::size_t k = 0; k < info.successors.size(); ++k)
            info.successors[k] = static_cast<NodeId>(it->second + k);
        return info;
    }
    NodeId initial() const override { return base_.initial(); }
    bool has_node(NodeId v) const override
    {
        return v >= kFirstInserted ? v - kFirstInserted < inserted_.size() : base_.has_node(v);
    }

    static bool is_inserted(NodeId v) { return v >= kFirstInserted; }
    NodeId target(NodeId x) const { return is_inserted(x) ? inserted_.at(x - kFirstInserted).target : x; }

private:
    struct Edge {
        Player owner;
        NodeId target;
    };
    const GameSource& base_;
    mutable std::unordered_map<NodeId, NodeId> first_id_;
    mutable std::vector<Edge> inserted_;
};

} // namespace pg
