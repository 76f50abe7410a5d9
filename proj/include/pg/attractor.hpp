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

#include <concepts>
#include <deque>
#include <ranges>

#include "game.hpp"

namespace pg {

/**
 * A game graph seen through a node domain. successors() are the full
 * successor lists of the underlying game; predecessors() may be any superset
 * of the in-domain predecessors (duplicates not allowed).
 */
template <class V>
concept GameView = requires(const V& view, NodeId v) {
    { view.owner(v) } -> std::same_as<Player>;
    { view.in_domain(v) } -> std::convertible_to<bool>;
    { view.successors(v) } -> std::ranges::input_range;
    { view.predecessors(v) } -> std::ranges::input_range;
};

/// Explicit game restricted to a node set (or to all nodes when domain is null).
struct DomainView {
    const ParityGame& game;
    const NodeSet* domain = nullptr;

    Player owner(NodeId v) const { return game.owner(v); }
    bool in_domain(NodeId v) const { return game.contains(v) && (domain == nullptr || domain->contains(v)); }
    std::span<const NodeId> successors(NodeId v) const { return game.successors(v); }
    std::span<const NodeId> predecessors(NodeId v) const { return game.predecessors(v); }
};

struct AttractorResult {
    NodeSet region;
    Strategy strategy;
};

/**
 * Least p-attractor of `target` inside the view's domain.
 *
 * A p-node joins once one successor is in the region; an opponent node joins
 * once every successor in the whole game is, so an opponent node with an
 * edge leaving the domain is never attracted. Nodes in `settled` count as
 * part of the region for these tests but are neither traversed nor
 * returned. Each newly attracted p-node gets one witness edge.
 */
template <GameView View>
AttractorResult attractor(const View& view, Player p, const NodeSet& target, Strategy target_strategy,
                          const NodeSet& settled = {})
{
    if (target_strategy.owner != p) throw std::invalid_argument("attractor: strategy belongs to the wrong player");
    for (NodeId v : target)
        if (!view.in_domain(v)) throw std::invalid_argument("attractor: target node outside the domain");

    AttractorResult res{target, std::move(target_strategy)};
    auto inside = [&](NodeId u) { return res.region.contains(u) || settled.contains(u); };

    // successors still outside the region, per opponent node seen so far
    std::unordered_map<NodeId, NodeSet> escapes;
    std::deque<NodeId> queue(target.begin(), target.end());
    while (!queue.empty()) {
        NodeId w = queue.front();
        queue.pop_front();
        for (NodeId v : view.predecessors(w)) {
            if (!view.in_domain(v) || inside(v)) continue;
            bool attract = false;
            if (view.owner(v) == p) {
                res.strategy.set(v, w);
                attract = true;
            } else {
                auto it = escapes.find(v);
                if (it == escapes.end()) {
                    NodeSet open;
                    for (NodeId u : view.successors(v))
                        if (!inside(u)) open.insert(u);
                    it = escapes.emplace(v, std::move(open)).first;
                } else {
                    it->second.erase(w);
                }
                attract = it->second.empty();
            }
            if (attract) {
                res.region.insert(v);
                queue.push_back(v);
            }
        }
    }
    return res;
}

inline AttractorResult attractor(const ParityGame& g, Player p, const NodeSet& target,
                                 Strategy target_strategy = {}, const NodeSet* domain = nullptr)
{
    if (target_strategy.empty()) target_strategy.owner = p;
    return attractor(DomainView{g, domain}, p, target, std::move(target_strategy));
}

} // namespace pg
