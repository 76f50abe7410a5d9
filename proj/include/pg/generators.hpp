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

#include <random>

#include "game.hpp"

namespace pg::gen {

struct Range {
    std::size_t lo = 0;
    std::size_t hi = 0;
};

/**
 * Random games built from small uniform clusters linked into a DAG: cluster
 * k only has inter-cluster edges to clusters with larger index, so the
 * first node can reach deep into the game while SCCs stay inside clusters.
 */
struct ClusterParams {
    std::size_t total_nodes = 1000;
    Range cluster_size{10, 100};
    Range intra_degree{1, 4};
    std::size_t inter_edges_per_cluster = 2;
    /// hi == 0 means min(total_nodes, 20)
    Range priorities{0, 0};
    double owner_bias = 0.5;
    std::uint64_t seed = 0;
};

namespace detail {

inline std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi)
{
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

} // namespace detail

inline ParityGame gen_clustered(const ClusterParams& p)
{
    auto bad = [](const char* why) { throw std::invalid_argument(std::string("gen_clustered: ") + why); };
    if (p.total_nodes == 0) bad("total_nodes must be positive");
    if (p.cluster_size.lo == 0 || p.cluster_size.lo > p.cluster_size.hi) bad("empty cluster size range");
    if (p.intra_degree.lo > p.intra_degree.hi || p.intra_degree.hi == 0) bad("empty out-degree range");
    if (!(p.owner_bias >= 0.0 && p.owner_bias <= 1.0)) bad("owner bias outside [0,1]");
    Range prio = p.priorities;
    if (prio.hi == 0 && prio.lo == 0) prio.hi = std::min<std::size_t>(p.total_nodes, 20);
    if (prio.lo > prio.hi) bad("empty priority range");

    std::mt19937_64 rng(p.seed);
    std::bernoulli_distribution owner0(p.owner_bias);
    std::vector<ParityGame::Node> nodes(p.total_nodes);
    for (auto& n : nodes) {
        n.owner = owner0(rng) ? Player::P0 : Player::P1;
        n.priority = static_cast<Priority>(detail::uniform(rng, prio.lo, prio.hi));
    }

    std::vector<std::pair<std::size_t, std::size_t>> clusters; // [begin, end)
    for (std::size_t at = 0; at < p.total_nodes;) {
        std::size_t size = detail::uniform(rng, p.cluster_size.lo, p.cluster_size.hi);
        size = std::min(size, p.total_nodes - at);
        clusters.emplace_back(at, at + size);
        at += size;
    }

    for (auto [b, e] : clusters) {
        std::size_t size = e - b;
        for (std::size_t v = b; v < e; ++v) {
            std::size_t degree = detail::uniform(rng, p.intra_degree.lo, p.intra_degree.hi);
            degree = std::clamp<std::size_t>(degree, 1, size);
            // distinct targets: partial Fisher-Yates over the cluster
            std::vector<NodeId> pool(size);
            for (std::size_t i = 0; i < size; ++i) pool[i] = static_cast<NodeId>(b + i);
            for (std::size_t i = 0; i < degree; ++i) {
                std::swap(pool[i], pool[detail::uniform(rng, i, size - 1)]);
                nodes[v].successors.push_back(pool[i]);
            }
        }
    }
    for (std::size_t c = 0; c + 1 < clusters.size(); ++c) {
        auto [b, e] = clusters[c];
        std::size_t later = clusters[c + 1].first;
        for (std::size_t k = 0; k < p.inter_edges_per_cluster; ++k) {
            NodeId from = static_cast<NodeId>(detail::uniform(rng, b, e - 1));
            NodeId to = static_cast<NodeId>(detail::uniform(rng, later, p.total_nodes - 1));
            auto& succ = nodes[from].successors;
            if (std::find(succ.begin(), succ.end(), to) == succ.end()) succ.push_back(to);
        }
    }
    return ParityGame(std::move(nodes));
}

/// Two nodes on a cycle: 0 (player 0, priority 2) <-> 1 (player 1, priority 1).
inline ParityGame gen_cycle_pair()
{
    return ParityGame({{Player::P0, 2, {1}, {}}, {Player::P1, 1, {0}, {}}});
}

/// Player 0 at node 0 (priority 1) picks between node 1 (priority 2) and node 2 (priority 3).
inline ParityGame gen_two_cycle_choice()
{
    return ParityGame({{Player::P0, 1, {1, 2}, {}}, {Player::P1, 2, {0}, {}}, {Player::P1, 3, {0}, {}}});
}

/// A single node without successors.
inline ParityGame gen_sink(Priority priority, Player owner) { return ParityGame({{owner, priority, {}, {}}}); }

struct GameWithStart {
    ParityGame game;
    NodeId start = 0;
};

/**
 * Start node 0 sits on an even cycle 0 <-> 1 that player 0 controls; node 1
 * also leads into a clustered random tail of n nodes (ids 2..n+1) entered at
 * a player-1 node. Player 0 wins the start node.
 */
inline GameWithStart gen_chained_clusters_for_locality(std::size_t n, std::uint64_t seed)
{
    if (n < 2) throw std::invalid_argument("gen_chained_clusters_for_locality: n must be at least 2");
    ClusterParams p;
    p.total_nodes = n;
    p.seed = seed;
    ParityGame tail = gen_clustered(p);

    std::vector<ParityGame::Node> nodes;
    nodes.reserve(n + 2);
    nodes.push_back({Player::P0, 2, {1}, {}});
    nodes.push_back({Player::P0, 0, {0, 2}, {}});
    for (const auto& t : tail.nodes()) {
        auto node = t;
        for (auto& u : node.successors) u += 2;
        nodes.push_back(std::move(node));
    }
    nodes[2].owner = Player::P1;
    return {ParityGame(std::move(nodes)), 0};
}

} // namespace pg::gen
