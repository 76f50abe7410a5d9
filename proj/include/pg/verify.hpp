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

#include "game.hpp"

namespace pg {

struct VerifyResult {
    bool ok = true;
    std::string diagnostic;

    explicit operator bool() const { return ok; }
};

namespace detail {

/// Strongly connected components of induced subgraphs (iterative Tarjan, reusable scratch).
class SccFinder {
public:
    explicit SccFinder(std::size_t n) : low_(n, -1), num_(n, -1), on_stack_(n, 0), alive_(n, 0) {}

    template <class Succ>
    std::vector<std::vector<NodeId>> run(const std::vector<NodeId>& nodes, const Succ& succ)
    {
        for (NodeId v : nodes) alive_[v] = 1;
        std::vector<std::vector<NodeId>> out;
        int counter = 0;
        struct Frame {
            NodeId v;
            std::size_t next;
        };
        for (NodeId root : nodes) {
            if (num_[root] != -1) continue;
            std::vector<Frame> call{{root, 0}};
            num_[root] = low_[root] = counter++;
            stack_.push_back(root);
            on_stack_[root] = 1;
            while (!call.empty()) {
                NodeId v = call.back().v;
                std::span<const NodeId> s = succ(v);
                if (call.back().next < s.size()) {
                    NodeId u = s[call.back().next++];
                    if (!alive_[u]) continue;
                    if (num_[u] == -1) {
                        num_[u] = low_[u] = counter++;
                        stack_.push_back(u);
                        on_stack_[u] = 1;
                        call.push_back({u, 0});
                    } else if (on_stack_[u]) {
                        low_[v] = std::min(low_[v], num_[u]);
                    }
                    continue;
                }
                call.pop_back();
                if (!call.empty()) low_[call.back().v] = std::min(low_[call.back().v], low_[v]);
                if (low_[v] == num_[v]) {
                    std::vector<NodeId> comp;
                    NodeId x;
                    do {
                        x = stack_.back();
                        stack_.pop_back();
                        on_stack_[x] = 0;
                        comp.push_back(x);
                    } while (x != v);
                    out.push_back(std::move(comp));
                }
            }
        }
        for (NodeId v : nodes) {
            alive_[v] = 0;
            low_[v] = num_[v] = -1;
        }
        return out;
    }

private:
    std::vector<int> low_, num_;
    std::vector<char> on_stack_, alive_;
    std::vector<NodeId> stack_;
};

} // namespace detail

/**
 * Checks that `s` wins every node of `region` for player q: the region is a
 * trap for the opponent, q always has a move inside it, every cycle of the
 * restricted graph is dominated by a q-priority, and only opponent sinks can
 * be reached.
 */
inline VerifyResult verify_winning_strategy(const ParityGame& g, Player q, const NodeSet& region, const Strategy& s)
{
    auto fail = [](std::string why) { return VerifyResult{false, std::move(why)}; };
    if (s.owner != q) return fail("strategy belongs to the other player");

    const std::size_t n = g.size();
    std::vector<char> in(n, 0);
    for (NodeId v : region) {
        if (!g.contains(v)) return fail("region contains unknown node " + std::to_string(v));
        in[v] = 1;
    }

    std::vector<std::vector<NodeId>> restricted(n);
    for (NodeId v : region) {
        auto succ = g.successors(v);
        if (g.owner(v) == q) {
            auto u = s.find(v);
            if (!u) {
                if (succ.empty()) return fail("node " + std::to_string(v) + " is a sink of the winning player");
                return fail("no strategy decision at node " + std::to_string(v));
            }
            if (std::find(succ.begin(), succ.end(), *u) == succ.end())
                return fail("strategy move " + std::to_string(v) + "->" + std::to_string(*u) + " is not an edge");
            if (!in[*u])
                return fail("strategy escapes the region: " + std::to_string(v) + "->" + std::to_string(*u));
            restricted[v] = {*u};
        } else {
            for (NodeId u : succ) {
                if (!in[u])
                    return fail("opponent escapes the region: " + std::to_string(v) + "->" + std::to_string(u));
            }
            // opponent sinks are fine: the opponent cannot move and loses
            restricted[v].assign(succ.begin(), succ.end());
        }
    }

    // Peel off dominating priorities: inside an SCC the top priority lies on a cycle.
    auto succ_of = [&](NodeId v) { return std::span<const NodeId>(restricted[v]); };
    std::vector<std::vector<NodeId>> work{std::vector<NodeId>(region.begin(), region.end())};
    detail::SccFinder scc(n);
    while (!work.empty()) {
        auto part = std::move(work.back());
        work.pop_back();
        for (auto& comp : scc.run(part, succ_of)) {
            bool cyclic = comp.size() > 1;
            if (!cyclic) {
                NodeId v = comp.front();
                cyclic = std::find(restricted[v].begin(), restricted[v].end(), v) != restricted[v].end();
            }
            if (!cyclic) continue;
            Priority top = 0;
            for (NodeId v : comp) top = std::max(top, g.priority(v));
            if (favors(top) != q) {
                NodeId witness = comp.front();
                for (NodeId v : comp)
                    if (g.priority(v) == top) witness = v;
                return fail("losing cycle through node " + std::to_string(witness) + " with priority " +
                            std::to_string(top));
            }
            std::vector<NodeId> rest;
            for (NodeId v : comp)
                if (g.priority(v) != top) rest.push_back(v);
            if (!rest.empty()) work.push_back(std::move(rest));
        }
    }
    return {};
}

} // namespace pg
