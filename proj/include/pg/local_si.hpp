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
#include <deque>
#include <memory>
#include <random>

#include "attractor.hpp"
#include "events.hpp"
#include "global_si.hpp"

namespace pg {

/// Node set that remembers insertion order (the order expansion candidates appeared in).
class InsertionOrderedSet {
public:
    bool insert(NodeId v)
    {
        if (seq_.contains(v)) return false;
        seq_.emplace(v, next_);
        order_.emplace(next_++, v);
        return true;
    }
    bool erase(NodeId v)
    {
        auto it = seq_.find(v);
        if (it == seq_.end()) return false;
        order_.erase(it->second);
        seq_.erase(it);
        return true;
    }
    bool contains(NodeId v) const { return seq_.contains(v); }
    std::size_t size() const { return seq_.size(); }
    bool empty() const { return seq_.empty(); }

    /// The k-th live element in insertion order.
    NodeId nth(std::size_t k) const { return std::next(order_.begin(), static_cast<std::ptrdiff_t>(k))->second; }

    std::vector<NodeId> in_order() const
    {
        std::vector<NodeId> out;
        out.reserve(order_.size());
        for (const auto& [s, v] : order_) out.push_back(v);
        return out;
    }
    NodeSet as_set() const
    {
        NodeSet out;
        for (const auto& [v, s] : seq_) out.insert(v);
        return out;
    }

private:
    std::uint64_t next_ = 0;
    std::unordered_map<NodeId, std::uint64_t> seq_;
    std::map<std::uint64_t, NodeId> order_;
};

/// Per-player data of the local algorithm.
struct PlayerLocalData {
    NodeSet U;                  // q-subgraph
    InsertionOrderedSet E;      // q-expansion set
    NodeSet I;                  // q-improvement set
    NodeSet C;                  // q-change set
    std::unordered_map<NodeId, NodeValuation> xi;
    Strategy sigma;
};

struct LocalStatistics {
    /// distinct nodes of the input game asked for
    std::size_t visited = 0;
    /// distinct nodes the solver queried (including inserted pass-through nodes)
    std::size_t queried = 0;
    std::size_t expansions = 0;
    std::size_t expanded_nodes = 0;
    std::size_t improvements = 0;
    std::size_t switches = 0;
    std::size_t evaluations = 0;
    std::size_t evaluation_steps = 0;
    std::size_t opponent_sinks = 0;

    friend bool operator==(const LocalStatistics&, const LocalStatistics&) = default;
};

struct LocalState {
    std::array<PlayerLocalData, 2> data;
    std::array<NodeSet, 2> W;
    std::array<Strategy, 2> rho{Strategy(Player::P0), Strategy(Player::P1)};
    Player current = Player::P0;
    NodeId start = 0;

    PlayerLocalData& of(Player q) { return data[index(q)]; }
    const PlayerLocalData& of(Player q) const { return data[index(q)]; }
    bool decided(NodeId v) const { return W[0].contains(v) || W[1].contains(v); }
};

struct InvariantViolation {
    std::string invariant; // SC, WC, WE, BE, SS, VC, IC
    Player player = Player::P0;
    NodeId node = 0;
    std::string detail;
};

inline std::string describe(const InvariantViolation& v)
{
    return v.invariant + " (player " + std::to_string(index(v.player)) + ", node " + std::to_string(v.node) +
           "): " + v.detail;
}

class InvariantFailure : public std::logic_error {
public:
    InvariantFailure(std::string after, std::vector<InvariantViolation> found)
        : std::logic_error("invariant violated after " + after + ": " + describe(found.front())),
          after_(std::move(after)), found_(std::move(found))
    {}
    const std::string& after() const { return after_; }
    const std::vector<InvariantViolation>& violations() const { return found_; }

private:
    std::string after_;
    std::vector<InvariantViolation> found_;
};

/// The evaluation fuel ran out (a non-terminating Evaluate).
class FuelExhausted : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class LocalSolver;

/// Picks a non-empty subset of E_q.
using ExpansionPolicy = std::function<std::vector<NodeId>(const LocalState&, Player)>;
/// Returns a non-empty set of proper improvement edges (v, u) inside U_q.
using LocalImprovementPolicy = std::function<std::vector<std::pair<NodeId, NodeId>>(const LocalSolver&, Player)>;

struct LocalOptions {
    Player first_player = Player::P0;
    /// Check all invariants after every Winning/Expand/Evaluate call; throws InvariantFailure.
    bool check_invariants = false;
    EventSink events;
    /// Called after every completed top-level Winning/Expand/Evaluate call with the
    /// player it ran for.
    std::function<void(const char* procedure, Player player, const LocalSolver&)> observer;
};

class LocalSolver {
public:
    LocalSolver(const GameSource& src, NodeId start, LocalOptions opt = {}) : src_(src), opt_(std::move(opt))
    {
        if (!src_.has_node(start)) throw std::invalid_argument("solve_local: unknown start node");
        st_.start = start;
        st_.current = opt_.first_player;
        for (auto& d : st_.data) d.E.insert(start);
        after("init", st_.current);
    }

    const LocalState& state() const { return st_; }
    LocalState& mutable_state() { return st_; }
    const LocalStatistics& stats() const { return stats_; }
    const GameSource& source() const { return src_; }

    const NodeInfo& info(NodeId v) const
    {
        auto it = info_.find(v);
        if (it != info_.end()) return it->second;
        NodeInfo n = src_.query(v);
        for (NodeId u : n.successors) {
            auto& p = preds_[u];
            if (p.empty() || p.back() != v) p.push_back(v);
        }
        ++stats_.queried;
        return info_.emplace(v, std::move(n)).first->second;
    }
    bool queried(NodeId v) const { return info_.contains(v); }
    template <class Pred>
    std::size_t count_queried(Pred pred) const
    {
        std::size_t n = 0;
        for (const auto& [v, _] : info_) n += pred(v) ? 1 : 0;
        return n;
    }
    Player owner(NodeId v) const { return info(v).owner; }
    std::span<const NodeId> successors(NodeId v) const { return info(v).successors; }
    /// Predecessors among the nodes queried so far.
    std::span<const NodeId> predecessors(NodeId v) const
    {
        auto it = preds_.find(v);
        if (it == preds_.end()) return {};
        return it->second;
    }
    RelevanceKey key(NodeId v) const { return {info(v).priority, v}; }

    const NodeValuation& value(Player q, NodeId v) const { return st_.of(q).xi.at(v); }

    /// Value a switch at v has to beat: Ξ_q(σ_q(v)), or ∅ if v escapes.
    NodeValuation base(Player q, NodeId v) const
    {
        const auto& d = st_.of(q);
        auto u = d.sigma.find(v);
        return u ? d.xi.at(*u) : NodeValuation{};
    }

    bool is_proper_improvement(Player q, NodeId v, NodeId u) const
    {
        const auto& d = st_.of(q);
        return compare(q, base(q, v), d.xi.at(u)) < 0;
    }

    // ---- Winning ----------------------------------------------------------

    void winning_update(Player q, const NodeSet& W, const Strategy& rho)
    {
        winning(q, W, rho);
        after("winning", q);
    }

    // ---- Expand -----------------------------------------------------------

    void expand(Player q, const std::vector<NodeId>& N)
    {
        if (N.empty()) throw std::invalid_argument("expand: empty node set");
        auto& d = st_.of(q);
        for (NodeId v : N)
            if (!d.E.contains(v)) throw std::invalid_argument("expand: node " + std::to_string(v) + " not in E_q");
        ++stats_.expansions;

        std::array<NodeSet, 2> Wn;
        std::array<Strategy, 2> rn{Strategy(Player::P0), Strategy(Player::P1)};
        auto in_W = [&](int p, NodeId u) { return st_.W[p].contains(u) || Wn[p].contains(u); };
        auto known = [&](NodeId u) { return d.U.contains(u) || in_W(0, u) || in_W(1, u); };

        std::deque<NodeId> work(N.begin(), N.end());
        NodeSet pending(N.begin(), N.end());
        TraceEvent ev{EventKind::expand, q, {}, {}, {}};
        while (!work.empty()) {
            NodeId v = work.front();
            work.pop_front();
            pending.erase(v);
            d.U.insert(v);
            d.xi[v] = NodeValuation{};
            d.E.erase(v);
            d.C.insert(v);
            // v's arrival can make a predecessor improvable
            for (NodeId p : predecessors(v))
                if (d.U.contains(p)) d.C.insert(p);
            ++stats_.expanded_nodes;
            ev.nodes.push_back(v);

            const NodeInfo& n = info(v);
            int c = index(n.owner);
            auto hit = std::find_if(n.successors.begin(), n.successors.end(), [&](NodeId u) { return in_W(c, u); });
            if (hit != n.successors.end()) {
                Wn[c].insert(v);
                rn[c].set(v, *hit);
            } else if (std::all_of(n.successors.begin(), n.successors.end(),
                                   [&](NodeId u) { return in_W(1 - c, u); })) {
                Wn[1 - c].insert(v);
            } else if (n.owner == q) {
                for (NodeId u : n.successors)
                    if (!known(u)) d.E.insert(u);
            } else {
                for (NodeId u : n.successors)
                    if (!known(u) && pending.insert(u).second) work.push_back(u);
            }
        }
        if (opt_.events) opt_.events(ev);
        winning(Player::P0, Wn[0], rn[0]);
        winning(Player::P1, Wn[1], rn[1]);
        after("expand", q);
    }

    // ---- Evaluate ---------------------------------------------------------

    std::pair<NodeSet, Strategy> evaluate_local(Player q)
    {
        auto& d = st_.of(q);
        Strategy tau(q);
        NodeSet W, D, popped;
        ++stats_.evaluations;

        std::size_t steps = 0;
        const std::size_t cheap_fuel = d.U.size() * d.U.size();
        std::optional<std::size_t> fuel;
        std::deque<NodeId> queue(d.C.begin(), d.C.end());
        TraceEvent ev{EventKind::evaluate, q, {}, {}, {}};
        while (!queue.empty()) {
            NodeId v = queue.front();
            queue.pop_front();
            d.C.erase(v);
            ++steps;
            if (steps > cheap_fuel) {
                if (!fuel) fuel = fuel_limit(q);
                if (steps > *fuel) throw FuelExhausted("evaluate: fuel exhausted");
            }

            popped.insert(v);
            NodeValuation theta = consistent(q, v);
            auto& cur = d.xi.at(v);
            if (theta == cur) continue;
            cur = std::move(theta);
            D.insert(v);
            for (NodeId p : predecessors(v))
                if (d.U.contains(p) && d.C.insert(p).second) queue.push_back(p);
        }
        stats_.evaluation_steps += steps;

        if (opt_.events) {
            for (NodeId v : D) ev.values.emplace_back(v, d.xi.at(v));
        }
        // every node taken from C_q is re-examined, not only the changed ones:
        // a successor may have left U_q without changing v's own value
        NodeSet touched = std::move(popped);
        touched.insert(D.begin(), D.end());
        for (NodeId v : D)
            for (NodeId p : predecessors(v)) touched.insert(p);
        for (NodeId v : touched) {
            if (!d.U.contains(v)) continue;
            if (d.xi.at(v).is_infinite()) {
                d.I.erase(v);
                W.insert(v);
                if (owner(v) == q) tau.set(v, d.sigma.moves.at(v));
            } else if (owner(v) == q) {
                if (improvable(q, v))
                    d.I.insert(v);
                else
                    d.I.erase(v);
            }
        }
        if (opt_.events && !ev.values.empty()) opt_.events(ev);
        after("evaluate", q);
        return {std::move(W), std::move(tau)};
    }

    // ---- Main -------------------------------------------------------------

    /// One iteration of the main loop. Returns false once the start node is decided.
    bool step(const LocalImprovementPolicy& improve, const ExpansionPolicy& expand_policy)
    {
        if (st_.decided(st_.start)) return false;
        Player q = st_.current;
        auto& d = st_.of(q);
        if (d.E.empty() && d.I.empty()) {
            dead_end(q);
            return false;
        }
        if (d.I.empty()) {
            std::vector<NodeId> N = expand_policy(st_, q);
            NodeSet uniq;
            for (NodeId v : N) {
                if (!d.E.contains(v)) throw PolicyContractError("expansion policy picked a node outside E_q");
                if (!uniq.insert(v).second) throw PolicyContractError("expansion policy picked a node twice");
            }
            if (N.empty()) throw PolicyContractError("expansion policy picked no node");
            expand(q, N);
        } else {
            auto pairs = improve(*this, q);
            if (pairs.empty()) throw PolicyContractError("improvement policy returned no switch");
            TraceEvent ev{EventKind::improve, q, {}, {}, {}};
            for (auto [v, u] : pairs) {
                if (!d.U.contains(v) || !d.U.contains(u) || owner(v) != q)
                    throw PolicyContractError("switch " + std::to_string(v) + "->" + std::to_string(u) +
                                              " leaves the q-subgraph");
                auto s = successors(v);
                if (std::find(s.begin(), s.end(), u) == s.end())
                    throw PolicyContractError("switch " + std::to_string(v) + "->" + std::to_string(u) +
                                              " is not an edge");
                if (!is_proper_improvement(q, v, u))
                    throw PolicyContractError("switch " + std::to_string(v) + "->" + std::to_string(u) +
                                              " is not a proper improvement");
            }
            for (auto [v, u] : pairs) {
                d.sigma.set(v, u);
                d.C.insert(v);
                ev.switches.emplace_back(v, u);
            }
            ++stats_.improvements;
            stats_.switches += pairs.size();
            if (opt_.events) opt_.events(ev);
            st_.current = opponent(q);
        }
        stabilize();
        return !st_.decided(st_.start);
    }

    void solve(const LocalImprovementPolicy& improve, const ExpansionPolicy& expand_policy)
    {
        while (step(improve, expand_policy)) {}
    }

    Player winner() const
    {
        if (st_.W[0].contains(st_.start)) return Player::P0;
        if (st_.W[1].contains(st_.start)) return Player::P1;
        throw std::logic_error("start node is not decided yet");
    }

    // ---- invariants -------------------------------------------------------

    std::vector<InvariantViolation> check_invariants() const
    {
        std::vector<InvariantViolation> out;
        auto report = [&](const char* inv, Player q, NodeId v, std::string why) {
            out.push_back({inv, q, v, std::move(why)});
        };
        auto decided = [&](NodeId v) { return st_.decided(v); };

        for (NodeId v : st_.W[0])
            if (st_.W[1].contains(v)) report("WE", Player::P0, v, "node won by both players");

        NodeSet domain = st_.data[0].U;
        domain.insert(st_.data[1].U.begin(), st_.data[1].U.end());

        for (int qi = 0; qi < 2; ++qi) {
            Player q = player_of(qi);
            const auto& d = st_.data[qi];

            // SC
            for (NodeId v : d.U) {
                if (owner(v) == q) continue;
                for (NodeId u : successors(v))
                    if (!decided(u) && !d.U.contains(u))
                        report("SC", q, v, "opponent successor " + std::to_string(u) + " outside U_q");
            }

            // WC
            {
                NodeSet dom = domain;
                dom.insert(st_.W[qi].begin(), st_.W[qi].end());
                struct View {
                    const LocalSolver& s;
                    const NodeSet& dom;
                    Player owner(NodeId v) const { return s.owner(v); }
                    bool in_domain(NodeId v) const { return dom.contains(v); }
                    std::span<const NodeId> successors(NodeId v) const { return s.successors(v); }
                    std::span<const NodeId> predecessors(NodeId v) const { return s.predecessors(v); }
                };
                auto res = attractor(View{*this, dom}, q, st_.W[qi], st_.rho[qi]);
                for (NodeId v : res.region)
                    if (!st_.W[qi].contains(v)) report("WC", q, v, "attracted to W_q but not in it");
                if (res.strategy != st_.rho[qi]) report("WC", q, 0, "attractor strategy differs from rho_q");
                for (NodeId v : st_.W[qi]) {
                    if (owner(v) != q) continue;
                    auto u = st_.rho[qi].find(v);
                    if (!u)
                        report("WC", q, v, "no winning move recorded");
                    else if (!st_.W[qi].contains(*u))
                        report("WC", q, v, "winning move leaves W_q");
                }
            }

            // WE
            for (NodeId v : d.U)
                if (decided(v)) report("WE", q, v, "node of U_q already won");

            // BE
            for (NodeId v : d.U)
                for (NodeId u : successors(v))
                    if (!decided(u) && !d.U.contains(u) && !d.E.contains(u))
                        report("BE", q, v, "successor " + std::to_string(u) + " missing from E_q");
            for (NodeId u : d.E.in_order())
                if (decided(u) || d.U.contains(u)) report("BE", q, u, "E_q node already explored or won");

            // SS
            for (auto [v, u] : d.sigma.moves) {
                if (!d.U.contains(v) || !d.U.contains(u))
                    report("SS", q, v, "strategy edge to " + std::to_string(u) + " leaves U_q");
                else if (owner(v) != q)
                    report("SS", q, v, "strategy at a node of the other player");
            }

            // VC
            for (NodeId v : d.C)
                if (!d.U.contains(v)) report("VC", q, v, "change-set node outside U_q");
            for (NodeId v : d.U) {
                if (!d.xi.contains(v)) {
                    report("VC", q, v, "no valuation");
                    continue;
                }
                if (!d.C.contains(v) && consistent(q, v) != d.xi.at(v))
                    report("VC", q, v, "inconsistent valuation not in C_q");
            }
            if (d.xi.size() != d.U.size()) report("VC", q, 0, "valuation domain differs from U_q");

            // IC
            for (NodeId v : d.I)
                if (!d.U.contains(v) || owner(v) != q) report("IC", q, v, "I_q node outside U_q or not owned by q");
            for (NodeId v : d.U) {
                if (d.C.contains(v) || owner(v) != q || !d.xi.contains(v)) continue;
                bool should = improvable(q, v);
                if (should != d.I.contains(v))
                    report("IC", q, v, should ? "improvable node missing from I_q" : "I_q holds a non-improvable node");
            }
        }
        return out;
    }

    /// Ξ-consistent value of v within U_q.
    NodeValuation consistent(Player q, NodeId v) const
    {
        const auto& d = st_.of(q);
        RelevanceKey k = key(v);
        if (owner(v) == q) {
            auto u = d.sigma.find(v);
            return u ? d.xi.at(*u).plus(k) : NodeValuation::of({k});
        }
        std::optional<NodeValuation> best;
        for (NodeId u : successors(v)) {
            if (!d.U.contains(u)) continue;
            NodeValuation c = d.xi.at(u).plus(k);
            if (!best || compare(q, c, *best) < 0) best = std::move(c);
        }
        if (!best) {
            if (!successors(v).empty())
                throw std::logic_error("opponent node " + std::to_string(v) + " has no successor inside U_q");
            ++stats_.opponent_sinks;
            return NodeValuation::infinity();
        }
        return std::move(*best);
    }

    /// v (a q-node of U_q with finite value) has a successor in U_q that beats base(v).
    bool improvable(Player q, NodeId v) const
    {
        const auto& d = st_.of(q);
        if (d.xi.at(v).is_infinite()) return false;
        NodeValuation b = base(q, v);
        for (NodeId u : successors(v))
            if (d.U.contains(u) && compare(q, b, d.xi.at(u)) < 0) return true;
        return false;
    }

private:
    void winning(Player q, const NodeSet& W, const Strategy& rho)
    {
        if (W.empty()) return;
        int qi = index(q);
        for (NodeId v : W)
            if (!st_.data[0].U.contains(v) && !st_.data[1].U.contains(v))
                throw std::invalid_argument("winning: node " + std::to_string(v) + " outside U_0 and U_1");

        struct View {
            const LocalSolver& s;
            Player owner(NodeId v) const { return s.owner(v); }
            bool in_domain(NodeId v) const
            {
                return s.st_.data[0].U.contains(v) || s.st_.data[1].U.contains(v);
            }
            std::span<const NodeId> successors(NodeId v) const { return s.successors(v); }
            std::span<const NodeId> predecessors(NodeId v) const { return s.predecessors(v); }
        };
        Strategy target = rho;
        target.owner = q;
        auto [Wp, rp] = attractor(View{*this}, q, W, std::move(target), st_.W[qi]);

        st_.W[qi].insert(Wp.begin(), Wp.end());
        for (auto [v, u] : rp.moves) st_.rho[qi].set(v, u);
        NodeSet B;
        for (NodeId v : Wp)
            for (NodeId p : predecessors(v)) B.insert(p);

        for (auto& d : st_.data) {
            for (NodeId v : Wp) {
                d.I.erase(v);
                d.E.erase(v);
                d.C.erase(v);
            }
            for (NodeId b : B)
                if (d.U.contains(b) && !Wp.contains(b)) d.C.insert(b);
            for (NodeId v : Wp) {
                d.U.erase(v);
                d.xi.erase(v);
            }
            for (auto it = d.sigma.moves.begin(); it != d.sigma.moves.end();) {
                if (Wp.contains(it->first)) {
                    it = d.sigma.moves.erase(it);
                } else if (Wp.contains(it->second)) {
                    d.C.insert(it->first);
                    it = d.sigma.moves.erase(it);
                } else {
                    ++it;
                }
            }
        }
        if (opt_.events) opt_.events({EventKind::winning, q, {Wp.begin(), Wp.end()}, {}, {}});
    }

    void dead_end(Player q)
    {
        auto& d = st_.of(q);
        Player o = opponent(q);
        int oi = index(o);
        for (NodeId v : d.U) {
            st_.W[oi].insert(v);
            if (owner(v) != o) continue;
            NodeSet inside;
            for (NodeId u : successors(v))
                if (d.U.contains(u)) inside.insert(u);
            auto keyed = [&](NodeId a, NodeId b) { return reward_less(q, key(a), key(b)); };
            std::optional<NodeId> best;
            for (NodeId u : inside) {
                if (!best) {
                    best = u;
                    continue;
                }
                auto c = compare(q, d.xi.at(u), d.xi.at(*best));
                if (c < 0 || (c == 0 && keyed(u, *best))) best = u;
            }
            if (best) st_.rho[oi].set(v, *best);
        }
        if (opt_.events) opt_.events({EventKind::dead_end, o, {d.U.begin(), d.U.end()}, {}, {}});
    }

    void stabilize()
    {
        bool stable;
        do {
            stable = true;
            for (int i = 0; i < 2; ++i) {
                auto [W, tau] = evaluate_local(player_of(i));
                if (!W.empty()) {
                    stable = false;
                    winning_update(player_of(i), W, tau);
                }
            }
        } while (!stable);
    }

    std::size_t fuel_limit(Player q) const
    {
        const auto& d = st_.of(q);
        std::size_t edges = 0;
        for (NodeId v : d.U)
            for (NodeId u : successors(v)) edges += d.U.contains(u);
        return d.U.size() * d.U.size() * (1 + edges);
    }

    void after(const char* procedure, Player q)
    {
        if (opt_.check_invariants) {
            auto found = check_invariants();
            if (!found.empty()) throw InvariantFailure(procedure, std::move(found));
        }
        if (opt_.observer) opt_.observer(procedure, q, *this);
    }

    const GameSource& src_;
    LocalOptions opt_;
    LocalState st_;
    mutable LocalStatistics stats_;
    mutable std::unordered_map<NodeId, NodeInfo> info_;
    mutable std::unordered_map<NodeId, std::vector<NodeId>> preds_;
};

// ---- policies -------------------------------------------------------------

/// One uniformly chosen node of E_q.
inline ExpansionPolicy random_expansion_policy(std::uint64_t seed)
{
    auto rng = std::make_shared<std::mt19937_64>(seed);
    return [rng](const LocalState& st, Player q) {
        const auto& E = st.of(q).E;
        std::uniform_int_distribution<std::size_t> pick(0, E.size() - 1);
        return std::vector<NodeId>{E.nth(pick(*rng))};
    };
}

/// The first k nodes of E_q in insertion order.
inline ExpansionPolicy bfs_expansion_policy(std::size_t k)
{
    if (k == 0) throw std::invalid_argument("bfs_expansion_policy: k must be positive");
    return [k](const LocalState& st, Player q) {
        auto all = st.of(q).E.in_order();
        if (all.size() > k) all.resize(k);
        return all;
    };
}

/// Every node of I_q switches to its best successor inside U_q.
inline LocalImprovementPolicy local_all_max_policy()
{
    return [](const LocalSolver& s, Player q) {
        const auto& d = s.state().of(q);
        std::vector<std::pair<NodeId, NodeId>> out;
        for (NodeId v : d.I) {
            std::optional<NodeId> best;
            for (NodeId u : s.successors(v)) {
                if (!d.U.contains(u)) continue;
                if (!best) {
                    best = u;
                    continue;
                }
                if (u == *best) continue;
                auto c = compare(q, d.xi.at(u), d.xi.at(*best));
                if (c > 0 || (c == 0 && reward_less(q, s.key(u), s.key(*best)))) best = u;
            }
            if (best) out.emplace_back(v, *best);
        }
        return out;
    };
}

// ---- entry points ---------------------------------------------------------

struct LocalSolution {
    Player winner = Player::P0;
    std::array<NodeSet, 2> won;
    std::array<Strategy, 2> strategy{Strategy(Player::P0), Strategy(Player::P1)};
    LocalStatistics stats;
};

struct LocalConfig {
    LocalImprovementPolicy improve = local_all_max_policy();
    ExpansionPolicy expand = random_expansion_policy(0);
    LocalOptions options;
    /// Skip the pass-through normalization (the source must already be turn-based).
    bool assume_turn_based = false;
};

/**
 * Decides the winner of the source's initial node. Unless told otherwise the
 * source is explored through a TurnBasedSource; the result and `visited`
 * refer to the base source, events to the normalized one.
 */
inline LocalSolution solve_local(const GameSource& src, const LocalConfig& cfg = {})
{
    if (cfg.assume_turn_based) {
        LocalSolver s(src, src.initial(), cfg.options);
        s.solve(cfg.improve, cfg.expand);
        LocalSolution out{s.winner(), s.state().W, s.state().rho, s.stats()};
        out.stats.visited = out.stats.queried;
        return out;
    }
    TurnBasedSource tb(src);
    LocalSolver s(tb, src.initial(), cfg.options);
    s.solve(cfg.improve, cfg.expand);
    LocalSolution out;
    out.winner = s.winner();
    out.stats = s.stats();
    for (int p = 0; p < 2; ++p) {
        for (NodeId v : s.state().W[p])
            if (!TurnBasedSource::is_inserted(v)) out.won[p].insert(v);
        for (auto [v, u] : s.state().rho[p].moves)
            if (!TurnBasedSource::is_inserted(v)) out.strategy[p].set(v, tb.target(u));
    }
    out.stats.visited = s.count_queried([](NodeId v) { return !TurnBasedSource::is_inserted(v); });
    return out;
}

/// Local solve on an explicit game from `start`.
inline LocalSolution solve_local(const ParityGame& g, NodeId start, const LocalConfig& cfg = {})
{
    if (!validate(g).empty()) throw std::invalid_argument("solve_local: malformed game");
    if (!g.contains(start)) throw std::invalid_argument("solve_local: unknown start node");
    std::optional<TurnBasedGame> tb;
    if (!cfg.assume_turn_based && !is_turn_based(g)) tb = make_turn_based(g);
    const ParityGame& game = tb ? tb->game : g;
    ExplicitSource src(game, start);
    LocalSolver s(src, start, cfg.options);
    s.solve(cfg.improve, cfg.expand);

    LocalSolution out;
    out.winner = s.winner();
    out.stats = s.stats();
    out.stats.visited = static_cast<std::size_t>(
        std::count_if(src.queried().begin(), src.queried().end(), [&](NodeId v) { return v < g.size(); }));
    for (int p = 0; p < 2; ++p) {
        out.won[p] = tb ? tb->project(s.state().W[p]) : s.state().W[p];
        out.strategy[p] = tb ? tb->project(s.state().rho[p]) : s.state().rho[p];
    }
    return out;
}

} // namespace pg
