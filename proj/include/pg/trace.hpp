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

// Solver traces. One event per line:
//
//   {"kind":"evaluate","player":0,"values":[{"node":1,"value":[0,1]},{"node":0,"value":"inf"}]}
//   {"kind":"improve","player":0,"switches":[[0,1]]}
//   {"kind":"expand","player":0,"nodes":[0]}
//   {"kind":"winning","player":1,"nodes":[0]}
//   {"kind":"dead-end","player":1,"nodes":[3,4]}
//
// Finite valuations list their nodes by descending relevance. Node ids are
// those of the game the solver ran on; ids at or above the input size are
// pass-through nodes added by make_turn_based().

#include <json.hpp>
#include <sstream>
#include <variant>

#include "global_si.hpp"
#include "local_si.hpp"

namespace pg::trace {

using json = nlohmann::json;

inline json to_json(const TraceEvent& e)
{
    json j;
    j["kind"] = to_string(e.kind);
    j["player"] = index(e.player);
    switch (e.kind) {
    case EventKind::evaluate: {
        json values = json::array();
        for (const auto& [v, val] : e.values) {
            json x;
            x["node"] = v;
            if (val.is_infinite()) {
                x["value"] = "inf";
            } else {
                json nodes = json::array();
                for (auto k : val.nodes()) nodes.push_back(k.node);
                x["value"] = std::move(nodes);
            }
            values.push_back(std::move(x));
        }
        j["values"] = std::move(values);
        break;
    }
    case EventKind::improve: {
        json sw = json::array();
        for (auto [v, u] : e.switches) sw.push_back({v, u});
        j["switches"] = std::move(sw);
        break;
    }
    default: j["nodes"] = e.nodes;
    }
    return j;
}

/// Inverse of to_json; valuation priorities are looked up in `g`.
inline TraceEvent from_json(const json& j, const ParityGame& g)
{
    static const std::map<std::string, EventKind> kinds{{"evaluate", EventKind::evaluate},
                                                        {"improve", EventKind::improve},
                                                        {"expand", EventKind::expand},
                                                        {"winning", EventKind::winning},
                                                        {"dead-end", EventKind::dead_end}};
    TraceEvent e;
    auto it = kinds.find(j.at("kind").get<std::string>());
    if (it == kinds.end()) throw std::invalid_argument("unknown trace event kind");
    e.kind = it->second;
    e.player = player_of(j.at("player").get<int>());
    if (j.contains("nodes")) e.nodes = j["nodes"].get<std::vector<NodeId>>();
    if (j.contains("switches"))
        for (const auto& s : j["switches"]) e.switches.emplace_back(s.at(0).get<NodeId>(), s.at(1).get<NodeId>());
    if (j.contains("values")) {
        for (const auto& x : j["values"]) {
            NodeId v = x.at("node").get<NodeId>();
            const auto& val = x.at("value");
            if (val.is_string()) {
                e.values.emplace_back(v, NodeValuation::infinity());
            } else {
                std::vector<RelevanceKey> keys;
                for (NodeId u : val.get<std::vector<NodeId>>()) keys.push_back(key(g, u));
                e.values.emplace_back(v, NodeValuation::of(std::move(keys)));
            }
        }
    }
    return e;
}

inline std::string to_line(const TraceEvent& e) { return to_json(e).dump(); }

/// Human-readable rendering, one line per event.
inline std::string to_text(const TraceEvent& e)
{
    std::ostringstream os;
    os << to_string(e.kind) << " [player " << index(e.player) << "]";
    auto set = [&](const std::vector<NodeId>& ns) {
        os << " {";
        for (std::size_t i = 0; i < ns.size(); ++i) os << (i ? "," : "") << ns[i];
        os << '}';
    };
    switch (e.kind) {
    case EventKind::evaluate:
        for (const auto& [v, val] : e.values) {
            os << ' ' << v << '=';
            if (val.is_infinite()) {
                os << "inf";
            } else {
                std::vector<NodeId> ns;
                for (auto k : val.nodes()) ns.push_back(k.node);
                set(ns);
            }
        }
        break;
    case EventKind::improve:
        for (auto [v, u] : e.switches) os << ' ' << v << "->" << u;
        break;
    default: set(e.nodes);
    }
    return os.str();
}

enum class Mode { global, local };

struct TraceRequest {
    Mode mode = Mode::local;
    Player player = Player::P0;    // global
    NodeId start = 0;              // local
    ImprovementPolicy global_policy = all_max_policy();
    LocalConfig local;
};

struct TraceResult {
    std::vector<TraceEvent> events;
    std::variant<GlobalSolution, LocalSolution> solution;
};

/// Runs the requested solver and records every event.
inline TraceResult trace_solve(const ParityGame& g, TraceRequest req)
{
    TraceResult out;
    auto sink = [&](const TraceEvent& e) { out.events.push_back(e); };
    if (req.mode == Mode::global) {
        GlobalOptions opt;
        opt.events = sink;
        out.solution = solve_global(g, req.player, req.global_policy, opt);
    } else {
        req.local.options.events = sink;
        out.solution = solve_local(g, req.start, req.local);
    }
    return out;
}

/**
 * Winning regions rebuilt from events alone. Local traces add winning and
 * dead-end nodes; global traces keep the last value per node and split on
 * infinity. Ids at or above `size` are dropped.
 */
inline std::array<NodeSet, 2> replay_regions(const std::vector<TraceEvent>& events, Mode mode, Player q,
                                             std::size_t size)
{
    std::array<NodeSet, 2> won;
    if (mode == Mode::local) {
        for (const auto& e : events)
            if (e.kind == EventKind::winning || e.kind == EventKind::dead_end)
                for (NodeId v : e.nodes)
                    if (v < size) won[index(e.player)].insert(v);
        return won;
    }
    std::map<NodeId, bool> infinite;
    for (const auto& e : events)
        if (e.kind == EventKind::evaluate)
            for (const auto& [v, val] : e.values) infinite[v] = val.is_infinite();
    for (auto [v, inf] : infinite)
        if (v < size) won[index(inf ? q : opponent(q))].insert(v);
    return won;
}

} // namespace pg::trace
