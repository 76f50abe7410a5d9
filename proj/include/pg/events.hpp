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

#include <functional>

#include "valuation.hpp"

namespace pg {

enum class EventKind { evaluate, improve, expand, winning, dead_end };

inline const char* to_string(EventKind k)
{
    switch (k) {
    case EventKind::evaluate: return "evaluate";
    case EventKind::improve: return "improve";
    case EventKind::expand: return "expand";
    case EventKind::winning: return "winning";
    case EventKind::dead_end: return "dead-end";
    }
    return "?";
}

/**
 * One solver step, recorded as a diff:
 *   evaluate  - `values` holds every node whose valuation changed
 *   improve   - `switches` holds the strategy changes (v -> u)
 *   expand    - `nodes` are the nodes added to the player's subgraph
 *   winning   - `nodes` are newly won by `player`
 *   dead-end  - `nodes` are the subgraph handed to `player`
 * Node ids are those of the game the solver runs on.
 */
struct TraceEvent {
    EventKind kind = EventKind::evaluate;
    Player player = Player::P0;
    std::vector<NodeId> nodes;
    std::vector<std::pair<NodeId, NodeId>> switches;
    std::vector<std::pair<NodeId, NodeValuation>> values;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

using EventSink = std::function<void(const TraceEvent&)>;

} // namespace pg
