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

// PGSolver game files, solution files and DOT export.
//
//   game     := ("parity" INT ";")? record*
//   record   := INT INT INT succs? NAME? ";"
//   succs    := INT ("," INT)*
//   NAME     := '"' (char | '\"' | '\\')* '"'
//
// Fields are id, priority, owner. An empty successor list (a sink) is an
// extension of the classic format and is reported in ParsedGame::notes.
//
//   solution := "paritysol" INT ";" (INT INT INT? ";")*
//
// with fields id, winner and optionally the winner's move.

#include <array>
#include <charconv>
#include <map>
#include <sstream>

#include "game.hpp"

namespace pg::io {

using ExternalId = std::uint64_t;

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& what)
        : std::runtime_error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line_(line),
          column_(column)
    {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

struct ParsedGame {
    ParityGame game;
    /// internal NodeId -> id used in the file (internal ids follow ascending file ids)
    std::vector<ExternalId> ids;
    NodeId start = 0;
    std::optional<ExternalId> header_max_id;
    bool has_sinks = false;
    std::vector<std::string> notes;

    std::optional<NodeId> find(ExternalId id) const
    {
        auto it = std::lower_bound(ids.begin(), ids.end(), id);
        if (it == ids.end() || *it != id) return std::nullopt;
        return static_cast<NodeId>(it - ids.begin());
    }
};

namespace detail {

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    void skip_space()
    {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
    }
    bool at_end()
    {
        skip_space();
        return pos_ >= text_.size();
    }
    char peek()
    {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }
    bool accept(char c)
    {
        if (peek() != c) return false;
        advance();
        return true;
    }
    void expect(char c, const char* what)
    {
        if (!accept(c)) fail(std::string("expected ") + what);
    }
    bool accept_word(std::string_view w)
    {
        skip_space();
        if (text_.substr(pos_, w.size()) != w) return false;
        std::size_t after = pos_ + w.size();
        if (after < text_.size() && std::isalnum(static_cast<unsigned char>(text_[after]))) return false;
        for (std::size_t i = 0; i < w.size(); ++i) advance();
        return true;
    }
    bool at_number() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

    ExternalId number(const char* what)
    {
        skip_space();
        mark();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        if (start == pos_) fail(std::string("expected ") + what);
        ExternalId value = 0;
        auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
        if (ec != std::errc()) fail_at_mark(std::string(what) + " out of range");
        return value;
    }

    std::string quoted()
    {
        skip_space();
        mark();
        advance(); // opening quote
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\n') fail("unterminated name");
            if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
            out += text_[pos_];
            advance();
        }
        if (pos_ >= text_.size()) fail("unterminated name");
        advance();
        return out;
    }

    void mark()
    {
        mark_line_ = line_;
        mark_col_ = col_;
    }
    [[noreturn]] void fail(const std::string& what)
    {
        skip_space();
        throw ParseError(line_, col_, what);
    }
    [[noreturn]] void fail_at_mark(const std::string& what) { throw ParseError(mark_line_, mark_col_, what); }
    std::size_t line() const { return line_; }
    std::size_t column() const { return col_; }
    /// start of the last token read
    std::pair<std::size_t, std::size_t> marked() const { return {mark_line_, mark_col_}; }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    std::string_view text_;
    std::size_t pos_ = 0, line_ = 1, col_ = 1;
    std::size_t mark_line_ = 1, mark_col_ = 1;
};

inline std::string escape_name(const std::string& name)
{
    std::string out;
    for (char c : name) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

} // namespace detail

inline ParsedGame parse_pgsolver(std::string_view text)
{
    detail::Lexer lex(text);
    ParsedGame out;
    if (lex.accept_word("parity")) {
        out.header_max_id = lex.number("maximal node id");
        lex.expect(';', "';' after header");
    }

    struct Record {
        ExternalId id;
        Priority priority;
        Player owner;
        std::vector<std::pair<ExternalId, std::pair<std::size_t, std::size_t>>> succ;
        std::string name;
    };
    std::vector<Record> records;
    std::map<ExternalId, std::size_t> seen;
    while (!lex.at_end()) {
        Record r;
        r.id = lex.number("node id");
        if (seen.contains(r.id)) lex.fail_at_mark("duplicate node id " + std::to_string(r.id));
        ExternalId prio = lex.number("priority");
        if (prio > std::numeric_limits<Priority>::max()) lex.fail_at_mark("priority out of range");
        r.priority = static_cast<Priority>(prio);
        ExternalId owner = lex.number("owner");
        if (owner > 1) lex.fail_at_mark("owner " + std::to_string(owner) + " is not 0 or 1");
        r.owner = owner == 0 ? Player::P0 : Player::P1;
        if (lex.at_number()) {
            do {
                ExternalId s = lex.number("successor id");
                r.succ.push_back({s, lex.marked()});
            } while (lex.accept(','));
        }
        if (lex.peek() == '"') r.name = lex.quoted();
        lex.expect(';', "';' at end of node record");
        if (r.succ.empty()) {
            out.has_sinks = true;
            out.notes.push_back("node " + std::to_string(r.id) + " has no successors (sink extension)");
        }
        seen.emplace(r.id, records.size());
        records.push_back(std::move(r));
    }

    for (const auto& [id, _] : seen) out.ids.push_back(id);
    std::vector<ParityGame::Node> nodes(records.size());
    for (const auto& r : records) {
        auto& n = nodes[*out.find(r.id)];
        n.owner = r.owner;
        n.priority = r.priority;
        n.name = r.name;
        for (const auto& [s, where] : r.succ) {
            auto target = out.find(s);
            if (!target)
                throw ParseError(where.first, where.second,
                                 "successor " + std::to_string(s) + " of node " + std::to_string(r.id) +
                                     " is not defined");
            n.successors.push_back(*target);
        }
    }
    if (!records.empty()) out.start = *out.find(records.front().id);
    out.game = ParityGame(std::move(nodes));
    return out;
}

/// Canonical text; `ids` maps internal ids to file ids (identity if empty).
inline std::string write_pgsolver(const ParityGame& g, std::span<const ExternalId> ids = {})
{
    auto ext = [&](NodeId v) { return ids.empty() ? ExternalId{v} : ids[v]; };
    std::vector<NodeId> order(g.size());
    for (NodeId v = 0; v < g.size(); ++v) order[v] = v;
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return ext(a) < ext(b); });

    ExternalId max_id = 0;
    for (NodeId v = 0; v < g.size(); ++v) max_id = std::max(max_id, ext(v));
    std::ostringstream os;
    os << "parity " << max_id << ";\n";
    for (NodeId v : order) {
        os << ext(v) << ' ' << g.priority(v) << ' ' << index(g.owner(v)) << ' ';
        bool first = true;
        for (NodeId u : g.successors(v)) {
            if (!first) os << ',';
            os << ext(u);
            first = false;
        }
        if (!g.name(v).empty()) os << " \"" << detail::escape_name(g.name(v)) << '"';
        os << ";\n";
    }
    return os.str();
}

/// Decided nodes with their winner and, where the winner moves, its choice.
struct SolutionDocument {
    std::map<NodeId, Player> winner;
    std::array<Strategy, 2> strategy{Strategy(Player::P0), Strategy(Player::P1)};

    NodeSet region(Player p) const
    {
        NodeSet out;
        for (auto [v, w] : winner)
            if (w == p) out.insert(v);
        return out;
    }
};

inline SolutionDocument make_solution(const std::array<NodeSet, 2>& won, const std::array<Strategy, 2>& strategies)
{
    SolutionDocument doc;
    for (int p = 0; p < 2; ++p) {
        for (NodeId v : won[p]) {
            doc.winner[v] = player_of(p);
            if (auto u = strategies[p].find(v)) doc.strategy[p].set(v, *u);
        }
    }
    return doc;
}

inline std::string write_solution(const ParityGame& g, const SolutionDocument& sol, std::span<const ExternalId> ids = {})
{
    auto ext = [&](NodeId v) { return ids.empty() ? ExternalId{v} : ids[v]; };
    ExternalId max_id = 0;
    for (NodeId v = 0; v < g.size(); ++v) max_id = std::max(max_id, ext(v));
    std::vector<std::pair<ExternalId, NodeId>> order;
    for (auto [v, w] : sol.winner) order.emplace_back(ext(v), v);
    std::sort(order.begin(), order.end());

    std::ostringstream os;
    os << "paritysol " << max_id << ";\n";
    for (auto [e, v] : order) {
        Player w = sol.winner.at(v);
        os << e << ' ' << index(w);
        if (auto u = sol.strategy[index(w)].find(v)) os << ' ' << ext(*u);
        os << ";\n";
    }
    return os.str();
}

inline SolutionDocument parse_solution(std::string_view text, const ParsedGame& game)
{
    detail::Lexer lex(text);
    if (!lex.accept_word("paritysol")) lex.fail("expected 'paritysol' header");
    lex.number("maximal node id");
    lex.expect(';', "';' after header");
    SolutionDocument doc;
    while (!lex.at_end()) {
        ExternalId id = lex.number("node id");
        auto v = game.find(id);
        if (!v) lex.fail_at_mark("node " + std::to_string(id) + " is not in the game");
        if (doc.winner.contains(*v)) lex.fail_at_mark("node " + std::to_string(id) + " listed twice");
        ExternalId w = lex.number("winner");
        if (w > 1) lex.fail_at_mark("winner " + std::to_string(w) + " is not 0 or 1");
        Player p = w == 0 ? Player::P0 : Player::P1;
        doc.winner[*v] = p;
        if (lex.at_number()) {
            ExternalId t = lex.number("strategy target");
            auto u = game.find(t);
            if (!u) lex.fail_at_mark("target " + std::to_string(t) + " is not in the game");
            doc.strategy[index(p)].set(*v, *u);
        }
        lex.expect(';', "';' at end of solution record");
    }
    return doc;
}

/// Graphviz rendering: boxes for player 0, diamonds for player 1, label id:priority.
inline std::string write_dot(const ParityGame& g, const SolutionDocument* sol = nullptr,
                             std::span<const ExternalId> ids = {})
{
    auto ext = [&](NodeId v) { return ids.empty() ? ExternalId{v} : ids[v]; };
    std::ostringstream os;
    os << "digraph game {\n";
    for (NodeId v = 0; v < g.size(); ++v) {
        os << "  n" << ext(v) << " [shape=" << (g.owner(v) == Player::P0 ? "box" : "diamond") << ", label=\""
           << ext(v) << ':' << g.priority(v) << '"';
        if (sol) {
            auto it = sol->winner.find(v);
            if (it != sol->winner.end())
                os << ", style=filled, fillcolor=" << (it->second == Player::P0 ? "\"#a6d8f0\"" : "\"#f4b6b6\"");
        }
        os << "];\n";
    }
    for (NodeId v = 0; v < g.size(); ++v) {
        std::optional<NodeId> chosen;
        if (sol) {
            auto it = sol->winner.find(v);
            if (it != sol->winner.end() && it->second == g.owner(v)) chosen = sol->strategy[index(it->second)].find(v);
        }
        for (NodeId u : g.successors(v)) {
            os << "  n" << ext(v) << " -> n" << ext(u);
            if (chosen && *chosen == u) os << " [style=bold, penwidth=2]";
            os << ";\n";
        }
    }
    os << "}\n";
    return os.str();
}

} // namespace pg::io
