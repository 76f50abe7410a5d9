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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <set>

#include "pg/pg.hpp"
#include "support/local_checks.hpp"
#include "support/path_oracle.hpp"
#include "support/random_games.hpp"

using namespace pg;

namespace {

struct Criterion {
    int number;
    const char* name;
    std::vector<std::string> failures;
    std::string summary;
    double seconds = 0;

    void fail(const std::string& what)
    {
        if (failures.size() < 10) failures.push_back(what);
        else if (failures.size() == 10) failures.push_back("...");
    }
};

std::size_t fuel_fired = 0;
std::size_t evaluate_calls_checked = 0;

std::vector<ParityGame> acceptance_games()
{
    std::vector<ParityGame> out;
    for (std::uint64_t k = 0; k < 500; ++k) {
        gen::ClusterParams p;
        p.total_nodes = 4 + k % 57;
        p.cluster_size = {3, 15};
        p.intra_degree = {1, 3};
        p.inter_edges_per_cluster = 2;
        p.seed = 1000 + k;
        out.push_back(gen::gen_clustered(p));
    }
    return out;
}

std::vector<ParityGame> small_games()
{
    std::vector<ParityGame> out;
    std::mt19937_64 rng(77);
    for (std::uint64_t k = 0; k < 200; ++k) {
        if (k % 2 == 0) {
            gen::ClusterParams p;
            p.total_nodes = 2 + k % 8;
            p.cluster_size = {2, 5};
            p.intra_degree = {1, 2};
            p.seed = 5000 + k;
            out.push_back(gen::gen_clustered(p));
        } else {
            out.push_back(pgtest::random_game(rng, 1 + k % 9, 3, 6, 0.15));
        }
    }
    return out;
}

std::string game_tag(std::size_t i) { return "game " + std::to_string(i); }

void check_global(const ParityGame& g, std::size_t i, Criterion& c1, Criterion& c3, Criterion& c5,
                  const oracle::Solution& truth)
{
    for (Player q : {Player::P0, Player::P1}) {
        GlobalOptions opt;
        opt.record_valuations = true;
        GlobalSolution s;
        try {
            s = solve_global(g, q, all_max_policy(), opt);
        } catch (const std::exception& e) {
            c1.fail(game_tag(i) + ": " + e.what());
            continue;
        }
        for (int p = 0; p < 2; ++p)
            if (s.won[p] != truth.region(player_of(p))) c1.fail(game_tag(i) + " q=" + std::to_string(index(q)));
        auto a = verify_winning_strategy(g, q, s.won[index(q)], s.strategy);
        auto b = verify_winning_strategy(g, opponent(q), s.won[index(opponent(q))], s.counter);
        if (!a) c3.fail(game_tag(i) + " global strategy: " + a.diagnostic);
        if (!b) c3.fail(game_tag(i) + " global counter strategy: " + b.diagnostic);

        for (std::size_t t = 1; t < s.valuations.size(); ++t) {
            const auto& x = s.valuations[t - 1];
            const auto& y = s.valuations[t];
            bool strict = false;
            for (std::size_t v = 0; v < x.size(); ++v) {
                auto cmp = compare(q, x[v], y[v]);
                if (cmp > 0) c5.fail(game_tag(i) + ": node " + std::to_string(v) + " got worse");
                strict = strict || cmp < 0;
            }
            if (!strict) c5.fail(game_tag(i) + ": iteration " + std::to_string(t) + " did not improve");
            for (std::size_t u = 0; u + 1 < t; ++u)
                if (s.valuations[u] == y) c5.fail(game_tag(i) + ": valuation repeated");
        }
    }
}

void criterion_global(Criterion& c1, Criterion& c3, Criterion& c5, const std::vector<ParityGame>& games)
{
    for (std::size_t i = 0; i < games.size(); ++i)
        check_global(games[i], i, c1, c3, c5, oracle::solve_recursive(games[i]));

    auto small = small_games();
    for (std::size_t i = 0; i < small.size(); ++i) {
        auto exh = oracle::solve_exhaustive(small[i]);
        auto rec = oracle::solve_recursive(small[i]);
        if (exh.winner != rec.winner) c1.fail("small " + game_tag(i) + ": oracles disagree");
        check_global(small[i], 10000 + i, c1, c3, c5, exh);
    }
    c1.summary = std::to_string(games.size()) + " clustered games x 2 players vs recursive, " +
                 std::to_string(small.size()) + " small games vs exhaustive";
}

void criterion_local(Criterion& c2, Criterion& c3, const std::vector<ParityGame>& games)
{
    std::size_t solves = 0;
    for (std::size_t i = 0; i < games.size(); ++i) {
        const auto& g = games[i];
        auto truth = oracle::solve_recursive(g);
        NodeId n = static_cast<NodeId>(g.size());
        for (NodeId start : {NodeId{0}, n - 1, n / 2}) {
            for (int pol = 0; pol < 2; ++pol) {
                LocalConfig cfg;
                cfg.expand = pol ? bfs_expansion_policy(2) : random_expansion_policy(i * 7 + start);
                ++solves;
                LocalSolution s;
                try {
                    s = solve_local(g, start, cfg);
                } catch (const FuelExhausted& e) {
                    ++fuel_fired;
                    c2.fail(game_tag(i) + ": " + e.what());
                    continue;
                } catch (const std::exception& e) {
                    c2.fail(game_tag(i) + ": " + e.what());
                    continue;
                }
                std::string tag = game_tag(i) + " start " + std::to_string(start) + " policy " + std::to_string(pol);
                if (s.winner != truth.winner[start]) c2.fail(tag + ": wrong winner");
                for (int p = 0; p < 2; ++p) {
                    for (NodeId v : s.won[p])
                        if (truth.winner[v] != player_of(p)) c2.fail(tag + ": node " + std::to_string(v) + " misassigned");
                    auto r = verify_winning_strategy(g, player_of(p), s.won[p], s.strategy[p]);
                    if (!r) c3.fail(tag + " local strategy: " + r.diagnostic);
                }
            }
        }
    }
    c2.summary = std::to_string(solves) + " local solves (3 starts x random/bfs expansion)";
}

void criterion_invariants(Criterion& c4)
{
    std::size_t calls = 0;
    for (std::uint64_t k = 0; k < 50; ++k) {
        gen::ClusterParams p;
        p.total_nodes = 10 + (k * 7) % 51;
        p.cluster_size = {3, 12};
        p.intra_degree = {1, 3};
        p.seed = 9000 + k;
        auto g = gen::gen_clustered(p);
        NodeId start = static_cast<NodeId>((k * 13) % g.size());
        ExpansionPolicy pol = k % 2 ? bfs_expansion_policy(1 + k % 3) : random_expansion_policy(k);
        auto run = pgtest::instrumented_solve(g, start, pol, k % 3 == 0 ? Player::P1 : Player::P0);
        calls += run.calls;
        evaluate_calls_checked += run.evaluate_calls;
        for (const auto& f : run.failures) {
            if (f.rfind("fuel", 0) == 0) ++fuel_fired;
            c4.fail(game_tag(k) + ": " + f);
        }
        if (!run.winner || *run.winner != oracle::solve_recursive(g).winner[start]) c4.fail(game_tag(k) + ": wrong winner");

        // the solver's own checking mode must agree
        LocalConfig cfg;
        cfg.options.check_invariants = true;
        cfg.expand = pol;
        try {
            solve_local(g, start, cfg);
        } catch (const std::exception& e) {
            c4.fail(game_tag(k) + " checked mode: " + e.what());
        }
    }
    c4.summary = "50 instrumented solves, " + std::to_string(calls) + " Winning/Expand/Evaluate calls checked";
}

void criterion_path_oracle(Criterion& c6)
{
    std::mt19937_64 rng(606);
    std::size_t cases = 0;
    for (int i = 0; i < 100; ++i) {
        auto g = pgtest::random_game(rng, 1 + i % 7, 3, 5, 0.15);
        for (int k = 0; k < 5; ++k) {
            Player q = k % 2 ? Player::P1 : Player::P0;
            auto s = pgtest::random_strategy(rng, g, q);
            ++cases;
            if (evaluate_strategy(g, q, s) != pgtest::path_valuation(g, q, s))
                c6.fail(game_tag(i) + " strategy " + std::to_string(k));
        }
    }
    c6.summary = std::to_string(cases) + " (game, strategy) pairs";
}

void criterion_evaluate_postcondition(Criterion& c7)
{
    if (evaluate_calls_checked == 0) c7.fail("no evaluate call was observed");
    if (fuel_fired) c7.fail("fuel fired " + std::to_string(fuel_fired) + " times");
    c7.summary = std::to_string(evaluate_calls_checked) + " evaluate calls with empty change set afterwards; fuel fired " +
                 std::to_string(fuel_fired) + " times in all local runs";
}

double median(std::vector<double> xs)
{
    std::sort(xs.begin(), xs.end());
    std::size_t m = xs.size() / 2;
    return xs.size() % 2 ? xs[m] : (xs[m - 1] + xs[m]) / 2;
}

void criterion_locality(Criterion& c8)
{
    const std::size_t n = 10000;
    std::vector<double> chained, clustered;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto [g, start] = gen::gen_chained_clusters_for_locality(n, seed);
        try {
            auto s = solve_local(g, start);
            if (s.winner != Player::P0) c8.fail("chained seed " + std::to_string(seed) + ": wrong winner");
            chained.push_back(static_cast<double>(s.stats.visited));
        } catch (const FuelExhausted&) {
            ++fuel_fired;
            c8.fail("chained seed " + std::to_string(seed) + ": fuel");
        }

        gen::ClusterParams p;
        p.total_nodes = n;
        p.seed = seed;
        auto h = gen::gen_clustered(p);
        try {
            auto s = solve_local(h, 0);
            clustered.push_back(static_cast<double>(s.stats.visited));
        } catch (const FuelExhausted&) {
            ++fuel_fired;
            c8.fail("clustered seed " + std::to_string(seed) + ": fuel");
        }
    }
    if (chained.empty() || clustered.empty()) return;
    double mc = median(chained), mu = median(clustered);
    double mean_frac = 0;
    for (double x : clustered) mean_frac += x / n;
    mean_frac /= static_cast<double>(clustered.size());
    if (mc >= 0.10 * n) c8.fail("chained median visited " + std::to_string(mc) + " is not below 10% of n");
    if (mu >= static_cast<double>(n)) c8.fail("clustered median visited equals |V|");
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "n=%zu, chained median visited %.0f (%.2f%%), clustered median visited %.0f, mean fraction %.4f",
                  n, mc, 100.0 * mc / n, mu, mean_frac);
    c8.summary = buf;
}

void criterion_round_trip(Criterion& c9)
{
    std::mt19937_64 rng(909);
    for (std::uint64_t k = 0; k < 200; ++k) {
        ParityGame g;
        if (k % 2) {
            gen::ClusterParams p;
            p.total_nodes = 1 + k * 3;
            p.seed = k;
            g = gen::gen_clustered(p);
        } else {
            g = pgtest::random_game(rng, 1 + k % 50, 4, 12, 0.1);
        }
        std::string text = io::write_pgsolver(g);
        auto p = io::parse_pgsolver(text);
        if (io::write_pgsolver(p.game, p.ids) != text) c9.fail(game_tag(k) + ": text changed");
        bool same = p.game.size() == g.size();
        for (NodeId v = 0; same && v < g.size(); ++v)
            same = p.game.owner(v) == g.owner(v) && p.game.priority(v) == g.priority(v) &&
                   std::ranges::equal(p.game.successors(v), g.successors(v));
        if (!same) c9.fail(game_tag(k) + ": structure changed");
    }

    struct Malformed {
        const char* text;
        std::size_t line, column;
    };
    const Malformed bad[] = {
        {"parity 1;\n0 2 0 1;\n1 1 3 0;\n", 3, 5},  // owner out of range
        {"0 1 0 0;\n0 2 1 0;\n", 2, 1},             // duplicate id
        {"0 1 0 0,9;\n", 1, 9},                     // undefined successor
        {"0 1 0 1", 1, 8},                          // missing ';'
        {"0 x 0 1;", 1, 3},                         // non-numeric priority
    };
    for (const auto& m : bad) {
        try {
            io::parse_pgsolver(m.text);
            c9.fail(std::string("accepted: ") + m.text);
        } catch (const io::ParseError& e) {
            if (e.line() != m.line || e.column() != m.column)
                c9.fail(std::string("position ") + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                        " for: " + m.text);
        }
    }
    c9.summary = "200 games round-tripped, " + std::to_string(std::size(bad)) + " malformed inputs rejected";
}

void criterion_determinism(Criterion& c10)
{
    for (std::uint64_t k = 0; k < 40; ++k) {
        gen::ClusterParams p;
        p.total_nodes = 20 + k * 10;
        p.seed = 300 + k;
        auto g = gen::gen_clustered(p);
        auto run = [&](trace::Mode mode) {
            trace::TraceRequest req;
            req.mode = mode;
            req.player = k % 2 ? Player::P1 : Player::P0;
            req.global_policy = single_switch_policy(k);
            req.local.expand = random_expansion_policy(k);
            req.start = static_cast<NodeId>(k % g.size());
            return trace::trace_solve(g, req);
        };
        for (auto mode : {trace::Mode::global, trace::Mode::local}) {
            auto a = run(mode), b = run(mode);
            if (a.events != b.events) c10.fail(game_tag(k) + ": event streams differ");
            if (mode == trace::Mode::global) {
                const auto& x = std::get<GlobalSolution>(a.solution);
                const auto& y = std::get<GlobalSolution>(b.solution);
                if (x.won != y.won || x.strategy.moves != y.strategy.moves || x.counter.moves != y.counter.moves ||
                    x.iterations != y.iterations)
                    c10.fail(game_tag(k) + ": global solutions differ");
            } else {
                const auto& x = std::get<LocalSolution>(a.solution);
                const auto& y = std::get<LocalSolution>(b.solution);
                if (x.won != y.won || x.strategy[0].moves != y.strategy[0].moves ||
                    x.strategy[1].moves != y.strategy[1].moves || !(x.stats == y.stats))
                    c10.fail(game_tag(k) + ": local solutions or visited counts differ");
            }
        }
    }
    c10.summary = "40 games, global and local, two runs each";
}

} // namespace

int main()
{
    std::vector<Criterion> cs{{1, "oracle equivalence (global)", {}, {}},
                              {2, "oracle equivalence (local)", {}, {}},
                              {3, "strategy soundness", {}, {}},
                              {4, "invariant suite", {}, {}},
                              {5, "monotonicity", {}, {}},
                              {6, "path-oracle agreement", {}, {}},
                              {7, "evaluate postcondition", {}, {}},
                              {8, "locality trend", {}, {}},
                              {9, "round-trip", {}, {}},
                              {10, "determinism", {}, {}}};
    auto& c = cs;
    auto timed = [](auto&& f, std::initializer_list<Criterion*> on) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        for (auto* x : on) x->seconds += s;
    };

    auto games = acceptance_games();
    timed([&] { criterion_global(c[0], c[2], c[4], games); }, {&c[0]});
    timed([&] { criterion_local(c[1], c[2], games); }, {&c[1]});
    c[2].summary = "every strategy from criteria 1 and 2 verified on its region";
    c[4].summary = "per-iteration valuations of every global solve in criterion 1";
    timed([&] { criterion_invariants(c[3]); }, {&c[3]});
    timed([&] { criterion_path_oracle(c[5]); }, {&c[5]});
    timed([&] { criterion_locality(c[7]); }, {&c[7]});
    timed([&] { criterion_round_trip(c[8]); }, {&c[8]});
    timed([&] { criterion_determinism(c[9]); }, {&c[9]});
    criterion_evaluate_postcondition(c[6]);

    bool ok = true;
    for (const auto& x : cs) {
        bool pass = x.failures.empty();
        ok = ok && pass;
        std::printf("[%s] %2d %s: %s", pass ? "PASS" : "FAIL", x.number, x.name, x.summary.c_str());
        if (x.seconds > 0) std::printf(" (%.1f s)", x.seconds);
        std::printf("\n");
        for (const auto& f : x.failures) std::printf("         %s\n", f.c_str());
    }
    return ok ? 0 : 1;
}
