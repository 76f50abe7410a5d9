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

#include <CLI11.hpp>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pg/pg.hpp"

using namespace pg;

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kInputError = 2;
constexpr int kInternalError = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path)
{
    std::ostringstream os;
    if (path == "-") {
        os << std::cin.rdbuf();
        return os.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open " + path);
    os << in.rdbuf();
    return os.str();
}

io::ParsedGame load_game(const std::string& path)
{
    std::string text = read_input(path);
    try {
        return io::parse_pgsolver(text);
    } catch (const io::ParseError& e) {
        throw InputError((path == "-" ? std::string("<stdin>") : path) + ":" + e.what());
    }
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path);
    out << text;
}

Player parse_player(int p)
{
    if (p != 0 && p != 1) throw InputError("player must be 0 or 1");
    return player_of(p);
}

/// "name" or "name:arg"
std::pair<std::string, std::string> split_choice(const std::string& choice)
{
    auto colon = choice.find(':');
    if (colon == std::string::npos) return {choice, {}};
    return {choice.substr(0, colon), choice.substr(colon + 1)};
}

std::uint64_t parse_uint(const std::string& text, const std::string& what)
{
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
        throw InputError("bad " + what + ": '" + text + "'");
    return v;
}

ImprovementPolicy make_global_policy(const std::string& choice)
{
    auto [name, arg] = split_choice(choice);
    if (name == "all-max" && arg.empty()) return all_max_policy();
    if (name == "single") return single_switch_policy(arg.empty() ? 0 : parse_uint(arg, "policy seed"));
    throw InputError("unknown policy '" + choice + "' (all-max | single:<seed>)");
}

ExpansionPolicy make_expansion_policy(const std::string& choice)
{
    auto [name, arg] = split_choice(choice);
    if (name == "random") return random_expansion_policy(arg.empty() ? 0 : parse_uint(arg, "expansion seed"));
    if (name == "bfs") {
        std::uint64_t k = arg.empty() ? 1 : parse_uint(arg, "bfs width");
        if (k == 0) throw InputError("bfs width must be positive");
        return bfs_expansion_policy(k);
    }
    throw InputError("unknown expansion policy '" + choice + "' (random:<seed> | bfs:<k>)");
}

struct SolveArgs {
    std::string file = "-";
    std::string mode = "local";
    int player = 0;
    std::optional<io::ExternalId> start;
    std::string policy = "all-max";
    std::string expansion = "random:0";
    int first_player = 0;
    bool check_invariants = false;
    bool stats = false;
    std::string dot;
    std::string trace;
    std::string trace_format = "json";
};

int run_solve(const SolveArgs& a)
{
    auto parsed = load_game(a.file);
    const ParityGame& g = parsed.game;
    if (g.empty()) throw InputError("game has no nodes");
    auto bad = validate(g);
    if (!bad.empty()) throw InputError("invalid game: node " + std::to_string(bad.front().node) + ": " + bad.front().detail);

    std::vector<TraceEvent> events;
    EventSink sink;
    if (!a.trace.empty()) sink = [&](const TraceEvent& e) { events.push_back(e); };

    io::SolutionDocument doc;
    std::ostringstream stats;
    auto t0 = std::chrono::steady_clock::now();
    if (a.mode == "global") {
        Player q = parse_player(a.player);
        GlobalOptions opt;
        opt.events = sink;
        auto sol = solve_global(g, q, make_global_policy(a.policy), opt);
        std::array<Strategy, 2> strategies;
        strategies[index(q)] = sol.strategy;
        strategies[index(opponent(q))] = sol.counter;
        doc = io::make_solution(sol.won, strategies);
        stats << "iterations: " << sol.iterations << "\n"
              << "evaluation-steps: " << sol.evaluation_steps << "\n";
    } else if (a.mode == "local") {
        NodeId start = parsed.start;
        if (a.start) {
            auto v = parsed.find(*a.start);
            if (!v) throw InputError("start node " + std::to_string(*a.start) + " is not in the game");
            start = *v;
        }
        LocalConfig cfg;
        cfg.improve = local_all_max_policy();
        cfg.expand = make_expansion_policy(a.expansion);
        cfg.options.first_player = parse_player(a.first_player);
        cfg.options.check_invariants = a.check_invariants;
        cfg.options.events = sink;
        auto sol = solve_local(g, start, cfg);
        doc = io::make_solution(sol.won, sol.strategy);
        stats << "winner: " << index(sol.winner) << "\n"
              << "visited: " << sol.stats.visited << "\n"
              << "expansions: " << sol.stats.expansions << "\n"
              << "improvements: " << sol.stats.improvements << "\n"
              << "evaluation-steps: " << sol.stats.evaluation_steps << "\n";
    } else {
        throw InputError("unknown mode '" + a.mode + "' (global | local)");
    }
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    std::cout << io::write_solution(g, doc, parsed.ids);
    if (a.stats) std::cerr << stats.str() << "time-ms: " << ms << "\n";
    if (!a.dot.empty()) write_file(a.dot, io::write_dot(g, &doc, parsed.ids));
    if (!a.trace.empty()) {
        std::ostringstream os;
        for (const auto& e : events) os << (a.trace_format == "text" ? trace::to_text(e) : trace::to_line(e)) << '\n';
        write_file(a.trace, os.str());
    }
    return kOk;
}

struct GenArgs {
    std::size_t nodes = 1000;
    std::uint64_t seed = 0;
    std::vector<std::size_t> cluster{10, 100};
    std::vector<std::size_t> degree{1, 4};
    std::size_t inter = 2;
    std::vector<std::size_t> priorities;
    double bias = 0.5;
    std::string fixture;
};

int run_gen_clustered(const GenArgs& a)
{
    gen::ClusterParams p;
    p.total_nodes = a.nodes;
    p.seed = a.seed;
    p.cluster_size = {a.cluster.at(0), a.cluster.at(1)};
    p.intra_degree = {a.degree.at(0), a.degree.at(1)};
    p.inter_edges_per_cluster = a.inter;
    if (!a.priorities.empty()) p.priorities = {a.priorities.at(0), a.priorities.at(1)};
    p.owner_bias = a.bias;
    try {
        std::cout << io::write_pgsolver(gen::gen_clustered(p));
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    return kOk;
}

int run_gen_fixture(const GenArgs& a)
{
    auto [name, arg] = split_choice(a.fixture);
    ParityGame g;
    if (name == "g1" && arg.empty())
        g = gen::gen_cycle_pair();
    else if (name == "g2" && arg.empty())
        g = gen::gen_two_cycle_choice();
    else if (name == "g3" && arg.empty())
        g = gen::gen_sink(5, Player::P0);
    else if (name == "locality") {
        std::uint64_t n = parse_uint(arg, "locality size");
        if (n < 2) throw InputError("locality size must be at least 2");
        g = gen::gen_chained_clusters_for_locality(n, a.seed).game;
    } else
        throw InputError("unknown fixture '" + a.fixture + "' (g1 | g2 | g3 | locality:<n>)");
    std::cout << io::write_pgsolver(g);
    return kOk;
}

int run_verify(const std::string& game_path, const std::string& sol_path)
{
    auto parsed = load_game(game_path);
    io::SolutionDocument doc;
    try {
        doc = io::parse_solution(read_input(sol_path), parsed);
    } catch (const io::ParseError& e) {
        throw InputError(sol_path + ":" + e.what());
    }
    bool ok = true;
    for (int p = 0; p < 2; ++p) {
        // strategy entries for nodes the player does not own carry no meaning
        Strategy s(player_of(p));
        for (auto [v, u] : doc.strategy[p].moves)
            if (parsed.game.owner(v) == player_of(p)) s.set(v, u);
        auto r = verify_winning_strategy(parsed.game, player_of(p), doc.region(player_of(p)), s);
        if (!r) {
            std::cerr << "player " << p << ": " << r.diagnostic << " (internal ids)\n";
            ok = false;
        }
    }
    if (ok) std::cout << "ok\n";
    return ok ? kOk : kVerifyFailed;
}

int run_convert(const std::string& path, bool dot, const std::string& solution)
{
    auto parsed = load_game(path);
    if (!dot) {
        std::cout << io::write_pgsolver(parsed.game, parsed.ids);
        return kOk;
    }
    std::optional<io::SolutionDocument> doc;
    if (!solution.empty()) {
        try {
            doc = io::parse_solution(read_input(solution), parsed);
        } catch (const io::ParseError& e) {
            throw InputError(solution + ":" + e.what());
        }
    }
    std::cout << io::write_dot(parsed.game, doc ? &*doc : nullptr, parsed.ids);
    return kOk;
}

struct BenchArgs {
    std::vector<std::size_t> sizes{1000};
    std::size_t runs = 10;
    std::uint64_t seed = 0;
    bool csv = false;
};

int run_bench(const BenchArgs& a)
{
    if (a.runs == 0) throw InputError("--runs must be positive");
    if (a.csv)
        std::cout << "size,global_ms,local_visited_mean,local_ms\n";
    else
        std::cout << "size  runs  global_ms  local_ms  visited_mean  visited_median\n";
    for (std::size_t size : a.sizes) {
        if (size == 0) throw InputError("sizes must be positive");
        double global_ms = 0, local_ms = 0;
        std::vector<std::size_t> visited;
        for (std::size_t r = 0; r < a.runs; ++r) {
            gen::ClusterParams p;
            p.total_nodes = size;
            p.seed = a.seed * 1000003ULL + r;
            ParityGame g = gen::gen_clustered(p);

            auto t0 = std::chrono::steady_clock::now();
            solve_global(g, Player::P0, all_max_policy());
            auto t1 = std::chrono::steady_clock::now();
            LocalConfig cfg;
            cfg.expand = random_expansion_policy(p.seed);
            auto sol = solve_local(g, 0, cfg);
            auto t2 = std::chrono::steady_clock::now();

            global_ms += std::chrono::duration<double, std::milli>(t1 - t0).count();
            local_ms += std::chrono::duration<double, std::milli>(t2 - t1).count();
            visited.push_back(sol.stats.visited);
        }
        double runs = static_cast<double>(a.runs);
        double mean = 0;
        for (auto v : visited) mean += static_cast<double>(v);
        mean /= runs;
        std::sort(visited.begin(), visited.end());
        double median = visited.size() % 2 ? static_cast<double>(visited[visited.size() / 2])
                                           : (visited[visited.size() / 2 - 1] + visited[visited.size() / 2]) / 2.0;
        char line[256];
        if (a.csv)
            std::snprintf(line, sizeof line, "%zu,%.3f,%.2f,%.3f\n", size, global_ms / runs, mean, local_ms / runs);
        else
            std::snprintf(line, sizeof line, "%-5zu %5zu %10.3f %9.3f %13.2f %15.1f\n", size, a.runs,
                          global_ms / runs, local_ms / runs, mean, median);
        std::cout << line;
    }
    return kOk;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"pgsi: parity games by global and local strategy improvement"};
    app.require_subcommand(1);

    SolveArgs solve;
    auto* s = app.add_subcommand("solve", "solve a game, print the solution");
    s->add_option("file", solve.file, "game in PGSolver format, - for stdin")->capture_default_str();
    s->add_option("--mode", solve.mode, "global | local")->capture_default_str();
    s->add_option("--player", solve.player, "player to iterate for (global)")->capture_default_str();
    s->add_option("--start", solve.start, "start node id (local; default: first node)");
    s->add_option("--policy", solve.policy, "all-max | single:<seed> (global)")->capture_default_str();
    s->add_option("--expansion", solve.expansion, "random:<seed> | bfs:<k> (local)")->capture_default_str();
    s->add_option("--first-player", solve.first_player, "player the local loop starts with")->capture_default_str();
    s->add_flag("--check-invariants", solve.check_invariants, "check all invariants after every step");
    s->add_flag("--stats", solve.stats, "print statistics to stderr");
    s->add_option("--dot", solve.dot, "write a DOT rendering of the solution");
    s->add_option("--trace", solve.trace, "write the event trace");
    s->add_option("--trace-format", solve.trace_format, "json | text")
        ->check(CLI::IsMember({"json", "text"}))
        ->capture_default_str();

    GenArgs gen_args;
    auto* g = app.add_subcommand("gen", "generate games");
    g->require_subcommand(1);
    auto* gc = g->add_subcommand("clustered", "random clustered game");
    gc->add_option("--nodes", gen_args.nodes)->capture_default_str();
    gc->add_option("--seed", gen_args.seed)->capture_default_str();
    gc->add_option("--cluster-size", gen_args.cluster, "min max")->expected(2);
    gc->add_option("--degree", gen_args.degree, "min max intra-cluster out-degree")->expected(2);
    gc->add_option("--inter", gen_args.inter, "inter-cluster edges per cluster")->capture_default_str();
    gc->add_option("--priorities", gen_args.priorities, "min max")->expected(2);
    gc->add_option("--bias", gen_args.bias, "probability of a player-0 node")->capture_default_str();
    auto* gf = g->add_subcommand("fixture", "named fixture");
    gf->add_option("name", gen_args.fixture, "g1 | g2 | g3 | locality:<n>")->required();
    gf->add_option("--seed", gen_args.seed)->capture_default_str();

    std::string verify_game, verify_solution;
    auto* v = app.add_subcommand("verify", "check a solution's strategies");
    v->add_option("--game", verify_game)->required();
    v->add_option("--solution", verify_solution)->required();

    std::string convert_file = "-", convert_solution;
    bool convert_dot = false;
    auto* c = app.add_subcommand("convert", "re-emit a game");
    c->add_option("file", convert_file)->capture_default_str();
    c->add_flag("--dot", convert_dot, "emit DOT instead of PGSolver text");
    c->add_option("--solution", convert_solution, "solution to color the DOT output with");

    BenchArgs bench;
    auto* b = app.add_subcommand("bench", "global vs local on clustered games");
    b->add_option("--sizes", bench.sizes)->delimiter(',')->capture_default_str();
    b->add_option("--runs", bench.runs)->capture_default_str();
    b->add_option("--seed", bench.seed)->capture_default_str();
    b->add_flag("--csv", bench.csv);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (s->parsed()) return run_solve(solve);
        if (gc->parsed()) return run_gen_clustered(gen_args);
        if (gf->parsed()) return run_gen_fixture(gen_args);
        if (v->parsed()) return run_verify(verify_game, verify_solution);
        if (c->parsed()) return run_convert(convert_file, convert_dot, convert_solution);
        if (b->parsed()) return run_bench(bench);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const InvariantFailure& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        for (const auto& f : e.violations()) std::cerr << "  " << describe(f) << "\n";
        return kInternalError;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kInternalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
