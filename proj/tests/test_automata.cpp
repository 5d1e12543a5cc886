#include <random>

#include "coordsynth/automata.hpp"
#include "coordsynth/ltl.hpp"
#include "doctest.h"
#include "formula_gen.hpp"

using namespace coordsynth;
using namespace coordsynth::automata;

namespace {

// Two states over {a0, b}; state 1 is entered on b and is green.
Nba infinitely_many_b() {
    Nba a;
    a.num_states = 2;
    a.initial = {0};
    a.green = {false, true};
    a.alphabet = {"a0", "b"};
    a.edges = {{0, 0, 0}, {0, 1, 1}, {1, 0, 0}, {1, 1, 1}};
    a.normalize();
    return a;
}

// Edge-green acceptance by brute force: unroll the lasso far enough that any
// run's recurring behavior appears in the loop copies.
bool edge_green_oracle(const EdgeGreenNba& a, const Lasso& w) {
    const auto& g = a.graph;
    const std::size_t n = g.num_states, loop = w.loop.size();
    // Nodes (state, loop position); a green step is a green edge or entering a green state.
    std::vector<std::vector<std::pair<std::size_t, bool>>> out(n * loop);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        for (std::size_t i = 0; i < loop; ++i)
            if (w.loop[i] == e.letter)
                out[e.src * loop + i].push_back({e.dst * loop + (i + 1) % loop, a.edge_green[k] || g.green[e.dst]});
    }
    std::vector<bool> start(n, false);
    for (auto s : g.initial) start[s] = true;
    for (ActionId l : w.prefix) {
        std::vector<bool> next(n, false);
        for (const auto& e : g.edges)
            if (start[e.src] && e.letter == l) next[e.dst] = true;
        start = next;
    }
    // Nodes that lie on a cycle with a green step: v reaches u via a green edge u->x and x reaches v.
    const std::size_t m = n * loop;
    std::vector<std::vector<bool>> reach(m, std::vector<bool>(m, false));
    for (std::size_t u = 0; u < m; ++u)
        for (auto [v, green] : out[u]) reach[u][v] = true;
    for (std::size_t k = 0; k < m; ++k)
        for (std::size_t i = 0; i < m; ++i)
            if (reach[i][k])
                for (std::size_t j = 0; j < m; ++j)
                    if (reach[k][j]) reach[i][j] = true;
    for (std::size_t s = 0; s < n; ++s) {
        if (!start[s]) continue;
        const std::size_t root = s * loop;
        for (std::size_t u = 0; u < m; ++u) {
            if (u != root && !reach[root][u]) continue;
            for (auto [v, green] : out[u])
                if (green && (v == u || reach[v][u])) return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("lasso acceptance of small automata") {
    auto a = infinitely_many_b();
    CHECK(nba_accepts_lasso(a, {{0}, {1}}));
    CHECK_FALSE(nba_accepts_lasso(a, {{}, {0}}));
    Nba empty;
    empty.alphabet = {"a0", "b"};
    CHECK_FALSE(nba_accepts_lasso(empty, {{}, {0}}));
    CHECK_THROWS_AS(nba_accepts_lasso(a, {{0}, {}}), Error);
}

TEST_CASE("co-Buchi reading complements the Buchi reading") {
    auto a = infinitely_many_b();
    CHECK(ucw_accepts_lasso(as_ucw(a), {{}, {0}}));
    CHECK_FALSE(ucw_accepts_lasso(as_ucw(a), {{0}, {1}}));
    Nba empty;
    empty.alphabet = {"a0", "b"};
    CHECK(ucw_accepts_lasso(as_ucw(empty), {{1}, {0, 1}}));

    auto formulas = formula_gen::by_size(4, 2);
    auto lassos = formula_gen::lassos(4, 2);
    std::size_t mismatches = 0;
    for (const auto& level : formulas)
        for (const auto& f : level) {
            auto nba = ltl::to_nba(f, {"a", "b"});
            auto ucw = as_ucw(nba);
            for (const auto& w : lassos) mismatches += ucw_accepts_lasso(ucw, w) == nba_accepts_lasso(nba, w);
        }
    CHECK(mismatches == 0);
}

TEST_CASE("pruning") {
    auto a = infinitely_many_b();
    Nba extra = a;
    extra.num_states = 3;
    extra.green.push_back(true);
    extra.edges.push_back({2, 0, 0});
    extra.normalize();
    CHECK(prune(extra).num_states == 2);

    Nba unreachable_green;
    unreachable_green.num_states = 2;
    unreachable_green.initial = {0};
    unreachable_green.green = {false, true};
    unreachable_green.alphabet = {"x"};
    unreachable_green.edges = {{0, 0, 0}, {1, 0, 1}};
    unreachable_green.normalize();
    CHECK(prune(unreachable_green).num_states == 0);

    // Rejecting sinks stay in co-Buchi automata.
    Ucw u;
    u.num_states = 3;
    u.initial = {0};
    u.green = {false, true, false};
    u.alphabet = {"x"};
    u.edges = {{0, 0, 1}, {1, 0, 1}};
    u.normalize();
    CHECK(prune(u).num_states == 2);
}

TEST_CASE("pruning keeps acceptance") {
    auto formulas = formula_gen::by_size(4, 2);
    auto lassos = formula_gen::lassos(3, 2);
    std::mt19937_64 rng(2);
    for (const auto& level : formulas)
        for (const auto& f : level) {
            if (rng() % 8) continue;
            auto a = ltl::to_nba(f, {"a", "b"});
            auto p = prune(a);
            CHECK(p.num_states <= a.num_states);
            for (const auto& w : lassos) CHECK(nba_accepts_lasso(a, w) == nba_accepts_lasso(p, w));
        }
}

TEST_CASE("green edges move into flagged states") {
    EdgeGreenNba one;
    one.graph.num_states = 1;
    one.graph.initial = {0};
    one.graph.green = {false};
    one.graph.alphabet = {"x"};
    one.graph.edges = {{0, 0, 0}};
    one.edge_green = {true};
    auto a = green_edges_to_states(one);
    CHECK(a.num_states == 2);
    CHECK(nba_accepts_lasso(a, {{}, {0}}));

    std::mt19937_64 rng(9);
    auto lassos = formula_gen::lassos(4, 2);
    for (int round = 0; round < 60; ++round) {
        EdgeGreenNba r;
        r.graph.num_states = 1 + rng() % 3;
        r.graph.initial = {0};
        r.graph.alphabet = {"a", "b"};
        for (std::size_t s = 0; s < r.graph.num_states; ++s) r.graph.green.push_back(rng() % 4 == 0);
        std::vector<std::pair<Edge, bool>> edges;
        for (State s = 0; s < r.graph.num_states; ++s)
            for (Letter l = 0; l < 2; ++l)
                for (State t = 0; t < r.graph.num_states; ++t)
                    if (rng() % 2) edges.push_back({{s, l, t}, rng() % 3 == 0});
        for (const auto& [e, g] : edges) {
            r.graph.edges.push_back(e);
            r.edge_green.push_back(g);
        }
        auto flat = green_edges_to_states(r);
        CHECK(flat.num_states <= 2 * r.graph.num_states);
        for (const auto& w : lassos) {
            CHECK(nba_accepts_lasso(flat, w) == edge_green_oracle(r, w));
            CHECK(edge_green_accepts_lasso(r, w) == edge_green_oracle(r, w));
        }
    }
}

TEST_CASE("finite-word membership") {
    const std::vector<std::string> ab{"a", "b"};
    CHECK(nfa_runs_word(universal_nfa(ab), Word{0, 1, 1}));
    CHECK(nfa_runs_word(universal_nfa(ab), Word{}));
    CHECK_FALSE(nfa_runs_word(empty_nfa(ab), Word{0}));
    FiniteNfa odd;
    odd.num_states = 2;
    odd.initial = {0};
    odd.green = {false, true};
    odd.alphabet = {"a"};
    odd.edges = {{0, 0, 1}, {1, 0, 0}};
    odd.normalize();
    CHECK(nfa_runs_word(odd, Word{0, 0, 0}));
    CHECK_FALSE(nfa_runs_word(odd, Word{0, 0}));
}

TEST_CASE("completion keeps the language") {
    auto a = infinitely_many_b();
    a.edges = {{0, 1, 1}, {1, 1, 1}};
    a.normalize();
    auto c = complete(a);
    CHECK(c.num_states == 3);
    for (const auto& w : formula_gen::lassos(4, 2)) CHECK(nba_accepts_lasso(a, w) == nba_accepts_lasso(c, w));
    for (State s = 0; s < c.num_states; ++s)
        for (Letter l = 0; l < 2; ++l) {
            bool has = false;
            for (const auto& e : c.edges) has = has || (e.src == s && e.letter == l);
            CHECK(has);
        }
}

TEST_CASE("serialization round trip") {
    auto a = ltl::to_nba(ltl::Formula::always(ltl::Formula::eventually(ltl::Formula::atom(1))), {"a", "b"});
    auto text = serialize(a);
    Graph back = deserialize(text);
    CHECK(back == static_cast<const Graph&>(a));
    CHECK(serialize(back) == text);
    CHECK_THROWS_AS(deserialize("states 1\ntrans 0 zz 0\n"), Error);
}
