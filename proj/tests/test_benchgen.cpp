#include <algorithm>
#include <random>

#include "coordsynth/ltl.hpp"
#include "coordsynth/verify.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace coordsynth;

namespace {

automata::FiniteNfa nfa(std::size_t states, std::vector<automata::State> accepting,
                        std::vector<automata::Edge> edges) {
    automata::FiniteNfa a;
    a.num_states = states;
    a.initial = {0};
    a.green.assign(states, false);
    for (auto s : accepting) a.green[s] = true;
    a.alphabet = {"a", "b"};
    a.edges = std::move(edges);
    a.normalize();
    return a;
}

// All words over two letters up to the length, shortest first.
std::vector<Word> words_up_to(std::size_t length) {
    std::vector<Word> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].size() < length)
            for (ActionId l = 0; l < 2; ++l) {
                Word w = out[i];
                w.push_back(l);
                out.push_back(w);
            }
    return out;
}

bool realizable_by_enumeration(const automata::FiniteNfa& a, std::size_t max_states) {
    auto l = fixtures::load(benchgen::universality_instance(a));
    verify::Checker checker(l.env, l.model.spec, l.model.actions);
    return !verify::enumerate_coordinators(checker, {.max_states = max_states}).exhausted();
}

std::size_t enumeration_bound(const automata::FiniteNfa& a) {
    auto w = benchgen::shortest_rejected(a);
    return w ? w->size() + 2 : 3;
}

}  // namespace

TEST_CASE("example environments") {
    auto ex1 = fixtures::load(benchgen::example(1));
    CHECK(ex1.env.num_states() == 3);
    CHECK(ex1.model.spec.liveness == ltl::parse_ltl("F G !b", ex1.model.actions));

    auto ex0 = fixtures::load(benchgen::example(0));
    const auto a1 = fixtures::act(ex0, "a1");
    auto after = csp::simulate(ex0.env, std::vector<ActionId>{a1});
    REQUIRE(after.size() == 1);
    CHECK(ex0.env.successors()[after[0]].empty());

    auto ex4 = fixtures::load(benchgen::example(4));
    CHECK_FALSE(csp::is_deterministic(ex4.env));
    CHECK(csp::simulate(ex4.env, std::vector<ActionId>{fixtures::act(ex4, "a0")}).size() == 2);

    CHECK_THROWS_AS(benchgen::example(6), Error);
    CHECK_THROWS_AS(benchgen::example(-1), Error);
}

TEST_CASE("arbiter sizes") {
    auto two = fixtures::load(benchgen::arbiter(2));
    CHECK(two.env.public_actions.size() == 6);
    CHECK(two.env.num_states() == 9);
    CHECK(model::build_network(two.model).sync_sets == std::vector<std::vector<ActionId>>{{}});
    CHECK(fixtures::load(benchgen::arbiter(3)).env.num_states() == 27);
    CHECK(fixtures::load(benchgen::arbiter(4)).env.num_states() == 81);
    CHECK_THROWS_AS(benchgen::arbiter(1), Error);
}

TEST_CASE("thermostat levels") {
    for (int level = 1; level <= 3; ++level) {
        auto l = fixtures::load(benchgen::thermostat(level));
        CHECK_FALSE(l.env.private_actions.empty());
        CHECK(l.model.actions.find("JustRight"));
    }
    CHECK_THROWS_AS(benchgen::thermostat(0), Error);
    CHECK_THROWS_AS(benchgen::thermostat(4), Error);
}

TEST_CASE("copy relays") {
    auto sync = fixtures::load(benchgen::copy_relay(true));
    auto async = fixtures::load(benchgen::copy_relay(false));
    CHECK_FALSE(sync.model.actions.find("h0"));
    REQUIRE(async.model.actions.find("h0"));
    // The asynchronous input can flip its value unobserved or through a read.
    const auto r0 = fixtures::act(async, "r0"), h0 = fixtures::act(async, "h0");
    const auto network = model::build_network(async.model);
    const auto& x0 = network.agents.front();
    std::vector<StateId> by_read, by_hidden;
    for (const auto& t : x0.transitions) {
        if (x0.state_names[t.from] != "X0") continue;
        if (t.action == r0) by_read.push_back(t.to);
        if (t.action == h0) by_hidden.push_back(t.to);
    }
    CHECK(by_read.size() == 2);
    CHECK(by_hidden.size() == 2);

    // Writes must alternate with reads and copy the last value read.
    auto act = [&](const char* n) { return fixtures::act(sync, n); };
    const auto& live = sync.model.spec.liveness;
    CHECK(ltl::eval_lasso(live, {{act("tau"), act("w0")}, {act("r0"), act("w0")}}));
    CHECK(ltl::eval_lasso(live, {{act("tau"), act("w1")}, {act("r0"), act("w0"), act("r1"), act("w1")}}));
    CHECK_FALSE(ltl::eval_lasso(live, {{act("tau"), act("w0")}, {act("r0"), act("w1")}}));
    CHECK_FALSE(ltl::eval_lasso(live, {{act("tau"), act("w0")}, {act("w1"), act("w0"), act("r0"), act("w0")}}));
    CHECK_FALSE(ltl::eval_lasso(live, {{act("tau"), act("w0")}, {act("w0")}}));
}

TEST_CASE("generators by name") {
    for (const auto& name : benchgen::generator_names()) {
        const int param = name == "example" ? 3 : 2;
        CHECK_NOTHROW(model::parse_model(benchgen::generate(name, param, 1)));
    }
    CHECK(benchgen::generate("arbiter", 3, 0) == benchgen::arbiter(3));
    CHECK(benchgen::generate("universality", 3, 9) == benchgen::generate("universality", 3, 9));
    CHECK_THROWS_AS(benchgen::generate("nonsense", 1, 0), Error);
}

TEST_CASE("shortest rejected words") {
    std::mt19937_64 rng(77);
    const auto words = words_up_to(6);
    for (int round = 0; round < 200; ++round) {
        auto a = benchgen::random_complete_nfa(rng, 1 + rng() % 3, 2);
        std::optional<Word> first;
        for (const auto& w : words)
            if (!automata::nfa_runs_word(a, w)) {
                first = w;
                break;
            }
        auto found = benchgen::shortest_rejected(a);
        CHECK(found.has_value() == first.has_value());
        if (found) {
            CHECK(found->size() == first->size());
            CHECK_FALSE(automata::nfa_runs_word(a, *found));
        }
        CHECK(benchgen::is_universal(a) == !found);
    }
}

TEST_CASE("universal automata give unrealizable instances") {
    auto all = nfa(1, {0}, {{0, 0, 0}, {0, 1, 0}});
    CHECK(benchgen::is_universal(all));
    CHECK_FALSE(realizable_by_enumeration(all, 3));

    auto incomplete = nfa(1, {0}, {{0, 0, 0}});
    CHECK_THROWS_AS(benchgen::universality_instance(incomplete), Error);
}

TEST_CASE("rejecting the single word a") {
    // 0 --a--> 1 (rejecting), everything else ends in the accepting sink 2.
    auto a = nfa(3, {0, 2}, {{0, 0, 1}, {0, 1, 2}, {1, 0, 2}, {1, 1, 2}, {2, 0, 2}, {2, 1, 2}});
    REQUIRE(benchgen::shortest_rejected(a) == Word{0});
    auto l = fixtures::load(benchgen::universality_instance(a));
    verify::Checker checker(l.env, l.model.spec, l.model.actions);
    auto m = model::parse_coordinator(
        "process M = a -> M1;\nprocess M1 = sharp -> M2;\nprocess M2 = minus -> M2;\n", l.model.actions,
        model::environment_alphabet(l.model));
    CHECK(checker.check(m).passed());
    auto wrong = model::parse_coordinator("process M = sharp -> M2;\nprocess M2 = minus -> M2;\n",
                                          l.model.actions, model::environment_alphabet(l.model));
    CHECK_FALSE(checker.check(wrong).passed());
    CHECK(realizable_by_enumeration(a, 3));
}

TEST_CASE("realizability tracks non-universality on a sample") {
    std::mt19937_64 rng(2024);
    for (int round = 0; round < 25; ++round) {
        auto a = benchgen::random_complete_nfa(rng, 1 + rng() % 3, 2);
        CHECK(realizable_by_enumeration(a, enumeration_bound(a)) == !benchgen::is_universal(a));
    }
}
