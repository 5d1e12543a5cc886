#include <algorithm>
#include <random>
#include <set>

#include "coordsynth/coordinator.hpp"
#include "coordsynth/pipeline.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace coordsynth;

namespace {

csp::Process process(const fixtures::Loaded& l, const std::string& text) {
    return model::parse_coordinator(text, l.model.actions, model::environment_alphabet(l.model));
}

synth::MooreMachine one_state(std::vector<ActionId> sigma, std::vector<bool> out) {
    synth::MooreMachine m;
    m.sigma = std::move(sigma);
    m.output = {std::move(out)};
    m.next = {std::vector<std::uint32_t>(m.sigma.size(), 0)};
    return m;
}

std::vector<std::string> label_names(const fixtures::Loaded& l, const coord::TreePrefix& t, const Word& w) {
    std::vector<std::string> out;
    for (auto a : t.label(w)) out.push_back(l.model.actions.name(a));
    std::sort(out.begin(), out.end());
    return out;
}

using TraceSet = std::set<Word>;

// Public traces of length <= depth, with private steps allowed anywhere.
TraceSet public_traces(const csp::Process& p, std::size_t depth) {
    TraceSet out;
    std::set<std::pair<StateId, Word>> seen;
    std::vector<std::pair<StateId, Word>> stack{{p.initial, {}}};
    const auto succ = p.successors();
    while (!stack.empty()) {
        auto [s, w] = stack.back();
        stack.pop_back();
        if (!seen.insert({s, w}).second) continue;
        out.insert(w);
        for (auto [a, t] : succ[s]) {
            if (p.is_private(a)) {
                stack.push_back({t, w});
            } else if (w.size() < depth) {
                Word longer = w;
                longer.push_back(a);
                stack.push_back({t, longer});
            }
        }
    }
    return out;
}

csp::Process random_process(std::mt19937_64& rng, std::size_t states, std::size_t pub, std::size_t priv,
                            bool deterministic) {
    csp::Process p;
    for (std::size_t s = 0; s < states; ++s) p.state_names.push_back("S" + std::to_string(s));
    for (std::size_t a = 0; a < pub; ++a) p.public_actions.push_back(static_cast<ActionId>(a));
    for (std::size_t a = 0; a < priv; ++a) p.private_actions.push_back(static_cast<ActionId>(pub + a));
    for (StateId s = 0; s < states; ++s)
        for (ActionId a = 0; a < pub + priv; ++a) {
            if (deterministic) {
                if (rng() % 3) p.transitions.push_back({s, a, static_cast<StateId>(rng() % states)});
                continue;
            }
            for (StateId t = 0; t < states; ++t)
                if (rng() % 4 == 0) p.transitions.push_back({s, a, t});
        }
    p.normalize();
    return p;
}

}  // namespace

TEST_CASE("Moore machines become deterministic processes") {
    auto l = fixtures::load(benchgen::example(3));
    const auto a0 = fixtures::act(l, "a0"), a1 = fixtures::act(l, "a1");
    auto m = coord::moore_to_csp(one_state({a0, a1}, {true, false}));
    CHECK(csp::isomorphic(m, process(l, "process M = a0 -> M;\n")));
    CHECK(csp::is_deterministic(m));
    CHECK(m.private_actions.empty());
    CHECK(m.public_actions == std::vector<ActionId>{a0, a1});

    auto stop = coord::moore_to_csp(one_state({a0, a1}, {false, false}));
    CHECK(stop.transitions.empty());
    CHECK(stop.num_states() == 1);
}

TEST_CASE("the two-process arbiter has the round-robin shape") {
    auto l = fixtures::load(benchgen::arbiter(2));
    auto report = pipeline::synthesize(l.model, {});
    REQUIRE(report.coordinator);
    CHECK(report.coordinator->num_states() == 2);
    auto expected = process(l,
                            "process A = request.1 -> B | grant.1 -> A | release.1 -> A;\n"
                            "process B = request.0 -> A | grant.0 -> B | release.0 -> B;\n");
    CHECK(csp::isomorphic(*report.coordinator, expected));

    auto tree = coord::fulltree_prefix(expected, 2);
    CHECK(label_names(l, tree, {}) == std::vector<std::string>{"grant.1", "release.1", "request.1"});
    const auto req1 = fixtures::act(l, "request.1"), req0 = fixtures::act(l, "request.0");
    const auto grant1 = fixtures::act(l, "grant.1");
    CHECK(label_names(l, tree, {req1}) == std::vector<std::string>{"grant.0", "release.0", "request.0"});
    CHECK(label_names(l, tree, {grant1}) == std::vector<std::string>{"grant.1", "release.1", "request.1"});
    CHECK(label_names(l, tree, {req0}).empty());
    CHECK(label_names(l, tree, {req1, req0}) == std::vector<std::string>{"grant.1", "release.1", "request.1"});
    CHECK(label_names(l, tree, {req1, grant1}).empty());
    CHECK_THROWS_AS(tree.label({req1, req0, req1}), Error);
}

TEST_CASE("hiding private steps") {
    auto l = fixtures::load(benchgen::example(3));
    const auto a0 = fixtures::act(l, "a0"), b = fixtures::act(l, "b");

    // No private actions: unchanged.
    auto plain = process(l, "process M = a0 -> M | a1 -> N;\nprocess N = a0 -> M;\n");
    CHECK(coord::hide_internal(plain).transitions == plain.transitions);

    csp::Process chain;
    chain.state_names = {"S", "U", "T"};
    chain.public_actions = {a0};
    chain.private_actions = {b};
    chain.transitions = {{0, b, 1}, {1, a0, 2}};
    chain.normalize();
    auto hidden = coord::hide_internal(chain);
    CHECK(hidden.private_actions.empty());
    CHECK(hidden.transitions == std::vector<csp::Transition>{{0, a0, 2}, {1, a0, 2}});

    // A private cycle in front of a0 still gives one edge per source.
    csp::Process cycle = chain;
    cycle.transitions = {{0, b, 1}, {1, b, 0}, {1, a0, 2}};
    cycle.normalize();
    CHECK(coord::hide_internal(cycle).transitions == std::vector<csp::Transition>{{0, a0, 2}, {1, a0, 2}});
}

TEST_CASE("hiding keeps public traces") {
    std::mt19937_64 rng(31);
    for (int round = 0; round < 150; ++round) {
        auto p = random_process(rng, 1 + rng() % 4, 2, 1 + rng() % 2, false);
        auto h = coord::hide_internal(p);
        CHECK(h.private_actions.empty());
        CHECK(public_traces(h, 5) == public_traces(p, 5));
    }
}

TEST_CASE("deterministic restriction") {
    auto l = fixtures::load(benchgen::example(3));
    const auto a0 = fixtures::act(l, "a0");
    auto det = process(l, "process M = a0 -> M | a1 -> N;\nprocess N = a0 -> M;\n");
    CHECK(coord::restrict_deterministic(det).transitions == det.transitions);

    csp::Process fork;
    fork.state_names = {"S", "T1", "T2"};
    fork.public_actions = {a0};
    fork.transitions = {{0, a0, 2}, {0, a0, 1}};
    fork.normalize();
    CHECK(coord::restrict_deterministic(fork).transitions == std::vector<csp::Transition>{{0, a0, 1}});

    // The environment of the example with a nondeterministic a0 branch.
    auto ex2 = fixtures::load(benchgen::example(2));
    CHECK_THROWS_AS(coord::restrict_deterministic(ex2.env), Error);
    auto visible = coord::hide_internal(ex2.env);
    auto r = coord::restrict_deterministic(visible);
    CHECK(csp::is_deterministic(r));
    for (StateId s = 0; s < r.num_states(); ++s) CHECK(csp::enabled_public(r, s) == csp::enabled_public(visible, s));
}

TEST_CASE("tree prefixes and their processes") {
    auto l = fixtures::load(benchgen::example(3));
    const auto a0 = fixtures::act(l, "a0"), a1 = fixtures::act(l, "a1");
    auto m = process(l, "process M = a0 -> M;\n");
    auto one = coord::fulltree_prefix(m, 1);
    CHECK(label_names(l, one, {}) == std::vector<std::string>{"a0"});
    CHECK(label_names(l, one, {a0}) == std::vector<std::string>{"a0"});
    CHECK(label_names(l, one, {a1}).empty());
    CHECK(one.nodes().size() == 3);

    auto three = coord::proc_of_tree(coord::fulltree_prefix(m, 3));
    CHECK(three.process.num_states() == 4);
    CHECK(three.process.transitions.size() == 3);
    for (const auto& t : three.process.transitions) CHECK(t.action == a0);
    CHECK(three.frontier == std::vector<bool>{false, false, false, true});

    auto stop = coord::moore_to_csp(one_state({a0, a1}, {false, false}));
    auto stop_tree = coord::fulltree_prefix(stop, 3);
    for (const auto& node : stop_tree.nodes())
        for (bool bit : node.label) CHECK_FALSE(bit);
    auto single = coord::proc_of_tree(stop_tree);
    CHECK(single.process.num_states() == 1);
    CHECK(single.process.transitions.empty());

    CHECK_THROWS_AS(coord::fulltree_prefix(m, coord::kMaxTreeDepth + 1), Error);
    auto fork = process(l, "process M = a0 -> M | a0 -> N;\nprocess N = a1 -> N;\n");
    CHECK_THROWS_AS(coord::fulltree_prefix(fork, 2), Error);
}

TEST_CASE("the tree offering a1 forever in the hidden-branching model") {
    auto l = fixtures::load(benchgen::hidden_branching());
    const auto a1 = fixtures::act(l, "a1");
    auto m = process(l, "process M = a1 -> M;\n");
    auto t = coord::proc_of_tree(coord::fulltree_prefix(m, 2));
    CHECK(csp::enabled_public(t.process, t.process.initial) == std::vector<ActionId>{a1});
    auto after = csp::simulate(t.process, std::vector<ActionId>{a1});
    REQUIRE(after.size() == 1);
    CHECK(csp::enabled_public(t.process, after[0]) == std::vector<ActionId>{a1});
}

TEST_CASE("tree processes are bisimilar to their source up to the depth") {
    std::mt19937_64 rng(8);
    for (int round = 0; round < 150; ++round) {
        auto m = random_process(rng, 1 + rng() % 4, 1 + rng() % 3, 0, true);
        for (std::size_t depth = 0; depth <= 5; ++depth) {
            auto t = coord::proc_of_tree(coord::fulltree_prefix(m, depth));
            CHECK(coord::bisimilar_to_depth(t.process, m, depth));
        }
        // A tree one level short misses the last step whenever anything is enabled at that depth.
        auto shallow = coord::proc_of_tree(coord::fulltree_prefix(m, 2)).process;
        if (!coord::bisimilar_to_depth(shallow, m, 3)) {
            bool reaches = false;
            for (const auto& w : public_traces(m, 3)) reaches = reaches || w.size() == 3;
            CHECK(reaches);
        }
    }
}

TEST_CASE("machine outputs reappear as tree labels") {
    std::mt19937_64 rng(12);
    for (int round = 0; round < 60; ++round) {
        synth::MooreMachine m;
        const std::size_t n = 1 + rng() % 3, k = 1 + rng() % 3;
        for (std::size_t a = 0; a < k; ++a) m.sigma.push_back(static_cast<ActionId>(a));
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<bool> out(k);
            std::vector<std::uint32_t> next(k);
            for (std::size_t a = 0; a < k; ++a) {
                out[a] = rng() % 2;
                next[a] = static_cast<std::uint32_t>(rng() % n);
            }
            m.output.push_back(out);
            m.next.push_back(next);
        }
        auto tree = coord::fulltree_prefix(coord::moore_to_csp(m), 3);
        // Walk every enabled string and compare labels with the machine outputs.
        std::vector<std::pair<Word, std::uint32_t>> stack{{{}, 0}};
        while (!stack.empty()) {
            auto [w, s] = stack.back();
            stack.pop_back();
            std::vector<ActionId> expect;
            for (std::size_t a = 0; a < k; ++a)
                if (m.output[s][a]) expect.push_back(m.sigma[a]);
            CHECK(tree.label(w) == expect);
            if (w.size() == 3) continue;
            for (std::size_t a = 0; a < k; ++a) {
                if (!m.output[s][a]) continue;
                Word longer = w;
                longer.push_back(m.sigma[a]);
                stack.push_back({longer, m.next[s][a]});
            }
        }
    }
}
