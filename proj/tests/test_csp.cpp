#include <algorithm>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"

using namespace coordsynth;

namespace {

StateId state(const csp::Process& p, const std::string& name) {
    auto it = std::find(p.state_names.begin(), p.state_names.end(), name);
    REQUIRE(it != p.state_names.end());
    return static_cast<StateId>(it - p.state_names.begin());
}

std::vector<std::string> names(const csp::Process& p, const std::vector<StateId>& states) {
    std::vector<std::string> out;
    for (auto s : states) out.push_back(p.state_names[s]);
    std::sort(out.begin(), out.end());
    return out;
}

// Random process over the given public and private action names.
csp::Process random_process(std::mt19937_64& rng, csp::ActionTable& actions, std::size_t states,
                            std::initializer_list<const char*> pub, std::initializer_list<const char*> priv) {
    csp::Process p;
    for (std::size_t s = 0; s < states; ++s) p.state_names.push_back("S" + std::to_string(s));
    for (auto n : pub) p.public_actions.push_back(actions.intern(n));
    for (auto n : priv) p.private_actions.push_back(actions.intern(n));
    std::vector<ActionId> all = p.public_actions;
    all.insert(all.end(), p.private_actions.begin(), p.private_actions.end());
    for (StateId s = 0; s < states; ++s)
        for (ActionId a : all)
            for (StateId t = 0; t < states; ++t)
                if (rng() % 4 == 0) p.transitions.push_back({s, a, t});
    p.normalize();
    return p;
}

}  // namespace

TEST_CASE("parsing the example with a private loop") {
    auto l = fixtures::load(benchgen::example(1));
    const auto& e = l.env;
    CHECK(e.num_states() == 3);
    CHECK(e.public_actions == std::vector<ActionId>{fixtures::act(l, "a0"), fixtures::act(l, "a1")});
    CHECK(e.private_actions == std::vector<ActionId>{fixtures::act(l, "b")});
    CHECK(csp::enabled_public(e, state(e, "E1")).empty());
    CHECK(csp::enabled_public(e, e.initial).size() == 2);
}

TEST_CASE("STOP is a state without transitions") {
    auto l = fixtures::load(benchgen::example(0));
    const auto& e = l.env;
    auto stop = state(e, "STOP");
    for (const auto& t : e.transitions) CHECK(t.from != stop);
    CHECK(csp::enabled_public(e, stop).empty());
    CHECK(csp::is_deterministic(e));
}

TEST_CASE("enabled actions and simulation on the branching examples") {
    auto ex4 = fixtures::load(benchgen::example(4));
    CHECK(csp::enabled_public(ex4.env, state(ex4.env, "E1")) == std::vector<ActionId>{fixtures::act(ex4, "a1")});
    CHECK(names(ex4.env, csp::simulate(ex4.env, Word{fixtures::act(ex4, "a0")})) == std::vector<std::string>{"E0", "E1"});
    CHECK(csp::simulate(ex4.env, Word{}) == std::vector<StateId>{ex4.env.initial});

    auto ex5 = fixtures::load(benchgen::example(5));
    Word w{fixtures::act(ex5, "a0"), fixtures::act(ex5, "b"), fixtures::act(ex5, "a0")};
    CHECK(names(ex5.env, csp::simulate(ex5.env, w)) == std::vector<std::string>{"E0"});

    auto ex2 = fixtures::load(benchgen::example(2));
    CHECK_FALSE(csp::is_deterministic(ex2.env));
}

TEST_CASE("arbiter network has independent three-state agents") {
    auto m = model::parse_model(benchgen::arbiter(2));
    auto net = model::build_network(m);
    REQUIRE(net.agents.size() == 2);
    for (const auto& a : net.agents) CHECK(a.num_states() == 3);
    CHECK(model::environment(m).num_states() == 9);
    CHECK(model::environment(model::parse_model(benchgen::arbiter(3))).num_states() == 27);
    CHECK(model::environment(model::parse_model(benchgen::arbiter(3))).private_actions.empty());
}

TEST_CASE("thermostat interactions become private") {
    auto m = model::parse_model(benchgen::thermostat(1));
    auto env = model::environment(m);
    CHECK(env.is_private(*m.actions.find("HeatisOn")));
    CHECK(env.is_private(*m.actions.find("ACisOn")));
    for (const char* a : {"JustRight", "switchHeatOn", "switchACOn"}) CHECK(env.is_public(*m.actions.find(a)));
}

TEST_CASE("composing with the example coordinator") {
    auto l = fixtures::load(benchgen::example(1));
    const ActionId a0 = fixtures::act(l, "a0"), a1 = fixtures::act(l, "a1");
    csp::Process m;
    m.state_names = {"M"};
    m.public_actions = {a0, a1};
    m.transitions = {{0, a0, 0}};
    m.normalize();
    std::vector<ActionId> sync{a0, a1};
    auto c = csp::compose_pair(l.env, m, sync);
    CHECK(c.num_states() == 2);
    CHECK(c.public_actions.empty());
    // The a0 self-loop survives at the successor of E.
    bool loop = false;
    for (const auto& t : c.transitions) loop = loop || (t.action == a0 && t.from == t.to);
    CHECK(loop);
}

TEST_CASE("a neutral partner only hides the synchronized actions") {
    auto l = fixtures::load(benchgen::example(4));
    csp::Process all;
    all.state_names = {"N"};
    all.public_actions = l.env.public_actions;
    for (ActionId a : all.public_actions) all.transitions.push_back({0, a, 0});
    all.normalize();
    auto c = csp::compose_pair(l.env, all, l.env.public_actions);
    csp::Process expected = l.env;
    expected.private_actions.insert(expected.private_actions.end(), expected.public_actions.begin(),
                                    expected.public_actions.end());
    expected.public_actions.clear();
    expected.normalize();
    CHECK(csp::isomorphic(c, expected));
}

TEST_CASE("composition rejects a sync set outside the common alphabet") {
    auto l = fixtures::load(benchgen::example(1));
    std::vector<ActionId> bad{fixtures::act(l, "b")};
    CHECK_THROWS_AS(csp::compose_pair(l.env, l.env, bad), Error);
}

TEST_CASE("composition is commutative and associative up to isomorphism") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 30; ++round) {
        csp::ActionTable actions;
        auto p = random_process(rng, actions, 3, {"x", "u"}, {"hp"});
        auto q = random_process(rng, actions, 3, {"x", "y"}, {"hq"});
        auto r = random_process(rng, actions, 2, {"y", "v"}, {"hr"});
        std::vector<ActionId> x{actions.intern("x")}, y{actions.intern("y")};
        CHECK(csp::isomorphic(csp::compose_pair(p, q, x), csp::compose_pair(q, p, x)));
        auto lhs = csp::compose_pair(csp::compose_pair(p, q, x), r, y);
        auto rhs = csp::compose_pair(p, csp::compose_pair(q, r, y), x);
        CHECK(csp::isomorphic(lhs, rhs));
    }
}

TEST_CASE("flattening preserves agent traces") {
    auto m = model::parse_model(benchgen::thermostat(2));
    auto net = model::build_network(m);
    auto env = model::environment(m);
    std::mt19937_64 rng(3);
    const auto succ = env.successors();
    for (int walk = 0; walk < 50; ++walk) {
        Word trace;
        StateId s = env.initial;
        for (int step = 0; step < 12 && !succ[s].empty(); ++step) {
            auto [a, t] = succ[s][rng() % succ[s].size()];
            trace.push_back(a);
            s = t;
        }
        for (const auto& agent : net.agents) {
            Word projected;
            for (ActionId a : trace)
                if (agent.is_public(a) || agent.is_private(a)) projected.push_back(a);
            CHECK_FALSE(csp::simulate(agent, projected).empty());
        }
    }
}

TEST_CASE("simulation is prefix closed and deterministic processes reach one state") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 40; ++round) {
        csp::ActionTable actions;
        auto p = random_process(rng, actions, 4, {"x", "y", "z"}, {"h"});
        Word w;
        for (int i = 0; i < 5; ++i) w.push_back(static_cast<ActionId>(rng() % 4));
        if (!csp::simulate(p, w).empty())
            for (std::size_t k = 0; k <= w.size(); ++k)
                CHECK_FALSE(csp::simulate(p, Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(k))).empty());
        auto d = p;
        d.transitions.clear();
        for (const auto& t : p.transitions)
            if (d.transitions.empty() || d.transitions.back().from != t.from || d.transitions.back().action != t.action)
                d.transitions.push_back(t);
        REQUIRE(csp::is_deterministic(d));
        CHECK(csp::simulate(d, w).size() <= 1);
    }
}

TEST_CASE("printing a coordinator") {
    auto l = fixtures::load(benchgen::example(1));
    csp::Process m;
    m.state_names = {"M"};
    m.public_actions = l.env.public_actions;
    m.transitions = {{0, fixtures::act(l, "a0"), 0}};
    m.normalize();
    CHECK(csp::print_process(m, l.model.actions) == "process M = a0 -> M;\n");
    auto back = model::parse_coordinator("process M = a0 -> M;\n", l.model.actions, l.env.public_actions);
    CHECK(csp::isomorphic(back, m));
}
