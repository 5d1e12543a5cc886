#include <algorithm>
#include <numeric>
#include <random>

#include "coordsynth/coordinator.hpp"
#include "coordsynth/pipeline.hpp"
#include "coordsynth/verify.hpp"
#include "doctest.h"
#include "fixtures.hpp"

using namespace coordsynth;

namespace {

csp::Process process(const fixtures::Loaded& l, const std::string& text) {
    return model::parse_coordinator(text, l.model.actions, model::environment_alphabet(l.model));
}

verify::Checker checker_for(const fixtures::Loaded& l) { return {l.env, l.model.spec, l.model.actions}; }

// Every deterministic process over `sigma` with exactly `states` states; a
// choice of -1 leaves the action disabled.
std::vector<csp::Process> all_coordinators(const std::vector<ActionId>& sigma, std::size_t states) {
    const std::size_t slots = states * sigma.size(), choices = states + 1;
    std::size_t total = 1;
    for (std::size_t i = 0; i < slots; ++i) total *= choices;
    std::vector<csp::Process> out;
    for (std::size_t code = 0; code < total; ++code) {
        csp::Process p;
        for (std::size_t s = 0; s < states; ++s) p.state_names.push_back("C" + std::to_string(s));
        p.public_actions = sigma;
        std::size_t rest = code;
        for (StateId s = 0; s < states; ++s)
            for (ActionId a : sigma) {
                const std::size_t pick = rest % choices;
                rest /= choices;
                if (pick > 0) p.transitions.push_back({s, a, static_cast<StateId>(pick - 1)});
            }
        p.normalize();
        out.push_back(std::move(p));
    }
    return out;
}

// The same process as a Moore machine; disabled actions loop back (never read).
synth::MooreMachine as_machine(const csp::Process& p, const std::vector<ActionId>& sigma) {
    synth::MooreMachine m;
    m.sigma = sigma;
    m.output.assign(p.num_states(), std::vector<bool>(sigma.size(), false));
    m.next.assign(p.num_states(), std::vector<std::uint32_t>(sigma.size(), 0));
    for (std::uint32_t s = 0; s < p.num_states(); ++s)
        for (std::size_t a = 0; a < sigma.size(); ++a) m.next[s][a] = s;
    for (const auto& t : p.transitions) {
        const auto a = std::find(sigma.begin(), sigma.end(), t.action) - sigma.begin();
        m.output[t.from][a] = true;
        m.next[t.from][a] = t.to;
    }
    // The machine starts in state 0.
    if (p.initial != 0) {
        auto swap_state = [&](std::uint32_t s) { return s == 0 ? p.initial : s == p.initial ? 0 : s; };
        std::swap(m.output[0], m.output[p.initial]);
        std::swap(m.next[0], m.next[p.initial]);
        for (auto& row : m.next)
            for (auto& t : row) t = swap_state(t);
    }
    return m;
}

csp::Process renamed(const csp::Process& p, const std::vector<StateId>& perm) {
    csp::Process q = p;
    for (StateId s = 0; s < p.num_states(); ++s) q.state_names[perm[s]] = p.state_names[s];
    q.initial = perm[p.initial];
    for (auto& t : q.transitions) {
        t.from = perm[t.from];
        t.to = perm[t.to];
    }
    q.normalize();
    return q;
}

}  // namespace

TEST_CASE("verdicts on the examples") {
    auto ex3 = fixtures::load(benchgen::example(3));
    auto offer_a0 = process(ex3, "process M = a0 -> M;\n");
    CHECK(checker_for(ex3).check(offer_a0).passed());

    auto ex2 = fixtures::load(benchgen::example(2));
    auto c2 = checker_for(ex2);
    auto v2 = c2.check(process(ex2, "process M = a0 -> M;\n"));
    REQUIRE(v2.kind == verify::Kind::FairLiveness);
    CHECK(verify::format_witness(v2, ex2.model.actions) == "a0 ; ( b )^w");
    CHECK(c2.replay(process(ex2, "process M = a0 -> M;\n"), v2));

    auto ex0 = fixtures::load(benchgen::example(0));
    auto only_a1 = process(ex0, "process M = a1 -> M;\n");
    auto v0 = checker_for(ex0).check(only_a1);
    REQUIRE(v0.kind == verify::Kind::DeadlockSafety);
    CHECK(v0.trace == Word{fixtures::act(ex0, "a1")});
    CHECK(verify::format_witness(v0, ex0.model.actions) == "a1");

    auto ex4 = fixtures::load(benchgen::example(4));
    auto v4 = checker_for(ex4).check(process(ex4, "process M = a0 -> M;\n"));
    CHECK(v4.kind == verify::Kind::DeadlockSafety);
    CHECK(verify::format_witness(v4, ex4.model.actions) == "a0");

    CHECK_THROWS_AS(checker_for(ex3).check(ex3.env), Error);
}

TEST_CASE("canonical lassos") {
    CHECK(verify::canonical_lasso({{0, 2}, {2, 2}}) == Lasso{{0}, {2}});
    CHECK(verify::canonical_lasso({{}, {0, 1, 0, 1}}) == Lasso{{}, {0, 1}});
    CHECK(verify::canonical_lasso({{1, 0}, {1, 0}}) == Lasso{{}, {1, 0}});
    CHECK(verify::canonical_lasso({{2}, {0, 1}}) == Lasso{{2}, {0, 1}});
}

TEST_CASE("failing witnesses replay and verdicts ignore state names") {
    std::mt19937_64 rng(4);
    for (int k = 0; k <= 5; ++k) {
        auto l = fixtures::load(benchgen::example(k));
        auto checker = checker_for(l);
        const auto sigma = model::environment_alphabet(l.model);
        for (std::size_t n = 1; n <= 2; ++n)
            for (const auto& m : all_coordinators(sigma, n)) {
                auto v = checker.check(m);
                if (!v.passed()) CHECK(checker.replay(m, v));
                std::vector<StateId> perm(n);
                std::iota(perm.begin(), perm.end(), 0);
                std::shuffle(perm.begin(), perm.end(), rng);
                auto w = checker.check(renamed(m, perm));
                CHECK(w.kind == v.kind);
                CHECK(w.product_states == v.product_states);
            }
    }
}

TEST_CASE("verdicts agree with the bounded oracle and the run-graph re-check") {
    std::size_t compared = 0;
    for (int k = 0; k <= 5; ++k) {
        CAPTURE(k);
        auto l = fixtures::load(benchgen::example(k));
        auto checker = checker_for(l);
        auto built = pipeline::build(l.model, pipeline::ModeChoice::Symbolic);
        const auto& sigma = built.ucw.sigma;
        for (std::size_t n = 1; n <= 2; ++n)
            for (const auto& m : all_coordinators(sigma, n)) {
                CAPTURE(csp::print_process(m, l.model.actions));
                const bool passed = checker.check(m).passed();
                auto witness = verify::check_violation_conditions(checker, m);
                CHECK(passed == (witness.condition == verify::Condition::None));
                CHECK(passed == synth::recheck(built.ucw, as_machine(m, sigma), n).ok);
                ++compared;
            }
    }
    CHECK(compared == 6 * (4 + 81));
}

TEST_CASE("the oracle finds no violation when a1 is offered forever") {
    auto l = fixtures::load(benchgen::hidden_branching());
    auto checker = checker_for(l);
    auto m = process(l, "process M = a1 -> M;\n");
    CHECK(checker.check(m).passed());
    CHECK(verify::check_violation_conditions(checker, m).condition == verify::Condition::None);
    auto tree = coord::proc_of_tree(coord::fulltree_prefix(m, 4));
    CHECK(coord::bisimilar_to_depth(tree.process, m, 4));
}

TEST_CASE("oracle conditions on the examples") {
    auto ex0 = fixtures::load(benchgen::example(0));
    auto w0 = verify::check_violation_conditions(checker_for(ex0), process(ex0, "process M = a1 -> M;\n"));
    CHECK(w0.condition == verify::Condition::A);
    CHECK(w0.trace == Word{fixtures::act(ex0, "a1")});

    auto ex2 = fixtures::load(benchgen::example(2));
    auto w2 = verify::check_violation_conditions(checker_for(ex2), process(ex2, "process M = a0 -> M;\n"));
    CHECK(w2.condition != verify::Condition::None);
    CHECK(w2.condition != verify::Condition::A);
}

TEST_CASE("enumeration") {
    for (int k : {2, 5}) {
        auto l = fixtures::load(benchgen::example(k));
        auto r = verify::enumerate_coordinators(checker_for(l), {.max_states = 2});
        CHECK(r.exhausted());
        CHECK(r.max_states == 2);
    }
    auto ex2 = fixtures::load(benchgen::example(2));
    CHECK(verify::enumerate_coordinators(checker_for(ex2), {.max_states = 4}).exhausted());

    auto ex1 = fixtures::load(benchgen::example(1));
    auto r1 = verify::enumerate_coordinators(checker_for(ex1), {.max_states = 1});
    REQUIRE(r1.solution);
    CHECK(csp::isomorphic(*r1.solution, process(ex1, "process M = a0 -> M;\n")));

    auto tight = verify::EnumerationLimits{.max_states = 4, .node_budget = 3};
    CHECK_THROWS_AS(verify::enumerate_coordinators(checker_for(ex2), tight), Error);
}

TEST_CASE("enumeration agrees with the exhaustive candidate list") {
    for (int k = 0; k <= 5; ++k) {
        CAPTURE(k);
        auto l = fixtures::load(benchgen::example(k));
        auto checker = checker_for(l);
        bool any = false;
        for (std::size_t n = 1; n <= 2 && !any; ++n)
            for (const auto& m : all_coordinators(model::environment_alphabet(l.model), n))
                any = any || checker.check(m).passed();
        auto r = verify::enumerate_coordinators(checker, {.max_states = 2});
        CHECK(r.exhausted() == !any);
        if (r.solution) CHECK(checker.check(*r.solution).passed());
    }
}
