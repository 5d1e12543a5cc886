#include <random>
#include <string>

#include "doctest.h"
#include "fixtures.hpp"

using namespace coordsynth;

namespace {

std::string error_of(const std::string& text) {
    try {
        model::parse_model(text);
    } catch (const Error& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("every generated model survives a print and parse round trip") {
    std::vector<std::string> texts;
    for (int k = 0; k <= 5; ++k) texts.push_back(benchgen::example(k));
    texts.push_back(benchgen::hidden_branching());
    for (int level = 1; level <= 3; ++level) texts.push_back(benchgen::thermostat(level));
    for (int n = 2; n <= 4; ++n) texts.push_back(benchgen::arbiter(n));
    texts.push_back(benchgen::copy_relay(true));
    texts.push_back(benchgen::copy_relay(false));
    std::mt19937_64 rng(5);
    for (int i = 0; i < 10; ++i) texts.push_back(benchgen::universality_instance(benchgen::random_complete_nfa(rng, 3, 2)));
    for (const auto& text : texts) {
        auto m = model::parse_model(text);
        auto printed = model::print_model(m);
        auto again = model::parse_model(printed);
        CHECK(model::print_model(again) == printed);
        CHECK(csp::isomorphic(model::environment(m), model::environment(again)));
        CHECK(again.spec.liveness == m.spec.liveness);
        CHECK(again.spec.safety_complement == m.spec.safety_complement);
    }
}

TEST_CASE("errors carry positions") {
    CHECK(error_of("public a;\nprocess P = a -> ;\nsystem P;\n").find("line 2") != std::string::npos);
    CHECK(error_of("public a;\nprocess P = c -> P;\nsystem P;\n").find("c") != std::string::npos);
    CHECK_FALSE(error_of("public a;\nprocess P = a -> P;\nprocess P = a -> P;\nsystem P;\n").empty());
    CHECK_FALSE(error_of("public a;\nprocess P = a -> Q;\nsystem P;\n").empty());
    CHECK_FALSE(error_of("public a;\nprivate a;\nprocess P = a -> P;\nsystem P;\n").empty());
}

TEST_CASE("sync actions must be public on both sides") {
    const char* text =
        "public a, c;\nprivate h;\nprocess P = a -> P | h -> P;\nprocess Q = c -> Q;\n"
        "system P ||{h} Q;\n";
    CHECK_FALSE(error_of(text).empty());
    const char* other = "public a, c;\nprocess P = a -> P;\nprocess Q = c -> Q;\nsystem P ||{c} Q;\n";
    CHECK_FALSE(error_of(other).empty());
}

TEST_CASE("STOP and chained prefixes") {
    auto m = model::parse_model("public a, c;\nprocess P = a -> c -> STOP | c -> P;\nsystem P;\n");
    auto env = model::environment(m);
    CHECK(env.num_states() == 3);
    std::size_t dead = 0;
    auto succ = env.successors();
    for (const auto& row : succ) dead += row.empty();
    CHECK(dead == 1);
}

TEST_CASE("default safety and liveness parts") {
    auto m = model::parse_model("public a;\nprocess P = a -> P;\nsystem P;\n");
    CHECK(m.safety_form == model::SafetyForm::Universal);
    CHECK(m.spec.liveness.op() == ltl::Op::True);
}

TEST_CASE("explicit safety automata") {
    const char* text =
        "public a, c;\nprocess P = a -> P | c -> STOP;\nsystem P;\n"
        "safety_complement nfa {\n  states 2;\n  initial 0;\n  accepting 1;\n"
        "  trans 0 a 0;\n  trans 0 c 1;\n}\nliveness \"true\";\n";
    auto m = model::parse_model(text);
    CHECK(m.safety_form == model::SafetyForm::Explicit);
    const auto& a = m.spec.safety_complement;
    CHECK(a.num_states == 2);
    CHECK(automata::nfa_runs_word(a, Word{*m.actions.find("a"), *m.actions.find("c")}));
    CHECK_FALSE(automata::nfa_runs_word(a, Word{*m.actions.find("a")}));
}

TEST_CASE("unused declared public actions stay in the alphabet") {
    auto m = model::parse_model("public a, spare;\nprocess P = a -> P;\nsystem P;\n");
    CHECK(model::environment(m).public_actions.size() == 2);
    CHECK(model::environment_alphabet(m).size() == 2);
}
