#include <random>

#include "coordsynth/automata.hpp"
#include "coordsynth/ltl.hpp"
#include "doctest.h"
#include "formula_gen.hpp"

using namespace coordsynth;
using ltl::Formula;
using ltl::Op;

namespace {

csp::ActionTable table(std::initializer_list<const char*> names) {
    csp::ActionTable t;
    for (auto n : names) t.intern(n);
    return t;
}

}  // namespace

TEST_CASE("parsing") {
    auto t = table({"a0", "a1", "b"});
    auto f = ltl::parse_ltl("F G !b", t);
    REQUIRE(f.op() == Op::Eventually);
    REQUIRE(f.lhs().op() == Op::Always);
    REQUIRE(f.lhs().lhs().op() == Op::Not);
    CHECK(f.lhs().lhs().lhs().action() == 2);
    CHECK(ltl::parse_ltl("true", t).op() == Op::True);
    auto imp = ltl::parse_ltl("a0 -> a1", t);
    CHECK(imp == Formula::disj(Formula::negation(Formula::atom(0)), Formula::atom(1)));
    CHECK_THROWS_AS(ltl::parse_ltl("F (a0", t), Error);
    CHECK_THROWS_AS(ltl::parse_ltl("G c", t), Error);
}

TEST_CASE("starvation freedom for two processes is a conjunction of responses") {
    auto t = table({"request.0", "grant.0", "request.1", "grant.1"});
    auto f = ltl::parse_ltl("G(request.0 -> F grant.0) & G(request.1 -> F grant.1)", t);
    REQUIRE(f.op() == Op::And);
    CHECK(f.lhs().op() == Op::Always);
    CHECK(f.rhs().op() == Op::Always);
}

TEST_CASE("lasso evaluation") {
    const ActionId a0 = 0, a1 = 1, b = 2;
    auto fgnb = Formula::eventually(Formula::always(Formula::negation(Formula::atom(b))));
    CHECK(ltl::eval_lasso(fgnb, {{}, {a0}}));
    CHECK_FALSE(ltl::eval_lasso(fgnb, {{a0}, {b}}));
    auto gfa1 = Formula::always(Formula::eventually(Formula::atom(a1)));
    CHECK(ltl::eval_lasso(gfa1, {{a0}, {a1, b}}));
    CHECK_THROWS_AS(ltl::eval_lasso(gfa1, {{a0}, {}}), Error);
}

TEST_CASE("negation normal form") {
    const ActionId a = 0, b = 1;
    auto fgnb = Formula::eventually(Formula::always(Formula::negation(Formula::atom(b))));
    CHECK(ltl::negate(fgnb) == Formula::always(Formula::eventually(Formula::atom(b))));
    CHECK(ltl::negate(Formula::top()) == Formula::bottom());
    auto until = Formula::until(Formula::atom(a), Formula::atom(b));
    CHECK(ltl::negate(until) ==
          Formula::release(Formula::negation(Formula::atom(a)), Formula::negation(Formula::atom(b))));
}

TEST_CASE("negation is an involution and flips every lasso") {
    auto formulas = formula_gen::by_size(4, 2);
    auto lassos = formula_gen::lassos(3, 2);
    for (const auto& level : formulas)
        for (const auto& f : level) {
            auto n = ltl::negate(f);
            CHECK(n.in_nnf());
            CHECK(ltl::negate(n) == ltl::nnf(f));
            for (const auto& w : lassos) CHECK(ltl::eval_lasso(f, w) != ltl::eval_lasso(n, w));
        }
}

TEST_CASE("translation examples") {
    const std::vector<std::string> abc{"a0", "a1", "b"};
    auto gfb = ltl::to_nba(Formula::always(Formula::eventually(Formula::atom(2))), abc);
    CHECK(automata::nba_accepts_lasso(gfb, {{0}, {2}}));
    CHECK_FALSE(automata::nba_accepts_lasso(gfb, {{}, {0}}));
    auto none = ltl::to_nba(Formula::bottom(), abc);
    CHECK_FALSE(automata::nba_accepts_lasso(none, {{}, {0}}));

    // Sampled lassos against direct evaluation.
    std::mt19937_64 rng(1);
    auto xa0 = Formula::next(Formula::atom(0));
    auto nxa0 = ltl::to_nba(xa0, abc);
    for (int i = 0; i < 100; ++i) {
        Lasso w;
        for (std::size_t k = rng() % 4; k > 0; --k) w.prefix.push_back(static_cast<ActionId>(rng() % 3));
        for (std::size_t k = 1 + rng() % 4; k > 0; --k) w.loop.push_back(static_cast<ActionId>(rng() % 3));
        CHECK(automata::nba_accepts_lasso(gfb, w) == ltl::eval_lasso(Formula::always(Formula::eventually(Formula::atom(2))), w));
        CHECK(automata::nba_accepts_lasso(nxa0, w) == (w.at(1) == 0));
    }
}

TEST_CASE("translation agrees with evaluation on all small formulas") {
    auto formulas = formula_gen::by_size(4, 2);
    auto lassos = formula_gen::lassos(4, 2);
    std::size_t mismatches = 0;
    for (const auto& level : formulas)
        for (const auto& f : level) {
            auto a = ltl::to_nba(f, {"a", "b"});
            for (const auto& w : lassos) mismatches += automata::nba_accepts_lasso(a, w) != ltl::eval_lasso(f, w);
        }
    CHECK(mismatches == 0);
}

TEST_CASE("translation is deterministic") {
    auto t = table({"a", "b"});
    auto f = ltl::parse_ltl("G(a -> F b) & F G !a", t);
    CHECK(automata::serialize(ltl::to_nba(f, t.names())) == automata::serialize(ltl::to_nba(f, t.names())));
}
