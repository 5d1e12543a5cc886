#include <algorithm>

#include "doctest.h"
#include "fixtures.hpp"

using namespace coordsynth;

TEST_CASE("explicit and symbolic constructions agree on the small examples") {
    for (int k = 0; k <= 5; ++k) {
        CAPTURE(k);
        auto l = fixtures::load(benchgen::example(k));
        auto check = spec::cross_check(l.components);
        for (const auto& m : check.mismatches) MESSAGE(m);
        CHECK(check.ok());
    }
    auto l = fixtures::load(benchgen::hidden_branching());
    CHECK(spec::cross_check(l.components).ok());
}

namespace {

std::vector<fixtures::Loaded> relation_corpus() {
    std::vector<fixtures::Loaded> out;
    for (int k = 0; k <= 5; ++k) out.push_back(fixtures::load(benchgen::example(k)));
    out.push_back(fixtures::load(benchgen::hidden_branching()));
    out.push_back(fixtures::load(benchgen::thermostat(1)));
    out.push_back(fixtures::load(benchgen::arbiter(2)));
    return out;
}

}  // namespace

TEST_CASE("explicit and symbolic constructions agree on the larger benchmarks") {
    for (int level = 1; level <= 3; ++level) CHECK(spec::cross_check(fixtures::load(benchgen::thermostat(level)).components).ok());
    CHECK(spec::cross_check(fixtures::load(benchgen::arbiter(2)).components).ok());
    CHECK(spec::cross_check(fixtures::load(benchgen::copy_relay(true)).components).ok());
    CHECK(spec::cross_check(fixtures::load(benchgen::copy_relay(false)).components).ok());
}

TEST_CASE("private reachability with nothing offered is plain private reachability") {
    for (const auto& l : relation_corpus()) {
        auto r = spec::symbolic_relations(l.components);
        auto& m = *r.mgr;
        bdd::Bdd gen = r.gen_eprivate;
        for (auto level : r.layout.offered_levels()) gen = m.restrict(gen, level, false);
        CHECK(gen == r.eprivate);
    }
}

TEST_CASE("offering more never creates failures and enabledness ignores the offer") {
    for (const auto& l : relation_corpus()) {
        auto r = spec::symbolic_relations(l.components);
        auto& m = *r.mgr;
        for (auto level : r.layout.offered_levels()) {
            auto with = m.restrict(r.efail, level, true);
            auto without = m.restrict(r.efail, level, false);
            CHECK(m.implies(with, without).is_true());
        }
        auto support = m.support(r.enabled);
        for (auto level : r.layout.offered_levels())
            CHECK(std::find(support.begin(), support.end(), level) == support.end());
    }
}

TEST_CASE("Fail is a rejecting trap and Sink an accepting one") {
    for (const auto& l : relation_corpus()) {
        auto b = spec::build_spec_automaton(l.components, spec::Mode::Symbolic);
        CHECK(b.green[spec::kFail]);
        CHECK_FALSE(b.green[spec::kSink]);
        std::vector<bdd::Bdd> fail_cover(b.sigma.size(), b.guards->zero());
        for (const auto& e : b.edges) {
            if (e.src == spec::kFail) {
                CHECK(e.dst == spec::kFail);
                fail_cover[e.action] |= e.guard;
            }
            if (e.src == spec::kSink) {
                CHECK(e.dst == spec::kSink);
                CHECK_FALSE(e.green);
            }
        }
        for (const auto& c : fail_cover) CHECK(c.is_true());
    }
}

TEST_CASE("forcing unions does not change the offered classes' cover") {
    for (const auto& l : relation_corpus()) {
        bdd::Manager guards(static_cast<std::uint32_t>(l.components.sigma.size()));
        auto plain = spec::offered_classes(l.components, guards, false);
        auto forced = spec::offered_classes(l.components, guards, true);
        auto cover = [&](const std::vector<spec::OfferedClass>& cs) {
            bdd::Bdd u = guards.zero();
            for (const auto& c : cs) {
                CHECK((u & c.guard).is_false());  // classes are disjoint
                u |= c.guard;
            }
            return u;
        };
        CHECK(cover(plain).is_true());
        CHECK(cover(forced).is_true());
    }
}

TEST_CASE("composite letters are spelled with action names") {
    auto l = fixtures::load(benchgen::example(1));
    auto b = spec::build_spec_automaton(l.components, spec::Mode::Symbolic);
    auto text = automata::serialize(spec::expand_letters(b, l.model.actions.names()));
    CHECK(text.find("a0|{a0,a1}|0") != std::string::npos);
    CHECK(text.find("a1|{}|") != std::string::npos);
}

TEST_CASE("normal state count stays within the product accounting") {
    for (const auto& l : relation_corpus()) {
        auto b = spec::build_spec_automaton(l.components, spec::Mode::Symbolic);
        CHECK(b.normal.size() <= l.components.product_size());
        auto u = spec::to_ucw(b);
        CHECK(u.num_states <= 2 * b.num_states());
    }
}
