// Acceptance run: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "coordsynth/automata.hpp"
#include "coordsynth/benchgen.hpp"
#include "coordsynth/coordinator.hpp"
#include "coordsynth/ltl.hpp"
#include "coordsynth/pipeline.hpp"
#include "coordsynth/verify.hpp"
#include "formula_gen.hpp"

using namespace coordsynth;
using Clock = std::chrono::steady_clock;

namespace {

// Wall-clock budgets in seconds.
constexpr double kExampleBudget = 10;
constexpr double kUnrealizableBudget = 60;
constexpr double kThermostatBudget = 30 * 60;
constexpr double kArbiter2Budget = 2 * 60;
constexpr double kArbiter3Budget = 45 * 60;
constexpr double kUniversalityBudget = 10 * 60;

constexpr std::size_t kBisimulationDepth = 5;
constexpr std::size_t kFormulaSize = 6;
constexpr std::size_t kLassoLength = 4;
constexpr int kRandomAutomata = 200;

struct Outcome {
    bool ok = true;
    std::string detail;

    void fail(const std::string& why) {
        if (!detail.empty()) detail += "; ";
        detail += why;
        ok = false;
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

// Every synthesized machine, kept for the bisimulation and certificate criteria.
struct Produced {
    std::string label;
    model::Model model;
    synth::MooreMachine machine;
    csp::Process coordinator;
};
std::vector<Produced> produced;

struct Run {
    model::Model model;
    pipeline::SynthReport report;
    double seconds = 0;
};

Run synthesize(const std::string& label, const std::string& text, std::vector<std::size_t> bounds = {}) {
    Run r{model::parse_model(text), {}, 0};
    pipeline::Options options;
    if (!bounds.empty()) options.bounds = std::move(bounds);
    const auto start = Clock::now();
    r.report = pipeline::synthesize(r.model, options);
    r.seconds = seconds_since(start);
    if (r.report.machine && r.report.coordinator)
        produced.push_back({label, r.model, *r.report.machine, *r.report.coordinator});
    return r;
}

bool passes(const Run& r) { return r.report.verdict && r.report.verdict->passed(); }

std::vector<std::string> offered_at_start(const Run& r) {
    std::vector<std::string> out;
    for (auto a : csp::enabled_public(*r.report.coordinator, r.report.coordinator->initial))
        out.push_back(r.model.actions.name(a));
    std::sort(out.begin(), out.end());
    return out;
}

Outcome examples_solved() {
    Outcome o;
    const std::vector<std::pair<int, std::vector<std::string>>> expected{
        {0, {"a0"}}, {1, {"a0"}}, {3, {"a0"}}, {4, {"a0", "a1"}}};
    for (const auto& [k, out] : expected) {
        const auto tag = "example " + std::to_string(k);
        auto r = synthesize(tag, benchgen::example(k));
        if (!r.report.coordinator) {
            o.fail(tag + " not synthesized");
            continue;
        }
        if (r.report.bound != 1 || r.report.coordinator->num_states() != 1) o.fail(tag + " needs more than one state");
        if (offered_at_start(r) != out) o.fail(tag + " offers the wrong set");
        if (!passes(r)) o.fail(tag + " fails verification");
        if (r.seconds > kExampleBudget) o.fail(tag + " over budget");
        o.note(tag + " " + fmt(r.seconds) + "s");
    }
    return o;
}

Outcome examples_unrealizable() {
    Outcome o;
    for (int k : {2, 5}) {
        const auto tag = "example " + std::to_string(k);
        const auto start = Clock::now();
        auto r = synthesize(tag, benchgen::example(k), {1, 2, 3, 4});
        if (r.report.status != pipeline::Status::Unrealizable || r.report.bound != 4)
            o.fail(tag + " not refuted up to 4 states");
        auto env = model::environment(r.model);
        verify::Checker checker(env, r.model.spec, r.model.actions);
        auto e = verify::enumerate_coordinators(checker, {.max_states = 2});
        if (!e.exhausted()) o.fail(tag + " has a 2-state coordinator");
        const double t = seconds_since(start);
        if (t > kUnrealizableBudget) o.fail(tag + " over budget");
        o.note(tag + " " + fmt(t) + "s");
    }
    return o;
}

Outcome thermostats() {
    Outcome o;
    const std::size_t max_states[] = {1, 4, 3};
    for (int level = 1; level <= 3; ++level) {
        const auto tag = "thermostat " + std::to_string(level);
        auto r = synthesize(tag, benchgen::thermostat(level));
        if (!r.report.coordinator) {
            o.fail(tag + " not synthesized");
            continue;
        }
        const auto n = r.report.coordinator->num_states();
        if (n > max_states[level - 1]) o.fail(tag + " has " + std::to_string(n) + " states");
        if (!passes(r)) o.fail(tag + " fails verification");
        if (r.seconds > kThermostatBudget) o.fail(tag + " over budget");
        o.note(tag + " " + std::to_string(n) + " states " + fmt(r.seconds) + "s");
    }
    return o;
}

Outcome arbiters() {
    Outcome o;
    auto two = synthesize("arbiter 2", benchgen::arbiter(2));
    if (!two.report.coordinator) {
        o.fail("arbiter 2 not synthesized");
    } else {
        auto round_robin = model::parse_coordinator(
            "process A = request.1 -> B | grant.1 -> A | release.1 -> A;\n"
            "process B = request.0 -> A | grant.0 -> B | release.0 -> B;\n",
            two.model.actions, model::environment_alphabet(two.model));
        if (two.report.coordinator->num_states() > 2) o.fail("arbiter 2 too large");
        if (!csp::isomorphic(*two.report.coordinator, round_robin)) o.fail("arbiter 2 is not round-robin");
        if (!passes(two)) o.fail("arbiter 2 fails verification");
        if (two.seconds > kArbiter2Budget) o.fail("arbiter 2 over budget");
        o.note("arbiter 2 " + std::to_string(two.report.coordinator->num_states()) + " states " + fmt(two.seconds) + "s");
    }
    auto three = synthesize("arbiter 3", benchgen::arbiter(3));
    if (!three.report.coordinator) {
        o.fail("arbiter 3 not synthesized");
    } else {
        if (three.report.coordinator->num_states() > 4) o.fail("arbiter 3 too large");
        if (!passes(three)) o.fail("arbiter 3 fails verification");
        if (three.seconds > kArbiter3Budget) o.fail("arbiter 3 over budget");
        o.note("arbiter 3 " + std::to_string(three.report.coordinator->num_states()) + " states " +
               fmt(three.seconds) + "s");
    }
    return o;
}

Outcome cross_checks() {
    Outcome o;
    std::vector<std::pair<std::string, std::string>> models;
    for (int k = 0; k <= 5; ++k) models.push_back({"example " + std::to_string(k), benchgen::example(k)});
    models.push_back({"hidden branching", benchgen::hidden_branching()});
    std::size_t edges = 0;
    for (const auto& [tag, text] : models) {
        auto built = pipeline::build(model::parse_model(text), pipeline::ModeChoice::Both);
        if (!built.cross_check) o.fail(tag + " was not cross-checked");
        else if (!built.cross_check->empty()) o.fail(tag + ": " + built.cross_check->front());
        edges += built.automaton.edges.size();
    }
    o.note(std::to_string(models.size()) + " models, " + std::to_string(edges) + " guarded edges");
    return o;
}

Outcome universality() {
    Outcome o;
    std::mt19937_64 rng(20240);
    const auto start = Clock::now();
    int agree = 0, universal = 0;
    for (int i = 0; i < kRandomAutomata; ++i) {
        auto a = benchgen::random_complete_nfa(rng, 1 + rng() % 3, 2);
        auto rejected = benchgen::shortest_rejected(a);
        universal += !rejected;
        auto m = model::parse_model(benchgen::universality_instance(a));
        verify::Checker checker(model::environment(m), m.spec, m.actions);
        const std::size_t k = rejected ? rejected->size() + 2 : 3;
        const bool realizable = !verify::enumerate_coordinators(checker, {.max_states = k}).exhausted();
        if (realizable == !benchgen::is_universal(a)) ++agree;
    }
    const double t = seconds_since(start);
    if (agree != kRandomAutomata) o.fail(std::to_string(kRandomAutomata - agree) + " disagreements");
    if (t > kUniversalityBudget) o.fail("over budget");
    o.note(std::to_string(agree) + "/" + std::to_string(kRandomAutomata) + " agree, " + std::to_string(universal) +
           " universal, " + fmt(t) + "s");
    return o;
}

Outcome tree_bisimulation() {
    Outcome o;
    for (const auto& p : produced) {
        auto tree = coord::proc_of_tree(coord::fulltree_prefix(p.coordinator, kBisimulationDepth));
        if (!coord::bisimilar_to_depth(tree.process, p.coordinator, kBisimulationDepth))
            o.fail(p.label + " differs from its tree");
    }
    if (produced.empty()) o.fail("no coordinators to check");
    o.note(std::to_string(produced.size()) + " coordinators");
    return o;
}

Outcome ltl_oracles() {
    Outcome o;
    auto formulas = formula_gen::by_size(kFormulaSize, 2);
    auto lassos = formula_gen::lassos(kLassoLength, 2);
    std::size_t checks = 0, bad_nba = 0, bad_ucw = 0, count = 0;
    for (const auto& level : formulas)
        for (const auto& f : level) {
            ++count;
            auto nba = ltl::to_nba(f, {"a", "b"});
            auto ucw = automata::as_ucw(ltl::to_nba(ltl::negate(f), {"a", "b"}));
            for (const auto& w : lassos) {
                const bool holds = ltl::eval_lasso(f, w);
                bad_nba += automata::nba_accepts_lasso(nba, w) != holds;
                bad_ucw += automata::ucw_accepts_lasso(ucw, w) != holds;
                checks += 2;
            }
        }
    if (bad_nba) o.fail(std::to_string(bad_nba) + " translation counterexamples");
    if (bad_ucw) o.fail(std::to_string(bad_ucw) + " co-Buchi complement counterexamples");
    o.note(std::to_string(count) + " formulas, " + std::to_string(lassos.size()) + " lassos, " +
           std::to_string(checks) + " checks");
    return o;
}

Outcome copy_relays() {
    Outcome o;
    auto sync = synthesize("synchronous copy", benchgen::copy_relay(true));
    if (!sync.report.coordinator) o.fail("synchronous copy not synthesized");
    else if (!passes(sync)) o.fail("synchronous copy fails verification");
    else o.note("synchronous copy " + std::to_string(sync.report.coordinator->num_states()) + " states");
    auto async = synthesize("asynchronous copy", benchgen::copy_relay(false), {1, 2, 3});
    if (async.report.status != pipeline::Status::Unrealizable || async.report.bound != 3)
        o.fail("asynchronous copy not refuted up to 3 states");
    else o.note("asynchronous copy refuted up to 3 states");
    return o;
}

Outcome certificates() {
    Outcome o;
    std::size_t checked = 0;
    for (const auto& p : produced) {
        auto built = pipeline::build(p.model, pipeline::ModeChoice::Symbolic);
        auto c = synth::recheck(built.ucw, p.machine, p.machine.num_states());
        if (!c.ok) o.fail(p.label + ": " + c.detail);
        ++checked;
    }
    if (produced.empty()) o.fail("no machines to check");
    o.note(std::to_string(checked) + " machines");
    return o;
}

}  // namespace

int main() {
    // Criteria 7 and 10 look at the machines produced by the synthesis criteria.
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"solvable examples at one state", examples_solved},
        {"unsolvable examples refuted", examples_unrealizable},
        {"thermostat levels", thermostats},
        {"arbiters for two and three clients", arbiters},
        {"explicit and symbolic automata agree", cross_checks},
        {"universality reduction on random automata", universality},
        {"tree bisimulation of produced coordinators", tree_bisimulation},
        {"temporal logic translation oracles", ltl_oracles},
        {"copy relays", copy_relays},
        {"run-graph certificates", certificates},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.fail(std::string("error: ") + e.what());
        }
        failed += !o.ok;
        std::printf("criterion %2zu %s  %s [%s] (%ss)\n", i + 1, o.ok ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    o.detail.c_str(), fmt(seconds_since(start)).c_str());
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
