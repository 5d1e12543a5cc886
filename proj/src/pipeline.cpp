#include "coordsynth/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "coordsynth/coordinator.hpp"
#include "json.hpp"

namespace coordsynth::pipeline {

namespace {

using Clock = std::chrono::steady_clock;
using nlohmann::ordered_json;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string sat_status(sat::Status s) {
    switch (s) {
        case sat::Status::Sat: return "sat";
        case sat::Status::Unsat: return "unsat";
        case sat::Status::Unknown: return "unknown";
    }
    return "?";
}

// Guard as a disjunction of cubes over offered actions, e.g. "a0&!a1 | b".
std::string guard_text(const bdd::Manager& mgr, bdd::Bdd guard, const std::vector<ActionId>& sigma,
                       const csp::ActionTable& actions) {
    if (guard.is_true()) return "true";
    if (guard.is_false()) return "false";
    std::vector<std::string> cubes;
    std::vector<std::string> lits;
    auto walk = [&](auto&& self, std::uint32_t node) -> void {
        if (node == 0) return;
        if (node == 1) {
            std::string c;
            for (const auto& l : lits) c += (c.empty() ? "" : "&") + l;
            cubes.push_back(c);
            return;
        }
        const std::string& name = actions.name(sigma.at(mgr.node_var(node)));
        lits.push_back("!" + name);
        self(self, mgr.node_low(node));
        lits.back() = name;
        self(self, mgr.node_high(node));
        lits.pop_back();
    };
    walk(walk, guard.id());
    std::string out;
    for (const auto& c : cubes) out += (out.empty() ? "" : " | ") + c;
    return out;
}

ordered_json attempt_json(const synth::BoundAttempt& a) {
    return {{"bound", a.bound},           {"variables", a.variables}, {"clauses", a.clauses},
            {"constraint_groups", a.constraint_groups}, {"status", a.skipped ? "skipped" : sat_status(a.status)},
            {"solver", a.solver}};
}

ordered_json verdict_record(const verify::Verdict& v, const csp::ActionTable& actions) {
    ordered_json j{{"kind", verify::kind_name(v.kind)}, {"product_states", v.product_states}};
    if (!v.passed()) j["witness"] = verify::format_witness(v, actions);
    return j;
}

}  // namespace

std::string status_name(Status s) {
    switch (s) {
        case Status::Synthesized: return "synthesized";
        case Status::Unrealizable: return "bounded-unrealizable";
        case Status::Incomplete: return "incomplete";
    }
    return "?";
}

std::vector<std::uint32_t> name_order(const std::vector<ActionId>& sigma, const csp::ActionTable& actions) {
    std::vector<std::uint32_t> order(sigma.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(),
              [&](auto x, auto y) { return actions.name(sigma[x]) < actions.name(sigma[y]); });
    return order;
}

Built build(const model::Model& m, ModeChoice mode) {
    Built b;
    b.components = spec::make_components(model::environment(m), m.spec, m.actions);
    if (mode == ModeChoice::Both) {
        auto sym = spec::build_spec_automaton(b.components, spec::Mode::Symbolic);
        auto exp = spec::build_spec_automaton(b.components, spec::Mode::Explicit, sym.guards);
        std::vector<std::string> mismatches = spec::cross_check(b.components).mismatches;
        std::string diff;
        if (!spec::same_automaton(sym, exp, &diff)) mismatches.push_back("spec automaton: " + diff);
        b.cross_check = std::move(mismatches);
        b.automaton = std::move(sym);
    } else {
        b.automaton = spec::build_spec_automaton(
            b.components, mode == ModeChoice::Explicit ? spec::Mode::Explicit : spec::Mode::Symbolic);
    }
    b.ucw = spec::to_ucw(b.automaton);
    return b;
}

SynthReport synthesize(const model::Model& m, const Options& options) {
    SynthReport r;
    auto t = Clock::now();
    Built b = build(m, options.mode);
    r.timings.emplace_back("automaton", seconds_since(t));
    r.cross_check = b.cross_check;
    r.sizes = {b.components.env.num_states(),
               b.components.sigma.size(),
               b.components.gamma.size(),
               b.components.liveness.num_states,
               b.components.safety.num_states,
               b.automaton.num_states(),
               b.automaton.edges.size(),
               b.ucw.num_states,
               b.ucw.edges.size()};

    synth::SolverConfig cfg = options.solver;
    if (cfg.action_order.empty()) cfg.action_order = name_order(b.ucw.sigma, m.actions);
    t = Clock::now();
    auto outcome = synth::synthesize(b.ucw, options.bounds, cfg);
    r.timings.emplace_back("synthesis", seconds_since(t));
    r.attempts = outcome.attempts;
    r.bound = outcome.bound;
    r.certificate = outcome.certificate;
    if (!outcome.machine) {
        r.status = outcome.incomplete ? Status::Incomplete : Status::Unrealizable;
        return r;
    }
    r.status = Status::Synthesized;
    r.machine = outcome.machine;
    r.coordinator = coord::moore_to_csp(*outcome.machine);
    r.coordinator_text = csp::print_process(*r.coordinator, m.actions);
    t = Clock::now();
    r.verdict = verify::check(b.components.env, *r.coordinator, m.spec, m.actions);
    r.timings.emplace_back("verification", seconds_since(t));
    return r;
}

std::string dump_spec_automaton(const model::Model& m, ModeChoice mode) {
    Built b = build(m, mode);
    const auto& a = b.automaton;
    std::ostringstream out;
    if (b.cross_check)
        for (const auto& d : *b.cross_check) out << "# mismatch: " << d << '\n';
    for (std::uint32_t s = 0; s < a.num_states(); ++s) out << "# state " << s << ' ' << a.state_name(s) << '\n';
    if (a.sigma.size() <= 10) {
        out << automata::serialize(spec::expand_letters(a, m.actions.names()));
        return out.str();
    }
    // Too many offered sets to list: print guards instead.
    out << "states " << a.num_states() << "\ninitial";
    for (auto s : a.initial) out << ' ' << s;
    out << "\ngreen";
    for (std::uint32_t s = 0; s < a.num_states(); ++s)
        if (a.green[s]) out << ' ' << s;
    out << '\n';
    for (const auto& e : a.edges)
        out << "trans " << e.src << ' ' << m.actions.name(a.sigma[e.action]) << ' ' << e.dst << (e.green ? " g" : "")
            << " : " << guard_text(*a.guards, e.guard, a.sigma, m.actions) << '\n';
    return out.str();
}

std::string verdict_json(const verify::Verdict& v, const csp::ActionTable& actions) {
    return verdict_record(v, actions).dump(2) + "\n";
}

std::string report_json(const SynthReport& r, const csp::ActionTable& actions) {
    ordered_json j;
    j["status"] = status_name(r.status);
    j["sizes"] = {{"env_states", r.sizes.env_states},
                  {"public_actions", r.sizes.public_actions},
                  {"private_actions", r.sizes.private_actions},
                  {"liveness_states", r.sizes.liveness_states},
                  {"safety_states", r.sizes.safety_states},
                  {"spec_states", r.sizes.spec_states},
                  {"spec_edges", r.sizes.spec_edges},
                  {"ucw_states", r.sizes.ucw_states},
                  {"ucw_edges", r.sizes.ucw_edges}};
    if (r.cross_check) j["cross_check"] = {{"mismatches", *r.cross_check}};
    j["attempts"] = ordered_json::array();
    for (const auto& a : r.attempts) j["attempts"].push_back(attempt_json(a));
    j["bound"] = r.bound;
    if (r.machine) {
        j["coordinator"] = {{"states", r.machine->num_states()}, {"text", r.coordinator_text}};
        j["certificate"] = {{"ok", r.certificate.ok},
                            {"product_states", r.certificate.product_states},
                            {"max_greens", r.certificate.max_greens},
                            {"limit", r.certificate.limit}};
    }
    if (r.verdict) j["verdict"] = verdict_record(*r.verdict, actions);
    return j.dump(2) + "\n";
}

}  // namespace coordsynth::pipeline
