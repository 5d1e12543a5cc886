// Command-line front end. Exit codes: 0 success, 1 negative answer
// (bounded-unrealizable, verification failure, exhausted enumeration), 2 error.
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "coordsynth/benchgen.hpp"
#include "coordsynth/model.hpp"
#include "coordsynth/pipeline.hpp"
#include "coordsynth/verify.hpp"

using namespace coordsynth;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << text;
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") std::cout << text;
    else write_file(path, text);
}

const std::map<std::string, pipeline::ModeChoice> kModes{
    {"explicit", pipeline::ModeChoice::Explicit},
    {"symbolic", pipeline::ModeChoice::Symbolic},
    {"both", pipeline::ModeChoice::Both},
};

struct SynthArgs {
    std::string model, output, report, solver, artifacts, mode = "symbolic";
    std::vector<std::size_t> bounds;
    double timeout = 0;
    unsigned jobs = 1;
    bool no_minimize = false;
};

int run_synth(const SynthArgs& a) {
    auto m = model::parse_model(read_file(a.model));
    pipeline::Options o;
    o.mode = kModes.at(a.mode);
    if (!a.bounds.empty()) o.bounds = a.bounds;
    if (!a.solver.empty()) {
        o.solver.kind = synth::SolverKind::External;
        o.solver.external_path = a.solver;
    }
    if (a.timeout > 0) o.solver.timeout = std::chrono::seconds(static_cast<long>(std::ceil(a.timeout)));
    o.solver.jobs = std::max(1u, a.jobs);
    o.solver.artifacts_dir = a.artifacts;
    o.solver.minimize_outputs = !a.no_minimize;

    auto r = pipeline::synthesize(m, o);
    const auto& z = r.sizes;
    std::cout << "environment: " << z.env_states << " states, " << z.public_actions << " public, "
              << z.private_actions << " private actions\n"
              << "automata: liveness " << z.liveness_states << ", safety " << z.safety_states << ", spec "
              << z.spec_states << " states / " << z.spec_edges << " edges, co-Buchi " << z.ucw_states << " states / "
              << z.ucw_edges << " edges\n";
    if (r.cross_check) {
        std::cout << "cross-check: " << r.cross_check->size() << " mismatches\n";
        for (const auto& d : *r.cross_check) std::cout << "  " << d << "\n";
    }
    for (const auto& at : r.attempts)
        std::cout << "bound " << at.bound << ": " << at.variables << " vars, " << at.clauses << " clauses, "
                  << (at.skipped                          ? "skipped"
                      : at.status == sat::Status::Sat     ? "sat"
                      : at.status == sat::Status::Unsat   ? "unsat"
                                                          : "unknown")
                  << " (" << at.solver << ")\n";
    for (const auto& [phase, secs] : r.timings) std::cout << "time " << phase << ": " << secs << " s\n";
    std::cout << "result: " << pipeline::status_name(r.status) << " (bound " << r.bound << ")\n";
    if (!a.report.empty()) write_file(a.report, pipeline::report_json(r, m.actions));
    if (r.status == pipeline::Status::Incomplete) return 2;
    if (r.status == pipeline::Status::Unrealizable) return 1;
    std::cout << r.coordinator_text << "certificate: " << (r.certificate.ok ? "ok" : "FAILED") << " (max greens "
              << r.certificate.max_greens << " of " << r.certificate.limit << ")\n"
              << "verdict: " << verify::kind_name(r.verdict->kind) << "\n";
    if (!a.output.empty()) write_file(a.output, r.coordinator_text);
    const bool mismatched = r.cross_check && !r.cross_check->empty();
    return r.verdict->passed() && r.certificate.ok && !mismatched ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Coordinator synthesis for CSP environments"};
    app.require_subcommand(1);

    SynthArgs sa;
    auto* synth = app.add_subcommand("synth", "Synthesize and verify a coordinator");
    synth->add_option("model", sa.model, "Model file")->required();
    synth->add_option("--mode", sa.mode, "Automaton construction")->check(CLI::IsMember({"explicit", "symbolic", "both"}));
    synth->add_option("--solver", sa.solver, "External SAT solver executable");
    synth->add_option("--bounds", sa.bounds, "State bounds to try, in order")->delimiter(',');
    synth->add_option("--timeout", sa.timeout, "Seconds per bound (0 = none)");
    synth->add_option("--jobs", sa.jobs, "Bounds solved in parallel");
    synth->add_option("--report", sa.report, "Write a JSON report here");
    synth->add_option("--keep-artifacts", sa.artifacts, "Keep DIMACS instances in this directory");
    synth->add_option("-o,--output", sa.output, "Write the coordinator here");
    synth->add_flag("--no-minimize", sa.no_minimize, "Skip the output-minimizing probes");

    std::string vmodel, vcoord, vreport;
    auto* ver = app.add_subcommand("verify", "Check a coordinator against a model");
    ver->add_option("model", vmodel, "Model file")->required();
    ver->add_option("--coordinator", vcoord, "Coordinator file (process equations)")->required();
    ver->add_option("--report", vreport, "Write a JSON verdict here");

    std::string gname, gout;
    int gparam = 0;
    std::uint64_t gseed = 1;
    auto* gen = app.add_subcommand("gen", "Write a benchmark model");
    gen->add_option("generator", gname, "Generator name")->required()->check(CLI::IsMember(benchgen::generator_names()));
    gen->add_option("--n,--param", gparam, "Example number, thermostat level, arbiter size or NFA states");
    gen->add_option("--seed", gseed, "Seed for randomized generators");
    gen->add_option("-o,--output", gout, "Output file (default stdout)");

    std::string smodel, sout, smode = "symbolic";
    auto* sauto = app.add_subcommand("specauto", "Dump the guarded automaton built from the requirements");
    sauto->add_option("model", smodel, "Model file")->required();
    sauto->add_option("--mode", smode, "Automaton construction")->check(CLI::IsMember({"explicit", "symbolic", "both"}));
    sauto->add_option("-o,--output", sout, "Output file (default stdout)");

    std::string emodel;
    std::size_t estates = 2, ebudget = 20'000'000;
    auto* enu = app.add_subcommand("enumerate", "Exhaustive search over small coordinators");
    enu->add_option("model", emodel, "Model file")->required();
    enu->add_option("--states", estates, "Largest coordinator size");
    enu->add_option("--node-budget", ebudget, "Search nodes before giving up");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*synth) return run_synth(sa);
        if (*ver) {
            auto m = model::parse_model(read_file(vmodel));
            auto env = model::environment(m);
            auto c = model::parse_coordinator(read_file(vcoord), m.actions, env.public_actions);
            auto v = verify::check(env, c, m.spec, m.actions);
            std::cout << "verdict: " << verify::kind_name(v.kind) << "\n";
            if (!v.passed()) std::cout << "witness: " << verify::format_witness(v, m.actions) << "\n";
            if (!vreport.empty()) write_file(vreport, pipeline::verdict_json(v, m.actions));
            return v.passed() ? 0 : 1;
        }
        if (*gen) {
            emit(gout, benchgen::generate(gname, gparam, gseed));
            return 0;
        }
        if (*sauto) {
            auto m = model::parse_model(read_file(smodel));
            std::string text = pipeline::dump_spec_automaton(m, kModes.at(smode));
            emit(sout, text);
            return text.find("# mismatch") == std::string::npos ? 0 : 1;
        }
        if (*enu) {
            auto m = model::parse_model(read_file(emodel));
            verify::Checker checker(model::environment(m), m.spec, m.actions);
            auto r = verify::enumerate_coordinators(checker, {.max_states = estates, .node_budget = ebudget});
            std::cout << "search nodes: " << r.search_nodes << ", complete candidates: " << r.candidates << "\n";
            if (r.exhausted()) {
                std::cout << "exhausted(" << estates << ")\n";
                return 1;
            }
            std::cout << csp::print_process(*r.solution, m.actions);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
