#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>

#include "coordsynth/benchgen.hpp"
#include "coordsynth/ltl.hpp"
#include "coordsynth/pipeline.hpp"
#include "coordsynth/verify.hpp"

namespace py = pybind11;
using namespace coordsynth;

namespace {

pipeline::ModeChoice mode_of(const std::string& name) {
    static const std::map<std::string, pipeline::ModeChoice> modes{
        {"explicit", pipeline::ModeChoice::Explicit},
        {"symbolic", pipeline::ModeChoice::Symbolic},
        {"both", pipeline::ModeChoice::Both}};
    auto it = modes.find(name);
    if (it == modes.end()) throw Error("unknown mode '" + name + "'");
    return it->second;
}

std::string synthesize(const std::string& text, const std::string& mode,
                       std::optional<std::vector<std::size_t>> bounds, unsigned jobs, std::optional<long> timeout,
                       std::optional<std::string> solver) {
    auto m = model::parse_model(text);
    pipeline::Options options;
    options.mode = mode_of(mode);
    if (bounds) options.bounds = *bounds;
    options.solver.jobs = jobs;
    if (timeout) options.solver.timeout = std::chrono::seconds(*timeout);
    if (solver) {
        options.solver.kind = synth::SolverKind::External;
        options.solver.external_path = *solver;
    }
    pipeline::SynthReport r;
    {
        py::gil_scoped_release release;
        r = pipeline::synthesize(m, options);
    }
    return pipeline::report_json(r, m.actions);
}

std::string check(const std::string& text, const std::string& coordinator) {
    auto m = model::parse_model(text);
    auto env = model::environment(m);
    auto c = model::parse_coordinator(coordinator, m.actions, env.public_actions);
    auto v = verify::check(env, c, m.spec, m.actions);
    return pipeline::verdict_json(v, m.actions);
}

py::dict enumerate_coordinators(const std::string& text, std::size_t states, std::size_t node_budget) {
    auto m = model::parse_model(text);
    verify::Checker checker(model::environment(m), m.spec, m.actions);
    verify::EnumerationResult r;
    {
        py::gil_scoped_release release;
        r = verify::enumerate_coordinators(checker, {.max_states = states, .node_budget = node_budget});
    }
    py::dict out;
    out["exhausted"] = r.exhausted();
    out["candidates"] = r.candidates;
    out["search_nodes"] = r.search_nodes;
    out["coordinator"] = r.solution ? py::object(py::str(csp::print_process(*r.solution, m.actions))) : py::none();
    return out;
}

bool holds_on_lasso(const std::string& formula, const std::vector<std::string>& prefix,
                    const std::vector<std::string>& loop, const std::vector<std::string>& extra) {
    csp::ActionTable actions;
    for (const auto& a : extra) actions.intern(a);
    Lasso w;
    for (const auto& a : prefix) w.prefix.push_back(actions.intern(a));
    for (const auto& a : loop) w.loop.push_back(actions.intern(a));
    return ltl::eval_lasso(ltl::parse_ltl(formula, actions), w);
}

}  // namespace

PYBIND11_MODULE(_coordsynth, m) {
    m.doc() = "Coordinator synthesis for CSP environments";
    py::register_exception<Error>(m, "CoordsynthError", PyExc_ValueError);

    m.def("generate", &benchgen::generate, py::arg("name"), py::arg("param") = 0, py::arg("seed") = 1);
    m.def("generator_names", &benchgen::generator_names);
    m.def("synthesize", &synthesize, py::arg("model"), py::arg("mode") = "symbolic", py::arg("bounds") = py::none(),
          py::arg("jobs") = 1, py::arg("timeout") = py::none(), py::arg("solver") = py::none());
    m.def("verify", &check, py::arg("model"), py::arg("coordinator"));
    m.def("enumerate_coordinators", &enumerate_coordinators, py::arg("model"), py::arg("states") = 2, py::arg("node_budget") = 20'000'000);
    m.def("spec_automaton",
          [](const std::string& text, const std::string& mode) {
              return pipeline::dump_spec_automaton(model::parse_model(text), mode_of(mode));
          },
          py::arg("model"), py::arg("mode") = "symbolic");
    m.def("holds_on_lasso", &holds_on_lasso, py::arg("formula"), py::arg("prefix"), py::arg("loop"),
          py::arg("actions") = std::vector<std::string>{},
          "Evaluates an LTL formula on prefix.loop^omega; `actions` lists atoms absent from the lasso.");
}
