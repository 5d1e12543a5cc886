#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "coordsynth/automata.hpp"
#include "coordsynth/csp.hpp"
#include "coordsynth/ltl.hpp"

namespace coordsynth::model {

// Safety part stored as an automaton for its complement (accepted words are
// violations); liveness part as an LTL formula over all actions.
struct SpecPair {
    automata::FiniteNfa safety_complement;
    ltl::Formula liveness;
    std::string liveness_text = "true";
};

// One alternative `a -> b -> Target` of a process equation.
struct Branch {
    std::vector<ActionId> actions;  // non-empty
    std::string target;             // process name or "STOP"
};

struct ProcessDef {
    std::string name;
    std::vector<Branch> branches;  // empty means STOP
};

struct SystemOperand {
    std::string root;
    // Sync set used when this operand joins the fold; nullopt means all common
    // public actions. Ignored for the first operand.
    std::optional<std::vector<ActionId>> sync;
};

enum class SafetyForm { Universal, Empty, Explicit };

struct Model {
    csp::ActionTable actions;
    std::vector<ActionId> declared_public;   // declaration order
    std::vector<ActionId> declared_private;  // declaration order
    std::vector<ProcessDef> processes;
    std::vector<SystemOperand> system;
    SafetyForm safety_form = SafetyForm::Universal;
    SpecPair spec;

    std::vector<std::string> action_names() const { return actions.names(); }
};

// Errors carry "line L, column C" positions.
Model parse_model(std::string_view text);

// One agent per system operand: the equations reachable from its root.
csp::Network build_network(const Model& m);

// Flattened environment. Declared public actions that no agent uses are kept in
// the public alphabet so that coordinators may still offer them.
csp::Process environment(const Model& m);

// Public alphabet of the environment, ascending.
std::vector<ActionId> environment_alphabet(const Model& m);

// Canonical text form; parse_model(print_model(m)) reproduces m.
std::string print_model(const Model& m);

// A model consisting of a single coordinator process, as written by print_process.
// Actions are resolved against `actions`; the first equation is the initial state.
csp::Process parse_coordinator(std::string_view text, const csp::ActionTable& actions,
                               const std::vector<ActionId>& alphabet);

}  // namespace coordsynth::model
