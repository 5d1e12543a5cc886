#pragma once

#include <string>

#include "coordsynth/benchgen.hpp"
#include "coordsynth/model.hpp"
#include "coordsynth/spec_automaton.hpp"

namespace fixtures {

struct Loaded {
    coordsynth::model::Model model;
    coordsynth::csp::Process env;
    coordsynth::spec::Components components;
};

inline Loaded load(const std::string& text) {
    Loaded l;
    l.model = coordsynth::model::parse_model(text);
    l.env = coordsynth::model::environment(l.model);
    l.components = coordsynth::spec::make_components(l.env, l.model.spec, l.model.actions);
    return l;
}

inline coordsynth::ActionId act(const Loaded& l, const std::string& name) { return *l.model.actions.find(name); }

}  // namespace fixtures
