#pragma once

#include <utility>
#include <vector>

#include "coordsynth/csp.hpp"

namespace coordsynth::verify::detail {

// One move of E || M: a private environment step, or a joint public step.
struct Step {
    ActionId action;
    StateId env;
    StateId coord;
    bool sync;
};

// Environment composed with a coordinator that synchronizes on all public actions.
class Composition {
public:
    Composition(const csp::Process& env, const csp::Process& coordinator);

    void successors(StateId e, StateId m, std::vector<Step>& out) const;
    // Some public action is enabled on both sides.
    bool sync_enabled(StateId e, StateId m) const;
    bool is_public(ActionId a) const { return a < is_public_.size() && is_public_[a]; }

private:
    csp::Successors env_succ_;
    csp::Successors coord_succ_;
    std::vector<bool> is_public_;
};

}  // namespace coordsynth::verify::detail
