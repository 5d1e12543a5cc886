#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coordsynth/automata.hpp"
#include "coordsynth/csp.hpp"
#include "coordsynth/model.hpp"

namespace coordsynth::verify {

enum class Kind { Pass, DeadlockSafety, FairLiveness };

struct Verdict {
    Kind kind = Kind::Pass;
    Word trace;   // deadlock-safety: the finite trace ending in the deadlock
    Lasso lasso;  // fair-liveness: the violating computation
    std::size_t product_states = 0;

    bool passed() const { return kind == Kind::Pass; }
};

std::string kind_name(Kind k);
// Shortest equivalent form: the loop reduced to its primitive root and the
// prefix shortened by rotating matching letters into the loop.
Lasso canonical_lasso(Lasso w);
// "a0 b ; ( b )^w" for lassos, the plain action list for finite traces.
std::string format_witness(const Verdict& v, const csp::ActionTable& actions);

// Model checker for one environment and requirement pair; reusable across candidates.
class Checker {
public:
    Checker(const csp::Process& env, const model::SpecPair& spec, const csp::ActionTable& actions);

    // `coordinator` must have no private actions and range over the environment's
    // public actions.
    Verdict check(const csp::Process& coordinator) const;

    // Fair-liveness lassos through a synchronization in `partial`. They survive
    // any later addition of coordinator transitions.
    Verdict persistent_violation(const csp::Process& partial) const { return check_liveness(partial, true); }

    // Does the witness still reproduce its violation?
    bool replay(const csp::Process& coordinator, const Verdict& v) const;

    const csp::Process& environment() const { return env_; }
    const automata::Nba& liveness_violations() const { return liveness_; }
    const automata::FiniteNfa& safety_violations() const { return safety_; }
    // Every maximal finite computation violates the safety part.
    bool deadlock_is_violation() const { return deadlock_is_violation_; }

private:
    Verdict check_safety(const csp::Process& m) const;
    Verdict check_liveness(const csp::Process& m, bool sync_loops_only) const;

    csp::Process env_;
    model::SpecPair spec_;
    automata::Nba liveness_;
    automata::FiniteNfa safety_;
    bool deadlock_is_violation_ = false;
};

Verdict check(const csp::Process& env, const csp::Process& coordinator, const model::SpecPair& spec,
              const csp::ActionTable& actions);

// Search over deterministic coordinators with at most `max_states` states. A
// candidate is only refined where the composed system actually reaches, so
// behaviourally identical candidates are visited once.
struct EnumerationResult {
    std::optional<csp::Process> solution;
    std::size_t max_states = 0;
    std::size_t candidates = 0;    // complete candidates checked
    std::size_t search_nodes = 0;  // partial candidates visited
    bool exhausted() const { return !solution; }
};

struct EnumerationLimits {
    std::size_t max_states = 2;
    std::size_t node_budget = 20'000'000;  // Error when exceeded
};

EnumerationResult enumerate_coordinators(const Checker& checker, const EnumerationLimits& limits);

// Independent bounded oracle: searches computations of the environment that
// follow the labels of the coordinator's tree for (A) a maximal finite one
// violating safety, (B) an infinite one that eventually stops synchronizing
// while nothing offered is enabled, or (C) an infinite one synchronizing
// infinitely often, violating liveness in the last two cases. Lassos are
// detected by repeated configurations within `max_steps`.
enum class Condition { None, A, B, C };
struct OracleWitness {
    Condition condition = Condition::None;
    Word trace;
    Lasso lasso;
};
OracleWitness check_violation_conditions(const Checker& checker, const csp::Process& coordinator,
                                         std::size_t max_steps = 14);

}  // namespace coordsynth::verify
