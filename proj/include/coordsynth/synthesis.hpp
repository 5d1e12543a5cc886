#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "coordsynth/sat.hpp"
#include "coordsynth/spec_automaton.hpp"

namespace coordsynth::synth {

// Deterministic machine over the public actions; output[s][i] says whether
// sigma[i] is offered in state s. Transitions are total.
struct MooreMachine {
    std::vector<ActionId> sigma;
    std::vector<std::vector<bool>> output;
    std::vector<std::vector<std::uint32_t>> next;

    std::size_t num_states() const { return output.size(); }
    void validate() const;
    bool operator==(const MooreMachine&) const = default;
};

// Keeps states reachable through offered actions, merges equivalent ones and
// numbers the rest in breadth-first order. Transitions on actions that are not
// offered become self-loops.
MooreMachine minimize(const MooreMachine& m);

// Propositional form of "an N-state machine whose run graph with the automaton
// visits green states boundedly often".
class Encoding {
public:
    Encoding(const spec::GuardedUcw& ucw, std::size_t bound);

    const sat::Cnf& cnf() const { return cnf_; }
    std::size_t bound() const { return bound_; }
    std::uint32_t counter_width() const { return counter_width_; }
    // (state, machine state, action) triples visited while emitting constraints.
    std::size_t constraint_groups() const { return groups_; }

    sat::Lit transition(std::uint32_t s, std::uint32_t a, std::uint32_t t) const;
    sat::Lit output(std::uint32_t s, std::uint32_t a) const;
    // 0 for automaton states that need no annotation.
    sat::Lit active(std::uint32_t q, std::uint32_t s) const { return active_[q * bound_ + s]; }

    std::string dimacs() const;
    MooreMachine extract(const sat::Result& model) const;

private:
    sat::Lit guard_literal(std::uint32_t node, std::uint32_t s);
    sat::Lit comparator(std::uint32_t q, std::uint32_t s, std::uint32_t q2, std::uint32_t s2, bool strict);

    const spec::GuardedUcw& ucw_;
    std::size_t bound_;
    std::size_t sigma_;
    std::uint32_t counter_width_ = 0;
    std::size_t groups_ = 0;
    sat::Cnf cnf_;
    std::vector<sat::Lit> trans_;
    std::vector<sat::Lit> out_;
    std::vector<sat::Lit> active_;
    std::vector<std::vector<sat::Lit>> counter_;  // per q*bound+s, most significant bit first
    std::unordered_map<std::uint64_t, sat::Lit> guard_memo_;
    std::unordered_map<std::uint64_t, sat::Lit> cmp_memo_;
};

// Independent acceptance check of the machine against the automaton: the
// reachable product must have no cycle through a green state, and no path may
// see more than |Q|*N green states.
struct RunGraphCheck {
    bool ok = false;
    std::size_t product_states = 0;
    std::size_t max_greens = 0;
    std::size_t limit = 0;
    std::string detail;
};
RunGraphCheck recheck(const spec::GuardedUcw& ucw, const MooreMachine& m, std::size_t bound);

enum class SolverKind { Auto, BuiltIn, External };

struct SolverConfig {
    SolverKind kind = SolverKind::Auto;
    std::string external_path;
    std::size_t builtin_clause_limit = 2'000'000;  // Auto switches to external at this size
    std::optional<std::chrono::seconds> timeout;    // per bound
    bool learning = true;
    bool minimize_outputs = true;
    bool prefer_self_loops = true;
    // Sigma indices in the order used for the canonical choices; empty means ascending.
    std::vector<std::uint32_t> action_order;
    // Conflicts allowed per minimization probe; a probe that runs out keeps the output.
    std::uint64_t probe_budget = 20000;
    unsigned jobs = 1;
    std::string artifacts_dir;  // DIMACS files are kept here when non-empty
};

struct BoundAttempt {
    std::size_t bound = 0;
    std::uint32_t variables = 0;
    std::size_t clauses = 0;
    std::size_t constraint_groups = 0;
    sat::Status status = sat::Status::Unknown;
    bool skipped = false;  // a smaller bound succeeded first
    std::string solver;
};

struct Outcome {
    std::optional<MooreMachine> machine;  // minimized
    std::optional<MooreMachine> raw;      // as read from the model
    std::size_t bound = 0;                // satisfiable bound, or the largest refuted one
    bool incomplete = false;              // some bound ended without an answer
    std::vector<BoundAttempt> attempts;
    RunGraphCheck certificate;
};

std::vector<std::size_t> default_schedule();

// Tries bounds in order; the smallest satisfiable one wins.
Outcome synthesize(const spec::GuardedUcw& ucw, std::span<const std::size_t> schedule, const SolverConfig& cfg);

}  // namespace coordsynth::synth
