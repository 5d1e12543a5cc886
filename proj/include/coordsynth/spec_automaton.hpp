#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "coordsynth/automata.hpp"
#include "coordsynth/bdd.hpp"
#include "coordsynth/csp.hpp"
#include "coordsynth/model.hpp"

namespace coordsynth::spec {

enum class Mode { Explicit, Symbolic };

// Inputs of the construction. Both automata read single actions (ids of the
// model's action table) and are complete, so every finite computation of the
// environment has a run in each of them.
struct Components {
    csp::Process env;
    automata::Nba liveness;      // violations of the liveness formula (green = bad)
    automata::FiniteNfa safety;  // violations of the safety part (final = bad)
    std::vector<ActionId> sigma;  // public actions of env, ascending
    std::vector<ActionId> gamma;  // private actions of env, ascending
    std::size_t num_actions = 0;

    std::size_t product_size() const { return liveness.num_states * safety.num_states * env.num_states(); }
    std::uint32_t product_index(std::uint32_t q, std::uint32_t r, std::uint32_t e) const {
        return static_cast<std::uint32_t>((q * safety.num_states + r) * env.num_states() + e);
    }
};

Components make_components(const csp::Process& env, const model::SpecPair& spec, const csp::ActionTable& actions);

// State 0 is Fail, state 1 is Sink, the rest are (q,r,e) triples.
inline constexpr std::uint32_t kFail = 0;
inline constexpr std::uint32_t kSink = 1;

// A transition on public action sigma[action] whose guard is a predicate over
// the offered set (guard-manager variable i stands for sigma[i] being offered).
struct GuardedEdge {
    std::uint32_t src;
    std::uint32_t action;
    std::uint32_t dst;
    bool green;
    bdd::Bdd guard;
};

struct SpecAutomaton {
    std::shared_ptr<bdd::Manager> guards;
    std::vector<ActionId> sigma;
    std::vector<std::array<std::uint32_t, 3>> normal;  // normal[i] describes state i + 2
    std::vector<std::uint32_t> initial;
    std::vector<bool> green;
    std::vector<GuardedEdge> edges;  // sorted by (src, action, dst, green)

    std::size_t num_states() const { return normal.size() + 2; }
    std::string state_name(std::uint32_t s) const;
};

// Co-Buchi automaton over (action, offered set) with green states only.
struct GuardedUcw {
    struct Edge {
        std::uint32_t src;
        std::uint32_t action;
        std::uint32_t dst;
        bdd::Bdd guard;
    };
    std::shared_ptr<bdd::Manager> guards;
    std::vector<ActionId> sigma;
    std::size_t num_states = 0;
    std::vector<std::uint32_t> initial;
    std::vector<bool> green;
    std::vector<Edge> edges;  // sorted by (src, action, dst); one edge per triple
    std::vector<std::string> names;
};

// Passing a guard manager lets two builds share guard node identities.
SpecAutomaton build_spec_automaton(const Components& c, Mode mode,
                                   std::shared_ptr<bdd::Manager> guards = nullptr);

// Moves edge greenness into a flagged copy of the target, drops unreachable
// states, and removes non-green edges that a green edge to the same target
// already covers (a co-Buchi run only gets worse by visiting a green state).
GuardedUcw to_ucw(const SpecAutomaton& b);

// Letter-level expansions for small public alphabets. Letter
// composite_letter(a, offered) stands for (sigma[a], offered); the edge-green
// form doubles it and adds the g bit. With action names, letters are spelled
// "a0|{a0,a1}|1", otherwise "l<index>".
automata::EdgeGreenNba expand_letters(const SpecAutomaton& b, const std::vector<std::string>& action_names = {});
automata::Ucw expand_letters(const GuardedUcw& u);
std::uint32_t composite_letter(std::size_t sigma_size, std::uint32_t action, std::uint64_t offered);

// Identical states, edges and guards; guards are compared by transfer into the
// first automaton's manager. Describes the first difference in `diff`.
bool same_automaton(const SpecAutomaton& x, const SpecAutomaton& y, std::string* diff = nullptr);

// Copies f into `to`, renaming variable v to map[v].
bdd::Bdd transfer(bdd::Manager& from, bdd::Bdd f, bdd::Manager& to, const std::vector<std::uint32_t>& map);

// Variable order of the symbolic construction: per state bit (over the q, r, e
// encodings concatenated) three interleaved copies, then g, g0, g1, the action
// bits over sigma followed by gamma, then one offered-set bit per sigma element.
struct Layout {
    std::uint32_t q_bits = 0, r_bits = 0, e_bits = 0, action_bits = 0, sigma_size = 0;
    std::uint32_t num_q = 0, num_r = 0, num_e = 0, num_all_actions = 0;

    static Layout make(const Components& c);
    std::uint32_t state_bits() const { return q_bits + r_bits + e_bits; }
    std::uint32_t x(std::uint32_t i, std::uint32_t copy = 0) const { return 3 * i + copy; }
    std::uint32_t g() const { return 3 * state_bits(); }
    std::uint32_t g0() const { return g() + 1; }
    std::uint32_t g1() const { return g() + 2; }
    std::uint32_t act(std::uint32_t i) const { return g() + 3 + i; }
    std::uint32_t offered(std::uint32_t i) const { return g() + 3 + action_bits + i; }
    std::uint32_t num_vars() const { return g() + 3 + action_bits + sigma_size; }

    // Levels of the q, r and e parts of one state copy.
    std::vector<std::uint32_t> q_levels(std::uint32_t copy) const;
    std::vector<std::uint32_t> r_levels(std::uint32_t copy) const;
    std::vector<std::uint32_t> e_levels(std::uint32_t copy) const;
    std::vector<std::uint32_t> state_levels(std::uint32_t copy) const;
    std::vector<std::uint32_t> action_levels() const;
    std::vector<std::uint32_t> offered_levels() const;

    // Bit values (most significant first) matching the level vectors above.
    std::vector<bool> encode_state(std::uint32_t q, std::uint32_t r, std::uint32_t e) const;
    std::vector<bool> encode_action(std::uint32_t index) const;  // index into sigma ++ gamma
};

// The auxiliary relations over one Layout. `nosynch` already requires the
// lasso's loop to see a liveness-green state.
struct Relations {
    std::shared_ptr<bdd::Manager> mgr;
    Layout layout;
    bdd::Bdd enabled;       // (action, e)
    bdd::Bdd efail;         // (r, e, offered)
    bdd::Bdd eprivate;      // (x, g, x')
    bdd::Bdd gen_eprivate;  // (x, g, offered, x')
    bdd::Bdd nosynch;       // (x, offered)
    bdd::Bdd esink;         // (action, e, offered)
    bdd::Bdd normal_trans;  // (x, action, g, x')
};

Relations symbolic_relations(const Components& c);
// The explicit computation, encoded into `into`'s manager and layout for comparison.
Relations explicit_relations(const Components& c, const Relations& into);

struct CrossCheck {
    std::vector<std::string> mismatches;
    bool ok() const { return mismatches.empty(); }
};
CrossCheck cross_check(const Components& c);

// Equivalence classes of offered sets that the construction cannot tell apart:
// all sets leaving the same environment states without a direct synchronization.
struct OfferedClass {
    std::vector<bool> allowed;  // per environment state: no public action offered there
    bdd::Bdd guard;             // in the guard manager
};
std::vector<OfferedClass> offered_classes(const Components& c, bdd::Manager& guards, bool force_unions = false);

}  // namespace coordsynth::spec
