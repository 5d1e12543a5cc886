#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coordsynth/types.hpp"

namespace coordsynth::csp {

// Global symbol table of a model; ids are dense and stable.
class ActionTable {
public:
    ActionId intern(std::string_view name);
    std::optional<ActionId> find(std::string_view name) const;
    const std::string& name(ActionId id) const { return names_.at(id); }
    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, ActionId> index_;
};

struct Transition {
    StateId from;
    ActionId action;
    StateId to;
    auto operator<=>(const Transition&) const = default;
};

using Successors = std::vector<std::vector<std::pair<ActionId, StateId>>>;

// Finite labelled transition system with disjoint public and private alphabets.
struct Process {
    std::vector<std::string> state_names;
    StateId initial = 0;
    std::vector<ActionId> public_actions;   // sorted
    std::vector<ActionId> private_actions;  // sorted
    std::vector<Transition> transitions;    // sorted, no duplicates

    std::size_t num_states() const { return state_names.size(); }
    bool is_public(ActionId a) const;
    bool is_private(ActionId a) const;
    Successors successors() const;

    // Sorts and deduplicates alphabets and transitions; throws on a broken invariant.
    void normalize();
    void validate() const;
};

struct Network {
    std::vector<Process> agents;
    // sync_sets[i] is synchronized when agent i+1 joins the fold.
    std::vector<std::vector<ActionId>> sync_sets;
};

Process compose_pair(const Process& p, const Process& q, std::span<const ActionId> sync);
Process flatten_network(const Network& network);

std::vector<ActionId> enabled_public(const Process& p, StateId s);
std::vector<StateId> simulate(const Process& p, std::span<const ActionId> trace);
bool is_deterministic(const Process& p);

// Common public actions of two processes (the default synchronization set).
std::vector<ActionId> common_public(const Process& p, const Process& q);

// Reachable-part isomorphism that preserves action labels (small instances only).
bool isomorphic(const Process& p, const Process& q);

// Equational rendering, e.g. "process M = a0 -> M;".
std::string print_process(const Process& p, const ActionTable& actions);

}  // namespace coordsynth::csp
