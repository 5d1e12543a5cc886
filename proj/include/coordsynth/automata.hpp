#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "coordsynth/types.hpp"

namespace coordsynth::automata {

using State = std::uint32_t;
using Letter = std::uint32_t;

struct Edge {
    State src;
    Letter letter;
    State dst;
    auto operator<=>(const Edge&) const = default;
};

// Common shape of every automaton kind here: states, initial set, marked states,
// named letters and labelled edges.
struct Graph {
    std::size_t num_states = 0;
    std::vector<State> initial;
    std::vector<bool> green;  // Buchi green / co-Buchi rejecting / finite-word accepting
    std::vector<std::string> alphabet;
    std::vector<Edge> edges;  // sorted, unique

    void normalize();
    void validate() const;
    std::vector<std::vector<std::pair<Letter, State>>> successors() const;
    bool operator==(const Graph&) const = default;
};

// Accepts when some run visits green infinitely often.
struct Nba : Graph {};
// Accepts when every run visits green finitely often.
struct Ucw : Graph {};
// Finite words; green states are final.
struct FiniteNfa : Graph {};

// NBA whose acceptance additionally counts green edges; edge_green parallels edges.
struct EdgeGreenNba {
    Graph graph;
    std::vector<bool> edge_green;
};

bool nba_accepts_lasso(const Nba& a, const Lasso& w);
// Decided by ranking the run graph rather than by cycle search.
bool ucw_accepts_lasso(const Ucw& a, const Lasso& w);
// Acceptance when a green edge or a green state recurs.
bool edge_green_accepts_lasso(const EdgeGreenNba& a, const Lasso& w);
bool nfa_runs_word(const FiniteNfa& a, const Word& w);

Ucw as_ucw(const Nba& a);

Nba prune(const Nba& a);
Ucw prune(const Ucw& a);
FiniteNfa prune(const FiniteNfa& a);

Nba green_edges_to_states(const EdgeGreenNba& a);

// Adds a non-green sink so that every state has a successor on every letter.
// Language is unchanged; a no-state automaton becomes a lone sink.
Nba complete(const Nba& a);
FiniteNfa complete(const FiniteNfa& a);

FiniteNfa universal_nfa(const std::vector<std::string>& alphabet);
FiniteNfa empty_nfa(const std::vector<std::string>& alphabet);

// Line-oriented text form:
//   states N / initial i.. / green g.. / alphabet l.. / trans s letter t [g]
std::string serialize(const Graph& a);
std::string serialize(const EdgeGreenNba& a);
Graph deserialize(std::string_view text);

}  // namespace coordsynth::automata
