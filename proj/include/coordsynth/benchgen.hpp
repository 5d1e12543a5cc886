#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "coordsynth/automata.hpp"
#include "coordsynth/types.hpp"

// Generators emit model text in the grammar accepted by model::parse_model.
namespace coordsynth::benchgen {

// Six small environments over public {a0, a1} and private {b} with liveness
// "F G !b" (b happens finitely often) and deadlock freedom.
std::string example(int k);

// Environment with a nondeterministic a0 branch into a dead end, a hidden
// b0 branch, and liveness "G F a1".
std::string hidden_branching();

// Sensor, heater and air conditioner; level 1 asks for JustRight infinitely
// often, level 2 also for both devices to be switched on infinitely often,
// level 3 also forbids overlapping on-periods of the two devices.
std::string thermostat(int level);

// n independent request/grant/release cycles with mutual exclusion,
// starvation freedom and infinitely many requests per process.
std::string arbiter(int n);

// Copy the input bit x (read through r0/r1) to the output bit y (written
// through w0/w1). Synchronous: every input step is a read. Otherwise the input
// may also change through hidden steps h0/h1.
std::string copy_relay(bool synchronous);

// Reduction from NFA non-universality. `a` must be complete with one initial
// state; its letter names become public actions next to sharp, plus, minus.
std::string universality_instance(const automata::FiniteNfa& a);

// Subset-construction oracle: a shortest word rejected by `a`, if any.
std::optional<Word> shortest_rejected(const automata::FiniteNfa& a);
bool is_universal(const automata::FiniteNfa& a);

// Complete NFA with one initial state, `states` states and letters "a", "b", ...
automata::FiniteNfa random_complete_nfa(std::mt19937_64& rng, std::size_t states, std::size_t letters);

// Registered generator names for the command line.
std::vector<std::string> generator_names();
// Dispatches by name; `param` is k, level or n where the generator takes one.
std::string generate(const std::string& name, int param, std::uint64_t seed);

}  // namespace coordsynth::benchgen
