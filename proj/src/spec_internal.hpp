#pragma once

// Pieces shared by the explicit and symbolic constructions.

#include <cstdint>
#include <memory>
#include <vector>

#include "coordsynth/spec_automaton.hpp"

namespace coordsynth::spec::detail {

// Edge whose endpoints are product indices shifted by two; 0 and 1 keep their
// meaning as Fail and Sink.
struct RawEdge {
    std::uint32_t src;
    std::uint32_t action;
    std::uint32_t dst;
    bool green;
    bdd::Bdd guard;
};

inline std::uint32_t shifted(std::uint32_t product) { return product + 2; }

// Renumbers the reachable normal states by ascending product index, adds the
// Fail and Sink loops and sorts everything.
SpecAutomaton assemble(const Components& c, std::shared_ptr<bdd::Manager> guards,
                       const std::vector<std::uint32_t>& initial_products, std::vector<std::uint32_t> reachable,
                       std::vector<RawEdge> edges);

std::vector<std::uint32_t> initial_products(const Components& c);

// Per environment state, the directly offered public actions as a bit mask over sigma indices.
std::vector<std::uint64_t> public_masks(const Components& c);

std::shared_ptr<bdd::Manager> guard_manager(const Components& c, std::shared_ptr<bdd::Manager> given);

SpecAutomaton build_explicit(const Components& c, std::shared_ptr<bdd::Manager> guards);
SpecAutomaton build_symbolic(const Components& c, std::shared_ptr<bdd::Manager> guards);

// Builds the function whose satisfying assignments over `levels` (ascending)
// are exactly `rows` (each row lists values in level order).
bdd::Bdd from_rows(bdd::Manager& m, const std::vector<std::uint32_t>& levels, std::vector<std::vector<bool>> rows);

}  // namespace coordsynth::spec::detail
