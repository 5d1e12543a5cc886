#pragma once

#include <cstdint>
#include <vector>

namespace coordsynth {

using Adjacency = std::vector<std::vector<std::uint32_t>>;

// Strongly connected components (iterative Tarjan). Component ids come out in
// reverse topological order: an edge u->v implies comp[u] >= comp[v].
std::vector<std::uint32_t> strongly_connected(const Adjacency& adj, std::uint32_t* num_components = nullptr);

// Components that contain a cycle (more than one node, or a self-loop).
std::vector<bool> cyclic_components(const Adjacency& adj, const std::vector<std::uint32_t>& comp,
                                    std::uint32_t num_components);

std::vector<bool> forward_reachable(const Adjacency& adj, const std::vector<std::uint32_t>& from);
std::vector<bool> backward_reachable(const Adjacency& adj, const std::vector<bool>& targets);

}  // namespace coordsynth
