#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coordsynth/csp.hpp"
#include "coordsynth/synthesis.hpp"

namespace coordsynth::coord {

// State s of the machine becomes state s of the process, named "M" for the
// initial state and "M<s>" otherwise; a is enabled at s iff it is in the output.
csp::Process moore_to_csp(const synth::MooreMachine& m, const std::string& name = "M");

// Replaces every private-action detour by direct public steps:
// (s, a, t) iff s reaches t by internal* a internal*.
csp::Process hide_internal(const csp::Process& m);

// Keeps, per state and action, the successor with the smallest index.
// Throws when private actions are present.
csp::Process restrict_deterministic(const csp::Process& m);

// Labels of the complete sigma-branching tree up to a depth. Each node stores
// the actions enabled at the end of its (unique) computation, or nothing when
// the string cannot be executed.
class TreePrefix {
public:
    struct Node {
        std::vector<bool> label;           // per sigma index
        std::vector<std::uint32_t> child;  // per sigma index; empty at the last level
        std::uint32_t depth = 0;
    };

    TreePrefix(std::vector<ActionId> sigma, std::size_t depth) : sigma_(std::move(sigma)), depth_(depth) {}

    const std::vector<ActionId>& sigma() const { return sigma_; }
    std::size_t depth() const { return depth_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    std::vector<Node>& nodes() { return nodes_; }

    // Enabled actions at the node reached by `path`; throws past the depth.
    std::vector<ActionId> label(const Word& path) const;

private:
    std::vector<ActionId> sigma_;
    std::size_t depth_;
    std::vector<Node> nodes_;  // node 0 is the root
};

inline constexpr std::size_t kMaxTreeDepth = 6;

TreePrefix fulltree_prefix(const csp::Process& m, std::size_t depth);

// Nodes reachable through enabled actions become states; nodes at the last
// level keep no transitions and are flagged in `frontier`.
struct TreeProcess {
    csp::Process process;
    std::vector<bool> frontier;
};
TreeProcess proc_of_tree(const TreePrefix& t);

// Bisimilarity of the initial states for `depth` steps: the relation refined
// `depth` times from the total one.
bool bisimilar_to_depth(const csp::Process& a, const csp::Process& b, std::size_t depth);

}  // namespace coordsynth::coord
