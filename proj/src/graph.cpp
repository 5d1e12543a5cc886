#include "coordsynth/graph.hpp"

#include <algorithm>

namespace coordsynth {

std::vector<std::uint32_t> strongly_connected(const Adjacency& adj, std::uint32_t* num_components) {
    const std::uint32_t n = static_cast<std::uint32_t>(adj.size());
    constexpr std::uint32_t unset = UINT32_MAX;
    std::vector<std::uint32_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<std::uint32_t> stack;
    std::vector<bool> on_stack(n, false);
    std::vector<std::pair<std::uint32_t, std::uint32_t>> call;  // node, next edge position
    std::uint32_t counter = 0, components = 0;

    for (std::uint32_t root = 0; root < n; ++root) {
        if (index[root] != unset) continue;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, pos] = call.back();
            if (pos == 0 && index[v] == unset) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (pos < adj[v].size()) {
                std::uint32_t w = adj[v][pos++];
                if (index[w] == unset) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                std::uint32_t w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = components;
                } while (w != v);
                ++components;
            }
            std::uint32_t done = v;
            call.pop_back();
            if (!call.empty()) {
                std::uint32_t parent = call.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    if (num_components) *num_components = components;
    return comp;
}

std::vector<bool> cyclic_components(const Adjacency& adj, const std::vector<std::uint32_t>& comp,
                                    std::uint32_t num_components) {
    std::vector<std::uint32_t> size(num_components, 0);
    for (auto c : comp) ++size[c];
    std::vector<bool> cyclic(num_components, false);
    for (std::uint32_t v = 0; v < adj.size(); ++v) {
        if (size[comp[v]] > 1) cyclic[comp[v]] = true;
        for (auto w : adj[v])
            if (w == v) cyclic[comp[v]] = true;
    }
    return cyclic;
}

std::vector<bool> forward_reachable(const Adjacency& adj, const std::vector<std::uint32_t>& from) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<std::uint32_t> work;
    for (auto s : from)
        if (!seen[s]) {
            seen[s] = true;
            work.push_back(s);
        }
    while (!work.empty()) {
        auto v = work.back();
        work.pop_back();
        for (auto w : adj[v])
            if (!seen[w]) {
                seen[w] = true;
                work.push_back(w);
            }
    }
    return seen;
}

std::vector<bool> backward_reachable(const Adjacency& adj, const std::vector<bool>& targets) {
    Adjacency rev(adj.size());
    for (std::uint32_t v = 0; v < adj.size(); ++v)
        for (auto w : adj[v]) rev[w].push_back(v);
    std::vector<std::uint32_t> from;
    for (std::uint32_t v = 0; v < targets.size(); ++v)
        if (targets[v]) from.push_back(v);
    return forward_reachable(rev, from);
}

}  // namespace coordsynth
