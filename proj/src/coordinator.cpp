#include "coordsynth/coordinator.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace coordsynth::coord {

csp::Process moore_to_csp(const synth::MooreMachine& m, const std::string& name) {
    m.validate();
    csp::Process p;
    for (std::size_t s = 0; s < m.num_states(); ++s) p.state_names.push_back(s == 0 ? name : name + std::to_string(s));
    p.initial = 0;
    p.public_actions = m.sigma;
    for (std::uint32_t s = 0; s < m.num_states(); ++s)
        for (std::size_t a = 0; a < m.sigma.size(); ++a)
            if (m.output[s][a]) p.transitions.push_back({s, m.sigma[a], m.next[s][a]});
    p.normalize();
    return p;
}

csp::Process hide_internal(const csp::Process& m) {
    m.validate();
    if (m.private_actions.empty()) return m;
    const std::size_t n = m.num_states();
    const auto succ = m.successors();
    // closure[s]: states reachable from s by private steps, s included.
    std::vector<std::vector<StateId>> closure(n);
    for (StateId s = 0; s < n; ++s) {
        std::vector<bool> seen(n, false);
        std::vector<StateId> stack{s};
        seen[s] = true;
        while (!stack.empty()) {
            StateId u = stack.back();
            stack.pop_back();
            closure[s].push_back(u);
            for (auto [a, v] : succ[u])
                if (m.is_private(a) && !seen[v]) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
    }
    csp::Process out;
    out.state_names = m.state_names;
    out.initial = m.initial;
    out.public_actions = m.public_actions;
    for (StateId s = 0; s < n; ++s)
        for (StateId u : closure[s])
            for (auto [a, v] : succ[u]) {
                if (m.is_private(a)) continue;
                for (StateId t : closure[v]) out.transitions.push_back({s, a, t});
            }
    out.normalize();
    return out;
}

csp::Process restrict_deterministic(const csp::Process& m) {
    m.validate();
    if (!m.private_actions.empty()) throw Error("restrict_deterministic needs a process without private actions");
    csp::Process out = m;
    out.transitions.clear();
    // Transitions are sorted by (from, action, to), so the first of each run has the smallest target.
    for (const auto& t : m.transitions)
        if (out.transitions.empty() || out.transitions.back().from != t.from || out.transitions.back().action != t.action)
            out.transitions.push_back(t);
    return out;
}

std::vector<ActionId> TreePrefix::label(const Word& path) const {
    if (path.size() > depth_) throw Error("path is deeper than the tree prefix");
    std::uint32_t node = 0;
    for (ActionId a : path) {
        auto it = std::lower_bound(sigma_.begin(), sigma_.end(), a);
        if (it == sigma_.end() || *it != a) throw Error("action outside the tree alphabet");
        node = nodes_[node].child[static_cast<std::size_t>(it - sigma_.begin())];
    }
    std::vector<ActionId> out;
    for (std::size_t i = 0; i < sigma_.size(); ++i)
        if (nodes_[node].label[i]) out.push_back(sigma_[i]);
    return out;
}

TreePrefix fulltree_prefix(const csp::Process& m, std::size_t depth) {
    m.validate();
    if (depth > kMaxTreeDepth) throw Error("tree depth is capped at " + std::to_string(kMaxTreeDepth));
    if (!m.private_actions.empty()) throw Error("fulltree_prefix needs a process without private actions");
    if (!csp::is_deterministic(m)) throw Error("fulltree_prefix needs a deterministic process");
    const auto& sigma = m.public_actions;
    const std::size_t k = sigma.size();
    // successor[s][i]: target of sigma[i] at s, or -1.
    std::vector<std::vector<std::int64_t>> successor(m.num_states(), std::vector<std::int64_t>(k, -1));
    for (const auto& t : m.transitions) {
        auto i = static_cast<std::size_t>(std::lower_bound(sigma.begin(), sigma.end(), t.action) - sigma.begin());
        successor[t.from][i] = t.to;
    }
    TreePrefix tree(sigma, depth);
    auto& nodes = tree.nodes();
    std::vector<std::int64_t> state;  // per node; -1 when unreachable
    nodes.push_back({});
    state.push_back(m.initial);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::int64_t s = state[i];
        nodes[i].label.assign(k, false);
        if (s >= 0)
            for (std::size_t a = 0; a < k; ++a) nodes[i].label[a] = successor[static_cast<std::size_t>(s)][a] >= 0;
        if (nodes[i].depth == depth) continue;
        for (std::size_t a = 0; a < k; ++a) {
            auto c = static_cast<std::uint32_t>(nodes.size());
            TreePrefix::Node child;
            child.depth = nodes[i].depth + 1;
            nodes.push_back(std::move(child));
            state.push_back(s >= 0 ? successor[static_cast<std::size_t>(s)][a] : -1);
            nodes[i].child.push_back(c);
        }
    }
    return tree;
}

TreeProcess proc_of_tree(const TreePrefix& t) {
    const auto& nodes = t.nodes();
    const auto& sigma = t.sigma();
    TreeProcess out;
    auto& p = out.process;
    p.public_actions = sigma;
    std::map<std::uint32_t, StateId> index{{0, 0}};
    std::vector<std::uint32_t> order{0};
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto& node = nodes[order[i]];
        if (node.child.empty()) continue;
        for (std::size_t a = 0; a < sigma.size(); ++a) {
            if (!node.label[a]) continue;
            auto c = node.child[a];
            auto [it, fresh] = index.try_emplace(c, static_cast<StateId>(order.size()));
            if (fresh) order.push_back(c);
            p.transitions.push_back({static_cast<StateId>(i), sigma[a], it->second});
        }
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        p.state_names.push_back("T" + std::to_string(i));
        out.frontier.push_back(nodes[order[i]].child.empty());
    }
    p.initial = 0;
    p.normalize();
    return out;
}

bool bisimilar_to_depth(const csp::Process& a, const csp::Process& b, std::size_t depth) {
    a.validate();
    b.validate();
    const auto sa = a.successors();
    const auto sb = b.successors();
    const std::size_t na = a.num_states(), nb = b.num_states();
    // related[s * nb + t] after k refinement rounds.
    std::vector<bool> related(na * nb, true);
    auto matched = [&](const auto& from, const auto& to, bool forward, const std::vector<bool>& rel) {
        for (auto [act, s2] : from) {
            bool found = false;
            for (auto [act2, t2] : to)
                if (act2 == act && (forward ? rel[s2 * nb + t2] : rel[t2 * nb + s2])) {
                    found = true;
                    break;
                }
            if (!found) return false;
        }
        return true;
    };
    for (std::size_t k = 0; k < depth; ++k) {
        std::vector<bool> next(na * nb, false);
        for (StateId s = 0; s < na; ++s)
            for (StateId t = 0; t < nb; ++t)
                next[s * nb + t] = matched(sa[s], sb[t], true, related) && matched(sb[t], sa[s], false, related);
        if (next == related) break;
        related = std::move(next);
    }
    return related[a.initial * nb + b.initial];
}

}  // namespace coordsynth::coord
