#include "coordsynth/verify.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "coordsynth/graph.hpp"
#include "coordsynth/ltl.hpp"
#include "verify_internal.hpp"

namespace coordsynth::verify {

namespace detail {

Composition::Composition(const csp::Process& env, const csp::Process& coordinator)
    : env_succ_(env.successors()), coord_succ_(coordinator.successors()) {
    if (!coordinator.private_actions.empty()) throw Error("coordinator must not have private actions");
    if (coordinator.public_actions != env.public_actions)
        throw Error("coordinator alphabet differs from the environment's public actions");
    for (auto& row : coord_succ_) std::sort(row.begin(), row.end());
    ActionId top = 0;
    for (ActionId a : env.public_actions) top = std::max(top, a + 1);
    for (ActionId a : env.private_actions) top = std::max(top, a + 1);
    is_public_.assign(top, false);
    for (ActionId a : env.public_actions) is_public_[a] = true;
}

void Composition::successors(StateId e, StateId m, std::vector<Step>& out) const {
    out.clear();
    for (auto [a, e2] : env_succ_[e]) {
        if (!is_public_[a]) {
            out.push_back({a, e2, m, false});
            continue;
        }
        const auto& row = coord_succ_[m];
        auto it = std::lower_bound(row.begin(), row.end(), std::pair<ActionId, StateId>{a, 0});
        for (; it != row.end() && it->first == a; ++it) out.push_back({a, e2, it->second, true});
    }
}

bool Composition::sync_enabled(StateId e, StateId m) const {
    for (auto [a, e2] : env_succ_[e]) {
        (void)e2;
        if (!is_public_[a]) continue;
        const auto& row = coord_succ_[m];
        auto it = std::lower_bound(row.begin(), row.end(), std::pair<ActionId, StateId>{a, 0});
        if (it != row.end() && it->first == a) return true;
    }
    return false;
}

}  // namespace detail

using detail::Composition;
using detail::Step;

std::string kind_name(Kind k) {
    switch (k) {
        case Kind::Pass: return "pass";
        case Kind::DeadlockSafety: return "deadlock-safety";
        case Kind::FairLiveness: return "fair-liveness";
    }
    return "?";
}

Lasso canonical_lasso(Lasso w) {
    const std::size_t n = w.loop.size();
    for (std::size_t period = 1; period < n; ++period) {
        if (n % period) continue;
        bool repeats = true;
        for (std::size_t i = period; i < n && repeats; ++i) repeats = w.loop[i] == w.loop[i - period];
        if (repeats) {
            w.loop.resize(period);
            break;
        }
    }
    while (!w.prefix.empty() && !w.loop.empty() && w.prefix.back() == w.loop.back()) {
        std::rotate(w.loop.rbegin(), w.loop.rbegin() + 1, w.loop.rend());
        w.prefix.pop_back();
    }
    return w;
}

std::string format_witness(const Verdict& v, const csp::ActionTable& actions) {
    auto join = [&](const Word& w) {
        std::string out;
        for (ActionId a : w) {
            if (!out.empty()) out += ' ';
            out += actions.name(a);
        }
        return out;
    };
    switch (v.kind) {
        case Kind::Pass: return "";
        case Kind::DeadlockSafety: return join(v.trace);
        case Kind::FairLiveness: {
            std::string pre = join(v.lasso.prefix);
            return (pre.empty() ? "" : pre + " ") + "; ( " + join(v.lasso.loop) + " )^w";
        }
    }
    return "";
}

namespace {

// All subsets of safety states reachable by some word contain a final state.
bool every_prefix_violates(const automata::FiniteNfa& a) {
    std::vector<bool> start(a.num_states, false);
    for (auto s : a.initial) start[s] = true;
    const auto succ = a.successors();
    std::map<std::vector<bool>, bool> seen;
    std::deque<std::vector<bool>> queue{start};
    seen[start] = true;
    std::vector<automata::Letter> letters(a.alphabet.size());
    for (std::size_t l = 0; l < letters.size(); ++l) letters[l] = static_cast<automata::Letter>(l);
    while (!queue.empty()) {
        auto cur = queue.front();
        queue.pop_front();
        bool final = false;
        for (std::size_t s = 0; s < a.num_states; ++s) final = final || (cur[s] && a.green[s]);
        if (!final) return false;
        for (auto l : letters) {
            std::vector<bool> next(a.num_states, false);
            for (std::size_t s = 0; s < a.num_states; ++s)
                if (cur[s])
                    for (auto [m, t] : succ[s])
                        if (m == l) next[t] = true;
            if (seen.emplace(next, true).second) queue.push_back(std::move(next));
        }
    }
    return true;
}

bool has_final_reachable(const automata::FiniteNfa& a) {
    Adjacency adj(a.num_states);
    for (const auto& e : a.edges) adj[e.src].push_back(e.dst);
    auto reach = forward_reachable(adj, a.initial);
    for (std::size_t s = 0; s < a.num_states; ++s)
        if (reach[s] && a.green[s]) return true;
    return false;
}

// Breadth-first path inside `allowed` (all nodes when empty) from any source to
// a node satisfying `is_goal`; returns the edge indices taken.
template <class Goal>
std::optional<std::vector<std::size_t>> bfs_path(const std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>>& out,
                                                 const std::vector<std::uint32_t>& sources, const std::vector<bool>& allowed,
                                                 Goal is_goal) {
    const std::size_t n = out.size();
    std::vector<std::int64_t> parent_edge(n, -1);
    std::vector<std::int64_t> parent(n, -2);
    std::deque<std::uint32_t> queue;
    for (auto s : sources) {
        if (!allowed.empty() && !allowed[s]) continue;
        if (parent[s] != -2) continue;
        parent[s] = -1;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        auto u = queue.front();
        queue.pop_front();
        if (is_goal(u)) {
            std::vector<std::size_t> path;
            for (auto v = static_cast<std::int64_t>(u); parent[v] >= 0; v = parent[v])
                path.push_back(static_cast<std::size_t>(parent_edge[v]));
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (auto [v, edge] : out[u]) {
            if (!allowed.empty() && !allowed[v]) continue;
            if (parent[v] != -2) continue;
            parent[v] = u;
            parent_edge[v] = static_cast<std::int64_t>(edge);
            queue.push_back(v);
        }
    }
    return std::nullopt;
}

}  // namespace

Checker::Checker(const csp::Process& env, const model::SpecPair& spec, const csp::ActionTable& actions)
    : env_(env), spec_(spec) {
    env_.normalize();
    liveness_ = automata::complete(ltl::to_nba(ltl::negate(spec.liveness), actions.names()));
    if (spec.safety_complement.alphabet != actions.names())
        throw Error("safety automaton alphabet differs from the model's actions");
    safety_ = automata::complete(automata::prune(spec.safety_complement));
    deadlock_is_violation_ = every_prefix_violates(safety_);
}

Verdict Checker::check(const csp::Process& coordinator) const {
    Verdict v = check_safety(coordinator);
    if (!v.passed()) return v;
    return check_liveness(coordinator, false);
}

Verdict Checker::check_safety(const csp::Process& m) const {
    Verdict v;
    if (!deadlock_is_violation_ && !has_final_reachable(safety_)) return v;
    Composition comp(env_, m);
    if (safety_.num_states > 64) throw Error("safety automaton too large for subset tracking");
    const auto ssucc = safety_.successors();
    std::uint64_t final_mask = 0;
    for (std::size_t s = 0; s < safety_.num_states; ++s)
        if (safety_.green[s]) final_mask |= std::uint64_t{1} << s;
    auto post = [&](std::uint64_t set, ActionId a) {
        std::uint64_t out = 0;
        for (std::size_t s = 0; s < safety_.num_states; ++s)
            if (set >> s & 1)
                for (auto [l, t] : ssucc[s])
                    if (l == a) out |= std::uint64_t{1} << t;
        return out;
    };
    std::uint64_t start = 0;
    for (auto s : safety_.initial) start |= std::uint64_t{1} << s;
    // Subsets are irrelevant when every prefix already violates.
    const bool track = !deadlock_is_violation_;

    struct Node {
        StateId e, m;
        std::uint64_t set;
        std::int64_t parent;
        ActionId via;
    };
    std::vector<Node> nodes{{env_.initial, m.initial, track ? start : 0, -1, 0}};
    std::map<std::tuple<StateId, StateId, std::uint64_t>, std::size_t> index{{{env_.initial, m.initial, nodes[0].set}, 0}};
    std::vector<Step> steps;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node cur = nodes[i];
        comp.successors(cur.e, cur.m, steps);
        if (steps.empty() && (deadlock_is_violation_ || (cur.set & final_mask))) {
            v.kind = Kind::DeadlockSafety;
            for (auto j = static_cast<std::int64_t>(i); nodes[j].parent >= 0; j = nodes[j].parent)
                v.trace.push_back(nodes[j].via);
            std::reverse(v.trace.begin(), v.trace.end());
            v.product_states = nodes.size();
            return v;
        }
        for (const auto& st : steps) {
            std::uint64_t set = track ? post(cur.set, st.action) : 0;
            auto [it, fresh] = index.try_emplace({st.env, st.coord, set}, nodes.size());
            if (fresh) nodes.push_back({st.env, st.coord, set, static_cast<std::int64_t>(i), st.action});
        }
    }
    v.product_states = nodes.size();
    return v;
}

Verdict Checker::check_liveness(const csp::Process& m, bool sync_loops_only) const {
    Verdict v;
    Composition comp(env_, m);
    const auto lsucc = liveness_.successors();
    struct Node {
        StateId e, m, q;
    };
    std::vector<Node> nodes;
    std::map<std::tuple<StateId, StateId, StateId>, std::uint32_t> index;
    // out[i]: (target node, edge index); edges[k] = (action, sync)
    std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> out;
    std::vector<std::pair<ActionId, bool>> edges;
    auto intern = [&](StateId e, StateId mm, StateId q) {
        auto [it, fresh] = index.try_emplace({e, mm, q}, static_cast<std::uint32_t>(nodes.size()));
        if (fresh) {
            nodes.push_back({e, mm, q});
            out.emplace_back();
        }
        return it->second;
    };
    std::vector<std::uint32_t> roots;
    for (auto q0 : liveness_.initial) roots.push_back(intern(env_.initial, m.initial, q0));
    std::vector<Step> steps;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const Node cur = nodes[i];
        comp.successors(cur.e, cur.m, steps);
        for (const auto& st : steps)
            for (auto [l, q2] : lsucc[cur.q]) {
                if (l != st.action) continue;
                auto j = intern(st.env, st.coord, q2);
                edges.emplace_back(st.action, st.sync);
                out[i].emplace_back(j, edges.size() - 1);
            }
    }
    const std::size_t n = nodes.size();
    v.product_states = n;
    std::vector<bool> quiet(n);  // no synchronization enabled
    for (std::size_t i = 0; i < n; ++i) quiet[i] = !comp.sync_enabled(nodes[i].e, nodes[i].m);

    Adjacency adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (auto [j, k] : out[i]) adj[i].push_back(j);
    std::uint32_t nc = 0;
    auto scc = strongly_connected(adj, &nc);
    // Components holding a synchronization edge.
    std::vector<std::int64_t> sync_edge_src(nc, -1), sync_edge_dst(nc, -1), sync_edge_id(nc, -1);
    for (std::size_t i = 0; i < n; ++i)
        for (auto [j, k] : out[i])
            if (edges[k].second && scc[i] == scc[j] && sync_edge_id[scc[i]] < 0) {
                sync_edge_src[scc[i]] = static_cast<std::int64_t>(i);
                sync_edge_dst[scc[i]] = j;
                sync_edge_id[scc[i]] = static_cast<std::int64_t>(k);
            }
    // Quiet subgraph components.
    Adjacency quiet_adj(n);
    for (std::size_t i = 0; i < n; ++i)
        if (quiet[i])
            for (auto [j, k] : out[i])
                if (quiet[j]) quiet_adj[i].push_back(j);
    std::uint32_t qnc = 0;
    auto qscc = strongly_connected(quiet_adj, &qnc);
    auto qcyclic = cyclic_components(quiet_adj, qscc, qnc);

    auto actions_of = [&](const std::vector<std::size_t>& path) {
        Word w;
        for (auto k : path) w.push_back(edges[k].first);
        return w;
    };
    for (std::uint32_t g = 0; g < n; ++g) {
        if (!liveness_.green[nodes[g].q]) continue;
        std::vector<std::size_t> loop;
        if (sync_edge_id[scc[g]] >= 0) {
            const auto c = scc[g];
            std::vector<bool> inside(n);
            for (std::size_t i = 0; i < n; ++i) inside[i] = scc[i] == c;
            auto src = static_cast<std::uint32_t>(sync_edge_src[c]);
            auto dst = static_cast<std::uint32_t>(sync_edge_dst[c]);
            auto first = bfs_path(out, {g}, inside, [&](std::uint32_t u) { return u == src; });
            auto second = bfs_path(out, {dst}, inside, [&](std::uint32_t u) { return u == g; });
            loop = *first;
            loop.push_back(static_cast<std::size_t>(sync_edge_id[c]));
            loop.insert(loop.end(), second->begin(), second->end());
        } else if (!sync_loops_only && quiet[g] && qcyclic[qscc[g]]) {
            std::vector<bool> inside(n);
            for (std::size_t i = 0; i < n; ++i) inside[i] = quiet[i] && qscc[i] == qscc[g];
            // First step out of g, then back to g, all inside the quiet component.
            for (auto [j, k] : out[g]) {
                if (!inside[j]) continue;
                auto back = bfs_path(out, {j}, inside, [&](std::uint32_t u) { return u == g; });
                if (!back) continue;
                loop.push_back(k);
                loop.insert(loop.end(), back->begin(), back->end());
                break;
            }
        } else {
            continue;
        }
        auto prefix = bfs_path(out, roots, {}, [&](std::uint32_t u) { return u == g; });
        v.kind = Kind::FairLiveness;
        v.lasso = canonical_lasso({actions_of(*prefix), actions_of(loop)});
        return v;
    }
    return v;
}

bool Checker::replay(const csp::Process& coordinator, const Verdict& v) const {
    Composition comp(env_, coordinator);
    using Pair = std::pair<StateId, StateId>;
    std::vector<Step> steps;
    auto post = [&](const std::vector<Pair>& from, ActionId a, bool quiet_only) {
        std::vector<Pair> to;
        for (auto [e, m] : from) {
            if (quiet_only && comp.sync_enabled(e, m)) continue;
            comp.successors(e, m, steps);
            for (const auto& st : steps)
                if (st.action == a) to.emplace_back(st.env, st.coord);
        }
        std::sort(to.begin(), to.end());
        to.erase(std::unique(to.begin(), to.end()), to.end());
        return to;
    };
    std::vector<Pair> cur{{env_.initial, coordinator.initial}};
    switch (v.kind) {
        case Kind::Pass: return false;
        case Kind::DeadlockSafety: {
            for (ActionId a : v.trace) cur = post(cur, a, false);
            bool stuck = false;
            for (auto [e, m] : cur) {
                comp.successors(e, m, steps);
                stuck = stuck || steps.empty();
            }
            return stuck && (deadlock_is_violation_ || automata::nfa_runs_word(safety_, v.trace));
        }
        case Kind::FairLiveness: {
            if (v.lasso.loop.empty() || ltl::eval_lasso(spec_.liveness, v.lasso)) return false;
            for (ActionId a : v.lasso.prefix) cur = post(cur, a, false);
            bool synced = false;
            for (ActionId a : v.lasso.loop) synced = synced || env_.is_public(a);
            // Some pair reached after the prefix and a few loop rounds must come
            // back to itself after further rounds; without a synchronization in
            // the loop, no visited pair may enable one.
            const std::size_t pairs = env_.num_states() * coordinator.num_states();
            auto round = [&](std::vector<Pair> from) {
                for (ActionId a : v.lasso.loop) from = post(from, a, !synced);
                return from;
            };
            std::set<Pair> reached(cur.begin(), cur.end());
            for (std::size_t r = 0; r < pairs && !cur.empty(); ++r) {
                cur = round(cur);
                reached.insert(cur.begin(), cur.end());
            }
            for (auto start : reached) {
                std::vector<Pair> walk{start};
                for (std::size_t r = 0; r < pairs && !walk.empty(); ++r) {
                    walk = round(walk);
                    if (std::binary_search(walk.begin(), walk.end(), start)) return true;
                }
            }
            return false;
        }
    }
    return false;
}

Verdict check(const csp::Process& env, const csp::Process& coordinator, const model::SpecPair& spec,
              const csp::ActionTable& actions) {
    return Checker(env, spec, actions).check(coordinator);
}

}  // namespace coordsynth::verify
