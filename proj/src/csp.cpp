#include "coordsynth/csp.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <deque>
#include <functional>
#include <map>
#include <sstream>

namespace coordsynth::csp {

ActionId ActionTable::intern(std::string_view name) {
    std::string key(name);
    if (auto it = index_.find(key); it != index_.end()) return it->second;
    auto id = static_cast<ActionId>(names_.size());
    names_.push_back(key);
    index_.emplace(std::move(key), id);
    return id;
}

std::optional<ActionId> ActionTable::find(std::string_view name) const {
    if (auto it = index_.find(std::string(name)); it != index_.end()) return it->second;
    return std::nullopt;
}

namespace {

bool contains(const std::vector<ActionId>& sorted, ActionId a) {
    return std::binary_search(sorted.begin(), sorted.end(), a);
}

void sort_unique(std::vector<ActionId>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

bool Process::is_public(ActionId a) const { return contains(public_actions, a); }
bool Process::is_private(ActionId a) const { return contains(private_actions, a); }

Successors Process::successors() const {
    Successors out(num_states());
    for (const auto& t : transitions) out[t.from].emplace_back(t.action, t.to);
    return out;
}

void Process::normalize() {
    sort_unique(public_actions);
    sort_unique(private_actions);
    std::sort(transitions.begin(), transitions.end());
    transitions.erase(std::unique(transitions.begin(), transitions.end()), transitions.end());
    validate();
}

void Process::validate() const {
    if (num_states() == 0) throw Error("process has no states");
    if (initial >= num_states()) throw Error("initial state out of range");
    for (ActionId a : public_actions)
        if (is_private(a)) throw Error("action is both public and private");
    for (const auto& t : transitions) {
        if (t.from >= num_states() || t.to >= num_states())
            throw Error("transition endpoint out of range");
        if (!is_public(t.action) && !is_private(t.action))
            throw Error("transition action outside the process alphabet");
    }
}

std::vector<ActionId> common_public(const Process& p, const Process& q) {
    std::vector<ActionId> out;
    std::set_intersection(p.public_actions.begin(), p.public_actions.end(), q.public_actions.begin(),
                          q.public_actions.end(), std::back_inserter(out));
    return out;
}

Process compose_pair(const Process& p, const Process& q, std::span<const ActionId> sync) {
    std::vector<ActionId> x(sync.begin(), sync.end());
    sort_unique(x);
    for (ActionId a : x)
        if (!p.is_public(a) || !q.is_public(a))
            throw Error("synchronization action is not public in both operands");
    for (ActionId a : p.private_actions)
        if (q.is_public(a)) throw Error("private action of one operand is public in the other");
    for (ActionId a : q.private_actions)
        if (p.is_public(a)) throw Error("private action of one operand is public in the other");

    Process out;
    std::set_union(p.public_actions.begin(), p.public_actions.end(), q.public_actions.begin(),
                   q.public_actions.end(), std::back_inserter(out.public_actions));
    std::erase_if(out.public_actions, [&](ActionId a) { return contains(x, a); });
    out.private_actions = p.private_actions;
    out.private_actions.insert(out.private_actions.end(), q.private_actions.begin(),
                               q.private_actions.end());
    out.private_actions.insert(out.private_actions.end(), x.begin(), x.end());
    sort_unique(out.private_actions);

    const auto ps = p.successors();
    const auto qs = q.successors();
    std::map<std::pair<StateId, StateId>, StateId> ids;
    std::vector<std::pair<StateId, StateId>> pairs;
    std::deque<StateId> work;
    auto id_of = [&](StateId a, StateId b) {
        auto [it, fresh] = ids.emplace(std::pair{a, b}, static_cast<StateId>(pairs.size()));
        if (fresh) {
            pairs.emplace_back(a, b);
            work.push_back(it->second);
        }
        return it->second;
    };
    id_of(p.initial, q.initial);
    while (!work.empty()) {
        StateId cur = work.front();
        work.pop_front();
        auto [sp, sq] = pairs[cur];
        for (auto [a, tp] : ps[sp]) {
            if (contains(x, a)) {
                for (auto [b, tq] : qs[sq])
                    if (b == a) out.transitions.push_back({cur, a, id_of(tp, tq)});
            } else {
                out.transitions.push_back({cur, a, id_of(tp, sq)});
            }
        }
        for (auto [b, tq] : qs[sq])
            if (!contains(x, b)) out.transitions.push_back({cur, b, id_of(sp, tq)});
    }
    out.initial = 0;
    for (auto [a, b] : pairs)
        out.state_names.push_back("(" + p.state_names[a] + "," + q.state_names[b] + ")");
    out.normalize();
    return out;
}

Process flatten_network(const Network& network) {
    if (network.agents.empty()) throw Error("network has no agents");
    if (network.sync_sets.size() + 1 != network.agents.size())
        throw Error("network needs one synchronization set per composition step");
    Process acc = network.agents.front();
    for (std::size_t i = 1; i < network.agents.size(); ++i)
        acc = compose_pair(acc, network.agents[i], network.sync_sets[i - 1]);
    return acc;
}

std::vector<ActionId> enabled_public(const Process& p, StateId s) {
    std::vector<ActionId> out;
    for (const auto& t : p.transitions)
        if (t.from == s && p.is_public(t.action)) out.push_back(t.action);
    sort_unique(out);
    return out;
}

std::vector<StateId> simulate(const Process& p, std::span<const ActionId> trace) {
    std::vector<bool> cur(p.num_states(), false);
    cur[p.initial] = true;
    const auto succ = p.successors();
    for (ActionId a : trace) {
        std::vector<bool> next(p.num_states(), false);
        for (StateId s = 0; s < p.num_states(); ++s)
            if (cur[s])
                for (auto [b, t] : succ[s])
                    if (b == a) next[t] = true;
        cur = std::move(next);
    }
    std::vector<StateId> out;
    for (StateId s = 0; s < p.num_states(); ++s)
        if (cur[s]) out.push_back(s);
    return out;
}

bool is_deterministic(const Process& p) {
    for (std::size_t i = 1; i < p.transitions.size(); ++i) {
        const auto& a = p.transitions[i - 1];
        const auto& b = p.transitions[i];
        if (a.from == b.from && a.action == b.action) return false;
    }
    return true;
}

namespace {

// Restriction of p to the states reachable from its initial state.
Process reachable_part(const Process& p) {
    const auto succ = p.successors();
    std::vector<StateId> order{p.initial};
    std::vector<StateId> id(p.num_states(), UINT32_MAX);
    id[p.initial] = 0;
    for (std::size_t i = 0; i < order.size(); ++i)
        for (auto [a, t] : succ[order[i]])
            if (id[t] == UINT32_MAX) {
                id[t] = static_cast<StateId>(order.size());
                order.push_back(t);
            }
    Process out;
    out.public_actions = p.public_actions;
    out.private_actions = p.private_actions;
    for (StateId s : order) out.state_names.push_back(p.state_names[s]);
    for (const auto& t : p.transitions)
        if (id[t.from] != UINT32_MAX) out.transitions.push_back({id[t.from], t.action, id[t.to]});
    out.normalize();
    return out;
}

}  // namespace

bool isomorphic(const Process& p0, const Process& q0) {
    const Process p = reachable_part(p0);
    const Process q = reachable_part(q0);
    if (p.num_states() != q.num_states() || p.transitions.size() != q.transitions.size() ||
        p.public_actions != q.public_actions || p.private_actions != q.private_actions)
        return false;
    const std::size_t n = p.num_states();

    // Colour refinement over the disjoint union; colours are shared so they can be compared.
    std::vector<std::uint64_t> cp(n, 0), cq(n, 0);
    cp[p.initial] = cq[q.initial] = 1;
    const auto ps = p.successors();
    const auto qs = q.successors();
    Successors pp(n), qp(n);
    for (const auto& t : p.transitions) pp[t.to].emplace_back(t.action, t.from);
    for (const auto& t : q.transitions) qp[t.to].emplace_back(t.action, t.from);
    for (std::size_t round = 0; round < n + 1; ++round) {
        std::map<std::vector<std::uint64_t>, std::uint64_t> palette;
        auto signature = [](std::uint64_t own, const auto& out, const auto& in, const auto& col) {
            std::vector<std::uint64_t> sig{own};
            std::vector<std::uint64_t> o, i;
            for (auto [a, t] : out) o.push_back((std::uint64_t(a) << 32) | col[t]);
            for (auto [a, t] : in) i.push_back((std::uint64_t(a) << 32) | col[t]);
            std::sort(o.begin(), o.end());
            std::sort(i.begin(), i.end());
            sig.push_back(o.size());
            sig.insert(sig.end(), o.begin(), o.end());
            sig.insert(sig.end(), i.begin(), i.end());
            return sig;
        };
        std::vector<std::vector<std::uint64_t>> sp(n), sq(n);
        for (std::size_t s = 0; s < n; ++s) {
            sp[s] = signature(cp[s], ps[s], pp[s], cp);
            sq[s] = signature(cq[s], qs[s], qp[s], cq);
            palette.emplace(sp[s], 0);
            palette.emplace(sq[s], 0);
        }
        std::uint64_t next = 0;
        for (auto& [k, v] : palette) v = next++;
        std::vector<std::uint64_t> np(n), nq(n);
        for (std::size_t s = 0; s < n; ++s) {
            np[s] = palette[sp[s]];
            nq[s] = palette[sq[s]];
        }
        bool stable = std::set<std::uint64_t>(np.begin(), np.end()).size() ==
                      std::set<std::uint64_t>(cp.begin(), cp.end()).size();
        cp = std::move(np);
        cq = std::move(nq);
        if (stable && round > 0) break;
    }
    {
        auto a = cp, b = cq;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (a != b) return false;
    }

    std::set<Transition> qedges(q.transitions.begin(), q.transitions.end());
    std::vector<StateId> map(n, UINT32_MAX), inv(n, UINT32_MAX);
    std::function<bool(StateId)> assign = [&](StateId s) -> bool {
        if (s == n) {
            for (const auto& t : p.transitions)
                if (!qedges.count({map[t.from], t.action, map[t.to]})) return false;
            return true;
        }
        for (StateId t = 0; t < n; ++t) {
            if (inv[t] != UINT32_MAX || cq[t] != cp[s]) continue;
            bool ok = true;
            for (auto [a, u] : ps[s])
                if (u < s && !qedges.count({t, a, map[u]})) ok = false;
            for (auto [a, u] : pp[s])
                if (u < s && !qedges.count({map[u], a, t})) ok = false;
            if (!ok) continue;
            map[s] = t;
            inv[t] = s;
            if (assign(s + 1)) return true;
            map[s] = inv[t] = UINT32_MAX;
        }
        return false;
    };
    return assign(0);
}

namespace {

bool is_identifier(const std::string& s) {
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.')) return false;
    return s != "STOP";
}

}  // namespace

std::string print_process(const Process& p, const ActionTable& actions) {
    std::vector<std::string> names(p.num_states());
    std::set<std::string> seen;
    bool usable = true;
    for (StateId s = 0; s < p.num_states(); ++s) {
        names[s] = p.state_names[s];
        if (!is_identifier(names[s]) || !seen.insert(names[s]).second) usable = false;
    }
    if (!usable)
        for (StateId s = 0; s < p.num_states(); ++s) names[s] = "P" + std::to_string(s);

    const auto succ = p.successors();
    std::ostringstream out;
    auto emit = [&](StateId s) {
        out << "process " << names[s] << " =";
        if (succ[s].empty()) out << " STOP";
        for (std::size_t i = 0; i < succ[s].size(); ++i)
            out << (i ? " | " : " ") << actions.name(succ[s][i].first) << " -> "
                << names[succ[s][i].second];
        out << ";\n";
    };
    emit(p.initial);
    for (StateId s = 0; s < p.num_states(); ++s)
        if (s != p.initial) emit(s);
    return out.str();
}

}  // namespace coordsynth::csp
