#include "coordsynth/spec_automaton.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

#include "coordsynth/ltl.hpp"
#include "spec_internal.hpp"

namespace coordsynth::spec {

namespace {

std::uint32_t bits_for(std::size_t n) {
    std::uint32_t b = 0;
    while ((std::size_t{1} << b) < n) ++b;
    return b;
}

void append_bits(std::vector<bool>& out, std::uint32_t value, std::uint32_t width) {
    for (std::uint32_t i = width; i-- > 0;) out.push_back(((value >> i) & 1U) != 0);
}

std::vector<bool> mask_assignment(std::size_t n, std::uint64_t mask) {
    std::vector<bool> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = ((mask >> i) & 1U) != 0;
    return v;
}

}  // namespace

Components make_components(const csp::Process& env, const model::SpecPair& spec, const csp::ActionTable& actions) {
    Components c;
    c.env = env;
    c.env.normalize();
    c.num_actions = actions.size();
    c.sigma = c.env.public_actions;
    c.gamma = c.env.private_actions;
    if (c.sigma.size() > 64) throw Error("more than 64 public actions are not supported");
    const auto& names = actions.names();
    c.liveness = automata::complete(ltl::to_nba(ltl::negate(spec.liveness), names));
    if (spec.safety_complement.alphabet != names)
        throw Error("safety automaton alphabet differs from the model's actions");
    c.safety = automata::complete(automata::prune(spec.safety_complement));
    return c;
}

std::string SpecAutomaton::state_name(std::uint32_t s) const {
    if (s == kFail) return "Fail";
    if (s == kSink) return "Sink";
    const auto& t = normal.at(s - 2);
    std::ostringstream out;
    out << "(" << t[0] << "," << t[1] << "," << t[2] << ")";
    return out.str();
}

SpecAutomaton build_spec_automaton(const Components& c, Mode mode, std::shared_ptr<bdd::Manager> guards) {
    return mode == Mode::Explicit ? detail::build_explicit(c, std::move(guards))
                                  : detail::build_symbolic(c, std::move(guards));
}

namespace detail {

std::shared_ptr<bdd::Manager> guard_manager(const Components& c, std::shared_ptr<bdd::Manager> given) {
    if (!given) return std::make_shared<bdd::Manager>(static_cast<std::uint32_t>(c.sigma.size()));
    if (given->num_vars() != c.sigma.size()) throw Error("guard manager has the wrong number of variables");
    return given;
}

std::vector<std::uint32_t> initial_products(const Components& c) {
    std::vector<std::uint32_t> out;
    for (auto q : c.liveness.initial)
        for (auto r : c.safety.initial) out.push_back(c.product_index(q, r, c.env.initial));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<std::uint64_t> public_masks(const Components& c) {
    std::vector<std::uint64_t> out(c.env.num_states(), 0);
    for (const auto& t : c.env.transitions) {
        auto it = std::lower_bound(c.sigma.begin(), c.sigma.end(), t.action);
        if (it != c.sigma.end() && *it == t.action) out[t.from] |= std::uint64_t{1} << (it - c.sigma.begin());
    }
    return out;
}

SpecAutomaton assemble(const Components& c, std::shared_ptr<bdd::Manager> guards,
                       const std::vector<std::uint32_t>& initial, std::vector<std::uint32_t> reachable,
                       std::vector<RawEdge> edges) {
    SpecAutomaton b;
    b.guards = std::move(guards);
    b.sigma = c.sigma;
    std::sort(reachable.begin(), reachable.end());
    reachable.erase(std::unique(reachable.begin(), reachable.end()), reachable.end());
    std::unordered_map<std::uint32_t, std::uint32_t> id;
    const std::size_t rs = c.safety.num_states, es = c.env.num_states();
    b.green.assign(reachable.size() + 2, false);
    b.green[kFail] = true;
    for (std::size_t i = 0; i < reachable.size(); ++i) {
        const std::uint32_t p = reachable[i];
        id[shifted(p)] = static_cast<std::uint32_t>(i + 2);
        const auto q = static_cast<std::uint32_t>(p / (rs * es));
        const auto r = static_cast<std::uint32_t>((p / es) % rs);
        const auto e = static_cast<std::uint32_t>(p % es);
        b.normal.push_back({q, r, e});
        b.green[i + 2] = c.liveness.green[q];
    }
    auto map_state = [&](std::uint32_t s) -> std::uint32_t {
        if (s < 2) return s;
        auto it = id.find(s);
        if (it == id.end()) throw Error("spec automaton edge leaves the explored states");
        return it->second;
    };
    for (auto p : initial) b.initial.push_back(map_state(shifted(p)));
    for (auto& e : edges) {
        if (e.guard.is_false()) continue;
        b.edges.push_back({map_state(e.src), e.action, map_state(e.dst), e.green, e.guard});
    }
    const bdd::Bdd top = b.guards->one();
    for (std::uint32_t a = 0; a < c.sigma.size(); ++a) {
        b.edges.push_back({kFail, a, kFail, false, top});
        b.edges.push_back({kFail, a, kFail, true, top});
        b.edges.push_back({kSink, a, kSink, false, top});
    }
    std::sort(b.edges.begin(), b.edges.end(), [](const GuardedEdge& x, const GuardedEdge& y) {
        return std::tie(x.src, x.action, x.dst, x.green) < std::tie(y.src, y.action, y.dst, y.green);
    });
    for (std::size_t i = 1; i < b.edges.size(); ++i) {
        const auto& x = b.edges[i - 1];
        const auto& y = b.edges[i];
        if (std::tie(x.src, x.action, x.dst, x.green) == std::tie(y.src, y.action, y.dst, y.green))
            throw Error("duplicate spec automaton edge");
    }
    return b;
}

bdd::Bdd from_rows(bdd::Manager& m, const std::vector<std::uint32_t>& levels, std::vector<std::vector<bool>> rows) {
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    // Rows sharing a prefix are contiguous after sorting, so each recursion works on a range.
    auto rec = [&](auto&& self, std::size_t lo, std::size_t hi, std::size_t depth) -> bdd::Bdd {
        if (lo == hi) return m.zero();
        if (depth == levels.size()) return m.one();
        std::size_t mid = lo;
        while (mid < hi && !rows[mid][depth]) ++mid;
        bdd::Bdd f0 = self(self, lo, mid, depth + 1);
        bdd::Bdd f1 = self(self, mid, hi, depth + 1);
        return m.ite(m.var(levels[depth]), f1, f0);
    };
    return rec(rec, 0, rows.size(), 0);
}

}  // namespace detail

GuardedUcw to_ucw(const SpecAutomaton& b) {
    GuardedUcw u;
    u.guards = b.guards;
    u.sigma = b.sigma;
    const std::size_t doubled = 2 * b.num_states();
    // (src, action, dst) -> accumulated guard, with dst already flagged.
    std::map<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>, bdd::Bdd> merged;
    for (const auto& e : b.edges) {
        const std::uint32_t dst = 2 * e.dst + (e.green ? 1 : 0);
        for (std::uint32_t flag = 0; flag < 2; ++flag) {
            auto key = std::make_tuple(2 * e.src + flag, e.action, dst);
            auto [it, fresh] = merged.try_emplace(key, e.guard);
            if (!fresh) it->second = it->second | e.guard;
        }
    }
    for (auto& [key, guard] : merged) {
        auto [src, a, dst] = key;
        if (dst % 2 != 0) continue;
        auto other = merged.find(std::make_tuple(src, a, dst + 1));
        if (other != merged.end()) guard = guard & !other->second;
    }
    std::vector<std::vector<std::uint32_t>> adj(doubled);
    for (const auto& [key, guard] : merged)
        if (!guard.is_false()) adj[std::get<0>(key)].push_back(std::get<2>(key));
    std::vector<bool> seen(doubled, false);
    std::vector<std::uint32_t> stack;
    for (auto s : b.initial) {
        if (!seen[2 * s]) stack.push_back(2 * s);
        seen[2 * s] = true;
    }
    while (!stack.empty()) {
        auto s = stack.back();
        stack.pop_back();
        for (auto t : adj[s])
            if (!seen[t]) seen[t] = true, stack.push_back(t);
    }
    std::vector<std::uint32_t> id(doubled, UINT32_MAX);
    for (std::uint32_t s = 0; s < doubled; ++s) {
        if (!seen[s]) continue;
        id[s] = static_cast<std::uint32_t>(u.num_states++);
        u.green.push_back(b.green[s / 2] || s % 2 == 1);
        u.names.push_back(b.state_name(s / 2) + (s % 2 == 1 ? "'" : ""));
    }
    for (auto s : b.initial) u.initial.push_back(id[2 * s]);
    std::sort(u.initial.begin(), u.initial.end());
    u.initial.erase(std::unique(u.initial.begin(), u.initial.end()), u.initial.end());
    for (const auto& [key, guard] : merged) {
        auto [src, a, dst] = key;
        if (guard.is_false() || !seen[src]) continue;
        u.edges.push_back({id[src], a, id[dst], guard});
    }
    std::sort(u.edges.begin(), u.edges.end(), [](const GuardedUcw::Edge& x, const GuardedUcw::Edge& y) {
        return std::tie(x.src, x.action, x.dst) < std::tie(y.src, y.action, y.dst);
    });
    return u;
}

std::uint32_t composite_letter(std::size_t sigma_size, std::uint32_t action, std::uint64_t offered) {
    return static_cast<std::uint32_t>((std::uint64_t{action} << sigma_size) | offered);
}

namespace {

constexpr std::size_t kExpandLimit = 10;

}  // namespace

automata::EdgeGreenNba expand_letters(const SpecAutomaton& b, const std::vector<std::string>& action_names) {
    const std::size_t n = b.sigma.size();
    if (n > kExpandLimit) throw Error("public alphabet too large for letter expansion");
    automata::EdgeGreenNba out;
    out.graph.num_states = b.num_states();
    out.graph.initial = b.initial;
    out.graph.green = b.green;
    out.graph.alphabet.resize((n << n) * 2);
    for (std::size_t i = 0; i < out.graph.alphabet.size(); ++i) {
        if (action_names.empty()) {
            out.graph.alphabet[i] = "l" + std::to_string(i);
            continue;
        }
        const std::size_t letter = i / 2, offered = letter & ((std::size_t{1} << n) - 1);
        std::string name = action_names.at(b.sigma[letter >> n]) + "|{";
        for (std::size_t k = 0, first = 1; k < n; ++k)
            if (offered >> k & 1) {
                name += (first ? "" : ",") + action_names.at(b.sigma[k]);
                first = 0;
            }
        out.graph.alphabet[i] = name + "}|" + std::to_string(i & 1);
    }
    std::vector<std::pair<automata::Edge, bool>> edges;
    for (const auto& e : b.edges)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            if (!b.guards->eval(e.guard, mask_assignment(n, m))) continue;
            const std::uint32_t letter = composite_letter(n, e.action, m) * 2 + (e.green ? 1 : 0);
            edges.push_back({{e.src, letter, e.dst}, e.green});
        }
    std::sort(edges.begin(), edges.end());
    for (const auto& [e, g] : edges) {
        out.graph.edges.push_back(e);
        out.edge_green.push_back(g);
    }
    return out;
}

automata::Ucw expand_letters(const GuardedUcw& u) {
    const std::size_t n = u.sigma.size();
    if (n > kExpandLimit) throw Error("public alphabet too large for letter expansion");
    automata::Ucw out;
    out.num_states = u.num_states;
    out.initial = u.initial;
    out.green = u.green;
    out.alphabet.resize(n << n);
    for (std::size_t i = 0; i < out.alphabet.size(); ++i) out.alphabet[i] = "l" + std::to_string(i);
    for (const auto& e : u.edges)
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m)
            if (u.guards->eval(e.guard, mask_assignment(n, m)))
                out.edges.push_back({e.src, composite_letter(n, e.action, m), e.dst});
    out.normalize();
    return out;
}

bdd::Bdd transfer(bdd::Manager& from, bdd::Bdd f, bdd::Manager& to, const std::vector<std::uint32_t>& map) {
    std::unordered_map<std::uint32_t, bdd::Bdd> memo;
    auto rec = [&](auto&& self, std::uint32_t x) -> bdd::Bdd {
        if (x < 2) return to.constant(x == 1);
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        bdd::Bdd lo = self(self, from.node_low(x));
        bdd::Bdd hi = self(self, from.node_high(x));
        bdd::Bdd r = to.ite(to.var(map.at(from.node_var(x))), hi, lo);
        memo.emplace(x, r);
        return r;
    };
    return rec(rec, f.id());
}

bool same_automaton(const SpecAutomaton& x, const SpecAutomaton& y, std::string* diff) {
    auto fail = [&](const std::string& why) {
        if (diff) *diff = why;
        return false;
    };
    if (x.sigma != y.sigma) return fail("public alphabets differ");
    if (x.normal != y.normal) return fail("state sets differ");
    if (x.initial != y.initial) return fail("initial states differ");
    if (x.green != y.green) return fail("green states differ");
    if (x.edges.size() != y.edges.size())
        return fail("edge counts differ: " + std::to_string(x.edges.size()) + " vs " + std::to_string(y.edges.size()));
    std::vector<std::uint32_t> identity(x.sigma.size());
    for (std::uint32_t i = 0; i < identity.size(); ++i) identity[i] = i;
    for (std::size_t i = 0; i < x.edges.size(); ++i) {
        const auto& a = x.edges[i];
        const auto& b = y.edges[i];
        if (a.src != b.src || a.action != b.action || a.dst != b.dst || a.green != b.green)
            return fail("edge " + std::to_string(i) + " differs");
        bdd::Bdd g = b.guard;
        if (y.guards.get() != x.guards.get()) g = transfer(*y.guards, g, *x.guards, identity);
        if (g != a.guard)
            return fail("guard of edge " + x.state_name(a.src) + " -" + std::to_string(a.action) + "-> " +
                        x.state_name(a.dst) + " differs");
    }
    return true;
}

Layout Layout::make(const Components& c) {
    Layout l;
    l.num_q = static_cast<std::uint32_t>(c.liveness.num_states);
    l.num_r = static_cast<std::uint32_t>(c.safety.num_states);
    l.num_e = static_cast<std::uint32_t>(c.env.num_states());
    l.q_bits = bits_for(l.num_q);
    l.r_bits = bits_for(l.num_r);
    l.e_bits = bits_for(l.num_e);
    l.sigma_size = static_cast<std::uint32_t>(c.sigma.size());
    l.num_all_actions = static_cast<std::uint32_t>(c.sigma.size() + c.gamma.size());
    l.action_bits = bits_for(l.num_all_actions);
    return l;
}

std::vector<std::uint32_t> Layout::q_levels(std::uint32_t copy) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < q_bits; ++i) out.push_back(x(i, copy));
    return out;
}

std::vector<std::uint32_t> Layout::r_levels(std::uint32_t copy) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = q_bits; i < q_bits + r_bits; ++i) out.push_back(x(i, copy));
    return out;
}

std::vector<std::uint32_t> Layout::e_levels(std::uint32_t copy) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = q_bits + r_bits; i < state_bits(); ++i) out.push_back(x(i, copy));
    return out;
}

std::vector<std::uint32_t> Layout::state_levels(std::uint32_t copy) const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < state_bits(); ++i) out.push_back(x(i, copy));
    return out;
}

std::vector<std::uint32_t> Layout::action_levels() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < action_bits; ++i) out.push_back(act(i));
    return out;
}

std::vector<std::uint32_t> Layout::offered_levels() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < sigma_size; ++i) out.push_back(offered(i));
    return out;
}

std::vector<bool> Layout::encode_state(std::uint32_t q, std::uint32_t r, std::uint32_t e) const {
    std::vector<bool> out;
    append_bits(out, q, q_bits);
    append_bits(out, r, r_bits);
    append_bits(out, e, e_bits);
    return out;
}

std::vector<bool> Layout::encode_action(std::uint32_t index) const {
    std::vector<bool> out;
    append_bits(out, index, action_bits);
    return out;
}

std::vector<OfferedClass> offered_classes(const Components& c, bdd::Manager& guards, bool force_unions) {
    const std::size_t n = c.sigma.size();
    const std::size_t es = c.env.num_states();
    const auto pub = detail::public_masks(c);
    std::vector<OfferedClass> out;
    if (n <= 12 && !force_unions) {
        std::map<std::vector<bool>, std::vector<std::vector<bool>>> buckets;
        std::vector<std::uint32_t> levels(n);
        for (std::uint32_t i = 0; i < n; ++i) levels[i] = i;
        for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
            std::vector<bool> allowed(es);
            for (std::size_t e = 0; e < es; ++e) allowed[e] = (pub[e] & m) == 0;
            buckets[allowed].push_back(mask_assignment(n, m));
        }
        for (auto& [allowed, rows] : buckets)
            out.push_back({allowed, detail::from_rows(guards, levels, std::move(rows))});
        return out;
    }
    // Candidate sets of forbidden actions are unions of per-state offers.
    std::set<std::uint64_t> distinct(pub.begin(), pub.end());
    std::set<std::uint64_t> unions{0};
    std::vector<std::uint64_t> frontier{0};
    while (!frontier.empty()) {
        std::uint64_t f = frontier.back();
        frontier.pop_back();
        for (auto p : distinct)
            if (unions.insert(f | p).second) frontier.push_back(f | p);
    }
    std::map<std::vector<bool>, bdd::Bdd> by_allowed;
    for (auto f : unions) {
        std::vector<bool> allowed(es);
        bdd::Bdd guard = guards.one();
        for (std::uint32_t i = 0; i < n; ++i)
            if ((f >> i) & 1U) guard &= guards.nvar(i);
        for (std::size_t e = 0; e < es; ++e) {
            allowed[e] = (pub[e] & ~f) == 0;
            if (allowed[e]) continue;
            bdd::Bdd hit = guards.zero();
            for (std::uint32_t i = 0; i < n; ++i)
                if (((pub[e] & ~f) >> i) & 1U) hit |= guards.var(i);
            guard &= hit;
        }
        // A union that is not the closure of its own allowed set yields an empty guard.
        if (guard.is_false()) continue;
        auto [it, fresh] = by_allowed.try_emplace(allowed, guard);
        if (!fresh) it->second = it->second | guard;
    }
    for (auto& [allowed, guard] : by_allowed) out.push_back({allowed, guard});
    return out;
}

CrossCheck cross_check(const Components& c) {
    CrossCheck out;
    Relations sym = symbolic_relations(c);
    Relations exp = explicit_relations(c, sym);
    auto cmp = [&](const char* name, bdd::Bdd a, bdd::Bdd b) {
        if (a != b) out.mismatches.push_back(std::string(name) + " differs");
    };
    cmp("enabled", sym.enabled, exp.enabled);
    cmp("efail", sym.efail, exp.efail);
    cmp("eprivate", sym.eprivate, exp.eprivate);
    cmp("gen_eprivate", sym.gen_eprivate, exp.gen_eprivate);
    cmp("nosynch", sym.nosynch, exp.nosynch);
    cmp("esink", sym.esink, exp.esink);
    cmp("normal_trans", sym.normal_trans, exp.normal_trans);
    auto guards = std::make_shared<bdd::Manager>(static_cast<std::uint32_t>(c.sigma.size()));
    SpecAutomaton x = build_spec_automaton(c, Mode::Explicit, guards);
    SpecAutomaton y = build_spec_automaton(c, Mode::Symbolic, guards);
    std::string diff;
    if (!same_automaton(x, y, &diff)) out.mismatches.push_back("automaton: " + diff);
    return out;
}

}  // namespace coordsynth::spec
