#include "coordsynth/automata.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

#include "coordsynth/graph.hpp"

namespace coordsynth::automata {

void Graph::normalize() {
    std::sort(initial.begin(), initial.end());
    initial.erase(std::unique(initial.begin(), initial.end()), initial.end());
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    green.resize(num_states, false);
    validate();
}

void Graph::validate() const {
    if (green.size() != num_states) throw Error("green vector size mismatch");
    for (State s : initial)
        if (s >= num_states) throw Error("initial state out of range");
    for (const auto& e : edges)
        if (e.src >= num_states || e.dst >= num_states || e.letter >= alphabet.size())
            throw Error("automaton edge out of range");
}

std::vector<std::vector<std::pair<Letter, State>>> Graph::successors() const {
    std::vector<std::vector<std::pair<Letter, State>>> out(num_states);
    for (const auto& e : edges) out[e.src].emplace_back(e.letter, e.dst);
    return out;
}

namespace {

// Product of an automaton with the positions of a lasso word.
struct LassoProduct {
    std::vector<std::pair<std::uint32_t, State>> nodes;  // (position, state)
    Adjacency adj;
    std::vector<std::vector<bool>> edge_green;  // parallel to adj when requested
};

LassoProduct lasso_product(const Graph& a, const Lasso& w, const std::vector<bool>* edge_flags) {
    if (w.loop.empty()) throw Error("lasso loop must be non-empty");
    const std::size_t n = w.horizon();
    auto next_pos = [&](std::size_t i) { return i + 1 < n ? i + 1 : w.prefix.size(); };

    // Per (state, letter) successor lists with edge indices.
    std::map<std::pair<State, Letter>, std::vector<std::size_t>> index;
    for (std::size_t k = 0; k < a.edges.size(); ++k)
        index[{a.edges[k].src, a.edges[k].letter}].push_back(k);

    LassoProduct p;
    std::unordered_map<std::uint64_t, std::uint32_t> ids;
    auto id_of = [&](std::uint32_t pos, State s) {
        std::uint64_t key = (std::uint64_t(pos) << 32) | s;
        auto [it, fresh] = ids.emplace(key, static_cast<std::uint32_t>(p.nodes.size()));
        if (fresh) {
            p.nodes.emplace_back(pos, s);
            p.adj.emplace_back();
            p.edge_green.emplace_back();
        }
        return it->second;
    };
    for (State s : a.initial) id_of(0, s);
    for (std::uint32_t v = 0; v < p.nodes.size(); ++v) {
        auto [pos, s] = p.nodes[v];
        auto it = index.find({s, w.at(pos)});
        if (it == index.end()) continue;
        for (std::size_t k : it->second) {
            std::uint32_t t = id_of(static_cast<std::uint32_t>(next_pos(pos)), a.edges[k].dst);
            p.adj[v].push_back(t);
            p.edge_green[v].push_back(edge_flags && (*edge_flags)[k]);
        }
    }
    return p;
}

bool recurrent_green(const LassoProduct& p, const std::vector<bool>& green) {
    std::uint32_t nc = 0;
    auto comp = strongly_connected(p.adj, &nc);
    auto cyclic = cyclic_components(p.adj, comp, nc);
    for (std::uint32_t v = 0; v < p.nodes.size(); ++v) {
        if (cyclic[comp[v]] && green[p.nodes[v].second]) return true;
        for (std::size_t k = 0; k < p.adj[v].size(); ++k)
            if (p.edge_green[v][k] && comp[p.adj[v][k]] == comp[v]) return true;
    }
    return false;
}

}  // namespace

bool nba_accepts_lasso(const Nba& a, const Lasso& w) {
    return recurrent_green(lasso_product(a, w, nullptr), a.green);
}

bool edge_green_accepts_lasso(const EdgeGreenNba& a, const Lasso& w) {
    return recurrent_green(lasso_product(a.graph, w, &a.edge_green), a.graph.green);
}

bool ucw_accepts_lasso(const Ucw& a, const Lasso& w) {
    // Alternately discard nodes with only finite continuations and nodes that can
    // no longer see a green node; the run graph has a ranking iff nothing survives.
    auto p = lasso_product(a, w, nullptr);
    const std::size_t n = p.nodes.size();
    std::vector<bool> alive(n, true);
    for (;;) {
        bool changed = false;
        // Finite continuations: repeatedly drop nodes without live successors.
        for (bool again = true; again;) {
            again = false;
            for (std::uint32_t v = 0; v < n; ++v) {
                if (!alive[v]) continue;
                bool has = false;
                for (auto t : p.adj[v]) has = has || alive[t];
                if (!has) {
                    alive[v] = false;
                    again = changed = true;
                }
            }
        }
        // Nodes that cannot reach a live green node.
        Adjacency live(n);
        std::vector<bool> targets(n, false);
        for (std::uint32_t v = 0; v < n; ++v) {
            if (!alive[v]) continue;
            targets[v] = a.green[p.nodes[v].second];
            for (auto t : p.adj[v])
                if (alive[t]) live[v].push_back(t);
        }
        auto sees_green = backward_reachable(live, targets);
        for (std::uint32_t v = 0; v < n; ++v)
            if (alive[v] && !sees_green[v]) {
                alive[v] = false;
                changed = true;
            }
        if (std::none_of(alive.begin(), alive.end(), [](bool b) { return b; })) return true;
        if (!changed) return false;
    }
}

bool nfa_runs_word(const FiniteNfa& a, const Word& w) {
    std::vector<bool> cur(a.num_states, false);
    for (State s : a.initial) cur[s] = true;
    const auto succ = a.successors();
    for (Letter l : w) {
        std::vector<bool> next(a.num_states, false);
        for (State s = 0; s < a.num_states; ++s)
            if (cur[s])
                for (auto [m, t] : succ[s])
                    if (m == l) next[t] = true;
        cur = std::move(next);
    }
    for (State s = 0; s < a.num_states; ++s)
        if (cur[s] && a.green[s]) return true;
    return false;
}

Ucw as_ucw(const Nba& a) { return Ucw{static_cast<const Graph&>(a)}; }

namespace {

Adjacency adjacency(const Graph& a) {
    Adjacency adj(a.num_states);
    for (const auto& e : a.edges) adj[e.src].push_back(e.dst);
    return adj;
}

Graph restrict_to(const Graph& a, const std::vector<bool>& keep) {
    std::vector<State> id(a.num_states, UINT32_MAX);
    Graph out;
    out.alphabet = a.alphabet;
    for (State s = 0; s < a.num_states; ++s)
        if (keep[s]) {
            id[s] = static_cast<State>(out.num_states++);
            out.green.push_back(a.green[s]);
        }
    for (State s : a.initial)
        if (keep[s]) out.initial.push_back(id[s]);
    for (const auto& e : a.edges)
        if (keep[e.src] && keep[e.dst]) out.edges.push_back({id[e.src], e.letter, id[e.dst]});
    out.normalize();
    return out;
}

std::vector<bool> reachable(const Graph& a) { return forward_reachable(adjacency(a), a.initial); }

}  // namespace

Nba prune(const Nba& a) {
    auto adj = adjacency(a);
    auto reach = forward_reachable(adj, a.initial);
    std::uint32_t nc = 0;
    auto comp = strongly_connected(adj, &nc);
    auto cyclic = cyclic_components(adj, comp, nc);
    std::vector<bool> good(a.num_states, false);
    for (State s = 0; s < a.num_states; ++s) good[s] = a.green[s] && cyclic[comp[s]];
    auto live = backward_reachable(adj, good);
    std::vector<bool> keep(a.num_states);
    for (State s = 0; s < a.num_states; ++s) keep[s] = reach[s] && live[s];
    return Nba{restrict_to(a, keep)};
}

Ucw prune(const Ucw& a) { return Ucw{restrict_to(a, reachable(a))}; }

FiniteNfa prune(const FiniteNfa& a) {
    auto adj = adjacency(a);
    auto reach = forward_reachable(adj, a.initial);
    auto co = backward_reachable(adj, a.green);
    std::vector<bool> keep(a.num_states);
    for (State s = 0; s < a.num_states; ++s) keep[s] = reach[s] && co[s];
    return FiniteNfa{restrict_to(a, keep)};
}

Nba green_edges_to_states(const EdgeGreenNba& a) {
    const Graph& g = a.graph;
    if (a.edge_green.size() != g.edges.size()) throw Error("edge_green size mismatch");
    Graph doubled;
    doubled.num_states = 2 * g.num_states;
    doubled.alphabet = g.alphabet;
    doubled.green.assign(doubled.num_states, false);
    for (State s = 0; s < g.num_states; ++s) {
        doubled.green[2 * s] = g.green[s];
        doubled.green[2 * s + 1] = true;
    }
    for (State s : g.initial) doubled.initial.push_back(2 * s);
    for (std::size_t k = 0; k < g.edges.size(); ++k) {
        const auto& e = g.edges[k];
        State target = 2 * e.dst + (a.edge_green[k] ? 1 : 0);
        doubled.edges.push_back({2 * e.src, e.letter, target});
        doubled.edges.push_back({2 * e.src + 1, e.letter, target});
    }
    doubled.normalize();
    return Nba{restrict_to(doubled, reachable(doubled))};
}

namespace {

Graph complete_graph(const Graph& a) {
    Graph out = a;
    const std::size_t letters = a.alphabet.size();
    std::vector<std::vector<bool>> has(a.num_states, std::vector<bool>(letters, false));
    for (const auto& e : a.edges) has[e.src][e.letter] = true;
    bool needs_sink = a.initial.empty();
    for (State s = 0; s < a.num_states && !needs_sink; ++s)
        for (Letter l = 0; l < letters; ++l)
            if (!has[s][l]) needs_sink = true;
    if (!needs_sink) return out;
    State sink = static_cast<State>(out.num_states++);
    out.green.push_back(false);
    for (State s = 0; s < a.num_states; ++s)
        for (Letter l = 0; l < letters; ++l)
            if (!has[s][l]) out.edges.push_back({s, l, sink});
    for (Letter l = 0; l < letters; ++l) out.edges.push_back({sink, l, sink});
    if (out.initial.empty()) out.initial.push_back(sink);
    out.normalize();
    return out;
}

}  // namespace

Nba complete(const Nba& a) { return Nba{complete_graph(a)}; }
FiniteNfa complete(const FiniteNfa& a) { return FiniteNfa{complete_graph(a)}; }

FiniteNfa universal_nfa(const std::vector<std::string>& alphabet) {
    FiniteNfa a;
    a.num_states = 1;
    a.initial = {0};
    a.green = {true};
    a.alphabet = alphabet;
    for (Letter l = 0; l < alphabet.size(); ++l) a.edges.push_back({0, l, 0});
    a.normalize();
    return a;
}

FiniteNfa empty_nfa(const std::vector<std::string>& alphabet) {
    FiniteNfa a;
    a.alphabet = alphabet;
    return a;
}

namespace {

void write_header(std::ostringstream& out, const Graph& a) {
    out << "states " << a.num_states << "\ninitial";
    for (State s : a.initial) out << ' ' << s;
    out << "\ngreen";
    for (State s = 0; s < a.num_states; ++s)
        if (a.green[s]) out << ' ' << s;
    out << "\nalphabet";
    for (const auto& l : a.alphabet) out << ' ' << l;
    out << '\n';
}

}  // namespace

std::string serialize(const Graph& a) {
    std::ostringstream out;
    write_header(out, a);
    for (const auto& e : a.edges)
        out << "trans " << e.src << ' ' << a.alphabet[e.letter] << ' ' << e.dst << '\n';
    return out.str();
}

std::string serialize(const EdgeGreenNba& a) {
    std::ostringstream out;
    write_header(out, a.graph);
    for (std::size_t k = 0; k < a.graph.edges.size(); ++k) {
        const auto& e = a.graph.edges[k];
        out << "trans " << e.src << ' ' << a.graph.alphabet[e.letter] << ' ' << e.dst
            << (a.edge_green[k] ? " g" : "") << '\n';
    }
    return out.str();
}

Graph deserialize(std::string_view text) {
    Graph a;
    std::istringstream in{std::string(text)};
    std::string line;
    std::unordered_map<std::string, Letter> letters;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "states") {
            ls >> a.num_states;
        } else if (key == "initial") {
            for (State s; ls >> s;) a.initial.push_back(s);
        } else if (key == "green") {
            for (State s; ls >> s;) {
                if (s >= a.green.size()) a.green.resize(s + 1, false);
                a.green[s] = true;
            }
        } else if (key == "alphabet") {
            for (std::string l; ls >> l;) {
                letters.emplace(l, static_cast<Letter>(a.alphabet.size()));
                a.alphabet.push_back(l);
            }
        } else if (key == "trans") {
            State s, t;
            std::string l;
            if (!(ls >> s >> l >> t)) throw Error("malformed transition at line " + std::to_string(lineno));
            auto it = letters.find(l);
            if (it == letters.end()) throw Error("unknown letter '" + l + "' at line " + std::to_string(lineno));
            a.edges.push_back({s, it->second, t});
        } else {
            throw Error("unknown automaton keyword '" + key + "' at line " + std::to_string(lineno));
        }
    }
    if (a.green.size() > a.num_states) throw Error("green state out of range");
    a.green.resize(a.num_states, false);
    a.normalize();
    return a;
}

}  // namespace coordsynth::automata
