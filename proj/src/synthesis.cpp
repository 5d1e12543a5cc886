#include "coordsynth/synthesis.hpp"

#include <algorithm>
#include <atomic>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <thread>

#include "coordsynth/graph.hpp"

namespace coordsynth::synth {

using sat::Lit;

namespace {

// Stand-ins for constant literals while building clauses.
constexpr Lit kTrueLit = 0;
constexpr Lit kFalseLit = std::numeric_limits<Lit>::min();

Lit fresh(sat::Cnf& cnf) { return static_cast<Lit>(cnf.new_var()); }

std::uint32_t width_for(std::size_t max_value) {
    std::uint32_t w = 1;
    while ((std::size_t{1} << w) < max_value) ++w;
    return w;
}

// Per-state facts about the automaton that let the encoding skip work.
struct Classification {
    std::vector<std::uint32_t> comp;
    std::vector<bool> bad_comp;   // cyclic and containing a green state
    std::vector<bool> relevant;   // a bad component is reachable
    std::vector<bool> reject_trap;  // green with an unconditional self-loop on every action
    // edges_by[q][a]: indices into ucw.edges
    std::vector<std::vector<std::vector<std::size_t>>> edges_by;
};

Classification classify(const spec::GuardedUcw& u) {
    Classification c;
    const std::size_t n = u.num_states;
    const std::size_t sigma = u.sigma.size();
    Adjacency adj(n);
    c.edges_by.assign(n, std::vector<std::vector<std::size_t>>(sigma));
    for (std::size_t i = 0; i < u.edges.size(); ++i) {
        const auto& e = u.edges[i];
        if (e.guard.is_false()) continue;
        adj[e.src].push_back(e.dst);
        c.edges_by[e.src][e.action].push_back(i);
    }
    std::uint32_t nc = 0;
    c.comp = strongly_connected(adj, &nc);
    auto cyclic = cyclic_components(adj, c.comp, nc);
    c.bad_comp.assign(nc, false);
    for (std::size_t q = 0; q < n; ++q)
        if (u.green[q] && cyclic[c.comp[q]]) c.bad_comp[c.comp[q]] = true;
    std::vector<bool> in_bad(n);
    for (std::size_t q = 0; q < n; ++q) in_bad[q] = c.bad_comp[c.comp[q]];
    c.relevant = backward_reachable(adj, in_bad);
    c.reject_trap.assign(n, false);
    for (std::size_t q = 0; q < n; ++q) {
        if (!u.green[q] || sigma == 0) continue;
        bool all = true;
        for (std::size_t a = 0; a < sigma && all; ++a) {
            bool loop = false;
            for (auto i : c.edges_by[q][a])
                if (u.edges[i].dst == q && u.edges[i].guard.is_true()) loop = true;
            all = loop;
        }
        c.reject_trap[q] = all;
    }
    return c;
}

}  // namespace

void MooreMachine::validate() const {
    if (output.empty()) throw Error("machine has no states");
    if (next.size() != output.size()) throw Error("machine tables disagree in size");
    for (std::size_t s = 0; s < output.size(); ++s) {
        if (output[s].size() != sigma.size() || next[s].size() != sigma.size())
            throw Error("machine row " + std::to_string(s) + " has the wrong width");
        for (auto t : next[s])
            if (t >= output.size()) throw Error("machine transition leaves the state space");
    }
}

MooreMachine minimize(const MooreMachine& m) {
    m.validate();
    const std::size_t k = m.sigma.size();
    // Reachable part through offered actions.
    std::vector<int> seen(m.num_states(), -1);
    std::vector<std::uint32_t> order{0};
    seen[0] = 0;
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto s = order[i];
        for (std::size_t a = 0; a < k; ++a) {
            if (!m.output[s][a]) continue;
            auto t = m.next[s][a];
            if (seen[t] < 0) {
                seen[t] = static_cast<int>(order.size());
                order.push_back(t);
            }
        }
    }
    // Partition refinement over the reachable states.
    const std::size_t n = order.size();
    std::vector<std::uint32_t> block(n);
    {
        std::map<std::vector<bool>, std::uint32_t> ids;
        for (std::size_t i = 0; i < n; ++i)
            block[i] = ids.try_emplace(m.output[order[i]], static_cast<std::uint32_t>(ids.size())).first->second;
    }
    for (;;) {
        std::map<std::vector<std::uint32_t>, std::uint32_t> ids;
        std::vector<std::uint32_t> refined(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::vector<std::uint32_t> sig{block[i]};
            auto s = order[i];
            for (std::size_t a = 0; a < k; ++a)
                sig.push_back(m.output[s][a] ? block[static_cast<std::size_t>(seen[m.next[s][a]])]
                                             : std::numeric_limits<std::uint32_t>::max());
            refined[i] = ids.try_emplace(std::move(sig), static_cast<std::uint32_t>(ids.size())).first->second;
        }
        std::size_t before = *std::max_element(block.begin(), block.end());
        std::size_t after = *std::max_element(refined.begin(), refined.end());
        block = std::move(refined);
        if (after == before) break;
    }
    // Number blocks breadth-first from the initial state.
    std::vector<std::size_t> rep;  // block number -> representative index in `order`
    std::vector<int> block_number(n, -1);
    block_number[block[0]] = 0;
    rep.push_back(0);
    for (std::size_t qi = 0; qi < rep.size(); ++qi) {
        auto s = order[rep[qi]];
        for (std::size_t a = 0; a < k; ++a) {
            if (!m.output[s][a]) continue;
            auto ti = static_cast<std::size_t>(seen[m.next[s][a]]);
            if (block_number[block[ti]] < 0) {
                block_number[block[ti]] = static_cast<int>(rep.size());
                rep.push_back(ti);
            }
        }
    }
    MooreMachine out;
    out.sigma = m.sigma;
    for (std::size_t b = 0; b < rep.size(); ++b) {
        auto s = order[rep[b]];
        out.output.push_back(m.output[s]);
        std::vector<std::uint32_t> row(k, static_cast<std::uint32_t>(b));
        for (std::size_t a = 0; a < k; ++a)
            if (m.output[s][a])
                row[a] = static_cast<std::uint32_t>(block_number[block[static_cast<std::size_t>(seen[m.next[s][a]])]]);
        out.next.push_back(std::move(row));
    }
    return out;
}

Encoding::Encoding(const spec::GuardedUcw& ucw, std::size_t bound)
    : ucw_(ucw), bound_(bound), sigma_(ucw.sigma.size()) {
    if (bound == 0) throw Error("bound must be at least 1");
    const std::size_t nq = ucw.num_states;
    const std::size_t max_count = nq * bound + 2;
    counter_width_ = width_for(max_count);
    if (counter_width_ > 24) throw Error("counter width " + std::to_string(counter_width_) + " exceeds the bit budget");

    const auto cls = classify(ucw);

    for (std::size_t i = 0; i < bound * sigma_ * bound; ++i) trans_.push_back(fresh(cnf_));
    for (std::size_t i = 0; i < bound * sigma_; ++i) out_.push_back(fresh(cnf_));
    active_.assign(nq * bound, 0);
    for (std::size_t q = 0; q < nq; ++q) {
        if (!cls.relevant[q] || cls.reject_trap[q]) continue;
        for (std::size_t s = 0; s < bound; ++s) active_[q * bound + s] = fresh(cnf_);
    }
    counter_.assign(nq * bound, {});
    for (std::size_t q = 0; q < nq; ++q) {
        if (!active_[q * bound] || !cls.bad_comp[cls.comp[q]]) continue;
        for (std::size_t s = 0; s < bound; ++s)
            for (std::uint32_t b = 0; b < counter_width_; ++b) counter_[q * bound + s].push_back(fresh(cnf_));
    }

    // Functional transitions.
    for (std::uint32_t s = 0; s < bound; ++s)
        for (std::uint32_t a = 0; a < sigma_; ++a) {
            std::vector<Lit> some;
            for (std::uint32_t t = 0; t < bound; ++t) some.push_back(transition(s, a, t));
            cnf_.add(some);
            for (std::uint32_t t = 0; t < bound; ++t)
                for (std::uint32_t t2 = t + 1; t2 < bound; ++t2) cnf_.add({-transition(s, a, t), -transition(s, a, t2)});
            // A step that is never offered stays put; it cannot influence any run.
            cnf_.add({output(s, a), transition(s, a, s)});
        }

    for (auto q0 : ucw.initial) {
        if (!cls.relevant[q0]) continue;
        Lit l = active(q0, 0);
        if (l) cnf_.add({l});
        else cnf_.add(std::span<const Lit>{});
    }

    for (std::uint32_t q = 0; q < nq; ++q)
        for (std::uint32_t s = 0; s < bound; ++s)
            for (std::uint32_t a = 0; a < sigma_; ++a) {
                ++groups_;
                Lit from = active(q, s);
                if (!from) continue;
                for (auto ei : cls.edges_by[q][a]) {
                    const auto& e = ucw.edges[ei];
                    const std::uint32_t q2 = e.dst;
                    if (!cls.relevant[q2]) continue;
                    std::vector<Lit> base{-from};
                    Lit g = guard_literal(e.guard.id(), s);
                    if (g == kFalseLit) continue;
                    if (g != kTrueLit) base.push_back(-g);
                    if (cls.reject_trap[q2]) {
                        cnf_.add(base);
                        continue;
                    }
                    const bool counted = cls.bad_comp[cls.comp[q]] && cls.comp[q] == cls.comp[q2];
                    for (std::uint32_t s2 = 0; s2 < bound; ++s2) {
                        auto clause = base;
                        clause.push_back(-transition(s, a, s2));
                        clause.push_back(active(q2, s2));
                        cnf_.add(clause);
                        if (!counted) continue;
                        Lit c = comparator(q, s, q2, s2, ucw.green[q2]);
                        if (c == kTrueLit) continue;
                        clause.pop_back();
                        if (c != kFalseLit) clause.push_back(c);
                        cnf_.add(clause);
                    }
                }
            }
}

Lit Encoding::transition(std::uint32_t s, std::uint32_t a, std::uint32_t t) const {
    return trans_[(s * sigma_ + a) * bound_ + t];
}

Lit Encoding::output(std::uint32_t s, std::uint32_t a) const { return out_[s * sigma_ + a]; }

// Holds whenever the guard node evaluates to true under O(s); the converse is
// not needed because guards only occur negatively in constraints.
Lit Encoding::guard_literal(std::uint32_t node, std::uint32_t s) {
    if (node == 0) return kFalseLit;
    if (node == 1) return kTrueLit;
    std::uint64_t key = (static_cast<std::uint64_t>(node) << 24) | s;
    if (auto it = guard_memo_.find(key); it != guard_memo_.end()) return it->second;
    const bdd::Manager& m = *ucw_.guards;
    const std::uint32_t var = m.node_var(node);
    const Lit hi = guard_literal(m.node_high(node), s);
    const Lit lo = guard_literal(m.node_low(node), s);
    const Lit offered = output(s, var);
    const Lit g = fresh(cnf_);
    if (hi == kTrueLit) cnf_.add({-offered, g});
    else if (hi != kFalseLit) cnf_.add({-offered, -hi, g});
    if (lo == kTrueLit) cnf_.add({offered, g});
    else if (lo != kFalseLit) cnf_.add({offered, -lo, g});
    guard_memo_.emplace(key, g);
    return g;
}

// A literal implying counter(q2,s2) >= counter(q,s) + strict.
Lit Encoding::comparator(std::uint32_t q, std::uint32_t s, std::uint32_t q2, std::uint32_t s2, bool strict) {
    if (q == q2 && s == s2) return strict ? kFalseLit : kTrueLit;
    const std::uint64_t a = q * bound_ + s;
    const std::uint64_t b = q2 * bound_ + s2;
    const std::uint64_t cells = ucw_.num_states * bound_;
    const std::uint64_t key = (a * cells + b) * 2 + (strict ? 1 : 0);
    if (auto it = cmp_memo_.find(key); it != cmp_memo_.end()) return it->second;
    const auto& x = counter_[b];
    const auto& y = counter_[a];
    Lit prev = strict ? kFalseLit : kTrueLit;
    for (std::uint32_t i = 0; i < counter_width_; ++i) {
        // Bit i counted from the least significant end.
        const Lit xi = x[counter_width_ - 1 - i];
        const Lit yi = y[counter_width_ - 1 - i];
        const Lit v = fresh(cnf_);
        cnf_.add({-v, xi, -yi});
        if (prev == kFalseLit) {
            cnf_.add({-v, xi});
            cnf_.add({-v, -yi});
        } else if (prev != kTrueLit) {
            cnf_.add({-v, xi, prev});
            cnf_.add({-v, -yi, prev});
        }
        prev = v;
    }
    cmp_memo_.emplace(key, prev);
    return prev;
}

std::string Encoding::dimacs() const {
    std::vector<std::string> comments{
        "coordinator synthesis, machine states " + std::to_string(bound_),
        "automaton states " + std::to_string(ucw_.num_states) + ", actions " + std::to_string(sigma_),
        "counter width " + std::to_string(counter_width_) + ", constraint groups " + std::to_string(groups_),
        "variables 1.." + std::to_string(trans_.size()) + " transitions (s,a,t) row-major, then " +
            std::to_string(out_.size()) + " outputs (s,a)",
    };
    return cnf_.dimacs(comments);
}

MooreMachine Encoding::extract(const sat::Result& model) const {
    if (model.status != sat::Status::Sat) throw Error("no model to extract from");
    if (model.model.size() <= cnf_.num_vars()) throw Error("model misses variables");
    MooreMachine m;
    m.sigma = ucw_.sigma;
    for (std::uint32_t s = 0; s < bound_; ++s) {
        std::vector<bool> row(sigma_);
        std::vector<std::uint32_t> succ(sigma_);
        for (std::uint32_t a = 0; a < sigma_; ++a) {
            row[a] = model.value(output(s, a));
            int found = -1;
            for (std::uint32_t t = 0; t < bound_; ++t)
                if (model.value(transition(s, a, t))) {
                    if (found >= 0) throw Error("model is not functional");
                    found = static_cast<int>(t);
                }
            if (found < 0) throw Error("model leaves a transition undefined");
            succ[a] = static_cast<std::uint32_t>(found);
        }
        m.output.push_back(std::move(row));
        m.next.push_back(std::move(succ));
    }
    return m;
}

RunGraphCheck recheck(const spec::GuardedUcw& ucw, const MooreMachine& m, std::size_t bound) {
    m.validate();
    RunGraphCheck r;
    const std::size_t ns = m.num_states();
    r.limit = ucw.num_states * bound;
    std::vector<std::vector<std::size_t>> by_src(ucw.num_states);
    for (std::size_t i = 0; i < ucw.edges.size(); ++i) by_src[ucw.edges[i].src].push_back(i);

    std::map<std::uint64_t, std::uint32_t> index;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> nodes;
    Adjacency adj;
    auto intern = [&](std::uint32_t q, std::uint32_t s) {
        std::uint64_t key = static_cast<std::uint64_t>(q) * ns + s;
        auto [it, fresh_node] = index.try_emplace(key, static_cast<std::uint32_t>(nodes.size()));
        if (fresh_node) {
            nodes.emplace_back(q, s);
            adj.emplace_back();
        }
        return it->second;
    };
    for (auto q0 : ucw.initial) intern(q0, 0);
    const bdd::Manager& guards = *ucw.guards;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto [q, s] = nodes[i];
        std::vector<bool> offered(guards.num_vars(), false);
        for (std::size_t a = 0; a < m.sigma.size(); ++a) offered[a] = m.output[s][a];
        for (auto ei : by_src[q]) {
            const auto& e = ucw.edges[ei];
            if (!guards.eval(e.guard, offered)) continue;
            auto j = intern(e.dst, m.next[s][e.action]);
            adj[i].push_back(j);
        }
    }
    r.product_states = nodes.size();

    std::uint32_t nc = 0;
    auto comp = strongly_connected(adj, &nc);
    auto cyclic = cyclic_components(adj, comp, nc);
    std::vector<std::size_t> greens(nc, 0);
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (ucw.green[nodes[i].first]) {
            if (cyclic[comp[i]]) {
                r.detail = "green state " + ucw.names[nodes[i].first] + " with machine state " +
                           std::to_string(nodes[i].second) + " lies on a cycle";
                return r;
            }
            greens[comp[i]] = 1;
        }
    // Components come in reverse topological order, so successors are done first.
    std::vector<std::vector<std::uint32_t>> members(nc);
    for (std::size_t i = 0; i < nodes.size(); ++i) members[comp[i]].push_back(static_cast<std::uint32_t>(i));
    std::vector<std::size_t> best(nc, 0);
    for (std::uint32_t c = 0; c < nc; ++c) {
        std::size_t tail = 0;
        for (auto i : members[c])
            for (auto j : adj[i])
                if (comp[j] != c) tail = std::max(tail, best[comp[j]]);
        best[c] = greens[c] + tail;
        r.max_greens = std::max(r.max_greens, best[c]);
    }
    if (r.max_greens > r.limit) {
        r.detail = "a path sees " + std::to_string(r.max_greens) + " green states";
        return r;
    }
    r.ok = true;
    return r;
}

std::vector<std::size_t> default_schedule() { return {1, 2, 3, 4, 6, 8, 12, 16}; }

namespace {

struct AttemptResult {
    BoundAttempt info;
    std::optional<MooreMachine> machine;
};

class ModelSource {
public:
    ModelSource(const Encoding& enc, const SolverConfig& cfg, const std::atomic<bool>* cancel)
        : enc_(enc), cfg_(cfg), cancel_(cancel) {
        if (cfg.timeout) deadline_ = std::chrono::steady_clock::now() + *cfg.timeout;
        external_ = cfg.kind == SolverKind::External ||
                    (cfg.kind == SolverKind::Auto && !cfg.external_path.empty() &&
                     enc.cnf().num_clauses() >= cfg.builtin_clause_limit);
        if (!external_) {
            builtin_.emplace(options(false));
            builtin_->add_cnf(enc.cnf());
        }
    }

    std::string name() const { return external_ ? "external" : (cfg_.learning ? "built-in" : "built-in-dpll"); }

    bool out_of_time() const {
        if (cancel_ && cancel_->load()) return true;
        return deadline_ && std::chrono::steady_clock::now() > *deadline_;
    }

    // A probe may give up early; the caller then keeps its previous answer.
    sat::Result solve(const std::vector<Lit>& assumptions, bool probe = false) {
        if (!external_) {
            builtin_->set_options(options(probe));
            return builtin_->solve(assumptions);
        }
        sat::Cnf copy = enc_.cnf();
        for (Lit l : assumptions) copy.add({l});
        sat::ExternalOptions ext;
        ext.solver_path = cfg_.external_path;
        if (deadline_) {
            auto left = std::chrono::duration_cast<std::chrono::seconds>(*deadline_ - std::chrono::steady_clock::now());
            ext.timeout = std::max(left, std::chrono::seconds(1));
        }
        if (!cfg_.artifacts_dir.empty()) {
            ext.work_dir = cfg_.artifacts_dir;
            ext.keep = true;
            ext.file_stem = "bound-" + std::to_string(enc_.bound()) + "-call-" + std::to_string(calls_);
        }
        ++calls_;
        return sat::solve_external(copy, ext);
    }

private:
    sat::Options options(bool probe) const {
        sat::Options o;
        o.learning = cfg_.learning;
        o.cancel = cancel_;
        o.deadline = deadline_;
        if (probe) o.conflict_budget = cfg_.probe_budget;
        return o;
    }

    const Encoding& enc_;
    const SolverConfig& cfg_;
    const std::atomic<bool>* cancel_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    bool external_ = false;
    std::optional<sat::Solver> builtin_;
    int calls_ = 0;
};

std::vector<std::uint32_t> action_order(const SolverConfig& cfg, std::size_t sigma) {
    if (cfg.action_order.empty()) {
        std::vector<std::uint32_t> order(sigma);
        for (std::uint32_t a = 0; a < sigma; ++a) order[a] = a;
        return order;
    }
    auto sorted = cfg.action_order;
    std::sort(sorted.begin(), sorted.end());
    for (std::uint32_t a = 0; a < sorted.size(); ++a)
        if (sorted[a] != a || sorted.size() != sigma) throw Error("action order is not a permutation");
    return cfg.action_order;
}

AttemptResult attempt(const spec::GuardedUcw& ucw, std::size_t bound, const SolverConfig& cfg,
                      const std::atomic<bool>* cancel) {
    AttemptResult res;
    res.info.bound = bound;
    Encoding enc(ucw, bound);
    res.info.variables = enc.cnf().num_vars();
    res.info.clauses = enc.cnf().num_clauses();
    res.info.constraint_groups = enc.constraint_groups();
    if (!cfg.artifacts_dir.empty()) {
        std::filesystem::create_directories(cfg.artifacts_dir);
        std::ofstream f(std::filesystem::path(cfg.artifacts_dir) / ("bound-" + std::to_string(bound) + ".cnf"),
                        std::ios::binary);
        f << enc.dimacs();
    }
    ModelSource source(enc, cfg, cancel);
    res.info.solver = source.name();
    sat::Result r = source.solve({});
    res.info.status = r.status;
    if (r.status != sat::Status::Sat) return res;

    // Canonical choice among solutions: switch outputs off greedily, then
    // prefer self-loops, both state by state in the configured action order.
    const auto order = action_order(cfg, ucw.sigma.size());
    std::vector<Lit> fixed;
    auto try_fix = [&](Lit wanted) {
        if (r.value(wanted)) {
            fixed.push_back(wanted);
            return;
        }
        fixed.push_back(wanted);
        sat::Result tighter = source.solve(fixed, true);
        if (tighter.status == sat::Status::Sat) r = std::move(tighter);
        else fixed.back() = -wanted;
    };
    if (cfg.minimize_outputs)
        for (std::uint32_t s = 0; s < bound && !source.out_of_time(); ++s)
            for (auto a : order) try_fix(-enc.output(s, a));
    if (cfg.prefer_self_loops)
        for (std::uint32_t s = 0; s < bound && !source.out_of_time(); ++s)
            for (auto a : order)
                if (r.value(enc.output(s, a))) try_fix(enc.transition(s, a, s));
    res.machine = enc.extract(r);
    return res;
}

}  // namespace

Outcome synthesize(const spec::GuardedUcw& ucw, std::span<const std::size_t> schedule, const SolverConfig& cfg) {
    if (schedule.empty()) throw Error("empty bound schedule");
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        if (schedule[i] == 0) throw Error("bounds must be positive");
        if (i > 0 && schedule[i] <= schedule[i - 1]) throw Error("bounds must be strictly ascending");
    }
    if (cfg.kind == SolverKind::External && cfg.external_path.empty()) throw Error("external solver path missing");

    const std::size_t n = schedule.size();
    std::vector<AttemptResult> results(n);
    std::vector<bool> done(n, false);
    std::unique_ptr<std::atomic<bool>[]> cancel(new std::atomic<bool>[n]);
    for (std::size_t i = 0; i < n; ++i) cancel[i] = false;
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> best{n};
    std::mutex mu;
    std::exception_ptr failure;

    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            if (i > best.load()) continue;
            try {
                AttemptResult r = attempt(ucw, schedule[i], cfg, &cancel[i]);
                bool sat = r.info.status == sat::Status::Sat;
                std::lock_guard lock(mu);
                results[i] = std::move(r);
                done[i] = true;
                if (sat && i < best.load()) {
                    best = i;
                    for (std::size_t j = i + 1; j < n; ++j) cancel[j] = true;
                }
            } catch (...) {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
                for (std::size_t j = 0; j < n; ++j) cancel[j] = true;
                best = 0;
            }
        }
    };
    unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(n)));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);

    Outcome out;
    for (std::size_t i = 0; i < n; ++i) {
        if (!done[i]) break;
        auto& r = results[i];
        out.attempts.push_back(r.info);
        if (r.info.status == sat::Status::Unsat) {
            out.bound = r.info.bound;
            continue;
        }
        if (r.info.status == sat::Status::Unknown) {
            out.incomplete = true;
            break;
        }
        out.bound = r.info.bound;
        out.raw = std::move(r.machine);
        out.certificate = recheck(ucw, *out.raw, r.info.bound);
        out.machine = minimize(*out.raw);
        auto again = recheck(ucw, *out.machine, out.machine->num_states());
        if (!again.ok) {
            out.certificate.ok = false;
            out.certificate.detail = "minimized machine: " + again.detail;
        }
        break;
    }
    if (!out.machine && !out.incomplete && out.attempts.size() < n) out.incomplete = true;
    return out;
}

}  // namespace coordsynth::synth
