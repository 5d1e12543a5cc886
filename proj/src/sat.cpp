#include "coordsynth/sat.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <limits>
#include <sstream>

namespace coordsynth::sat {

void Cnf::add(std::span<const Lit> clause) {
    std::vector<Lit> c(clause.begin(), clause.end());
    for (Lit l : c) {
        if (l == 0) throw Error("zero literal in clause");
        auto v = static_cast<std::uint32_t>(l > 0 ? l : -l);
        if (v > num_vars_) throw Error("literal " + std::to_string(l) + " exceeds variable count");
    }
    std::sort(c.begin(), c.end(), [](Lit a, Lit b) {
        int va = a > 0 ? a : -a, vb = b > 0 ? b : -b;
        return va != vb ? va < vb : a < b;
    });
    c.erase(std::unique(c.begin(), c.end()), c.end());
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i] == -c[i - 1]) return;
    clauses_.push_back(std::move(c));
}

std::string Cnf::dimacs(std::span<const std::string> comments) const {
    std::string out;
    for (const auto& line : comments) out += "c " + line + "\n";
    out += "p cnf " + std::to_string(num_vars_) + " " + std::to_string(clauses_.size()) + "\n";
    for (const auto& c : clauses_) {
        for (Lit l : c) {
            out += std::to_string(l);
            out += ' ';
        }
        out += "0\n";
    }
    return out;
}

namespace {

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

long long to_int(std::string_view s) {
    long long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw Error("bad integer '" + std::string(s) + "'");
    return v;
}

template <class F>
void for_each_line(std::string_view text, F&& f) {
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        f(text.substr(pos, end - pos));
        pos = end + 1;
    }
}

}  // namespace

Cnf parse_dimacs(std::string_view text) {
    Cnf cnf;
    bool header = false;
    std::vector<Lit> pending;
    for_each_line(text, [&](std::string_view line) {
        auto tok = tokens(line);
        if (tok.empty() || tok[0][0] == 'c' || tok[0][0] == '%') return;
        if (tok[0] == "p") {
            if (tok.size() != 4 || tok[1] != "cnf") throw Error("bad DIMACS header");
            auto vars = to_int(tok[2]);
            (void)to_int(tok[3]);
            while (cnf.num_vars() < vars) cnf.new_var();
            header = true;
            return;
        }
        if (!header) throw Error("clause before DIMACS header");
        for (auto t : tok) {
            auto v = to_int(t);
            if (v == 0) {
                cnf.add(pending);
                pending.clear();
            } else {
                pending.push_back(static_cast<Lit>(v));
            }
        }
    });
    if (!pending.empty()) throw Error("unterminated clause");
    return cnf;
}

Result parse_competition_output(std::string_view text, std::uint32_t num_vars) {
    Result r;
    bool seen_status = false;
    r.model.assign(num_vars + 1, false);
    for_each_line(text, [&](std::string_view line) {
        auto tok = tokens(line);
        if (tok.empty()) return;
        if (tok[0] == "s") {
            if (tok.size() < 2) throw Error("bad status line");
            if (tok[1] == "SATISFIABLE") r.status = Status::Sat;
            else if (tok[1] == "UNSATISFIABLE") r.status = Status::Unsat;
            else r.status = Status::Unknown;
            seen_status = true;
        } else if (tok[0] == "v") {
            for (std::size_t i = 1; i < tok.size(); ++i) {
                auto v = to_int(tok[i]);
                if (v == 0) continue;
                auto var = static_cast<std::uint64_t>(v > 0 ? v : -v);
                if (var > num_vars) throw Error("model literal out of range");
                r.model[var] = v > 0;
            }
        }
    });
    if (!seen_status) throw Error("solver output has no status line");
    if (r.status != Status::Sat) r.model.clear();
    return r;
}

std::string competition_output(const Result& r, std::uint32_t num_vars) {
    std::string out;
    switch (r.status) {
        case Status::Sat: out = "s SATISFIABLE\n"; break;
        case Status::Unsat: return "s UNSATISFIABLE\n";
        case Status::Unknown: return "s UNKNOWN\n";
    }
    std::string line = "v";
    for (std::uint32_t v = 1; v <= num_vars; ++v) {
        std::string lit = " " + std::string(r.model[v] ? "" : "-") + std::to_string(v);
        if (line.size() + lit.size() > 78) {
            out += line + "\n";
            line = "v";
        }
        line += lit;
    }
    out += line + " 0\n";
    return out;
}

// ---------------------------------------------------------------------------
// Solver internals. Literals are 2*var + sign with var counted from 0.

namespace {

constexpr std::uint32_t kNoReason = std::numeric_limits<std::uint32_t>::max();

using ILit = std::uint32_t;
inline ILit make_lit(std::uint32_t var, bool neg) { return 2 * var + (neg ? 1 : 0); }
inline std::uint32_t var_of(ILit l) { return l >> 1; }
inline ILit negate(ILit l) { return l ^ 1; }

enum : std::int8_t { kFalse = -1, kUndef = 0, kTrue = 1 };

struct Clause {
    std::vector<ILit> lits;
    bool learnt = false;
    bool deleted = false;
    std::uint32_t lbd = 0;
    double activity = 0;
};

struct Watcher {
    std::uint32_t cref;
    ILit blocker;
};

}  // namespace

struct Solver::Impl {
    Options opts;
    bool ok = true;
    std::uint32_t nvars = 0;

    std::vector<Clause> clauses;
    std::vector<std::uint32_t> free_slots;
    std::vector<std::vector<Watcher>> watches;  // per literal: clauses watching its negation becoming true

    std::vector<std::int8_t> assigns;  // per var
    std::vector<std::uint32_t> level;
    std::vector<std::uint32_t> reason;
    std::vector<bool> phase;
    std::vector<ILit> trail;
    std::vector<std::uint32_t> trail_lim;
    std::size_t qhead = 0;

    // Decision-level flags for the learning-free mode: a flipped level can no
    // longer be flipped back.
    std::vector<bool> level_flipped;

    std::vector<double> activity;
    double var_inc = 1.0;
    double cla_inc = 1.0;
    std::vector<std::uint32_t> heap;
    std::vector<std::int32_t> heap_pos;

    std::vector<std::uint8_t> seen;
    std::size_t num_learnts = 0;
    std::uint64_t reduce_rounds = 0;
    static constexpr std::size_t kLbdWindow = 50;
    static constexpr std::size_t kTrailWindow = 5000;
    Stats stats;

    std::int8_t value(ILit l) const {
        std::int8_t v = assigns[var_of(l)];
        return (l & 1) ? static_cast<std::int8_t>(-v) : v;
    }
    std::uint32_t decision_level() const { return static_cast<std::uint32_t>(trail_lim.size()); }

    void ensure_vars(std::uint32_t n) {
        while (nvars < n) {
            assigns.push_back(kUndef);
            level.push_back(0);
            reason.push_back(kNoReason);
            phase.push_back(true);  // negative literal preferred
            activity.push_back(0);
            seen.push_back(0);
            heap_pos.push_back(-1);
            watches.emplace_back();
            watches.emplace_back();
            heap_insert(nvars);
            ++nvars;
        }
    }

    // --- VSIDS heap (max-heap on activity, ties broken by lower index)
    bool heap_less(std::uint32_t a, std::uint32_t b) const {
        return activity[a] > activity[b] || (activity[a] == activity[b] && a < b);
    }
    void heap_up(std::size_t i) {
        std::uint32_t v = heap[i];
        while (i > 0) {
            std::size_t p = (i - 1) / 2;
            if (!heap_less(v, heap[p])) break;
            heap[i] = heap[p];
            heap_pos[heap[i]] = static_cast<std::int32_t>(i);
            i = p;
        }
        heap[i] = v;
        heap_pos[v] = static_cast<std::int32_t>(i);
    }
    void heap_down(std::size_t i) {
        std::uint32_t v = heap[i];
        for (;;) {
            std::size_t c = 2 * i + 1;
            if (c >= heap.size()) break;
            if (c + 1 < heap.size() && heap_less(heap[c + 1], heap[c])) ++c;
            if (!heap_less(heap[c], v)) break;
            heap[i] = heap[c];
            heap_pos[heap[i]] = static_cast<std::int32_t>(i);
            i = c;
        }
        heap[i] = v;
        heap_pos[v] = static_cast<std::int32_t>(i);
    }
    void heap_insert(std::uint32_t v) {
        if (heap_pos[v] >= 0) return;
        heap.push_back(v);
        heap_pos[v] = static_cast<std::int32_t>(heap.size() - 1);
        heap_up(heap.size() - 1);
    }
    std::uint32_t heap_pop() {
        std::uint32_t top = heap[0];
        heap_pos[top] = -1;
        heap[0] = heap.back();
        heap.pop_back();
        if (!heap.empty()) {
            heap_pos[heap[0]] = 0;
            heap_down(0);
        }
        return top;
    }

    void bump_var(std::uint32_t v) {
        if ((activity[v] += var_inc) > 1e100) {
            for (auto& a : activity) a *= 1e-100;
            var_inc *= 1e-100;
        }
        if (heap_pos[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos[v]));
    }
    void bump_clause(Clause& c) {
        if ((c.activity += cla_inc) > 1e20) {
            for (auto& cl : clauses)
                if (cl.learnt) cl.activity *= 1e-20;
            cla_inc *= 1e-20;
        }
    }

    // --- assignment
    void enqueue(ILit l, std::uint32_t from) {
        std::uint32_t v = var_of(l);
        assigns[v] = (l & 1) ? kFalse : kTrue;
        level[v] = decision_level();
        reason[v] = from;
        trail.push_back(l);
    }

    void cancel_until(std::uint32_t lvl) {
        if (decision_level() <= lvl) return;
        for (std::size_t i = trail.size(); i > trail_lim[lvl]; --i) {
            std::uint32_t v = var_of(trail[i - 1]);
            assigns[v] = kUndef;
            reason[v] = kNoReason;
            phase[v] = (trail[i - 1] & 1) != 0;
            heap_insert(v);
        }
        trail.resize(trail_lim[lvl]);
        trail_lim.resize(lvl);
        level_flipped.resize(lvl);
        qhead = trail.size();
    }

    std::uint32_t store_clause(std::vector<ILit> lits, bool learnt) {
        Clause c;
        c.lits = std::move(lits);
        c.learnt = learnt;
        std::uint32_t cref;
        if (!free_slots.empty()) {
            cref = free_slots.back();
            free_slots.pop_back();
            clauses[cref] = std::move(c);
        } else {
            cref = static_cast<std::uint32_t>(clauses.size());
            clauses.push_back(std::move(c));
        }
        const auto& cl = clauses[cref].lits;
        watches[negate(cl[0])].push_back({cref, cl[1]});
        watches[negate(cl[1])].push_back({cref, cl[0]});
        if (learnt) ++num_learnts;
        return cref;
    }

    void add_clause(std::span<const Lit> in) {
        if (!ok) return;
        cancel_until(0);
        std::vector<ILit> lits;
        for (Lit l : in) {
            if (l == 0) throw Error("zero literal in clause");
            auto v = static_cast<std::uint32_t>(l > 0 ? l : -l);
            ensure_vars(v);
            lits.push_back(make_lit(v - 1, l < 0));
        }
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        std::vector<ILit> kept;
        for (std::size_t i = 0; i < lits.size(); ++i) {
            if (i + 1 < lits.size() && lits[i + 1] == negate(lits[i])) return;
            std::int8_t val = value(lits[i]);
            if (val == kTrue) return;
            if (val == kFalse) continue;
            kept.push_back(lits[i]);
        }
        if (kept.empty()) {
            ok = false;
        } else if (kept.size() == 1) {
            enqueue(kept[0], kNoReason);
            if (propagate() != kNoReason) ok = false;
        } else {
            store_clause(std::move(kept), false);
        }
    }

    // Returns the conflicting clause or kNoReason.
    std::uint32_t propagate() {
        std::uint32_t conflict = kNoReason;
        while (qhead < trail.size()) {
            ILit p = trail[qhead++];
            ++stats.propagations;
            auto& ws = watches[p];
            std::size_t i = 0, j = 0;
            ILit false_lit = negate(p);
            while (i < ws.size()) {
                Watcher w = ws[i];
                if (value(w.blocker) == kTrue) {
                    ws[j++] = ws[i++];
                    continue;
                }
                Clause& c = clauses[w.cref];
                if (c.deleted) {
                    ++i;
                    continue;
                }
                auto& lits = c.lits;
                if (lits[0] == false_lit) std::swap(lits[0], lits[1]);
                ++i;
                ILit first = lits[0];
                if (first != w.blocker && value(first) == kTrue) {
                    ws[j++] = {w.cref, first};
                    continue;
                }
                bool moved = false;
                for (std::size_t k = 2; k < lits.size(); ++k) {
                    if (value(lits[k]) != kFalse) {
                        std::swap(lits[1], lits[k]);
                        watches[negate(lits[1])].push_back({w.cref, first});
                        moved = true;
                        break;
                    }
                }
                if (moved) continue;
                ws[j++] = {w.cref, first};
                if (value(first) == kFalse) {
                    conflict = w.cref;
                    qhead = trail.size();
                    while (i < ws.size()) ws[j++] = ws[i++];
                } else {
                    enqueue(first, w.cref);
                }
            }
            ws.resize(j);
            if (conflict != kNoReason) break;
        }
        return conflict;
    }

    std::uint32_t compute_lbd(const std::vector<ILit>& lits) {
        std::vector<std::uint32_t> levels;
        for (ILit l : lits) levels.push_back(level[var_of(l)]);
        std::sort(levels.begin(), levels.end());
        return static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
    }

    bool redundant(ILit l) {
        std::uint32_t r = reason[var_of(l)];
        if (r == kNoReason) return false;
        for (ILit q : clauses[r].lits) {
            std::uint32_t v = var_of(q);
            if (v == var_of(l)) continue;
            if (!seen[v] && level[v] > 0) return false;
        }
        return true;
    }

    // First-UIP learning; returns the backjump level.
    std::uint32_t analyze(std::uint32_t conflict, std::vector<ILit>& learnt) {
        learnt.assign(1, 0);
        int pending = 0;
        ILit p = 0;
        bool have_p = false;
        std::size_t index = trail.size();
        std::vector<std::uint32_t> touched;
        do {
            Clause& c = clauses[conflict];
            if (c.learnt) bump_clause(c);
            for (ILit q : c.lits) {
                if (have_p && q == p) continue;
                std::uint32_t v = var_of(q);
                if (seen[v] || level[v] == 0) continue;
                seen[v] = 1;
                touched.push_back(v);
                bump_var(v);
                if (level[v] >= decision_level()) ++pending;
                else learnt.push_back(q);
            }
            while (!seen[var_of(trail[--index])]) {
            }
            p = trail[index];
            have_p = true;
            conflict = reason[var_of(p)];
            seen[var_of(p)] = 0;
            --pending;
        } while (pending > 0);
        learnt[0] = negate(p);

        std::size_t keep = 1;
        for (std::size_t i = 1; i < learnt.size(); ++i)
            if (!redundant(learnt[i])) learnt[keep++] = learnt[i];
        learnt.resize(keep);
        for (auto v : touched) seen[v] = 0;

        std::uint32_t back = 0;
        if (learnt.size() > 1) {
            std::size_t max_i = 1;
            for (std::size_t i = 2; i < learnt.size(); ++i)
                if (level[var_of(learnt[i])] > level[var_of(learnt[max_i])]) max_i = i;
            std::swap(learnt[1], learnt[max_i]);
            back = level[var_of(learnt[1])];
        }
        return back;
    }

    bool locked(std::uint32_t cref) const {
        const auto& c = clauses[cref];
        ILit l = c.lits[0];
        return value(l) == kTrue && reason[var_of(l)] == cref;
    }

    void reduce_db() {
        std::vector<std::uint32_t> learnts;
        for (std::uint32_t i = 0; i < clauses.size(); ++i)
            if (clauses[i].learnt && !clauses[i].deleted && clauses[i].lits.size() > 2) learnts.push_back(i);
        std::sort(learnts.begin(), learnts.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto& x = clauses[a];
            const auto& y = clauses[b];
            if (x.lbd != y.lbd) return x.lbd > y.lbd;
            if (x.activity != y.activity) return x.activity < y.activity;
            return a < b;
        });
        std::size_t target = learnts.size() / 2;
        for (std::size_t i = 0; i < target; ++i) {
            auto cref = learnts[i];
            if (locked(cref) || clauses[cref].lbd <= 2) continue;
            clauses[cref].deleted = true;
            clauses[cref].lits.clear();
            --num_learnts;
        }
        for (auto& ws : watches)
            ws.erase(std::remove_if(ws.begin(), ws.end(), [&](const Watcher& w) { return clauses[w.cref].deleted; }),
                     ws.end());
        for (std::uint32_t i = 0; i < clauses.size(); ++i)
            if (clauses[i].deleted && clauses[i].lits.empty() && clauses[i].learnt) {
                clauses[i].learnt = false;
                free_slots.push_back(i);
            }
    }

    bool interrupted() const {
        if (opts.cancel && opts.cancel->load(std::memory_order_relaxed)) return true;
        if (opts.deadline && std::chrono::steady_clock::now() > *opts.deadline) return true;
        return false;
    }

    std::optional<ILit> pick_branch() {
        while (!heap.empty()) {
            std::uint32_t v = heap_pop();
            if (assigns[v] == kUndef) return make_lit(v, phase[v]);
        }
        return std::nullopt;
    }

    void new_level(bool flipped) {
        trail_lim.push_back(static_cast<std::uint32_t>(trail.size()));
        level_flipped.push_back(flipped);
    }

    // Learning-free conflict handling: flip the deepest unflipped decision.
    bool backtrack_chronological(std::size_t num_assumptions) {
        std::uint32_t lvl = decision_level();
        while (lvl > num_assumptions && level_flipped[lvl - 1]) --lvl;
        if (lvl <= num_assumptions) return false;
        ILit decision = trail[trail_lim[lvl - 1]];
        cancel_until(lvl - 1);
        new_level(true);
        enqueue(negate(decision), kNoReason);
        return true;
    }

    Result search(std::span<const Lit> assumptions_in) {
        Result res;
        stats = {};
        if (!ok) {
            res.status = Status::Unsat;
            return res;
        }
        std::vector<ILit> assumptions;
        for (Lit l : assumptions_in) {
            auto v = static_cast<std::uint32_t>(l > 0 ? l : -l);
            ensure_vars(v);
            assumptions.push_back(make_lit(v - 1, l < 0));
        }
        cancel_until(0);
        if (propagate() != kNoReason) {
            ok = false;
            res.status = Status::Unsat;
            return res;
        }
        // Restarts follow the recent-versus-overall learnt-clause quality
        // heuristic; the database is halved on a growing conflict schedule.
        std::deque<std::uint32_t> recent_lbd;
        std::uint64_t recent_sum = 0;
        double total_lbd = 0;
        std::uint64_t learnt_count = 0;
        std::deque<std::size_t> recent_trail;
        std::uint64_t trail_sum = 0;
        std::uint64_t next_reduce = 2000 + reduce_rounds * 300;
        std::uint64_t tick = 0;
        std::vector<ILit> learnt;

        for (;;) {
            if ((++tick & 255) == 0 && interrupted()) {
                cancel_until(0);
                res.status = Status::Unknown;
                res.stats = stats;
                return res;
            }
            std::uint32_t conflict = propagate();
            if (conflict != kNoReason) {
                ++stats.conflicts;
                if (opts.conflict_budget && stats.conflicts > opts.conflict_budget && decision_level() > 0) {
                    cancel_until(0);
                    res.status = Status::Unknown;
                    res.stats = stats;
                    return res;
                }
                if (decision_level() == 0) {
                    ok = false;
                    res.status = Status::Unsat;
                    res.stats = stats;
                    return res;
                }
                if (!opts.learning) {
                    if (!backtrack_chronological(assumptions.size())) {
                        cancel_until(0);
                        res.status = Status::Unsat;
                        res.stats = stats;
                        return res;
                    }
                    continue;
                }
                // Block a pending restart while the assignment is unusually deep.
                recent_trail.push_back(trail.size());
                trail_sum += trail.size();
                if (recent_trail.size() > kTrailWindow) {
                    trail_sum -= recent_trail.front();
                    recent_trail.pop_front();
                }
                if (stats.conflicts > 10000 && recent_lbd.size() == kLbdWindow && recent_trail.size() == kTrailWindow &&
                    static_cast<double>(trail.size()) > 1.4 * static_cast<double>(trail_sum) / kTrailWindow) {
                    recent_lbd.clear();
                    recent_sum = 0;
                }

                std::uint32_t back = analyze(conflict, learnt);
                cancel_until(back);
                std::uint32_t lbd = 1;
                if (learnt.size() == 1) {
                    enqueue(learnt[0], kNoReason);
                } else {
                    lbd = compute_lbd(learnt);
                    std::uint32_t cref = store_clause(learnt, true);
                    clauses[cref].lbd = lbd;
                    bump_clause(clauses[cref]);
                    enqueue(learnt[0], cref);
                }
                recent_lbd.push_back(lbd);
                recent_sum += lbd;
                if (recent_lbd.size() > kLbdWindow) {
                    recent_sum -= recent_lbd.front();
                    recent_lbd.pop_front();
                }
                total_lbd += lbd;
                ++learnt_count;
                var_inc /= 0.95;
                cla_inc /= 0.999;
                continue;
            }

            if (opts.learning && recent_lbd.size() == kLbdWindow &&
                static_cast<double>(recent_sum) / kLbdWindow * 0.8 > total_lbd / static_cast<double>(learnt_count)) {
                ++stats.restarts;
                recent_lbd.clear();
                recent_sum = 0;
                cancel_until(0);
                continue;
            }
            if (opts.learning && stats.conflicts >= next_reduce) {
                reduce_db();
                ++reduce_rounds;
                next_reduce = stats.conflicts + 2000 + reduce_rounds * 300;
            }

            std::optional<ILit> next;
            while (decision_level() < assumptions.size()) {
                ILit a = assumptions[decision_level()];
                if (value(a) == kTrue) {
                    new_level(true);
                } else if (value(a) == kFalse) {
                    cancel_until(0);
                    res.status = Status::Unsat;
                    res.stats = stats;
                    return res;
                } else {
                    next = a;
                    break;
                }
            }
            bool from_assumption = next.has_value();
            if (!next) {
                next = pick_branch();
                if (!next) {
                    res.status = Status::Sat;
                    res.model.assign(nvars + 1, false);
                    for (std::uint32_t v = 0; v < nvars; ++v) res.model[v + 1] = assigns[v] == kTrue;
                    res.stats = stats;
                    cancel_until(0);
                    return res;
                }
            }
            ++stats.decisions;
            new_level(from_assumption);
            enqueue(*next, kNoReason);
        }
    }
};

Solver::Solver(Options opts) : impl_(std::make_unique<Impl>()) { impl_->opts = opts; }
Solver::~Solver() = default;
Solver::Solver(Solver&&) noexcept = default;
Solver& Solver::operator=(Solver&&) noexcept = default;

void Solver::add_clause(std::span<const Lit> clause) { impl_->add_clause(clause); }

void Solver::add_cnf(const Cnf& cnf) {
    impl_->ensure_vars(cnf.num_vars());
    for (const auto& c : cnf.clauses()) impl_->add_clause(c);
}

Result Solver::solve(std::span<const Lit> assumptions) { return impl_->search(assumptions); }

void Solver::set_options(const Options& opts) { impl_->opts = opts; }

Result solve(const Cnf& cnf, const Options& opts) {
    Solver s(opts);
    s.add_cnf(cnf);
    Result r = s.solve();
    if (r.status == Status::Sat) r.model.resize(cnf.num_vars() + 1);
    return r;
}

}  // namespace coordsynth::sat
