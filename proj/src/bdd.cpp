#include "coordsynth/bdd.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <unordered_map>

namespace coordsynth::bdd {

namespace {

constexpr std::uint32_t kTerminalVar = UINT32_MAX;

inline std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 33;
    x *= 0xff51afd7ed558ccdULL;
    x ^= x >> 33;
    x *= 0xc4ceb9fe1a85ec53ULL;
    x ^= x >> 33;
    return x;
}

inline std::uint64_t node_hash(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
    return mix((std::uint64_t(var) << 40) ^ (std::uint64_t(lo) << 20) ^ hi ^ (std::uint64_t(hi) << 52));
}

}  // namespace

std::uint32_t Bdd::var() const { return mgr_->node_var(id_); }
Bdd Bdd::low() const { return mgr_->handle(mgr_->node_low(id_)); }
Bdd Bdd::high() const { return mgr_->handle(mgr_->node_high(id_)); }
Bdd Bdd::operator&(const Bdd& o) const { return mgr_->apply_and(*this, o); }
Bdd Bdd::operator|(const Bdd& o) const { return mgr_->apply_or(*this, o); }
Bdd Bdd::operator^(const Bdd& o) const { return mgr_->apply_xor(*this, o); }
Bdd Bdd::operator!() const { return mgr_->apply_not(*this); }

Manager::Manager(std::uint32_t num_vars, std::size_t node_cap) : num_vars_(num_vars), node_cap_(node_cap) {
    nodes_.push_back({kTerminalVar, 0, 0});
    nodes_.push_back({kTerminalVar, 1, 1});
    table_.assign(1 << 12, 0);
    cache_.resize(1 << 16);
}

void Manager::check(const Bdd& f) const {
    if (f.mgr_ != this) throw Error("BDD operand belongs to a different manager");
}

void Manager::grow_table() {
    std::vector<std::uint32_t> bigger(table_.size() * 2, 0);
    const std::size_t mask = bigger.size() - 1;
    for (std::uint32_t id : table_) {
        if (!id) continue;
        const Node& n = nodes_[id];
        std::size_t h = node_hash(n.var, n.lo, n.hi) & mask;
        while (bigger[h]) h = (h + 1) & mask;
        bigger[h] = id;
    }
    table_ = std::move(bigger);
    if (cache_.size() < table_.size() && cache_.size() < (std::size_t(1) << 24)) {
        cache_.assign(cache_.size() * 2, CacheEntry{});
    }
}

std::uint32_t Manager::mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi) return lo;
    const std::size_t mask = table_.size() - 1;
    std::size_t h = node_hash(var, lo, hi) & mask;
    while (std::uint32_t id = table_[h]) {
        const Node& n = nodes_[id];
        if (n.var == var && n.lo == lo && n.hi == hi) return id;
        h = (h + 1) & mask;
    }
    if (nodes_.size() >= node_cap_) throw Error("BDD node limit exceeded");
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({var, lo, hi});
    table_[h] = id;
    if (nodes_.size() * 2 > table_.size()) grow_table();
    return id;
}

bool Manager::cache_find(OpCode op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t& out) const {
    const std::uint64_t k0 = (std::uint64_t(op) << 32) | a;
    const std::uint64_t k1 = (std::uint64_t(b) << 32) | c;
    const CacheEntry& e = cache_[mix(k0 * 31 + k1) & (cache_.size() - 1)];
    if (e.key0 == k0 && e.key1 == k1) {
        out = e.result;
        return true;
    }
    return false;
}

void Manager::cache_store(OpCode op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t r) {
    const std::uint64_t k0 = (std::uint64_t(op) << 32) | a;
    const std::uint64_t k1 = (std::uint64_t(b) << 32) | c;
    CacheEntry& e = cache_[mix(k0 * 31 + k1) & (cache_.size() - 1)];
    e.key0 = k0;
    e.key1 = k1;
    e.result = r;
}

Bdd Manager::var(std::uint32_t level) {
    if (level >= num_vars_) throw Error("BDD variable out of range");
    return Bdd(this, mk(level, 0, 1));
}

Bdd Manager::nvar(std::uint32_t level) {
    if (level >= num_vars_) throw Error("BDD variable out of range");
    return Bdd(this, mk(level, 1, 0));
}

std::uint32_t Manager::and_rec(std::uint32_t f, std::uint32_t g) {
    if (f == 0 || g == 0) return 0;
    if (f == 1) return g;
    if (g == 1 || f == g) return f;
    if (f > g) std::swap(f, g);
    std::uint32_t r;
    if (cache_find(OpAnd, f, g, 0, r)) return r;
    const std::uint32_t vf = level_of(f), vg = level_of(g), v = std::min(vf, vg);
    const std::uint32_t f0 = vf == v ? nodes_[f].lo : f, f1 = vf == v ? nodes_[f].hi : f;
    const std::uint32_t g0 = vg == v ? nodes_[g].lo : g, g1 = vg == v ? nodes_[g].hi : g;
    const std::uint32_t lo = and_rec(f0, g0);
    const std::uint32_t hi = and_rec(f1, g1);
    r = mk(v, lo, hi);
    cache_store(OpAnd, f, g, 0, r);
    return r;
}

std::uint32_t Manager::or_rec(std::uint32_t f, std::uint32_t g) {
    if (f == 1 || g == 1) return 1;
    if (f == 0) return g;
    if (g == 0 || f == g) return f;
    if (f > g) std::swap(f, g);
    std::uint32_t r;
    if (cache_find(OpOr, f, g, 0, r)) return r;
    const std::uint32_t vf = level_of(f), vg = level_of(g), v = std::min(vf, vg);
    const std::uint32_t f0 = vf == v ? nodes_[f].lo : f, f1 = vf == v ? nodes_[f].hi : f;
    const std::uint32_t g0 = vg == v ? nodes_[g].lo : g, g1 = vg == v ? nodes_[g].hi : g;
    const std::uint32_t lo = or_rec(f0, g0);
    const std::uint32_t hi = or_rec(f1, g1);
    r = mk(v, lo, hi);
    cache_store(OpOr, f, g, 0, r);
    return r;
}

std::uint32_t Manager::not_rec(std::uint32_t f) {
    if (f < 2) return 1 - f;
    std::uint32_t r;
    if (cache_find(OpNot, f, 0, 0, r)) return r;
    const std::uint32_t lo = not_rec(nodes_[f].lo);
    const std::uint32_t hi = not_rec(nodes_[f].hi);
    r = mk(nodes_[f].var, lo, hi);
    cache_store(OpNot, f, 0, 0, r);
    return r;
}

std::uint32_t Manager::xor_rec(std::uint32_t f, std::uint32_t g) {
    if (f == g) return 0;
    if (f == 0) return g;
    if (g == 0) return f;
    if (f == 1) return not_rec(g);
    if (g == 1) return not_rec(f);
    if (f > g) std::swap(f, g);
    std::uint32_t r;
    if (cache_find(OpXor, f, g, 0, r)) return r;
    const std::uint32_t vf = level_of(f), vg = level_of(g), v = std::min(vf, vg);
    const std::uint32_t f0 = vf == v ? nodes_[f].lo : f, f1 = vf == v ? nodes_[f].hi : f;
    const std::uint32_t g0 = vg == v ? nodes_[g].lo : g, g1 = vg == v ? nodes_[g].hi : g;
    const std::uint32_t lo = xor_rec(f0, g0);
    const std::uint32_t hi = xor_rec(f1, g1);
    r = mk(v, lo, hi);
    cache_store(OpXor, f, g, 0, r);
    return r;
}

std::uint32_t Manager::ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h) {
    if (f == 1) return g;
    if (f == 0) return h;
    if (g == h) return g;
    if (g == 1 && h == 0) return f;
    if (g == 0 && h == 1) return not_rec(f);
    if (g == 1) return or_rec(f, h);
    if (h == 0) return and_rec(f, g);
    std::uint32_t r;
    if (cache_find(OpIte, f, g, h, r)) return r;
    const std::uint32_t v = std::min({level_of(f), level_of(g), level_of(h)});
    auto lo_of = [&](std::uint32_t x) { return level_of(x) == v ? nodes_[x].lo : x; };
    auto hi_of = [&](std::uint32_t x) { return level_of(x) == v ? nodes_[x].hi : x; };
    const std::uint32_t lo = ite_rec(lo_of(f), lo_of(g), lo_of(h));
    const std::uint32_t hi = ite_rec(hi_of(f), hi_of(g), hi_of(h));
    r = mk(v, lo, hi);
    cache_store(OpIte, f, g, h, r);
    return r;
}

std::uint32_t Manager::exists_rec(std::uint32_t f, std::uint32_t cube) {
    if (f < 2 || cube == 1) return f;
    const std::uint32_t vf = level_of(f);
    while (cube != 1 && level_of(cube) < vf) cube = nodes_[cube].hi;
    if (cube == 1) return f;
    std::uint32_t r;
    if (cache_find(OpExists, f, cube, 0, r)) return r;
    if (level_of(cube) == vf) {
        const std::uint32_t lo = exists_rec(nodes_[f].lo, nodes_[cube].hi);
        if (lo == 1) {
            r = 1;
        } else {
            r = or_rec(lo, exists_rec(nodes_[f].hi, nodes_[cube].hi));
        }
    } else {
        const std::uint32_t lo = exists_rec(nodes_[f].lo, cube);
        const std::uint32_t hi = exists_rec(nodes_[f].hi, cube);
        r = mk(vf, lo, hi);
    }
    cache_store(OpExists, f, cube, 0, r);
    return r;
}

std::uint32_t Manager::and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube) {
    if (f == 0 || g == 0) return 0;
    if (f == 1 && g == 1) return 1;
    if (f == 1) return exists_rec(g, cube);
    if (g == 1 || f == g) return exists_rec(f, cube);
    if (cube == 1) return and_rec(f, g);
    if (f > g) std::swap(f, g);
    const std::uint32_t vf = level_of(f), vg = level_of(g), v = std::min(vf, vg);
    while (cube != 1 && level_of(cube) < v) cube = nodes_[cube].hi;
    if (cube == 1) return and_rec(f, g);
    std::uint32_t r;
    if (cache_find(OpAndExists, f, g, cube, r)) return r;
    const std::uint32_t f0 = vf == v ? nodes_[f].lo : f, f1 = vf == v ? nodes_[f].hi : f;
    const std::uint32_t g0 = vg == v ? nodes_[g].lo : g, g1 = vg == v ? nodes_[g].hi : g;
    if (level_of(cube) == v) {
        const std::uint32_t rest = nodes_[cube].hi;
        const std::uint32_t lo = and_exists_rec(f0, g0, rest);
        r = lo == 1 ? 1 : or_rec(lo, and_exists_rec(f1, g1, rest));
    } else {
        const std::uint32_t lo = and_exists_rec(f0, g0, cube);
        const std::uint32_t hi = and_exists_rec(f1, g1, cube);
        r = mk(v, lo, hi);
    }
    cache_store(OpAndExists, f, g, cube, r);
    return r;
}

std::uint32_t Manager::restrict_rec(std::uint32_t f, std::uint32_t level, bool value) {
    if (f < 2 || level_of(f) > level) return f;
    if (level_of(f) == level) return value ? nodes_[f].hi : nodes_[f].lo;
    std::uint32_t r;
    if (cache_find(OpRestrict, f, level, value, r)) return r;
    const std::uint32_t lo = restrict_rec(nodes_[f].lo, level, value);
    const std::uint32_t hi = restrict_rec(nodes_[f].hi, level, value);
    r = mk(level_of(f), lo, hi);
    cache_store(OpRestrict, f, level, value, r);
    return r;
}

Bdd Manager::apply_and(Bdd f, Bdd g) {
    check(f), check(g);
    return Bdd(this, and_rec(f.id_, g.id_));
}
Bdd Manager::apply_or(Bdd f, Bdd g) {
    check(f), check(g);
    return Bdd(this, or_rec(f.id_, g.id_));
}
Bdd Manager::apply_xor(Bdd f, Bdd g) {
    check(f), check(g);
    return Bdd(this, xor_rec(f.id_, g.id_));
}
Bdd Manager::apply_not(Bdd f) {
    check(f);
    return Bdd(this, not_rec(f.id_));
}
Bdd Manager::ite(Bdd f, Bdd g, Bdd h) {
    check(f), check(g), check(h);
    return Bdd(this, ite_rec(f.id_, g.id_, h.id_));
}

Bdd Manager::cube(std::span<const std::uint32_t> levels) {
    std::vector<std::uint32_t> sorted(levels.begin(), levels.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::uint32_t r = 1;
    for (auto it = sorted.rbegin(); it != sorted.rend(); ++it) {
        if (*it >= num_vars_) throw Error("BDD variable out of range");
        r = mk(*it, 0, r);
    }
    return Bdd(this, r);
}

Bdd Manager::exists(Bdd f, std::span<const std::uint32_t> levels) { return exists(f, cube(levels)); }

Bdd Manager::exists(Bdd f, Bdd c) {
    check(f), check(c);
    return Bdd(this, exists_rec(f.id_, c.id_));
}

Bdd Manager::forall(Bdd f, std::span<const std::uint32_t> levels) {
    return apply_not(exists(apply_not(f), levels));
}

Bdd Manager::and_exists(Bdd f, Bdd g, Bdd c) {
    check(f), check(g), check(c);
    return Bdd(this, and_exists_rec(f.id_, g.id_, c.id_));
}

Bdd Manager::rename(Bdd f, std::span<const std::uint32_t> map) {
    check(f);
    auto sup = support(f);
    std::uint32_t prev = 0;
    bool first = true;
    for (std::uint32_t v : sup) {
        const std::uint32_t to = v < map.size() ? map[v] : v;
        if (to >= num_vars_) throw Error("rename target out of range");
        if (!first && to <= prev) throw Error("rename map is not order-compatible on the support");
        prev = to;
        first = false;
    }
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    std::function<std::uint32_t(std::uint32_t)> rec = [&](std::uint32_t x) -> std::uint32_t {
        if (x < 2) return x;
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        const std::uint32_t v = nodes_[x].var;
        const std::uint32_t to = v < map.size() ? map[v] : v;
        const std::uint32_t lo = rec(nodes_[x].lo);
        const std::uint32_t hi = rec(nodes_[x].hi);
        const std::uint32_t r = mk(to, lo, hi);
        memo.emplace(x, r);
        return r;
    };
    return Bdd(this, rec(f.id_));
}

Bdd Manager::restrict(Bdd f, std::uint32_t level, bool value) {
    check(f);
    return Bdd(this, restrict_rec(f.id_, level, value));
}

bool Manager::eval(Bdd f, const std::vector<bool>& assignment) const {
    check(f);
    std::uint32_t x = f.id_;
    while (x >= 2) x = assignment.at(nodes_[x].var) ? nodes_[x].hi : nodes_[x].lo;
    return x == 1;
}

std::vector<std::uint32_t> Manager::support(Bdd f) {
    check(f);
    std::vector<bool> seen_node(nodes_.size(), false), seen_var(num_vars_, false);
    std::vector<std::uint32_t> stack{f.id_};
    while (!stack.empty()) {
        std::uint32_t x = stack.back();
        stack.pop_back();
        if (x < 2 || seen_node[x]) continue;
        seen_node[x] = true;
        seen_var[nodes_[x].var] = true;
        stack.push_back(nodes_[x].lo);
        stack.push_back(nodes_[x].hi);
    }
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < num_vars_; ++v)
        if (seen_var[v]) out.push_back(v);
    return out;
}

std::size_t Manager::dag_size(Bdd f) const {
    check(f);
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<std::uint32_t> stack{f.id_};
    std::size_t count = 0;
    while (!stack.empty()) {
        std::uint32_t x = stack.back();
        stack.pop_back();
        if (seen[x]) continue;
        seen[x] = true;
        ++count;
        if (x >= 2) {
            stack.push_back(nodes_[x].lo);
            stack.push_back(nodes_[x].hi);
        }
    }
    return count;
}

double Manager::sat_count(Bdd f, std::span<const std::uint32_t> levels) {
    check(f);
    std::vector<std::uint32_t> lv(levels.begin(), levels.end());
    std::sort(lv.begin(), lv.end());
    auto pos = [&](std::uint32_t x) -> std::size_t {
        if (x < 2) return lv.size();
        auto it = std::lower_bound(lv.begin(), lv.end(), nodes_[x].var);
        if (it == lv.end() || *it != nodes_[x].var) throw Error("sat_count: support not covered by the level set");
        return static_cast<std::size_t>(it - lv.begin());
    };
    std::unordered_map<std::uint32_t, double> memo;
    std::function<double(std::uint32_t)> rec = [&](std::uint32_t x) -> double {
        if (x < 2) return x;
        if (auto it = memo.find(x); it != memo.end()) return it->second;
        const std::size_t p = pos(x);
        const std::uint32_t lo = nodes_[x].lo, hi = nodes_[x].hi;
        double r = rec(lo) * std::ldexp(1.0, static_cast<int>(pos(lo) - p - 1)) +
                   rec(hi) * std::ldexp(1.0, static_cast<int>(pos(hi) - p - 1));
        memo.emplace(x, r);
        return r;
    };
    return rec(f.id_) * std::ldexp(1.0, static_cast<int>(pos(f.id_)));
}

void Manager::for_each_assignment(Bdd f, std::span<const std::uint32_t> levels,
                                  const std::function<void(const std::vector<bool>&)>& visit) {
    check(f);
    std::vector<bool> values(levels.size(), false);
    std::function<void(std::uint32_t, std::size_t)> rec = [&](std::uint32_t x, std::size_t i) {
        if (x == 0) return;
        if (i == levels.size()) {
            if (x != 1) throw Error("for_each_assignment: support not covered by the level set");
            visit(values);
            return;
        }
        const std::uint32_t level = levels[i];
        if (x >= 2 && nodes_[x].var < level)
            throw Error("for_each_assignment: support not covered by the level set");
        const bool tests = x >= 2 && nodes_[x].var == level;
        values[i] = false;
        rec(tests ? nodes_[x].lo : x, i + 1);
        values[i] = true;
        rec(tests ? nodes_[x].hi : x, i + 1);
    };
    rec(f.id_, 0);
}

Bdd Manager::lfp(const std::function<Bdd(Bdd)>& step, Bdd bottom, std::size_t cap) {
    check(bottom);
    Bdd cur = bottom;
    for (std::size_t round = 0; round <= cap; ++round) {
        Bdd nxt = step(cur);
        if (nxt == cur) return cur;
        cur = nxt;
    }
    throw Error("fixpoint iteration cap exceeded");
}

std::string Manager::to_dot(Bdd f) const {
    check(f);
    std::ostringstream out;
    out << "digraph bdd {\n  n0 [shape=box,label=\"0\"];\n  n1 [shape=box,label=\"1\"];\n";
    std::vector<bool> seen(nodes_.size(), false);
    std::vector<std::uint32_t> stack{f.id_};
    while (!stack.empty()) {
        std::uint32_t x = stack.back();
        stack.pop_back();
        if (x < 2 || seen[x]) continue;
        seen[x] = true;
        out << "  n" << x << " [label=\"x" << nodes_[x].var << "\"];\n";
        out << "  n" << x << " -> n" << nodes_[x].lo << " [style=dashed];\n";
        out << "  n" << x << " -> n" << nodes_[x].hi << ";\n";
        stack.push_back(nodes_[x].lo);
        stack.push_back(nodes_[x].hi);
    }
    out << "}\n";
    return out.str();
}

}  // namespace coordsynth::bdd
