#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "coordsynth/types.hpp"

namespace coordsynth::bdd {

class Manager;

// Handle to a node of a Manager. Handles are plain values; nodes live as long
// as their manager (no garbage collection).
class Bdd {
public:
    Bdd() = default;

    bool is_false() const { return id_ == 0; }
    bool is_true() const { return id_ == 1; }
    bool is_const() const { return id_ < 2; }
    std::uint32_t id() const { return id_; }
    Manager* manager() const { return mgr_; }

    // Top variable and cofactors; undefined for constants.
    std::uint32_t var() const;
    Bdd low() const;
    Bdd high() const;

    Bdd operator&(const Bdd& o) const;
    Bdd operator|(const Bdd& o) const;
    Bdd operator^(const Bdd& o) const;
    Bdd operator!() const;
    Bdd& operator&=(const Bdd& o) { return *this = *this & o; }
    Bdd& operator|=(const Bdd& o) { return *this = *this | o; }

    bool operator==(const Bdd& o) const { return mgr_ == o.mgr_ && id_ == o.id_; }
    bool operator!=(const Bdd& o) const { return !(*this == o); }

private:
    friend class Manager;
    Bdd(Manager* m, std::uint32_t id) : mgr_(m), id_(id) {}
    Manager* mgr_ = nullptr;
    std::uint32_t id_ = 0;
};

class Manager {
public:
    explicit Manager(std::uint32_t num_vars, std::size_t node_cap = 50'000'000);
    Manager(const Manager&) = delete;
    Manager& operator=(const Manager&) = delete;

    std::uint32_t num_vars() const { return num_vars_; }
    std::size_t node_count() const { return nodes_.size(); }

    Bdd zero() { return Bdd(this, 0); }
    Bdd one() { return Bdd(this, 1); }
    Bdd constant(bool v) { return Bdd(this, v ? 1 : 0); }
    Bdd var(std::uint32_t level);
    Bdd nvar(std::uint32_t level);
    Bdd literal(std::uint32_t level, bool positive) { return positive ? var(level) : nvar(level); }

    Bdd apply_and(Bdd f, Bdd g);
    Bdd apply_or(Bdd f, Bdd g);
    Bdd apply_xor(Bdd f, Bdd g);
    Bdd apply_not(Bdd f);
    Bdd ite(Bdd f, Bdd g, Bdd h);
    Bdd implies(Bdd f, Bdd g) { return apply_or(apply_not(f), g); }
    Bdd iff(Bdd f, Bdd g) { return apply_not(apply_xor(f, g)); }

    // Conjunction of positive literals, used as a variable set.
    Bdd cube(std::span<const std::uint32_t> levels);
    Bdd exists(Bdd f, std::span<const std::uint32_t> levels);
    Bdd forall(Bdd f, std::span<const std::uint32_t> levels);
    Bdd exists(Bdd f, Bdd cube);
    // exists cube. f & g, without building the full conjunction.
    Bdd and_exists(Bdd f, Bdd g, Bdd cube);

    // Substitutes variables; map[level] is the new level (identity where equal).
    // The map restricted to the support of f must preserve the variable order.
    Bdd rename(Bdd f, std::span<const std::uint32_t> map);

    Bdd restrict(Bdd f, std::uint32_t level, bool value);
    bool eval(Bdd f, const std::vector<bool>& assignment) const;
    std::vector<std::uint32_t> support(Bdd f);
    std::size_t dag_size(Bdd f) const;
    // Number of satisfying assignments over the given variables (must cover the support).
    double sat_count(Bdd f, std::span<const std::uint32_t> levels);

    // Calls visit once per satisfying assignment of f projected onto `levels`
    // (levels ascending); f's support must be within `levels`.
    void for_each_assignment(Bdd f, std::span<const std::uint32_t> levels,
                             const std::function<void(const std::vector<bool>&)>& visit);

    // Iterates step from bottom until a fixpoint; throws after `cap` rounds.
    Bdd lfp(const std::function<Bdd(Bdd)>& step, Bdd bottom, std::size_t cap);

    std::string to_dot(Bdd f) const;

    // Node internals, exposed for encoders that walk the graph.
    std::uint32_t node_var(std::uint32_t id) const { return nodes_[id].var; }
    std::uint32_t node_low(std::uint32_t id) const { return nodes_[id].lo; }
    std::uint32_t node_high(std::uint32_t id) const { return nodes_[id].hi; }
    Bdd handle(std::uint32_t id) { return Bdd(this, id); }

private:
    struct Node {
        std::uint32_t var, lo, hi;
    };
    struct CacheEntry {
        std::uint64_t key0 = UINT64_MAX;
        std::uint64_t key1 = 0;
        std::uint32_t result = 0;
    };
    enum OpCode : std::uint32_t { OpAnd = 1, OpOr, OpXor, OpNot, OpIte, OpExists, OpAndExists, OpRename, OpRestrict };

    std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);
    void grow_table();
    bool cache_find(OpCode op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t& out) const;
    void cache_store(OpCode op, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t r);
    void check(const Bdd& f) const;
    std::uint32_t level_of(std::uint32_t id) const { return nodes_[id].var; }

    std::uint32_t and_rec(std::uint32_t f, std::uint32_t g);
    std::uint32_t or_rec(std::uint32_t f, std::uint32_t g);
    std::uint32_t xor_rec(std::uint32_t f, std::uint32_t g);
    std::uint32_t not_rec(std::uint32_t f);
    std::uint32_t ite_rec(std::uint32_t f, std::uint32_t g, std::uint32_t h);
    std::uint32_t exists_rec(std::uint32_t f, std::uint32_t cube);
    std::uint32_t and_exists_rec(std::uint32_t f, std::uint32_t g, std::uint32_t cube);
    std::uint32_t rename_rec(std::uint32_t f, std::span<const std::uint32_t> map, std::uint32_t tag);
    std::uint32_t restrict_rec(std::uint32_t f, std::uint32_t level, bool value);

    std::uint32_t num_vars_;
    std::size_t node_cap_;
    std::vector<Node> nodes_;
    std::vector<std::uint32_t> table_;  // open addressing, 0 marks empty
    std::vector<CacheEntry> cache_;
    std::uint32_t rename_tag_ = 0;
};

}  // namespace coordsynth::bdd
