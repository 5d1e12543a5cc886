#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "coordsynth/types.hpp"

namespace coordsynth::sat {

// DIMACS literal: +v or -v for variable v >= 1.
using Lit = std::int32_t;

class Cnf {
public:
    std::uint32_t new_var() { return ++num_vars_; }
    std::uint32_t num_vars() const { return num_vars_; }
    // Drops clauses that contain a literal and its negation; removes duplicate literals.
    void add(std::span<const Lit> clause);
    void add(std::initializer_list<Lit> clause) { add(std::span<const Lit>(clause.begin(), clause.size())); }
    const std::vector<std::vector<Lit>>& clauses() const { return clauses_; }
    std::size_t num_clauses() const { return clauses_.size(); }

    // "p cnf V C" followed by one clause per line. Comment lines go first.
    std::string dimacs(std::span<const std::string> comments = {}) const;

private:
    std::uint32_t num_vars_ = 0;
    std::vector<std::vector<Lit>> clauses_;
};

Cnf parse_dimacs(std::string_view text);

enum class Status { Sat, Unsat, Unknown };

struct Options {
    // Off turns the solver into plain DPLL with chronological backtracking.
    bool learning = true;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    const std::atomic<bool>* cancel = nullptr;
    // Gives up with Unknown after this many conflicts in one call; 0 means no limit.
    std::uint64_t conflict_budget = 0;
};

struct Stats {
    std::uint64_t decisions = 0;
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;
    std::uint64_t restarts = 0;
};

struct Result {
    Status status = Status::Unknown;
    std::vector<bool> model;  // indexed by variable; entry 0 unused
    Stats stats;

    bool value(Lit l) const { return l > 0 ? model.at(l) : !model.at(-l); }
};

// Incremental solver: clauses can be added between calls; assumptions hold for
// one call only.
class Solver {
public:
    explicit Solver(Options opts = {});
    ~Solver();
    Solver(Solver&&) noexcept;
    Solver& operator=(Solver&&) noexcept;

    void add_clause(std::span<const Lit> clause);
    void add_cnf(const Cnf& cnf);
    Result solve(std::span<const Lit> assumptions = {});
    void set_options(const Options& opts);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

Result solve(const Cnf& cnf, const Options& opts = {});

// SAT-competition output: "s SATISFIABLE" / "s UNSATISFIABLE" / "s UNKNOWN" and
// "v" lines of literals terminated by 0. Missing variables default to false.
Result parse_competition_output(std::string_view text, std::uint32_t num_vars);
std::string competition_output(const Result& r, std::uint32_t num_vars);

// Runs `solver_path instance.cnf` in a child process. The instance file is
// written to `work_dir` (a fresh temporary directory when empty) and kept
// only when `keep` is set. A timeout kills the child and yields Unknown.
struct ExternalOptions {
    std::string solver_path;
    std::optional<std::chrono::seconds> timeout;
    std::string work_dir;
    std::string file_stem = "instance";
    bool keep = false;
};
Result solve_external(const Cnf& cnf, const ExternalOptions& opts);

}  // namespace coordsynth::sat
