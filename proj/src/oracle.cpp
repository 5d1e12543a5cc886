#include <algorithm>
#include <tuple>

#include "coordsynth/automata.hpp"
#include "coordsynth/verify.hpp"

namespace coordsynth::verify {

namespace {

// Plain depth-first walk over configurations (environment, coordinator,
// liveness automaton). Shares nothing with the checker beyond the automata.
class Walker {
public:
    Walker(const Checker& checker, const csp::Process& coordinator, std::size_t max_steps)
        : env_(checker.environment()), coord_(coordinator), live_(checker.liveness_violations()),
          safety_(checker.safety_violations()), env_succ_(env_.successors()), coord_succ_(coordinator.successors()),
          live_succ_(live_.successors()), max_steps_(max_steps) {}

    OracleWitness run() {
        for (auto q0 : live_.initial) {
            path_ = {{env_.initial, coord_.initial, q0}};
            word_.clear();
            public_step_.clear();
            if (walk()) break;
        }
        return found_;
    }

private:
    using Config = std::tuple<StateId, StateId, automata::State>;

    struct Move {
        ActionId action;
        StateId env, coord;
        bool sync;
    };

    std::vector<Move> moves(StateId e, StateId m) const {
        std::vector<Move> out;
        for (auto [a, e2] : env_succ_[e]) {
            if (env_.is_private(a)) {
                out.push_back({a, e2, m, false});
                continue;
            }
            for (auto [b, m2] : coord_succ_[m])
                if (b == a) out.push_back({a, e2, m2, true});
        }
        return out;
    }

    bool quiet(StateId e, StateId m) const {
        for (const auto& mv : moves(e, m))
            if (mv.sync) return false;
        return true;
    }

    // Checks the loop closed by returning to path_[start].
    bool close_loop(std::size_t start) {
        bool green = false, synced = false, all_quiet = true;
        for (std::size_t i = start; i < path_.size(); ++i) {
            auto [e, m, q] = path_[i];
            green = green || live_.green[q];
            all_quiet = all_quiet && quiet(e, m);
        }
        for (std::size_t i = start; i < public_step_.size(); ++i) synced = synced || public_step_[i];
        if (!green) return false;
        Condition c = Condition::None;
        if (synced) c = Condition::C;
        else if (all_quiet) c = Condition::B;
        if (c == Condition::None) return false;
        found_.condition = c;
        found_.lasso.prefix.assign(word_.begin(), word_.begin() + static_cast<std::ptrdiff_t>(start));
        found_.lasso.loop.assign(word_.begin() + static_cast<std::ptrdiff_t>(start), word_.end());
        return true;
    }

    bool walk() {
        auto [e, m, q] = path_.back();
        const auto next = moves(e, m);
        if (next.empty()) {
            if (automata::nfa_runs_word(safety_, word_)) {
                found_.condition = Condition::A;
                found_.trace = word_;
                return true;
            }
            return false;
        }
        if (word_.size() >= max_steps_) return false;
        for (const auto& mv : next)
            for (auto [l, q2] : live_succ_[q]) {
                if (l != mv.action) continue;
                word_.push_back(mv.action);
                public_step_.push_back(mv.sync);
                const Config c{mv.env, mv.coord, q2};
                auto hit = std::find(path_.begin(), path_.end(), c);
                if (hit != path_.end()) {
                    if (close_loop(static_cast<std::size_t>(hit - path_.begin()))) return true;
                } else {
                    path_.push_back(c);
                    if (walk()) return true;
                    path_.pop_back();
                }
                word_.pop_back();
                public_step_.pop_back();
            }
        return false;
    }

    const csp::Process& env_;
    const csp::Process& coord_;
    const automata::Nba& live_;
    const automata::FiniteNfa& safety_;
    csp::Successors env_succ_, coord_succ_;
    std::vector<std::vector<std::pair<automata::Letter, automata::State>>> live_succ_;
    std::size_t max_steps_;

    std::vector<Config> path_;
    Word word_;
    std::vector<bool> public_step_;  // public_step_[i]: step i synchronized
    OracleWitness found_;
};

}  // namespace

OracleWitness check_violation_conditions(const Checker& checker, const csp::Process& coordinator,
                                         std::size_t max_steps) {
    return Walker(checker, coordinator, max_steps).run();
}

}  // namespace coordsynth::verify
