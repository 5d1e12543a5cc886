#include <algorithm>
#include <deque>
#include <set>

#include "coordsynth/verify.hpp"

namespace coordsynth::verify {

namespace {

enum class Offer : std::uint8_t { Undecided, No, Yes };

struct Partial {
    std::size_t states = 1;
    std::vector<std::vector<Offer>> offer;  // [state][sigma index]
    std::vector<std::vector<std::int64_t>> next;
};

class Search {
public:
    Search(const Checker& checker, const EnumerationLimits& limits)
        : checker_(checker), limits_(limits), env_(checker.environment()), succ_(env_.successors()),
          sigma_(env_.public_actions) {}

    EnumerationResult run() {
        result_.max_states = limits_.max_states;
        if (limits_.max_states == 0) return result_;
        Partial p;
        grow(p);
        descend(p);
        return result_;
    }

private:
    std::int64_t index_of(ActionId a) const {
        auto it = std::lower_bound(sigma_.begin(), sigma_.end(), a);
        return it != sigma_.end() && *it == a ? it - sigma_.begin() : -1;
    }

    void grow(Partial& p) const {
        p.offer.resize(p.states, std::vector<Offer>(sigma_.size(), Offer::Undecided));
        p.next.resize(p.states, std::vector<std::int64_t>(sigma_.size(), -1));
    }

    csp::Process materialize(const Partial& p) const {
        csp::Process m;
        for (std::size_t s = 0; s < p.states; ++s) m.state_names.push_back(s == 0 ? "C" : "C" + std::to_string(s));
        m.public_actions = sigma_;
        for (std::size_t s = 0; s < p.states; ++s)
            for (std::size_t i = 0; i < sigma_.size(); ++i)
                if (p.offer[s][i] == Offer::Yes && p.next[s][i] >= 0)
                    m.transitions.push_back({static_cast<StateId>(s), sigma_[i], static_cast<StateId>(p.next[s][i])});
        m.normalize();
        return m;
    }

    struct Pending {
        bool found = false;
        bool dead = false;  // a fully decided reachable pair deadlocks
        std::size_t state = 0, sigma = 0;
    };

    // Explores the composition as far as decisions allow; stops at the first
    // pair that needs an undecided entry.
    Pending frontier(const Partial& p) const {
        Pending out;
        std::set<std::pair<StateId, StateId>> seen{{env_.initial, 0}};
        std::deque<std::pair<StateId, StateId>> queue{{env_.initial, 0}};
        while (!queue.empty()) {
            auto [e, m] = queue.front();
            queue.pop_front();
            bool moves = false;
            for (auto [a, e2] : succ_[e]) {
                StateId m2 = m;
                if (env_.is_public(a)) {
                    auto i = static_cast<std::size_t>(index_of(a));
                    if (p.offer[m][i] == Offer::Undecided || (p.offer[m][i] == Offer::Yes && p.next[m][i] < 0)) {
                        out.found = true;
                        out.state = m;
                        out.sigma = i;
                        return out;
                    }
                    if (p.offer[m][i] == Offer::No) continue;
                    m2 = static_cast<StateId>(p.next[m][i]);
                }
                moves = true;
                if (seen.insert({e2, m2}).second) queue.emplace_back(e2, m2);
            }
            if (!moves && checker_.deadlock_is_violation()) {
                out.dead = true;
                return out;
            }
        }
        return out;
    }

    bool descend(Partial& p) {
        if (++result_.search_nodes > limits_.node_budget) throw Error("enumeration node budget exhausted");
        const Pending next = frontier(p);
        if (next.dead) return false;
        if (!checker_.persistent_violation(materialize(p)).passed()) return false;
        if (!next.found) {
            ++result_.candidates;
            csp::Process m = materialize(p);
            if (checker_.check(m).passed()) {
                result_.solution = std::move(m);
                return true;
            }
            return false;
        }
        const std::size_t s = next.state, i = next.sigma;
        if (p.offer[s][i] == Offer::Undecided) {
            p.offer[s][i] = Offer::No;
            if (descend(p)) return true;
            p.offer[s][i] = Offer::Yes;
            if (descend(p)) return true;
            p.offer[s][i] = Offer::Undecided;
            return false;
        }
        // Offered with no target yet: an existing state, or the next fresh one.
        const std::size_t states = p.states;
        for (std::size_t t = 0; t <= states && t < limits_.max_states; ++t) {
            p.next[s][i] = static_cast<std::int64_t>(t);
            if (t == states) {
                ++p.states;
                grow(p);
            }
            const bool ok = descend(p);
            if (t == states) {
                --p.states;
                p.offer.pop_back();
                p.next.pop_back();
            }
            if (ok) return true;
        }
        p.next[s][i] = -1;
        return false;
    }

    const Checker& checker_;
    EnumerationLimits limits_;
    const csp::Process& env_;
    csp::Successors succ_;
    std::vector<ActionId> sigma_;
    EnumerationResult result_;
};

}  // namespace

EnumerationResult enumerate_coordinators(const Checker& checker, const EnumerationLimits& limits) {
    return Search(checker, limits).run();
}

}  // namespace coordsynth::verify
