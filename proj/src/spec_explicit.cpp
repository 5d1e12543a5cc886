// Explicit-state construction: product states are enumerated one by one and
// offered sets are handled per equivalence class.

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "coordsynth/graph.hpp"
#include "coordsynth/spec_automaton.hpp"
#include "spec_internal.hpp"

namespace coordsynth::spec {

namespace {

using Reach = std::vector<std::pair<std::uint32_t, bool>>;  // (product state, saw green)

class ExplicitProduct {
public:
    ExplicitProduct(const Components& c, bdd::Manager& guards)
        : c_(c), rs_(c.safety.num_states), es_(c.env.num_states()) {
        size_ = c.product_size();
        const std::size_t letters = c.num_actions;
        live_succ_.assign(c.liveness.num_states, std::vector<std::vector<std::uint32_t>>(letters));
        for (const auto& e : c.liveness.edges) live_succ_[e.src][e.letter].push_back(e.dst);
        safe_succ_.assign(c.safety.num_states, std::vector<std::vector<std::uint32_t>>(letters));
        for (const auto& e : c.safety.edges) safe_succ_[e.src][e.letter].push_back(e.dst);
        env_succ_ = c.env.successors();
        pub_ = detail::public_masks(c);

        // Offers reachable through private environment moves.
        Adjacency env_private(es_);
        for (const auto& t : c.env.transitions)
            if (c.env.is_private(t.action)) env_private[t.from].push_back(t.to);
        enabled_.assign(es_, 0);
        for (std::uint32_t e = 0; e < es_; ++e) {
            auto reach = forward_reachable(env_private, {e});
            for (std::uint32_t f = 0; f < es_; ++f)
                if (reach[f]) enabled_[e] |= pub_[f];
        }
        has_private_.assign(es_, false);
        for (std::uint32_t e = 0; e < es_; ++e) has_private_[e] = !env_private[e].empty();

        private_succ_.assign(size_, {});
        for (std::uint32_t s = 0; s < size_; ++s)
            for (auto b : c.gamma) joint(s, b, [&](std::uint32_t t) { private_succ_[s].push_back(t); });
        for (auto& v : private_succ_) {
            std::sort(v.begin(), v.end());
            v.erase(std::unique(v.begin(), v.end()), v.end());
        }

        classes_ = offered_classes(c, guards);
        for (const auto& cls : classes_) {
            efail_.push_back(efail_for(cls.allowed));
            loops_.push_back(loops_for(cls.allowed));
        }
        eprivate_memo_.resize(size_);
        eprivate_done_.assign(size_, false);
    }

    std::size_t size() const { return size_; }
    std::uint32_t q_of(std::uint32_t s) const { return static_cast<std::uint32_t>(s / (rs_ * es_)); }
    std::uint32_t r_of(std::uint32_t s) const { return static_cast<std::uint32_t>((s / es_) % rs_); }
    std::uint32_t e_of(std::uint32_t s) const { return static_cast<std::uint32_t>(s % es_); }
    bool green(std::uint32_t s) const { return c_.liveness.green[q_of(s)]; }
    const std::vector<OfferedClass>& classes() const { return classes_; }
    bool enabled(std::uint32_t sigma_index, std::uint32_t e) const { return ((enabled_[e] >> sigma_index) & 1U) != 0; }
    bool efail(std::size_t cls, std::uint32_t r, std::uint32_t e) const { return efail_[cls][r * es_ + e]; }

    template <class F>
    void joint(std::uint32_t s, ActionId action, F&& visit) const {
        const std::uint32_t q = q_of(s), r = r_of(s), e = e_of(s);
        for (const auto& [act, e2] : env_succ_[e]) {
            if (act != action) continue;
            for (auto q2 : live_succ_[q][action])
                for (auto r2 : safe_succ_[r][action]) visit(c_.product_index(q2, r2, e2));
        }
    }

    // Private-closure reachability with the green bit, optionally confined to
    // environment states where `allowed` holds.
    Reach closure(std::uint32_t s, const std::vector<bool>* allowed) const {
        Reach out;
        if (allowed && !(*allowed)[e_of(s)]) return out;
        std::vector<bool> seen(2 * size_, false);
        std::deque<std::pair<std::uint32_t, bool>> queue{{s, green(s)}};
        seen[2 * s + (green(s) ? 1 : 0)] = true;
        while (!queue.empty()) {
            auto [t, g] = queue.front();
            queue.pop_front();
            out.emplace_back(t, g);
            for (auto u : private_succ_[t]) {
                if (allowed && !(*allowed)[e_of(u)]) continue;
                const bool g2 = g || green(u);
                if (seen[2 * u + (g2 ? 1 : 0)]) continue;
                seen[2 * u + (g2 ? 1 : 0)] = true;
                queue.emplace_back(u, g2);
            }
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    const Reach& eprivate(std::uint32_t s) {
        if (!eprivate_done_[s]) {
            eprivate_memo_[s] = closure(s, nullptr);
            eprivate_done_[s] = true;
        }
        return eprivate_memo_[s];
    }

    bool nosynch(std::size_t cls, std::uint32_t s) {
        for (const auto& [t, g] : eprivate(s))
            if (loops_[cls][t]) return true;
        return false;
    }

    // Targets of one public step padded with private moves on both sides.
    Reach normal_targets(std::uint32_t s, ActionId action) {
        std::vector<bool> seen(2 * size_, false);
        Reach out;
        const Reach before = eprivate(s);
        for (const auto& [s0, g0] : before)
            joint(s0, action, [&](std::uint32_t s1) {
                for (const auto& [s2, g1] : eprivate(s1)) {
                    const bool g = g0 || g1;
                    if (!seen[2 * s2 + (g ? 1 : 0)]) {
                        seen[2 * s2 + (g ? 1 : 0)] = true;
                        out.emplace_back(s2, g);
                    }
                }
            });
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    std::vector<bool> efail_for(const std::vector<bool>& allowed) const {
        // Backward closure over private joint steps of (safety, environment).
        const std::size_t n = rs_ * es_;
        Adjacency rev(n);
        for (std::uint32_t r = 0; r < rs_; ++r)
            for (std::uint32_t e = 0; e < es_; ++e)
                for (const auto& [b, e2] : env_succ_[e]) {
                    if (!c_.env.is_private(b)) continue;
                    for (auto r2 : safe_succ_[r][b]) rev[r2 * es_ + e2].push_back(r * es_ + e);
                }
        std::vector<bool> out(n, false);
        std::vector<std::uint32_t> stack;
        for (std::uint32_t r = 0; r < rs_; ++r)
            for (std::uint32_t e = 0; e < es_; ++e)
                if (c_.safety.green[r] && !has_private_[e] && allowed[e]) {
                    out[r * es_ + e] = true;
                    stack.push_back(r * es_ + e);
                }
        while (!stack.empty()) {
            auto x = stack.back();
            stack.pop_back();
            for (auto y : rev[x])
                if (!out[y]) out[y] = true, stack.push_back(y);
        }
        return out;
    }

    // States lying on a private cycle inside the allowed region that passes a green state.
    std::vector<bool> loops_for(const std::vector<bool>& allowed) const {
        Adjacency adj(size_);
        for (std::uint32_t s = 0; s < size_; ++s) {
            if (!allowed[e_of(s)]) continue;
            for (auto t : private_succ_[s])
                if (allowed[e_of(t)]) adj[s].push_back(t);
        }
        std::uint32_t ncomp = 0;
        auto comp = strongly_connected(adj, &ncomp);
        auto cyclic = cyclic_components(adj, comp, ncomp);
        std::vector<bool> has_green(ncomp, false);
        for (std::uint32_t s = 0; s < size_; ++s)
            if (allowed[e_of(s)] && green(s)) has_green[comp[s]] = true;
        std::vector<bool> out(size_, false);
        for (std::uint32_t s = 0; s < size_; ++s)
            out[s] = allowed[e_of(s)] && cyclic[comp[s]] && has_green[comp[s]];
        return out;
    }

    const Components& c_;
    std::size_t rs_, es_, size_ = 0;
    std::vector<std::vector<std::vector<std::uint32_t>>> live_succ_, safe_succ_;
    csp::Successors env_succ_;
    std::vector<std::uint64_t> pub_, enabled_;
    std::vector<bool> has_private_;
    std::vector<std::vector<std::uint32_t>> private_succ_;
    std::vector<OfferedClass> classes_;
    std::vector<std::vector<bool>> efail_, loops_;
    std::vector<Reach> eprivate_memo_;
    std::vector<bool> eprivate_done_;
};

}  // namespace

namespace detail {

SpecAutomaton build_explicit(const Components& c, std::shared_ptr<bdd::Manager> given) {
    auto guards = guard_manager(c, std::move(given));
    bdd::Manager& gm = *guards;
    ExplicitProduct prod(c, gm);
    const auto init = initial_products(c);
    std::vector<bool> seen(prod.size(), false);
    std::vector<std::uint32_t> queue;
    for (auto p : init)
        if (!seen[p]) seen[p] = true, queue.push_back(p);
    std::vector<RawEdge> edges;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const std::uint32_t s = queue[head];
        const std::uint32_t r = prod.r_of(s), e = prod.e_of(s);
        bdd::Bdd efail = gm.zero(), fail = gm.zero();
        for (std::size_t k = 0; k < prod.classes().size(); ++k) {
            const bool ef = prod.efail(k, r, e);
            if (ef) efail |= prod.classes()[k].guard;
            if (ef || prod.nosynch(k, s)) fail |= prod.classes()[k].guard;
        }
        const bdd::Bdd rest = !fail;
        for (std::uint32_t a = 0; a < c.sigma.size(); ++a) {
            edges.push_back({shifted(s), a, kFail, true, fail});
            edges.push_back({shifted(s), a, kFail, false, efail});
            if (!prod.enabled(a, e)) {
                edges.push_back({shifted(s), a, kSink, false, rest});
                continue;
            }
            edges.push_back({shifted(s), a, kSink, false, rest & gm.nvar(a)});
            const bdd::Bdd go = rest & gm.var(a);
            if (go.is_false()) continue;
            for (const auto& [t, g] : prod.normal_targets(s, c.sigma[a])) {
                edges.push_back({shifted(s), a, shifted(t), g, go});
                if (!seen[t]) seen[t] = true, queue.push_back(t);
            }
        }
    }
    return assemble(c, guards, init, queue, std::move(edges));
}

}  // namespace detail

Relations explicit_relations(const Components& c, const Relations& into) {
    Relations out;
    out.mgr = into.mgr;
    out.layout = into.layout;
    bdd::Manager& m = *out.mgr;
    const Layout& lay = out.layout;
    bdd::Manager guards(static_cast<std::uint32_t>(c.sigma.size()));
    ExplicitProduct prod(c, guards);

    const auto offered = lay.offered_levels();
    std::vector<std::uint32_t> to_offered(c.sigma.size());
    for (std::uint32_t i = 0; i < c.sigma.size(); ++i) to_offered[i] = offered[i];
    std::vector<bdd::Bdd> class_guard;
    for (const auto& cls : prod.classes()) class_guard.push_back(transfer(guards, cls.guard, m, to_offered));

    auto cube_of = [&](const std::vector<std::uint32_t>& levels, const std::vector<bool>& bits) {
        bdd::Bdd f = m.one();
        for (std::size_t i = 0; i < levels.size(); ++i) f &= m.literal(levels[i], bits[i]);
        return f;
    };
    auto slice = [](const std::vector<bool>& v, std::size_t from, std::size_t len) {
        return std::vector<bool>(v.begin() + static_cast<std::ptrdiff_t>(from),
                                 v.begin() + static_cast<std::ptrdiff_t>(from + len));
    };
    auto state_bits = [&](std::uint32_t s) { return lay.encode_state(prod.q_of(s), prod.r_of(s), prod.e_of(s)); };
    auto e_bits = [&](std::uint32_t e) { return slice(lay.encode_state(0, 0, e), lay.q_bits + lay.r_bits, lay.e_bits); };
    auto r_bits = [&](std::uint32_t r) { return slice(lay.encode_state(0, r, 0), lay.q_bits, lay.r_bits); };
    const auto x0 = lay.state_levels(0), x1 = lay.state_levels(1);
    const auto elv = lay.e_levels(0), rlv = lay.r_levels(0), alv = lay.action_levels();

    // Rows over (x', g) for a list of closure results.
    std::vector<std::uint32_t> target_levels = x1;
    target_levels.push_back(lay.g());
    auto reach_bdd = [&](const Reach& reach) {
        std::vector<std::vector<bool>> rows;
        for (const auto& [t, g] : reach) {
            auto row = state_bits(t);
            row.push_back(g);
            rows.push_back(std::move(row));
        }
        return detail::from_rows(m, target_levels, std::move(rows));
    };

    const std::uint32_t es = lay.num_e, rs = lay.num_r;
    out.enabled = m.zero();
    out.esink = m.zero();
    for (std::uint32_t e = 0; e < es; ++e)
        for (std::uint32_t a = 0; a < c.sigma.size(); ++a) {
            const bdd::Bdd at = cube_of(elv, e_bits(e)) & cube_of(alv, lay.encode_action(a));
            if (prod.enabled(a, e)) {
                out.enabled |= at;
                out.esink |= at & m.nvar(offered[a]);
            } else {
                out.esink |= at;
            }
        }

    out.efail = m.zero();
    for (std::uint32_t r = 0; r < rs; ++r)
        for (std::uint32_t e = 0; e < es; ++e) {
            bdd::Bdd when = m.zero();
            for (std::size_t k = 0; k < class_guard.size(); ++k)
                if (prod.efail(k, r, e)) when |= class_guard[k];
            if (!when.is_false()) out.efail |= cube_of(rlv, r_bits(r)) & cube_of(elv, e_bits(e)) & when;
        }

    out.eprivate = m.zero();
    out.gen_eprivate = m.zero();
    out.nosynch = m.zero();
    out.normal_trans = m.zero();
    std::vector<std::uint32_t> nt_levels = x1;
    nt_levels.push_back(lay.g());
    for (auto l : alv) nt_levels.push_back(l);
    for (std::uint32_t s = 0; s < prod.size(); ++s) {
        const bdd::Bdd here = cube_of(x0, state_bits(s));
        out.eprivate |= here & reach_bdd(prod.eprivate(s));
        bdd::Bdd ns = m.zero();
        for (std::size_t k = 0; k < class_guard.size(); ++k) {
            const auto& allowed = prod.classes()[k].allowed;
            Reach gen = prod.closure(s, &allowed);
            if (!gen.empty()) out.gen_eprivate |= here & reach_bdd(gen) & class_guard[k];
            if (prod.nosynch(k, s)) ns |= class_guard[k];
        }
        out.nosynch |= here & ns;
        std::vector<std::vector<bool>> rows;
        for (std::uint32_t a = 0; a < c.sigma.size(); ++a)
            for (const auto& [t, g] : prod.normal_targets(s, c.sigma[a])) {
                auto row = state_bits(t);
                row.push_back(g);
                auto ab = lay.encode_action(a);
                row.insert(row.end(), ab.begin(), ab.end());
                rows.push_back(std::move(row));
            }
        out.normal_trans |= here & detail::from_rows(m, nt_levels, std::move(rows));
    }
    return out;
}

}  // namespace coordsynth::spec
