// Symbolic construction: every relation is a BDD over the Layout variables and
// is computed as a least fixpoint where recursion is involved.

#include <algorithm>
#include <numeric>

#include "coordsynth/spec_automaton.hpp"
#include "spec_internal.hpp"

namespace coordsynth::spec {

namespace {

using bdd::Bdd;

constexpr std::size_t kFixpointCap = std::size_t{1} << 22;

class SymbolicBuilder {
public:
    explicit SymbolicBuilder(const Components& c)
        : c_(c), lay_(Layout::make(c)), mgr_(std::make_shared<bdd::Manager>(lay_.num_vars())), m_(*mgr_) {
        action_index_.assign(c.num_actions, UINT32_MAX);
        std::uint32_t k = 0;
        for (auto a : c.sigma) action_index_[a] = k++;
        for (auto b : c.gamma) action_index_[b] = k++;
        build_base();
    }

    Relations relations() {
        Relations r;
        r.mgr = mgr_;
        r.layout = lay_;
        r.enabled = enabled_ = compute_enabled();
        r.efail = efail_ = compute_efail();
        r.eprivate = eprivate_ = closure(m_.one());
        r.gen_eprivate = gen_eprivate_ = closure(allowed_);
        r.nosynch = nosynch_ = compute_nosynch();
        r.esink = esink_ = valid_e_[0] & public_ & ((!select_) | (!enabled_));
        r.normal_trans = normal_trans_ = compute_normal_trans();
        return r;
    }

    SpecAutomaton automaton(std::shared_ptr<bdd::Manager> given) {
        relations();
        auto guards = detail::guard_manager(c_, std::move(given));
        std::vector<std::uint32_t> to_guard(lay_.num_vars(), 0);
        for (std::uint32_t i = 0; i < lay_.sigma_size; ++i) to_guard[lay_.offered(i)] = i;
        const auto x0 = lay_.state_levels(0), x1 = lay_.state_levels(1), alv = lay_.action_levels();
        std::vector<std::uint32_t> x0a = x0;
        x0a.insert(x0a.end(), alv.begin(), alv.end());
        const Bdd cube_x0 = m_.cube(x0), cube_x0a = m_.cube(x0a);
        std::vector<std::uint32_t> target_levels = x1;
        target_levels.push_back(lay_.g());
        const Bdd fail_rel = efail_ | nosynch_;

        const auto init = detail::initial_products(c_);
        std::vector<bool> seen(c_.product_size(), false);
        std::vector<std::uint32_t> queue;
        for (auto p : init)
            if (!seen[p]) seen[p] = true, queue.push_back(p);
        std::vector<detail::RawEdge> edges;
        const std::size_t rs = c_.safety.num_states, es = c_.env.num_states();
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const std::uint32_t s = queue[head];
            const auto q = static_cast<std::uint32_t>(s / (rs * es));
            const auto r = static_cast<std::uint32_t>((s / es) % rs);
            const auto e = static_cast<std::uint32_t>(s % es);
            const Bdd here = cube(x0, lay_.encode_state(q, r, e));
            auto to_g = [&](Bdd f) { return transfer(m_, f, *guards, to_guard); };
            const Bdd fail = m_.and_exists(fail_rel, here, cube_x0);
            const Bdd efail = m_.and_exists(efail_, here, cube_x0);
            const Bdd fail_g = to_g(fail), efail_g = to_g(efail);
            for (std::uint32_t a = 0; a < c_.sigma.size(); ++a) {
                const Bdd at = here & cube(alv, lay_.encode_action(a));
                const Bdd sink = m_.and_exists(esink_, at, cube_x0a);
                edges.push_back({detail::shifted(s), a, kFail, true, fail_g});
                edges.push_back({detail::shifted(s), a, kFail, false, efail_g});
                edges.push_back({detail::shifted(s), a, kSink, false, to_g((!fail) & sink)});
                const Bdd go = to_g((!fail) & (!sink));
                if (go.is_false()) continue;
                const Bdd targets = m_.and_exists(normal_trans_, at, cube_x0a);
                m_.for_each_assignment(targets, target_levels, [&](const std::vector<bool>& bits) {
                    const std::uint32_t t = decode(bits);
                    edges.push_back({detail::shifted(s), a, detail::shifted(t), bits.back(), go});
                    if (!seen[t]) seen[t] = true, queue.push_back(t);
                });
            }
        }
        return detail::assemble(c_, guards, init, queue, std::move(edges));
    }

private:
    Bdd cube(const std::vector<std::uint32_t>& levels, const std::vector<bool>& bits) {
        Bdd f = m_.one();
        for (std::size_t i = levels.size(); i-- > 0;) f &= m_.literal(levels[i], bits[i]);
        return f;
    }

    Bdd encode_value(const std::vector<std::uint32_t>& levels, std::uint32_t value) {
        Bdd f = m_.one();
        for (std::size_t i = 0; i < levels.size(); ++i)
            f &= m_.literal(levels[i], ((value >> (levels.size() - 1 - i)) & 1U) != 0);
        return f;
    }

    Bdd below(const std::vector<std::uint32_t>& levels, std::uint32_t bound) {
        Bdd f = m_.zero();
        for (std::uint32_t v = 0; v < bound; ++v) f |= encode_value(levels, v);
        return f;
    }

    std::uint32_t decode(const std::vector<bool>& bits) const {
        std::uint32_t q = 0, r = 0, e = 0, i = 0;
        for (std::uint32_t k = 0; k < lay_.q_bits; ++k) q = 2 * q + bits[i++];
        for (std::uint32_t k = 0; k < lay_.r_bits; ++k) r = 2 * r + bits[i++];
        for (std::uint32_t k = 0; k < lay_.e_bits; ++k) e = 2 * e + bits[i++];
        if (q >= lay_.num_q || r >= lay_.num_r || e >= lay_.num_e) throw Error("symbolic state out of range");
        return c_.product_index(q, r, e);
    }

    // Renaming of whole state copies; extra pairs rename single variables.
    std::vector<std::uint32_t> shift(std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> copies,
                                     std::initializer_list<std::pair<std::uint32_t, std::uint32_t>> vars = {}) const {
        std::vector<std::uint32_t> map(lay_.num_vars());
        std::iota(map.begin(), map.end(), 0U);
        for (auto [from, to] : copies)
            for (std::uint32_t i = 0; i < lay_.state_bits(); ++i) map[lay_.x(i, from)] = lay_.x(i, to);
        for (auto [from, to] : vars) map[from] = to;
        return map;
    }

    Bdd rename(Bdd f, const std::vector<std::uint32_t>& map) { return m_.rename(f, map); }

    Bdd equal_copies(std::uint32_t a, std::uint32_t b) {
        Bdd f = m_.one();
        for (std::uint32_t i = lay_.state_bits(); i-- > 0;) f &= m_.iff(m_.var(lay_.x(i, a)), m_.var(lay_.x(i, b)));
        return f;
    }

    void build_base() {
        const auto alv = lay_.action_levels();
        for (std::uint32_t copy = 0; copy < 3; ++copy) {
            valid_q_[copy] = below(lay_.q_levels(copy), lay_.num_q);
            valid_r_[copy] = below(lay_.r_levels(copy), lay_.num_r);
            valid_e_[copy] = below(lay_.e_levels(copy), lay_.num_e);
            valid_[copy] = valid_q_[copy] & valid_r_[copy] & valid_e_[copy];
            green_[copy] = m_.zero();
            for (std::uint32_t q = 0; q < lay_.num_q; ++q)
                if (c_.liveness.green[q]) green_[copy] |= encode_value(lay_.q_levels(copy), q);
        }
        public_ = m_.zero();
        private_ = m_.zero();
        select_ = m_.zero();
        for (std::uint32_t i = 0; i < lay_.num_all_actions; ++i) {
            const Bdd a = encode_value(alv, i);
            if (i < lay_.sigma_size) {
                public_ |= a;
                select_ |= a & m_.var(lay_.offered(i));
            } else {
                private_ |= a;
            }
        }

        auto relation = [&](const automata::Graph& g, const std::vector<std::uint32_t>& from,
                            const std::vector<std::uint32_t>& to) {
            Bdd f = m_.zero();
            for (const auto& e : g.edges) {
                if (e.letter >= action_index_.size() || action_index_[e.letter] == UINT32_MAX) continue;
                f |= encode_value(from, e.src) & encode_value(alv, action_index_[e.letter]) & encode_value(to, e.dst);
            }
            return f;
        };
        trans_q_ = relation(c_.liveness, lay_.q_levels(0), lay_.q_levels(1));
        trans_r_ = relation(c_.safety, lay_.r_levels(0), lay_.r_levels(1));
        trans_e_ = m_.zero();
        for (const auto& t : c_.env.transitions)
            trans_e_ |= encode_value(lay_.e_levels(0), t.from) & encode_value(alv, action_index_[t.action]) &
                        encode_value(lay_.e_levels(1), t.to);

        joint_ = trans_q_ & trans_r_ & trans_e_;
        const Bdd cube_act = m_.cube(alv);
        joint_private_ = m_.and_exists(joint_, private_, cube_act);
        joint_private_shift_ = rename(joint_private_, shift({{1, 2}, {0, 1}}));

        const Bdd cube_e1 = m_.cube(lay_.e_levels(1));
        offers_ = m_.and_exists(trans_e_, public_, cube_e1);  // (e, action)
        allowed_ = valid_e_[0] & !m_.and_exists(offers_, select_, cube_act);
        allowed2_ = rename(allowed_, shift({{0, 2}}));
        no_private_e_ = valid_e_[0] & !m_.exists(trans_e_ & private_, m_.cube(concat(alv, lay_.e_levels(1))));
        env_private_ = m_.and_exists(trans_e_, private_, cube_act);  // (e, e')
    }

    static std::vector<std::uint32_t> concat(std::vector<std::uint32_t> a, const std::vector<std::uint32_t>& b) {
        a.insert(a.end(), b.begin(), b.end());
        std::sort(a.begin(), a.end());
        return a;
    }

    Bdd compute_enabled() {
        const Bdd cube_e1 = m_.cube(lay_.e_levels(1));
        const auto to_e1 = shift({{0, 1}});
        return m_.lfp([&](Bdd x) { return offers_ | m_.and_exists(env_private_, rename(x, to_e1), cube_e1); },
                      offers_, kFixpointCap);
    }

    Bdd compute_efail() {
        Bdd finals = m_.zero();
        for (std::uint32_t r = 0; r < lay_.num_r; ++r)
            if (c_.safety.green[r]) finals |= encode_value(lay_.r_levels(0), r);
        const Bdd base = finals & no_private_e_ & allowed_;
        const Bdd step_rel = m_.and_exists(trans_r_ & trans_e_, private_, m_.cube(lay_.action_levels()));
        const Bdd cube_re1 = m_.cube(concat(lay_.r_levels(1), lay_.e_levels(1)));
        const auto to_1 = shift({{0, 1}});
        return m_.lfp([&](Bdd y) { return base | m_.and_exists(step_rel, rename(y, to_1), cube_re1); }, base,
                      kFixpointCap);
    }

    // Private closure with the green bit; `region` restricts every visited
    // environment state (true for the unrestricted closure).
    Bdd closure(Bdd region) {
        const Bdd region2 = region.is_true() ? region : allowed2_;
        const Bdd base = equal_copies(0, 1) & valid_[0] & m_.iff(m_.var(lay_.g()), green_[0]) & region;
        const auto g_to_g0 = shift({}, {{lay_.g(), lay_.g0()}});
        const auto x2_to_x1 = shift({{2, 1}});
        const Bdd cube_x1 = m_.cube(lay_.state_levels(1));
        const std::uint32_t g0_level = lay_.g0();
        const Bdd cube_g0 = m_.cube(std::span<const std::uint32_t>(&g0_level, 1));
        const Bdd combine = m_.iff(m_.var(lay_.g()), m_.var(lay_.g0()) | green_[2]) & region2;
        return m_.lfp(
            [&](Bdd z) {
                const Bdd t = m_.and_exists(rename(z, g_to_g0), joint_private_shift_, cube_x1);
                return base | rename(m_.and_exists(t, combine, cube_g0), x2_to_x1);
            },
            base, kFixpointCap);
    }

    Bdd compute_nosynch() {
        const std::uint32_t g_level = lay_.g();
        const Bdd loop_green = m_.restrict(gen_eprivate_, g_level, true);  // (x, L, x')
        const Bdd shifted = rename(loop_green, shift({{1, 2}, {0, 1}}));  // (x', L, x'')
        const Bdd back = m_.and_exists(shifted, equal_copies(0, 2), m_.cube(lay_.state_levels(2)));  // (x', L, x)
        const Bdd loops = m_.and_exists(joint_private_, back, m_.cube(lay_.state_levels(1)));  // (x, L)
        const Bdd reach = m_.exists(eprivate_, std::span<const std::uint32_t>(&g_level, 1));
        return m_.and_exists(reach, rename(loops, shift({{0, 1}})), m_.cube(lay_.state_levels(1)));
    }

    Bdd compute_normal_trans() {
        const Bdd joint_public = joint_ & public_;
        const Bdd joint_shift = rename(joint_public, shift({{1, 2}, {0, 1}}));
        const Bdd cube_x1 = m_.cube(lay_.state_levels(1));
        const Bdd first = m_.and_exists(rename(eprivate_, shift({}, {{lay_.g(), lay_.g0()}})), joint_shift, cube_x1);
        const Bdd mid = rename(first, shift({{2, 1}}));  // (x, g0, a, x')
        const Bdd after = rename(eprivate_, shift({{1, 2}, {0, 1}}, {{lay_.g(), lay_.g1()}}));
        const Bdd both = m_.and_exists(mid, after, cube_x1);  // (x, g0, a, g1, x'')
        const std::vector<std::uint32_t> gs{lay_.g0(), lay_.g1()};
        const Bdd combine = m_.iff(m_.var(lay_.g()), m_.var(lay_.g0()) | m_.var(lay_.g1()));
        return rename(m_.and_exists(both, combine, m_.cube(gs)), shift({{2, 1}}));
    }

    const Components& c_;
    Layout lay_;
    std::shared_ptr<bdd::Manager> mgr_;
    bdd::Manager& m_;
    std::vector<std::uint32_t> action_index_;

    Bdd valid_q_[3], valid_r_[3], valid_e_[3], valid_[3], green_[3];
    Bdd public_, private_, select_;
    Bdd trans_q_, trans_r_, trans_e_, joint_, joint_private_, joint_private_shift_;
    Bdd offers_, allowed_, allowed2_, no_private_e_, env_private_;
    Bdd enabled_, efail_, eprivate_, gen_eprivate_, nosynch_, esink_, normal_trans_;
};

}  // namespace

Relations symbolic_relations(const Components& c) { return SymbolicBuilder(c).relations(); }

namespace detail {

SpecAutomaton build_symbolic(const Components& c, std::shared_ptr<bdd::Manager> guards) {
    return SymbolicBuilder(c).automaton(std::move(guards));
}

}  // namespace detail

}  // namespace coordsynth::spec
