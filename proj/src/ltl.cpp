#include "coordsynth/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <unordered_map>

namespace coordsynth::ltl {

struct Formula::Node {
    Op op = Op::True;
    ActionId action = 0;
    Formula lhs_child{std::shared_ptr<const Node>()};
    Formula rhs_child{std::shared_ptr<const Node>()};
    std::size_t size = 1;
};

namespace {

bool unary(Op op) { return op == Op::Not || op == Op::Next || op == Op::Eventually || op == Op::Always; }
bool binary(Op op) { return op == Op::And || op == Op::Or || op == Op::Until || op == Op::Release; }

}  // namespace

Formula::Formula() {
    static const std::shared_ptr<const Node> truth = std::make_shared<const Node>();
    node_ = truth;
}

Formula Formula::top() { return Formula(); }

Formula Formula::bottom() {
    static const std::shared_ptr<const Node> falsity = [] {
        auto n = std::make_shared<Node>();
        n->op = Op::False;
        return std::shared_ptr<const Node>(n);
    }();
    return Formula(falsity);
}

namespace {

template <class NodeT, class F>
std::shared_ptr<const NodeT> build(Op op, ActionId action, F lhs, F rhs, std::size_t size) {
    auto n = std::make_shared<NodeT>();
    n->op = op;
    n->action = action;
    n->lhs_child = std::move(lhs);
    n->rhs_child = std::move(rhs);
    n->size = size;
    return n;
}

}  // namespace

Formula Formula::atom(ActionId a) {
    return Formula(build<Node>(Op::Atom, a, Formula(std::shared_ptr<const Node>()), Formula(std::shared_ptr<const Node>()), 1));
}

Formula Formula::negation(Formula f) {
    std::size_t s = f.size() + 1;
    return Formula(build<Node>(Op::Not, 0, std::move(f), Formula(std::shared_ptr<const Node>()), s));
}

Formula Formula::conj(Formula l, Formula r) {
    std::size_t s = l.size() + r.size() + 1;
    return Formula(build<Node>(Op::And, 0, std::move(l), std::move(r), s));
}

Formula Formula::disj(Formula l, Formula r) {
    std::size_t s = l.size() + r.size() + 1;
    return Formula(build<Node>(Op::Or, 0, std::move(l), std::move(r), s));
}

Formula Formula::next(Formula f) {
    std::size_t s = f.size() + 1;
    return Formula(build<Node>(Op::Next, 0, std::move(f), Formula(std::shared_ptr<const Node>()), s));
}

Formula Formula::until(Formula l, Formula r) {
    std::size_t s = l.size() + r.size() + 1;
    return Formula(build<Node>(Op::Until, 0, std::move(l), std::move(r), s));
}

Formula Formula::release(Formula l, Formula r) {
    std::size_t s = l.size() + r.size() + 1;
    return Formula(build<Node>(Op::Release, 0, std::move(l), std::move(r), s));
}

Formula Formula::eventually(Formula f) {
    std::size_t s = f.size() + 1;
    return Formula(build<Node>(Op::Eventually, 0, std::move(f), Formula(std::shared_ptr<const Node>()), s));
}

Formula Formula::always(Formula f) {
    std::size_t s = f.size() + 1;
    return Formula(build<Node>(Op::Always, 0, std::move(f), Formula(std::shared_ptr<const Node>()), s));
}

Op Formula::op() const { return node_->op; }

ActionId Formula::action() const {
    if (node_->op != Op::Atom) throw Error("action() on a non-atom formula");
    return node_->action;
}

const Formula& Formula::lhs() const { return node_->lhs_child; }
const Formula& Formula::rhs() const { return node_->rhs_child; }
std::size_t Formula::size() const { return node_->size; }

bool Formula::in_nnf() const {
    switch (op()) {
        case Op::True:
        case Op::False:
        case Op::Atom: return true;
        case Op::Not: return lhs().op() == Op::Atom;
        default:
            if (unary(op())) return lhs().in_nnf();
            return lhs().in_nnf() && rhs().in_nnf();
    }
}

bool Formula::operator==(const Formula& o) const {
    if (node_ == o.node_) return true;
    if (op() != o.op() || size() != o.size()) return false;
    if (op() == Op::Atom) return action() == o.action();
    if (unary(op())) return lhs() == o.lhs();
    if (binary(op())) return lhs() == o.lhs() && rhs() == o.rhs();
    return true;
}

std::string Formula::to_string(const std::vector<std::string>& names) const {
    switch (op()) {
        case Op::True: return "true";
        case Op::False: return "false";
        case Op::Atom: return action() < names.size() ? names[action()] : "#" + std::to_string(action());
        case Op::Not: return "!" + lhs().to_string(names);
        case Op::Next: return "X " + lhs().to_string(names);
        case Op::Eventually: return "F " + lhs().to_string(names);
        case Op::Always: return "G " + lhs().to_string(names);
        case Op::And: return "(" + lhs().to_string(names) + " & " + rhs().to_string(names) + ")";
        case Op::Or: return "(" + lhs().to_string(names) + " | " + rhs().to_string(names) + ")";
        case Op::Until: return "(" + lhs().to_string(names) + " U " + rhs().to_string(names) + ")";
        case Op::Release: return "(" + lhs().to_string(names) + " R " + rhs().to_string(names) + ")";
    }
    return {};
}

std::string Formula::to_string(const csp::ActionTable& actions) const { return to_string(actions.names()); }

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { Ident, True, False, Not, And, Or, Implies, Next, Until, Release, Eventually, Always, LParen, RParen, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0;
    auto is_start = [](char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; };
    auto is_body = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; };
    while (i < s.size()) {
        char c = s[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (is_start(c)) {
            while (i < s.size() && is_body(s[i])) ++i;
            std::string word(s.substr(start, i - start));
            Tok kind = Tok::Ident;
            if (word == "true") kind = Tok::True;
            else if (word == "false") kind = Tok::False;
            else if (word == "X") kind = Tok::Next;
            else if (word == "U") kind = Tok::Until;
            else if (word == "R") kind = Tok::Release;
            else if (word == "F") kind = Tok::Eventually;
            else if (word == "G") kind = Tok::Always;
            out.push_back({kind, std::move(word), start});
            continue;
        }
        auto two = s.substr(i, 2);
        if (two == "->") {
            out.push_back({Tok::Implies, "->", start});
            i += 2;
        } else if (two == "&&") {
            out.push_back({Tok::And, "&&", start});
            i += 2;
        } else if (two == "||") {
            out.push_back({Tok::Or, "||", start});
            i += 2;
        } else {
            Tok kind;
            switch (c) {
                case '!': kind = Tok::Not; break;
                case '&': kind = Tok::And; break;
                case '|': kind = Tok::Or; break;
                case '(': kind = Tok::LParen; break;
                case ')': kind = Tok::RParen; break;
                default: throw Error("LTL syntax error at offset " + std::to_string(i) + ": unexpected '" + std::string(1, c) + "'");
            }
            out.push_back({kind, std::string(1, c), start});
            ++i;
        }
    }
    out.push_back({Tok::End, "", s.size()});
    return out;
}

class Parser {
public:
    Parser(std::string_view text, const csp::ActionTable& actions) : tokens_(tokenize(text)), actions_(actions) {}

    Formula parse() {
        Formula f = implication();
        expect(Tok::End, "end of formula");
        return f;
    }

private:
    const Token& peek() const { return tokens_[pos_]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    void expect(Tok k, const char* what) {
        if (!accept(k))
            throw Error("LTL syntax error at offset " + std::to_string(peek().pos) + ": expected " + what +
                        (peek().text.empty() ? "" : ", found '" + peek().text + "'"));
    }

    Formula implication() {
        Formula l = disjunction();
        if (accept(Tok::Implies)) return Formula::disj(Formula::negation(l), implication());
        return l;
    }
    Formula disjunction() {
        Formula l = conjunction();
        while (accept(Tok::Or)) l = Formula::disj(l, conjunction());
        return l;
    }
    Formula conjunction() {
        Formula l = temporal();
        while (accept(Tok::And)) l = Formula::conj(l, temporal());
        return l;
    }
    Formula temporal() {
        Formula l = prefix();
        if (accept(Tok::Until)) return Formula::until(l, temporal());
        if (accept(Tok::Release)) return Formula::release(l, temporal());
        return l;
    }
    Formula prefix() {
        if (accept(Tok::Not)) return Formula::negation(prefix());
        if (accept(Tok::Next)) return Formula::next(prefix());
        if (accept(Tok::Eventually)) return Formula::eventually(prefix());
        if (accept(Tok::Always)) return Formula::always(prefix());
        return primary();
    }
    Formula primary() {
        const Token& t = peek();
        switch (t.kind) {
            case Tok::True: ++pos_; return Formula::top();
            case Tok::False: ++pos_; return Formula::bottom();
            case Tok::Ident: {
                auto id = actions_.find(t.text);
                if (!id) throw Error("unknown action '" + t.text + "' in LTL formula");
                ++pos_;
                return Formula::atom(*id);
            }
            case Tok::LParen: {
                ++pos_;
                Formula f = implication();
                expect(Tok::RParen, "')'");
                return f;
            }
            default:
                throw Error("LTL syntax error at offset " + std::to_string(t.pos) + ": unexpected " +
                            (t.text.empty() ? std::string("end of formula") : "'" + t.text + "'"));
        }
    }

    std::vector<Token> tokens_;
    const csp::ActionTable& actions_;
    std::size_t pos_ = 0;
};

}  // namespace

Formula parse_ltl(std::string_view text, const csp::ActionTable& actions) { return Parser(text, actions).parse(); }

// ---------------------------------------------------------------------------
// Normal forms

namespace {

Formula push(const Formula& f, bool negated) {
    switch (f.op()) {
        case Op::True: return negated ? Formula::bottom() : f;
        case Op::False: return negated ? Formula::top() : f;
        case Op::Atom: return negated ? Formula::negation(f) : f;
        case Op::Not: return push(f.lhs(), !negated);
        case Op::Next: return Formula::next(push(f.lhs(), negated));
        case Op::Eventually:
            return negated ? Formula::always(push(f.lhs(), true)) : Formula::eventually(push(f.lhs(), false));
        case Op::Always:
            return negated ? Formula::eventually(push(f.lhs(), true)) : Formula::always(push(f.lhs(), false));
        case Op::And:
            return negated ? Formula::disj(push(f.lhs(), true), push(f.rhs(), true))
                           : Formula::conj(push(f.lhs(), false), push(f.rhs(), false));
        case Op::Or:
            return negated ? Formula::conj(push(f.lhs(), true), push(f.rhs(), true))
                           : Formula::disj(push(f.lhs(), false), push(f.rhs(), false));
        case Op::Until:
            return negated ? Formula::release(push(f.lhs(), true), push(f.rhs(), true))
                           : Formula::until(push(f.lhs(), false), push(f.rhs(), false));
        case Op::Release:
            return negated ? Formula::until(push(f.lhs(), true), push(f.rhs(), true))
                           : Formula::release(push(f.lhs(), false), push(f.rhs(), false));
    }
    return f;
}

}  // namespace

Formula nnf(const Formula& f) { return push(f, false); }
Formula negate(const Formula& f) { return push(f, true); }

// ---------------------------------------------------------------------------
// Lasso evaluation

namespace {

using Truth = std::vector<bool>;

Truth evaluate(const Formula& f, const Lasso& w) {
    const std::size_t n = w.horizon();
    auto succ = [&](std::size_t i) { return i + 1 < n ? i + 1 : w.prefix.size(); };
    Truth out(n, false);
    switch (f.op()) {
        case Op::True: out.assign(n, true); break;
        case Op::False: break;
        case Op::Atom:
            for (std::size_t i = 0; i < n; ++i) out[i] = w.at(i) == f.action();
            break;
        case Op::Not: {
            auto sub = evaluate(f.lhs(), w);
            for (std::size_t i = 0; i < n; ++i) out[i] = !sub[i];
            break;
        }
        case Op::And:
        case Op::Or: {
            auto l = evaluate(f.lhs(), w);
            auto r = evaluate(f.rhs(), w);
            for (std::size_t i = 0; i < n; ++i) out[i] = f.op() == Op::And ? (l[i] && r[i]) : (l[i] || r[i]);
            break;
        }
        case Op::Next: {
            auto sub = evaluate(f.lhs(), w);
            for (std::size_t i = 0; i < n; ++i) out[i] = sub[succ(i)];
            break;
        }
        case Op::Until:
        case Op::Release:
        case Op::Eventually:
        case Op::Always: {
            // Until/Eventually are least fixpoints, Release/Always greatest ones.
            Truth l, r;
            if (f.op() == Op::Eventually) {
                l.assign(n, true);
                r = evaluate(f.lhs(), w);
            } else if (f.op() == Op::Always) {
                l.assign(n, false);
                r = evaluate(f.lhs(), w);
            } else {
                l = evaluate(f.lhs(), w);
                r = evaluate(f.rhs(), w);
            }
            const bool least = f.op() == Op::Until || f.op() == Op::Eventually;
            out.assign(n, !least);
            for (bool changed = true; changed;) {
                changed = false;
                for (std::size_t k = n; k-- > 0;) {
                    bool v = least ? (r[k] || (l[k] && out[succ(k)])) : (r[k] && (l[k] || out[succ(k)]));
                    if (v != out[k]) {
                        out[k] = v;
                        changed = true;
                    }
                }
            }
            break;
        }
    }
    return out;
}

}  // namespace

bool eval_lasso(const Formula& f, const Lasso& w) {
    if (w.loop.empty()) throw Error("lasso loop must be non-empty");
    return evaluate(f, w)[0];
}

// ---------------------------------------------------------------------------
// Tableau translation

namespace {

// Subformulas of the NNF input, numbered in post-order.
class Closure {
public:
    std::uint32_t intern(const Formula& f) {
        std::uint32_t l = UINT32_MAX, r = UINT32_MAX;
        if (f.op() != Op::True && f.op() != Op::False && f.op() != Op::Atom) {
            l = intern(f.lhs());
            if (binary(f.op())) r = intern(f.rhs());
        }
        Key key{f.op(), f.op() == Op::Atom ? f.action() : 0, l, r};
        auto [it, fresh] = index_.emplace(key, static_cast<std::uint32_t>(entries_.size()));
        if (fresh) entries_.push_back(key);
        return it->second;
    }

    struct Key {
        Op op;
        ActionId action;
        std::uint32_t lhs, rhs;
        auto operator<=>(const Key&) const = default;
    };
    const Key& operator[](std::uint32_t i) const { return entries_[i]; }
    std::size_t size() const { return entries_.size(); }

private:
    std::map<Key, std::uint32_t> index_;
    std::vector<Key> entries_;
};

using Ids = std::vector<std::uint32_t>;  // sorted, unique

void insert_sorted(Ids& v, std::uint32_t x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
}

bool has(const Ids& v, std::uint32_t x) { return std::binary_search(v.begin(), v.end(), x); }

// One tableau node after full expansion.
struct Cover {
    Ids positives;  // atom actions required now
    Ids negatives;  // atom actions forbidden now
    Ids pending;    // eventualities still owed
    Ids next;       // obligations from the next position
};

class Tableau {
public:
    Tableau(Closure& closure) : c_(closure) {
        for (std::uint32_t i = 0; i < c_.size(); ++i) {
            Op op = c_[i].op;
            if (op == Op::Until || op == Op::Eventually) eventualities_.push_back(i);
        }
    }

    const Ids& eventualities() const { return eventualities_; }

    // All consistent expansions of a set of obligations.
    std::vector<Cover> covers(const Ids& obligations) {
        std::vector<Cover> out;
        Cover start;
        Ids todo = obligations;
        expand(std::move(todo), start, Ids{}, out);
        // Deduplicate.
        std::sort(out.begin(), out.end(), [](const Cover& a, const Cover& b) { return key(a) < key(b); });
        out.erase(std::unique(out.begin(), out.end(), [](const Cover& a, const Cover& b) { return key(a) == key(b); }),
                  out.end());
        return out;
    }

    // Acceptance set membership: the node does not owe the eventuality.
    bool in_acceptance(const Cover& cv, std::uint32_t ev) const { return !has(cv.pending, ev); }

private:
    static std::tuple<const Ids&, const Ids&, const Ids&, const Ids&> key(const Cover& c) {
        return {c.positives, c.negatives, c.pending, c.next};
    }

    void expand(Ids todo, Cover node, Ids old, std::vector<Cover>& out) {
        while (!todo.empty()) {
            std::uint32_t f = todo.back();
            todo.pop_back();
            if (has(old, f)) continue;
            insert_sorted(old, f);
            const auto& k = c_[f];
            switch (k.op) {
                case Op::True: break;
                case Op::False: return;
                case Op::Atom:
                    if (has(node.negatives, k.action)) return;
                    insert_sorted(node.positives, k.action);
                    if (node.positives.size() > 1) return;
                    break;
                case Op::Not: {
                    ActionId a = c_[k.lhs].action;
                    if (has(node.positives, a)) return;
                    insert_sorted(node.negatives, a);
                    break;
                }
                case Op::And:
                    todo.push_back(k.lhs);
                    todo.push_back(k.rhs);
                    break;
                case Op::Next: insert_sorted(node.next, k.lhs); break;
                case Op::Always:
                    todo.push_back(k.lhs);
                    insert_sorted(node.next, f);
                    break;
                case Op::Or: {
                    Ids left = todo, right = todo;
                    left.push_back(k.lhs);
                    right.push_back(k.rhs);
                    expand(std::move(left), node, old, out);
                    expand(std::move(right), node, old, out);
                    return;
                }
                case Op::Until:
                case Op::Eventually: {
                    // r now, or (l now and the eventuality again next).
                    std::uint32_t goal = k.op == Op::Until ? k.rhs : k.lhs;
                    Ids now = todo;
                    now.push_back(goal);
                    expand(std::move(now), node, old, out);
                    Ids later = todo;
                    if (k.op == Op::Until) later.push_back(k.lhs);
                    Cover owed = node;
                    insert_sorted(owed.pending, f);
                    insert_sorted(owed.next, f);
                    expand(std::move(later), owed, old, out);
                    return;
                }
                case Op::Release: {
                    // r and l now, or r now and the release again next.
                    Ids both = todo;
                    both.push_back(k.lhs);
                    both.push_back(k.rhs);
                    expand(std::move(both), node, old, out);
                    Ids keep = todo;
                    keep.push_back(k.rhs);
                    Cover carried = node;
                    insert_sorted(carried.next, f);
                    expand(std::move(keep), carried, old, out);
                    return;
                }
            }
        }
        // An eventuality taken "later" may also be fulfilled through another branch
        // that put its goal in this node; in that case it is not owed.
        Ids owed;
        for (auto ev : node.pending) {
            const auto& k = c_[ev];
            std::uint32_t goal = k.op == Op::Until ? k.rhs : k.lhs;
            if (!has(old, goal)) owed.push_back(ev);
        }
        node.pending = std::move(owed);
        out.push_back(std::move(node));
    }

    Closure& c_;
    Ids eventualities_;
};

}  // namespace

automata::Nba to_nba(const Formula& f, const std::vector<std::string>& alphabet) {
    const Formula g = f.in_nnf() ? f : nnf(f);
    Closure closure;
    const std::uint32_t root = closure.intern(g);
    Tableau tableau(closure);
    const Ids& evs = tableau.eventualities();
    const std::uint32_t k = static_cast<std::uint32_t>(evs.size());

    // Tableau states keyed by (literals, pending, next).
    std::map<std::tuple<Ids, Ids, Ids, Ids>, std::uint32_t> node_ids;
    std::vector<Cover> nodes;
    std::map<Ids, std::vector<std::uint32_t>> successor_cache;
    auto node_of = [&](const Cover& cv) {
        auto key = std::make_tuple(cv.positives, cv.negatives, cv.pending, cv.next);
        auto [it, fresh] = node_ids.emplace(key, static_cast<std::uint32_t>(nodes.size()));
        if (fresh) nodes.push_back(cv);
        return it->second;
    };
    auto successors = [&](const Ids& obligations) -> const std::vector<std::uint32_t>& {
        auto it = successor_cache.find(obligations);
        if (it != successor_cache.end()) return it->second;
        std::vector<std::uint32_t> ids;
        for (const auto& cv : tableau.covers(obligations)) ids.push_back(node_of(cv));
        return successor_cache.emplace(obligations, std::move(ids)).first->second;
    };
    auto allows = [&](std::uint32_t node, automata::Letter c) {
        const auto& cv = nodes[node];
        if (!cv.positives.empty() && (cv.positives.size() > 1 || cv.positives[0] != c)) return false;
        return !has(cv.negatives, c);
    };
    // Degeneralization level after entering `node` while waiting for set `level`.
    auto advance = [&](std::uint32_t level, std::uint32_t node) {
        while (level < k && tableau.in_acceptance(nodes[node], evs[level])) ++level;
        return level;
    };

    automata::Nba out;
    out.alphabet = alphabet;
    std::map<std::pair<std::uint32_t, std::uint32_t>, automata::State> state_ids;  // (node, level)
    std::vector<std::pair<std::uint32_t, std::uint32_t>> states;
    auto state_of = [&](std::uint32_t node, std::uint32_t level) {
        auto [it, fresh] = state_ids.emplace(std::make_pair(node, level), static_cast<automata::State>(states.size() + 1));
        if (fresh) states.emplace_back(node, level);
        return it->second;
    };

    // State 0 is the pseudo-initial state that has read nothing yet.
    std::vector<automata::Edge> edges;
    auto connect = [&](automata::State src, std::uint32_t level, const Ids& obligations) {
        const std::uint32_t restart = level == k ? 0 : level;
        for (std::uint32_t t : successors(obligations)) {
            automata::State dst = state_of(t, advance(restart, t));
            for (automata::Letter c = 0; c < alphabet.size(); ++c)
                if (allows(t, c)) edges.push_back({src, c, dst});
        }
    };
    connect(0, 0, Ids{root});
    for (std::size_t i = 0; i < states.size(); ++i) {
        auto [node, level] = states[i];
        Ids obligations = nodes[node].next;
        connect(static_cast<automata::State>(i + 1), level, obligations);
    }

    out.num_states = states.size() + 1;
    out.initial = {0};
    out.green.assign(out.num_states, false);
    for (std::size_t i = 0; i < states.size(); ++i) out.green[i + 1] = states[i].second == k;
    out.edges = std::move(edges);
    out.normalize();
    return automata::prune(out);
}

}  // namespace coordsynth::ltl
