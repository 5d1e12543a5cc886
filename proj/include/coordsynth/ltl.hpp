#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "coordsynth/automata.hpp"
#include "coordsynth/csp.hpp"
#include "coordsynth/types.hpp"

namespace coordsynth::ltl {

enum class Op { True, False, Atom, Not, And, Or, Next, Until, Release, Eventually, Always };

// Immutable formula tree over single-action letters.
class Formula {
public:
    Formula();  // true

    static Formula top();
    static Formula bottom();
    static Formula atom(ActionId a);
    static Formula negation(Formula f);
    static Formula conj(Formula l, Formula r);
    static Formula disj(Formula l, Formula r);
    static Formula next(Formula f);
    static Formula until(Formula l, Formula r);
    static Formula release(Formula l, Formula r);
    static Formula eventually(Formula f);
    static Formula always(Formula f);

    Op op() const;
    ActionId action() const;  // Atom only
    const Formula& lhs() const;
    const Formula& rhs() const;

    std::size_t size() const;
    bool in_nnf() const;

    bool operator==(const Formula& o) const;
    std::string to_string(const csp::ActionTable& actions) const;
    std::string to_string(const std::vector<std::string>& names) const;

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

// `->` desugars to !a | b. Unknown atoms raise Error.
Formula parse_ltl(std::string_view text, const csp::ActionTable& actions);

// Negation normal form of f (F and G are kept as operators).
Formula nnf(const Formula& f);
// NNF of !f.
Formula negate(const Formula& f);

// Satisfaction at position 0 of the lasso word.
bool eval_lasso(const Formula& f, const Lasso& w);

// Tableau translation to a state-green NBA over letters 0..alphabet.size()-1.
automata::Nba to_nba(const Formula& f, const std::vector<std::string>& alphabet);

}  // namespace coordsynth::ltl
