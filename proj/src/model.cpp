#include "coordsynth/model.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace coordsynth::model {

namespace {

enum class Tok { Ident, Number, String, Arrow, Bar, Par, Semi, Comma, Eq, LBrace, RBrace, End };

struct Token {
    Tok kind;
    std::string text;
    std::size_t line, column;
};

[[noreturn]] void fail_at(std::size_t line, std::size_t column, const std::string& msg) {
    throw Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg);
}

std::vector<Token> lex(std::string_view s) {
    std::vector<Token> out;
    std::size_t i = 0, line = 1, col = 1;
    auto advance = [&](std::size_t n) {
        for (std::size_t k = 0; k < n; ++k) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    };
    while (i < s.size()) {
        char c = s[i];
        if (c == '#') {
            while (i < s.size() && s[i] != '\n') advance(1);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance(1);
            continue;
        }
        const std::size_t l = line, cl = col, start = i;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '.')) ++j;
            out.push_back({Tok::Ident, std::string(s.substr(start, j - start)), l, cl});
            advance(j - i);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
            out.push_back({Tok::Number, std::string(s.substr(start, j - start)), l, cl});
            advance(j - i);
            continue;
        }
        if (c == '"') {
            std::size_t j = i + 1;
            while (j < s.size() && s[j] != '"' && s[j] != '\n') ++j;
            if (j >= s.size() || s[j] != '"') fail_at(l, cl, "unterminated string");
            out.push_back({Tok::String, std::string(s.substr(start + 1, j - start - 1)), l, cl});
            advance(j + 1 - i);
            continue;
        }
        if (s.substr(i, 2) == "->") {
            out.push_back({Tok::Arrow, "->", l, cl});
            advance(2);
            continue;
        }
        if (s.substr(i, 2) == "||") {
            out.push_back({Tok::Par, "||", l, cl});
            advance(2);
            continue;
        }
        Tok kind;
        switch (c) {
            case '|': kind = Tok::Bar; break;
            case ';': kind = Tok::Semi; break;
            case ',': kind = Tok::Comma; break;
            case '=': kind = Tok::Eq; break;
            case '{': kind = Tok::LBrace; break;
            case '}': kind = Tok::RBrace; break;
            default: fail_at(l, cl, std::string("unexpected character '") + c + "'");
        }
        out.push_back({kind, std::string(1, c), l, cl});
        advance(1);
    }
    out.push_back({Tok::End, "", line, col});
    return out;
}

struct NfaDraft {
    std::size_t states = 0;
    std::vector<automata::State> initial, accepting;
    std::vector<std::tuple<automata::State, ActionId, automata::State>> trans;
};

class ModelParser {
public:
    explicit ModelParser(std::string_view text) : toks_(lex(text)) {}

    Model parse() {
        Model m;
        std::optional<Token> liveness_token;
        while (peek().kind != Tok::End) {
            const Token& t = expect(Tok::Ident, "statement keyword");
            if (t.text == "public" || t.text == "private") {
                declare(m, t.text == "public");
            } else if (t.text == "process") {
                process(m);
            } else if (t.text == "system") {
                if (!m.system.empty()) fail_at(t.line, t.column, "duplicate system statement");
                system(m);
            } else if (t.text == "safety_complement") {
                safety(m);
            } else if (t.text == "liveness") {
                liveness_token = expect(Tok::String, "quoted LTL formula");
                m.spec.liveness_text = liveness_token->text;
                expect(Tok::Semi, "';'");
            } else {
                fail_at(t.line, t.column, "unknown statement '" + t.text + "'");
            }
        }
        if (m.system.empty()) fail_at(peek().line, peek().column, "missing system statement");
        check(m);
        try {
            m.spec.liveness = ltl::parse_ltl(m.spec.liveness_text, m.actions);
        } catch (const Error& e) {
            const Token& at = liveness_token ? *liveness_token : peek();
            fail_at(at.line, at.column, std::string("in liveness formula: ") + e.what());
        }
        build_safety(m);
        return m;
    }

private:
    const Token& peek() const { return toks_[pos_]; }
    const Token& next() { return toks_[pos_++]; }
    bool accept(Tok k) {
        if (peek().kind != k) return false;
        ++pos_;
        return true;
    }
    const Token& expect(Tok k, const char* what) {
        if (peek().kind != k) {
            std::string found = peek().kind == Tok::End ? "end of input" : "'" + peek().text + "'";
            fail_at(peek().line, peek().column, std::string("expected ") + what + ", found " + found);
        }
        return next();
    }
    bool accept_word(const char* w) {
        if (peek().kind == Tok::Ident && peek().text == w) {
            ++pos_;
            return true;
        }
        return false;
    }

    ActionId action_ref(const Model& m, const Token& t) {
        auto id = m.actions.find(t.text);
        if (!id) fail_at(t.line, t.column, "undeclared action '" + t.text + "'");
        return *id;
    }

    void declare(Model& m, bool is_public) {
        do {
            const Token& t = expect(Tok::Ident, "action name");
            if (reserved(t.text)) fail_at(t.line, t.column, "'" + t.text + "' is reserved");
            if (m.actions.find(t.text)) fail_at(t.line, t.column, "action '" + t.text + "' declared twice");
            ActionId id = m.actions.intern(t.text);
            (is_public ? m.declared_public : m.declared_private).push_back(id);
        } while (accept(Tok::Comma));
        expect(Tok::Semi, "';'");
    }

    static bool reserved(const std::string& w) {
        static const std::set<std::string> words{"STOP", "true", "false", "X", "U", "R", "F", "G"};
        return words.count(w) > 0;
    }

    void process(Model& m) {
        const Token& name = expect(Tok::Ident, "process name");
        if (name.text == "STOP") fail_at(name.line, name.column, "STOP cannot be redefined");
        for (const auto& p : m.processes)
            if (p.name == name.text) fail_at(name.line, name.column, "duplicate process '" + name.text + "'");
        expect(Tok::Eq, "'='");
        ProcessDef def{name.text, {}};
        if (accept_word("STOP")) {
            expect(Tok::Semi, "';'");
            m.processes.push_back(std::move(def));
            return;
        }
        do {
            Branch b;
            const Token* cur = &expect(Tok::Ident, "action");
            while (accept(Tok::Arrow)) {
                b.actions.push_back(action_ref(m, *cur));
                cur = &expect(Tok::Ident, "action or process name");
            }
            if (b.actions.empty()) fail_at(cur->line, cur->column, "expected '->' after '" + cur->text + "'");
            b.target = cur->text;
            references_.push_back(*cur);
            def.branches.push_back(std::move(b));
        } while (accept(Tok::Bar));
        expect(Tok::Semi, "';'");
        m.processes.push_back(std::move(def));
    }

    void system(Model& m) {
        const Token& first = expect(Tok::Ident, "process name");
        m.system.push_back({first.text, std::nullopt});
        roots_.push_back(first);
        while (accept(Tok::Par)) {
            SystemOperand op;
            if (accept(Tok::LBrace)) {
                std::vector<ActionId> sync;
                if (!accept(Tok::RBrace)) {
                    do {
                        const Token& a = expect(Tok::Ident, "action");
                        sync.push_back(action_ref(m, a));
                    } while (accept(Tok::Comma));
                    expect(Tok::RBrace, "'}'");
                }
                op.sync = std::move(sync);
            }
            const Token& t = expect(Tok::Ident, "process name");
            op.root = t.text;
            roots_.push_back(t);
            m.system.push_back(std::move(op));
        }
        system_end_ = peek();
        expect(Tok::Semi, "';'");
    }

    void safety(Model& m) {
        if (accept_word("universal")) {
            m.safety_form = SafetyForm::Universal;
            expect(Tok::Semi, "';'");
            return;
        }
        if (accept_word("empty")) {
            m.safety_form = SafetyForm::Empty;
            expect(Tok::Semi, "';'");
            return;
        }
        const Token& kw = expect(Tok::Ident, "'universal', 'empty' or 'nfa'");
        if (kw.text != "nfa") fail_at(kw.line, kw.column, "expected 'universal', 'empty' or 'nfa'");
        m.safety_form = SafetyForm::Explicit;
        expect(Tok::LBrace, "'{'");
        NfaDraft d;
        auto number = [&]() {
            const Token& n = expect(Tok::Number, "state number");
            return static_cast<automata::State>(std::stoul(n.text));
        };
        while (!accept(Tok::RBrace)) {
            const Token& item = expect(Tok::Ident, "'states', 'initial', 'accepting' or 'trans'");
            if (item.text == "states") {
                d.states = number();
            } else if (item.text == "initial" || item.text == "accepting") {
                auto& dst = item.text == "initial" ? d.initial : d.accepting;
                while (peek().kind == Tok::Number) {
                    automata::State s = number();
                    if (s >= d.states) fail_at(item.line, item.column, "state out of range");
                    dst.push_back(s);
                    accept(Tok::Comma);
                }
            } else if (item.text == "trans") {
                automata::State s = number();
                const Token& a = expect(Tok::Ident, "action");
                ActionId act = action_ref(m, a);
                automata::State t = number();
                if (s >= d.states || t >= d.states) fail_at(item.line, item.column, "state out of range");
                d.trans.emplace_back(s, act, t);
            } else {
                fail_at(item.line, item.column, "unknown nfa item '" + item.text + "'");
            }
            expect(Tok::Semi, "';'");
        }
        accept(Tok::Semi);
        nfa_ = std::move(d);
    }

    void check(Model& m) {
        std::set<std::string> names;
        for (const auto& p : m.processes) names.insert(p.name);
        for (const auto& r : references_)
            if (r.text != "STOP" && !names.count(r.text))
                fail_at(r.line, r.column, "undefined process '" + r.text + "'");
        for (const auto& r : roots_)
            if (!names.count(r.text)) fail_at(r.line, r.column, "undefined process '" + r.text + "'");
        try {
            (void)environment(m);
        } catch (const Error& e) {
            fail_at(system_end_.line, system_end_.column, e.what());
        }
    }

    void build_safety(Model& m) {
        const auto names = m.actions.names();
        switch (m.safety_form) {
            case SafetyForm::Universal: m.spec.safety_complement = automata::universal_nfa(names); break;
            case SafetyForm::Empty: m.spec.safety_complement = automata::empty_nfa(names); break;
            case SafetyForm::Explicit: {
                automata::FiniteNfa a;
                a.alphabet = names;
                a.num_states = nfa_.states;
                a.initial = nfa_.initial;
                a.green.assign(a.num_states, false);
                for (auto s : nfa_.accepting) a.green[s] = true;
                for (auto [s, act, t] : nfa_.trans) a.edges.push_back({s, act, t});
                a.normalize();
                m.spec.safety_complement = std::move(a);
                break;
            }
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<Token> references_, roots_;
    Token system_end_{Tok::End, "", 0, 0};
    NfaDraft nfa_;
};

const ProcessDef& find_def(const Model& m, const std::string& name) {
    for (const auto& p : m.processes)
        if (p.name == name) return p;
    throw Error("undefined process '" + name + "'");
}

csp::Process build_agent(const Model& m, const std::string& root) {
    csp::Process p;
    std::map<std::string, StateId> ids;
    std::deque<std::string> work;
    auto id_of = [&](const std::string& name) {
        auto [it, fresh] = ids.emplace(name, static_cast<StateId>(p.state_names.size()));
        if (fresh) {
            p.state_names.push_back(name);
            if (name != "STOP") work.push_back(name);
        }
        return it->second;
    };
    id_of(root);
    std::set<ActionId> used;
    while (!work.empty()) {
        std::string name = work.front();
        work.pop_front();
        const ProcessDef& def = find_def(m, name);
        const StateId from = ids.at(name);
        std::size_t anon = 0;
        for (const auto& b : def.branches) {
            StateId cur = from;
            for (std::size_t k = 0; k + 1 < b.actions.size(); ++k) {
                StateId mid = static_cast<StateId>(p.state_names.size());
                p.state_names.push_back(name + "~" + std::to_string(++anon));
                p.transitions.push_back({cur, b.actions[k], mid});
                used.insert(b.actions[k]);
                cur = mid;
            }
            StateId to = id_of(b.target);
            p.transitions.push_back({cur, b.actions.back(), to});
            used.insert(b.actions.back());
        }
    }
    for (ActionId a : m.declared_public)
        if (used.count(a)) p.public_actions.push_back(a);
    for (ActionId a : m.declared_private)
        if (used.count(a)) p.private_actions.push_back(a);
    p.initial = 0;
    p.normalize();
    return p;
}

std::string join(const std::vector<ActionId>& ids, const csp::ActionTable& actions) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? ", " : "") + actions.name(ids[i]);
    return out;
}

}  // namespace

Model parse_model(std::string_view text) { return ModelParser(text).parse(); }

csp::Network build_network(const Model& m) {
    csp::Network n;
    for (const auto& op : m.system) n.agents.push_back(build_agent(m, op.root));
    csp::Process acc;
    for (std::size_t i = 0; i < m.system.size(); ++i) {
        if (i == 0) {
            acc = n.agents[0];
            continue;
        }
        std::vector<ActionId> sync = m.system[i].sync ? *m.system[i].sync : csp::common_public(acc, n.agents[i]);
        std::sort(sync.begin(), sync.end());
        for (ActionId a : sync)
            if (!acc.is_public(a) || !n.agents[i].is_public(a))
                throw Error("sync action '" + m.actions.name(a) + "' is not public in both operands");
        acc = csp::compose_pair(acc, n.agents[i], sync);
        n.sync_sets.push_back(std::move(sync));
    }
    return n;
}

csp::Process environment(const Model& m) {
    csp::Process e = csp::flatten_network(build_network(m));
    for (ActionId a : m.declared_public)
        if (!e.is_public(a) && !e.is_private(a)) e.public_actions.push_back(a);
    e.normalize();
    return e;
}

std::vector<ActionId> environment_alphabet(const Model& m) { return environment(m).public_actions; }

std::string print_model(const Model& m) {
    std::ostringstream out;
    if (!m.declared_public.empty()) out << "public " << join(m.declared_public, m.actions) << ";\n";
    if (!m.declared_private.empty()) out << "private " << join(m.declared_private, m.actions) << ";\n";
    for (const auto& p : m.processes) {
        out << "process " << p.name << " =";
        if (p.branches.empty()) out << " STOP";
        for (std::size_t i = 0; i < p.branches.size(); ++i) {
            out << (i ? " | " : " ");
            for (ActionId a : p.branches[i].actions) out << m.actions.name(a) << " -> ";
            out << p.branches[i].target;
        }
        out << ";\n";
    }
    out << "system";
    for (std::size_t i = 0; i < m.system.size(); ++i) {
        if (i) {
            out << " ||";
            if (m.system[i].sync) out << "{" << join(*m.system[i].sync, m.actions) << "}";
        }
        out << " " << m.system[i].root;
    }
    out << ";\n";
    switch (m.safety_form) {
        case SafetyForm::Universal: out << "safety_complement universal;\n"; break;
        case SafetyForm::Empty: out << "safety_complement empty;\n"; break;
        case SafetyForm::Explicit: {
            const auto& a = m.spec.safety_complement;
            out << "safety_complement nfa {\n  states " << a.num_states << ";\n  initial";
            for (auto s : a.initial) out << " " << s;
            out << ";\n  accepting";
            for (automata::State s = 0; s < a.num_states; ++s)
                if (a.green[s]) out << " " << s;
            out << ";\n";
            for (const auto& e : a.edges) out << "  trans " << e.src << " " << a.alphabet[e.letter] << " " << e.dst << ";\n";
            out << "}\n";
            break;
        }
    }
    out << "liveness \"" << m.spec.liveness_text << "\";\n";
    return out.str();
}

csp::Process parse_coordinator(std::string_view text, const csp::ActionTable& actions,
                               const std::vector<ActionId>& alphabet) {
    // Reuse the model grammar: declare the alphabet, then treat the first
    // equation as the root of a single-agent system.
    std::ostringstream src;
    std::vector<std::string> names;
    for (ActionId a : alphabet) names.push_back(actions.name(a));
    if (!names.empty()) {
        src << "public ";
        for (std::size_t i = 0; i < names.size(); ++i) src << (i ? ", " : "") << names[i];
        src << ";\n";
    }
    src << text << "\n";
    auto toks = lex(text);
    std::string root;
    for (std::size_t i = 0; i + 1 < toks.size(); ++i)
        if (toks[i].kind == Tok::Ident && toks[i].text == "process" && toks[i + 1].kind == Tok::Ident) {
            root = toks[i + 1].text;
            break;
        }
    if (root.empty()) throw Error("coordinator text has no process equation");
    src << "system " << root << ";\n";
    Model local = parse_model(src.str());
    csp::Process p = build_agent(local, root);
    // Map the local action ids back onto the caller's table.
    std::vector<ActionId> remap(local.actions.size());
    for (ActionId a = 0; a < local.actions.size(); ++a) {
        auto id = actions.find(local.actions.name(a));
        if (!id) throw Error("coordinator uses unknown action '" + local.actions.name(a) + "'");
        remap[a] = *id;
    }
    for (auto& t : p.transitions) t.action = remap[t.action];
    p.public_actions = alphabet;
    p.private_actions.clear();
    p.normalize();
    return p;
}

}  // namespace coordsynth::model
