#include "coordsynth/benchgen.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>

namespace coordsynth::benchgen {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
    return out;
}

std::string conj(const std::vector<std::string>& parts) {
    std::vector<std::string> wrapped;
    for (const auto& p : parts) wrapped.push_back("(" + p + ")");
    return join(wrapped, " & ");
}

const char* const kExampleBodies[] = {
    "process E  = a0 -> E0 | a1 -> STOP;\n"
    "process E0 = a0 -> E0;\n",

    "process E  = a0 -> E0 | a1 -> E1;\n"
    "process E0 = a0 -> E0;\n"
    "process E1 = b -> E1;\n",

    "process E  = a0 -> E0 | a0 -> E1;\n"
    "process E0 = a0 -> E0;\n"
    "process E1 = b -> E1;\n",

    "process E  = a0 -> E0 | a0 -> E1;\n"
    "process E0 = a0 -> E0;\n"
    "process E1 = b -> E1 | a0 -> E0;\n",

    "process E  = a0 -> E0 | a0 -> E1;\n"
    "process E0 = a0 -> E0;\n"
    "process E1 = a1 -> E1;\n",

    "process E  = a0 -> E0;\n"
    "process E0 = b -> E;\n",
};

}  // namespace

std::string example(int k) {
    if (k < 0 || k > 5) throw Error("example index must be in 0..5");
    std::ostringstream out;
    out << "# example " << k << "\n"
        << "public a0, a1;\nprivate b;\n"
        << kExampleBodies[k] << "system E;\nsafety_complement universal;\nliveness \"F G !b\";\n";
    return out.str();
}

std::string hidden_branching() {
    return "public a0, a1;\n"
           "private b0, b1;\n"
           "process E  = a0 -> STOP | a0 -> E0 | b0 -> E1;\n"
           "process E0 = b1 -> E0;\n"
           "process E1 = a1 -> E1;\n"
           "system E;\n"
           "safety_complement universal;\n"
           "liveness \"G F a1\";\n";
}

std::string thermostat(int level) {
    if (level < 1 || level > 3) throw Error("thermostat level must be 1, 2 or 3");
    std::vector<std::string> goals{"G F JustRight"};
    if (level >= 2) {
        goals.push_back("G F switchACOn");
        goals.push_back("G F switchHeatOn");
    }
    if (level >= 3) {
        goals.push_back("!F(switchACOn & (!switchACOff U switchHeatOn))");
        goals.push_back("!F(switchHeatOn & (!switchHeatOff U switchACOn))");
    }
    std::ostringstream out;
    out << "# thermostat, level " << level << "\n"
        << "public JustRight, Cold, Warm, switchACOff, switchACOn, switchHeatOff, switchHeatOn;\n"
        << "public HeatisOn, ACisOn;\n"
        << "private fluct;\n"
        << "# sensor: fluct models outside temperature changes\n"
        << "process JR = JustRight -> JR | HeatisOn -> TW | fluct -> TW | ACisOn -> TC | fluct -> TC;\n"
        << "process TC = HeatisOn -> JR | fluct -> JR | ACisOn -> TC | Cold -> TC;\n"
        << "process TW = ACisOn -> JR | fluct -> JR | HeatisOn -> TW | Warm -> TW;\n"
        << "process HeatOff = switchHeatOn -> HeatOn;\n"
        << "process HeatOn = HeatisOn -> HeatOn | switchHeatOff -> HeatOff;\n"
        << "process AcOff = switchACOn -> AcOn;\n"
        << "process AcOn = ACisOn -> AcOn | switchACOff -> AcOff;\n"
        << "system HeatOff ||{HeatisOn} JR ||{ACisOn} AcOff;\n"
        << "safety_complement universal;\n"
        << "liveness \"" << conj(goals) << "\";\n";
    return out.str();
}

std::string arbiter(int n) {
    if (n < 2) throw Error("arbiter needs at least two processes");
    std::vector<std::string> decl, procs, roots, mutex, starve, requests;
    for (int i = 0; i < n; ++i) {
        const std::string s = std::to_string(i);
        decl.push_back("request." + s);
        decl.push_back("grant." + s);
        decl.push_back("release." + s);
        procs.push_back("process P" + s + " = request." + s + " -> grant." + s + " -> release." + s + " -> P" + s + ";");
        roots.push_back("P" + s);
        std::vector<std::string> others;
        for (int j = 0; j < n; ++j)
            if (j != i) others.push_back("grant." + std::to_string(j));
        mutex.push_back("!F(grant." + s + " & (!release." + s + " U (" + join(others, " | ") + ")))");
        starve.push_back("G(request." + s + " -> F grant." + s + ")");
        requests.push_back("G F request." + s);
    }
    std::vector<std::string> goals = mutex;
    goals.insert(goals.end(), starve.begin(), starve.end());
    goals.insert(goals.end(), requests.begin(), requests.end());
    std::ostringstream out;
    out << "# arbiter for " << n << " processes\n"
        << "public " << join(decl, ", ") << ";\n"
        << join(procs, "\n") << "\n"
        << "system " << join(roots, " ||{} ") << ";\n"
        << "safety_complement universal;\n"
        << "liveness \"" << conj(goals) << "\";\n";
    return out.str();
}

std::string copy_relay(bool synchronous) {
    const std::string input = synchronous ? "r0 | r1" : "r0 | r1 | h0 | h1";
    const std::string write = "w0 | w1";
    const std::string read = "r0 | r1";
    std::vector<std::string> goals{
        // Writes and input steps alternate, starting with a write; the single
        // tau that picks the initial input may fall anywhere in between.
        "tau U (" + write + ")",
        "G((" + write + ") -> X(tau U (" + input + ")))",
        "G((" + input + ") -> X(tau U (" + write + ")))",
        "G F (" + read + ")",
        // Between two reads the written value changes at most once.
        "!F(w0 & X(!(" + read + ") U (w1 & X(!(" + read + ") U w0))))",
        "!F(w1 & X(!(" + read + ") U (w0 & X(!(" + read + ") U w1))))",
        // After reading a value, nothing else is written before the next read.
        "G(r0 -> X(!w1 U (" + read + ")))",
        "G(r1 -> X(!w0 U (" + read + ")))",
    };
    std::ostringstream out;
    out << "# copy x to y, " << (synchronous ? "every input step is read" : "input may change unobserved") << "\n"
        << "public r0, r1, w0, w1;\n"
        << "private tau" << (synchronous ? "" : ", h0, h1") << ";\n"
        << "process Xinit = tau -> X0 | tau -> X1;\n";
    if (synchronous) {
        out << "process X0 = r0 -> X0 | r0 -> X1;\n"
            << "process X1 = r1 -> X1 | r1 -> X0;\n";
    } else {
        out << "process X0 = r0 -> X0 | r0 -> X1 | h0 -> X0 | h0 -> X1;\n"
            << "process X1 = r1 -> X1 | r1 -> X0 | h1 -> X1 | h1 -> X0;\n";
    }
    out << "process Yinit = w0 -> Y0 | w1 -> Y1;\n"
        << "process Y0 = w0 -> Y0 | w1 -> Y1;\n"
        << "process Y1 = w1 -> Y1 | w0 -> Y0;\n"
        << "system Xinit ||{} Yinit;\n"
        << "safety_complement universal;\n"
        << "liveness \"" << conj(goals) << "\";\n";
    return out.str();
}

namespace {

void require_complete(const automata::FiniteNfa& a) {
    if (a.initial.size() != 1) throw Error("automaton must have exactly one initial state");
    std::set<std::pair<automata::State, automata::Letter>> has;
    for (const auto& e : a.edges) has.insert({e.src, e.letter});
    for (automata::State s = 0; s < a.num_states; ++s)
        for (automata::Letter l = 0; l < a.alphabet.size(); ++l)
            if (!has.count({s, l})) throw Error("automaton is not complete");
}

}  // namespace

std::string universality_instance(const automata::FiniteNfa& a) {
    require_complete(a);
    for (const auto& name : a.alphabet)
        if (name == "sharp" || name == "plus" || name == "minus") throw Error("letter name clashes with a reserved action");
    auto state = [](automata::State s) { return "A" + std::to_string(s); };
    std::map<automata::State, std::vector<std::string>> branches;
    for (const auto& e : a.edges) branches[e.src].push_back(a.alphabet[e.letter] + " -> " + state(e.dst));
    std::ostringstream out;
    out << "public " << join(a.alphabet, ", ") << ", sharp, plus, minus;\n";
    // Initial state first, for readability.
    std::vector<automata::State> order{a.initial[0]};
    for (automata::State s = 0; s < a.num_states; ++s)
        if (s != a.initial[0]) order.push_back(s);
    for (auto s : order) {
        auto b = branches[s];
        b.push_back(std::string("sharp -> ") + (a.green[s] ? "Accept" : "Reject"));
        out << "process " << state(s) << " = " << join(b, " | ") << ";\n";
    }
    out << "process Accept = plus -> Accept;\n"
        << "process Reject = minus -> Reject;\n"
        << "system " << state(a.initial[0]) << ";\n"
        << "safety_complement universal;\n"
        << "liveness \"F(sharp & X G minus)\";\n";
    return out.str();
}

std::optional<Word> shortest_rejected(const automata::FiniteNfa& a) {
    using Subset = std::vector<bool>;
    auto succ = a.successors();
    Subset start(a.num_states, false);
    for (auto s : a.initial) start[s] = true;
    auto accepting = [&](const Subset& x) {
        for (automata::State s = 0; s < a.num_states; ++s)
            if (x[s] && a.green[s]) return true;
        return false;
    };
    std::map<Subset, Word> seen{{start, {}}};
    std::deque<Subset> queue{start};
    while (!queue.empty()) {
        Subset cur = queue.front();
        queue.pop_front();
        const Word w = seen[cur];
        if (!accepting(cur)) return w;
        for (automata::Letter l = 0; l < a.alphabet.size(); ++l) {
            Subset next(a.num_states, false);
            for (automata::State s = 0; s < a.num_states; ++s)
                if (cur[s])
                    for (const auto& [letter, t] : succ[s])
                        if (letter == l) next[t] = true;
            if (seen.count(next)) continue;
            Word w2 = w;
            w2.push_back(l);
            seen.emplace(next, std::move(w2));
            queue.push_back(std::move(next));
        }
    }
    return std::nullopt;
}

bool is_universal(const automata::FiniteNfa& a) { return !shortest_rejected(a).has_value(); }

automata::FiniteNfa random_complete_nfa(std::mt19937_64& rng, std::size_t states, std::size_t letters) {
    if (states == 0 || letters == 0) throw Error("random automaton needs states and letters");
    automata::FiniteNfa a;
    a.num_states = states;
    a.initial = {0};
    for (std::size_t l = 0; l < letters; ++l) a.alphabet.push_back(std::string(1, static_cast<char>('a' + l)));
    std::bernoulli_distribution coin(0.5);
    std::uniform_int_distribution<automata::State> pick(0, static_cast<automata::State>(states - 1));
    a.green.resize(states);
    for (std::size_t s = 0; s < states; ++s) a.green[s] = coin(rng);
    for (automata::State s = 0; s < states; ++s)
        for (automata::Letter l = 0; l < letters; ++l) {
            a.edges.push_back({s, l, pick(rng)});
            for (automata::State t = 0; t < states; ++t)
                if (coin(rng) && coin(rng)) a.edges.push_back({s, l, t});
        }
    a.normalize();
    return a;
}

std::vector<std::string> generator_names() {
    return {"example", "hidden-branching", "thermostat", "arbiter", "copy-sync", "copy-async", "universality"};
}

std::string generate(const std::string& name, int param, std::uint64_t seed) {
    if (name == "example") return example(param);
    if (name == "hidden-branching") return hidden_branching();
    if (name == "thermostat") return thermostat(param);
    if (name == "arbiter") return arbiter(param);
    if (name == "copy-sync") return copy_relay(true);
    if (name == "copy-async") return copy_relay(false);
    if (name == "universality") {
        std::mt19937_64 rng(seed);
        return universality_instance(random_complete_nfa(rng, param > 0 ? static_cast<std::size_t>(param) : 3, 2));
    }
    throw Error("unknown generator '" + name + "'");
}

}  // namespace coordsynth::benchgen
