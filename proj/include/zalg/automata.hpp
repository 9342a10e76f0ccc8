#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zalg/partitions.hpp"
#include "zalg/qseries.hpp"

namespace zalg {

struct Nfa {
    int alphabet = 0;
    std::vector<int> starts;
    std::vector<std::vector<std::vector<int>>> delta; // [state][letter] -> successors
    std::vector<bool> accepting;

    int states() const { return static_cast<int>(delta.size()); }
    int add_state();
    void add_edge(int from, int letter, int to);
    bool accepts(const std::vector<int>& word) const;
};

struct Dfa {
    int alphabet = 0;
    int start = 0;
    std::vector<std::vector<int>> delta; // [state][letter], total
    std::vector<bool> accepting;

    int states() const { return static_cast<int>(delta.size()); }
    bool accepts(const std::vector<int>& word) const;

    nlohmann::json to_json() const;
    static Dfa from_json(const nlohmann::json& j);
    std::string to_dot() const;
    std::string transition_table_csv() const;
};

// NFA for K* P2(sat_m(F)) K* + P2(sat_m(I)) K* over K = {0..m-1}: the words of
// partitions that match a forbidden pattern or begin with a forbidden prefix.
Nfa build_avoidance_nfa(const AvoidanceRule& rule);

Dfa determinize(const Nfa& nfa);
Dfa minimize(const Dfa& dfa);
Dfa determinize_minimize(const Nfa& nfa);
bool is_minimal(const Dfa& dfa);

// BFS relabeling with the fixed letter order 0 < 1 < ... < m-1.
Dfa canonical_form(const Dfa& dfa);

// Canonical-form equality; both inputs must be minimal.
bool dfa_isomorphic(const Dfa& a, const Dfa& b);

// Generating function sum x^len q^weight over partitions whose multiplicity
// words avoid L(dfa), exact to q-order max_n. Entering an accepting state at
// any point disqualifies the word.
BivariateSeries weighted_count(const Dfa& dfa, int max_n);

// Same at x = 1: weight-indexed counts.
std::vector<Int> weighted_count_q(const Dfa& dfa, int max_n);

// Minimal DFA for a preset or custom rule-backed constraint set.
Dfa avoidance_dfa(const AvoidanceRule& rule);

} // namespace zalg
