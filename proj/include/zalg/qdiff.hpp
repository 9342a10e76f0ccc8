#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "zalg/automata.hpp"
#include "zalg/polyxq.hpp"

namespace zalg {

// First-order coupled system f_v(x, q) = sum_u M[v][u](x, q) f_u(xq, q) over
// the non-accepting states of a DFA, rows/columns in ascending state order.
struct SimultaneousSystem {
    std::vector<int> state_labels; // original DFA state ids
    int start_index = 0;           // row of the start state
    std::vector<std::vector<PolyXQ>> matrix;

    int size() const { return static_cast<int>(matrix.size()); }
};

SimultaneousSystem system_from_dfa(const Dfa& dfa);

// p_0(x,q) f(x,q) + p_1(x,q) f(xq,q) + ... + p_R(x,q) f(xq^R,q) = 0 with
// integer content removed, p_0 and p_R nonzero, and the lowest term of p_0
// sign-positive.
struct ScalarRecurrence {
    std::vector<PolyXQ> p;

    int order() const { return static_cast<int>(p.size()) - 1; }
    nlohmann::json to_json() const;
    static ScalarRecurrence from_json(const nlohmann::json& j);
};

// Uncouples the system into a scalar recurrence for the start-state series by
// the shift-row elimination: rows y(xq^j) expressed over a moving frontier,
// stopping at the first linear dependence.
ScalarRecurrence murray_miller(const SimultaneousSystem& sys);

struct AnnihilationReport {
    bool zero = false;
    int checked_order = 0;
    int first_nonzero_x = -1;
    int first_nonzero_q = -1;
    Rat residual;
};

// sum_r p_r(x,q) f(xq^r, q) through f's truncation order.
AnnihilationReport verify_annihilation(const ScalarRecurrence& rec, const BivariateSeries& f);

// Transcribed order-8 recurrence tables for the three mod-16 families, a = 1..3.
ScalarRecurrence reference_recurrence(int a);

// Equality up to one common polynomial factor: cross-ratios of all
// coefficient pairs agree.
bool proportional(const ScalarRecurrence& a, const ScalarRecurrence& b);

} // namespace zalg
