#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include <nlohmann/json.hpp>

#include "zalg/automata.hpp"

using namespace zalg;

namespace {

// The reference 11-state transition table: states q0..q10, accepting sink q3.
Dfa reference_l3_dfa()
{
    Dfa d;
    d.alphabet = 3;
    d.start = 0;
    d.delta = {
        // letters 0, 1, 2 per state
        {1, 2, 3},  // q0
        {4, 5, 3},  // q1
        {1, 3, 3},  // q2
        {3, 3, 3},  // q3
        {6, 7, 3},  // q4
        {8, 3, 3},  // q5
        {6, 7, 9},  // q6
        {4, 2, 3},  // q7
        {6, 10, 3}, // q8
        {5, 3, 3},  // q9
        {4, 3, 3},  // q10
    };
    d.accepting = {false, false, false, true, false, false, false, false, false, false, false};
    return d;
}

BivariateSeries brute_rule_gf(const AvoidanceRule& rule, int order)
{
    auto set = ConstraintSet::custom(rule);
    BivariateSeries out(order);
    for (int n = 0; n <= order; ++n)
        for (const auto& p : enumerate_set(set, n))
            out.add_term(static_cast<int>(p.size()), n, 1);
    return out;
}

} // namespace

TEST_CASE("single-pattern avoidance over a binary alphabet")
{
    // sat_2((1)) = {(1)}; bad words are exactly those containing letter 1
    AvoidanceRule rule{2, {{1}}, {}};
    Nfa nfa = build_avoidance_nfa(rule);
    CHECK(nfa.accepts({1}));
    CHECK(nfa.accepts({0, 1, 0}));
    CHECK(!nfa.accepts({0, 0, 0}));
    CHECK(!nfa.accepts({}));

    Dfa dfa = determinize_minimize(nfa);
    CHECK(dfa.states() == 2);
    // the complement is 0*, so the only counted partition is the empty one
    auto counts = weighted_count_q(dfa, 10);
    CHECK(counts[0] == 1);
    for (int n = 1; n <= 10; ++n)
        CHECK(counts[static_cast<size_t>(n)] == 0);
}

TEST_CASE("empty-language automaton counts strict partitions")
{
    AvoidanceRule rule{2, {}, {}};
    Dfa dfa = determinize_minimize(build_avoidance_nfa(rule));
    CHECK(dfa.states() == 1);
    CHECK(!dfa.accepting[0]);

    BivariateSeries f = weighted_count(dfa, 15);
    // partitions with all multiplicities < 2: distinct parts
    BivariateSeries expect(15);
    for (int n = 0; n <= 15; ++n)
        for (const auto& p : enumerate_partitions(n)) {
            bool distinct = true;
            for (size_t i = 0; i + 1 < p.size(); ++i)
                distinct = distinct && p[i] != p[i + 1];
            if (distinct)
                expect.add_term(static_cast<int>(p.size()), n, 1);
        }
    CHECK(f == expect);
}

TEST_CASE("the 11-state automaton of the third mod-16 family")
{
    Dfa built = avoidance_dfa(l_family_rule(3));
    CHECK(built.states() == 11);
    int acc = 0;
    for (int s = 0; s < built.states(); ++s)
        if (built.accepting[static_cast<size_t>(s)]) {
            ++acc;
            for (int a = 0; a < 3; ++a)
                CHECK(built.delta[static_cast<size_t>(s)][static_cast<size_t>(a)] == s);
        }
    CHECK(acc == 1);

    Dfa ref = reference_l3_dfa();
    CHECK(is_minimal(ref));
    CHECK(dfa_isomorphic(built, ref));
    // canonical BFS relabeling reproduces the table state-for-state
    Dfa canon = canonical_form(built);
    CHECK(canon.delta == ref.delta);
    CHECK(canon.accepting == ref.accepting);

    // dropping the (1,1,1) pattern changes nothing: its saturation is empty
    AvoidanceRule without = l_family_rule(3);
    without.forbidden.erase(without.forbidden.begin());
    CHECK(dfa_isomorphic(avoidance_dfa(without), ref));
}

TEST_CASE("isomorphism is relabeling-invariance")
{
    Dfa ref = reference_l3_dfa();
    // permute the non-start states
    std::vector<int> perm = {0, 5, 6, 3, 4, 1, 2, 8, 7, 10, 9};
    Dfa shuffled;
    shuffled.alphabet = 3;
    shuffled.start = perm[0];
    shuffled.delta.assign(11, std::vector<int>(3));
    shuffled.accepting.assign(11, false);
    for (int s = 0; s < 11; ++s) {
        shuffled.accepting[static_cast<size_t>(perm[static_cast<size_t>(s)])] =
            ref.accepting[static_cast<size_t>(s)];
        for (int a = 0; a < 3; ++a)
            shuffled.delta[static_cast<size_t>(perm[static_cast<size_t>(s)])]
                          [static_cast<size_t>(a)] =
                perm[static_cast<size_t>(ref.delta[static_cast<size_t>(s)][static_cast<size_t>(a)])];
    }
    CHECK(dfa_isomorphic(ref, shuffled));

    Dfa l1 = avoidance_dfa(l_family_rule(1));
    CHECK(!dfa_isomorphic(l1, ref));

    Dfa nonminimal = ref;
    nonminimal.delta.push_back({3, 3, 3});
    nonminimal.accepting.push_back(true);
    CHECK_THROWS_AS(dfa_isomorphic(nonminimal, ref), std::invalid_argument);
}

TEST_CASE("determinization and minimization preserve the language")
{
    std::mt19937 rng(4242);
    for (int a = 1; a <= 3; ++a) {
        AvoidanceRule rule = l_family_rule(a);
        Nfa nfa = build_avoidance_nfa(rule);
        Dfa det = determinize(nfa);
        Dfa min = minimize(det);
        CHECK(minimize(min).states() == min.states());
        std::uniform_int_distribution<int> len(0, 14), letter(0, 2);
        for (int t = 0; t < 1000; ++t) {
            std::vector<int> word(static_cast<size_t>(len(rng)));
            for (auto& w : word)
                w = letter(rng);
            bool expect = nfa.accepts(word);
            CHECK(det.accepts(word) == expect);
            CHECK(min.accepts(word) == expect);
        }
    }
}

TEST_CASE("weighted counting agrees with brute force")
{
    for (int a = 1; a <= 3; ++a) {
        AvoidanceRule rule = l_family_rule(a);
        Dfa dfa = avoidance_dfa(rule);
        CHECK(weighted_count(dfa, 20) == brute_rule_gf(rule, 20));
    }
    // RR presets ride the same pipeline
    AvoidanceRule rr1{2, {{2, 1}}, {}};
    AvoidanceRule rr2{2, {{2, 1}}, {{1}}};
    CHECK(weighted_count(avoidance_dfa(rr1), 20) == brute_rule_gf(rr1, 20));
    CHECK(weighted_count(avoidance_dfa(rr2), 20) == brute_rule_gf(rr2, 20));

    // x = 1 specialization matches the bivariate series
    Dfa l1 = avoidance_dfa(l_family_rule(1));
    auto counts = weighted_count_q(l1, 25);
    BivariateSeries f = weighted_count(l1, 25).at_x_one();
    for (int n = 0; n <= 25; ++n)
        CHECK(Rat(counts[static_cast<size_t>(n)]) == f.coeff(0, n));
    CHECK(counts[6] == 3);
    CHECK(counts[0] == 1);
}

TEST_CASE("dfa json and dot round trip")
{
    Dfa ref = reference_l3_dfa();
    Dfa back = Dfa::from_json(ref.to_json());
    CHECK(back.delta == ref.delta);
    CHECK(back.accepting == ref.accepting);
    CHECK(back.start == ref.start);
    CHECK(ref.to_dot().find("doublecircle") != std::string::npos);
    CHECK(ref.transition_table_csv().find("q3") != std::string::npos);
}
