#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <nlohmann/json.hpp>

#include "zalg/qdiff.hpp"

using namespace zalg;

namespace {

PolyXQ xq(int i, int j)
{
    return PolyXQ::monomial(1, i, j);
}

} // namespace

TEST_CASE("polynomial gcd and exact division")
{
    PolyXQ a = (PolyXQ(1) - xq(1, 5)) * (PolyXQ(1) - xq(2, 9));
    PolyXQ b = (PolyXQ(1) - xq(1, 5)) * (PolyXQ(1) + xq(1, 1));
    PolyXQ g = poly_gcd(a, b);
    CHECK(g == PolyXQ(1) - xq(1, 5));
    CHECK(a.divide_exact(g) == PolyXQ(1) - xq(2, 9));
    CHECK_THROWS(a.divide_exact(PolyXQ(1) + xq(1, 1)));

    RatXQ r(a, b);
    CHECK(r.den() == PolyXQ(1) + xq(1, 1));
    RatXQ s = r * RatXQ(b, a);
    CHECK(s == RatXQ(PolyXQ(1)));
    CHECK((r - r).is_zero());
}

TEST_CASE("system extraction from the 11-state automaton")
{
    Dfa dfa = canonical_form(avoidance_dfa(l_family_rule(3)));
    SimultaneousSystem sys = system_from_dfa(dfa);
    CHECK(sys.size() == 10);
    CHECK(sys.state_labels ==
          std::vector<int>{0, 1, 2, 4, 5, 6, 7, 8, 9, 10});
    CHECK(sys.start_index == 0);

    auto entry = [&](int row_state, int col_state) {
        auto pos = [&](int s) {
            for (size_t i = 0; i < sys.state_labels.size(); ++i)
                if (sys.state_labels[i] == s)
                    return static_cast<int>(i);
            return -1;
        };
        return sys.matrix[static_cast<size_t>(pos(row_state))][static_cast<size_t>(pos(col_state))];
    };
    PolyXQ one(1);
    // the displayed coupled system, row by row
    CHECK(entry(0, 1) == one);
    CHECK(entry(0, 2) == xq(1, 1));
    CHECK(entry(0, 0).is_zero());
    CHECK(entry(1, 4) == one);
    CHECK(entry(1, 5) == xq(1, 1));
    CHECK(entry(2, 1) == one);
    CHECK(entry(4, 6) == one);
    CHECK(entry(4, 7) == xq(1, 1));
    CHECK(entry(5, 8) == one);
    CHECK(entry(6, 6) == one);
    CHECK(entry(6, 7) == xq(1, 1));
    CHECK(entry(6, 9) == xq(2, 2));
    CHECK(entry(7, 4) == one);
    CHECK(entry(7, 2) == xq(1, 1));
    CHECK(entry(8, 6) == one);
    CHECK(entry(8, 10) == xq(1, 1));
    CHECK(entry(9, 5) == one);
    CHECK(entry(10, 4) == one);

    // row sums at x = 0 are at least 1: letter 0 always contributes
    for (int r = 0; r < sys.size(); ++r) {
        Int sum = 0;
        for (int c = 0; c < sys.size(); ++c)
            sum += sys.matrix[static_cast<size_t>(r)][static_cast<size_t>(c)].coeff(0, 0);
        CHECK(sum >= 1);
    }
}

TEST_CASE("uncoupling a scalar system is immediate")
{
    SimultaneousSystem sys;
    sys.state_labels = {0};
    sys.start_index = 0;
    sys.matrix = {{PolyXQ(1) + xq(1, 1)}};
    ScalarRecurrence rec = murray_miller(sys);
    CHECK(rec.order() == 1);
    CHECK(rec.p[0] == PolyXQ(1));
    CHECK(rec.p[1] == -(PolyXQ(1) + xq(1, 1)));
}

TEST_CASE("derived recurrences annihilate the counted series")
{
    const int order = 40;
    for (int a = 1; a <= 3; ++a) {
        Dfa dfa = canonical_form(avoidance_dfa(l_family_rule(a)));
        SimultaneousSystem sys = system_from_dfa(dfa);
        ScalarRecurrence rec = murray_miller(sys);
        CHECK(rec.order() == 8);
        BivariateSeries f = weighted_count(dfa, order);
        auto rep = verify_annihilation(rec, f);
        CHECK(rep.zero);
    }
}

TEST_CASE("reference recurrences annihilate and mutations are caught")
{
    const int order = 40;
    for (int a = 1; a <= 3; ++a) {
        Dfa dfa = avoidance_dfa(l_family_rule(a));
        BivariateSeries f = weighted_count(dfa, order);
        ScalarRecurrence rec = reference_recurrence(a);
        CHECK(rec.order() == 8);
        auto rep = verify_annihilation(rec, f);
        CHECK(rep.zero);
    }
    ScalarRecurrence bad = reference_recurrence(1);
    bad.p[0] += xq(0, 1);
    Dfa dfa = avoidance_dfa(l_family_rule(1));
    auto rep = verify_annihilation(bad, weighted_count(dfa, 20));
    CHECK(!rep.zero);
    CHECK(rep.first_nonzero_q <= 6);
}

TEST_CASE("recurrence json round trip and proportionality")
{
    ScalarRecurrence rec = reference_recurrence(2);
    ScalarRecurrence back = ScalarRecurrence::from_json(rec.to_json());
    CHECK(back.p == rec.p);

    ScalarRecurrence scaled = rec;
    for (auto& poly : scaled.p)
        poly = poly * (PolyXQ(1) + xq(1, 2));
    CHECK(proportional(rec, scaled));
    ScalarRecurrence other = reference_recurrence(1);
    CHECK(!proportional(rec, other));
}
