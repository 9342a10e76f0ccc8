#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "zalg/partitions.hpp"

using namespace zalg;

TEST_CASE("membership predicates")
{
    auto kr1 = ConstraintSet::preset("KR1");
    CHECK(kr1.satisfies({2, 1}));
    CHECK(!kr1.satisfies({1, 1, 1}));
    CHECK(kr1.satisfies({}));
    CHECK(kr1.satisfies({3}));
    CHECK(!kr1.satisfies({2, 2})); // 2+2 = 1 mod 3

    auto l1 = ConstraintSet::preset("L1");
    CHECK(!l1.satisfies({3, 1})); // begins with (1)
    CHECK(l1.satisfies({3}));
    CHECK(!l1.satisfies({2, 2, 2})); // shifted (1,1,1)

    auto rr2 = ConstraintSet::preset("RR2");
    CHECK(rr2.satisfies({5, 3}));
    CHECK(!rr2.satisfies({5, 3, 1}));
    CHECK(!rr2.satisfies({4, 3}));

    auto t = ConstraintSet::parse("T9:1,3,6,8");
    CHECK(t.satisfies({8, 6, 3, 1, 1}));
    CHECK(!t.satisfies({5}));
}

TEST_CASE("begins-with reads the smallest-part tail")
{
    CHECK(begins_with({7, 5, 4, 2, 2}, {5, 4, 2, 2}));
    CHECK(!begins_with({7, 5, 4, 2, 2}, {7, 5}));
    CHECK(begins_with({1}, {1}));
    CHECK(!begins_with({2}, {1}));
    CHECK(matches({5, 4, 2, 2}, {4, 2}));
    CHECK(!matches({5, 4, 2, 2}, {5, 2}));
    CHECK(matches_shifted({7, 5, 5}, {3, 1, 1}));
    CHECK(!matches_shifted({7, 5, 5}, {4, 1, 1}));
}

TEST_CASE("enumeration in canonical order")
{
    auto all3 = enumerate_partitions(3);
    CHECK(all3 == std::vector<Partition>{{3}, {2, 1}, {1, 1, 1}});
    CHECK(enumerate_partitions(0) == std::vector<Partition>{{}});

    auto kr1 = enumerate_set(ConstraintSet::preset("KR1"), 3);
    CHECK(kr1 == std::vector<Partition>{{3}, {2, 1}});

    auto l1 = enumerate_set(ConstraintSet::preset("L1"), 6);
    CHECK(l1 == std::vector<Partition>{{6}, {4, 2}, {3, 3}});

    CHECK(enumerate_set(ConstraintSet::preset("L3"), 0) == std::vector<Partition>{{}});
}

TEST_CASE("saturation")
{
    auto sat = saturate({5, 3, 2}, 3);
    std::set<Partition> got(sat.begin(), sat.end());
    std::set<Partition> expect = {
        {5, 5, 3, 2, 2}, {5, 3, 2, 2},       {5, 5, 3, 2},       {5, 3, 2},
        {5, 5, 3, 2, 2, 1, 1}, {5, 3, 2, 2, 1, 1}, {5, 5, 3, 2, 1, 1}, {5, 3, 2, 1, 1},
        {5, 5, 3, 2, 2, 1}, {5, 3, 2, 2, 1}, {5, 5, 3, 2, 1},    {5, 3, 2, 1}};
    CHECK(got == expect);
    CHECK(sat.size() == 12);

    CHECK(saturate({1}, 3) == std::vector<Partition>{{1, 1}, {1}});
    CHECK(saturate({2}, 2) == std::vector<Partition>{{2, 1}, {2}});
    CHECK(saturate({1, 1, 1}, 3).empty());
    CHECK_THROWS_AS(saturate({}, 3), std::invalid_argument);

    // definition oracle on a sample: exactly the mu with mu_1 = l_1,
    // multiplicities < m, containing l as a window
    for (const auto& mu : saturate({3, 1}, 3)) {
        CHECK(mu.front() == 3);
        CHECK(matches(mu, {3, 1}));
        for (int v = 1; v <= 3; ++v)
            CHECK(multiplicity(mu, v) < 3);
    }
}

TEST_CASE("multiplicity words")
{
    CHECK(encode_multiplicity_word({5, 5, 3, 2, 2}, 3) == std::vector<int>{0, 2, 1, 0, 2});
    CHECK(encode_multiplicity_word({3, 2}, 2) == std::vector<int>{0, 1, 1});
    CHECK(encode_multiplicity_word({}, 3).empty());
    CHECK_THROWS_AS(encode_multiplicity_word({1, 1, 1}, 3), std::domain_error);

    for (int n = 0; n <= 12; ++n)
        for (const auto& p : enumerate_partitions(n))
            if ([&] {
                    for (int x : p)
                        if (multiplicity(p, x) >= 4)
                            return false;
                    return true;
                }())
                CHECK(decode_multiplicity_word(encode_multiplicity_word(p, 4)) == p);
}

TEST_CASE("pt equivalences at unit-test scale")
{
    auto rep = pt_equiv(ConstraintSet::preset("RR1"), ConstraintSet::parse("T5:1,4"), 30);
    CHECK(rep.agree);
    rep = pt_equiv(ConstraintSet::preset("KR2"), ConstraintSet::parse("T9:2,3,6,7"), 25);
    CHECK(rep.agree);
    rep = pt_equiv(ConstraintSet::preset("L2"), ConstraintSet::parse("T2:1"), 25);
    CHECK(rep.agree);
    rep = pt_equiv(ConstraintSet::preset("KR1"), ConstraintSet::preset("KR2"), 25);
    CHECK(!rep.agree);
    CHECK(rep.first_disagreement == 1);
}

TEST_CASE("dp counts agree with brute force")
{
    for (int a = 1; a <= 5; ++a) {
        auto set = ConstraintSet::preset("KR" + std::to_string(a));
        auto brute = count_series(set, 22);
        auto dp = count_series_dp(set, 22);
        CHECK(brute == dp);
    }
    auto t = ConstraintSet::congruence(9, {2, 3, 5, 8});
    CHECK(count_series(t, 22) == count_series_dp(t, 22));
    CHECK_THROWS_AS(count_series_dp(ConstraintSet::preset("L1"), 10), std::invalid_argument);
}

TEST_CASE("constraint file round trip")
{
    AvoidanceRule rule = l_family_rule(2);
    AvoidanceRule back = parse_constraint_text(constraint_to_text(rule));
    CHECK(back.m == rule.m);
    CHECK(back.forbidden == rule.forbidden);
    CHECK(back.prefixes == rule.prefixes);
    CHECK_THROWS_AS(parse_constraint_text("m = 1\nforbidden = []\nprefixes = []"),
                    std::invalid_argument);
    CHECK_THROWS_AS(ConstraintSet::custom(AvoidanceRule{3, {{}}, {}}), std::invalid_argument);
}
