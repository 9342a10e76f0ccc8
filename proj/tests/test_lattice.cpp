#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "zalg/lattice.hpp"

using namespace zalg;

namespace {

IVec vec4(std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d)
{
    IVec v(4);
    v << a, b, c, d;
    return v;
}

} // namespace

TEST_CASE("D4 bilinear form on simple roots")
{
    auto cfg = builtin_config("D4-3");
    IVec b1 = simple_root(cfg, 0), b2 = simple_root(cfg, 1), b3 = simple_root(cfg, 2);
    CHECK(bilinear_form(cfg, b1, b1) == 2);
    CHECK(bilinear_form(cfg, b1, b2) == -1);
    CHECK(bilinear_form(cfg, b1, b3) == 0);
    CHECK_THROWS_AS(bilinear_form(cfg, IVec::Zero(3), b1), std::invalid_argument);
}

TEST_CASE("twisted Coxeter map for D4-3")
{
    auto data = build_twisted_coxeter(builtin_config("D4-3"));
    CHECK(data.m == 12);
    CHECK(data.has_minus_id);

    IVec b1 = simple_root(data.cfg, 0);
    CHECK(data.apply_nu(b1) == vec4(1, 1, 1, 0));

    // the displayed root orbit table
    CHECK(data.orbits[0][1] == vec4(1, 1, 1, 0));
    CHECK(data.orbits[0][2] == vec4(1, 1, 1, 1));
    CHECK(data.orbits[0][3] == vec4(1, 2, 1, 1));
    CHECK(data.orbits[0][4] == vec4(0, 1, 1, 1));
    CHECK(data.orbits[0][5] == vec4(0, 1, 0, 1));
    CHECK(data.orbits[1][1] == vec4(-1, -1, 0, 0));
    CHECK(data.orbits[1][2] == vec4(0, 0, -1, 0));
    CHECK(data.orbits[1][3] == vec4(-1, -1, 0, -1));
    CHECK(data.orbits[1][4] == vec4(0, -1, -1, 0));
    CHECK(data.orbits[1][5] == vec4(0, 0, 0, -1));
    for (int j = 0; j < 6; ++j) {
        CHECK(data.orbits[0][static_cast<size_t>(j + 6)] == -data.orbits[0][static_cast<size_t>(j)]);
        CHECK(data.orbits[1][static_cast<size_t>(j + 6)] == -data.orbits[1][static_cast<size_t>(j)]);
    }

    // nu preserves the form and permutes roots
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            IVec x = simple_root(data.cfg, i), y = simple_root(data.cfg, j);
            CHECK(bilinear_form(data.cfg, data.apply_nu(x), data.apply_nu(y)) ==
                  bilinear_form(data.cfg, x, y));
        }
    for (const auto& orbit : data.orbits)
        for (const auto& v : orbit)
            CHECK(is_root(data.cfg, v));
}

TEST_CASE("A1-1 twisted data")
{
    auto data = build_twisted_coxeter(builtin_config("A1-1"));
    CHECK(data.m == 2);
    IVec b1 = simple_root(data.cfg, 0);
    CHECK(data.apply_nu(b1) == -b1);
    CHECK(data.exponents() == std::vector<int>{1});
}

TEST_CASE("exponent patterns match the eigenvalue oracle")
{
    CHECK(build_twisted_coxeter(builtin_config("D4-3")).exponents() ==
          std::vector<int>{1, 5, 7, 11});
    CHECK(build_twisted_coxeter(builtin_config("A4-2")).exponents() ==
          std::vector<int>{1, 3, 7, 9});
    CHECK(build_twisted_coxeter(builtin_config("A2-2")).exponents() == std::vector<int>{1, 5});
    CHECK(build_twisted_coxeter(builtin_config("A4-2")).m == 10);
    CHECK(build_twisted_coxeter(builtin_config("A2-2")).m == 6);
}

TEST_CASE("epsilon values for D4-3")
{
    auto data = build_twisted_coxeter(builtin_config("D4-3"));
    IVec b1 = simple_root(data.cfg, 0);
    CHECK(data.epsilon(data.apply_nu(b1, 4), b1) == Cyclotomic::parse(12, "4 - 8*w^2 - 6*w^3"));
    CHECK(data.epsilon(data.apply_nu(b1, 5), b1) ==
          Cyclotomic::parse(12, "-52 + 104*w^2 + 90*w^3"));
    CHECK(data.epsilon(data.apply_nu(b1, 8), b1) ==
          -Cyclotomic::parse(12, "4 - 8*w^2 - 6*w^3"));
    CHECK(data.epsilon(data.apply_nu(b1, 7), b1) ==
          -Cyclotomic::parse(12, "-52 + 104*w^2 + 90*w^3"));

    // epsilon is a unit on all pairs from the orbit tables
    for (const auto& orbit : data.orbits)
        for (const auto& v : orbit)
            CHECK(!data.epsilon(v, b1).is_zero());
}

TEST_CASE("projections")
{
    auto data = build_twisted_coxeter(builtin_config("D4-3"));
    IVec b1 = simple_root(data.cfg, 0);

    CVec total(4);
    for (int k = 0; k < 4; ++k)
        total(k) = Cyclotomic::zero(12);
    for (int i = 0; i < 12; ++i) {
        CVec p = data.project(b1, i);
        for (int k = 0; k < 4; ++k)
            total(k) += p(k);

        // eigenvector property: nu pr_i = w^i pr_i
        CVec nup(4);
        for (int r = 0; r < 4; ++r) {
            nup(r) = Cyclotomic::zero(12);
            for (int c = 0; c < 4; ++c)
                if (data.nu(r, c) != 0)
                    nup(r) += p(c) * Rat(data.nu(r, c));
        }
        Cyclotomic wi = data.omega(i);
        bool zero = true;
        for (int r = 0; r < 4; ++r) {
            CHECK(nup(r) == wi * p(r));
            if (!p(r).is_zero())
                zero = false;
        }
        bool expected_nonzero = (i == 1 || i == 5 || i == 7 || i == 11);
        CHECK(zero == !expected_nonzero);
    }
    for (int k = 0; k < 4; ++k)
        CHECK(total(k) == Cyclotomic::constant(12, Rat(b1(k))));

    CHECK(data.project(b1, 1) == data.project(b1, 13));
}

TEST_CASE("commutation table for beta1 with itself")
{
    auto data = build_twisted_coxeter(builtin_config("D4-3"));
    IVec b1 = simple_root(data.cfg, 0);
    auto table = root_orbit_sum_check(data, b1, b1);
    CHECK(table.c_minus1 == std::vector<int>{4, 5, 7, 8});
    CHECK(table.c_minus2 == std::vector<int>{6});
    for (const auto& e : table.entries) {
        if (e.p == 4) {
            CHECK(e.as_orbit.rep == 0);
            CHECK(e.as_orbit.power == 2);
        }
        if (e.p == 5) {
            CHECK(e.as_orbit.rep == 1);
            CHECK(e.as_orbit.power == 9);
        }
        if (e.p == 7) {
            CHECK(e.as_orbit.rep == 1);
            CHECK(e.as_orbit.power == 4);
        }
        if (e.p == 8) {
            CHECK(e.as_orbit.rep == 0);
            CHECK(e.as_orbit.power == 10);
        }
    }
}

TEST_CASE("config text round-trip and validation")
{
    for (const auto& name : builtin_config_names()) {
        auto cfg = builtin_config(name);
        auto back = parse_config_text(config_to_text(cfg));
        CHECK(back.cartan == cfg.cartan);
        CHECK(back.sigma == cfg.sigma);
        CHECK(back.representatives == cfg.representatives);
    }
    auto bad = builtin_config("D4-3");
    bad.representatives = {0, 1, 2};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
