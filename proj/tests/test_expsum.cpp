#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "hyperalg/expsum.hpp"
#include "hyperalg/serialize.hpp"
#include "oracles.hpp"

using namespace hyperalg;

namespace {
ExpSum e_pow(double lambda, cplx coeff = {1, 0}) { return ExpSum::single({lambda, 0}, coeff); }
}  // namespace

TEST_CASE("linear_combine merges and prunes") {
    const ExpSum ez = e_pow(1.0);
    const ExpSum doubled = ExpSum::linear_combine({{{1, 0}, ez}, {{1, 0}, ez}});
    REQUIRE(doubled.size() == 1);
    CHECK(doubled.terms()[0].coeff == cplx(2, 0));

    const ExpSum cancelled = ExpSum::linear_combine({{{1, 0}, ez}, {{-1, 0}, ez}});
    CHECK(cancelled.is_zero());

    // 2(e^z + e^{2z}) + e^{2z} = 2 e^z + 3 e^{2z}, checked against pointwise
    // evaluation on a grid
    const ExpSum f = e_pow(1.0) + e_pow(2.0);
    const ExpSum g = e_pow(2.0);
    const ExpSum combo = ExpSum::linear_combine({{{2, 0}, f}, {{1, 0}, g}});
    REQUIRE(combo.size() == 2);
    for (int i = 0; i < 20; ++i) {
        const cplx z = std::polar(1.5, 2.0 * M_PI * i / 20.0);
        const cplx expect = 2.0 * eval_point(f, z) + eval_point(g, z);
        CHECK(std::abs(eval_point(combo, z) - expect) <= 1e-12 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("mul adds exponents and multiplies coefficients") {
    const ExpSum ez = e_pow(1.0);
    const ExpSum sq = mul(ez, ez);
    REQUIRE(sq.size() == 1);
    CHECK(sq.terms()[0].lambda == cplx(2, 0));

    const ExpSum f = e_pow(1.0, {2, 0}) + e_pow(2.0);
    CHECK(approx_equal(mul(f, ExpSum::one()), f));

    const ExpSum shifted = mul(f, e_pow(-1.0));
    REQUIRE(shifted.size() == 2);
    for (int i = 0; i < 20; ++i) {
        const cplx z = std::polar(1.0, 2.0 * M_PI * i / 20.0);
        const cplx expect = eval_point(f, z) * std::exp(-z);
        CHECK(std::abs(eval_point(shifted, z) - expect) <= 1e-12 * (1.0 + std::abs(expect)));
    }
}

TEST_CASE("pointwise homomorphism under products") {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 20; ++rep) {
        const ExpSum f = oracles::random_expsum(rng, 4, 2.0, 2.0);
        const ExpSum g = oracles::random_expsum(rng, 4, 2.0, 2.0);
        const ExpSum fg = mul(f, g);
        for (int i = 0; i < 100; ++i) {
            const cplx z = oracles::random_complex(rng, 1.4);  // |z| <= 2
            const cplx expect = eval_point(f, z) * eval_point(g, z);
            CHECK(std::abs(eval_point(fg, z) - expect) < 1e-9 * (1.0 + std::abs(expect)));
        }
    }
}

TEST_CASE("monomial_power") {
    const std::vector<ExpSum> pair = {e_pow(1.0), e_pow(2.0)};
    const ExpSum prod = monomial_power(pair, {1, 1});
    REQUIRE(prod.size() == 1);
    CHECK(prod.terms()[0].lambda == cplx(3, 0));

    CHECK(approx_equal(monomial_power(pair, {0, 0}), ExpSum::one()));

    // (e^z + 1)^2 = e^{2z} + 2 e^z + 1
    const std::vector<ExpSum> single = {e_pow(1.0) + ExpSum::one()};
    const ExpSum sq = monomial_power(single, {2});
    REQUIRE(sq.size() == 3);
    CHECK(std::abs(eval_point(sq, {0, 0}) - cplx(4, 0)) < 1e-12);
    CHECK(sq.terms()[1].coeff == cplx(2, 0));

    CHECK_THROWS_AS(monomial_power(pair, {1}), std::invalid_argument);
}

TEST_CASE("apply_operator eigen action") {
    const Symbol id = Symbol::identity();
    const ExpSum d3 = apply_operator(id, e_pow(2.0), 3);
    REQUIRE(d3.size() == 1);
    CHECK(d3.terms()[0].coeff == cpow_int({2, 0}, 3));

    // translation by 1: e^{D}, so e^{lambda z} -> e^{lambda} e^{lambda z}
    const Symbol tau = Symbol::exponential({1, 0});
    const cplx lambda(0.3, 0.8);
    const ExpSum t = apply_operator(tau, ExpSum::single(lambda, {1, 0}), 1);
    REQUIRE(t.size() == 1);
    CHECK(std::abs(t.terms()[0].coeff - std::exp(lambda)) < 1e-14);

    // Phi(z) = z^2 + z kills e^{-z} since Phi(-1) = 0
    const Symbol quad = Symbol::polynomial({{0, 0}, {1, 0}, {1, 0}});
    const ExpSum f = e_pow(1.0, {3, 0}) + e_pow(-1.0);
    const ExpSum out = apply_operator(quad, f, 2);
    REQUIRE(out.size() == 1);
    CHECK(std::abs(out.terms()[0].coeff - cplx(12, 0)) < 1e-12);

    // ... and agrees with the truncated-Taylor oracle
    const auto oracle = oracles::taylor_apply_operator({{0, 0}, {1, 0}, {1, 0}},
                                                       oracles::taylor_of_expsum(f, 60), 2);
    const auto got = taylor_truncate(out, 30);
    for (std::size_t m = 0; m <= 30; ++m)
        CHECK(std::abs(got[m] - oracle[m]) <= 1e-8 * (1.0 + std::abs(oracle[m])));
}

TEST_CASE("eigen identity as data-structure equality") {
    std::mt19937_64 rng(29);
    for (int i = 0; i < 200; ++i) {
        const Symbol phi = oracles::random_poly_symbol(rng, 3);
        const cplx lambda = oracles::random_complex(rng, 2.0);
        const unsigned n = 1 + static_cast<unsigned>(rng() % 8);
        const ExpSum in = ExpSum::single(lambda, {1, 0});
        const ExpSum out = apply_operator(phi, in, n);
        const cplx factor = cpow_int(phi.eval(lambda), n);
        if (std::abs(factor) <= 1e-300) {
            CHECK(out.is_zero());
        } else {
            REQUIRE(out.size() == 1);
            CHECK(out.terms()[0].lambda == lambda);
            CHECK(out.terms()[0].coeff == factor);
        }
    }
}

TEST_CASE("translations are multiplicative at the data level") {
    std::mt19937_64 rng(31);
    const Symbol tau = Symbol::exponential({0.5, 0.25});
    for (int i = 0; i < 50; ++i) {
        const ExpSum f = oracles::random_expsum(rng, 3, 1.5, 1.0);
        const ExpSum g = oracles::random_expsum(rng, 3, 1.5, 1.0);
        const ExpSum lhs = apply_operator(tau, mul(f, g), 1);
        const ExpSum rhs = mul(apply_operator(tau, f, 1), apply_operator(tau, g, 1));
        CHECK(approx_equal(lhs, rhs, 1e-11));
    }
}

TEST_CASE("apply_polynomial") {
    const RationalPoly t1 = RationalPoly::variable(1, 0);
    const std::vector<ExpSum> fe = {e_pow(1.0)};
    CHECK(approx_equal(apply_polynomial(t1 * t1, fe), e_pow(2.0)));

    const RationalPoly t1_2 = RationalPoly::variable(2, 0);
    const RationalPoly t2_2 = RationalPoly::variable(2, 1);
    std::mt19937_64 rng(5);
    const ExpSum g = oracles::random_expsum(rng, 3, 1.0, 1.0);
    CHECK(apply_polynomial(t1_2 - t2_2, std::vector<ExpSum>{g, g}).is_zero());

    // t1 t2 + t1 on (e^z, e^{-z}) = 1 + e^z
    const ExpSum out =
        apply_polynomial(t1_2 * t2_2 + t1_2, std::vector<ExpSum>{e_pow(1.0), e_pow(-1.0)});
    REQUIRE(out.size() == 2);
    CHECK(out.terms()[0].lambda == cplx(0, 0));
    CHECK(out.terms()[1].lambda == cplx(1, 0));

    const RationalPoly with_const = t1 + RationalPoly::constant(1, Rational(1));
    CHECK_THROWS_AS(apply_polynomial(with_const, fe), std::invalid_argument);
    CHECK_NOTHROW(apply_polynomial(with_const, fe, /*require_nonunital=*/false));
}

TEST_CASE("eval_point") {
    CHECK(std::abs(eval_point(e_pow(1.0), {0, 0}) - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(eval_point(ExpSum::single({0, 0}, {2, 0}), {17.5, -3}) - cplx(2, 0)) < 1e-15);
    const ExpSum f = e_pow(1.0) - e_pow(-1.0);
    CHECK(std::abs(eval_point(f, {std::log(2.0), 0}) - cplx(1.5, 0)) < 1e-14);
}

TEST_CASE("sup_distance on polar grids") {
    const ExpSum f = e_pow(1.0) + e_pow(2.0, {0, 1});
    CHECK(sup_distance(f, f, 2.0) == 0.0);

    const ExpSum offset = f + ExpSum::one();
    CHECK(std::abs(sup_distance(f, offset, 1.5) - 1.0) < 1e-12);

    // max of |e^z| on |z| <= 1 is e, attained at z = 1 (grid hits theta = 0)
    CHECK(std::abs(sup_distance(e_pow(1.0), ExpSum{}, 1.0) - std::exp(1.0)) < 1e-12);
}

TEST_CASE("taylor_truncate") {
    const auto c1 = taylor_truncate(e_pow(1.0), 2);
    CHECK(std::abs(c1[0] - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(c1[1] - cplx(1, 0)) < 1e-15);
    CHECK(std::abs(c1[2] - cplx(0.5, 0)) < 1e-15);

    const auto c2 = taylor_truncate(ExpSum::one(), 2);
    CHECK(c2[1] == cplx(0, 0));
    CHECK(c2[2] == cplx(0, 0));

    const auto c3 = taylor_truncate(e_pow(3.0, {2, 0}), 1);
    CHECK(std::abs(c3[0] - cplx(2, 0)) < 1e-15);
    CHECK(std::abs(c3[1] - cplx(6, 0)) < 1e-15);
}

TEST_CASE("expsum JSON round trip is canonical") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 25; ++i) {
        const ExpSum f = oracles::random_expsum(rng, 5, 2.0, 3.0);
        const ExpSum back = expsum_from_json(to_json(f));
        REQUIRE(back.size() == f.size());
        for (std::size_t t = 0; t < f.size(); ++t) {
            CHECK(back.terms()[t].lambda == f.terms()[t].lambda);
            CHECK(back.terms()[t].coeff == f.terms()[t].coeff);
        }
    }
}
