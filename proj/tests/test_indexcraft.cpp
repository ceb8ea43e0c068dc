#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "hyperalg/multiindex.hpp"
#include "hyperalg/serialize.hpp"

using namespace hyperalg;

namespace {

bool weights_injective(const std::vector<MultiIndex>& A, const std::vector<Rational>& k) {
    std::set<Rational> seen;
    for (const auto& a : A)
        if (!seen.insert(weight_value(k, a)).second) return false;
    return true;
}

MultiIndex exhaustive_beta(const std::vector<MultiIndex>& A, const std::vector<Rational>& k) {
    std::uint32_t M = 0;
    for (const auto& a : A) M = std::max(M, linf_norm(a));
    std::size_t iA = 0;
    for (std::size_t j = 0;; ++j) {
        bool hit = false;
        for (const auto& a : A) hit |= a[j] == M;
        if (hit) {
            iA = j;
            break;
        }
    }
    const MultiIndex* best = nullptr;
    for (const auto& a : A) {
        if (a[iA] != M) continue;
        if (!best || weight_value(k, a) < weight_value(k, *best)) best = &a;
    }
    return *best;
}

std::vector<MultiIndex> random_index_set(std::mt19937_64& rng) {
    const std::uint32_t N = 2 + static_cast<std::uint32_t>(rng() % 5);       // <= 6
    const std::size_t count = 1 + static_cast<std::size_t>(rng() % 40);     // <= 40
    std::set<MultiIndex> set;
    while (set.size() < count) {
        MultiIndex a(N, 0);
        bool nonzero = false;
        for (auto& v : a) {
            v = static_cast<std::uint32_t>(rng() % 11);  // entries <= 10
            nonzero |= v != 0;
        }
        if (nonzero) set.insert(std::move(a));
    }
    return {set.begin(), set.end()};
}

}  // namespace

TEST_CASE("find_injective_weights on the documented examples") {
    // {(1,0),(0,1)}: k = (1,2) works; any accepted k must separate the values
    const std::vector<MultiIndex> A1 = {{1, 0}, {0, 1}};
    CHECK(weights_injective(A1, {Rational(1), Rational(2)}));
    const auto k1 = find_injective_weights(A1, 99);
    CHECK(weights_injective(A1, k1));

    // {(1,1),(2,0),(0,2)} with k = (1,2): values 3, 2, 4 are distinct
    const std::vector<MultiIndex> A2 = {{1, 1}, {2, 0}, {0, 2}};
    const std::vector<Rational> k12 = {Rational(1), Rational(2)};
    CHECK(weight_value(k12, {1, 1}) == Rational(3));
    CHECK(weight_value(k12, {2, 0}) == Rational(2));
    CHECK(weight_value(k12, {0, 2}) == Rational(4));
    CHECK(weights_injective(A2, k12));

    // {(2,0),(0,2)} with k = (1,1): values collide, so that k is rejected
    const std::vector<MultiIndex> A3 = {{2, 0}, {0, 2}};
    CHECK_FALSE(weights_injective(A3, {Rational(1), Rational(1)}));
    CHECK(weights_injective(A3, find_injective_weights(A3, 7)));
}

TEST_CASE("select_beta on the documented examples") {
    const std::vector<MultiIndex> A = {{2, 0}, {0, 2}, {2, 1}};
    const auto k = find_injective_weights(A, 5);
    const auto sel = select_beta(A, k);
    CHECK(sel.max_linf == 2);
    CHECK(sel.distinguished_coord == 0);
    // candidate set is {(2,0),(2,1)} and (2,0) has the smaller functional value
    CHECK(sel.beta == MultiIndex{2, 0});
    CHECK(sel.max_l1 == 3);

    const std::vector<MultiIndex> single = {{1, 1}};
    const auto sel2 = select_beta(single, find_injective_weights(single, 3));
    CHECK(sel2.beta == MultiIndex{1, 1});
    CHECK(sel2.max_linf == 1);
    CHECK(sel2.distinguished_coord == 0);
    CHECK(sel2.max_l1 == 2);

    const std::vector<MultiIndex> A13 = {{1, 0}, {0, 1}};
    const auto sel3 = select_beta(A13, {Rational(1), Rational(2)});
    CHECK(sel3.max_linf == 1);
    CHECK(sel3.distinguished_coord == 0);
    CHECK(sel3.beta == MultiIndex{1, 0});
}

TEST_CASE("select_beta rejects non-injective weights") {
    const std::vector<MultiIndex> A = {{2, 0}, {0, 2}};
    CHECK_THROWS_AS(select_beta(A, {Rational(1), Rational(1)}), std::invalid_argument);
}

TEST_CASE("random sets: exact injectivity and beta against exhaustive scan") {
    std::mt19937_64 rng(41);
    for (int rep = 0; rep < 300; ++rep) {
        const auto A = random_index_set(rng);
        const auto k = find_injective_weights(A, rng());
        REQUIRE(weights_injective(A, k));
        const auto sel = select_beta(A, k);
        CHECK(sel.beta == exhaustive_beta(A, k));
    }
}

TEST_CASE("beta is invariant under positive scaling of the weights") {
    std::mt19937_64 rng(43);
    for (int rep = 0; rep < 100; ++rep) {
        const auto A = random_index_set(rng);
        auto k = find_injective_weights(A, rng());
        const auto sel = select_beta(A, k);
        const Rational c(3, 7);
        for (auto& w : k) w *= c;
        CHECK(select_beta(A, k).beta == sel.beta);
    }
}

TEST_CASE("make_index_set validates and canonicalizes") {
    CHECK_THROWS_AS(make_index_set({}, 1), std::invalid_argument);
    CHECK_THROWS_AS(make_index_set({{0, 0}}, 1), std::invalid_argument);
    const auto set = make_index_set({{0, 1}, {2, 0}, {0, 1}}, 17);
    CHECK(set.indices.size() == 2);
    CHECK(set.dimension == 2);
    CHECK(set.beta == MultiIndex{2, 0});

    // JSON snapshot carries the derived data
    const json j = to_json(set);
    CHECK(j.at("M_A").get<int>() == 2);
    CHECK(j.at("i_A").get<int>() == 1);  // one-based in artifacts
    CHECK(j.at("d_A").get<int>() == 2);
}
