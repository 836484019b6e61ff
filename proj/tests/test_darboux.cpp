#include "support.hpp"

#include "qbd/darboux.hpp"
#include "qbd/factorization.hpp"
#include "qbd/jacobi.hpp"

#include <doctest.h>

using namespace qbd;
using namespace testing;

TEST_SUITE("darboux") {

TEST_CASE("scalar lower times upper") {
    const BlockSequence U(1, Band::upper_bidiagonal, [](std::size_t) {
        return LevelBlocks{std::nullopt, s1(0.5), s1(0.5)};
    });
    const BlockSequence L(1, Band::lower_bidiagonal, [](std::size_t n) {
        if (n == 0) return LevelBlocks{std::nullopt, s1(1), std::nullopt};
        return LevelBlocks{s1(0.5), s1(0.5), std::nullopt};
    });
    const DarbouxResult r = darboux_from_ul(U, L, 4);
    CHECK(r.source == DarbouxSource::from_ul);
    CHECK(r.transformed.diag(0)(0, 0) == doctest::Approx(0.5));
    CHECK(r.transformed.super(0)(0, 0) == doctest::Approx(0.5));
    CHECK(r.transformed.sub(1)(0, 0) == doctest::Approx(0.25));
    CHECK(validate_stochastic(r.transformed, 4, 1e-15L).passed);
}

TEST_CASE("UL Darboux transform of the example is stochastic") {
    for (const auto& p : {kP321, kP122}) {
        const ULFactorization f = factorize_ul(jacobi_block_sequence(p), alpha0_paper(p), TauJacobiPaper{p}, 21);
        const DarbouxResult r = darboux_from_ul(f.factors.upper, f.factors.lower, 20);
        CHECK(validate_stochastic(r.transformed, 20, 1e-10L).passed);
        // The explicit factors give the same transform.
        const DarbouxResult e = darboux_from_ul(paper_upper_factor(p), paper_lower_factor(p), 20);
        for (std::size_t n = 0; n < 20; ++n) {
            CHECK(max_diff(r.transformed.diag(n), e.transformed.diag(n)) <= 1e-10);
            CHECK(max_diff(r.transformed.super(n), e.transformed.super(n)) <= 1e-10);
        }
    }
}

TEST_CASE("unit super-diagonal factor shifts the lower factor") {
    const BlockSequence L = paper_lower_factor(kP321);
    const BlockSequence U(2, Band::upper_bidiagonal, [](std::size_t) {
        return LevelBlocks{std::nullopt, Block::Zero(2, 2), Block::Identity(2, 2)};
    });
    const DarbouxResult r = darboux_from_ul(U, L, 6);
    for (std::size_t n = 0; n < 6; ++n) {
        CHECK(max_diff(r.transformed.super(n), L.diag(n)) == 0);
        CHECK(max_diff(r.transformed.diag(n), n == 0 ? Block::Zero(2, 2) : L.sub(n)) == 0);
        if (n > 0) CHECK(r.transformed.sub(n).isZero());
    }
}

TEST_CASE("LU Darboux transform of the example is stochastic") {
    for (const auto& p : {kP321, kP122}) {
        const LUFactorization f = factorize_lu(jacobi_block_sequence(p), TauJacobiPaper{p}, 21);
        const DarbouxResult r = darboux_from_lu(f.factors.upper, f.factors.lower, 20);
        CHECK(r.source == DarbouxSource::from_lu);
        CHECK(validate_stochastic(r.transformed, 20, 1e-10L).passed);
    }
}

TEST_CASE("scalar LU Darboux transform matches brute force") {
    const BlockSequence P = scalar_tridiagonal([](std::size_t n) { return Real(0.4) - Real(0.1) / (n + 2); },
                                               [](std::size_t n) { return n == 0 ? Real(0.6) + Real(0.05) : Real(0.3) + Real(0.1) / (n + 2); },
                                               [](std::size_t) { return Real(0.3); });
    oracle::ScalarChain c;
    for (std::size_t n = 0; n <= 12; ++n) {
        c.a.push_back(P.super(n)(0, 0));
        c.b.push_back(P.diag(n)(0, 0));
        c.c.push_back(n == 0 ? 0 : P.sub(n)(0, 0));
    }
    const oracle::ScalarLU b = oracle::scalar_lu(c, 12);
    const LUFactorization f = factorize_lu(P, TauLowerTriangular{}, 12);
    const DarbouxResult r = darboux_from_lu(f.factors.upper, f.factors.lower, 11);
    for (std::size_t n = 0; n < 11; ++n) {
        CHECK(std::abs(r.transformed.super(n)(0, 0) - b.x[n] * b.s[n + 1]) < 1e-14);
        CHECK(std::abs(r.transformed.diag(n)(0, 0) - (b.x[n] * b.r[n + 1] + b.y[n] * b.s[n])) < 1e-14);
        if (n > 0) CHECK(std::abs(r.transformed.sub(n)(0, 0) - b.y[n] * b.r[n]) < 1e-14);
    }
}

TEST_CASE("zero diagonal upper factor gives a pure-birth transform") {
    const BlockSequence U(2, Band::upper_bidiagonal, [](std::size_t) {
        return LevelBlocks{std::nullopt, Block::Zero(2, 2), m2(0.5, 0.5, 0.25, 0.75)};
    });
    const BlockSequence L = paper_lower_factor(kP122);
    const DarbouxResult r = darboux_from_lu(U, L, 8);
    for (std::size_t n = 1; n < 8; ++n) CHECK(r.transformed.sub(n).isZero());
    CHECK(validate_stochastic(r.transformed, 8, 1e-14L).passed);
}

TEST_CASE("factor bands are checked") {
    const BlockSequence U = paper_upper_factor(kP321);
    const BlockSequence L = paper_lower_factor(kP321);
    CHECK_THROWS_AS(darboux_from_ul(L, U, 3), DimensionError);
    CHECK_THROWS_AS(darboux_from_lu(L, U, 3), DimensionError);
    CHECK_THROWS_AS(darboux_from_ul(jacobi_block_sequence(kP321), L, 3), DimensionError);
    CHECK(to_string(DarbouxSource::from_lu) == "from_lu");
}

TEST_CASE("transforms of random stochastic factors stay stochastic") {
    std::mt19937_64 rng(7001);
    for (int trial = 0; trial < 40; ++trial) {
        const int d = 1 + trial % 3;
        const BlockSequence U = random_bidiagonal(Band::upper_bidiagonal, d, 10, rng);
        const BlockSequence L = random_bidiagonal(Band::lower_bidiagonal, d, 10, rng);
        CHECK(validate_stochastic(darboux_from_ul(U, L, 9).transformed, 9, 1e-14L).passed);
        CHECK(validate_stochastic(darboux_from_lu(U, L, 9).transformed, 9, 1e-14L).passed);
    }
}

}
