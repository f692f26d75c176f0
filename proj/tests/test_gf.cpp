#include <catch2/catch.hpp>

#include "helpers.hpp"
#include "mrc/gf.hpp"
#include "mrc/prng.hpp"

using namespace mrc;

TEST_CASE("field construction accepts primes and rejects composites", "[gf]") {
    CHECK(Field(2).modulus() == 2);
    CHECK(Field(kDefaultModulus).modulus() == 2147483647ULL);
    CHECK_THROWS_AS(Field(4), InvalidField);
    CHECK_THROWS_AS(Field(1), InvalidField);
    CHECK_THROWS_AS(Field(0), InvalidField);
    CHECK_THROWS_AS(Field(1000000016000000063ULL), InvalidField); // 10^9+7 squared-ish composite
    CHECK(Field(1000000007ULL).modulus() == 1000000007ULL);
}

TEST_CASE("field arithmetic round trips through inverses", "[gf]") {
    Field f(7);
    CHECK(f.mul(3, 5) == 1);
    CHECK(f.inv(3) == 5);
    CHECK(f.add(6, 4) == 3);
    CHECK(f.sub(2, 5) == 4);
    CHECK(f.neg(0) == 0);

    Field big(kDefaultModulus);
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        const uint64_t x = rng.nonzero(big.modulus());
        CHECK(big.mul(x, big.inv(x)) == 1);
    }
    CHECK_THROWS_AS(f.inv(0), Error);
}

TEST_CASE("rank of simple matrices", "[gf]") {
    Field f(7);
    CHECK(FieldMatrix::identity(f, 3).rank() == 3);
    CHECK(FieldMatrix(f, 2, 5).rank() == 0);
    // second row is twice the first
    CHECK(FieldMatrix::from_rows(f, {{1, 2}, {2, 4}}).rank() == 1);
}

TEST_CASE("rank agrees with an elimination using a different pivot order", "[gf]") {
    Field f(kDefaultModulus);
    SplitMix64 rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.below(8));
        FieldMatrix m(f, n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                m(i, j) = rng.below(4) == 0 ? 0 : rng.nonzero(f.modulus());
        CHECK(m.rank() == testutil::rank_alt_pivot(m));
        CHECK(m.rank() == m.transpose().rank());
    }
}

TEST_CASE("solve handles identity, scalar, and contradictory systems", "[gf]") {
    Field f(7);
    CHECK(solve(FieldMatrix::identity(f, 2), {3, 5}) == std::vector<uint64_t>{3, 5});
    // 2x = 3 mod 7 -> x = 5
    CHECK(solve(FieldMatrix::from_rows(f, {{2}}), {3}) == std::vector<uint64_t>{5});
    CHECK_THROWS_AS(solve(FieldMatrix::from_rows(f, {{1}, {1}}), {1, 2}), NoSolution);
    CHECK_THROWS_AS(solve(FieldMatrix::from_rows(f, {{0}}), {1}), Underdetermined);
    CHECK_THROWS_AS(solve(FieldMatrix::from_rows(f, {{1, 2}}), {1}), Underdetermined);
    CHECK_THROWS_AS(solve(FieldMatrix::identity(f, 2), {1}), ShapeError);
}

TEST_CASE("solve round-trips random full-column-rank systems", "[gf]") {
    Field f(kDefaultModulus);
    SplitMix64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int cols = 1 + static_cast<int>(rng.below(6));
        const int rows = cols + static_cast<int>(rng.below(4));
        FieldMatrix a(f, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) a(i, j) = rng.below(f.modulus());
        if (a.rank() < cols) continue;
        std::vector<uint64_t> x(static_cast<size_t>(cols));
        for (auto& v : x) v = rng.below(f.modulus());
        std::vector<uint64_t> y(static_cast<size_t>(rows), 0);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) y[static_cast<size_t>(i)] = f.add(y[static_cast<size_t>(i)], f.mul(a(i, j), x[static_cast<size_t>(j)]));
        CHECK(solve(a, y) == x);
    }
}

TEST_CASE("submatrix restricts order-preserving and bounds-checks", "[gf]") {
    Field f(7);
    FieldMatrix id3 = FieldMatrix::identity(f, 3);

    CHECK(id3.submatrix({0, 1, 2}, {0, 1, 2}) == id3);
    CHECK(id3.submatrix({0, 1}, {}).cols() == 0);
    CHECK(id3.submatrix({0, 1}, {}).rows() == 2);
    // rows {1,2} and cols {2,3} in 1-based terms
    CHECK(id3.submatrix({0, 1}, {1, 2}) == FieldMatrix::from_rows(f, {{0, 0}, {1, 0}}));
    CHECK_THROWS_AS(id3.submatrix({3}, {0}), IndexError);
    CHECK_THROWS_AS(id3.submatrix({0}, {-1}), IndexError);
}

TEST_CASE("nullspace basis annihilates the matrix", "[gf]") {
    Field f(kDefaultModulus);
    SplitMix64 rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const int rows = 1 + static_cast<int>(rng.below(4));
        const int cols = rows + 1 + static_cast<int>(rng.below(4));
        FieldMatrix m(f, rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = rng.below(f.modulus());
        FieldMatrix ns = nullspace_basis(m);
        CHECK(ns.rows() == cols - m.rank());
        FieldMatrix prod = m * ns.transpose();
        for (int i = 0; i < prod.rows(); ++i)
            for (int j = 0; j < prod.cols(); ++j) REQUIRE(prod(i, j) == 0);
        CHECK(ns.rank() == ns.rows());
    }
}

TEST_CASE("kron matches the definitional double loop", "[gf]") {
    Field f(101);
    SplitMix64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        FieldMatrix a(f, 1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)));
        FieldMatrix b(f, 1 + static_cast<int>(rng.below(3)), 1 + static_cast<int>(rng.below(3)));
        for (int i = 0; i < a.rows(); ++i)
            for (int j = 0; j < a.cols(); ++j) a(i, j) = rng.below(f.modulus());
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) b(i, j) = rng.below(f.modulus());
        CHECK(kron(a, b) == testutil::kron_oracle(a, b));
    }
}
