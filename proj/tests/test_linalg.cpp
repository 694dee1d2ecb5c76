#include "doctest.h"
#include "jordanlab/linalg.hpp"

using namespace jordanlab;

TEST_CASE("canonical span over fields and dual numbers") {
    auto F2 = Ring::prime_field(2);
    auto m = Matrix::from_ints(F2, 2, 2, {1, 0, 1, 1});
    CHECK(canonical_span(m) == Matrix::identity(F2, 2));
    auto T = Ring::parse("Weil:Q[e^2]");
    auto e = T->generator("e");
    Matrix v = Matrix::column({T->one() + e, e});
    Matrix c = canonical_span(v);
    CHECK(c(0, 0).is_one());
    CHECK(c(1, 0) == e);
    // span equality oracle: c = v * (1+e)^-1
    CHECK(c == (T->one() + e).inv() * v);
    CHECK_THROWS_AS(canonical_span(Matrix::column({e, T->zero()})), NotSummand);
    CHECK_THROWS_AS(canonical_span(Matrix::from_ints(Ring::modular(6), 2, 1, {1, 0})), UnsupportedRing);
}

TEST_CASE("canonical span is invariant under column operations") {
    auto F3 = Ring::prime_field(3);
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        Matrix m(F3, 4, 2);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 2; ++j) m(i, j) = F3->random(rng);
        Matrix u(F3, 2, 2);
        do {
            for (std::size_t i = 0; i < 2; ++i)
                for (std::size_t j = 0; j < 2; ++j) u(i, j) = F3->random(rng);
        } while (!is_invertible(u));
        auto a = canonical_span(m);
        CHECK(canonical_span(m * u) == a);
        CHECK(canonical_span(a) == a);
    }
}

TEST_CASE("integer spans and normal forms") {
    auto Z = Ring::integers();
    CHECK_THROWS_AS(canonical_span(Matrix::from_ints(Z, 2, 1, {2, 4})), NotSummand);
    auto b = canonical_span(Matrix::from_ints(Z, 2, 1, {-3, 2}));
    CHECK(b.cols() == 1);
    auto hr = hermite_rows(Matrix::from_ints(Z, 2, 2, {4, 6, 2, 4}));
    CHECK(hr.U * Matrix::from_ints(Z, 2, 2, {4, 6, 2, 4}) == hr.H);
    auto d = smith_divisors(Matrix::from_ints(Z, 2, 2, {4, 6, 2, 4}));
    REQUIRE(d.size() == 2);
    CHECK(d[0] == 2);
    CHECK(d[1] == 2);
    // transversality over Z: unimodular concatenation
    auto x = canonical_span(Matrix::from_ints(Z, 2, 1, {1, 1}));
    auto a = canonical_span(Matrix::from_ints(Z, 2, 1, {0, 1}));
    auto a2 = canonical_span(Matrix::from_ints(Z, 2, 1, {1, -1}));
    CHECK(is_invertible(Matrix::hcat(x, a)));
    CHECK_FALSE(is_invertible(Matrix::hcat(x, a2)));
    CHECK(invert_matrix(Matrix::from_ints(Z, 2, 2, {1, 1, 0, 1})) == Matrix::from_ints(Z, 2, 2, {1, -1, 0, 1}));
    auto A = Matrix::from_ints(Z, 2, 2, {2, 0, 0, 3});
    CHECK(solve(A, Matrix::from_ints(Z, 2, 1, {4, 9})) == Matrix::from_ints(Z, 2, 1, {2, 3}));
    CHECK_THROWS_AS(solve(A, Matrix::from_ints(Z, 2, 1, {1, 0})), NoSolution);
}

TEST_CASE("solve and invert") {
    auto F3 = Ring::prime_field(3);
    auto A = Matrix::from_ints(F3, 2, 2, {1, 2, 0, 1});
    auto x = solve(A, Matrix::from_ints(F3, 2, 1, {0, 1}));
    CHECK(x == Matrix::from_ints(F3, 2, 1, {1, 1}));
    auto T = Ring::parse("Weil:Q[e^2]");
    auto e = T->generator("e");
    Matrix a1(T, 1, 1);
    a1(0, 0) = T->one() + e;
    CHECK(solve(a1, Matrix::identity(T, 1))(0, 0) == T->one() - e);
    auto Q = Ring::rationals();
    auto swap = Matrix::from_ints(Q, 2, 2, {0, 1, 1, 0});
    CHECK(invert_matrix(swap) == swap);
    Matrix N = Matrix::from_ints(T, 2, 2, {0, 1, 0, 0});
    CHECK(invert_matrix(Matrix::identity(T, 2) + e * N) == Matrix::identity(T, 2) - e * N);
    // singular base part
    Matrix s(T, 1, 1);
    s(0, 0) = e;
    CHECK_FALSE(try_invert(s).has_value());
    // solving with a non-unit coefficient falls back to the K-linear expansion
    Matrix rhs(T, 1, 1);
    rhs(0, 0) = e;
    auto sol = solve(s, rhs);
    CHECK(s * sol == rhs);
    rhs(0, 0) = T->one();
    CHECK_THROWS_AS(solve(s, rhs), NoSolution);
}

TEST_CASE("determinant and parallel product agree with serial") {
    auto Q = Ring::rationals();
    Rng rng(9);
    Matrix a(Q, 5, 5), b(Q, 5, 5);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            a(i, j) = Q->random(rng);
            b(i, j) = Q->random(rng);
        }
    CHECK(multiply_parallel(a, b) == multiply_serial(a, b));
    CHECK(det(a * b) == det(a) * det(b));
    auto inv = try_invert(a);
    if (inv) CHECK(*inv * a == Matrix::identity(Q, 5));
}
