#pragma once

#include "jordanlab/rings.hpp"

#include <functional>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

namespace jordanlab {

struct NotSummand : Error {
    using Error::Error;
};
struct NoSolution : Error {
    using Error::Error;
};

class Matrix {
public:
    Matrix() = default;
    Matrix(RingRef r, std::size_t rows, std::size_t cols);
    static Matrix identity(RingRef r, std::size_t n);
    static Matrix from_ints(RingRef r, std::size_t rows, std::size_t cols, const std::vector<long long>& v);
    static Matrix from_strings(RingRef r, std::size_t rows, std::size_t cols, const std::vector<std::string>& v);
    static Matrix column(const std::vector<Element>& v);

    RingRef ring() const { return ring_; }
    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return ring_ == nullptr; }

    Element& operator()(std::size_t i, std::size_t j) { return e_[i * cols_ + j]; }
    const Element& operator()(std::size_t i, std::size_t j) const { return e_[i * cols_ + j]; }
    const std::vector<Element>& entries() const { return e_; }

    Matrix transpose() const;
    Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
    Matrix col(std::size_t j) const { return block(0, j, rows_, 1); }
    Matrix row(std::size_t i) const { return block(i, 0, 1, cols_); }
    void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
    static Matrix hcat(const Matrix& a, const Matrix& b);
    static Matrix vcat(const Matrix& a, const Matrix& b);

    bool is_zero() const;
    bool is_identity() const;
    Matrix map(RingRef target, const std::function<Element(const Element&)>& f) const;
    // Entrywise embedding into a ring containing this ring.
    Matrix embed(RingRef target) const;

    std::string str() const;

    friend Matrix operator+(const Matrix& a, const Matrix& b);
    friend Matrix operator-(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Matrix& a, const Matrix& b);
    friend Matrix operator*(const Element& s, const Matrix& a);
    friend Matrix operator-(const Matrix& a);
    friend bool operator==(const Matrix& a, const Matrix& b);
    friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }

private:
    RingRef ring_ = nullptr;
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<Element> e_;
};

// Canonical basis of the column span. Throws NotSummand when the span is not a
// free direct summand, UnsupportedRing on rings without a normal form.
Matrix canonical_span(const Matrix& m);

std::optional<Matrix> try_invert(const Matrix& a);
Matrix invert_matrix(const Matrix& a);  // throws NotInvertible
bool is_invertible(const Matrix& a);
Element det(const Matrix& a);

// One solution of a*x = b; throws NoSolution.
Matrix solve(const Matrix& a, const Matrix& b);

// Integer normal forms. hermite_rows returns (U, H) with U unimodular and
// U*A = H in row Hermite normal form.
struct HermiteResult {
    Matrix U, H;
    std::size_t rank = 0;
};
HermiteResult hermite_rows(const Matrix& a);
std::vector<BigInt> smith_divisors(const Matrix& a);

// Serial reference kernel and OpenMP kernel for the matrix product; used by
// the benchmark and by large compositions.
Matrix multiply_serial(const Matrix& a, const Matrix& b);
Matrix multiply_parallel(const Matrix& a, const Matrix& b);

}  // namespace jordanlab
