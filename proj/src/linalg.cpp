#include "jordanlab/linalg.hpp"

#include <algorithm>

namespace jordanlab {

namespace {

void same_ring(const Matrix& a, const Matrix& b, const char* what) {
    if (a.ring() != b.ring())
        throw StructuralError(std::string(what) + ": descriptor mismatch " + a.ring()->text() + " vs " +
                              b.ring()->text());
}

void require_linalg_ring(RingRef r) {
    if (r->kind() == RingKind::ModularIntegers && !is_prime(r->modulus()))
        throw UnsupportedRing("linear algebra over " + r->text() + " (not a field)");
}

std::vector<std::vector<BigInt>> to_big(const Matrix& a) {
    std::vector<std::vector<BigInt>> m(a.rows(), std::vector<BigInt>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m[i][j] = std::get<BigInt>(a(i, j).payload());
    return m;
}

Matrix from_big(const std::vector<std::vector<BigInt>>& m, std::size_t cols) {
    auto Z = Ring::integers();
    Matrix out(Z, m.size(), cols);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < cols; ++j) out(i, j) = Z->from_bigint(m[i][j]);
    return out;
}

// Gauss-Jordan on the rows of m using unit pivots in the first `ncols` columns.
// Returns the pivot column of each pivot row; `stuck` is set when some column
// below the current row contains nonzero non-units and no unit.
std::vector<std::size_t> unit_rref(Matrix& m, std::size_t ncols, bool& stuck) {
    stuck = false;
    std::vector<std::size_t> piv;
    std::size_t r = 0;
    for (std::size_t c = 0; c < ncols && r < m.rows(); ++c) {
        std::size_t p = m.rows();
        bool nonzero = false;
        for (std::size_t i = r; i < m.rows(); ++i) {
            if (m(i, c).is_zero()) continue;
            nonzero = true;
            if (m(i, c).is_unit()) {
                p = i;
                break;
            }
        }
        if (p == m.rows()) {
            if (nonzero) stuck = true;
            continue;
        }
        if (p != r)
            for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(p, j), m(r, j));
        Element inv = m(r, c).inv();
        for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = m(r, j) * inv;
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == r || m(i, c).is_zero()) continue;
            Element f = m(i, c);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = m(i, j) - f * m(r, j);
        }
        piv.push_back(c);
        ++r;
    }
    return piv;
}

// Multiplication-by-a matrix of a Weil element over its base field, in the
// ring's monomial basis.
Matrix weil_mult_matrix(const Element& a) {
    RingRef R = a.ring();
    RingRef K = R->base();
    const auto& monos = R->weil_monomials();
    std::size_t d = monos.size();
    Matrix out(K, d, d);
    for (std::size_t j = 0; j < d; ++j) {
        Element basis = R->zero();
        Element::Sparse t{{monos[j], K->one()}};
        basis = Element(R, t);
        Element prod = a * basis;
        for (std::size_t i = 0; i < d; ++i) out(i, j) = R->coefficient(prod, monos[i]);
    }
    return out;
}

Matrix weil_flatten(const Matrix& a) {
    RingRef R = a.ring();
    std::size_t d = R->weil_monomials().size();
    Matrix out(R->base(), a.rows() * d, a.cols() * d);
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out.set_block(i * d, j * d, weil_mult_matrix(a(i, j)));
    return out;
}

Matrix weil_flatten_vec(const Matrix& b) {
    RingRef R = b.ring();
    const auto& monos = R->weil_monomials();
    std::size_t d = monos.size();
    Matrix out(R->base(), b.rows() * d, b.cols());
    for (std::size_t i = 0; i < b.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j)
            for (std::size_t k = 0; k < d; ++k) out(i * d + k, j) = R->coefficient(b(i, j), monos[k]);
    return out;
}

Matrix weil_fold_vec(RingRef R, const Matrix& v) {
    const auto& monos = R->weil_monomials();
    std::size_t d = monos.size();
    Matrix out(R, v.rows() / d, v.cols());
    for (std::size_t i = 0; i < out.rows(); ++i)
        for (std::size_t j = 0; j < out.cols(); ++j) {
            Element::Sparse t;
            for (std::size_t k = 0; k < d; ++k)
                if (!v(i * d + k, j).is_zero()) t.push_back({monos[k], v(i * d + k, j)});
            Element e = R->zero();
            for (auto& term : t) e = e + Element(R, Element::Sparse{term});
            out(i, j) = e;
        }
    return out;
}

Matrix solve_unit(const Matrix& a, const Matrix& b, bool& stuck) {
    Matrix aug = Matrix::hcat(a, b);
    auto piv = unit_rref(aug, a.cols(), stuck);
    if (stuck) return {};
    for (std::size_t i = piv.size(); i < aug.rows(); ++i)
        for (std::size_t j = a.cols(); j < aug.cols(); ++j)
            if (!aug(i, j).is_zero()) throw NoSolution("inconsistent linear system");
    Matrix x(a.ring(), a.cols(), b.cols());
    for (std::size_t k = 0; k < piv.size(); ++k)
        for (std::size_t j = 0; j < b.cols(); ++j) x(piv[k], j) = aug(k, a.cols() + j);
    return x;
}

BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

}  // namespace

// ---------------------------------------------------------------- Matrix

Matrix::Matrix(RingRef r, std::size_t rows, std::size_t cols)
    : ring_(r), rows_(rows), cols_(cols), e_(rows * cols, r->zero()) {}

Matrix Matrix::identity(RingRef r, std::size_t n) {
    Matrix m(r, n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = r->one();
    return m;
}

Matrix Matrix::from_ints(RingRef r, std::size_t rows, std::size_t cols, const std::vector<long long>& v) {
    if (v.size() != rows * cols) throw StructuralError("from_ints: wrong entry count");
    Matrix m(r, rows, cols);
    for (std::size_t k = 0; k < v.size(); ++k) m.e_[k] = r->from_int(v[k]);
    return m;
}

Matrix Matrix::from_strings(RingRef r, std::size_t rows, std::size_t cols, const std::vector<std::string>& v) {
    if (v.size() != rows * cols) throw StructuralError("from_strings: wrong entry count");
    Matrix m(r, rows, cols);
    for (std::size_t k = 0; k < v.size(); ++k) m.e_[k] = r->parse_element(v[k]);
    return m;
}

Matrix Matrix::column(const std::vector<Element>& v) {
    if (v.empty()) throw StructuralError("empty column");
    Matrix m(v[0].ring(), v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

Matrix Matrix::transpose() const {
    Matrix t(ring_, cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_) throw StructuralError("block out of range");
    Matrix b(ring_, nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
        for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
    return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
    if (r0 + b.rows_ > rows_ || c0 + b.cols_ > cols_) throw StructuralError("set_block out of range");
    for (std::size_t i = 0; i < b.rows_; ++i)
        for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::hcat(const Matrix& a, const Matrix& b) {
    same_ring(a, b, "hcat");
    if (a.rows_ != b.rows_) throw StructuralError("hcat: row mismatch");
    Matrix m(a.ring_, a.rows_, a.cols_ + b.cols_);
    m.set_block(0, 0, a);
    m.set_block(0, a.cols_, b);
    return m;
}

Matrix Matrix::vcat(const Matrix& a, const Matrix& b) {
    same_ring(a, b, "vcat");
    if (a.cols_ != b.cols_) throw StructuralError("vcat: column mismatch");
    Matrix m(a.ring_, a.rows_ + b.rows_, a.cols_);
    m.set_block(0, 0, a);
    m.set_block(a.rows_, 0, b);
    return m;
}

bool Matrix::is_zero() const {
    return std::all_of(e_.begin(), e_.end(), [](const Element& x) { return x.is_zero(); });
}

bool Matrix::is_identity() const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (i == j ? !(*this)(i, j).is_one() : !(*this)(i, j).is_zero()) return false;
    return true;
}

Matrix Matrix::map(RingRef target, const std::function<Element(const Element&)>& f) const {
    Matrix m(target, rows_, cols_);
    for (std::size_t k = 0; k < e_.size(); ++k) m.e_[k] = f(e_[k]);
    return m;
}

Matrix Matrix::embed(RingRef target) const {
    if (target == ring_) return *this;
    return map(target, [&](const Element& x) { return target->embed(x); });
}

std::string Matrix::str() const {
    std::string s = "[";
    for (std::size_t i = 0; i < rows_; ++i) {
        s += i ? ",[" : "[";
        for (std::size_t j = 0; j < cols_; ++j) s += (j ? "," : "") + (*this)(i, j).str();
        s += "]";
    }
    return s + "]";
}

Matrix operator+(const Matrix& a, const Matrix& b) {
    same_ring(a, b, "add");
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw StructuralError("add: shape mismatch");
    Matrix m = a;
    for (std::size_t k = 0; k < m.e_.size(); ++k) m.e_[k] = a.e_[k] + b.e_[k];
    return m;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
    same_ring(a, b, "sub");
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw StructuralError("sub: shape mismatch");
    Matrix m = a;
    for (std::size_t k = 0; k < m.e_.size(); ++k) m.e_[k] = a.e_[k] - b.e_[k];
    return m;
}

Matrix operator-(const Matrix& a) {
    Matrix m = a;
    for (auto& x : m.e_) x = -x;
    return m;
}

Matrix operator*(const Element& s, const Matrix& a) {
    Matrix m = a;
    for (auto& x : m.e_) x = s * x;
    return m;
}

Matrix operator*(const Matrix& a, const Matrix& b) { return multiply_serial(a, b); }

bool operator==(const Matrix& a, const Matrix& b) {
    if (a.ring_ != b.ring_ || a.rows_ != b.rows_ || a.cols_ != b.cols_) return false;
    for (std::size_t k = 0; k < a.e_.size(); ++k)
        if (a.e_[k] != b.e_[k]) return false;
    return true;
}

Matrix multiply_serial(const Matrix& a, const Matrix& b) {
    same_ring(a, b, "mul");
    if (a.cols() != b.rows()) throw StructuralError("mul: shape mismatch");
    Matrix m(a.ring(), a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(i, k).is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) m(i, j) += a(i, k) * b(k, j);
        }
    return m;
}

Matrix multiply_parallel(const Matrix& a, const Matrix& b) {
    same_ring(a, b, "mul");
    if (a.cols() != b.rows()) throw StructuralError("mul: shape mismatch");
    Matrix m(a.ring(), a.rows(), b.cols());
    const long n = long(a.rows());
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (a(std::size_t(i), k).is_zero()) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) m(std::size_t(i), j) += a(std::size_t(i), k) * b(k, j);
        }
    return m;
}

// ---------------------------------------------------------------- Z normal forms

HermiteResult hermite_rows(const Matrix& a) {
    if (a.ring()->kind() != RingKind::Integers) throw UnsupportedRing("Hermite normal form needs Z");
    auto H = to_big(a);
    std::size_t m = a.rows(), n = a.cols();
    std::vector<std::vector<BigInt>> U(m, std::vector<BigInt>(m, 0));
    for (std::size_t i = 0; i < m; ++i) U[i][i] = 1;
    auto combine = [&](std::vector<std::vector<BigInt>>& M, std::size_t r, std::size_t i, const BigInt& s,
                       const BigInt& t, const BigInt& u, const BigInt& v) {
        for (std::size_t j = 0; j < M[r].size(); ++j) {
            BigInt x = M[r][j], y = M[i][j];
            M[r][j] = s * x + t * y;
            M[i][j] = u * x + v * y;
        }
    };
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        for (std::size_t i = r + 1; i < m; ++i) {
            if (H[i][c] == 0) continue;
            BigInt x = H[r][c], y = H[i][c], g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t());
            BigInt u = -y / g, v = x / g;
            combine(H, r, i, s, t, u, v);
            combine(U, r, i, s, t, u, v);
        }
        if (H[r][c] == 0) continue;
        if (H[r][c] < 0) {
            for (auto& x : H[r]) x = -x;
            for (auto& x : U[r]) x = -x;
        }
        for (std::size_t i = 0; i < r; ++i) {
            BigInt q = floor_div(H[i][c], H[r][c]);
            if (q == 0) continue;
            for (std::size_t j = 0; j < n; ++j) H[i][j] -= q * H[r][j];
            for (std::size_t j = 0; j < m; ++j) U[i][j] -= q * U[r][j];
        }
        ++r;
    }
    return {from_big(U, m), from_big(H, n), r};
}

std::vector<BigInt> smith_divisors(const Matrix& a) {
    if (a.ring()->kind() != RingKind::Integers) throw UnsupportedRing("Smith normal form needs Z");
    auto M = to_big(a);
    std::size_t m = a.rows(), n = a.cols();
    std::vector<BigInt> out;
    for (std::size_t t = 0; t < std::min(m, n); ++t) {
        // find the smallest nonzero entry in the remaining block
        bool found = false;
        while (true) {
            std::size_t pi = 0, pj = 0;
            found = false;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j)
                    if (M[i][j] != 0 && (!found || abs(M[i][j]) < abs(M[pi][pj]))) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
            if (!found) break;
            std::swap(M[t], M[pi]);
            for (auto& row : M) std::swap(row[t], row[pj]);
            bool clean = true;
            for (std::size_t i = t + 1; i < m; ++i) {
                BigInt q = floor_div(M[i][t], M[t][t]);
                for (std::size_t j = t; j < n; ++j) M[i][j] -= q * M[t][j];
                if (M[i][t] != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < n; ++j) {
                BigInt q = floor_div(M[t][j], M[t][t]);
                for (std::size_t i = t; i < m; ++i) M[i][j] -= q * M[i][t];
                if (M[t][j] != 0) clean = false;
            }
            if (!clean) continue;
            // divisibility condition
            bool divides_all = true;
            for (std::size_t i = t + 1; i < m && divides_all; ++i)
                for (std::size_t j = t + 1; j < n; ++j)
                    if (M[i][j] % M[t][t] != 0) {
                        for (std::size_t k = t; k < n; ++k) M[t][k] += M[i][k];
                        divides_all = false;
                        break;
                    }
            if (divides_all) break;
        }
        if (!found) break;
        out.push_back(abs(M[t][t]));
    }
    return out;
}

// ---------------------------------------------------------------- spans

Matrix canonical_span(const Matrix& m) {
    RingRef R = m.ring();
    require_linalg_ring(R);
    if (R->kind() == RingKind::Integers) {
        auto hr = hermite_rows(m.transpose());
        if (hr.rank == 0) return Matrix(R, m.rows(), 0);
        Matrix basis = hr.H.block(0, 0, hr.rank, m.rows()).transpose();
        for (auto& d : smith_divisors(basis))
            if (d != 1) throw NotSummand("span has elementary divisor " + d.get_str());
        return basis;
    }
    if (!R->is_local()) throw UnsupportedRing("canonical_span over " + R->text());
    // Column elimination = row elimination on the transpose.
    Matrix t = m.transpose();
    std::vector<std::size_t> pivot_rows;
    std::vector<bool> used(t.rows(), false);
    for (std::size_t c = 0; c < t.cols(); ++c) {
        std::size_t p = t.rows();
        for (std::size_t i = 0; i < t.rows(); ++i)
            if (!used[i] && t(i, c).is_unit()) {
                p = i;
                break;
            }
        if (p == t.rows()) continue;
        used[p] = true;
        Element inv = t(p, c).inv();
        for (std::size_t j = 0; j < t.cols(); ++j) t(p, j) = t(p, j) * inv;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (i == p || t(i, c).is_zero()) continue;
            Element f = t(i, c);
            for (std::size_t j = 0; j < t.cols(); ++j) t(i, j) = t(i, j) - f * t(p, j);
        }
        pivot_rows.push_back(p);
    }
    for (std::size_t i = 0; i < t.rows(); ++i)
        if (!used[i])
            for (std::size_t j = 0; j < t.cols(); ++j)
                if (!t(i, j).is_zero()) throw NotSummand("span is not a free direct summand");
    Matrix out(R, m.rows(), pivot_rows.size());
    for (std::size_t k = 0; k < pivot_rows.size(); ++k)
        for (std::size_t i = 0; i < m.rows(); ++i) out(i, k) = t(pivot_rows[k], i);
    return out;
}

// ---------------------------------------------------------------- inverse, det, solve

std::optional<Matrix> try_invert(const Matrix& a) {
    if (a.rows() != a.cols()) throw StructuralError("invert: non-square matrix");
    RingRef R = a.ring();
    require_linalg_ring(R);
    std::size_t n = a.rows();
    if (R->kind() == RingKind::Integers) {
        auto Q = Ring::rationals();
        auto qi = try_invert(a.embed(Q));
        if (!qi) return std::nullopt;
        Matrix out(R, n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const auto& v = std::get<BigRat>((*qi)(i, j).payload());
                if (v.get_den() != 1) return std::nullopt;
                out(i, j) = R->from_bigint(v.get_num());
            }
        return out;
    }
    Matrix aug = Matrix::hcat(a, Matrix::identity(R, n));
    bool stuck = false;
    auto piv = unit_rref(aug, n, stuck);
    if (piv.size() != n) {
        if (stuck && !R->is_local())
            throw UnsupportedRing("cannot decide invertibility over " + R->text() + " without a unit pivot");
        return std::nullopt;
    }
    return aug.block(0, n, n, n);
}

Matrix invert_matrix(const Matrix& a) {
    auto r = try_invert(a);
    if (!r) throw NotInvertible("matrix is not invertible over " + a.ring()->text());
    return *r;
}

bool is_invertible(const Matrix& a) { return try_invert(a).has_value(); }

namespace {
Element det_laplace(const Matrix& a) {
    std::size_t n = a.rows();
    RingRef R = a.ring();
    if (n == 0) return R->one();
    if (n == 1) return a(0, 0);
    Element d = R->zero();
    for (std::size_t j = 0; j < n; ++j) {
        if (a(0, j).is_zero()) continue;
        Matrix minor(R, n - 1, n - 1);
        for (std::size_t i = 1; i < n; ++i)
            for (std::size_t k = 0, c = 0; k < n; ++k)
                if (k != j) minor(i - 1, c++) = a(i, k);
        Element term = a(0, j) * det_laplace(minor);
        d = (j % 2) ? d - term : d + term;
    }
    return d;
}
}  // namespace

Element det(const Matrix& a) {
    if (a.rows() != a.cols()) throw StructuralError("det: non-square matrix");
    RingRef R = a.ring();
    if (R->kind() == RingKind::Integers) {
        Element q = det(a.embed(Ring::rationals()));
        return R->from_bigint(std::get<BigRat>(q.payload()).get_num());
    }
    if (!R->is_local() || a.rows() <= 3) return det_laplace(a);
    Matrix m = a;
    std::size_t n = m.rows();
    Element d = R->one();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = n;
        for (std::size_t i = c; i < n; ++i)
            if (m(i, c).is_unit()) {
                p = i;
                break;
            }
        if (p == n) return det_laplace(a);
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(c, j));
            d = -d;
        }
        d = d * m(c, c);
        Element inv = m(c, c).inv();
        for (std::size_t i = c + 1; i < n; ++i) {
            if (m(i, c).is_zero()) continue;
            Element f = m(i, c) * inv;
            for (std::size_t j = c; j < n; ++j) m(i, j) = m(i, j) - f * m(c, j);
        }
    }
    return d;
}

Matrix solve(const Matrix& a, const Matrix& b) {
    same_ring(a, b, "solve");
    if (a.rows() != b.rows()) throw StructuralError("solve: row mismatch");
    RingRef R = a.ring();
    require_linalg_ring(R);
    if (R->kind() == RingKind::Integers) {
        // A V = H with V unimodular and H in column echelon form.
        auto hr = hermite_rows(a.transpose());
        Matrix V = hr.U.transpose(), H = hr.H.transpose();
        Matrix y(R, a.cols(), b.cols());
        std::size_t row = 0;
        for (std::size_t k = 0; k < hr.rank; ++k) {
            while (H(row, k).is_zero()) ++row;
            BigInt piv = std::get<BigInt>(H(row, k).payload());
            for (std::size_t j = 0; j < b.cols(); ++j) {
                Element rhs = b(row, j);
                for (std::size_t l = 0; l < k; ++l) rhs = rhs - H(row, l) * y(l, j);
                BigInt v = std::get<BigInt>(rhs.payload());
                if (v % piv != 0) throw NoSolution("no integer solution");
                y(k, j) = R->from_bigint(v / piv);
            }
        }
        if (H * y != b) throw NoSolution("inconsistent integer system");
        return V * y;
    }
    bool stuck = false;
    Matrix x = solve_unit(a, b, stuck);
    if (!stuck) return x;
    if (!R->is_local_weil()) throw UnsupportedRing("solve over " + R->text() + " needs unit pivots");
    Matrix fa = weil_flatten(a), fb = weil_flatten_vec(b);
    Matrix fx = solve_unit(fa, fb, stuck);
    return weil_fold_vec(R, fx);
}

}  // namespace jordanlab
