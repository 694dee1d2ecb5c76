#pragma once

#include "jordanlab/axioms.hpp"
#include "jordanlab/geometry.hpp"
#include "jordanlab/report.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace jordanlab {

struct NotQuasiInvertible : Error {
    using Error::Error;
};

// ---------------------------------------------------------------- scalar extension

struct ExtendedGeometry {
    Geometry base;
    RingRef A = nullptr;  // Weil algebra over base.ring()
    Geometry ext;

    Point lift(const Point& p) const;     // zero section
    Point project(const Point& p) const;  // base part of the canonical basis
};
// Throws UnsupportedRing unless A is a Weil algebra over the geometry's ring.
ExtendedGeometry extend_geometry(const Geometry& g, RingRef A);

// Dual numbers K[e]/(e^2), jets K[d]/(d^{k+1}) and K[e1,e2]/(e1^2,e2^2).
RingRef tangent_ring(RingRef k);
RingRef jet_ring(RingRef k, int order);
RingRef second_tangent_ring(RingRef k);

// Fiber point of TX over p, written in the chart (p, anchor).
struct TangentVector {
    Point p, anchor;
    Matrix v;  // chart coordinate over the base ring
    Point to_point(const ExtendedGeometry& tx) const;
    // Same fiber point read in the chart (p, other).
    TangentVector reanchor(const ExtendedGeometry& tx, const Point& other) const;
};

// ---------------------------------------------------------------- quadratic Jordan pairs

enum class Side { Plus = 0, Minus = 1 };
inline Side other(Side s) { return s == Side::Plus ? Side::Minus : Side::Plus; }

// Q_s(e_i) : V^{-s} -> V^s and the polarizations Q_s(e_i,e_j), i<j, as matrices.
struct QuadraticJordanPair {
    RingRef ring = nullptr;
    std::array<std::size_t, 2> dim{0, 0};
    std::array<std::vector<Matrix>, 2> basis;
    std::array<std::map<std::pair<std::size_t, std::size_t>, Matrix>, 2> polar;
    std::string name;

    std::size_t n(Side s) const { return dim[std::size_t(s)]; }
    QuadraticJordanPair over(RingRef r) const;
    QuadraticJordanPair opposite() const;

    Matrix Q(Side s, const Matrix& x) const;                   // V^{-s} -> V^s
    Matrix Q(Side s, const Matrix& x, const Matrix& z) const;  // polarized
    Matrix D(Side s, const Matrix& x, const Matrix& a) const;  // V^s -> V^s
    Matrix B(Side s, const Matrix& x, const Matrix& a) const;
    bool quasi_invertible(Side s, const Matrix& x, const Matrix& a) const;
    Matrix quasi_inverse(Side s, const Matrix& x, const Matrix& a) const;  // throws NotQuasiInvertible
    // (B(x,a), B(a,x)^{-1}); throws NotQuasiInvertible.
    std::pair<Matrix, Matrix> beta(Side s, const Matrix& x, const Matrix& a) const;

    Matrix zero(Side s) const;
    Matrix unit(Side s, std::size_t i) const;
    Matrix random(Side s, Rng& rng, int height = 2) const;
};

// Pair whose quadratic map is given as a function; values are sampled on basis
// points and sums of two basis points.
QuadraticJordanPair pair_from_function(RingRef r, std::size_t np, std::size_t nm,
                                       const std::function<Matrix(Side, const Matrix&, const Matrix&)>& Q,
                                       const std::string& name);
QuadraticJordanPair scalar_pair(RingRef r);
// Q(x)a = x a x on q x p and p x q matrices, entries row-major.
QuadraticJordanPair matrix_pair(RingRef r, std::size_t p, std::size_t q);
// Negative control with one stored value altered.
QuadraticJordanPair corrupted_pair(const QuadraticJordanPair& p);

json to_json(const QuadraticJordanPair& p);
QuadraticJordanPair pair_from_json(const json& j);

// Coordinates of q x p (resp. p x q) matrices as column vectors, row-major.
Matrix vec(const Matrix& m);
Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols);

// ---------------------------------------------------------------- geometry-backed pairs

struct BasePair {
    Point o, o_prime;
};
// Standard base of a Grassmannian: span(e_1..e_p) and span(e_{p+1}..e_n).
BasePair standard_base(const Geometry& g);

struct GeometricPair {
    Geometry geometry;
    BasePair base;
    Chart chart;
    QuadraticJordanPair pair;

    Point plus_point(const Matrix& x) const;   // V+ coordinate vector -> point
    Point minus_point(const Matrix& a) const;  // V- coordinate vector -> point
    std::optional<Matrix> plus_coord(const Point& y) const;
    std::optional<Matrix> minus_coord(const Point& b) const;
};
// Q read off from dual-number quasi-translations.
GeometricPair extract_pair(const Geometry& g, const BasePair& base);
GeometricPair extract_pair(const Geometry& g);

// ---------------------------------------------------------------- identity suites

struct PairCheckOptions {
    std::string mode = "random";  // random | exhaustive
    std::uint64_t samples = 200;
    std::uint64_t seed = 1;
    std::vector<int> jets{2, 3};
    bool symbolic = false;
    bool parallel = true;
};
CheckReport check_pair_identities(const QuadraticJordanPair& p, const PairCheckOptions& opt = {});
// JP1-JP3 with coordinates replaced by independent polynomial variables over Q.
CheckReport check_pair_symbolic(const QuadraticJordanPair& p);
// Quasi-inverse laws, and the geometric comparisons for a geometry-backed pair.
CheckReport check_quasi_inverse(const GeometricPair& gp, std::uint64_t samples, std::uint64_t seed);

// ---------------------------------------------------------------- TKK algebra

struct TkkElement {
    Matrix v;             // constant part, V+
    Matrix Hp, Hm;        // linear parts on V+ and V-
    Matrix a;             // quadratic part, V-
};
struct GradedLieAlgebra {
    QuadraticJordanPair pair;
    TkkElement euler() const;
    TkkElement constant(const Matrix& v) const;
    TkkElement quadratic(const Matrix& a) const;
    TkkElement bracket(const TkkElement& x, const TkkElement& y) const;
    // Vector field on V+ at x.
    Matrix field(const TkkElement& X, const Matrix& x) const;
    std::size_t dimension() const;  // rank of the span of v, a, [v,a]
};
GradedLieAlgebra tkk_algebra(const QuadraticJordanPair& p);
CheckReport check_tkk(const GradedLieAlgebra& g, std::uint64_t samples, std::uint64_t seed,
                      const GeometricPair* geo = nullptr);

// ---------------------------------------------------------------- inversion formulas

CheckReport formulas_crosscheck(const GeometricPair& gp, std::uint64_t samples, std::uint64_t seed);

// ---------------------------------------------------------------- algebras

struct JordanAlgebra {
    GeometricPair gp;
    Matrix e;  // unit, V+ coordinate
    Matrix U(const Matrix& x) const;  // U_x on V+
    Matrix inverse(const Matrix& y) const;  // U_y^{-1} y
    CheckReport report;
};
JordanAlgebra jordan_algebra_from_triple(const Geometry& g, const Point& o, const Point& o_prime, const Point& e,
                                         std::uint64_t samples = 50, std::uint64_t seed = 1);

struct AssociativeAlgebra {
    GeometricPair gp;
    Matrix e;
    std::vector<Matrix> table;  // product of basis vectors i,j at i*n+j
    Matrix product(const Matrix& u, const Matrix& v) const;
    CheckReport report;
};
AssociativeAlgebra associative_algebra_from_triple(const Geometry& g, const Point& o, const Point& o_prime,
                                                   const Point& e, std::uint64_t samples = 20,
                                                   std::uint64_t seed = 1);

// ---------------------------------------------------------------- triple systems

using PointMap = std::function<Point(const Point&)>;
struct JordanTripleSystem {
    GeometricPair gp;
    Matrix P;  // linear map V+ -> V- induced by the polarity
    QuadraticJordanPair as_pair;  // V+ = V- = V with Q(x)y = Q+(x) P y
    Matrix Q(const Matrix& x) const;
    CheckReport report;
};
PointMap polarity_by_name(const Geometry& g, const std::string& name);  // swap | perp
JordanTripleSystem jts_from_polarity(const Geometry& g, const PointMap& p, const Point& o,
                                     const PairCheckOptions& opt = {});

// ---------------------------------------------------------------- Koecher jets

// Expression over x,y,z,u,v,w (V+) and a,b,c,d (V-) with Q(.)., D(.,.)., B(.,.).,
// qi(.,.), integers, + and -.
struct JordanExpression {
    std::string text;
    static JordanExpression parse(const std::string& s);  // throws ParseError
};
CheckReport koecher_jet_check(const JordanExpression& e, const QuadraticJordanPair& p, int k,
                              std::uint64_t samples = 20, std::uint64_t seed = 1);

// ---------------------------------------------------------------- tangent contracts

CheckReport tangent_contracts(const Geometry& g, std::uint64_t samples, std::uint64_t seed);

}  // namespace jordanlab
