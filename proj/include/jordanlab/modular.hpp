#pragma once

#include "jordanlab/axioms.hpp"
#include "jordanlab/geometry.hpp"
#include "jordanlab/report.hpp"

#include <array>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace jordanlab {

// 2x2 integer matrix with determinant +-1.
struct IntMatrix2 {
    long long a = 1, b = 0, c = 0, d = 1;

    long long det() const { return a * d - b * c; }
    friend IntMatrix2 operator*(const IntMatrix2& x, const IntMatrix2& y) {
        return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
    }
    friend bool operator==(const IntMatrix2& x, const IntMatrix2& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    IntMatrix2 inverse() const;  // exact, det must be +-1
    IntMatrix2 negated() const { return {-a, -b, -c, -d}; }
    bool projectively_equal(const IntMatrix2& o) const { return *this == o || *this == o.negated(); }
    std::string str() const;
};

IntMatrix2 generator_matrix(char g);  // S, T, F, I (upper case)

// Word over {S,T,F,I}; lower case letters are inverses.
struct IntegerMatrixWord {
    std::string letters;
    IntMatrix2 matrix() const;
    static IntegerMatrixWord parse(const std::string& s);  // throws ParseError
    // Exact factorization of a GL(2,Z) matrix into S, T and I.
    static IntegerMatrixWord of(const IntMatrix2& m);
};

// Evaluate a word given images of S, T, I (F is evaluated as S^3 I).
ProjMap evaluate_word(const IntegerMatrixWord& w, const ProjMap& S, const ProjMap& T, const ProjMap& I);

struct Triple {
    Point a, b, c;
};
void require_pairwise_transversal(const Triple& t);

struct S3Subgroup {
    std::array<ProjMap, 6> elements;  // id, J^{ab}_c, J^{bc}_a, J^{ac}_b, J^{ab}_c J^{bc}_a, J^{bc}_a J^{ab}_c
    std::array<std::string, 6> names;  // (1) (12) (23) (13) (123) (132)
    CheckReport report;
};
S3Subgroup s3_subgroup(const Geometry& g, const Triple& t);

struct ModularGenerators {
    ProjMap S, T, I;
};
ModularGenerators modular_generators(const Triple& t);
ProjMap modular_hom(const Triple& t, const IntegerMatrixWord& w);
// Presentation relations and the six table rows as point maps.
CheckReport modular_relations(const Geometry& g, const Triple& t);

struct OrbitResult {
    std::vector<Point> orbit;  // closure of the triple under inversions
    bool complete = false;     // closure stabilized before the depth bound
    CheckReport report;
};
// Closure of {a,b,c}, equivariance of the map from the integral projective line
// on points of height <= height, and the two extra fixed-point relations.
OrbitResult orbit_map(const Geometry& g, const Triple& t, int depth = 8, int height = 6);

struct Quadruple {
    Point a, x, b, y;
};
enum class IdempotentKind { None, Idempotent, Strong };
std::string to_string(IdempotentKind k);

struct IdempotentCheck {
    IdempotentKind kind = IdempotentKind::None;
    CheckReport report;
};
IdempotentCheck is_idempotent(const Geometry& g, const Quadruple& q);

struct IdempotentRep {
    ProjMap A, B, J, Z, Zp;
    bool strong = false;
    bool z_trivial_on_orbit = false;
    std::optional<Point> z_moves;  // a point of the geometry moved by Z, if found
    CheckReport report;
};
// Throws DomainError if q is not an idempotent.
IdempotentRep idempotent_rep(const Geometry& g, const Quadruple& q, Rng* rng = nullptr);

struct PeirceExample {
    Geometry geometry;
    Quadruple q;
    std::size_t e = 0, k = 0, h = 0;
    // Block realization diag(1 on E, m on v+u, det(m) on H).
    std::function<ProjMap(const IntMatrix2&)> embed;
};
PeirceExample peirce_example(RingRef r, std::size_t e, std::size_t u, std::size_t v, std::size_t h);
// Generator images of the idempotent compared with the block realization.
CheckReport peirce_consistency(const PeirceExample& p);

struct IdempotentSearch {
    std::uint64_t chains = 0, idempotents = 0, strong = 0;
    std::optional<std::array<int, 4>> non_strong;
};
IdempotentSearch search_idempotents(const JTable& t);

}  // namespace jordanlab
