#pragma once

#include "jordanlab/linalg.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace jordanlab {

struct NoChain : Error {
    using Error::Error;
};
struct NotInBigCell : Error {
    using Error::Error;
};

// A direct-summand submodule of K^n stored by its canonical basis.
struct Point {
    Matrix basis;

    std::size_t rank() const { return basis.cols(); }
    std::size_t dim() const { return basis.rows(); }
    RingRef ring() const { return basis.ring(); }
    std::string key() const { return std::to_string(basis.rows()) + "x" + std::to_string(basis.cols()) + basis.str(); }
    friend bool operator==(const Point& a, const Point& b) { return a.basis == b.basis; }
    friend bool operator!=(const Point& a, const Point& b) { return !(a == b); }
};

// Invertible operator on W modulo units.
class ProjMap {
public:
    ProjMap() = default;
    explicit ProjMap(Matrix m);
    static ProjMap identity(RingRef r, std::size_t n);

    const Matrix& matrix() const { return m_; }
    Point operator()(const Point& p) const;
    ProjMap inverse() const;
    ProjMap pow(int e) const;
    bool is_identity() const;

    friend ProjMap operator*(const ProjMap& f, const ProjMap& g) { return ProjMap(f.m_ * g.m_); }
    friend bool operator==(const ProjMap& a, const ProjMap& b) { return a.m_ == b.m_; }
    friend bool operator!=(const ProjMap& a, const ProjMap& b) { return !(a == b); }

private:
    Matrix m_;
};

// Scale the first unit entry to 1; over Z make the first nonzero entry positive.
Matrix normalize_projective(const Matrix& m);

class Geometry {
public:
    enum class Kind { Full, Typed, ProjLine };

    static Geometry parse(std::string_view text);
    static Geometry grassmannian(RingRef r, std::size_t n);
    static Geometry typed(RingRef r, std::size_t p, std::size_t q);
    static Geometry projective_line(RingRef r);

    RingRef ring() const { return ring_; }
    std::size_t dim() const { return n_; }
    Kind kind() const { return kind_; }
    std::size_t p() const { return p_; }
    std::size_t q() const { return q_; }
    std::string text() const;
    bool allows_rank(std::size_t r) const;
    std::vector<std::size_t> ranks() const;

    // Same construction over another ring (scalar extension).
    Geometry over(RingRef a) const;

    Point point(const Matrix& spanning) const;
    // Projective-line helpers: [t:1] and [1:0].
    Point affine(const Element& t) const;
    Point infinity() const;
    // "inf", a ring element (projective line), or "#k" (k-th enumerated point).
    Point parse_point(std::string_view s) const;
    std::string label(const Point& x) const;
    // Affine coordinate t of [t:1] on the projective line, nullopt at infinity.
    std::optional<Element> affine_coordinate(const Point& x) const;

    // All points, finite fields only; deterministic order.
    std::vector<Point> enumerate() const;
    Point random_point(Rng& rng) const;
    Point random_point_of_rank(Rng& rng, std::size_t r) const;

    bool operator==(const Geometry& o) const {
        return ring_ == o.ring_ && n_ == o.n_ && kind_ == o.kind_ && p_ == o.p_ && q_ == o.q_;
    }

private:
    RingRef ring_ = nullptr;
    std::size_t n_ = 0, p_ = 0, q_ = 0;
    Kind kind_ = Kind::Full;
};

bool transversal(const Point& x, const Point& a);
bool in_U(const Point& x, const std::vector<Point>& avoid);

// Projector with image x and kernel a.
Matrix projector(const Point& x, const Point& a);

Matrix j_operator(const Point& x, const Point& a, const Point& z);
ProjMap j_map(const Point& x, const Point& a, const Point& z);
Matrix m_operator(const Point& x, const Point& a, const Point& z, const Point& b);
ProjMap m_map(const Point& x, const Point& a, const Point& z, const Point& b);
Matrix scale_operator(const Element& r, const Point& y, const Point& a);
ProjMap scale_map(const Element& r, const Point& y, const Point& a);
Point scale(const Element& r, const Point& y, const Point& a, const Point& x);

// Image of a point under an operator that need not be invertible.
Point apply_operator(const Matrix& g, const Point& x);

// L_a^{xz}; checks that the two choices of the auxiliary point agree.
ProjMap translation(const Point& a, const Point& x, const Point& z);
// Lambda^{ba}_{yx} = L^{ba}_y L^{yx}_a, mapping (x,a) to (y,b).
ProjMap lambda_map(const Point& x, const Point& a, const Point& y, const Point& b);
// B^{xa}_{yb} = L^{ab}_x L^{xy}_b L^{ba}_y L^{yx}_a.
ProjMap bergman(const Point& x, const Point& a, const Point& y, const Point& b);
ProjMap bergman_via_j(const Point& x, const Point& a, const Point& y, const Point& b);

// Midpoint of x and z in the affine space U_a (2 invertible).
Point midpoint(const Point& x, const Point& a, const Point& z);

struct TripleDecomposition {
    Point t;
    ProjMap h;
    Point t_prime;
};
// g = L_{o'}^{t,o} h L_o^{t',o'} with h fixing o and o'; throws NotInBigCell.
TripleDecomposition triple_decomposition(const ProjMap& g, const Point& o, const Point& o_prime);

struct Chart {
    Point o, o_prime;
    Matrix C, Cinv;
    std::size_t p = 0, q = 0;
};
Chart make_chart(const Point& o, const Point& o_prime);
// y in U_{o'}  <->  X (q x p); b in U_o  <->  A (p x q).
Matrix to_plus(const Chart& c, const Point& y);
Point from_plus(const Chart& c, const Matrix& X);
Matrix to_minus(const Chart& c, const Point& b);
Point from_minus(const Chart& c, const Matrix& A);
// Operator written in the chart basis.
Matrix in_chart(const Chart& c, const Matrix& g);

// Breadth-first chain search over transversal pairs of a finite geometry.
ProjMap transporter(const Geometry& g, const std::pair<Point, Point>& src, const std::pair<Point, Point>& dst);

struct ComponentInfo {
    std::vector<int> component;  // per enumerated point
    int count = 0;
    bool bipartite = false;
    std::vector<int> color;  // 0/1 when bipartite
};
ComponentInfo components(const Geometry& g);

// Two tagged copies of the points with transversality only across copies.
struct Dissociation {
    std::vector<std::pair<int, Point>> points;
    std::vector<std::vector<bool>> transversal;
};
Dissociation dissociate(const Geometry& g);

// Affine-coordinate formulas on the projective line over a field. Each returns
// nullopt when a denominator vanishes.
namespace closed_form {
std::optional<Element> j_inf(const Element& x, const Element& z, const Element& y);
std::optional<Element> j_zero_inf(const Element& a, const Element& y);
std::optional<Element> m_zero_inf(const Element& a, const Element& b, const Element& y);
std::optional<Element> m_xz_inf_a(const Element& x, const Element& z, const Element& a, const Element& y);
std::optional<Element> m_xz_a_inf_at_zero(const Element& x, const Element& a, const Element& z);
std::optional<Element> j_generic(const Element& x, const Element& a, const Element& z, const Element& y);
// Same numerator with +xz in the denominator; violates J(a)=a.
std::optional<Element> j_generic_printed(const Element& x, const Element& a, const Element& z, const Element& y);
}  // namespace closed_form

}  // namespace jordanlab
