#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace jordanlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct StructuralError : Error {
    using Error::Error;
};
struct NotInvertible : Error {
    using Error::Error;
};
struct UnsupportedRing : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct DomainError : Error {
    using Error::Error;
};

using BigInt = mpz_class;
using BigRat = mpq_class;
using Rng = std::mt19937_64;

class Ring;
using RingRef = const Ring*;

// Exponent vector over the generators of a Poly or Weil ring.
using Monomial = std::vector<std::uint16_t>;

struct Term;

class Element {
public:
    using Sparse = std::vector<Term>;
    using Payload = std::variant<std::int64_t, BigInt, BigRat, Sparse>;

    Element() = default;
    Element(RingRef r, Payload p) : ring_(r), v_(std::move(p)) {}

    RingRef ring() const { return ring_; }
    const Payload& payload() const { return v_; }

    bool is_zero() const;
    bool is_one() const;
    bool is_unit() const;

    Element inv() const;  // throws NotInvertible
    std::optional<Element> try_inv() const;
    Element pow(unsigned e) const;

    std::string str() const;

    friend Element operator+(const Element& a, const Element& b);
    friend Element operator-(const Element& a, const Element& b);
    friend Element operator*(const Element& a, const Element& b);
    friend Element operator-(const Element& a);
    Element& operator+=(const Element& b) { return *this = *this + b; }
    Element& operator-=(const Element& b) { return *this = *this - b; }
    Element& operator*=(const Element& b) { return *this = *this * b; }
    friend bool operator==(const Element& a, const Element& b);
    friend bool operator!=(const Element& a, const Element& b) { return !(a == b); }

private:
    RingRef ring_ = nullptr;
    Payload v_;
};

struct Term {
    Monomial m;
    Element c;
};

enum class RingKind { Integers, Rationals, PrimeField, ModularIntegers, GaloisField, Polynomial, Weil };

// Interned ring descriptor. Instances live for the whole process, so RingRef
// pointers may be compared for descriptor equality.
class Ring {
public:
    static RingRef integers();
    static RingRef rationals();
    static RingRef prime_field(std::int64_t p);
    static RingRef modular(std::int64_t n);
    static RingRef galois(std::int64_t q);
    static RingRef polynomial(RingRef base, std::vector<std::string> vars);
    // orders[i] is the largest surviving exponent of gens[i].
    static RingRef weil(RingRef base, std::vector<std::string> gens, std::vector<int> orders);
    static RingRef parse(std::string_view text);

    RingKind kind() const { return kind_; }
    const std::string& text() const { return text_; }
    RingRef base() const { return base_; }
    const std::vector<std::string>& gens() const { return gens_; }
    const std::vector<int>& orders() const { return orders_; }
    std::int64_t modulus() const { return mod_; }
    std::int64_t characteristic() const;

    bool is_field() const;
    bool is_finite() const;
    // Weil algebra whose base is a field: a local ring.
    bool is_local_weil() const;
    // Every nonzero non-unit is nilpotent (fields and local Weil rings).
    bool is_local() const { return is_field() || is_local_weil(); }
    std::optional<std::uint64_t> size() const;

    Element zero() const;
    Element one() const;
    Element from_int(long long v) const;
    Element from_bigint(const BigInt& v) const;
    Element generator(std::size_t i) const;
    Element generator(std::string_view name) const;
    // Enumerate all elements of a finite ring in a fixed order.
    Element element_at(std::uint64_t index) const;

    Element add(const Element& a, const Element& b) const;
    Element sub(const Element& a, const Element& b) const;
    Element mul(const Element& a, const Element& b) const;
    Element neg(const Element& a) const;
    std::optional<Element> inverse(const Element& a) const;
    bool is_unit(const Element& a) const;
    bool is_zero(const Element& a) const;

    // Constant coefficient along one level of Poly/Weil; identity otherwise.
    Element base_part(const Element& a) const;
    // Residue in the coefficient field of a local Weil ring.
    Element residue(const Element& a) const;
    // Canonical embedding of an element of any ring on this ring's base chain.
    Element embed(const Element& a) const;
    bool has_subring(RingRef r) const;
    // Coefficient of a Weil/Poly monomial (as an element of base()).
    Element coefficient(const Element& a, const Monomial& m) const;
    // Generator substitution morphism: target must contain this ring's base;
    // images[i] is the image of gens()[i].
    Element substitute(const Element& a, RingRef target, const std::vector<Element>& images) const;
    // Frobenius x -> x^p on prime and Galois fields.
    Element frobenius(const Element& a) const;

    std::string format(const Element& a) const;
    Element parse_element(std::string_view s) const;
    Element random(Rng& rng, int height = 2) const;

    // Monomial key helpers for sparse rings.
    bool truncated(const Monomial& m) const;
    unsigned total_degree_bound() const;  // Weil only: sum of orders
    // Weil only: every surviving monomial, in canonical term order.
    const std::vector<Monomial>& weil_monomials() const { return monos_; }

private:
    Ring() = default;
    static RingRef intern(Ring r);
    Element canonical_sparse(Element::Sparse terms) const;

    RingKind kind_ = RingKind::Integers;
    std::int64_t mod_ = 0;
    int gf_p_ = 0, gf_k_ = 0;
    std::vector<std::uint16_t> gf_mul_, gf_add_, gf_inv_;
    RingRef base_ = nullptr;
    std::vector<std::string> gens_;
    std::vector<int> orders_;
    std::vector<Monomial> monos_;
    std::string text_;
};

// Extend a ring by nilpotent generators. Weil-over-Weil is flattened so that
// extending T(K) by a second generator yields K[e1,e2].
RingRef weil_extend(RingRef base, const std::vector<std::string>& gens, const std::vector<int>& orders);
// Projection A -> K onto the non-Weil base (kills every generator).
Element weil_project(const Element& a);
// Projection A -> B where B's generators are a subset of A's.
Element weil_project_to(const Element& a, RingRef target);

std::int64_t smallest_irreducible_code(int p, int k);
bool is_prime(std::int64_t n);

}  // namespace jordanlab
