#pragma once

#include "jordanlab/geometry.hpp"
#include "jordanlab/report.hpp"
#include "jordanlab/torsor.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

namespace jordanlab {

struct NotPolarity : Error {
    using Error::Error;
};

// Enumerated finite geometry with its transversality relation.
class FiniteGeometry {
public:
    explicit FiniteGeometry(const Geometry& g);

    const Geometry& geometry() const { return geo_; }
    int size() const { return n_; }
    const Point& point(int i) const { return pts_[std::size_t(i)]; }
    const std::vector<Point>& points() const { return pts_; }
    std::string label(int i) const { return geo_.label(pts_[std::size_t(i)]); }

    bool tr(int x, int a) const { return T_[std::size_t(x * n_ + a)] != 0; }
    int index_of(const Point& p) const;  // throws DomainError
    Perm perm_of(const ProjMap& g) const;
    Perm perm_of(const std::function<Point(const Point&)>& f) const;

    std::vector<int> U(int a) const;
    std::vector<int> U(int a, int b) const;
    // Transversal pairs (x,a).
    std::vector<std::array<int, 2>> D2() const;
    // Triples (x,a,z) with x,z transversal to a.
    std::vector<std::array<int, 3>> D3() const;
    // Closed chains (x,a,z,b).
    std::vector<std::array<int, 4>> D4closed() const;

private:
    Geometry geo_;
    int n_ = 0;
    std::vector<Point> pts_;
    std::unordered_map<std::string, int> index_;
    std::vector<std::uint8_t> T_;
};

// How J^{xz}_a is produced from the geometry.
enum class JSource { Direct, FromM, FromMidpoints };
std::string to_string(JSource s);

// Jordan structure map tabulated as point permutations, one per (x,a,z) in D3.
struct JTable {
    std::shared_ptr<const FiniteGeometry> geo;
    int n = 0;
    std::vector<Perm> J;  // index (x*n+a)*n+z, empty outside D3

    const Perm& at(int x, int a, int z) const { return J[std::size_t((x * n + a) * n + z)]; }
    Perm& at(int x, int a, int z) { return J[std::size_t((x * n + a) * n + z)]; }
    int operator()(int x, int a, int z, int y) const { return at(x, a, z)[std::size_t(y)]; }
};
JTable jordan_table(std::shared_ptr<const FiniteGeometry> g, JSource src = JSource::Direct, bool parallel = true);

// Associative structure map M(x,a,z,b) = P^a_x - P^z_b on closed chains.
struct MTable {
    std::shared_ptr<const FiniteGeometry> geo;
    int n = 0;
    std::vector<std::array<int, 4>> chains;
    std::vector<Perm> M;  // parallel to chains
    std::unordered_map<std::uint64_t, int> index;

    const Perm& at(int x, int a, int z, int b) const;  // throws DomainError outside the domain
    const Perm* find(int x, int a, int z, int b) const;
};
MTable associative_table(std::shared_ptr<const FiniteGeometry> g, bool parallel = true);

// Exhaustive suites on tabulated structure maps.
CheckReport check_jordan(const JTable& t, bool parallel = true);
CheckReport check_associative(const MTable& t, bool parallel = true);
// Record comparing two tabulations of J on all of D3.
CheckRecord compare_jordan(const JTable& a, const JTable& b, const std::string& name);

// Random mode: sampled tuples, point maps compared as projective maps.
using JProvider = std::function<ProjMap(const Point& x, const Point& a, const Point& z)>;
JProvider j_provider(JSource s);

struct Budget {
    std::uint64_t samples = 1000;
    std::uint64_t seed = 1;
    double max_ms = 0;  // 0: unlimited
};
CheckReport check_jordan_random(const Geometry& g, const JProvider& J, const Budget& b, bool parallel = true);
CheckReport check_associative_random(const Geometry& g, const Budget& b, bool parallel = true);

// Equality of point maps: normalized matrices, else evaluation on all points
// of a small finite geometry.
bool same_point_map(const ProjMap& f, const ProjMap& g, const Geometry& geo);

// Derived ternary structures.
struct UaTorsor {
    int a = -1;
    std::vector<int> members;  // torsor element i is point members[i]
    TorsorTable torsor;        // (xyz)_a = J_a^{xz}(y)
    ActionTable action;        // (x,z) -> J_a^{xz} on all points
};
struct UabReflection {
    int a = -1, b = -1;
    std::vector<int> members;
    ReflectionTable space;         // s_x(y) = J^{ab}_x(y)
    SymmetryActionTable action;    // S_x = J^{ab}_x on all points
};
struct D2Reflection {
    std::vector<std::array<int, 2>> pairs;
    ReflectionTable space;
    SymmetryActionTable action;  // on X^2, point (y,b) has index y*n+b
    Perm tau;                    // exchange map on the pair list
};
UaTorsor ua_torsor(const JTable& t, int a);
UabReflection uab_reflection(const JTable& t, int a, int b);
D2Reflection d2_reflection(const JTable& t);

struct DerivedSelection {
    std::vector<int> anchors;                    // empty: all points
    std::vector<std::array<int, 2>> pairs;       // empty: all pairs with nonempty U_ab
    bool d2 = true;
};
struct DerivedStructures {
    std::vector<UaTorsor> torsors;
    std::vector<UabReflection> reflections;
    std::optional<D2Reflection> d2;
    CheckReport report;
};
DerivedStructures derived_structures(const JTable& t, const DerivedSelection& sel = {}, bool parallel = true);

// U_ab of an associative geometry with (xyz)_ab = M(x,a,z,b)(y), as torsors.
CheckReport associative_torsors(const MTable& t, bool parallel = true);

// X^(p) = {x : p(x) transversal to x} with s_x(y) = J^{xx}_{p(x)}(y).
struct PolaritySpace {
    std::vector<int> members;
    ReflectionTable space;
    CheckReport report;
};
PolaritySpace polarity_space(const JTable& t, const Perm& p);

// f maps point indices of src to point indices of dst.
CheckReport check_morphism(const std::vector<int>& f, const JTable& src, const JTable& dst, bool parallel = true);

// Inner ideal test in both readings.
CheckReport check_inner_ideal(const JTable& t, const std::vector<int>& subset);

json to_json(const JTable& t);

}  // namespace jordanlab
