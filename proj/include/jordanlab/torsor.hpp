#pragma once

#include "jordanlab/parallel.hpp"
#include "jordanlab/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace jordanlab {

using Perm = std::vector<int>;

Perm compose(const Perm& f, const Perm& g);  // f after g
Perm inverse(const Perm& f);
bool is_permutation(const Perm& f, int n);
Perm identity_perm(int n);

// Ternary law (xyz) on {0..n-1}.
struct TorsorTable {
    int n = 0;
    std::vector<int> law;
    int operator()(int x, int y, int z) const { return law[std::size_t((x * n + y) * n + z)]; }
    template <class F>
    static TorsorTable from(int n, F f) {
        TorsorTable t{n, std::vector<int>(std::size_t(n * n * n))};
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) t.law[std::size_t((x * n + y) * n + z)] = f(x, y, z);
        return t;
    }
};

// Inversive action (x,z) -> M_{xz} of a torsor on a set of size m.
struct ActionTable {
    TorsorTable group;
    int m = 0;
    std::vector<Perm> M;  // index x*n+z
    const Perm& at(int x, int z) const { return M[std::size_t(x * group.n + z)]; }
};

// Reflection space x -> s_x on {0..n-1}.
struct ReflectionTable {
    int n = 0;
    std::vector<Perm> s;
};

// Symmetry action x -> S_x of a reflection space on a set of size m.
struct SymmetryActionTable {
    ReflectionTable space;
    int m = 0;
    std::vector<Perm> S;
};

ActionTable regular_action(const TorsorTable& t);
ReflectionTable reflection_of_torsor(const TorsorTable& t);  // s_x(y) = (xyx)
SymmetryActionTable regular_symmetry_action(const ReflectionTable& r);
SymmetryActionTable symmetry_from_action(const ActionTable& a);  // S_x = M_xx

CheckReport check_torsor(const TorsorTable& t, bool commutative = false, bool parallel = true);
// Torsor axioms in middle-multiplication form (SA)+(IP).
CheckReport check_torsor_middle(const TorsorTable& t, bool parallel = true);
CheckReport check_inversive_action(const ActionTable& a, bool parallel = true);
CheckReport check_reflection_space(const ReflectionTable& r, bool parallel = true);
CheckReport check_symmetry_action(const SymmetryActionTable& s, bool parallel = true);

struct Translations {
    int n = 0;
    std::vector<Perm> L, R;  // index x*n+v
};
// L_{xv} = M_{xz} M_{zv}, R_{vx} = M_{zv} M_{xz}, with the z-independence and
// translation identities checked.
Translations derived_translations(const ActionTable& a, CheckReport& report, bool parallel = true);

// Transvections Q_{xy} = S_x S_y: Chasles, Q_xx = id, fundamental formula.
// With a commutative inversive action also the transplantation formula.
CheckReport transvections_and_formulas(const SymmetryActionTable& s, const ActionTable* commutative = nullptr,
                                       bool parallel = true);

// Exhaustive search over middle-multiplication tables on n points satisfying
// (IP) and the Chasles relation (SA'), testing whether (SA) follows.
struct ChaslesSearch {
    std::uint64_t tables = 0;      // tables with (IP) and bijective operators
    std::uint64_t chasles = 0;     // of those, satisfying (SA')
    std::uint64_t full = 0;        // of those, satisfying (SA)
    std::optional<TorsorTable> counterexample;
};
ChaslesSearch search_chasles_tables(int n);

json to_json(const TorsorTable& t);
json to_json(const ActionTable& a);
json to_json(const SymmetryActionTable& s);
TorsorTable torsor_from_json(const json& j);
ActionTable action_from_json(const json& j);
SymmetryActionTable symmetry_action_from_json(const json& j);

// Shared helper: turn a sweep into a report record.
CheckRecord sweep_record(const std::string& name, const std::string& ref, const SweepResult& r,
                         const std::vector<std::string>& vars);

}  // namespace jordanlab
