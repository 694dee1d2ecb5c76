#include "jordanlab/torsor.hpp"

#include "jordanlab/rings.hpp"

#include <algorithm>
#include <array>
#include <atomic>

namespace jordanlab {

Perm compose(const Perm& f, const Perm& g) {
    Perm h(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) h[i] = f[std::size_t(g[i])];
    return h;
}

Perm inverse(const Perm& f) {
    Perm h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) h[std::size_t(f[i])] = int(i);
    return h;
}

bool is_permutation(const Perm& f, int n) {
    if (int(f.size()) != n) return false;
    std::vector<bool> seen(std::size_t(n), false);
    for (int v : f) {
        if (v < 0 || v >= n || seen[std::size_t(v)]) return false;
        seen[std::size_t(v)] = true;
    }
    return true;
}

Perm identity_perm(int n) {
    Perm p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[std::size_t(i)] = i;
    return p;
}

CheckRecord sweep_record(const std::string& name, const std::string& ref, const SweepResult& r,
                         const std::vector<std::string>& vars) {
    CheckRecord rec;
    rec.name = name;
    rec.paper_ref = ref;
    rec.mode = "exhaustive";
    rec.cases = r.cases;
    rec.status = r.witness ? Status::Fail : Status::Pass;
    if (r.witness) {
        json w = json::object();
        for (std::size_t i = 0; i < r.witness->size() && i < vars.size(); ++i) w[vars[i]] = (*r.witness)[i];
        rec.witness = w;
    }
    return rec;
}

// ---------------------------------------------------------------- constructions

ActionTable regular_action(const TorsorTable& t) {
    ActionTable a{t, t.n, std::vector<Perm>(std::size_t(t.n * t.n))};
    for (int x = 0; x < t.n; ++x)
        for (int z = 0; z < t.n; ++z) {
            Perm p(static_cast<std::size_t>(t.n));
            for (int y = 0; y < t.n; ++y) p[std::size_t(y)] = t(x, y, z);
            a.M[std::size_t(x * t.n + z)] = p;
        }
    return a;
}

ReflectionTable reflection_of_torsor(const TorsorTable& t) {
    ReflectionTable r{t.n, std::vector<Perm>(std::size_t(t.n))};
    for (int x = 0; x < t.n; ++x) {
        Perm p(static_cast<std::size_t>(t.n));
        for (int y = 0; y < t.n; ++y) p[std::size_t(y)] = t(x, y, x);
        r.s[std::size_t(x)] = p;
    }
    return r;
}

SymmetryActionTable regular_symmetry_action(const ReflectionTable& r) { return {r, r.n, r.s}; }

SymmetryActionTable symmetry_from_action(const ActionTable& a) {
    SymmetryActionTable s{reflection_of_torsor(a.group), a.m, std::vector<Perm>(std::size_t(a.group.n))};
    for (int x = 0; x < a.group.n; ++x) s.S[std::size_t(x)] = a.at(x, x);
    return s;
}

// ---------------------------------------------------------------- torsors

CheckReport check_torsor(const TorsorTable& t, bool commutative, bool parallel) {
    CheckReport rep;
    rep.suite = commutative ? "commutative-torsor" : "torsor";
    const int n = t.n;
    auto pa = sweep(
        n, 5,
        [&](const int* v) {
            int x = v[0], u = v[1], w = v[2], y = v[3], z = v[4];
            int l = t(t(x, u, w), y, z), m = t(x, t(y, w, u), z), r = t(x, u, t(w, y, z));
            return (l == m && m == r) ? Verdict::Pass : Verdict::Fail;
        },
        parallel);
    rep.add(sweep_record("PA", "para-associativity ((xuv)wz) = (x(wvu)z) = (xu(vwz))", pa, {"x", "u", "v", "w", "z"}));
    auto ip = sweep(
        n, 2, [&](const int* v) { return (t(v[0], v[0], v[1]) == v[1] && t(v[1], v[0], v[0]) == v[1]) ? Verdict::Pass : Verdict::Fail; },
        parallel);
    rep.add(sweep_record("IP", "idempotency (xxy) = y = (yxx)", ip, {"x", "y"}));
    if (commutative) {
        auto c = sweep(
            n, 3, [&](const int* v) { return t(v[0], v[1], v[2]) == t(v[2], v[1], v[0]) ? Verdict::Pass : Verdict::Fail; },
            parallel);
        rep.add(sweep_record("C", "commutativity (xyz) = (zyx)", c, {"x", "y", "z"}));
    }
    return rep;
}

CheckReport check_torsor_middle(const TorsorTable& t, bool parallel) {
    CheckReport rep;
    rep.suite = "torsor-middle";
    const int n = t.n;
    auto m = [&](int x, int z, int y) { return t(x, y, z); };
    auto bij = sweep(
        n, 2,
        [&](const int* v) {
            std::vector<bool> seen(std::size_t(n), false);
            for (int y = 0; y < n; ++y) {
                int w = m(v[0], v[1], y);
                if (seen[std::size_t(w)]) return Verdict::Fail;
                seen[std::size_t(w)] = true;
            }
            return Verdict::Pass;
        },
        parallel);
    rep.add(sweep_record("bijective", "each m_xz is a bijection", bij, {"x", "z"}));
    auto sa = sweep(
        n, 6,
        [&](const int* v) {
            int x = v[0], y = v[1], u = v[2], w = v[3], r = v[4], s = v[5];
            int a = m(x, r, w), b = m(s, y, u);
            for (int p = 0; p < n; ++p)
                if (m(x, y, m(u, w, m(r, s, p))) != m(a, b, p)) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(sweep_record("SA", "m_xy m_uv m_rs = m_{m_xr(v), m_sy(u)}", sa, {"x", "y", "u", "v", "r", "s"}));
    auto ip = sweep(
        n, 2, [&](const int* v) { return (m(v[0], v[1], v[0]) == v[1] && m(v[0], v[1], v[1]) == v[0]) ? Verdict::Pass : Verdict::Fail; },
        parallel);
    rep.add(sweep_record("IP", "m_xz(x) = z, m_xz(z) = x", ip, {"x", "z"}));
    return rep;
}

// ---------------------------------------------------------------- actions

CheckReport check_inversive_action(const ActionTable& a, bool parallel) {
    CheckReport rep;
    rep.suite = "inversive-action";
    const int n = a.group.n;
    auto bij = sweep(
        n, 2, [&](const int* v) { return is_permutation(a.at(v[0], v[1]), a.m) ? Verdict::Pass : Verdict::Fail; }, parallel);
    rep.add(sweep_record("bijective", "each M_xz is a bijection of X", bij, {"x", "z"}));
    if (bij.witness) return rep;
    auto sta1 = sweep(
        n, 2,
        [&](const int* v) {
            const Perm &f = a.at(v[0], v[1]), &g = a.at(v[1], v[0]);
            for (int p = 0; p < a.m; ++p)
                if (f[std::size_t(g[std::size_t(p)])] != p) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(sweep_record("STA1", "M_xz M_zx = id", sta1, {"x", "z"}));
    auto sta2 = sweep(
        n, 6,
        [&](const int* v) {
            int x = v[0], z = v[1], u = v[2], w = v[3], p = v[4], b = v[5];
            const Perm &A = a.at(x, z), &B = a.at(u, w), &C = a.at(p, b);
            const Perm& D = a.at(a.group(x, w, p), a.group(b, u, z));
            for (int q = 0; q < a.m; ++q)
                if (A[std::size_t(B[std::size_t(C[std::size_t(q)])])] != D[std::size_t(q)]) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(sweep_record("STA2", "M_xz M_uv M_ab = M_{(xva),(buz)}", sta2, {"x", "z", "u", "v", "a", "b"}));
    return rep;
}

CheckReport check_reflection_space(const ReflectionTable& r, bool parallel) {
    CheckReport rep;
    rep.suite = "reflection-space";
    const int n = r.n;
    for (int x = 0; x < n; ++x)
        if (!is_permutation(r.s[std::size_t(x)], n)) {
            CheckRecord bad{"bijective", "each s_x is a bijection", "exhaustive", std::uint64_t(x + 1), Status::Fail, json{{"x", x}}, ""};
            rep.add(bad);
            return rep;
        }
    auto s = [&](int x, int y) { return r.s[std::size_t(x)][std::size_t(y)]; };
    auto r1 = sweep(n, 1, [&](const int* v) { return s(v[0], v[0]) == v[0] ? Verdict::Pass : Verdict::Fail; }, parallel);
    rep.add(sweep_record("R1", "s_x(x) = x", r1, {"x"}));
    auto r2 = sweep(n, 2, [&](const int* v) { return s(v[0], s(v[0], v[1])) == v[1] ? Verdict::Pass : Verdict::Fail; }, parallel);
    rep.add(sweep_record("R2", "s_x s_x = id", r2, {"x", "y"}));
    auto r3 = sweep(
        n, 3,
        [&](const int* v) {
            int x = v[0], z = v[1], y = v[2];
            return s(x, s(z, s(x, y))) == s(s(x, z), y) ? Verdict::Pass : Verdict::Fail;
        },
        parallel);
    rep.add(sweep_record("R3", "s_x s_z s_x = s_{s_x(z)}", r3, {"x", "z", "y"}));
    return rep;
}

CheckReport check_symmetry_action(const SymmetryActionTable& t, bool parallel) {
    CheckReport rep;
    rep.suite = "symmetry-action";
    const int n = t.space.n;
    for (int x = 0; x < n; ++x)
        if (!is_permutation(t.S[std::size_t(x)], t.m)) {
            rep.add({"bijective", "each S_x is a bijection of X", "exhaustive", std::uint64_t(x + 1), Status::Fail, json{{"x", x}}, ""});
            return rep;
        }
    auto S = [&](int x, int p) { return t.S[std::size_t(x)][std::size_t(p)]; };
    auto s1 = sweep(n, 1,
                    [&](const int* v) {
                        for (int p = 0; p < t.m; ++p)
                            if (S(v[0], S(v[0], p)) != p) return Verdict::Fail;
                        return Verdict::Pass;
                    },
                    parallel);
    rep.add(sweep_record("S1", "S_x S_x = id", s1, {"x"}));
    auto s2 = sweep(n, 2,
                    [&](const int* v) {
                        int x = v[0], y = v[1], sy = t.space.s[std::size_t(x)][std::size_t(y)];
                        for (int p = 0; p < t.m; ++p)
                            if (S(x, S(y, S(x, p))) != S(sy, p)) return Verdict::Fail;
                        return Verdict::Pass;
                    },
                    parallel);
    rep.add(sweep_record("S2", "S_x S_y S_x = S_{s_x(y)}", s2, {"x", "y"}));
    return rep;
}

Translations derived_translations(const ActionTable& a, CheckReport& rep, bool parallel) {
    const int n = a.group.n, m = a.m;
    Translations tr{n, std::vector<Perm>(std::size_t(n * n)), std::vector<Perm>(std::size_t(n * n))};
    for (int x = 0; x < n; ++x)
        for (int v = 0; v < n; ++v) {
            tr.L[std::size_t(x * n + v)] = compose(a.at(x, 0), a.at(0, v));
            tr.R[std::size_t(v * n + x)] = compose(a.at(0, v), a.at(x, 0));
        }
    auto L = [&](int x, int v) -> const Perm& { return tr.L[std::size_t(x * n + v)]; };
    auto R = [&](int v, int x) -> const Perm& { return tr.R[std::size_t(v * n + x)]; };
    auto zind = sweep(
        n, 3,
        [&](const int* t) {
            int x = t[0], v = t[1], z = t[2];
            if (compose(a.at(x, z), a.at(z, v)) != L(x, v)) return Verdict::Fail;
            if (compose(a.at(z, v), a.at(x, z)) != R(v, x)) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(sweep_record("z-independence", "M_xz M_zv and M_zv M_xz do not depend on z", zind, {"x", "v", "z"}));
    auto lta1 = sweep(n, 1, [&](const int* t) { return L(t[0], t[0]) == identity_perm(m) ? Verdict::Pass : Verdict::Fail; }, parallel);
    rep.add(sweep_record("LTA1", "L_xx = id", lta1, {"x"}));
    const auto& g = a.group;
    auto lta2 = sweep(
        n, 4,
        [&](const int* t) {
            int x = t[0], v = t[1], u = t[2], w = t[3];
            Perm lhs = compose(L(x, v), L(u, w));
            return (lhs == L(g(x, v, u), w) && lhs == L(x, g(w, u, v))) ? Verdict::Pass : Verdict::Fail;
        },
        parallel);
    rep.add(sweep_record("LTA2", "L_xv L_uw = L_{(xvu),w} = L_{x,(wuv)}", lta2, {"x", "v", "u", "w"}));
    auto comm = sweep(
        n, 4,
        [&](const int* t) {
            return compose(L(t[0], t[1]), R(t[2], t[3])) == compose(R(t[2], t[3]), L(t[0], t[1])) ? Verdict::Pass
                                                                                                  : Verdict::Fail;
        },
        parallel);
    rep.add(sweep_record("LR-commute", "L_xv R_yw = R_yw L_xv", comm, {"x", "v", "y", "w"}));
    auto inter = sweep(
        n, 2,
        [&](const int* t) {
            int x = t[0], v = t[1];
            Perm lhs = compose(a.at(x, x), compose(L(v, x), a.at(x, x)));
            return lhs == R(g(x, v, x), x) ? Verdict::Pass : Verdict::Fail;
        },
        parallel);
    rep.add(sweep_record("Int", "M_xx L_vx M_xx = R_{(xvx),x}", inter, {"x", "v"}));
    bool commutative = true;
    for (int x = 0; x < n && commutative; ++x)
        for (int z = 0; z < n; ++z)
            if (a.at(x, z) != a.at(z, x)) {
                commutative = false;
                break;
            }
    if (commutative) {
        auto lr = sweep(n, 2, [&](const int* t) { return L(t[0], t[1]) == R(t[0], t[1]) ? Verdict::Pass : Verdict::Fail; }, parallel);
        rep.add(sweep_record("L=R", "commutative action: L_xv = R_xv", lr, {"x", "v"}));
    }
    return tr;
}

CheckReport transvections_and_formulas(const SymmetryActionTable& t, const ActionTable* ca, bool parallel) {
    CheckReport rep;
    rep.suite = "transvections";
    const int n = t.space.n;
    auto Q = [&](int x, int y) { return compose(t.S[std::size_t(x)], t.S[std::size_t(y)]); };
    auto chasles = sweep(n, 3, [&](const int* v) { return compose(Q(v[0], v[1]), Q(v[1], v[2])) == Q(v[0], v[2]) ? Verdict::Pass : Verdict::Fail; },
                         parallel);
    rep.add(sweep_record("Chasles", "Q_xy Q_yz = Q_xz", chasles, {"x", "y", "z"}));
    auto unit = sweep(n, 1, [&](const int* v) { return Q(v[0], v[0]) == identity_perm(t.m) ? Verdict::Pass : Verdict::Fail; }, parallel);
    rep.add(sweep_record("Q_xx", "Q_xx = id", unit, {"x"}));
    auto fu = sweep(
        n, 3,
        [&](const int* v) {
            int x = v[0], y = v[1], z = v[2];
            const auto& s = t.space.s;
            int qz = s[std::size_t(x)][std::size_t(s[std::size_t(y)][std::size_t(z)])];
            return compose(Q(x, y), compose(Q(z, y), Q(x, y))) == Q(qz, y) ? Verdict::Pass : Verdict::Fail;
        },
        parallel);
    rep.add(sweep_record("Fu", "fundamental formula Q_xy Q_zy Q_xy = Q_{Q_xy(z),y}", fu, {"x", "y", "z"}));
    if (ca) {
        const auto& g = ca->group;
        auto tp = sweep(
            g.n, 3,
            [&](const int* v) {
                int x = v[0], o = v[1], z = v[2];
                const Perm& lhs = ca->at(x, z);
                if (lhs != compose(ca->at(x, o), compose(ca->at(o, o), ca->at(z, o)))) return Verdict::Fail;
                return lhs == ca->at(g(x, o, z), o) ? Verdict::Pass : Verdict::Fail;
            },
            parallel);
        rep.add(sweep_record("Transp", "transplantation M_xz = M_xo M_oo M_zo = M_{(xoz),o}", tp, {"x", "o", "z"}));
    }
    return rep;
}

// ---------------------------------------------------------------- (SA') search

ChaslesSearch search_chasles_tables(int n) {
    if (n < 1 || n > 3) throw DomainError("exhaustive Chasles search supports n <= 3");
    // free cells: (x,z,y) with y not in {x,z}
    std::vector<std::array<int, 3>> cells;
    for (int x = 0; x < n; ++x)
        for (int z = 0; z < n; ++z)
            for (int y = 0; y < n; ++y)
                if (y != x && y != z) cells.push_back({x, z, y});
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < cells.size(); ++i) total *= std::uint64_t(n);
    ChaslesSearch res;
    std::uint64_t tables = 0, chasles = 0, full = 0;
    std::atomic<std::uint64_t> first_bad{~std::uint64_t(0)};
    const long long T = (long long)total;
#pragma omp parallel for num_threads(thread_budget()) reduction(+ : tables, chasles, full) schedule(dynamic, 1024)
    for (long long idx = 0; idx < T; ++idx) {
        std::vector<int> law(std::size_t(n * n * n), -1);
        auto at = [&](int x, int z, int y) -> int& { return law[std::size_t((x * n + y) * n + z)]; };
        for (int x = 0; x < n; ++x)
            for (int z = 0; z < n; ++z) {
                at(x, z, x) = z;
                at(x, z, z) = x;
            }
        std::uint64_t c = std::uint64_t(idx);
        for (auto& cell : cells) {
            at(cell[0], cell[1], cell[2]) = int(c % std::uint64_t(n));
            c /= std::uint64_t(n);
        }
        bool bij = true;
        for (int x = 0; x < n && bij; ++x)
            for (int z = 0; z < n && bij; ++z) {
                std::vector<bool> seen(std::size_t(n), false);
                for (int y = 0; y < n; ++y) {
                    int v = at(x, z, y);
                    if (seen[std::size_t(v)]) {
                        bij = false;
                        break;
                    }
                    seen[std::size_t(v)] = true;
                }
            }
        if (!bij) continue;
        ++tables;
        auto m = [&](int x, int z, int y) { return law[std::size_t((x * n + y) * n + z)]; };
        bool sap = true;
        for (int x = 0; x < n && sap; ++x)
            for (int y = 0; y < n && sap; ++y)
                for (int v = 0; v < n && sap; ++v)
                    for (int s = 0; s < n && sap; ++s)
                        for (int w = 0; w < n; ++w)
                            if (m(x, y, m(y, v, m(v, s, w))) != m(x, s, w)) {
                                sap = false;
                                break;
                            }
        if (!sap) continue;
        ++chasles;
        bool sa = true;
        for (int x = 0; x < n && sa; ++x)
            for (int y = 0; y < n && sa; ++y)
                for (int u = 0; u < n && sa; ++u)
                    for (int v = 0; v < n && sa; ++v)
                        for (int r = 0; r < n && sa; ++r)
                            for (int s = 0; s < n && sa; ++s) {
                                int a = m(x, r, v), b = m(s, y, u);
                                for (int w = 0; w < n; ++w)
                                    if (m(x, y, m(u, v, m(r, s, w))) != m(a, b, w)) {
                                        sa = false;
                                        break;
                                    }
                            }
        if (sa) {
            ++full;
        } else {
            std::uint64_t cur = first_bad.load();
            std::uint64_t u = std::uint64_t(idx);
            while (u < cur && !first_bad.compare_exchange_weak(cur, u)) {
            }
        }
    }
    res.tables = tables;
    res.chasles = chasles;
    res.full = full;
    if (first_bad.load() != ~std::uint64_t(0)) {
        std::uint64_t c = first_bad.load();
        TorsorTable t{n, std::vector<int>(std::size_t(n * n * n), -1)};
        for (int x = 0; x < n; ++x)
            for (int z = 0; z < n; ++z) {
                t.law[std::size_t((x * n + x) * n + z)] = z;
                t.law[std::size_t((x * n + z) * n + z)] = x;
            }
        for (auto& cell : cells) {
            t.law[std::size_t((cell[0] * n + cell[2]) * n + cell[1])] = int(c % std::uint64_t(n));
            c /= std::uint64_t(n);
        }
        res.counterexample = t;
    }
    return res;
}

// ---------------------------------------------------------------- JSON

json to_json(const TorsorTable& t) { return json{{"kind", "torsor"}, {"n", t.n}, {"law", t.law}}; }

json to_json(const ActionTable& a) {
    return json{{"kind", "inversive-action"}, {"torsor", to_json(a.group)}, {"m", a.m}, {"M", a.M}};
}

json to_json(const SymmetryActionTable& s) {
    return json{{"kind", "symmetry-action"}, {"space", json{{"n", s.space.n}, {"s", s.space.s}}}, {"m", s.m}, {"S", s.S}};
}

TorsorTable torsor_from_json(const json& j) {
    TorsorTable t{j.at("n").get<int>(), j.at("law").get<std::vector<int>>()};
    if (t.law.size() != std::size_t(t.n * t.n * t.n)) throw ParseError("torsor table has wrong size");
    for (int v : t.law)
        if (v < 0 || v >= t.n) throw ParseError("torsor table entry out of range");
    return t;
}

ActionTable action_from_json(const json& j) {
    ActionTable a{torsor_from_json(j.at("torsor")), j.at("m").get<int>(), j.at("M").get<std::vector<Perm>>()};
    if (a.M.size() != std::size_t(a.group.n * a.group.n)) throw ParseError("action table has wrong size");
    return a;
}

SymmetryActionTable symmetry_action_from_json(const json& j) {
    SymmetryActionTable s;
    s.space.n = j.at("space").at("n").get<int>();
    s.space.s = j.at("space").at("s").get<std::vector<Perm>>();
    s.m = j.at("m").get<int>();
    s.S = j.at("S").get<std::vector<Perm>>();
    if (int(s.space.s.size()) != s.space.n || int(s.S.size()) != s.space.n) throw ParseError("symmetry table has wrong size");
    return s;
}

}  // namespace jordanlab
