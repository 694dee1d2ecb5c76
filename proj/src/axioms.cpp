#include "jordanlab/axioms.hpp"

#include <omp.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <map>
#include <mutex>

namespace jordanlab {

// ---------------------------------------------------------------- finite geometry

FiniteGeometry::FiniteGeometry(const Geometry& g) : geo_(g), pts_(g.enumerate()) {
    n_ = int(pts_.size());
    for (int i = 0; i < n_; ++i) index_.emplace(pts_[std::size_t(i)].key(), i);
    T_.assign(std::size_t(n_ * n_), 0);
#pragma omp parallel for num_threads(thread_budget()) schedule(dynamic, 8)
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) T_[std::size_t(i * n_ + j)] = transversal(pts_[std::size_t(i)], pts_[std::size_t(j)]) ? 1 : 0;
}

int FiniteGeometry::index_of(const Point& p) const {
    auto it = index_.find(p.key());
    if (it == index_.end()) throw DomainError("point not in " + geo_.text() + ": " + p.basis.str());
    return it->second;
}

Perm FiniteGeometry::perm_of(const ProjMap& g) const {
    Perm p(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) p[std::size_t(i)] = index_of(g(pts_[std::size_t(i)]));
    return p;
}

Perm FiniteGeometry::perm_of(const std::function<Point(const Point&)>& f) const {
    Perm p(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) p[std::size_t(i)] = index_of(f(pts_[std::size_t(i)]));
    return p;
}

std::vector<int> FiniteGeometry::U(int a) const {
    std::vector<int> out;
    for (int x = 0; x < n_; ++x)
        if (tr(x, a)) out.push_back(x);
    return out;
}

std::vector<int> FiniteGeometry::U(int a, int b) const {
    std::vector<int> out;
    for (int x = 0; x < n_; ++x)
        if (tr(x, a) && tr(x, b)) out.push_back(x);
    return out;
}

std::vector<std::array<int, 2>> FiniteGeometry::D2() const {
    std::vector<std::array<int, 2>> out;
    for (int x = 0; x < n_; ++x)
        for (int a = 0; a < n_; ++a)
            if (tr(x, a)) out.push_back({x, a});
    return out;
}

std::vector<std::array<int, 3>> FiniteGeometry::D3() const {
    std::vector<std::array<int, 3>> out;
    for (int x = 0; x < n_; ++x)
        for (int a = 0; a < n_; ++a)
            if (tr(x, a))
                for (int z = 0; z < n_; ++z)
                    if (tr(z, a)) out.push_back({x, a, z});
    return out;
}

std::vector<std::array<int, 4>> FiniteGeometry::D4closed() const {
    std::vector<std::array<int, 4>> out;
    for (int x = 0; x < n_; ++x)
        for (int a = 0; a < n_; ++a)
            if (tr(x, a))
                for (int z = 0; z < n_; ++z)
                    if (tr(a, z))
                        for (int b = 0; b < n_; ++b)
                            if (tr(z, b) && tr(b, x)) out.push_back({x, a, z, b});
    return out;
}

// ---------------------------------------------------------------- helpers

namespace {

// Run f(i) for i in [0,n) across threads, rethrowing the first exception.
template <class F>
void parallel_for(int n, bool parallel, F f) {
    std::exception_ptr err;
    std::mutex mu;
#pragma omp parallel for num_threads(parallel ? thread_budget() : 1) schedule(dynamic, 4)
    for (int i = 0; i < n; ++i) {
        try {
            f(i);
        } catch (...) {
            std::lock_guard<std::mutex> lock(mu);
            if (!err) err = std::current_exception();
        }
    }
    if (err) std::rethrow_exception(err);
}

CheckRecord point_record(const std::string& name, const std::string& ref, const SweepResult& r,
                         const std::vector<std::string>& vars, const FiniteGeometry& g,
                         const std::function<std::vector<int>(const std::vector<int>&)>& to_points) {
    CheckRecord rec;
    rec.name = name;
    rec.paper_ref = ref;
    rec.cases = r.cases;
    rec.status = r.witness ? Status::Fail : Status::Pass;
    if (r.witness) {
        auto pts = to_points(*r.witness);
        json w = json::object();
        for (std::size_t i = 0; i < pts.size() && i < vars.size(); ++i) w[vars[i]] = g.label(pts[i]);
        rec.witness = w;
    }
    return rec;
}

bool perm_equal(const Perm& f, const Perm& g) { return !f.empty() && f == g; }

// Collects records of many sub-reports under one name each.
class Accumulator {
public:
    void add(const CheckReport& r, const json& context) {
        for (const auto& rec : r.checks) {
            auto it = pos_.find(rec.name);
            if (it == pos_.end()) {
                pos_[rec.name] = out_.checks.size();
                CheckRecord c = rec;
                if (rec.status == Status::Fail) c.witness = with_context(rec.witness, context);
                out_.checks.push_back(c);
                continue;
            }
            CheckRecord& c = out_.checks[it->second];
            c.cases += rec.cases;
            if (c.status != Status::Fail && rec.status == Status::Fail) {
                c.status = Status::Fail;
                c.witness = with_context(rec.witness, context);
            }
        }
    }
    void add(const CheckRecord& r, const json& context) {
        CheckReport tmp;
        tmp.checks.push_back(r);
        add(tmp, context);
    }
    CheckReport take() { return std::move(out_); }

private:
    static json with_context(const json& w, const json& ctx) {
        json out = ctx;
        if (w.is_object())
            for (auto& [k, v] : w.items()) out[k] = v;
        else if (!w.is_null())
            out["detail"] = w;
        return out;
    }
    std::map<std::string, std::size_t> pos_;
    CheckReport out_;
};

}  // namespace

std::string to_string(JSource s) {
    switch (s) {
        case JSource::Direct: return "direct";
        case JSource::FromM: return "from-M";
        case JSource::FromMidpoints: return "from-midpoints";
    }
    return "?";
}

JProvider j_provider(JSource s) {
    switch (s) {
        case JSource::FromM:
            return [](const Point& x, const Point& a, const Point& z) { return m_map(x, a, z, a); };
        case JSource::FromMidpoints:
            return [](const Point& x, const Point& a, const Point& z) {
                Point mu = midpoint(x, a, z);
                return scale_map(x.ring()->from_int(-1), mu, a);
            };
        case JSource::Direct:
            break;
    }
    return [](const Point& x, const Point& a, const Point& z) { return j_map(x, a, z); };
}

JTable jordan_table(std::shared_ptr<const FiniteGeometry> g, JSource src, bool parallel) {
    if (src == JSource::FromMidpoints && !g->geometry().ring()->from_int(2).is_unit())
        throw UnsupportedRing("midpoint construction needs 2 invertible in " + g->geometry().ring()->text());
    JTable t;
    t.geo = g;
    t.n = g->size();
    t.J.assign(std::size_t(t.n) * std::size_t(t.n) * std::size_t(t.n), Perm{});
    auto d3 = g->D3();
    JProvider J = j_provider(src);
    parallel_for(int(d3.size()), parallel, [&](int i) {
        auto [x, a, z] = d3[std::size_t(i)];
        t.at(x, a, z) = g->perm_of(J(g->point(x), g->point(a), g->point(z)));
    });
    return t;
}

static std::uint64_t chain_key(int n, int x, int a, int z, int b) {
    std::uint64_t N = std::uint64_t(n);
    return ((std::uint64_t(x) * N + std::uint64_t(a)) * N + std::uint64_t(z)) * N + std::uint64_t(b);
}

const Perm* MTable::find(int x, int a, int z, int b) const {
    auto it = index.find(chain_key(n, x, a, z, b));
    return it == index.end() ? nullptr : &M[std::size_t(it->second)];
}

const Perm& MTable::at(int x, int a, int z, int b) const {
    const Perm* p = find(x, a, z, b);
    if (!p) throw DomainError("M: (x,a,z,b) not a closed transversal chain");
    return *p;
}

MTable associative_table(std::shared_ptr<const FiniteGeometry> g, bool parallel) {
    MTable t;
    t.geo = g;
    t.n = g->size();
    t.chains = g->D4closed();
    t.M.assign(t.chains.size(), Perm{});
    parallel_for(int(t.chains.size()), parallel, [&](int i) {
        auto [x, a, z, b] = t.chains[std::size_t(i)];
        t.M[std::size_t(i)] = g->perm_of(m_map(g->point(x), g->point(a), g->point(z), g->point(b)));
    });
    for (std::size_t i = 0; i < t.chains.size(); ++i) {
        auto [x, a, z, b] = t.chains[i];
        t.index.emplace(chain_key(t.n, x, a, z, b), int(i));
    }
    return t;
}

// ---------------------------------------------------------------- Jordan, exhaustive

CheckReport check_jordan(const JTable& t, bool parallel) {
    Stopwatch sw;
    const FiniteGeometry& g = *t.geo;
    const int n = t.n;
    CheckReport rep;
    rep.suite = "jordan";
    rep.ring = g.geometry().ring()->text();
    rep.geometry = g.geometry().text();

    std::vector<std::vector<int>> U(static_cast<std::size_t>(n));
    std::vector<int> sizes(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
        U[std::size_t(a)] = g.U(a);
        sizes[std::size_t(a)] = int(U[std::size_t(a)].size());
    }
    auto pts = [&](const std::vector<int>& w) {
        std::vector<int> out{w[0]};
        for (std::size_t i = 1; i < w.size(); ++i) out.push_back(U[std::size_t(w[0])][std::size_t(w[i])]);
        return out;
    };
    auto u = [&](const int* v, int i) { return U[std::size_t(v[0])][std::size_t(v[i])]; };

    auto d3 = g.D3();
    auto d2 = g.D2();
    auto tr_pres = sweep(
        int(d3.size()), 1,
        [&](const int* v) {
            auto [x, a, z] = d3[std::size_t(v[0])];
            const Perm& f = t.at(x, a, z);
            if (f.empty()) return Verdict::Fail;
            for (auto [y, b] : d2)
                if (!g.tr(f[std::size_t(y)], f[std::size_t(b)])) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(point_record("transversality", "J^{xz}_a preserves transversality", tr_pres, {"x", "a", "z"}, g,
                         [&](const std::vector<int>& w) {
                             auto e = d3[std::size_t(w[0])];
                             return std::vector<int>{e[0], e[1], e[2]};
                         }));

    auto in = sweep_ragged(
        sizes, 2,
        [&](const int* v) {
            const Perm& f = t.at(u(v, 1), v[0], u(v, 2));
            for (int y = 0; y < n; ++y)
                if (f[std::size_t(f[std::size_t(y)])] != y) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(point_record("IN", "J^{xz}_a J^{xz}_a = id", in, {"a", "x", "z"}, g, pts));

    auto ip = sweep_ragged(
        sizes, 2,
        [&](const int* v) {
            int c = v[0], a = u(v, 1), b = u(v, 2);
            const Perm& f = t.at(a, c, b);
            return (f[std::size_t(c)] == c && f[std::size_t(a)] == b && f[std::size_t(b)] == a) ? Verdict::Pass
                                                                                                   : Verdict::Fail;
        },
        parallel);
    rep.add(point_record("IP", "J^{ab}_c(c) = c, J^{ab}_c(a) = b, J^{ab}_c(b) = a", ip, {"c", "a", "b"}, g, pts));

    auto a_ = sweep_ragged(
        sizes, 6,
        [&](const int* v) {
            int c = v[0], x = u(v, 1), z = u(v, 2), uu = u(v, 3), vv = u(v, 4), a = u(v, 5), b = u(v, 6);
            const Perm &F = t.at(x, c, z), &G = t.at(uu, c, vv), &H = t.at(a, c, b);
            int p = t(x, c, a, vv), q = t(b, c, z, uu);
            if (!g.tr(p, c) || !g.tr(q, c)) return Verdict::Fail;
            const Perm& R = t.at(p, c, q);
            for (int y = 0; y < n; ++y)
                if (F[std::size_t(G[std::size_t(H[std::size_t(y)])])] != R[std::size_t(y)]) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(point_record("A", "J^{xz}_c J^{uv}_c J^{ab}_c = J_c^{J_c^{xa}(v), J_c^{bz}(u)}", a_,
                         {"c", "x", "z", "u", "v", "a", "b"}, g, pts));

    auto d_ = sweep(
        int(d3.size()), 2,
        [&](const int* v) {
            auto [x, c, z] = d3[std::size_t(v[0])];
            auto [uu, b, vv] = d3[std::size_t(v[1])];
            const Perm &G = t.at(x, c, z), &H = t.at(uu, b, vv);
            int gu = G[std::size_t(uu)], gb = G[std::size_t(b)], gv = G[std::size_t(vv)];
            if (!g.tr(gu, gb) || !g.tr(gv, gb)) return Verdict::Fail;
            const Perm& R = t.at(gu, gb, gv);
            for (int y = 0; y < n; ++y)
                if (G[std::size_t(H[std::size_t(G[std::size_t(y)])])] != R[std::size_t(y)]) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(point_record("D", "J^{xz}_c J^{uv}_b J^{xz}_c = J^{J(u),J(v)}_{J(b)} with J = J^{xz}_c", d_,
                         {"x", "c", "z", "u", "b", "v"}, g, [&](const std::vector<int>& w) {
                             auto e = d3[std::size_t(w[0])];
                             auto f = d3[std::size_t(w[1])];
                             return std::vector<int>{e[0], e[1], e[2], f[0], f[1], f[2]};
                         }));

    auto c_ = sweep_ragged(
        sizes, 2, [&](const int* v) { return perm_equal(t.at(u(v, 1), v[0], u(v, 2)), t.at(u(v, 2), v[0], u(v, 1))) ? Verdict::Pass : Verdict::Fail; },
        parallel);
    rep.add(point_record("C", "J^{ab}_c = J^{ba}_c", c_, {"c", "a", "b"}, g, pts));

    auto s_ = sweep_ragged(
        sizes, 1, [&](const int* v) { return perm_equal(t.at(u(v, 1), v[0], u(v, 1)), t.at(v[0], u(v, 1), v[0])) ? Verdict::Pass : Verdict::Fail; },
        parallel);
    rep.add(point_record("S", "J^{xx}_a = J^{aa}_x", s_, {"a", "x"}, g, pts));
    rep.elapsed_ms = sw.ms();
    return rep;
}

CheckRecord compare_jordan(const JTable& a, const JTable& b, const std::string& name) {
    const FiniteGeometry& g = *a.geo;
    auto d3 = g.D3();
    auto r = sweep(
        int(d3.size()), 1,
        [&](const int* v) {
            auto [x, c, z] = d3[std::size_t(v[0])];
            return perm_equal(a.at(x, c, z), b.at(x, c, z)) ? Verdict::Pass : Verdict::Fail;
        },
        true);
    return point_record(name, "two constructions of J^{xz}_a agree on D3", r, {"x", "a", "z"}, g,
                        [&](const std::vector<int>& w) {
                            auto e = d3[std::size_t(w[0])];
                            return std::vector<int>{e[0], e[1], e[2]};
                        });
}

// ---------------------------------------------------------------- associative, exhaustive

CheckReport check_associative(const MTable& t, bool parallel) {
    Stopwatch sw;
    const FiniteGeometry& g = *t.geo;
    const int n = t.n;
    CheckReport rep;
    rep.suite = "associative";
    rep.ring = g.geometry().ring()->text();
    rep.geometry = g.geometry().text();
    const auto& ch = t.chains;
    auto chain_pts = [&](const std::vector<int>& w) {
        std::vector<int> out;
        for (int i : w) out.insert(out.end(), ch[std::size_t(i)].begin(), ch[std::size_t(i)].end());
        return out;
    };
    const int N = int(ch.size());

    auto s1 = sweep(
        N, 1,
        [&](const int* v) {
            auto [x, a, z, b] = ch[std::size_t(v[0])];
            const Perm& f = t.M[std::size_t(v[0])];
            const Perm* g1 = t.find(a, x, b, z);
            const Perm* g2 = t.find(z, b, x, a);
            return (g1 && g2 && f == *g1 && f == *g2) ? Verdict::Pass : Verdict::Fail;
        },
        parallel);
    rep.add(point_record("1", "symmetry M_{xz}^{ab} = M_{ab}^{xz} = M_{ba}^{zx}", s1, {"x", "a", "z", "b"}, g, chain_pts));

    auto s2 = sweep(
        N, 1,
        [&](const int* v) {
            auto [x, a, z, b] = ch[std::size_t(v[0])];
            const Perm& f = t.M[std::size_t(v[0])];
            return (f[std::size_t(x)] == z && f[std::size_t(z)] == x && f[std::size_t(b)] == a && f[std::size_t(a)] == b)
                       ? Verdict::Pass
                       : Verdict::Fail;
        },
        parallel);
    rep.add(point_record("2", "idempotency: M exchanges x,z and a,b", s2, {"x", "a", "z", "b"}, g, chain_pts));

    auto s3 = sweep(
        N, 1,
        [&](const int* v) {
            auto [x, a, z, b] = ch[std::size_t(v[0])];
            const Perm& f = t.M[std::size_t(v[0])];
            const Perm* h = t.find(z, a, x, b);
            if (!h) return Verdict::Fail;
            for (int y = 0; y < n; ++y)
                if (f[std::size_t((*h)[std::size_t(y)])] != y) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(point_record("3", "inverse M_{ab}^{xz} M_{ab}^{zx} = id", s3, {"x", "a", "z", "b"}, g, chain_pts));

    std::vector<std::array<int, 2>> anchors;
    std::vector<std::vector<int>> U;
    std::vector<int> sizes;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto u = g.U(a, b);
            if (u.empty()) continue;
            anchors.push_back({a, b});
            sizes.push_back(int(u.size()));
            U.push_back(std::move(u));
        }
    auto s4 = sweep_ragged(
        sizes, 6,
        [&](const int* v) {
            auto [a, b] = anchors[std::size_t(v[0])];
            const auto& u = U[std::size_t(v[0])];
            int x = u[std::size_t(v[1])], z = u[std::size_t(v[2])], uu = u[std::size_t(v[3])], vv = u[std::size_t(v[4])],
                r = u[std::size_t(v[5])], s = u[std::size_t(v[6])];
            const Perm &F = t.at(x, a, z, b), &G = t.at(uu, a, vv, b), &H = t.at(r, a, s, b);
            int p = t.at(x, a, r, b)[std::size_t(vv)], q = t.at(s, a, z, b)[std::size_t(uu)];
            const Perm* R = t.find(p, a, q, b);
            if (!R) return Verdict::Fail;
            for (int y = 0; y < n; ++y)
                if (F[std::size_t(G[std::size_t(H[std::size_t(y)])])] != (*R)[std::size_t(y)]) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(point_record("4", "associativity M^{xz}_{ab} M^{uv}_{ab} M^{rs}_{ab} = M_{ab}^{(xvr)_{ab},(suz)_{ab}}", s4,
                         {"a", "b", "x", "z", "u", "v", "r", "s"}, g, [&](const std::vector<int>& w) {
                             auto [a, b] = anchors[std::size_t(w[0])];
                             std::vector<int> out{a, b};
                             for (std::size_t i = 1; i < w.size(); ++i) out.push_back(U[std::size_t(w[0])][std::size_t(w[i])]);
                             return out;
                         }));

    auto s5 = sweep(
        N, 2,
        [&](const int* v) {
            const Perm& G = t.M[std::size_t(v[0])];
            const Perm& H = t.M[std::size_t(v[1])];
            auto [u, c, vv, d] = ch[std::size_t(v[1])];
            const Perm* R = t.find(G[std::size_t(u)], G[std::size_t(c)], G[std::size_t(vv)], G[std::size_t(d)]);
            if (!R) return Verdict::Fail;
            Perm Gi = inverse(G);
            for (int y = 0; y < n; ++y)
                if (G[std::size_t(H[std::size_t(Gi[std::size_t(y)])])] != (*R)[std::size_t(y)]) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(point_record("5",
                         "distributivity M_{xz}^{ab} M_{uv}^{cd} (M_{xz}^{ab})^{-1} = "
                         "M_{(xuz)_{ab},(xvz)_{ab}}^{(xcz)_{ab},(xdz)_{ab}}",
                         s5, {"x", "a", "z", "b", "u", "c", "v", "d"}, g, chain_pts));
    rep.elapsed_ms = sw.ms();
    return rep;
}

// ---------------------------------------------------------------- random mode

bool same_point_map(const ProjMap& f, const ProjMap& g, const Geometry& geo) {
    if (f == g) return true;
    auto sz = geo.ring()->size();
    if (!sz || *sz > 16 || geo.dim() > 4) return false;
    for (const Point& p : geo.enumerate())
        if (f(p) != g(p)) return false;
    return true;
}

namespace {

struct Sampler {
    const Geometry& g;
    Rng rng;

    Point any() { return g.random_point(rng); }
    Point in_U(const std::vector<const Point*>& avoid, std::size_t rank) {
        for (int attempt = 0; attempt < 2000; ++attempt) {
            Point p = g.random_point_of_rank(rng, rank);
            bool ok = true;
            for (const Point* a : avoid) ok = ok && transversal(p, *a);
            if (ok) return p;
        }
        throw DomainError("sampling: no transversal point found");
    }
    Point in_U(const Point& a) { return in_U({&a}, g.dim() - a.rank()); }
    // Random point whose rank admits transversal partners inside the geometry.
    Point anchor() {
        for (;;) {
            Point p = any();
            if (g.allows_rank(g.dim() - p.rank())) return p;
        }
    }
};

struct SampledIdentity {
    std::string name, ref;
    std::vector<std::string> vars;
    std::function<std::vector<Point>(Sampler&)> draw;
    std::function<bool(const std::vector<Point>&)> holds;
};

CheckRecord run_sampled(const Geometry& g, const SampledIdentity& id, const Budget& b, std::size_t slot,
                        bool parallel) {
    Stopwatch sw;
    CheckRecord rec;
    rec.name = id.name;
    rec.paper_ref = id.ref;
    rec.mode = "random";
    std::seed_seq seq{std::uint64_t(b.seed), std::uint64_t(slot), std::uint64_t(0x6a6f7264)};
    Sampler s{g, Rng(seq)};
    const std::uint64_t chunk = 256;
    std::uint64_t done = 0;
    while (done < b.samples) {
        if (b.max_ms > 0 && sw.ms() > b.max_ms) {
            rec.status = Status::Incomplete;
            rec.note = "time budget exhausted";
            break;
        }
        std::uint64_t m = std::min(chunk, b.samples - done);
        std::vector<std::vector<Point>> tuples;
        tuples.reserve(m);
        for (std::uint64_t i = 0; i < m; ++i) tuples.push_back(id.draw(s));
        std::vector<char> ok(m, 1);
        std::vector<std::string> err(m);
#pragma omp parallel for num_threads(parallel ? thread_budget() : 1) schedule(dynamic, 1)
        for (long long i = 0; i < (long long)m; ++i) {
            try {
                ok[std::size_t(i)] = id.holds(tuples[std::size_t(i)]) ? 1 : 0;
            } catch (const std::exception& e) {
                ok[std::size_t(i)] = 0;
                err[std::size_t(i)] = e.what();
            }
        }
        for (std::uint64_t i = 0; i < m; ++i) {
            ++rec.cases;
            if (!ok[i]) {
                rec.status = Status::Fail;
                json w = json::object();
                for (std::size_t k = 0; k < id.vars.size(); ++k) w[id.vars[k]] = g.label(tuples[i][k]);
                if (!err[i].empty()) w["error"] = err[i];
                rec.witness = w;
                return rec;
            }
        }
        done += m;
    }
    return rec;
}

CheckReport run_suite(const Geometry& g, const std::string& suite, const std::vector<SampledIdentity>& ids,
                      const Budget& b, bool parallel) {
    Stopwatch sw;
    CheckReport rep;
    rep.suite = suite;
    rep.ring = g.ring()->text();
    rep.geometry = g.text();
    rep.seed = b.seed;
    for (std::size_t i = 0; i < ids.size(); ++i) rep.add(run_sampled(g, ids[i], b, i, parallel));
    rep.elapsed_ms = sw.ms();
    return rep;
}

std::vector<Point> draw_chain4(Sampler& s) {
    Point x = s.anchor();
    Point a = s.in_U(x);
    Point z = s.in_U(a);
    Point b = s.in_U({&z, &x}, s.g.dim() - x.rank());
    return {x, a, z, b};
}

}  // namespace

CheckReport check_jordan_random(const Geometry& g, const JProvider& J, const Budget& b, bool parallel) {
    auto id = ProjMap::identity(g.ring(), g.dim());
    std::vector<SampledIdentity> ids;
    auto c_and = [](int k) {
        return [k](Sampler& s) {
            std::vector<Point> v{s.anchor()};
            for (int i = 0; i < k; ++i) v.push_back(s.in_U(v[0]));
            return v;
        };
    };
    ids.push_back({"IN", "J^{xz}_a J^{xz}_a = id", {"a", "x", "z"}, c_and(2), [&](const std::vector<Point>& v) {
                       ProjMap f = J(v[1], v[0], v[2]);
                       return same_point_map(f * f, id, g);
                   }});
    ids.push_back({"IP", "J^{ab}_c(c) = c, J^{ab}_c(a) = b, J^{ab}_c(b) = a", {"c", "a", "b"}, c_and(2),
                   [&](const std::vector<Point>& v) {
                       ProjMap f = J(v[1], v[0], v[2]);
                       return f(v[0]) == v[0] && f(v[1]) == v[2] && f(v[2]) == v[1];
                   }});
    ids.push_back({"A", "J^{xz}_c J^{uv}_c J^{ab}_c = J_c^{J_c^{xa}(v), J_c^{bz}(u)}", {"c", "x", "z", "u", "v", "a", "b"},
                   c_and(6), [&](const std::vector<Point>& v) {
                       const Point &c = v[0], &x = v[1], &z = v[2], &u = v[3], &w = v[4], &a = v[5], &bb = v[6];
                       ProjMap lhs = J(x, c, z) * J(u, c, w) * J(a, c, bb);
                       Point p = J(x, c, a)(w), q = J(bb, c, z)(u);
                       return same_point_map(lhs, J(p, c, q), g);
                   }});
    ids.push_back({"D", "J^{xz}_c J^{uv}_b J^{xz}_c = J^{J(u),J(v)}_{J(b)} with J = J^{xz}_c",
                   {"x", "c", "z", "u", "b", "v"},
                   [](Sampler& s) {
                       Point c = s.anchor();
                       Point x = s.in_U(c), z = s.in_U(c);
                       Point bb = s.anchor();
                       Point u = s.in_U(bb), w = s.in_U(bb);
                       return std::vector<Point>{x, c, z, u, bb, w};
                   },
                   [&](const std::vector<Point>& v) {
                       ProjMap G = J(v[0], v[1], v[2]);
                       ProjMap lhs = G * J(v[3], v[4], v[5]) * G;
                       return same_point_map(lhs, J(G(v[3]), G(v[4]), G(v[5])), g);
                   }});
    ids.push_back({"C", "J^{ab}_c = J^{ba}_c", {"c", "a", "b"}, c_and(2), [&](const std::vector<Point>& v) {
                       return same_point_map(J(v[1], v[0], v[2]), J(v[2], v[0], v[1]), g);
                   }});
    ids.push_back({"S", "J^{xx}_a = J^{aa}_x", {"a", "x"}, c_and(1), [&](const std::vector<Point>& v) {
                       return same_point_map(J(v[1], v[0], v[1]), J(v[0], v[1], v[0]), g);
                   }});
    return run_suite(g, "jordan", ids, b, parallel);
}

CheckReport check_associative_random(const Geometry& g, const Budget& b, bool parallel) {
    auto id = ProjMap::identity(g.ring(), g.dim());
    std::vector<SampledIdentity> ids;
    const std::vector<std::string> chain_vars{"x", "a", "z", "b"};
    ids.push_back({"1", "symmetry M_{xz}^{ab} = M_{ab}^{xz} = M_{ba}^{zx}", chain_vars, draw_chain4,
                   [&](const std::vector<Point>& v) {
                       ProjMap f = m_map(v[0], v[1], v[2], v[3]);
                       return same_point_map(f, m_map(v[1], v[0], v[3], v[2]), g) &&
                              same_point_map(f, m_map(v[2], v[3], v[0], v[1]), g);
                   }});
    ids.push_back({"2", "idempotency: M exchanges x,z and a,b", chain_vars, draw_chain4, [&](const std::vector<Point>& v) {
                       ProjMap f = m_map(v[0], v[1], v[2], v[3]);
                       return f(v[0]) == v[2] && f(v[2]) == v[0] && f(v[3]) == v[1] && f(v[1]) == v[3];
                   }});
    ids.push_back({"3", "inverse M_{ab}^{xz} M_{ab}^{zx} = id", chain_vars, draw_chain4, [&](const std::vector<Point>& v) {
                       return same_point_map(m_map(v[0], v[1], v[2], v[3]) * m_map(v[2], v[1], v[0], v[3]), id, g);
                   }});
    ids.push_back({"4", "associativity M^{xz}_{ab} M^{uv}_{ab} M^{rs}_{ab} = M_{ab}^{(xvr)_{ab},(suz)_{ab}}",
                   {"a", "b", "x", "z", "u", "v", "r", "s"},
                   [](Sampler& s) {
                       for (;;) {
                           Point a = s.anchor();
                           Point bb = s.g.random_point_of_rank(s.rng, a.rank());
                           try {
                               std::vector<Point> v{a, bb};
                               for (int i = 0; i < 6; ++i) v.push_back(s.in_U({&a, &bb}, s.g.dim() - a.rank()));
                               return v;
                           } catch (const DomainError&) {
                           }
                       }
                   },
                   [&](const std::vector<Point>& v) {
                       const Point &a = v[0], &bb = v[1], &x = v[2], &z = v[3], &u = v[4], &w = v[5], &r = v[6], &s = v[7];
                       ProjMap lhs = m_map(x, a, z, bb) * m_map(u, a, w, bb) * m_map(r, a, s, bb);
                       Point p = m_map(x, a, r, bb)(w), q = m_map(s, a, z, bb)(u);
                       return same_point_map(lhs, m_map(p, a, q, bb), g);
                   }});
    ids.push_back({"5",
                   "distributivity M_{xz}^{ab} M_{uv}^{cd} (M_{xz}^{ab})^{-1} = "
                   "M_{(xuz)_{ab},(xvz)_{ab}}^{(xcz)_{ab},(xdz)_{ab}}",
                   {"x", "a", "z", "b", "u", "c", "v", "d"},
                   [](Sampler& s) {
                       auto v = draw_chain4(s);
                       auto w = draw_chain4(s);
                       v.insert(v.end(), w.begin(), w.end());
                       return v;
                   },
                   [&](const std::vector<Point>& v) {
                       ProjMap G = m_map(v[0], v[1], v[2], v[3]);
                       ProjMap lhs = G * m_map(v[4], v[5], v[6], v[7]) * G.inverse();
                       return same_point_map(lhs, m_map(G(v[4]), G(v[5]), G(v[6]), G(v[7])), g);
                   }});
    return run_suite(g, "associative", ids, b, parallel);
}

// ---------------------------------------------------------------- derived structures

namespace {

std::vector<int> positions(int n, const std::vector<int>& members) {
    std::vector<int> pos(std::size_t(n), -1);
    for (std::size_t i = 0; i < members.size(); ++i) pos[std::size_t(members[i])] = int(i);
    return pos;
}

CheckRecord closure_record(const std::string& name, const std::string& ref, std::uint64_t cases,
                           const std::optional<json>& witness) {
    CheckRecord r;
    r.name = name;
    r.paper_ref = ref;
    r.cases = cases;
    r.status = witness ? Status::Fail : Status::Pass;
    if (witness) r.witness = *witness;
    return r;
}

}  // namespace

UaTorsor ua_torsor(const JTable& t, int a) {
    const FiniteGeometry& g = *t.geo;
    UaTorsor out;
    out.a = a;
    out.members = g.U(a);
    const int m = int(out.members.size());
    auto pos = positions(t.n, out.members);
    out.torsor = TorsorTable::from(m, [&](int x, int y, int z) {
        int r = t(out.members[std::size_t(x)], a, out.members[std::size_t(z)], out.members[std::size_t(y)]);
        return std::max(0, pos[std::size_t(r)]);
    });
    out.action = ActionTable{out.torsor, t.n, std::vector<Perm>(std::size_t(m * m))};
    for (int x = 0; x < m; ++x)
        for (int z = 0; z < m; ++z)
            out.action.M[std::size_t(x * m + z)] = t.at(out.members[std::size_t(x)], a, out.members[std::size_t(z)]);
    return out;
}

UabReflection uab_reflection(const JTable& t, int a, int b) {
    const FiniteGeometry& g = *t.geo;
    UabReflection out;
    out.a = a;
    out.b = b;
    out.members = g.U(a, b);
    const int m = int(out.members.size());
    auto pos = positions(t.n, out.members);
    out.space.n = m;
    out.action.m = t.n;
    for (int x = 0; x < m; ++x) {
        const Perm& S = t.at(a, out.members[std::size_t(x)], b);
        Perm s(static_cast<std::size_t>(m));
        for (int y = 0; y < m; ++y) s[std::size_t(y)] = std::max(0, pos[std::size_t(S[std::size_t(out.members[std::size_t(y)])])]);
        out.space.s.push_back(s);
        out.action.S.push_back(S);
    }
    out.action.space = out.space;
    return out;
}

D2Reflection d2_reflection(const JTable& t) {
    const FiniteGeometry& g = *t.geo;
    const int n = t.n;
    D2Reflection out;
    out.pairs = g.D2();
    const int m = int(out.pairs.size());
    std::vector<int> pos(std::size_t(n * n), -1);
    for (int i = 0; i < m; ++i) pos[std::size_t(out.pairs[std::size_t(i)][0] * n + out.pairs[std::size_t(i)][1])] = i;
    out.space.n = m;
    out.action.m = n * n;
    out.tau.resize(std::size_t(m));
    for (int i = 0; i < m; ++i) {
        auto [x, a] = out.pairs[std::size_t(i)];
        out.tau[std::size_t(i)] = pos[std::size_t(a * n + x)];
        const Perm &P = t.at(x, a, x), &Q = t.at(a, x, a);
        Perm S(static_cast<std::size_t>(n * n));
        for (int y = 0; y < n; ++y)
            for (int b = 0; b < n; ++b) S[std::size_t(y * n + b)] = P[std::size_t(y)] * n + Q[std::size_t(b)];
        Perm s(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            auto [y, b] = out.pairs[std::size_t(j)];
            s[std::size_t(j)] = std::max(0, pos[std::size_t(S[std::size_t(y * n + b)])]);
        }
        out.space.s.push_back(s);
        out.action.S.push_back(S);
    }
    out.action.space = out.space;
    return out;
}

DerivedStructures derived_structures(const JTable& t, const DerivedSelection& sel, bool parallel) {
    Stopwatch sw;
    const FiniteGeometry& g = *t.geo;
    const int n = t.n;
    DerivedStructures out;
    Accumulator acc;

    std::vector<int> anchors = sel.anchors;
    if (anchors.empty())
        for (int a = 0; a < n; ++a) anchors.push_back(a);
    for (int a : anchors) {
        UaTorsor u = ua_torsor(t, a);
        json ctx{{"structure", "U_a"}, {"a", g.label(a)}};
        if (u.members.empty()) {
            CheckRecord r{"U_a nonempty", "U_a has points", "exhaustive", 1, Status::Skipped, json(), "U_a empty, skipped"};
            acc.add(r, ctx);
            continue;
        }
        auto pos = positions(n, u.members);
        std::optional<json> bad;
        std::uint64_t cases = 0;
        for (int x : u.members)
            for (int y : u.members)
                for (int z : u.members) {
                    ++cases;
                    if (!bad && pos[std::size_t(t(x, a, z, y))] < 0) bad = json{{"x", g.label(x)}, {"y", g.label(y)}, {"z", g.label(z)}};
                }
        acc.add(closure_record("U_a stable", "U_a is stable under (xyz)_a", cases, bad), ctx);
        if (bad) continue;
        acc.add(check_torsor(u.torsor, true, parallel), ctx);
        CheckReport mid = check_torsor_middle(u.torsor, parallel);
        for (auto& r : mid.checks) r.name = "middle " + r.name;
        acc.add(mid, ctx);
        acc.add(check_inversive_action(u.action, parallel), ctx);
        CheckReport tr;
        derived_translations(u.action, tr, parallel);
        acc.add(tr, ctx);
        acc.add(transvections_and_formulas(symmetry_from_action(u.action), &u.action, parallel), ctx);
        std::optional<json> cbad;
        std::uint64_t ccases = 0;
        for (int x : u.members)
            for (int y : u.members) {
                ++ccases;
                if (!cbad && t(a, x, a, y) != t(x, a, x, y)) cbad = json{{"x", g.label(x)}, {"y", g.label(y)}};
            }
        acc.add(closure_record("compatibility", "J^{aa}_x(y) = (xyx)_a on U_a", ccases, cbad), ctx);
        out.torsors.push_back(std::move(u));
    }

    std::vector<std::array<int, 2>> pairs = sel.pairs;
    if (pairs.empty())
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                if (!g.U(a, b).empty()) pairs.push_back({a, b});
    for (auto [a, b] : pairs) {
        UabReflection r = uab_reflection(t, a, b);
        json ctx{{"structure", "U_ab"}, {"a", g.label(a)}, {"b", g.label(b)}};
        if (r.members.empty()) {
            CheckRecord rec{"U_ab nonempty", "U_ab has points", "exhaustive", 1, Status::Skipped, json(), "U_ab empty, skipped"};
            acc.add(rec, ctx);
            continue;
        }
        auto pos = positions(n, r.members);
        std::optional<json> bad;
        std::uint64_t cases = 0;
        for (int x : r.members)
            for (int y : r.members) {
                ++cases;
                if (!bad && pos[std::size_t(t(a, x, b, y))] < 0) bad = json{{"x", g.label(x)}, {"y", g.label(y)}};
            }
        acc.add(closure_record("U_ab stable", "U_ab is stable under J^{ab}_x", cases, bad), ctx);
        if (bad) continue;
        acc.add(check_reflection_space(r.space, parallel), ctx);
        acc.add(check_symmetry_action(r.action, parallel), ctx);
        acc.add(transvections_and_formulas(r.action, nullptr, parallel), ctx);
        out.reflections.push_back(std::move(r));
    }

    if (sel.d2) {
        D2Reflection d = d2_reflection(t);
        json ctx{{"structure", "D2"}};
        acc.add(check_reflection_space(d.space, parallel), ctx);
        acc.add(check_symmetry_action(d.action, parallel), ctx);
        const int m = d.space.n;
        auto tau_sp = sweep(
            m, 2,
            [&](const int* v) {
                int p = v[0], q = v[1];
                return d.space.s[std::size_t(d.tau[std::size_t(p)])][std::size_t(d.tau[std::size_t(q)])] ==
                               d.tau[std::size_t(d.space.s[std::size_t(p)][std::size_t(q)])]
                           ? Verdict::Pass
                           : Verdict::Fail;
            },
            parallel);
        auto pair_label = [&](int i) {
            auto [x, a] = d.pairs[std::size_t(i)];
            return "(" + g.label(x) + "," + g.label(a) + ")";
        };
        CheckRecord rt = sweep_record("tau automorphism", "s_{tau p}(tau q) = tau(s_p(q)) on D2", tau_sp, {"p", "q"});
        if (tau_sp.witness) rt.witness = json{{"p", pair_label((*tau_sp.witness)[0])}, {"q", pair_label((*tau_sp.witness)[1])}};
        acc.add(rt, ctx);
        auto tau_act = sweep(
            m, 1,
            [&](const int* v) {
                const Perm& S = d.action.S[std::size_t(v[0])];
                const Perm& St = d.action.S[std::size_t(d.tau[std::size_t(v[0])])];
                for (int y = 0; y < n; ++y)
                    for (int b = 0; b < n; ++b) {
                        int img = S[std::size_t(b * n + y)];
                        int swapped = (img % n) * n + img / n;
                        if (St[std::size_t(y * n + b)] != swapped) return Verdict::Fail;
                    }
                return Verdict::Pass;
            },
            parallel);
        CheckRecord ra = sweep_record("tau action", "tau S_p tau = S_{tau p} on X^2", tau_act, {"p"});
        if (tau_act.witness) ra.witness = json{{"p", pair_label((*tau_act.witness)[0])}};
        acc.add(ra, ctx);
        out.d2 = std::move(d);
    }
    out.report = acc.take();
    out.report.suite = "derived";
    out.report.ring = g.geometry().ring()->text();
    out.report.geometry = g.geometry().text();
    out.report.elapsed_ms = sw.ms();
    return out;
}

CheckReport associative_torsors(const MTable& t, bool parallel) {
    const FiniteGeometry& g = *t.geo;
    const int n = t.n;
    Accumulator acc;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            auto members = g.U(a, b);
            if (members.empty()) continue;
            auto pos = positions(n, members);
            const int m = int(members.size());
            json ctx{{"a", g.label(a)}, {"b", g.label(b)}};
            bool closed = true;
            TorsorTable tt = TorsorTable::from(m, [&](int x, int y, int z) {
                int r = t.at(members[std::size_t(x)], a, members[std::size_t(z)], b)[std::size_t(members[std::size_t(y)])];
                if (pos[std::size_t(r)] < 0) closed = false;
                return std::max(0, pos[std::size_t(r)]);
            });
            acc.add(closure_record("U_ab stable", "U_ab is stable under (xyz)_ab", std::uint64_t(m * m * m),
                                   closed ? std::nullopt : std::optional<json>(json::object())),
                    ctx);
            if (closed) acc.add(check_torsor(tt, a == b, parallel), ctx);
        }
    CheckReport rep = acc.take();
    rep.suite = "associative-torsors";
    rep.ring = g.geometry().ring()->text();
    rep.geometry = g.geometry().text();
    return rep;
}

// ---------------------------------------------------------------- polarity, morphisms, ideals

PolaritySpace polarity_space(const JTable& t, const Perm& p) {
    const FiniteGeometry& g = *t.geo;
    const int n = t.n;
    if (!is_permutation(p, n)) throw NotPolarity("polarity must be a bijection of the points");
    for (int x = 0; x < n; ++x)
        if (p[std::size_t(p[std::size_t(x)])] != x) throw NotPolarity("p^2 != id at " + g.label(x));
    PolaritySpace out;
    for (int x = 0; x < n; ++x)
        if (g.tr(p[std::size_t(x)], x)) out.members.push_back(x);
    if (out.members.empty()) throw NotPolarity("no non-isotropic point: p(x) is never transversal to x");
    auto pos = positions(n, out.members);
    const int m = int(out.members.size());
    out.space.n = m;
    std::optional<json> bad;
    for (int i = 0; i < m; ++i) {
        int x = out.members[std::size_t(i)];
        const Perm& S = t.at(x, p[std::size_t(x)], x);
        Perm s(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            int y = out.members[std::size_t(j)];
            int r = pos[std::size_t(S[std::size_t(y)])];
            if (r < 0 && !bad) bad = json{{"x", g.label(x)}, {"y", g.label(y)}};
            s[std::size_t(j)] = std::max(0, r);
        }
        out.space.s.push_back(s);
    }
    out.report.suite = "polarity";
    out.report.ring = g.geometry().ring()->text();
    out.report.geometry = g.geometry().text();
    out.report.add(closure_record("stable", "X^(p) is stable under J^{xx}_{p(x)}", std::uint64_t(m * m), bad));
    out.report.absorb(check_morphism(p, t, t), "automorphism ");
    if (!bad) out.report.absorb(check_reflection_space(out.space));
    return out;
}

CheckReport check_morphism(const std::vector<int>& f, const JTable& src, const JTable& dst, bool parallel) {
    const FiniteGeometry& g = *src.geo;
    const FiniteGeometry& h = *dst.geo;
    CheckReport rep;
    rep.suite = "morphism";
    rep.ring = g.geometry().ring()->text();
    rep.geometry = g.geometry().text();
    auto d2 = g.D2();
    auto tr = sweep(
        int(d2.size()), 1,
        [&](const int* v) {
            auto [x, a] = d2[std::size_t(v[0])];
            return h.tr(f[std::size_t(x)], f[std::size_t(a)]) ? Verdict::Pass : Verdict::Fail;
        },
        parallel);
    rep.add(point_record("transversality", "x transversal to a implies f(x) transversal to f(a)", tr, {"x", "a"}, g,
                         [&](const std::vector<int>& w) {
                             auto e = d2[std::size_t(w[0])];
                             return std::vector<int>{e[0], e[1]};
                         }));
    if (tr.witness) {
        CheckRecord skip{"J", "f(J^{xz}_a(y)) = J^{fx,fz}_{fa}(fy)", "exhaustive", 0, Status::Skipped, json(),
                         "skipped: transversality not preserved"};
        rep.add(skip);
        return rep;
    }
    auto d3 = g.D3();
    auto jr = sweep(
        int(d3.size()), 1,
        [&](const int* v) {
            auto [x, a, z] = d3[std::size_t(v[0])];
            const Perm& S = src.at(x, a, z);
            const Perm& T = dst.at(f[std::size_t(x)], f[std::size_t(a)], f[std::size_t(z)]);
            for (int y = 0; y < src.n; ++y)
                if (f[std::size_t(S[std::size_t(y)])] != T[std::size_t(f[std::size_t(y)])]) return Verdict::Fail;
            return Verdict::Pass;
        },
        parallel);
    rep.add(point_record("J", "f(J^{xz}_a(y)) = J^{fx,fz}_{fa}(fy)", jr, {"x", "a", "z"}, g, [&](const std::vector<int>& w) {
        auto e = d3[std::size_t(w[0])];
        return std::vector<int>{e[0], e[1], e[2]};
    }));
    return rep;
}

CheckReport check_inner_ideal(const JTable& t, const std::vector<int>& subset) {
    const FiniteGeometry& g = *t.geo;
    const int n = t.n;
    std::vector<char> in(std::size_t(n), 0);
    for (int y : subset) in[std::size_t(y)] = 1;
    CheckReport rep;
    rep.suite = "inner-ideal";
    rep.ring = g.geometry().ring()->text();
    rep.geometry = g.geometry().text();
    std::optional<json> bad;
    std::uint64_t cases = 0;
    for (int a = 0; a < n && !bad; ++a)
        for (int x : subset)
            for (int z : subset)
                for (int y : subset) {
                    if (bad || !g.tr(x, a) || !g.tr(y, a) || !g.tr(z, a)) continue;
                    ++cases;
                    if (!in[std::size_t(t(x, a, z, y))])
                        bad = json{{"x", g.label(x)}, {"a", g.label(a)}, {"z", g.label(z)}, {"y", g.label(y)}};
                }
    rep.add(closure_record("affine", "U_a meets Y in a subspace stable under (xyz)_a, for every a", cases, bad));
    std::optional<json> bad2;
    std::uint64_t cases2 = 0;
    for (int x : subset)
        for (int z : subset)
            for (int w = 0; w < n && !bad2; ++w) {
                if (!g.tr(x, w) || !g.tr(z, w)) continue;
                for (int y : subset) {
                    ++cases2;
                    if (!in[std::size_t(t(x, w, z, y))]) {
                        bad2 = json{{"x", g.label(x)}, {"z", g.label(z)}, {"w", g.label(w)}, {"y", g.label(y)}};
                        break;
                    }
                }
            }
    CheckRecord r2 = closure_record("symmetric", "Y is invariant under J^{xz}_w for x,z in Y and w in U_xz", cases2, bad2);
    r2.mode = "cross-check";
    rep.add(r2);
    return rep;
}

json to_json(const JTable& t) {
    const FiniteGeometry& g = *t.geo;
    json pts = json::array();
    for (int i = 0; i < t.n; ++i) pts.push_back(g.label(i));
    json maps = json::array();
    for (auto [x, a, z] : g.D3()) maps.push_back(json{{"x", x}, {"a", a}, {"z", z}, {"perm", t.at(x, a, z)}});
    return json{{"geometry", g.geometry().text()}, {"points", pts}, {"J", maps}};
}

}  // namespace jordanlab
