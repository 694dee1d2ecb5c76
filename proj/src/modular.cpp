#include "jordanlab/modular.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace jordanlab {

// ---------------------------------------------------------------- integer matrices and words

IntMatrix2 IntMatrix2::inverse() const {
    long long D = det();
    if (D != 1 && D != -1) throw DomainError("matrix not in GL(2,Z): " + str());
    return {d * D, -b * D, -c * D, a * D};
}

std::string IntMatrix2::str() const {
    std::ostringstream os;
    os << "[[" << a << "," << b << "],[" << c << "," << d << "]]";
    return os.str();
}

IntMatrix2 generator_matrix(char g) {
    switch (g) {
        case 'S': return {0, 1, -1, 0};
        case 'T': return {1, 1, 0, 1};
        case 'F': return {0, 1, 1, 0};
        case 'I': return {1, 0, 0, -1};
    }
    throw ParseError(std::string("unknown generator '") + g + "'");
}

IntMatrix2 IntegerMatrixWord::matrix() const {
    IntMatrix2 m;
    for (char ch : letters) {
        char up = char(std::toupper(static_cast<unsigned char>(ch)));
        IntMatrix2 g = generator_matrix(up);
        m = m * (ch == up ? g : g.inverse());
    }
    return m;
}

IntegerMatrixWord IntegerMatrixWord::parse(const std::string& s) {
    IntegerMatrixWord w;
    for (char ch : s) {
        if (std::isspace(static_cast<unsigned char>(ch)) || ch == '*') continue;
        if (std::string("STFIstfi").find(ch) == std::string::npos)
            throw ParseError(std::string("word letters are S,T,F,I (lower case = inverse), got '") + ch + "'");
        w.letters.push_back(ch);
    }
    return w;
}

IntegerMatrixWord IntegerMatrixWord::of(const IntMatrix2& m0) {
    long long D = m0.det();
    if (D != 1 && D != -1) throw DomainError("matrix not in GL(2,Z): " + m0.str());
    std::string tail;
    IntMatrix2 R = m0;
    if (D == -1) {
        R = m0 * generator_matrix('I');
        tail = "I";
    }
    std::string w;
    auto powT = [&](long long q) { w.append(std::size_t(q > 0 ? q : -q), q > 0 ? 'T' : 't'); };
    const IntMatrix2 Sinv = generator_matrix('S').inverse();
    while (R.c != 0) {
        long long q = R.a / R.c;
        if (q != 0) {
            R = IntMatrix2{1, -q, 0, 1} * R;
            powT(q);
        }
        R = Sinv * R;
        w.push_back('S');
    }
    if (R.a == 1) {
        powT(R.b);
    } else {
        w += "SS";
        powT(-R.b);
    }
    IntegerMatrixWord out{w + tail};
    if (!(out.matrix() == m0)) throw StructuralError("word factorization failed for " + m0.str());
    return out;
}

ProjMap evaluate_word(const IntegerMatrixWord& w, const ProjMap& S, const ProjMap& T, const ProjMap& I) {
    ProjMap Si = S.inverse(), Ti = T.inverse(), Ii = I.inverse();
    ProjMap F = S * S * S * I, Fi = F.inverse();
    ProjMap out = ProjMap::identity(S.matrix().ring(), S.matrix().rows());
    for (char ch : w.letters) switch (ch) {
            case 'S': out = out * S; break;
            case 's': out = out * Si; break;
            case 'T': out = out * T; break;
            case 't': out = out * Ti; break;
            case 'I': out = out * I; break;
            case 'i': out = out * Ii; break;
            case 'F': out = out * F; break;
            case 'f': out = out * Fi; break;
            default: throw ParseError(std::string("bad word letter '") + ch + "'");
        }
    return out;
}

// ---------------------------------------------------------------- triples

void require_pairwise_transversal(const Triple& t) {
    if (!transversal(t.a, t.b) || !transversal(t.b, t.c) || !transversal(t.a, t.c))
        throw DomainError("triple is not pairwise transversal");
}

namespace {

// J^{pq}_r in the paper's index placement.
ProjMap J(const Point& p, const Point& r, const Point& q) { return j_map(p, r, q); }

CheckRecord bool_record(const std::string& name, const std::string& ref, bool ok, const json& witness = json()) {
    CheckRecord r;
    r.name = name;
    r.paper_ref = ref;
    r.cases = 1;
    r.status = ok ? Status::Pass : Status::Fail;
    if (!ok) r.witness = witness.is_null() ? json{{"detail", "relation violated"}} : witness;
    return r;
}

bool is_identity_map(const ProjMap& f, const Geometry& g) {
    return same_point_map(f, ProjMap::identity(g.ring(), g.dim()), g);
}

}  // namespace

S3Subgroup s3_subgroup(const Geometry& g, const Triple& t) {
    require_pairwise_transversal(t);
    const Point &a = t.a, &b = t.b, &c = t.c;
    S3Subgroup out;
    ProjMap id = ProjMap::identity(g.ring(), g.dim());
    ProjMap t12 = J(a, c, b), t23 = J(b, a, c), t13 = J(a, b, c);
    out.elements = {id, t12, t23, t13, t12 * t23, t23 * t12};
    out.names = {"(1)", "(12)", "(23)", "(13)", "(123)", "(132)"};
    // the same six elements as permutations of {0,1,2}, composed as functions
    using P3 = std::array<int, 3>;
    auto comp = [](const P3& f, const P3& h) { return P3{f[std::size_t(h[0])], f[std::size_t(h[1])], f[std::size_t(h[2])]}; };
    P3 e{0, 1, 2}, p12{1, 0, 2}, p23{0, 2, 1}, p13{2, 1, 0};
    std::array<P3, 6> perms{e, p12, p23, p13, comp(p12, p23), comp(p23, p12)};
    std::uint64_t cases = 0;
    json bad;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            ++cases;
            P3 pk = comp(perms[std::size_t(i)], perms[std::size_t(j)]);
            int k = int(std::find(perms.begin(), perms.end(), pk) - perms.begin());
            if (bad.is_null() &&
                !same_point_map(out.elements[std::size_t(i)] * out.elements[std::size_t(j)], out.elements[std::size_t(k)], g))
                bad = json{{"left", out.names[std::size_t(i)]}, {"right", out.names[std::size_t(j)]}};
        }
    CheckRecord mt = bool_record("S3 table", "the six maps multiply like S3", bad.is_null(), bad);
    mt.cases = cases;
    out.report.suite = "s3";
    out.report.ring = g.ring()->text();
    out.report.geometry = g.text();
    out.report.add(mt);
    ProjMap r = J(a, c, b) * J(a, b, c);
    out.report.add(bool_record("3-cycle", "(J^{ab}_c J^{ac}_b)^3 = id", is_identity_map(r * r * r, g)));
    bool distinct = true;
    for (int i = 0; i < 6; ++i)
        for (int j = i + 1; j < 6; ++j)
            distinct = distinct && !same_point_map(out.elements[std::size_t(i)], out.elements[std::size_t(j)], g);
    CheckRecord dr = bool_record("faithful", "the six maps are pairwise distinct", distinct);
    dr.mode = "observation";
    if (!distinct) {
        dr.status = Status::Skipped;
        dr.witness = json();
        dr.note = "S3 acts through a proper quotient on this geometry";
    }
    out.report.add(dr);
    return out;
}

ModularGenerators modular_generators(const Triple& t) {
    require_pairwise_transversal(t);
    const Point &a = t.a, &b = t.b, &c = t.c;
    return {J(b, a, b) * J(a, c, b), J(c, b, a) * J(a, b, a), J(b, a, b)};
}

ProjMap modular_hom(const Triple& t, const IntegerMatrixWord& w) {
    auto gens = modular_generators(t);
    return evaluate_word(w, gens.S, gens.T, gens.I);
}

CheckReport modular_relations(const Geometry& g, const Triple& t) {
    auto gens = modular_generators(t);
    const Point &a = t.a, &b = t.b, &c = t.c;
    CheckReport rep;
    rep.suite = "modular";
    rep.ring = g.ring()->text();
    rep.geometry = g.text();
    auto phi = [&](const IntMatrix2& m) { return evaluate_word(IntegerMatrixWord::of(m), gens.S, gens.T, gens.I); };
    const ProjMap &S = gens.S, &T = gens.T, &I = gens.I;
    rep.add(bool_record("[S]^2", "[S]^2 = 1", is_identity_map(S * S, g)));
    ProjMap ST = S * T;
    rep.add(bool_record("([S][T])^3", "([S][T])^3 = 1", is_identity_map(ST * ST * ST, g)));
    rep.add(bool_record("[I]^2", "[I]^2 = 1", is_identity_map(I * I, g)));
    rep.add(bool_record("([I][S])^2", "([I][S])^2 = 1", is_identity_map((I * S) * (I * S), g)));
    rep.add(bool_record("([I][T])^2", "([I][T])^2 = 1", is_identity_map((I * T) * (I * T), g)));
    rep.add(bool_record("sign", "words differing by -1 agree", same_point_map(phi({0, 1, -1, 0}), phi({0, -1, 1, 0}), g)));
    struct Row {
        const char* name;
        IntMatrix2 m;
        ProjMap f;
    };
    std::vector<Row> rows{
        {"J^{aa}_b", {-1, 0, 0, 1}, J(a, b, a)},
        {"J^{bb}_c", {-1, 2, 0, 1}, J(b, c, b)},
        {"J^{cc}_a", {-1, 0, -2, 1}, J(c, a, c)},
        {"L^{ba}_c", {2, -1, 1, 0}, J(b, c, a) * J(a, c, a)},
        {"L^{ca}_b", {1, 1, 0, 1}, J(c, b, a) * J(a, b, a)},
        {"L^{bc}_a", {1, 0, -1, 1}, J(b, a, b) * J(b, a, c)},
        {"J^{ab}_c", {0, 1, 1, 0}, J(a, c, b)},
        {"J^{bc}_a", {1, 0, 1, -1}, J(b, a, c)},
        {"J^{ac}_b", {-1, 1, 0, 1}, J(a, b, c)},
        {"C_{abc}", {1, -1, 1, 0}, J(a, c, b) * J(b, a, c)},
        {"C_{bac}", {0, 1, -1, 1}, J(b, a, c) * J(a, c, b)},
    };
    for (const auto& r : rows) {
        bool ok = same_point_map(phi(r.m), r.f, g);
        rep.add(bool_record(std::string("row ") + r.name, std::string(r.name) + " = phi(" + r.m.str() + ")", ok,
                            json{{"matrix", r.m.str()}, {"word", IntegerMatrixWord::of(r.m).letters}}));
    }
    return rep;
}

// ---------------------------------------------------------------- orbits

namespace {

struct PointSet {
    std::vector<Point> pts;
    std::unordered_map<std::string, int> idx;
    bool add(const Point& p) {
        auto k = p.key();
        if (idx.count(k)) return false;
        idx.emplace(k, int(pts.size()));
        pts.push_back(p);
        return true;
    }
    bool has(const Point& p) const { return idx.count(p.key()) != 0; }
};

// Points of the integral projective line of height <= h, as (p,q) coprime with q >= 0.
std::vector<std::pair<long long, long long>> zp1_points(int h) {
    std::vector<std::pair<long long, long long>> out{{1, 0}};
    for (long long q = 1; q <= h; ++q)
        for (long long p = -h; p <= h; ++p)
            if (std::gcd(p, q) == 1) out.push_back({p, q});
    return out;
}

// g in SL(2,Z) with g (0,1)^T = (p,q)^T.
IntMatrix2 carrier(long long p, long long q) {
    // find u,v with u q - v p = 1
    long long old_r = q, r = p, old_s = 1, s = 0, old_t = 0, t = 1;
    while (r != 0) {
        long long k = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - k * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - k * s);
        std::tie(old_t, t) = std::make_pair(t, old_t - k * t);
    }
    // old_s*q + old_t*p = old_r = +-1
    long long u = old_s * old_r, v = -old_t * old_r;
    IntMatrix2 g{u, p, v, q};
    if (g.det() != 1) throw StructuralError("carrier construction failed");
    return g;
}

std::pair<long long, long long> normalize_pq(long long p, long long q) {
    long long d = std::gcd(p, q);
    p /= d;
    q /= d;
    if (q < 0 || (q == 0 && p < 0)) {
        p = -p;
        q = -q;
    }
    return {p, q};
}

}  // namespace

OrbitResult orbit_map(const Geometry& g, const Triple& t, int depth, int height) {
    require_pairwise_transversal(t);
    OrbitResult out;
    out.report.suite = "orbit";
    out.report.ring = g.ring()->text();
    out.report.geometry = g.text();
    const std::size_t cap = g.ring()->is_finite() ? 100000 : 60;
    PointSet P;
    P.add(t.a);
    P.add(t.b);
    P.add(t.c);
    for (int round = 0; round < depth; ++round) {
        std::vector<Point> cur = P.pts;
        bool grew = false;
        for (const Point& w : cur)
            for (const Point& x : cur) {
                if (!transversal(x, w)) continue;
                for (const Point& z : cur) {
                    if (!transversal(z, w)) continue;
                    ProjMap f = j_map(x, w, z);
                    for (const Point& y : cur) grew = P.add(f(y)) || grew;
                }
            }
        if (!grew) {
            out.complete = true;
            break;
        }
        if (P.pts.size() > cap) break;
    }
    out.orbit = P.pts;

    auto gens = modular_generators(t);
    auto phi = [&](const IntMatrix2& m) { return evaluate_word(IntegerMatrixWord::of(m), gens.S, gens.T, gens.I); };
    auto Phi = [&](long long p, long long q) { return phi(carrier(p, q))(t.a); };
    auto pts = zp1_points(height);
    std::uint64_t cases = 0;
    json bad;
    for (auto [p, q] : pts)
        for (char h : {'S', 'T', 'I'}) {
            IntMatrix2 m = generator_matrix(h);
            auto [p2, q2] = normalize_pq(m.a * p + m.b * q, m.c * p + m.d * q);
            ++cases;
            if (bad.is_null() && Phi(p2, q2) != phi(m)(Phi(p, q)))
                bad = json{{"point", std::to_string(p) + ":" + std::to_string(q)}, {"generator", std::string(1, h)}};
        }
    CheckRecord eq = bool_record("equivariance", "Phi(g.x) = phi(g) Phi(x) on generators", bad.is_null(), bad);
    eq.cases = cases;
    out.report.add(eq);
    out.report.add(bool_record("base points", "Phi(0) = a, Phi(inf) = b, Phi(1) = c",
                               Phi(0, 1) == t.a && Phi(1, 0) == t.b && Phi(1, 1) == t.c));
    PointSet image;
    for (auto [p, q] : pts) image.add(Phi(p, q));
    bool inside = std::all_of(image.pts.begin(), image.pts.end(), [&](const Point& x) { return P.has(x); });
    out.report.add(bool_record("image in orbit", "Phi maps into <P>", inside));
    if (out.complete && g.ring()->is_finite()) {
        bool onto = std::all_of(P.pts.begin(), P.pts.end(), [&](const Point& x) { return image.has(x); });
        out.report.add(bool_record("onto orbit", "<P> is covered by Phi", onto));
    }
    // Morphism property on the small points of the integral line.
    {
        Geometry zl = Geometry::projective_line(Ring::integers());
        auto small = zp1_points(std::min(height, 2));
        auto zpt = [&](long long p, long long q) {
            return zl.point(Matrix::from_ints(Ring::integers(), 2, 1, {p, q}));
        };
        std::map<std::string, Point> phi_of;
        auto Phi_pt = [&](const Point& x) {
            auto v = normalize_pq(std::stoll(x.basis(0, 0).str()), std::stoll(x.basis(1, 0).str()));
            return Phi(v.first, v.second);
        };
        std::uint64_t mc = 0;
        json mbad;
        for (auto [pu, qu] : small)
            for (auto [pw, qw] : small)
                for (auto [pv, qv] : small) {
                    Point u = zpt(pu, qu), w = zpt(pw, qw), v = zpt(pv, qv);
                    if (!transversal(u, w) || !transversal(v, w)) continue;
                    ProjMap f = j_map(u, w, v);
                    ProjMap F = j_map(Phi_pt(u), Phi_pt(w), Phi_pt(v));
                    for (auto [py, qy] : small) {
                        Point y = zpt(py, qy);
                        ++mc;
                        if (mbad.is_null() && Phi_pt(f(y)) != F(Phi_pt(y)))
                            mbad = json{{"u", zl.label(u)}, {"w", zl.label(w)}, {"v", zl.label(v)}, {"y", zl.label(y)}};
                    }
                }
        CheckRecord mr = bool_record("morphism", "Phi(J^{uv}_w(y)) = J^{Phi u,Phi v}_{Phi w}(Phi y)", mbad.is_null(), mbad);
        mr.cases = mc;
        out.report.add(mr);
    }
    const Point &a = t.a, &b = t.b, &c = t.c;
    Point f = J(a, c, a)(b);
    out.report.add(bool_record("FP!", "J^{ca}_b(J^{aa}_c(b)) = J^{aa}_c(b)", J(c, b, a)(f) == f));
    bool jp = transversal(f, a) && transversal(f, c) && same_point_map(J(a, b, c), J(a, f, c), g);
    out.report.add(bool_record("JP!", "J^{ac}_b = J^{ac}_{J^{aa}_c(b)}", jp));
    return out;
}

// ---------------------------------------------------------------- idempotents

std::string to_string(IdempotentKind k) {
    switch (k) {
        case IdempotentKind::None: return "none";
        case IdempotentKind::Idempotent: return "idempotent";
        case IdempotentKind::Strong: return "strong";
    }
    return "?";
}

IdempotentCheck is_idempotent(const Geometry& g, const Quadruple& q) {
    const Point &a = q.a, &x = q.x, &b = q.b, &y = q.y;
    if (!transversal(a, x) || !transversal(x, b) || !transversal(b, y))
        throw DomainError("quadruple is not a transversal chain (a,x,b,y)");
    IdempotentCheck out;
    out.report.suite = "idempotent";
    out.report.ring = g.ring()->text();
    out.report.geometry = g.text();
    ProjMap Jaax = J(a, x, a), Jxyb = J(x, b, y), Jabx = J(a, x, b), Jbby = J(b, y, b), Jyyb = J(y, b, y);
    Point c = Jaax(b), d = Jxyb(a), w = Jabx(y), z = Jyyb(x);
    std::vector<std::pair<std::string, bool>> conds{
        {"J^{aa}_x(y) = y", Jaax(y) == y},
        {"J^{xy}_b(c) = c", Jxyb(c) == c},
        {"J^{aa}_x(d) = d", Jaax(d) == d},
        {"J^{xy}_b(w) = w", Jxyb(w) == w},
        {"J^{bb}_y(a) = a", Jbby(a) == a},
        {"J^{ab}_x(z) = z", Jabx(z) == z},
        {"J^{yy}_b(w) = w", Jyyb(w) == w},
        {"J^{ab}_x(d) = d", Jabx(d) == d},
    };
    bool all = true;
    for (auto& [name, ok] : conds) {
        out.report.add(bool_record(name, name, ok));
        all = all && ok;
    }
    if (!all) return out;
    out.kind = IdempotentKind::Idempotent;
    bool defined = transversal(y, c) && transversal(x, c) && transversal(a, w) && transversal(d, w);
    bool strong = defined && same_point_map(J(y, c, x), J(a, w, d), g);
    CheckRecord sr = bool_record("strong", "J^{yx}_{J^{aa}_x(b)} = J^{a,J^{xy}_b(a)}_{J^{ab}_x(y)}", strong);
    sr.mode = "classification";
    if (!strong) {
        sr.status = Status::Skipped;
        sr.witness = json();
        sr.note = defined ? "maps differ" : "maps undefined";
    }
    out.report.add(sr);
    if (strong) out.kind = IdempotentKind::Strong;
    return out;
}

IdempotentRep idempotent_rep(const Geometry& g, const Quadruple& q, Rng* rng) {
    auto chk = is_idempotent(g, q);
    if (chk.kind == IdempotentKind::None) throw DomainError("quadruple is not an idempotent");
    const Point &a = q.a, &x = q.x, &b = q.b, &y = q.y;
    IdempotentRep out;
    out.strong = chk.kind == IdempotentKind::Strong;
    out.A = translation(x, a, b);
    out.B = translation(b, x, y);
    out.J = J(b, x, b);
    ProjMap K = J(x, b, y) * J(a, x, a);
    out.Z = K * K;
    ProjMap AB = out.A * out.B;
    out.Zp = AB * AB * AB;
    const ProjMap &A = out.A, &B = out.B, &Jm = out.J, &Z = out.Z, &Zp = out.Zp;
    CheckReport& rep = out.report;
    rep.suite = "idempotent-rep";
    rep.ring = g.ring()->text();
    rep.geometry = g.text();
    ProjMap W = A * B * A;
    rep.add(bool_record("(ABA)^4", "(ABA)^4 = 1", is_identity_map(W * W * W * W, g)));
    rep.add(bool_record("J^2", "J^2 = 1", is_identity_map(Jm * Jm, g)));
    rep.add(bool_record("(JA)^2", "(JA)^2 = 1", is_identity_map((Jm * A) * (Jm * A), g)));
    rep.add(bool_record("(JB)^2", "(JB)^2 = 1", is_identity_map((Jm * B) * (Jm * B), g)));
    for (auto [name, M] : {std::pair<const char*, const ProjMap*>{"Z", &Z}, {"Z'", &Zp}}) {
        std::string n(name);
        bool fixes = (*M)(a) == a && (*M)(x) == x && (*M)(b) == b && (*M)(y) == y;
        rep.add(bool_record(n + " fixes a,x,b,y", n + " fixes a, x, b, y", fixes));
        bool central = same_point_map(*M * A, A * *M, g) && same_point_map(*M * B, B * *M, g) &&
                       same_point_map(*M * Jm, Jm * *M, g);
        rep.add(bool_record(n + " central", n + " commutes with A, B, J", central));
        rep.add(bool_record(n + " order <= 2", n + "^2 = 1", is_identity_map(*M * *M, g)));
    }
    rep.add(bool_record("W^2 = Z", "(ABA)^2 = Z", same_point_map(W * W, Z, g)));
    bool braid = same_point_map(W, B * A * B, g);
    bool zz = is_identity_map(Z * Zp, g);
    rep.add(bool_record("ABA=BAB iff strong", "ABA = BAB exactly when the idempotent is strong", braid == out.strong,
                        json{{"braid", braid}, {"strong", out.strong}}));
    rep.add(bool_record("ZZ'=1 iff strong", "ZZ' = 1 exactly when the idempotent is strong", zz == out.strong,
                        json{{"ZZ'=1", zz}, {"strong", out.strong}}));

    // Orbit of {a,x,b,y} under the group generated by A, B, J.
    PointSet orb;
    std::deque<Point> queue;
    for (const Point* p : {&a, &x, &b, &y})
        if (orb.add(*p)) queue.push_back(*p);
    std::vector<ProjMap> gens{A, B, Jm, A.inverse(), B.inverse()};
    const std::size_t cap = g.ring()->is_finite() ? 100000 : 200;
    while (!queue.empty() && orb.pts.size() < cap) {
        Point p = queue.front();
        queue.pop_front();
        for (const auto& h : gens) {
            Point r = h(p);
            if (orb.add(r)) queue.push_back(r);
        }
    }
    out.z_trivial_on_orbit = std::all_of(orb.pts.begin(), orb.pts.end(), [&](const Point& p) { return Z(p) == p; });
    CheckRecord zo = bool_record("Z trivial on orbit", "Z fixes the orbit of a, x, b, y", out.z_trivial_on_orbit);
    zo.cases = orb.pts.size();
    if (!queue.empty()) zo.note = "orbit truncated";
    rep.add(zo);

    // Look for a point of the whole geometry moved by Z.
    std::vector<Point> candidates;
    bool exhaustive = false;
    auto sz = g.ring()->size();
    if (sz && g.ring()->is_field()) {
        double count = std::pow(double(*sz), double(g.dim() * g.dim() / 4 + 1));
        if (count < 5e4) {
            candidates = g.enumerate();
            exhaustive = true;
        }
    }
    if (!exhaustive) {
        RingRef R = g.ring();
        for (std::size_t r : g.ranks())
            for (std::size_t i = 0; i + r <= g.dim(); ++i) {
                Matrix m(R, g.dim(), r);
                for (std::size_t j = 0; j < r; ++j) {
                    m(i + j, j) = R->one();
                    if (i + j + 1 < g.dim()) m((i + j + 1) % g.dim(), j) = R->one();
                }
                try {
                    candidates.push_back(g.point(m));
                } catch (const Error&) {
                }
            }
        Rng local(12345);
        Rng& rr = rng ? *rng : local;
        for (int i = 0; i < 64; ++i) candidates.push_back(g.random_point(rr));
    }
    for (const Point& p : candidates)
        if (Z(p) != p) {
            out.z_moves = p;
            break;
        }
    CheckRecord zn = bool_record("Z nontrivial", "Z moves some point of the geometry", out.z_moves.has_value(),
                                 json{{"searched", candidates.size()}, {"exhaustive", exhaustive}});
    zn.cases = candidates.size();
    zn.mode = exhaustive ? "exhaustive" : "random";
    if (out.z_moves) {
        zn.witness = json{{"point", g.label(*out.z_moves)}, {"image", g.label(Z(*out.z_moves))}};
    } else {
        zn.status = Status::Skipped;
        zn.note = "no moved point among the searched points";
    }
    rep.add(zn);
    return out;
}

PeirceExample peirce_example(RingRef r, std::size_t e, std::size_t u, std::size_t v, std::size_t h) {
    if (u != v || u == 0) throw DomainError("Peirce example needs u and v of equal positive rank");
    const std::size_t k = u, n = e + 2 * k + h;
    PeirceExample out;
    out.geometry = Geometry::grassmannian(r, n);
    out.e = e;
    out.k = k;
    out.h = h;
    auto span = [&](std::vector<std::vector<std::size_t>> cols) {
        Matrix m(r, n, cols.size());
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (std::size_t i : cols[j]) m(i, j) = r->one();
        return out.geometry.point(m);
    };
    std::vector<std::vector<std::size_t>> E, U, V, H, Wd;
    for (std::size_t i = 0; i < e; ++i) E.push_back({i});
    for (std::size_t i = 0; i < k; ++i) {
        U.push_back({e + i});
        V.push_back({e + k + i});
        Wd.push_back({e + i, e + k + i});
    }
    for (std::size_t i = 0; i < h; ++i) H.push_back({e + 2 * k + i});
    auto cat = [](auto p, const auto& q) {
        p.insert(p.end(), q.begin(), q.end());
        return p;
    };
    out.q = {span(cat(Wd, H)), span(cat(E, U)), span(cat(H, V)), span(cat(E, Wd))};
    out.embed = [r, e, k, h, n](const IntMatrix2& m) {
        Matrix M(r, n, n);
        for (std::size_t i = 0; i < e; ++i) M(i, i) = r->one();
        // m acts on v+u in this order
        for (std::size_t i = 0; i < k; ++i) {
            M(e + k + i, e + k + i) = r->from_int(m.a);
            M(e + k + i, e + i) = r->from_int(m.b);
            M(e + i, e + k + i) = r->from_int(m.c);
            M(e + i, e + i) = r->from_int(m.d);
        }
        Element tw = r->from_int(m.det());
        for (std::size_t i = 0; i < h; ++i) M(e + 2 * k + i, e + 2 * k + i) = tw;
        return ProjMap(M);
    };
    return out;
}

CheckReport peirce_consistency(const PeirceExample& p) {
    const Geometry& g = p.geometry;
    const Point &a = p.q.a, &x = p.q.x, &b = p.q.b, &y = p.q.y;
    CheckReport rep;
    rep.suite = "peirce";
    rep.ring = g.ring()->text();
    rep.geometry = g.text();
    ProjMap Lab = translation(x, a, b), Lxy = translation(b, x, y), Lyx = translation(b, y, x);
    ProjMap K = J(x, b, y) * J(a, x, a);
    struct Row {
        const char* name;
        IntMatrix2 m;
        ProjMap f;
    };
    std::vector<Row> rows{
        {"J^{bb}_x", {-1, 0, 0, 1}, J(b, x, b)},
        {"J^{xy}_b", {-1, 1, 0, 1}, J(x, b, y)},
        {"L^{yx}_b", {1, 1, 0, 1}, Lyx},
        {"J^{bb}_y", {-1, 2, 0, 1}, J(b, y, b)},
        {"L^{ab}_x", {1, 0, 1, 1}, Lab},
        {"J^{ab}_x", {-1, 0, -1, 1}, J(a, x, b)},
        {"J^{aa}_x", {-1, 0, -2, 1}, J(a, x, a)},
        {"Lambda^{ab}_{xy}", {1, -1, 1, 0}, Lab * Lxy},
        {"Lambda^3", {-1, 0, 0, -1}, Lab * Lxy * Lab * Lxy * Lab * Lxy},
        {"W^{xy}_{ab}", {0, -1, 1, 0}, Lab * Lxy * Lab},
        {"J^{xy}_b J^{aa}_x", {-1, 1, -2, 1}, K},
        {"(J^{xy}_b J^{aa}_x)^2", {-1, 0, 0, -1}, K * K},
    };
    for (const auto& r : rows)
        rep.add(bool_record(std::string("block ") + r.name, std::string(r.name) + " = block image of " + r.m.str(),
                            same_point_map(p.embed(r.m), r.f, g), json{{"matrix", r.m.str()}}));
    return rep;
}

IdempotentSearch search_idempotents(const JTable& t) {
    const FiniteGeometry& g = *t.geo;
    const int n = t.n;
    IdempotentSearch out;
    auto Jt = [&](int p, int r, int q) -> const Perm& { return t.at(p, r, q); };
    for (int a = 0; a < n; ++a)
        for (int x = 0; x < n; ++x) {
            if (!g.tr(a, x)) continue;
            for (int b = 0; b < n; ++b) {
                if (!g.tr(x, b)) continue;
                for (int y = 0; y < n; ++y) {
                    if (!g.tr(b, y)) continue;
                    ++out.chains;
                    const Perm &Jaax = Jt(a, x, a), &Jxyb = Jt(x, b, y), &Jabx = Jt(a, x, b), &Jbby = Jt(b, y, b),
                               &Jyyb = Jt(y, b, y);
                    int c = Jaax[std::size_t(b)], d = Jxyb[std::size_t(a)], w = Jabx[std::size_t(y)], z = Jyyb[std::size_t(x)];
                    bool idem = Jaax[std::size_t(y)] == y && Jxyb[std::size_t(c)] == c && Jaax[std::size_t(d)] == d &&
                                Jxyb[std::size_t(w)] == w && Jbby[std::size_t(a)] == a && Jabx[std::size_t(z)] == z &&
                                Jyyb[std::size_t(w)] == w && Jabx[std::size_t(d)] == d;
                    if (!idem) continue;
                    ++out.idempotents;
                    bool defined = g.tr(y, c) && g.tr(x, c) && g.tr(a, w) && g.tr(d, w);
                    if (defined && Jt(y, c, x) == Jt(a, w, d)) {
                        ++out.strong;
                    } else if (!out.non_strong) {
                        out.non_strong = std::array<int, 4>{a, x, b, y};
                    }
                }
            }
        }
    return out;
}

}  // namespace jordanlab
