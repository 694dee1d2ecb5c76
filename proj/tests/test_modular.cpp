#include "doctest.h"
#include "jordanlab/modular.hpp"

using namespace jordanlab;

namespace {
Triple standard_triple(const Geometry& g) {
    return {g.parse_point("0"), g.parse_point("inf"), g.parse_point("1")};
}
// affine coordinate mod p, -1 at infinity
long long coord(const Geometry& g, const Point& x) {
    auto t = g.affine_coordinate(x);
    return t ? std::stoll(t->str()) : -1;
}
long long inv_mod(long long a, long long p) {
    for (long long b = 1; b < p; ++b)
        if (a * b % p == 1) return b;
    return -1;
}
// Moebius action of [[a,b],[c,d]] on F_p u {inf}, coordinates as in coord().
long long moebius(const IntMatrix2& m, long long z, long long p) {
    auto md = [p](long long v) { return ((v % p) + p) % p; };
    long long num, den;
    if (z < 0) {
        num = md(m.a);
        den = md(m.c);
    } else {
        num = md(m.a * z + m.b);
        den = md(m.c * z + m.d);
    }
    if (den == 0) return -1;
    return md(num * inv_mod(den, p));
}
}  // namespace

TEST_CASE("integer matrix words") {
    IntMatrix2 st = generator_matrix('S') * generator_matrix('T');
    CHECK(IntegerMatrixWord::parse("STST").matrix() == st * st);
    CHECK(IntegerMatrixWord::parse("st").matrix() == generator_matrix('S').inverse() * generator_matrix('T').inverse());
    CHECK((st * st * st).projectively_equal(IntMatrix2{}));
    CHECK_THROWS_AS(IntegerMatrixWord::parse("SXT"), ParseError);
    // factorization round trips on a grid of GL(2,Z) matrices
    int count = 0;
    for (long long a = -7; a <= 7; ++a)
        for (long long b = -7; b <= 7; ++b)
            for (long long c = -7; c <= 7; ++c)
                for (long long d = -7; d <= 7; ++d) {
                    IntMatrix2 m{a, b, c, d};
                    if (m.det() != 1 && m.det() != -1) continue;
                    CHECK(IntegerMatrixWord::of(m).matrix() == m);
                    ++count;
                }
    CHECK(count > 100);
    CHECK_THROWS_AS(IntegerMatrixWord::of({2, 0, 0, 1}), DomainError);
}

TEST_CASE("generators act as Moebius maps on the standard triple") {
    for (long long p : {5LL, 7LL}) {
        Geometry g = Geometry::parse("projline:Fp:" + std::to_string(p));
        Triple t = standard_triple(g);
        auto gens = modular_generators(t);
        for (const Point& z : g.enumerate()) {
            long long v = coord(g, z);
            CHECK(coord(g, gens.T(z)) == moebius(generator_matrix('T'), v, p));
            CHECK(coord(g, gens.I(z)) == moebius(generator_matrix('I'), v, p));
            CHECK(coord(g, gens.S(z)) == moebius(generator_matrix('S'), v, p));
            // J^{ab}_c is z -> 1/z and C_abc is z -> 1 - 1/z
            CHECK(coord(g, j_map(t.a, t.c, t.b)(z)) == moebius({0, 1, 1, 0}, v, p));
            ProjMap C = j_map(t.a, t.c, t.b) * j_map(t.b, t.a, t.c);
            CHECK(coord(g, C(z)) == moebius({1, -1, 1, 0}, v, p));
        }
        CHECK(same_point_map(modular_hom(t, IntegerMatrixWord::parse(std::string(std::size_t(p), 'T'))),
                             ProjMap::identity(g.ring(), 2), g));
        // words with the same image in PGL give the same map
        CHECK(same_point_map(modular_hom(t, IntegerMatrixWord::parse("SS")), ProjMap::identity(g.ring(), 2), g));
        CHECK(same_point_map(modular_hom(t, IntegerMatrixWord::parse("F")),
                             modular_hom(t, IntegerMatrixWord::parse("sI")), g));
        auto rep = modular_relations(g, t);
        INFO(p);
        CHECK(rep.passed());
        CHECK(rep.find("row L^{ca}_b") != nullptr);
        CHECK(rep.find("([S][T])^3") != nullptr);
    }
}

TEST_CASE("relations also hold over Q and on a Grassmannian triple") {
    Geometry g = Geometry::parse("projline:Q");
    CHECK(modular_relations(g, standard_triple(g)).passed());
    Geometry gr = Geometry::parse("gras:Q:4");
    Rng rng(7);
    Point a = gr.random_point_of_rank(rng, 2), b, c;
    do b = gr.random_point_of_rank(rng, 2); while (!transversal(a, b));
    do c = gr.random_point_of_rank(rng, 2); while (!transversal(a, c) || !transversal(b, c));
    CHECK(modular_relations(gr, {a, b, c}).passed());
}

TEST_CASE("S3 subgroup") {
    Geometry g2 = Geometry::parse("projline:Fp:2");
    auto s2 = s3_subgroup(g2, standard_triple(g2));
    CHECK(s2.report.passed());
    CHECK(s2.report.find("faithful")->status == Status::Pass);
    Geometry g7 = Geometry::parse("projline:Fp:7");
    auto s7 = s3_subgroup(g7, standard_triple(g7));
    CHECK(s7.report.passed());
    CHECK(s7.names[4] == "(123)");
    Point two = g7.parse_point("2");
    CHECK(g7.label(s7.elements[1](two)) == "4");  // 1/2 = 4 mod 7
    CHECK(g7.label(s7.elements[4](two)) == "4");  // 1 - 1/2 = 1/2
    CHECK_THROWS_AS(s3_subgroup(g7, {g7.parse_point("0"), g7.parse_point("0"), g7.parse_point("1")}), DomainError);
}

TEST_CASE("orbit of a triple and the map from the integral line") {
    Geometry g = Geometry::parse("projline:Fp:3");
    auto o = orbit_map(g, standard_triple(g));
    CHECK(o.complete);
    CHECK(o.orbit.size() == 4);
    CHECK(o.report.passed());
    for (const char* n : {"equivariance", "morphism", "FP!", "JP!", "onto orbit"}) CHECK(o.report.find(n) != nullptr);
    Geometry q = Geometry::parse("projline:Q");
    auto oq = orbit_map(q, standard_triple(q), 2, 3);
    CHECK(oq.report.passed());
}

TEST_CASE("idempotents") {
    Geometry g = Geometry::parse("projline:Fp:5");
    Triple t = standard_triple(g);
    auto chk = is_idempotent(g, {t.a, t.c, t.b, t.a});
    CHECK(chk.kind == IdempotentKind::Strong);
    auto rep = idempotent_rep(g, {t.a, t.c, t.b, t.a});
    CHECK(rep.strong);
    CHECK(rep.report.passed());
    CHECK(same_point_map(rep.Z * rep.Zp, ProjMap::identity(g.ring(), 2), g));
    // 1 is not fixed by J^{00}_2 on P^1(F_5)
    Point two = g.parse_point("2");
    auto bad = is_idempotent(g, {t.a, two, t.b, t.c});
    CHECK(bad.kind == IdempotentKind::None);
    CHECK_THROWS_AS(idempotent_rep(g, {t.a, two, t.b, t.c}), DomainError);
    CHECK_THROWS_AS(is_idempotent(g, {t.a, t.a, t.b, t.c}), DomainError);

    auto fg = std::make_shared<const FiniteGeometry>(g);
    auto s = search_idempotents(jordan_table(fg));
    CHECK(s.chains > 0);
    CHECK(s.idempotents >= 1);
    CHECK(s.strong <= s.idempotents);
}

TEST_CASE("Peirce example") {
    auto p2 = peirce_example(Ring::parse("Fp:2"), 1, 1, 1, 1);
    CHECK(p2.geometry.dim() == 4);
    CHECK_FALSE(transversal(p2.q.a, p2.q.y));
    CHECK(peirce_consistency(p2).passed());
    auto r2 = idempotent_rep(p2.geometry, p2.q);
    CHECK(r2.strong);
    CHECK(r2.report.find("(ABA)^4")->status == Status::Pass);
    CHECK(r2.report.find("Z fixes a,x,b,y")->status == Status::Pass);
    CHECK(r2.report.find("Z order <= 2")->status == Status::Pass);
    // Z is the identity in characteristic 2
    CHECK_FALSE(r2.z_moves.has_value());
    CHECK(r2.report.find("Z nontrivial")->status == Status::Skipped);
    CHECK(same_point_map(p2.embed(generator_matrix('S')), p2.embed({0, -1, 1, 0}), p2.geometry));

    for (const char* rs : {"Q", "Fp:3"}) {
        INFO(rs);
        auto p = peirce_example(Ring::parse(rs), 1, 1, 1, 1);
        CHECK(peirce_consistency(p).passed());
        auto r = idempotent_rep(p.geometry, p.q);
        CHECK(r.strong);
        CHECK(r.z_moves.has_value());
        CHECK(r.z_trivial_on_orbit);
        for (const char* n : {"(ABA)^4", "J^2", "(JA)^2", "(JB)^2", "Z fixes a,x,b,y", "Z central", "Z order <= 2",
                              "ABA=BAB iff strong", "ZZ'=1 iff strong", "W^2 = Z"})
            CHECK(r.report.find(n)->status == Status::Pass);
    }

    // Without the determinant twist on H the reflections do not match.
    auto pq = peirce_example(Ring::rationals(), 1, 1, 1, 1);
    auto twisted = pq.embed;
    pq.embed = [twisted](const IntMatrix2& m) {
        Matrix M = twisted(m).matrix();
        M(3, 3) = M.ring()->one();
        return ProjMap(M);
    };
    CHECK_FALSE(peirce_consistency(pq).passed());
}
