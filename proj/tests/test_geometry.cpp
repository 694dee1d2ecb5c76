#include "doctest.h"
#include <set>
#include "jordanlab/geometry.hpp"

using namespace jordanlab;

namespace {
RingRef Q() { return Ring::rationals(); }
Element q(const char* s) { return Q()->parse_element(s); }
}  // namespace

TEST_CASE("enumeration sizes match Gaussian binomials") {
    CHECK(Geometry::parse("gras:Fp:2:3").enumerate().size() == 16);
    CHECK(Geometry::parse("projline:Fp:7").enumerate().size() == 8);
    CHECK(Geometry::parse("gras:Fp:3:4").enumerate().size() == 1 + 40 + 130 + 40 + 1);
    CHECK(Geometry::parse("gras:Fp:2:1+2").enumerate().size() == 14);
    CHECK(Geometry::parse("projline:Fq:4").enumerate().size() == 5);
    // every enumerated basis is already canonical and distinct
    auto pts = Geometry::parse("gras:Fp:3:4").enumerate();
    std::set<std::string> keys;
    for (auto& p : pts) {
        CHECK(canonical_span(p.basis) == p.basis);
        keys.insert(p.key());
    }
    CHECK(keys.size() == pts.size());
}

TEST_CASE("transversality examples") {
    auto g = Geometry::projective_line(Q());
    CHECK(transversal(g.infinity(), g.affine(Q()->zero())));
    CHECK_FALSE(transversal(g.infinity(), g.infinity()));
    auto F2 = Ring::prime_field(2);
    auto G = Geometry::grassmannian(F2, 3);
    auto e1 = G.point(Matrix::from_ints(F2, 3, 1, {1, 0, 0}));
    auto pl = G.point(Matrix::from_ints(F2, 3, 2, {1, 0, 1, 0, 0, 1}));
    // oracle: 3x3 determinant over F2 of [e1 | e1+e2 | e3] = 1
    CHECK(det(Matrix::hcat(e1.basis, pl.basis)).is_one());
    CHECK(transversal(e1, pl));
}

TEST_CASE("projectors") {
    auto g = Geometry::projective_line(Q());
    auto P = projector(g.infinity(), g.affine(Q()->zero()));
    CHECK(P == Matrix::from_ints(Q(), 2, 2, {1, 0, 0, 0}));
    auto x = g.point(Matrix::from_ints(Q(), 2, 1, {1, 1}));
    auto a = g.point(Matrix::from_ints(Q(), 2, 1, {0, 1}));
    auto Pxa = projector(x, a);
    CHECK(Pxa == Matrix::from_ints(Q(), 2, 2, {1, 0, 1, 0}));
    // oracle: idempotent, image x, kernel a
    CHECK(Pxa * Pxa == Pxa);
    CHECK((Pxa * a.basis).is_zero());
    CHECK(Pxa * x.basis == x.basis);
    auto G3 = Geometry::projective_line(Ring::prime_field(3));
    auto pts = G3.enumerate();
    for (auto& u : pts)
        for (auto& v : pts)
            if (transversal(u, v)) CHECK(projector(u, v) + projector(v, u) == Matrix::identity(G3.ring(), 2));
}

TEST_CASE("J and M examples on the rational projective line") {
    auto g = Geometry::projective_line(Q());
    auto A = [&](const char* s) { return g.affine(q(s)); };
    auto inf = g.infinity();
    CHECK(j_map(A("1"), inf, A("5"))(A("2")) == A("4"));
    CHECK(j_map(A("0"), A("2"), inf)(A("4")) == A("1"));
    CHECK(j_map(A("1"), A("2"), A("3"))(A("0")) == A("4"));
    CHECK(m_map(A("0"), A("2"), inf, A("3"))(A("6")) == A("1"));
    CHECK(m_map(A("1"), inf, A("3"), A("2"))(A("4")) == A("3/2"));
    CHECK(m_map(A("1"), A("2"), A("3"), inf)(A("0")) == A("5/2"));
    // J^2 = id as normalized map
    auto J = j_map(A("1"), A("2"), A("3"));
    CHECK((J * J).is_identity());
}

TEST_CASE("closed forms and the printed denominator") {
    CHECK(*closed_form::j_generic(q("1"), q("2"), q("3"), q("0")) == q("4"));
    CHECK(*closed_form::j_generic(q("1"), q("2"), q("3"), q("2")) == q("2"));
    CHECK(*closed_form::j_generic_printed(q("1"), q("2"), q("3"), q("2")) != q("2"));
    CHECK(*closed_form::m_xz_a_inf_at_zero(q("1"), q("2"), q("3")) == q("5/2"));
    CHECK(*closed_form::m_xz_inf_a(q("1"), q("3"), q("2"), q("4")) == q("3/2"));
}

TEST_CASE("scaling") {
    auto g = Geometry::projective_line(Q());
    auto inf = g.infinity();
    CHECK(scale(q("-1"), g.affine(q("0")), inf, g.affine(q("3"))) == g.affine(q("-3")));
    auto F5 = Ring::prime_field(5);
    auto h = Geometry::projective_line(F5);
    CHECK(scale(F5->from_int(2), h.affine(F5->zero()), h.infinity(), h.affine(F5->from_int(3))) ==
          h.affine(F5->from_int(1)));
    CHECK(scale(q("0"), g.affine(q("7")), inf, g.affine(q("3"))) == g.affine(q("7")));
    // duality for invertible r
    auto y = g.affine(q("1")), a = g.affine(q("4"));
    CHECK(scale_map(q("3"), y, a) == scale_map(q("1/3"), a, y));
}

TEST_CASE("translations, transporter, Bergman, triple decomposition") {
    auto F5 = Ring::prime_field(5);
    auto g = Geometry::projective_line(F5);
    auto A = [&](int t) { return g.affine(F5->from_int(t)); };
    auto inf = g.infinity();
    CHECK(translation(inf, A(0), A(0)).is_identity());
    CHECK(translation(inf, A(0), A(1))(A(3)) == A(2));
    // u-independence is asserted inside translation for every triple
    auto pts = g.enumerate();
    for (auto& a : pts)
        for (auto& x : pts)
            for (auto& z : pts)
                if (transversal(x, a) && transversal(z, a)) CHECK_NOTHROW(translation(a, x, z));
    CHECK(bergman(A(1), A(2), A(1), A(2)).is_identity());
    Rng rng(3);
    int done = 0;
    while (done < 30) {
        auto x = pts[rng() % pts.size()], a = pts[rng() % pts.size()], y = pts[rng() % pts.size()],
             b = pts[rng() % pts.size()];
        if (!(transversal(a, x) && transversal(x, b) && transversal(b, y) && transversal(y, a))) continue;
        ++done;
        auto B = bergman(x, a, y, b);
        CHECK(B(x) == x);
        CHECK(B(a) == a);
        CHECK(B == bergman_via_j(x, a, y, b));
        CHECK(B.inverse() == bergman(a, x, b, y));
    }
    auto G3 = Geometry::projective_line(Ring::prime_field(3));
    auto p3 = G3.enumerate();
    for (auto& x : p3)
        for (auto& a : p3)
            for (auto& y : p3)
                for (auto& b : p3)
                    if (transversal(x, a) && transversal(y, b)) {
                        auto T = transporter(G3, {x, a}, {y, b});
                        CHECK(T(x) == y);
                        CHECK(T(a) == b);
                    }
    auto o = A(0);
    auto td = triple_decomposition(ProjMap::identity(F5, 2), o, inf);
    CHECK(td.t == o);
    CHECK(td.h.is_identity());
    CHECK(td.t_prime == inf);
}

TEST_CASE("components, splittings and dissociation") {
    auto G = Geometry::parse("gras:Fp:2:1+2");
    auto c = components(G);
    CHECK(c.bipartite);
    auto P3 = Geometry::parse("projline:Fp:3");
    CHECK_FALSE(components(P3).bipartite);
    auto d = dissociate(P3);
    CHECK(d.points.size() == 8);
    auto src = std::make_pair(G.enumerate()[0], G.enumerate()[0]);
    (void)src;
}

TEST_CASE("charts: projective line chart is the affine coordinate") {
    auto g = Geometry::projective_line(Q());
    auto ch = make_chart(g.affine(q("0")), g.infinity());
    auto X = to_plus(ch, g.affine(q("5/3")));
    CHECK(X(0, 0) == q("5/3"));
    CHECK(from_plus(ch, X) == g.affine(q("5/3")));
    auto Am = to_minus(ch, g.affine(q("2")));
    CHECK(from_minus(ch, Am) == g.affine(q("2")));
}
