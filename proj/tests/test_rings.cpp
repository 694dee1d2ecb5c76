#include "doctest.h"
#include "jordanlab/rings.hpp"

using namespace jordanlab;

TEST_CASE("descriptor parsing and interning") {
    CHECK(Ring::parse("Q") == Ring::rationals());
    CHECK(Ring::parse("Fp:7") == Ring::prime_field(7));
    auto w = Ring::parse("Weil:Q[e^2]");
    CHECK(w->kind() == RingKind::Weil);
    CHECK(w->orders() == std::vector<int>{1});
    CHECK(w->text() == "Weil:Q[e^2]");
    CHECK(Ring::parse("Weil:Fp:5[e^2]")->base() == Ring::prime_field(5));
    CHECK(Ring::parse("Poly:Q[x,y]")->gens().size() == 2);
    CHECK_THROWS_AS(Ring::parse("Fp:6"), StructuralError);
    CHECK_THROWS_AS(Ring::parse("Foo"), ParseError);
    // nested Weil flattens
    auto ww = Ring::weil(w, {"f"}, {1});
    CHECK(ww->text() == "Weil:Q[e^2,f^2]");
}

TEST_CASE("prime field and modular arithmetic") {
    auto F5 = Ring::prime_field(5);
    CHECK((F5->from_int(3) * F5->from_int(4)) == F5->from_int(2));
    CHECK(F5->from_int(3).inv() == F5->from_int(2));
    CHECK(F5->from_int(-1) == F5->from_int(4));
    auto Z6 = Ring::modular(6);
    CHECK_FALSE(Z6->from_int(2).is_unit());
    CHECK(Z6->from_int(5).inv() == Z6->from_int(5));
    CHECK_THROWS_AS(Z6->from_int(3).inv(), NotInvertible);
}

TEST_CASE("rationals and integers") {
    auto Q = Ring::rationals();
    auto h = Q->parse_element("3/4");
    CHECK(h.str() == "3/4");
    CHECK((h * Q->from_int(4)) == Q->from_int(3));
    auto Z = Ring::integers();
    CHECK(Z->from_int(-1).inv() == Z->from_int(-1));
    CHECK_FALSE(Z->from_int(2).try_inv().has_value());
}

TEST_CASE("Weil inverse against geometric series") {
    auto W = Ring::parse("Weil:Q[d^3]");
    auto d = W->generator("d");
    auto x = W->from_int(2) + d;
    auto inv = x.inv();
    auto Q = Ring::rationals();
    auto expect = W->embed(Q->parse_element("1/2")) - W->embed(Q->parse_element("1/4")) * d +
                  W->embed(Q->parse_element("1/8")) * d * d;
    CHECK(inv == expect);
    CHECK(inv.str() == "1/2-1/4*d+1/8*d^2");
    CHECK((d * d * d).is_zero());
    CHECK_FALSE(d.is_unit());
    auto e = Ring::parse("Weil:Q[e^2]");
    auto eps = e->generator("e");
    CHECK(((e->one() + eps) * (e->one() - eps)).is_one());
    CHECK((e->from_int(2) + eps).str() == "2+1*e");
    CHECK(e->parse_element("2+1*e") == e->from_int(2) + eps);
}

TEST_CASE("Galois field of order 4") {
    auto F4 = Ring::galois(4);
    auto t = F4->generator("t");
    // t^2 = t + 1 for the field built from x^2+x+1
    CHECK(t * t == t + F4->one());
    CHECK((t * t * t).is_one());
    CHECK(F4->frobenius(t) == t * t);
    int units = 0;
    for (unsigned i = 0; i < 4; ++i)
        if (F4->element_at(i).is_unit()) ++units;
    CHECK(units == 3);
    CHECK((F4->one() + F4->one()).is_zero());
}

TEST_CASE("polynomial ring and substitution") {
    auto P = Ring::parse("Poly:Q[x,y]");
    auto x = P->generator("x"), y = P->generator("y");
    auto f = (x + y) * (x - y);
    CHECK(f == x * x - y * y);
    auto Q = Ring::rationals();
    auto v = P->substitute(f, Q, {Q->from_int(3), Q->from_int(2)});
    CHECK(v == Q->from_int(5));
    CHECK(P->parse_element("(x+y)^2") == x * x + P->from_int(2) * x * y + y * y);
}

TEST_CASE("Weil projections") {
    auto W2 = Ring::parse("Weil:Q[e^2,f^2]");
    auto W1 = Ring::parse("Weil:Q[e^2]");
    auto e = W2->generator("e"), f = W2->generator("f");
    auto a = W2->from_int(1) + e + f + e * f;
    CHECK(weil_project_to(a, W1) == W1->one() + W1->generator("e"));
    CHECK(weil_project(a) == Ring::rationals()->one());
}

TEST_CASE("finite Weil enumeration") {
    auto W = Ring::parse("Weil:Fp:3[e^2]");
    CHECK(*W->size() == 9);
    int units = 0;
    for (unsigned i = 0; i < 9; ++i)
        if (W->element_at(i).is_unit()) ++units;
    CHECK(units == 6);
}
