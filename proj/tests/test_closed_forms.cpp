#include "doctest.h"
#include "jordanlab/closed_forms.hpp"

using namespace jordanlab;

TEST_CASE("closed forms against the projector construction") {
    auto f5 = closed_form_crosscheck(Ring::parse("Fp:5"), 0, 1);
    CHECK(f5.passed());
    CHECK(f5.find("generic J^{xz}_a(y)")->cases == 4 * 4 * 4 * 5);  // a != 0, x != a, z != a
    CHECK(f5.find("printed +xz denominator breaks J(a) = a")->status == Status::Pass);
    auto q = closed_form_crosscheck(Ring::rationals(), 300, 2);
    CHECK(q.passed());
    for (const auto& r : q.checks)
        if (r.name.rfind("printed", 0) != 0) CHECK(r.cases == 300);
    auto w = q.find("printed +xz denominator breaks J(a) = a")->witness;
    CHECK(w["printed J(a)"] != w["a"]);
    CHECK_THROWS_AS(closed_form_crosscheck(Ring::integers(), 10, 1), UnsupportedRing);
    CHECK_THROWS_AS(closed_form_crosscheck(Ring::rationals(), 0, 1), DomainError);
}
