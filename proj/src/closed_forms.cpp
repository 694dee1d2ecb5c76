#include "jordanlab/closed_forms.hpp"

#include "jordanlab/parallel.hpp"

#include <functional>

namespace jordanlab {

namespace {

using Tuple = std::vector<Element>;

struct Formula {
    std::string name, ref;
    int arity;
    std::function<bool(const Tuple&)> domain;
    std::function<std::optional<Element>(const Tuple&)> closed;
    std::function<Point(const Geometry&, const Tuple&)> geometric;
};

std::vector<Tuple> all_tuples(RingRef K, int k) {
    std::uint64_t q = *K->size(), total = 1;
    for (int i = 0; i < k; ++i) total *= q;
    std::vector<Tuple> out;
    out.reserve(total);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Tuple t;
        std::uint64_t r = idx;
        for (int i = 0; i < k; ++i) {
            t.push_back(K->element_at(r % q));
            r /= q;
        }
        out.push_back(t);
    }
    return out;
}

json tuple_json(const Tuple& t) {
    json j = json::array();
    for (auto& e : t) j.push_back(e.str());
    return j;
}

}  // namespace

CheckReport closed_form_crosscheck(RingRef K, std::uint64_t samples, std::uint64_t seed, bool parallel) {
    if (!K->is_field()) throw UnsupportedRing("closed forms need a field");
    Geometry g = Geometry::projective_line(K);
    auto A = [&](const Element& t) { return g.affine(t); };
    const Point inf = g.infinity();
    auto nz = [](const Element& e) { return !e.is_zero(); };
    std::vector<Formula> fs{
        {"J^{xz}_inf(y) = x - y + z", "J^{xz}_inf(y) = x - y + z", 3, [](const Tuple&) { return true; },
         [](const Tuple& t) { return closed_form::j_inf(t[0], t[1], t[2]); },
         [&](const Geometry&, const Tuple& t) { return j_map(A(t[0]), inf, A(t[1]))(A(t[2])); }},
        {"J^{0,inf}_a(y) = a^2 y^-1", "J^{0,inf}_a(y) = a^2 y^-1", 2, [&](const Tuple& t) { return nz(t[0]); },
         [](const Tuple& t) { return closed_form::j_zero_inf(t[0], t[1]); },
         [&](const Geometry&, const Tuple& t) { return j_map(A(K->zero()), A(t[0]), inf)(A(t[1])); }},
        {"M^{0,inf}_{ab}(y) = a y^-1 b", "M^{0,inf}_{ab}(y) = a y^-1 b", 3,
         [&](const Tuple& t) { return nz(t[0]) && nz(t[1]); },
         [](const Tuple& t) { return closed_form::m_zero_inf(t[0], t[1], t[2]); },
         [&](const Geometry&, const Tuple& t) { return m_map(A(K->zero()), A(t[0]), inf, A(t[1]))(A(t[2])); }},
        {"M^{xz}_{inf,a}(y)", "M^{xz}_{inf,a}(y) = (x - y + z - x a^-1 z)/(1 - a^-1 y)", 4,
         [&](const Tuple& t) { return nz(t[2]) && t[2] != t[0] && t[2] != t[1]; },
         [](const Tuple& t) { return closed_form::m_xz_inf_a(t[0], t[1], t[2], t[3]); },
         [&](const Geometry&, const Tuple& t) { return m_map(A(t[0]), inf, A(t[1]), A(t[2]))(A(t[3])); }},
        {"M^{xz}_{a,inf}(0) = x - x a^-1 z + z", "M^{xz}_{a,inf}(0) = x - x a^-1 z + z", 3,
         [&](const Tuple& t) { return nz(t[1]) && t[1] != t[0] && t[1] != t[2]; },
         [](const Tuple& t) { return closed_form::m_xz_a_inf_at_zero(t[0], t[1], t[2]); },
         [&](const Geometry&, const Tuple& t) { return m_map(A(t[0]), A(t[1]), A(t[2]), inf)(A(K->zero())); }},
        {"generic J^{xz}_a(y)", "J^{xz}_a(y) with denominator 1 - 2a^-1 y + a^-2 (xy + yz - xz)", 4,
         [&](const Tuple& t) { return nz(t[1]) && t[1] != t[0] && t[1] != t[2]; },
         [](const Tuple& t) { return closed_form::j_generic(t[0], t[1], t[2], t[3]); },
         [&](const Geometry&, const Tuple& t) { return j_map(A(t[0]), A(t[1]), A(t[2]))(A(t[3])); }},
    };

    CheckReport rep;
    rep.suite = "closed-forms";
    rep.ring = K->text();
    rep.geometry = g.text();
    rep.seed = seed;
    const bool exhaustive = samples == 0;
    if (exhaustive && !K->is_finite()) throw DomainError("exhaustive mode needs a finite field");
    Rng rng(seed);
    for (const auto& f : fs) {
        std::vector<Tuple> tuples;
        if (exhaustive) {
            tuples = all_tuples(K, f.arity);
        } else {
            for (std::uint64_t tries = 0; tuples.size() < samples && tries < 100 * samples; ++tries) {
                Tuple t;
                for (int i = 0; i < f.arity; ++i) t.push_back(K->random(rng, 3));
                if (f.domain(t)) tuples.push_back(t);
            }
        }
        std::vector<char> verdict(tuples.size(), 0);
#pragma omp parallel for num_threads(parallel ? thread_budget() : 1) schedule(dynamic, 8)
        for (long long i = 0; i < (long long)tuples.size(); ++i) {
            const Tuple& t = tuples[std::size_t(i)];
            if (!f.domain(t)) {
                verdict[std::size_t(i)] = 2;
                continue;
            }
            auto c = f.closed(t);
            Point geo = f.geometric(g, t);
            auto coord = g.affine_coordinate(geo);
            // a pole of the formula is the point at infinity
            bool ok = c ? (coord && *coord == *c) : !coord;
            verdict[std::size_t(i)] = ok ? 1 : 3;
        }
        CheckRecord r;
        r.name = f.name;
        r.paper_ref = f.ref;
        r.mode = exhaustive ? "exhaustive" : "random";
        std::uint64_t skipped = 0;
        for (std::size_t i = 0; i < tuples.size(); ++i) {
            if (verdict[i] == 2) {
                ++skipped;
                continue;
            }
            ++r.cases;
            if (verdict[i] == 3) {
                r.status = Status::Fail;
                r.witness = {{"tuple", tuple_json(tuples[i])}};
                break;
            }
        }
        if (!exhaustive && tuples.size() < samples) {
            r.status = r.status == Status::Fail ? Status::Fail : Status::Incomplete;
            r.note = "domain sampling fell short";
        } else if (skipped) {
            r.note = std::to_string(skipped) + " tuples outside the domain";
        }
        rep.add(r);
    }

    // The +xz denominator moves the fixed point a.
    CheckRecord pr;
    pr.name = "printed +xz denominator breaks J(a) = a";
    pr.paper_ref = "J^{xz}_a(a) = a with denominator 1 - 2a^-1 y + a^-2 (xy + yz + xz)";
    pr.mode = exhaustive ? "exhaustive" : "random";
    std::optional<Tuple> witness;
    auto probe = [&](const Tuple& t) {
        const Element &x = t[0], &a = t[1], &z = t[2];
        if (a.is_zero() || a == x || a == z) return false;
        ++pr.cases;
        auto v = closed_form::j_generic_printed(x, a, z, a);
        return !v || *v != a;
    };
    if (exhaustive) {
        for (const auto& t : all_tuples(K, 3))
            if (probe(t)) {
                witness = t;
                break;
            }
    } else {
        for (std::uint64_t i = 0; i < 100 * std::max<std::uint64_t>(samples, 1) && !witness; ++i) {
            Tuple t{K->random(rng, 3), K->random(rng, 3), K->random(rng, 3)};
            if (probe(t)) witness = t;
        }
    }
    if (witness) {
        auto v = closed_form::j_generic_printed((*witness)[0], (*witness)[1], (*witness)[2], (*witness)[1]);
        pr.witness = {{"x", (*witness)[0].str()}, {"a", (*witness)[1].str()}, {"z", (*witness)[2].str()},
                      {"printed J(a)", v ? v->str() : "inf"}};
        pr.note = "discrepancy reproduced";
    } else {
        pr.status = Status::Fail;
        pr.note = "printed formula agreed with the fixed point everywhere tried";
    }
    rep.add(pr);
    return rep;
}

}  // namespace jordanlab
