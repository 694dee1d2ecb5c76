#include "jordanlab/closed_forms.hpp"
#include "jordanlab/modular.hpp"
#include "jordanlab/tangent.hpp"

#include <iostream>
#include <set>
#include <sstream>

using namespace jordanlab;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail << " [failed: " << what << "]";
        }
    }
    void report(const CheckReport& r, const std::string& what) {
        bool ok = r.passed();
        if (!ok)
            for (const auto& c : r.checks)
                if (c.status == Status::Fail || c.status == Status::Incomplete) {
                    detail << " [" << what << ": " << c.name << " " << to_string(c.status) << "]";
                    break;
                }
        pass = pass && ok;
    }
};

std::uint64_t cases(const CheckReport& r) {
    std::uint64_t n = 0;
    for (const auto& c : r.checks) n += c.cases;
    return n;
}

bool has_check(const CheckReport& r, const std::string& fragment) {
    for (const auto& c : r.checks)
        if ((c.name + " " + c.paper_ref).find(fragment) != std::string::npos && c.status == Status::Pass) return true;
    return false;
}

json strip_time(const CheckReport& r) {
    json j = to_json(r);
    j.erase("elapsed_ms");
    return j;
}

Point diagonal(const Geometry& g) {
    Matrix E(g.ring(), 4, 2);
    E(0, 0) = E(1, 1) = E(2, 0) = E(3, 1) = g.ring()->one();
    return g.point(E);
}

void c1(Outcome& o) {
    Stopwatch sw;
    for (int q : {2, 3, 5, 7}) {
        auto fg = std::make_shared<const FiniteGeometry>(Geometry::parse("projline:Fp:" + std::to_string(q)));
        auto r = check_jordan(jordan_table(fg));
        o.report(r, "P1(F" + std::to_string(q) + ")");
        o.detail << " q=" << q << ":" << cases(r);
    }
    o.detail << " " << long(sw.ms()) << "ms";
    o.require(sw.ms() < 30000, "runtime under 30 s");
}

void c2(Outcome& o) {
    Stopwatch sw;
    auto fg = std::make_shared<const FiniteGeometry>(Geometry::parse("gras:Fp:2:3"));
    o.require(fg->size() == 16, "Gras(F2^3) has 16 points");
    auto r = check_associative(associative_table(fg));
    o.report(r, "Gras(F2^3)");
    auto s = check_associative_random(Geometry::parse("gras:Fp:3:4"), {10000, 1});
    o.report(s, "Gras(F3^4)");
    for (const auto& c : s.checks) o.require(c.cases >= 10000 || c.status == Status::Skipped, c.name + " has 10^4 tuples");
    o.detail << " exhaustive " << cases(r) << ", sampled " << cases(s) << ", " << long(sw.ms()) << "ms";
    o.require(sw.ms() < 60000, "runtime under 60 s");
}

void c3(Outcome& o) {
    auto q = closed_form_crosscheck(Ring::rationals(), 1000, 1);
    auto f5 = closed_form_crosscheck(Ring::parse("Fp:5"), 0, 1);
    o.report(q, "Q");
    o.report(f5, "F5");
    for (const auto* r : {&q, &f5}) {
        const auto* p = r->find("printed +xz denominator breaks J(a) = a");
        o.require(p && p->status == Status::Pass && !p->witness.is_null(), "printed denominator witness");
        if (p && !p->witness.is_null()) o.detail << " witness " << p->witness.dump();
    }
    for (const auto& c : q.checks)
        if (c.name.rfind("printed", 0) != 0) o.require(c.cases >= 1000, c.name + " on 10^3 tuples");
}

void c4(Outcome& o) {
    int n = 0;
    for (const char* rs : {"Fp:2", "Fp:3"})
        for (auto [p, q] : {std::pair<std::size_t, std::size_t>{1, 1}, {1, 2}, {2, 2}}) {
            RingRef R = Ring::parse(rs);
            auto gp = extract_pair(Geometry::typed(R, p, q));
            auto m = matrix_pair(R, p, q);
            bool eq = gp.pair.basis == m.basis && gp.pair.polar == m.polar;
            o.require(eq, std::string(rs) + " (" + std::to_string(p) + "," + std::to_string(q) + ")");
            ++n;
        }
    o.detail << " " << n << " geometries";
}

void c5(Outcome& o) {
    RingRef F2 = Ring::parse("Fp:2"), Q = Ring::rationals();
    PairCheckOptions ex;
    ex.mode = "exhaustive";
    ex.jets = {};
    auto a = check_pair_identities(matrix_pair(F2, 1, 2), ex);
    o.report(a, "exhaustive (1,2) over F2");
    o.report(check_pair_symbolic(scalar_pair(Q)), "symbolic scalar");
    o.report(check_pair_symbolic(matrix_pair(Q, 1, 2)), "symbolic (1,2)");
    PairCheckOptions jets;
    jets.samples = 40;
    jets.jets = {2, 3};
    for (auto p : {scalar_pair(Q), matrix_pair(Q, 1, 2), matrix_pair(F2, 1, 2)}) {
        auto r = check_pair_identities(p, jets);
        o.report(r, "jets " + p.name + " " + p.ring->text());
        for (int k : {2, 3})
            o.require(r.find("JP3 over " + jet_ring(p.ring, k)->text()) != nullptr, "jet order " + std::to_string(k));
    }
    o.detail << " exhaustive cases " << a.find("JP3")->cases;
}

void c6(Outcome& o) {
    for (const char* gs : {"projline:Q", "projline:Fp:7", "gras:Q:1+2", "gras:Fp:7:1+2"}) {
        auto r = formulas_crosscheck(extract_pair(Geometry::parse(gs)), 1000, 1);
        o.report(r, gs);
        for (const char* n : {"compact", "step3 v", "step3 v'", "step3 J(y)", "step3 J(b)"}) {
            const auto* c = r.find(n);
            o.require(c && c->cases >= 1000, std::string(gs) + " " + n + " on 10^3 samples");
        }
    }
}

void c7(Outcome& o) {
    for (int p : {5, 7}) {
        Geometry g = Geometry::parse("projline:Fp:" + std::to_string(p));
        Triple t{g.parse_point("0"), g.parse_point("inf"), g.parse_point("1")};
        o.report(modular_relations(g, t), "relations F" + std::to_string(p));
        auto s3 = s3_subgroup(g, t);
        o.report(s3.report, "S3 F" + std::to_string(p));
    }
}

// The nontriviality of Z on Gras(F2^4) is unattainable: Z is the image of -I.
bool c8(Outcome& o) {
    bool nontrivial_f2 = false;
    for (const char* rs : {"Fp:2", "Q"}) {
        auto pe = peirce_example(Ring::parse(rs), 1, 1, 1, 1);
        auto kind = is_idempotent(pe.geometry, pe.q).kind;
        o.require(kind == IdempotentKind::Strong, std::string(rs) + " strong");
        auto r = idempotent_rep(pe.geometry, pe.q);
        for (const char* n : {"(ABA)^4", "J^2", "(JA)^2", "(JB)^2", "Z fixes a,x,b,y", "Z order <= 2"}) {
            const auto* c = r.report.find(n);
            o.require(c && c->status == Status::Pass, std::string(rs) + " " + n);
        }
        o.require(r.strong, std::string(rs) + " ABA=BAB");
        o.report(peirce_consistency(pe), std::string(rs) + " block realization");
        if (std::string(rs) == "Fp:2") nontrivial_f2 = r.z_moves.has_value();
        else o.detail << " Z moves a point over Q: " << (r.z_moves ? "yes" : "no");
    }
    o.require(nontrivial_f2, "Z nontrivial on Gras(F2^4)");
    return nontrivial_f2;
}

void c9(Outcome& o) {
    for (int q : {3, 5}) {
        auto fg = std::make_shared<const FiniteGeometry>(Geometry::parse("projline:Fp:" + std::to_string(q)));
        auto d = derived_structures(jordan_table(fg));
        o.report(d.report, "P1(F" + std::to_string(q) + ")");
        o.require(has_check(d.report, "transplantation"), "transplantation present");
        o.require(has_check(d.report, "fundamental formula"), "fundamental formula present");
        o.detail << " q=" << q << ": " << d.torsors.size() << " torsors, " << d.reflections.size() << " reflection spaces";
    }
}

void c10(Outcome& o) {
    for (const char* gs : {"projline:Q", "projline:Fp:5"}) {
        auto r = tangent_contracts(Geometry::parse(gs), 1000, 1);
        o.report(r, gs);
        for (const auto& c : r.checks) o.require(c.cases >= 1000, std::string(gs) + " " + c.name + " on 10^3 configurations");
    }
    o.report(tangent_contracts(Geometry::parse("gras:Q:4"), 100, 1), "gras:Q:4");
}

void c11(Outcome& o) {
    Geometry g = Geometry::parse("gras:Q:4");
    BasePair b = standard_base(g);
    auto A = associative_algebra_from_triple(g, b.o, b.o_prime, diagonal(g));
    o.report(A.report, "associative");
    const auto& P = A.gp.pair;
    int hits = 0;
    // coordinates read through X -> X^T
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Matrix Ei = unvec(P.unit(Side::Plus, i), 2, 2).transpose(), Ej = unvec(P.unit(Side::Plus, j), 2, 2).transpose();
            hits += A.table[i * 4 + j] == vec((Ei * Ej).transpose());
        }
    o.require(hits == 16, "16 basis products");
    auto J = jordan_algebra_from_triple(g, b.o, b.o_prime, diagonal(g));
    o.report(J.report, "jordan");
    Rng rng(5);
    int inv = 0;
    for (int k = 0; k < 50; ++k) {
        Matrix x = P.random(Side::Plus, rng), y = P.random(Side::Plus, rng);
        Matrix X = unvec(x, 2, 2), Y = unvec(y, 2, 2);
        o.require(J.U(x) * y == vec(X * Y * X), "U_x y = xyx");
        if (auto Yi = try_invert(Y)) {
            ++inv;
            o.require(J.inverse(y) == vec(*Yi), "j(y) = y^-1");
        }
    }
    o.detail << " 16/16 products via transpose, " << inv << " inverses";
}

void c12(Outcome& o) {
    auto gp = extract_pair(Geometry::parse("gras:Q:1+2"));
    PairCheckOptions opt;
    opt.samples = 50;
    std::vector<std::function<CheckReport()>> suites{
        [&] { return formulas_crosscheck(gp, 50, 7); },
        [&] { return check_pair_identities(gp.pair, opt); },
        [&] { return check_quasi_inverse(gp, 50, 7); },
        [&] { return tangent_contracts(Geometry::parse("projline:Fp:5"), 50, 7); },
        [&] { return check_associative_random(Geometry::parse("gras:Fp:3:4"), {500, 7}); },
        [&] { return closed_form_crosscheck(Ring::rationals(), 100, 7); },
        [&] { return check_tkk(tkk_algebra(gp.pair), 10, 7, &gp); },
    };
    for (std::size_t i = 0; i < suites.size(); ++i) o.require(strip_time(suites[i]()) == strip_time(suites[i]()), "suite " + std::to_string(i));
    o.detail << " " << suites.size() << " suites re-run";
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* title;
        std::function<void(Outcome&)> run;
    };
    std::vector<Criterion> cs{
        {1, "Jordan axioms exhaustive on P1(F_q), q in {2,3,5,7}", c1},
        {2, "associative axioms on Gras(F2^3) and sampled Gras(F3^4)", c2},
        {3, "closed-form homographies and the printed denominator", c3},
        {4, "pair extraction equals x a x", c4},
        {5, "JP1-JP3 exhaustive, symbolic and on jets", c5},
        {6, "inversion formulas against the geometric J", c6},
        {7, "modular relations, table rows and S3", c7},
        {8, "idempotent theorem on the Peirce example", [](Outcome& o) { c8(o); }},
        {9, "derived torsors and reflection spaces", c9},
        {10, "tangent contracts", c10},
        {11, "algebra extraction on Gras_2(Q^4)", c11},
        {12, "determinism", c12},
    };
    // Criteria with a sub-part shown unattainable; they print FAIL but do not
    // fail the run.
    const std::set<int> known_red{8};
    int unexpected = 0;
    for (auto& c : cs) {
        Outcome o;
        Stopwatch sw;
        try {
            c.run(o);
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << " [exception: " << e.what() << "]";
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << " " << c.id << ": " << c.title << " (" << long(sw.ms()) << " ms)"
                  << o.detail.str();
        if (!o.pass && known_red.count(c.id)) std::cout << " [known: Z is the image of -I = I in characteristic 2]";
        std::cout << std::endl;
        if (!o.pass && !known_red.count(c.id)) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
