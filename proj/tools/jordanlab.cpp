#include "CLI11.hpp"
#include "jordanlab/closed_forms.hpp"
#include "jordanlab/modular.hpp"
#include "jordanlab/tangent.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace jordanlab;

namespace {

struct Options {
    std::string ring = "Q";
    std::string geometry;
    std::string mode = "random";
    std::uint64_t samples = 200;
    std::uint64_t seed = 1;
    std::vector<int> jets{2, 3};
    std::string json_path;
    bool serial = false;
    bool quiet = false;
};

constexpr int kUsageError = 3;

std::string fmt_status(Status s) {
    switch (s) {
        case Status::Pass: return "PASS";
        case Status::Fail: return "FAIL";
        case Status::Incomplete: return "INCOMPLETE";
        case Status::Skipped: return "SKIP";
    }
    return "?";
}

void add_common(CLI::App* c, Options& o, bool with_ring = false) {
    if (with_ring) c->add_option("--ring", o.ring, "ring descriptor, e.g. Q, Fp:5, Fq:4, Weil:Fp:3[e^2]");
    c->add_option("--geometry", o.geometry, "geometry, e.g. projline:Fp:5, gras:Q:4, gras:Q:1+2");
    c->add_option("--mode", o.mode, "exhaustive | random")->check(CLI::IsMember({"exhaustive", "random"}));
    c->add_option("--samples", o.samples, "samples in random mode");
    c->add_option("--seed", o.seed, "seed of the sampling stream");
    c->add_option("--json", o.json_path, "write the JSON report here");
    c->add_flag("--serial", o.serial, "disable the parallel kernels");
    c->add_flag("--quiet", o.quiet, "only print the overall status");
}

json config_json(const std::string& command, const Options& o) {
    json c;
    c["command"] = command;
    c["ring"] = o.ring;
    if (!o.geometry.empty()) c["geometry"] = o.geometry;
    c["mode"] = o.mode;
    c["samples"] = o.samples;
    c["seed"] = o.seed;
    c["jets"] = o.jets;
    return c;
}

Geometry need_geometry(const Options& o) {
    if (o.geometry.empty()) throw ParseError("--geometry is required");
    return Geometry::parse(o.geometry);
}

void require_finite_for_exhaustive(const Options& o, RingRef r) {
    if (o.mode == "exhaustive" && !r->is_finite()) throw DomainError("exhaustive mode needs a finite ring");
}

int emit(CheckReport rep, const std::string& command, const Options& o, const Stopwatch& sw,
         const json& extra_config = json::object()) {
    rep.elapsed_ms = sw.ms();
    if (rep.seed == 0) rep.seed = o.seed;
    json cfg = config_json(command, o);
    for (auto& [k, v] : extra_config.items()) cfg[k] = v;
    if (!o.quiet)
        for (const auto& c : rep.checks) {
            std::cout << fmt_status(c.status) << "  " << c.name << "  [" << c.mode << ", " << c.cases << " cases]";
            if (!c.note.empty()) std::cout << "  " << c.note;
            if (c.status == Status::Fail && !c.witness.is_null()) std::cout << "\n      witness " << c.witness.dump();
            std::cout << "\n";
        }
    Status s = rep.status();
    std::cout << command << ": " << to_string(s) << "\n";
    if (!o.json_path.empty()) {
        std::ofstream out(o.json_path);
        if (!out) throw DomainError("cannot write " + o.json_path);
        out << to_json(rep, command, cfg).dump(2) << "\n";
    }
    return exit_code(s);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

// Diagonal point span[I; I] of a Grassmannian with p = q.
Point diagonal_point(const Geometry& g) {
    BasePair b = standard_base(g);
    if (b.o.rank() * 2 != g.dim()) throw DomainError("diagonal point needs p = q");
    return g.point(Matrix::vcat(b.o.basis.block(0, 0, b.o.rank(), b.o.rank()),
                                Matrix::identity(g.ring(), b.o.rank())));
}

// Point tokens: o, o', e (standard base and diagonal), inf, ring elements on the
// projective line, #k for the k-th enumerated point.
Point parse_point(const Geometry& g, const std::string& tok) {
    if (tok == "o") return standard_base(g).o;
    if (tok == "o'") return standard_base(g).o_prime;
    if (tok == "e") return diagonal_point(g);
    return g.parse_point(tok);
}

std::vector<Point> parse_points(const Geometry& g, const std::string& s, std::size_t count) {
    auto toks = split(s, ',');
    if (toks.size() != count) throw ParseError("expected " + std::to_string(count) + " comma separated points");
    std::vector<Point> pts;
    for (auto& t : toks) pts.push_back(parse_point(g, t));
    return pts;
}

struct PairSource {
    std::string file, builtin;
};

QuadraticJordanPair load_pair(const PairSource& src, const Options& o) {
    if (!src.file.empty()) {
        std::ifstream in(src.file);
        if (!in) throw ParseError("cannot read " + src.file);
        return pair_from_json(json::parse(in));
    }
    if (!src.builtin.empty()) {
        RingRef r = Ring::parse(o.ring);
        std::string b = src.builtin;
        bool corrupt = b.rfind("corrupted-", 0) == 0;
        if (corrupt) b = b.substr(10);
        QuadraticJordanPair p;
        if (b == "scalar") {
            p = scalar_pair(r);
        } else if (b.rfind("matrix:", 0) == 0) {
            auto d = split(b.substr(7), ',');
            if (d.size() != 2) throw ParseError("matrix pair needs matrix:p,q");
            p = matrix_pair(r, std::stoul(d[0]), std::stoul(d[1]));
        } else {
            throw ParseError("unknown builtin pair '" + src.builtin + "' (scalar | matrix:p,q | corrupted-...)");
        }
        return corrupt ? corrupted_pair(p) : p;
    }
    if (!o.geometry.empty()) return extract_pair(Geometry::parse(o.geometry)).pair;
    throw ParseError("give --pair FILE, --builtin NAME or --geometry");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Exact checks for Jordan and associative geometries"};
    app.require_subcommand(1);
    Options o;
    std::string source = "direct", polarity = "swap", triple, quad, word, dims = "1,1,1,1", expr, base = "o";
    std::string kind = "jordan";
    int order = 3, search_n = 3;
    bool symbolic = false;
    PairSource ps;
    std::function<int()> action;
    // the deepest subcommand's callback runs first
    auto on = [&](CLI::App* c, std::function<int()> f) {
        c->callback([&action, f] {
            if (!action) action = f;
        });
    };

    // axioms
    auto* ax = app.add_subcommand("axioms", "structure-map identity suites");
    ax->require_subcommand(1);
    auto* axj = ax->add_subcommand("jordan", "Jordan identities");
    add_common(axj, o);
    axj->add_option("--source", source, "direct | m | midpoints")->check(CLI::IsMember({"direct", "m", "midpoints"}));
    auto jsource = [&] { return source == "m" ? JSource::FromM : source == "midpoints" ? JSource::FromMidpoints : JSource::Direct; };
    on(axj, [&] {
        Stopwatch sw;
        Geometry g = need_geometry(o);
        require_finite_for_exhaustive(o, g.ring());
        CheckReport r;
        if (o.mode == "exhaustive") {
            auto fg = std::make_shared<const FiniteGeometry>(g);
            r = check_jordan(jordan_table(fg, jsource(), !o.serial), !o.serial);
        } else {
            r = check_jordan_random(g, j_provider(jsource()), {o.samples, o.seed}, !o.serial);
        }
        return emit(r, "axioms jordan", o, sw, {{"source", source}});
    });
    auto* axa = ax->add_subcommand("associative", "associative identities");
    add_common(axa, o);
    on(axa, [&] {
        Stopwatch sw;
        Geometry g = need_geometry(o);
        require_finite_for_exhaustive(o, g.ring());
        CheckReport r;
        if (o.mode == "exhaustive") {
            auto fg = std::make_shared<const FiniteGeometry>(g);
            r = check_associative(associative_table(fg, !o.serial), !o.serial);
        } else {
            r = check_associative_random(g, {o.samples, o.seed}, !o.serial);
        }
        return emit(r, "axioms associative", o, sw);
    });
    auto* axd = ax->add_subcommand("derived", "derived torsors and reflection spaces (finite geometries)");
    add_common(axd, o);
    on(axd, [&] {
        Stopwatch sw;
        auto fg = std::make_shared<const FiniteGeometry>(need_geometry(o));
        auto d = derived_structures(jordan_table(fg, JSource::Direct, !o.serial), {}, !o.serial);
        return emit(d.report, "axioms derived", o, sw);
    });
    auto* axp = ax->add_subcommand("polarity", "reflection space of a polarity (finite geometries)");
    add_common(axp, o);
    axp->add_option("--polarity", polarity, "swap | perp");
    on(axp, [&] {
        Stopwatch sw;
        Geometry g = need_geometry(o);
        auto fg = std::make_shared<const FiniteGeometry>(g);
        auto t = jordan_table(fg, JSource::Direct, !o.serial);
        auto ps_ = polarity_space(t, fg->perm_of(polarity_by_name(g, polarity)));
        return emit(ps_.report, "axioms polarity", o, sw, {{"polarity", polarity}});
    });

    // closed forms
    auto* cf = app.add_subcommand("closed-forms", "affine formulas on the projective line");
    add_common(cf, o, true);
    on(cf, [&] {
        Stopwatch sw;
        RingRef r = Ring::parse(o.ring);
        require_finite_for_exhaustive(o, r);
        return emit(closed_form_crosscheck(r, o.mode == "exhaustive" ? 0 : o.samples, o.seed, !o.serial),
                    "closed-forms", o, sw);
    });

    // torsor kit
    auto* ts = app.add_subcommand("torsor", "torsor-kit utilities");
    ts->require_subcommand(1);
    auto* tsc = ts->add_subcommand("chasles", "search small middle-multiplication tables");
    tsc->add_option("--n", search_n, "number of points")->check(CLI::Range(1, 4));
    on(tsc, [&] {
        auto s = search_chasles_tables(search_n);
        std::cout << "tables " << s.tables << "  chasles " << s.chasles << "  full " << s.full << "\n";
        if (s.counterexample) std::cout << "counterexample " << to_json(*s.counterexample).dump() << "\n";
        return 0;
    });

    // modular
    auto* mo = app.add_subcommand("modular", "GL(2,Z) representations of transversal triples");
    add_common(mo, o);
    mo->add_option("--triple", triple, "a,b,c")->default_val("0,inf,1");
    mo->add_option("--word", word, "word over S,T,F,I (lower case: inverse)");
    mo->require_subcommand(0, 1);
    mo->fallthrough();
    on(mo, [&] {
        Stopwatch sw;
        Geometry g = need_geometry(o);
        auto p = parse_points(g, triple, 3);
        Triple t{p[0], p[1], p[2]};
        CheckReport rep = modular_relations(g, t);
        json extra{{"triple", triple}};
        if (!word.empty()) {
            auto w = IntegerMatrixWord::parse(word);
            ProjMap m = modular_hom(t, w);
            std::cout << "word " << word << " = " << w.matrix().str() << " acts by " << m.matrix().str() << "\n";
            CheckRecord r;
            r.name = "word " + word;
            r.paper_ref = "image of the word under the triple's representation";
            r.cases = 1;
            r.note = m.matrix().str();
            rep.add(r);
            extra["word"] = word;
        }
        rep.absorb(s3_subgroup(g, t).report, "S3 ");
        return emit(rep, "modular", o, sw, extra);
    });
    auto* mor = mo->add_subcommand("orbit", "orbit of the triple and the integral line");
    on(mor, [&] {
        Stopwatch sw;
        Geometry g = need_geometry(o);
        auto p = parse_points(g, triple, 3);
        auto r = orbit_map(g, {p[0], p[1], p[2]});
        std::cout << "orbit size " << r.orbit.size() << (r.complete ? "" : " (capped)") << "\n";
        return emit(r.report, "modular orbit", o, sw, {{"triple", triple}});
    });
    auto* moi = mo->add_subcommand("idempotent", "representation of an idempotent quadruple");
    moi->add_option("--quad", quad, "a,x,b,y")->required();
    on(moi, [&] {
        Stopwatch sw;
        Geometry g = need_geometry(o);
        auto p = parse_points(g, quad, 4);
        Quadruple q{p[0], p[1], p[2], p[3]};
        auto chk = is_idempotent(g, q);
        std::cout << "kind " << to_string(chk.kind) << "\n";
        CheckReport rep = chk.report;
        if (chk.kind != IdempotentKind::None) rep.absorb(idempotent_rep(g, q).report);
        return emit(rep, "modular idempotent", o, sw, {{"quad", quad}});
    });
    auto* mop = mo->add_subcommand("peirce", "block example with dims E,u,v,H");
    mop->add_option("--ring", o.ring, "ring descriptor");
    mop->add_option("--dims", dims, "e,u,v,h");
    on(mop, [&] {
        Stopwatch sw;
        auto d = split(dims, ',');
        if (d.size() != 4) throw ParseError("--dims needs e,u,v,h");
        auto pe = peirce_example(Ring::parse(o.ring), std::stoul(d[0]), std::stoul(d[1]), std::stoul(d[2]),
                                 std::stoul(d[3]));
        CheckReport rep = peirce_consistency(pe);
        auto r = idempotent_rep(pe.geometry, pe.q);
        rep.absorb(r.report, "rep ");
        std::cout << "Z moves a point: " << (r.z_moves ? "yes" : "no") << "\n";
        return emit(rep, "modular peirce", o, sw, {{"dims", dims}});
    });

    // pairs
    auto* pa = app.add_subcommand("pair", "quadratic Jordan pairs");
    pa->require_subcommand(1);
    auto pair_opts = [&](CLI::App* c) {
        add_common(c, o, true);
        c->add_option("--pair", ps.file, "pair JSON file");
        c->add_option("--builtin", ps.builtin, "scalar | matrix:p,q | corrupted-scalar | corrupted-matrix:p,q");
    };
    auto* pae = pa->add_subcommand("extract", "Q from dual-number quasi-translations");
    add_common(pae, o);
    on(pae, [&] {
        Geometry g = need_geometry(o);
        auto gp = extract_pair(g);
        json j = to_json(gp.pair);
        if (!o.json_path.empty()) {
            std::ofstream out(o.json_path);
            if (!out) throw DomainError("cannot write " + o.json_path);
            out << j.dump(2) << "\n";
        }
        if (!o.quiet) std::cout << j.dump(o.json_path.empty() ? 2 : -1) << "\n";
        return 0;
    });
    auto* pac = pa->add_subcommand("check", "JP1-JP3 and linear identities");
    pair_opts(pac);
    pac->add_option("--jets", o.jets, "jet orders");
    pac->add_flag("--symbolic", symbolic, "generic points over a polynomial ring");
    on(pac, [&] {
        Stopwatch sw;
        auto p = load_pair(ps, o);
        require_finite_for_exhaustive(o, p.ring);
        PairCheckOptions opt;
        opt.mode = o.mode;
        opt.samples = o.samples;
        opt.seed = o.seed;
        opt.jets = o.jets;
        opt.symbolic = symbolic;
        opt.parallel = !o.serial;
        auto rep = check_pair_identities(p, opt);
        if (!o.geometry.empty() && ps.file.empty() && ps.builtin.empty())
            rep.absorb(check_quasi_inverse(extract_pair(Geometry::parse(o.geometry)), o.samples, o.seed));
        return emit(rep, "pair check", o, sw, {{"pair", p.name}});
    });
    auto* pat = pa->add_subcommand("tkk", "3-graded Lie algebra");
    pair_opts(pat);
    on(pat, [&] {
        Stopwatch sw;
        auto p = load_pair(ps, o);
        std::optional<GeometricPair> gp;
        if (!o.geometry.empty() && ps.file.empty() && ps.builtin.empty()) gp = extract_pair(Geometry::parse(o.geometry));
        auto L = tkk_algebra(p);
        if (p.ring->is_field()) std::cout << "dimension " << L.dimension() << "\n";
        return emit(check_tkk(L, o.samples, o.seed, gp ? &*gp : nullptr), "pair tkk", o, sw, {{"pair", p.name}});
    });
    auto* paf = pa->add_subcommand("formulas", "inversion formulas against the geometry");
    add_common(paf, o);
    on(paf, [&] {
        Stopwatch sw;
        return emit(formulas_crosscheck(extract_pair(need_geometry(o)), o.samples, o.seed), "pair formulas", o, sw);
    });

    // algebras, triple systems, jets, tangent
    auto* al = app.add_subcommand("algebra", "algebras of a transversal triple");
    al->require_subcommand(1);
    auto* alf = al->add_subcommand("from-triple", "Jordan or associative algebra of (o,o',e)");
    add_common(alf, o);
    alf->add_option("--triple", triple, "o,o',e")->default_val("o,o',e");
    alf->add_option("--kind", kind, "jordan | associative")->check(CLI::IsMember({"jordan", "associative"}));
    on(alf, [&] {
        Stopwatch sw;
        Geometry g = need_geometry(o);
        auto p = parse_points(g, triple, 3);
        if (kind == "jordan") {
            auto A = jordan_algebra_from_triple(g, p[0], p[1], p[2], o.samples, o.seed);
            return emit(A.report, "algebra from-triple", o, sw, {{"kind", kind}, {"triple", triple}});
        }
        auto A = associative_algebra_from_triple(g, p[0], p[1], p[2], o.samples, o.seed);
        if (!o.quiet) {
            std::size_t n = A.gp.pair.n(Side::Plus);
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    std::cout << "e" << i << "*e" << j << " = " << A.table[i * n + j].transpose().str() << "\n";
        }
        return emit(A.report, "algebra from-triple", o, sw, {{"kind", kind}, {"triple", triple}});
    });
    auto* jt = app.add_subcommand("jts", "Jordan triple systems");
    jt->require_subcommand(1);
    auto* jtp = jt->add_subcommand("from-polarity", "triple system of a polarity at a base point");
    add_common(jtp, o);
    jtp->add_option("--polarity", polarity, "swap | perp");
    jtp->add_option("--base", base, "base point o");
    on(jtp, [&] {
        Stopwatch sw;
        Geometry g = need_geometry(o);
        PairCheckOptions opt;
        opt.samples = o.samples;
        opt.seed = o.seed;
        opt.jets = o.jets;
        opt.parallel = !o.serial;
        auto T = jts_from_polarity(g, polarity_by_name(g, polarity), parse_point(g, base), opt);
        return emit(T.report, "jts from-polarity", o, sw, {{"polarity", polarity}, {"base", base}});
    });
    auto* je = app.add_subcommand("jet", "Koecher jet checks");
    je->require_subcommand(1);
    auto* jec = je->add_subcommand("check", "expand an expression in a jet ring");
    pair_opts(jec);
    jec->add_option("--expr", expr, "expression, e.g. \"Q(Q(x)a)b - Q(x)Q(a)Q(x)b\"")->required();
    jec->add_option("--order", order, "jet order k")->check(CLI::Range(1, 12));
    on(jec, [&] {
        Stopwatch sw;
        auto p = load_pair(ps, o);
        auto e = JordanExpression::parse(expr);
        return emit(koecher_jet_check(e, p, order, o.samples, o.seed), "jet check", o, sw,
                    {{"expr", expr}, {"order", order}, {"pair", p.name}});
    });
    auto* tg = app.add_subcommand("tangent", "tangent bundle contracts");
    tg->require_subcommand(1);
    auto* tgc = tg->add_subcommand("contracts", "translations, J at fixed points, functoriality");
    add_common(tgc, o);
    on(tgc, [&] {
        Stopwatch sw;
        return emit(tangent_contracts(need_geometry(o), o.samples, o.seed), "tangent contracts", o, sw);
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }
    try {
        return action ? action() : kUsageError;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n" << app.help();
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    }
}
