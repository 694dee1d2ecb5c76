#include "jordanlab/tangent.hpp"

#include "jordanlab/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <memory>
#include <sstream>

namespace jordanlab {

// ---------------------------------------------------------------- rings

RingRef tangent_ring(RingRef k) { return weil_extend(k, {"e"}, {1}); }
RingRef jet_ring(RingRef k, int order) {
    if (order < 1) throw DomainError("jet order must be at least 1");
    return weil_extend(k, {"d"}, {order});
}
RingRef second_tangent_ring(RingRef k) { return weil_extend(k, {"e1", "e2"}, {1, 1}); }

namespace {

Matrix coefficient_matrix(const Matrix& m, const Monomial& mono) {
    RingRef A = m.ring();
    return m.map(A->base(), [&](const Element& x) { return A->coefficient(x, mono); });
}

Matrix project_matrix(const Matrix& m, RingRef target) {
    return m.map(target, [&](const Element& x) { return weil_project_to(x, target); });
}

Element generator_of(RingRef A, std::size_t i) { return A->generator(i); }

std::string vec_str(const Matrix& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.rows(); ++i) s += (i ? "," : "") + v(i, 0).str();
    return s + ")";
}

CheckRecord make_record(const std::string& name, const std::string& ref, const std::string& mode) {
    CheckRecord r;
    r.name = name;
    r.paper_ref = ref;
    r.mode = mode;
    return r;
}

// Runs n prepared cases, keeping the first failure in index order.
struct CaseRun {
    std::uint64_t cases = 0, skipped = 0;
    std::optional<std::size_t> first_fail;
    std::string error;
};

CaseRun run_cases(std::size_t n, bool parallel, const std::function<Verdict(std::size_t)>& f) {
    std::vector<char> verdict(n, 0);
    std::vector<std::string> errors(n);
#pragma omp parallel for num_threads(parallel ? thread_budget() : 1) schedule(dynamic, 1)
    for (long long i = 0; i < (long long)n; ++i) {
        try {
            Verdict v = f(std::size_t(i));
            verdict[std::size_t(i)] = v == Verdict::Pass ? 1 : v == Verdict::Skip ? 2 : 3;
        } catch (const NotQuasiInvertible&) {
            verdict[std::size_t(i)] = 2;
        } catch (const std::exception& e) {
            verdict[std::size_t(i)] = 3;
            errors[std::size_t(i)] = e.what();
        }
    }
    CaseRun out;
    for (std::size_t i = 0; i < n; ++i) {
        if (verdict[i] == 2) {
            ++out.skipped;
            continue;
        }
        ++out.cases;
        if (verdict[i] == 3) {
            out.first_fail = i;
            out.error = errors[i];
            break;
        }
    }
    return out;
}

void finish(CheckRecord& r, const CaseRun& run, const std::function<json(std::size_t)>& witness) {
    r.cases = run.cases;
    if (run.first_fail) {
        r.status = Status::Fail;
        r.witness = witness(*run.first_fail);
        if (!run.error.empty()) r.witness["error"] = run.error;
    }
    if (run.skipped) r.note = std::to_string(run.skipped) + " samples outside the domain";
}

}  // namespace

// ---------------------------------------------------------------- extended geometry

ExtendedGeometry extend_geometry(const Geometry& g, RingRef A) {
    if (A->kind() != RingKind::Weil || A->base() != g.ring())
        throw UnsupportedRing("extension ring " + A->text() + " is not a Weil algebra over " + g.ring()->text());
    return {g, A, g.over(A)};
}

Point ExtendedGeometry::lift(const Point& p) const { return ext.point(p.basis); }

Point ExtendedGeometry::project(const Point& p) const { return base.point(project_matrix(p.basis, base.ring())); }

Point TangentVector::to_point(const ExtendedGeometry& tx) const {
    Chart c = make_chart(tx.lift(p), tx.lift(anchor));
    return from_plus(c, generator_of(tx.A, 0) * v.embed(tx.A));
}

TangentVector TangentVector::reanchor(const ExtendedGeometry& tx, const Point& other) const {
    Point f = to_point(tx);
    Chart c = make_chart(tx.lift(p), tx.lift(other));
    Matrix X = to_plus(c, f);
    Monomial m(tx.A->gens().size(), 0);
    m[0] = 1;
    return {p, other, coefficient_matrix(X, m)};
}

// ---------------------------------------------------------------- pairs

Matrix vec(const Matrix& m) {
    Matrix v(m.ring(), m.rows() * m.cols(), 1);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) v(i * m.cols() + j, 0) = m(i, j);
    return v;
}

Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
    if (v.rows() != rows * cols || v.cols() != 1) throw DomainError("unvec: size mismatch");
    Matrix m(v.ring(), rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) m(i, j) = v(i * cols + j, 0);
    return m;
}

QuadraticJordanPair QuadraticJordanPair::over(RingRef r) const {
    if (r == ring) return *this;
    QuadraticJordanPair p = *this;
    p.ring = r;
    for (int s = 0; s < 2; ++s) {
        for (auto& m : p.basis[std::size_t(s)]) m = m.embed(r);
        for (auto& [k, m] : p.polar[std::size_t(s)]) m = m.embed(r);
    }
    return p;
}

QuadraticJordanPair QuadraticJordanPair::opposite() const {
    QuadraticJordanPair p = *this;
    std::swap(p.dim[0], p.dim[1]);
    std::swap(p.basis[0], p.basis[1]);
    std::swap(p.polar[0], p.polar[1]);
    p.name = name + "^op";
    return p;
}

namespace {
void require_vec(const QuadraticJordanPair& p, Side s, const Matrix& x) {
    if (x.ring() != p.ring) throw DomainError("vector over " + x.ring()->text() + ", pair over " + p.ring->text());
    if (x.rows() != p.n(s) || x.cols() != 1) throw DomainError("vector has wrong size for the pair");
}
}  // namespace

Matrix QuadraticJordanPair::Q(Side s, const Matrix& x) const {
    require_vec(*this, s, x);
    const auto& B = basis[std::size_t(s)];
    Matrix out(ring, n(s), n(other(s)));
    for (std::size_t i = 0; i < n(s); ++i)
        if (!x(i, 0).is_zero()) out = out + (x(i, 0) * x(i, 0)) * B[i];
    for (const auto& [ij, m] : polar[std::size_t(s)]) {
        Element c = x(ij.first, 0) * x(ij.second, 0);
        if (!c.is_zero()) out = out + c * m;
    }
    return out;
}

Matrix QuadraticJordanPair::Q(Side s, const Matrix& x, const Matrix& z) const {
    require_vec(*this, s, x);
    require_vec(*this, s, z);
    const auto& B = basis[std::size_t(s)];
    Matrix out(ring, n(s), n(other(s)));
    Element two = ring->from_int(2);
    for (std::size_t i = 0; i < n(s); ++i) {
        Element c = two * x(i, 0) * z(i, 0);
        if (!c.is_zero()) out = out + c * B[i];
    }
    for (const auto& [ij, m] : polar[std::size_t(s)]) {
        Element c = x(ij.first, 0) * z(ij.second, 0) + x(ij.second, 0) * z(ij.first, 0);
        if (!c.is_zero()) out = out + c * m;
    }
    return out;
}

Matrix QuadraticJordanPair::D(Side s, const Matrix& x, const Matrix& a) const {
    require_vec(*this, other(s), a);
    Matrix out(ring, n(s), n(s));
    for (std::size_t k = 0; k < n(s); ++k) out.set_block(0, k, Q(s, x, unit(s, k)) * a);
    return out;
}

Matrix QuadraticJordanPair::B(Side s, const Matrix& x, const Matrix& a) const {
    return Matrix::identity(ring, n(s)) - D(s, x, a) + Q(s, x) * Q(other(s), a);
}

bool QuadraticJordanPair::quasi_invertible(Side s, const Matrix& x, const Matrix& a) const {
    return is_invertible(B(s, x, a));
}

Matrix QuadraticJordanPair::quasi_inverse(Side s, const Matrix& x, const Matrix& a) const {
    auto Bi = try_invert(B(s, x, a));
    if (!Bi) throw NotQuasiInvertible("(" + vec_str(x) + "," + vec_str(a) + ") is not quasi-invertible");
    return *Bi * (x - Q(s, x) * a);
}

std::pair<Matrix, Matrix> QuadraticJordanPair::beta(Side s, const Matrix& x, const Matrix& a) const {
    Matrix b1 = B(s, x, a);
    auto b2 = try_invert(B(other(s), a, x));
    if (!is_invertible(b1) || !b2) throw NotQuasiInvertible("beta: not quasi-invertible");
    return {b1, *b2};
}

Matrix QuadraticJordanPair::zero(Side s) const { return Matrix(ring, n(s), 1); }

Matrix QuadraticJordanPair::unit(Side s, std::size_t i) const {
    Matrix e(ring, n(s), 1);
    e(i, 0) = ring->one();
    return e;
}

Matrix QuadraticJordanPair::random(Side s, Rng& rng, int height) const {
    Matrix v(ring, n(s), 1);
    for (std::size_t i = 0; i < n(s); ++i) v(i, 0) = ring->random(rng, height);
    return v;
}

QuadraticJordanPair pair_from_function(RingRef r, std::size_t np, std::size_t nm,
                                       const std::function<Matrix(Side, const Matrix&, const Matrix&)>& Q,
                                       const std::string& name) {
    QuadraticJordanPair p;
    p.ring = r;
    p.dim = {np, nm};
    p.name = name;
    for (Side s : {Side::Plus, Side::Minus}) {
        auto op = [&](const Matrix& x) {
            Matrix m(r, p.n(s), p.n(other(s)));
            for (std::size_t k = 0; k < p.n(other(s)); ++k) m.set_block(0, k, Q(s, x, p.unit(other(s), k)));
            return m;
        };
        std::vector<Matrix> single;
        for (std::size_t i = 0; i < p.n(s); ++i) single.push_back(op(p.unit(s, i)));
        for (std::size_t i = 0; i < p.n(s); ++i)
            for (std::size_t j = i + 1; j < p.n(s); ++j) {
                Matrix m = op(p.unit(s, i) + p.unit(s, j)) - single[i] - single[j];
                if (!m.is_zero()) p.polar[std::size_t(s)][{i, j}] = m;
            }
        p.basis[std::size_t(s)] = std::move(single);
    }
    return p;
}

QuadraticJordanPair scalar_pair(RingRef r) {
    return pair_from_function(
        r, 1, 1, [](Side, const Matrix& x, const Matrix& a) { return Matrix::column({x(0, 0) * x(0, 0) * a(0, 0)}); },
        "scalar");
}

QuadraticJordanPair matrix_pair(RingRef r, std::size_t p, std::size_t q) {
    return pair_from_function(
        r, p * q, p * q,
        [p, q](Side s, const Matrix& x, const Matrix& a) {
            // V+ holds q x p matrices, V- holds p x q matrices
            std::size_t xr = s == Side::Plus ? q : p, xc = s == Side::Plus ? p : q;
            Matrix X = unvec(x, xr, xc), A = unvec(a, xc, xr);
            return vec(X * A * X);
        },
        "matrix(" + std::to_string(p) + "," + std::to_string(q) + ")");
}

QuadraticJordanPair corrupted_pair(const QuadraticJordanPair& p) {
    QuadraticJordanPair c = p;
    c.basis[0][0] = Matrix(p.ring, p.n(Side::Plus), p.n(Side::Minus));
    c.name = p.name + "-corrupted";
    return c;
}

json to_json(const QuadraticJordanPair& p) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["name"] = p.name;
    j["ring"] = p.ring->text();
    j["dims"] = {p.dim[0], p.dim[1]};
    auto mat = [](const Matrix& m) {
        json rows = json::array();
        for (std::size_t i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (std::size_t k = 0; k < m.cols(); ++k) row.push_back(m(i, k).str());
            rows.push_back(row);
        }
        return rows;
    };
    for (int s = 0; s < 2; ++s) {
        json side;
        json b = json::array();
        for (auto& m : p.basis[std::size_t(s)]) b.push_back(mat(m));
        side["basis"] = b;
        json pol = json::array();
        for (auto& [ij, m] : p.polar[std::size_t(s)]) pol.push_back({{"i", ij.first}, {"j", ij.second}, {"value", mat(m)}});
        side["polar"] = pol;
        j[s == 0 ? "plus" : "minus"] = side;
    }
    return j;
}

QuadraticJordanPair pair_from_json(const json& j) {
    if (j.value("schema_version", -1) != kSchemaVersion) throw ParseError("pair: schema version mismatch");
    QuadraticJordanPair p;
    p.ring = Ring::parse(j.at("ring").get<std::string>());
    p.name = j.value("name", "");
    p.dim = {j.at("dims")[0].get<std::size_t>(), j.at("dims")[1].get<std::size_t>()};
    auto mat = [&](const json& rows, std::size_t r, std::size_t c) {
        std::vector<std::string> v;
        for (auto& row : rows)
            for (auto& e : row) v.push_back(e.get<std::string>());
        return Matrix::from_strings(p.ring, r, c, v);
    };
    for (int s = 0; s < 2; ++s) {
        const json& side = j.at(s == 0 ? "plus" : "minus");
        std::size_t r = p.dim[std::size_t(s)], c = p.dim[std::size_t(1 - s)];
        for (auto& m : side.at("basis")) p.basis[std::size_t(s)].push_back(mat(m, r, c));
        for (auto& e : side.at("polar"))
            p.polar[std::size_t(s)][{e.at("i").get<std::size_t>(), e.at("j").get<std::size_t>()}] = mat(e.at("value"), r, c);
        if (p.basis[std::size_t(s)].size() != r) throw ParseError("pair: basis value count mismatch");
    }
    return p;
}

// ---------------------------------------------------------------- geometry-backed pairs

BasePair standard_base(const Geometry& g) {
    std::size_t n = g.dim(), p;
    if (g.kind() == Geometry::Kind::Typed) {
        p = g.p();
    } else {
        p = n / 2;
    }
    if (p == 0 || p >= n) throw DomainError("standard base needs 0 < p < n");
    RingRef R = g.ring();
    Matrix A(R, n, p), B(R, n, n - p);
    for (std::size_t i = 0; i < p; ++i) A(i, i) = R->one();
    for (std::size_t i = 0; i < n - p; ++i) B(p + i, i) = R->one();
    return {g.point(A), g.point(B)};
}

Point GeometricPair::plus_point(const Matrix& x) const { return from_plus(chart, unvec(x, chart.q, chart.p)); }
Point GeometricPair::minus_point(const Matrix& a) const { return from_minus(chart, unvec(a, chart.p, chart.q)); }

std::optional<Matrix> GeometricPair::plus_coord(const Point& y) const {
    if (y.rank() != chart.p || !transversal(y, base.o_prime)) return std::nullopt;
    return vec(to_plus(chart, y));
}
std::optional<Matrix> GeometricPair::minus_coord(const Point& b) const {
    if (b.rank() != chart.q || !transversal(b, base.o)) return std::nullopt;
    return vec(to_minus(chart, b));
}

GeometricPair extract_pair(const Geometry& g, const BasePair& base) {
    if (!transversal(base.o, base.o_prime)) throw DomainError("base points are not transversal");
    GeometricPair gp{g, base, make_chart(base.o, base.o_prime), {}};
    RingRef K = g.ring();
    auto tx = extend_geometry(g, tangent_ring(K));
    RingRef T = tx.A;
    Point oT = tx.lift(base.o), opT = tx.lift(base.o_prime);
    Chart cT = make_chart(oT, opT);
    Element eps = T->generator(0);
    const std::size_t p = gp.chart.p, q = gp.chart.q;
    Monomial m1{1};
    auto Q = [&](Side s, const Matrix& x, const Matrix& a) -> Matrix {
        if (s == Side::Plus) {
            ProjMap L = translation(oT, from_minus(cT, eps * unvec(a, p, q).embed(T)), opT);
            Matrix X = to_plus(cT, L(from_plus(cT, unvec(x, q, p).embed(T))));
            if (project_matrix(X, K) != unvec(x, q, p)) throw StructuralError("quasi-translation moved the base point");
            return vec(coefficient_matrix(X, m1));
        }
        ProjMap L = translation(opT, from_plus(cT, eps * unvec(a, q, p).embed(T)), oT);
        Matrix A = to_minus(cT, L(from_minus(cT, unvec(x, p, q).embed(T))));
        return vec(coefficient_matrix(A, m1));
    };
    gp.pair = pair_from_function(K, p * q, p * q, Q, "extracted(" + g.text() + ")");
    return gp;
}

GeometricPair extract_pair(const Geometry& g) { return extract_pair(g, standard_base(g)); }

// ---------------------------------------------------------------- identity suites

namespace {

struct JPCase {
    Side s;
    Matrix x, y;
};

// JP1-JP3 as operator identities; k selects the identity.
bool jp_holds(const QuadraticJordanPair& p, const JPCase& c, int k) {
    Side s = c.s, t = other(c.s);
    const Matrix &x = c.x, &y = c.y;
    Matrix Qx = p.Q(s, x);
    if (k == 0) return p.D(s, x, y) * Qx == Qx * p.D(t, y, x);
    Matrix Qxy = Qx * y;
    if (k == 1) return p.D(s, Qxy, y) == p.D(s, x, p.Q(t, y) * x);
    return p.Q(s, Qxy) == Qx * p.Q(t, y) * Qx;
}

const char* kJP1 = "D(x,y)Q(x) = Q(x)D(y,x)";
const char* kJP2 = "D(Q(x)y,y) = D(x,Q(y)x)";
const char* kJP3 = "Q(Q(x)y) = Q(x)Q(y)Q(x)";

void jp_records(CheckReport& rep, const QuadraticJordanPair& p, const std::vector<JPCase>& cases,
                const std::string& mode, const std::string& suffix, bool parallel) {
    std::array<std::string, 3> names{"JP1", "JP2", "JP3"};
    std::array<const char*, 3> refs{kJP1, kJP2, kJP3};
    for (int k = 0; k < 3; ++k) {
        CheckRecord r = make_record(names[std::size_t(k)] + suffix, refs[std::size_t(k)], mode);
        auto run = run_cases(cases.size(), parallel,
                             [&](std::size_t i) { return jp_holds(p, cases[i], k) ? Verdict::Pass : Verdict::Fail; });
        finish(r, run, [&](std::size_t i) {
            const auto& c = cases[i];
            return json{{"side", c.s == Side::Plus ? "+" : "-"}, {"x", vec_str(c.x)}, {"y", vec_str(c.y)}};
        });
        rep.add(r);
    }
}

bool no_six_torsion(RingRef r) {
    auto c = r->characteristic();
    return c == 0 || (c != 2 && c != 3 && c % 2 != 0 && c % 3 != 0);
}

// Every vector of V^s over a finite ring, when there are at most limit of them.
std::optional<std::vector<Matrix>> all_vectors(const QuadraticJordanPair& p, Side s, std::uint64_t limit) {
    auto sz = p.ring->size();
    if (!sz) return std::nullopt;
    std::uint64_t total = 1;
    for (std::size_t i = 0; i < p.n(s); ++i) {
        total *= *sz;
        if (total > limit) return std::nullopt;
    }
    std::vector<Matrix> out;
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        Matrix v(p.ring, p.n(s), 1);
        std::uint64_t r = idx;
        for (std::size_t i = 0; i < p.n(s); ++i) {
            v(i, 0) = p.ring->element_at(r % *sz);
            r /= *sz;
        }
        out.push_back(v);
    }
    return out;
}

}  // namespace

CheckReport check_pair_identities(const QuadraticJordanPair& p, const PairCheckOptions& opt) {
    CheckReport rep;
    rep.suite = "pair";
    rep.ring = p.ring->text();
    rep.seed = opt.seed;
    std::vector<JPCase> cases;
    std::string mode = opt.mode;
    if (mode == "exhaustive") {
        for (Side s : {Side::Plus, Side::Minus}) {
            auto xs = all_vectors(p, s, 4096), ys = all_vectors(p, other(s), 4096);
            if (!xs || !ys) throw DomainError("exhaustive pair check needs a small finite pair");
            for (auto& x : *xs)
                for (auto& y : *ys) cases.push_back({s, x, y});
        }
    } else {
        Rng rng(opt.seed);
        for (std::uint64_t i = 0; i < opt.samples; ++i)
            for (Side s : {Side::Plus, Side::Minus}) {
                Matrix x = p.random(s, rng), y = p.random(other(s), rng);
                cases.push_back({s, x, y});
            }
    }
    jp_records(rep, p, cases, mode, "", opt.parallel);

    // Scalar extensions by jet rings.
    for (int k : opt.jets) {
        RingRef J = jet_ring(p.ring, k);
        QuadraticJordanPair pj = p.over(J);
        Rng rng(opt.seed * 1000003ULL + std::uint64_t(k));
        std::vector<JPCase> jc;
        std::uint64_t n = std::max<std::uint64_t>(4, opt.samples / 4);
        for (std::uint64_t i = 0; i < n; ++i)
            for (Side s : {Side::Plus, Side::Minus}) {
                Matrix x = pj.random(s, rng), y = pj.random(other(s), rng);
                jc.push_back({s, x, y});
            }
        jp_records(rep, pj, jc, "jets", " over " + J->text(), opt.parallel);
    }

    // Linear Jordan pair identities with {xaz} = D(x,a)z.
    CheckRecord l1 = make_record("linear (1)", "{xaz} = {zax}", "random");
    CheckRecord l2 = make_record("linear (2)", "{uv{xyz}} = {{uvx}yz} - {x{vuy}z} + {xy{uvz}}", "random");
    if (!no_six_torsion(p.ring)) {
        for (auto* r : {&l1, &l2}) {
            r->status = Status::Skipped;
            r->note = "ring has 6-torsion";
        }
    } else {
        Rng rng(opt.seed ^ 0x9e3779b97f4a7c15ULL);
        struct LCase {
            Side s;
            Matrix u, x, z, v, y;
        };
        std::vector<LCase> lc;
        for (std::uint64_t i = 0; i < std::max<std::uint64_t>(4, opt.samples / 2); ++i)
            for (Side s : {Side::Plus, Side::Minus}) {
                LCase c{s, p.random(s, rng), p.random(s, rng), p.random(s, rng), p.random(other(s), rng),
                        p.random(other(s), rng)};
                lc.push_back(c);
            }
        auto T3 = [&](Side s, const Matrix& x, const Matrix& a, const Matrix& z) { return p.D(s, x, a) * z; };
        auto r1 = run_cases(lc.size(), opt.parallel, [&](std::size_t i) {
            const auto& c = lc[i];
            return T3(c.s, c.x, c.y, c.z) == T3(c.s, c.z, c.y, c.x) ? Verdict::Pass : Verdict::Fail;
        });
        auto r2 = run_cases(lc.size(), opt.parallel, [&](std::size_t i) {
            const auto& c = lc[i];
            Side s = c.s, t = other(s);
            Matrix lhs = T3(s, c.u, c.v, T3(s, c.x, c.y, c.z));
            Matrix rhs = T3(s, T3(s, c.u, c.v, c.x), c.y, c.z) - T3(s, c.x, T3(t, c.v, c.u, c.y), c.z) +
                         T3(s, c.x, c.y, T3(s, c.u, c.v, c.z));
            return lhs == rhs ? Verdict::Pass : Verdict::Fail;
        });
        auto wit = [&](std::size_t i) {
            const auto& c = lc[i];
            return json{{"u", vec_str(c.u)}, {"x", vec_str(c.x)}, {"z", vec_str(c.z)}, {"v", vec_str(c.v)},
                        {"y", vec_str(c.y)}};
        };
        finish(l1, r1, wit);
        finish(l2, r2, wit);
    }
    rep.add(l1);
    rep.add(l2);
    if (opt.symbolic) rep.absorb(check_pair_symbolic(p));
    return rep;
}

CheckReport check_pair_symbolic(const QuadraticJordanPair& p) {
    CheckReport rep;
    rep.suite = "pair-symbolic";
    rep.ring = p.ring->text();
    for (Side s : {Side::Plus, Side::Minus}) {
        std::vector<std::string> vars;
        for (std::size_t i = 0; i < p.n(s); ++i) vars.push_back("x" + std::to_string(i + 1));
        for (std::size_t i = 0; i < p.n(other(s)); ++i) vars.push_back("y" + std::to_string(i + 1));
        RingRef P = Ring::polynomial(p.ring, vars);
        QuadraticJordanPair pp = p.over(P);
        Matrix x(P, p.n(s), 1), y(P, p.n(other(s)), 1);
        for (std::size_t i = 0; i < p.n(s); ++i) x(i, 0) = P->generator(i);
        for (std::size_t i = 0; i < p.n(other(s)); ++i) y(i, 0) = P->generator(p.n(s) + i);
        std::vector<JPCase> c{{s, x, y}};
        CheckReport part;
        jp_records(part, pp, c, "symbolic", "", false);
        for (auto& r : part.checks) {
            r.name += s == Side::Plus ? " (+)" : " (-)";
            r.note = "generic point over " + P->text();
            rep.add(r);
        }
    }
    return rep;
}

CheckReport check_quasi_inverse(const GeometricPair& gp, std::uint64_t samples, std::uint64_t seed) {
    const auto& P = gp.pair;
    CheckReport rep;
    rep.suite = "quasi-inverse";
    rep.ring = P.ring->text();
    rep.geometry = gp.geometry.text();
    rep.seed = seed;
    Rng rng(seed);
    struct C {
        Matrix x, a;
        Element r;
    };
    std::vector<C> cs;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Matrix x = P.random(Side::Plus, rng), a = P.random(Side::Minus, rng);
        Element r = P.ring->random(rng);
        cs.push_back({x, a, r});
    }
    auto wit = [&](std::size_t i) { return json{{"x", vec_str(cs[i].x)}, {"a", vec_str(cs[i].a)}}; };

    CheckRecord geo = make_record("geometric quasi-translation", "L_o^{a,o'}(x) = x^a", "random");
    finish(geo, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               Point img = translation(gp.base.o, gp.minus_point(c.a), gp.base.o_prime)(gp.plus_point(c.x));
               auto coord = gp.plus_coord(img);
               bool qi = P.quasi_invertible(Side::Plus, c.x, c.a);
               if (qi != coord.has_value()) return Verdict::Fail;
               if (!qi) return Verdict::Skip;
               return *coord == P.quasi_inverse(Side::Plus, c.x, c.a) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(geo);

    CheckRecord tr = make_record("transversality", "x transversal to a iff (x,-a) quasi-invertible", "random");
    finish(tr, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               bool t = transversal(gp.plus_point(c.x), gp.minus_point(c.a));
               return t == P.quasi_invertible(Side::Plus, c.x, -c.a) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(tr);

    auto xs = all_vectors(P, Side::Plus, 64), as = all_vectors(P, Side::Minus, 64);
    if (xs && as) {
        CheckRecord te = make_record("transversality (all chart points)",
                                     "x transversal to a iff (x,-a) quasi-invertible", "exhaustive");
        std::vector<std::pair<std::size_t, std::size_t>> idx;
        for (std::size_t i = 0; i < xs->size(); ++i)
            for (std::size_t j = 0; j < as->size(); ++j) idx.push_back({i, j});
        finish(te, run_cases(idx.size(), true, [&](std::size_t k) {
                   const Matrix &x = (*xs)[idx[k].first], &a = (*as)[idx[k].second];
                   bool t = transversal(gp.plus_point(x), gp.minus_point(a));
                   return t == P.quasi_invertible(Side::Plus, x, -a) ? Verdict::Pass : Verdict::Fail;
               }),
               [&](std::size_t k) {
                   return json{{"x", vec_str((*xs)[idx[k].first])}, {"a", vec_str((*as)[idx[k].second])}};
               });
        rep.add(te);
    }

    CheckRecord zero = make_record("x^0 = x", "x^0 = x", "random");
    finish(zero, run_cases(cs.size(), true, [&](std::size_t i) {
               return P.quasi_inverse(Side::Plus, cs[i].x, P.zero(Side::Minus)) == cs[i].x ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(zero);

    CheckRecord sym = make_record("symmetry principle", "x^y = x + Q(x) y^x", "random");
    finish(sym, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               if (!P.quasi_invertible(Side::Plus, c.x, c.a)) return Verdict::Skip;
               Matrix lhs = P.quasi_inverse(Side::Plus, c.x, c.a);
               Matrix rhs = c.x + P.Q(Side::Plus, c.x) * P.quasi_inverse(Side::Minus, c.a, c.x);
               return lhs == rhs ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(sym);

    CheckRecord hom = make_record("homogeneity", "(rx)^a = r x^{ra}", "random");
    finish(hom, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               if (!c.r.is_unit() || !P.quasi_invertible(Side::Plus, c.r * c.x, c.a)) return Verdict::Skip;
               Matrix lhs = P.quasi_inverse(Side::Plus, c.r * c.x, c.a);
               Matrix rhs = c.r * P.quasi_inverse(Side::Plus, c.x, c.r * c.a);
               return lhs == rhs ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(hom);

    CheckRecord berg = make_record("geometric Bergman", "B^{o,o'}_{x a} = beta(x,-a)^{-1} in the chart", "random");
    finish(berg, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               Point X = gp.plus_point(c.x), A = gp.minus_point(c.a);
               if (!transversal(X, A)) return Verdict::Skip;
               ProjMap Bg = bergman(gp.base.o, gp.base.o_prime, X, A);
               auto beta = P.beta(Side::Plus, c.x, -c.a);
               if (Bg(gp.base.o) != gp.base.o || Bg(gp.base.o_prime) != gp.base.o_prime) return Verdict::Fail;
               for (std::size_t k = 0; k < P.n(Side::Plus); ++k) {
                   auto y = gp.plus_coord(Bg(gp.plus_point(P.unit(Side::Plus, k))));
                   if (!y || *y != invert_matrix(beta.first) * P.unit(Side::Plus, k)) return Verdict::Fail;
               }
               for (std::size_t k = 0; k < P.n(Side::Minus); ++k) {
                   auto b = gp.minus_coord(Bg(gp.minus_point(P.unit(Side::Minus, k))));
                   if (!b || *b != invert_matrix(beta.second) * P.unit(Side::Minus, k)) return Verdict::Fail;
               }
               return Verdict::Pass;
           }),
           wit);
    rep.add(berg);
    return rep;
}

// ---------------------------------------------------------------- TKK

TkkElement GradedLieAlgebra::euler() const {
    return {pair.zero(Side::Plus), Matrix::identity(pair.ring, pair.n(Side::Plus)),
            -Matrix::identity(pair.ring, pair.n(Side::Minus)), pair.zero(Side::Minus)};
}

TkkElement GradedLieAlgebra::constant(const Matrix& v) const {
    return {v, Matrix(pair.ring, pair.n(Side::Plus), pair.n(Side::Plus)),
            Matrix(pair.ring, pair.n(Side::Minus), pair.n(Side::Minus)), pair.zero(Side::Minus)};
}

TkkElement GradedLieAlgebra::quadratic(const Matrix& a) const {
    return {pair.zero(Side::Plus), Matrix(pair.ring, pair.n(Side::Plus), pair.n(Side::Plus)),
            Matrix(pair.ring, pair.n(Side::Minus), pair.n(Side::Minus)), a};
}

TkkElement GradedLieAlgebra::bracket(const TkkElement& X, const TkkElement& Y) const {
    const auto& P = pair;
    TkkElement r;
    r.v = X.Hp * Y.v - Y.Hp * X.v;
    r.Hp = X.Hp * Y.Hp - Y.Hp * X.Hp + P.D(Side::Plus, Y.v, X.a) - P.D(Side::Plus, X.v, Y.a);
    r.Hm = X.Hm * Y.Hm - Y.Hm * X.Hm - P.D(Side::Minus, X.a, Y.v) + P.D(Side::Minus, Y.a, X.v);
    r.a = X.Hm * Y.a - Y.Hm * X.a;
    return r;
}

Matrix GradedLieAlgebra::field(const TkkElement& X, const Matrix& x) const {
    return X.v + X.Hp * x + pair.Q(Side::Plus, x) * X.a;
}

namespace {
Matrix flatten(const TkkElement& e) {
    return Matrix::vcat(Matrix::vcat(e.v, vec(e.Hp)), Matrix::vcat(vec(e.Hm), e.a));
}
bool same(const TkkElement& x, const TkkElement& y) { return x.v == y.v && x.Hp == y.Hp && x.Hm == y.Hm && x.a == y.a; }
TkkElement add(const TkkElement& x, const TkkElement& y) { return {x.v + y.v, x.Hp + y.Hp, x.Hm + y.Hm, x.a + y.a}; }
TkkElement scale(const Element& c, const TkkElement& x) { return {c * x.v, c * x.Hp, c * x.Hm, c * x.a}; }
}  // namespace

std::size_t GradedLieAlgebra::dimension() const {
    std::vector<TkkElement> gens{euler()};
    for (std::size_t i = 0; i < pair.n(Side::Plus); ++i) gens.push_back(constant(pair.unit(Side::Plus, i)));
    for (std::size_t j = 0; j < pair.n(Side::Minus); ++j) gens.push_back(quadratic(pair.unit(Side::Minus, j)));
    for (std::size_t i = 0; i < pair.n(Side::Plus); ++i)
        for (std::size_t j = 0; j < pair.n(Side::Minus); ++j)
            gens.push_back(bracket(constant(pair.unit(Side::Plus, i)), quadratic(pair.unit(Side::Minus, j))));
    Matrix M = flatten(gens[0]);
    for (std::size_t k = 1; k < gens.size(); ++k) M = Matrix::hcat(M, flatten(gens[k]));
    if (!pair.ring->is_field()) throw UnsupportedRing("dimension needs a field");
    return canonical_span(M).cols();
}

GradedLieAlgebra tkk_algebra(const QuadraticJordanPair& p) { return GradedLieAlgebra{p}; }

CheckReport check_tkk(const GradedLieAlgebra& g, std::uint64_t samples, std::uint64_t seed, const GeometricPair* geo) {
    const auto& P = g.pair;
    CheckReport rep;
    rep.suite = "tkk";
    rep.ring = P.ring->text();
    rep.seed = seed;
    Rng rng(seed);
    const TkkElement E = g.euler();
    auto rv = [&] { return g.constant(P.random(Side::Plus, rng)); };
    auto ra = [&] { return g.quadratic(P.random(Side::Minus, rng)); };
    auto rh = [&] { return g.bracket(rv(), ra()); };
    auto is_g0 = [&](const TkkElement& x) { return x.v.is_zero() && x.a.is_zero(); };
    auto only_v = [&](const TkkElement& x) { return x.Hp.is_zero() && x.Hm.is_zero() && x.a.is_zero(); };
    auto only_a = [&](const TkkElement& x) { return x.Hp.is_zero() && x.Hm.is_zero() && x.v.is_zero(); };
    auto zero = [&](const TkkElement& x) { return is_g0(x) && x.Hp.is_zero() && x.Hm.is_zero(); };

    struct Rule {
        const char* name;
        const char* ref;
        std::function<bool()> ok;
    };
    std::vector<Rule> rules{
        {"[g1,g1]=0", "[g_1,g_1] = 0", [&] { return zero(g.bracket(ra(), ra())); }},
        {"[g-1,g-1]=0", "[g_-1,g_-1] = 0", [&] { return zero(g.bracket(rv(), rv())); }},
        {"[g1,g-1] in g0", "[g_1,g_-1] in g_0", [&] { return is_g0(g.bracket(ra(), rv())); }},
        {"[g0,g1] in g1", "[g_1,g_0] in g_1", [&] { return only_a(g.bracket(rh(), ra())); }},
        {"[g0,g-1] in g-1", "[g_-1,g_0] in g_-1", [&] { return only_v(g.bracket(rh(), rv())); }},
        {"ad(E) eigenvalues", "ad(E) acts by i on g_i", [&] {
             TkkElement v = rv(), a = ra(), h = rh();
             return same(g.bracket(E, v), v) && same(g.bracket(E, a), scale(P.ring->from_int(-1), a)) &&
                    zero(g.bracket(E, h));
         }},
    };
    for (auto& r : rules) {
        CheckRecord rec = make_record(r.name, r.ref, "random");
        for (std::uint64_t i = 0; i < samples; ++i) {
            ++rec.cases;
            if (!r.ok()) {
                rec.status = Status::Fail;
                rec.witness = {{"sample", i}};
                break;
            }
        }
        rep.add(rec);
    }

    CheckRecord jac = make_record("Jacobi", "[X,[Y,Z]] + [Y,[Z,X]] + [Z,[X,Y]] = 0", "random");
    CheckRecord trip = make_record("triple bracket", "[[a,x],z] = D(x,a)z", "random");
    if (!no_six_torsion(P.ring)) {
        for (auto* r : {&jac, &trip}) {
            r->status = Status::Skipped;
            r->note = "ring has 6-torsion";
        }
    } else {
        auto rnd = [&] {
            TkkElement x = add(add(rv(), ra()), rh());
            return add(x, scale(P.ring->random(rng), E));
        };
        for (std::uint64_t i = 0; i < samples; ++i) {
            TkkElement X = rnd(), Y = rnd(), Z = rnd();
            ++jac.cases;
            TkkElement s = add(add(g.bracket(X, g.bracket(Y, Z)), g.bracket(Y, g.bracket(Z, X))), g.bracket(Z, g.bracket(X, Y)));
            if (!zero(s)) {
                jac.status = Status::Fail;
                jac.witness = {{"sample", i}};
                break;
            }
        }
        for (std::uint64_t i = 0; i < samples; ++i) {
            Matrix x = P.random(Side::Plus, rng), z = P.random(Side::Plus, rng), a = P.random(Side::Minus, rng);
            ++trip.cases;
            TkkElement t = g.bracket(g.bracket(g.quadratic(a), g.constant(x)), g.constant(z));
            if (!only_v(t) || t.v != P.D(Side::Plus, x, a) * z) {
                trip.status = Status::Fail;
                trip.witness = {{"x", vec_str(x)}, {"a", vec_str(a)}, {"z", vec_str(z)}};
                break;
            }
        }
    }
    rep.add(jac);
    rep.add(trip);

    if (geo) {
        // Bracket of generators from the group commutator in the second tangent extension.
        RingRef K = P.ring;
        RingRef TT = second_tangent_ring(K);
        auto tx = extend_geometry(geo->geometry, TT);
        Point o = tx.lift(geo->base.o), op = tx.lift(geo->base.o_prime);
        Chart c = make_chart(o, op);
        const std::size_t p = geo->chart.p, q = geo->chart.q;
        Monomial m12{1, 1};
        struct Gen {
            std::string name;
            TkkElement elt;
            std::function<ProjMap(const Element&)> group;
        };
        std::vector<Gen> gens;
        for (std::size_t i = 0; i < P.n(Side::Plus); ++i) {
            Matrix v = P.unit(Side::Plus, i);
            gens.push_back({"v" + std::to_string(i), g.constant(v), [&, v](const Element& eps) {
                                return translation(op, from_plus(c, eps * unvec(v, q, p).embed(TT)), o);
                            }});
        }
        for (std::size_t j = 0; j < P.n(Side::Minus); ++j) {
            Matrix a = P.unit(Side::Minus, j);
            gens.push_back({"a" + std::to_string(j), g.quadratic(a), [&, a](const Element& eps) {
                                return translation(o, from_minus(c, eps * unvec(a, p, q).embed(TT)), op);
                            }});
        }
        gens.push_back({"E", E, [&](const Element& eps) { return scale_map(TT->one() + eps, o, op); }});
        // sample points: 0, units, their negatives, sums of two units
        std::vector<Matrix> xs{P.zero(Side::Plus)}, as{P.zero(Side::Minus)};
        for (std::size_t i = 0; i < P.n(Side::Plus); ++i) {
            xs.push_back(P.unit(Side::Plus, i));
            xs.push_back(-P.unit(Side::Plus, i));
            for (std::size_t j = i + 1; j < P.n(Side::Plus); ++j) xs.push_back(P.unit(Side::Plus, i) + P.unit(Side::Plus, j));
        }
        for (std::size_t i = 0; i < P.n(Side::Minus); ++i) {
            as.push_back(P.unit(Side::Minus, i));
            as.push_back(-P.unit(Side::Minus, i));
        }
        CheckRecord gr = make_record("geometric bracket", "e1 e2 [X,Y] = e1X e2Y (e1X)^-1 (e2Y)^-1", "exhaustive");
        Element e1 = TT->generator(0), e2 = TT->generator(1);
        for (std::size_t i = 0; i < gens.size() && gr.status == Status::Pass; ++i)
            for (std::size_t j = 0; j < gens.size() && gr.status == Status::Pass; ++j) {
                ProjMap A = gens[i].group(e1), B = gens[j].group(e2);
                ProjMap C = A * B * A.inverse() * B.inverse();
                TkkElement br = g.bracket(gens[i].elt, gens[j].elt);
                for (const auto& x : xs) {
                    ++gr.cases;
                    Matrix X = to_plus(c, C(from_plus(c, unvec(x, q, p).embed(TT))));
                    Matrix fx = vec(coefficient_matrix(X, m12));
                    if (fx != g.field(br, x)) {
                        gr.status = Status::Fail;
                        gr.witness = {{"X", gens[i].name}, {"Y", gens[j].name}, {"x", vec_str(x)}};
                        break;
                    }
                }
                for (const auto& a : as) {
                    if (gr.status != Status::Pass) break;
                    ++gr.cases;
                    Matrix A2 = to_minus(c, C(from_minus(c, unvec(a, p, q).embed(TT))));
                    Matrix fa = vec(coefficient_matrix(A2, m12));
                    Matrix expect = br.a + br.Hm * a + P.Q(Side::Minus, a) * br.v;
                    if (fa != expect) {
                        gr.status = Status::Fail;
                        gr.witness = {{"X", gens[i].name}, {"Y", gens[j].name}, {"a", vec_str(a)}};
                    }
                }
            }
        rep.add(gr);
    }
    return rep;
}

// ---------------------------------------------------------------- inversion formulas

CheckReport formulas_crosscheck(const GeometricPair& gp, std::uint64_t samples, std::uint64_t seed) {
    const auto& P = gp.pair;
    const Side S = Side::Plus, M = Side::Minus;
    CheckReport rep;
    rep.suite = "formulas";
    rep.ring = P.ring->text();
    rep.geometry = gp.geometry.text();
    rep.seed = seed;
    auto qi = [&](Side s, const Matrix& x, const Matrix& a) { return P.quasi_inverse(s, x, a); };
    Element two = P.ring->from_int(2);

    struct Sample {
        Matrix x, z, y, a, b;
    };
    Rng rng(seed);
    std::vector<Sample> pool;
    std::uint64_t attempts = 0;
    const std::uint64_t max_attempts = 50 * samples + 100;
    while (pool.size() < samples && attempts < max_attempts) {
        ++attempts;
        Sample s{P.random(S, rng), P.random(S, rng), P.random(S, rng), P.random(M, rng), P.random(M, rng)};
        // domain of the compact formula and of the step3 expansions
        Matrix ma = -s.a;
        if (!P.quasi_invertible(S, s.x, ma) || !P.quasi_invertible(S, s.z, ma) || !P.quasi_invertible(S, s.y, ma))
            continue;
        Matrix Qax = P.Q(M, s.a) * s.x;
        if (!P.quasi_invertible(S, s.z, Qax)) continue;
        Matrix w = qi(S, s.x, ma) - qi(S, s.y, ma) + qi(S, s.z, ma);
        if (!P.quasi_invertible(S, w, s.a)) continue;
        Matrix v = s.x + P.B(S, s.x, ma) * qi(S, s.z, Qax);
        Matrix vp = two * s.a + Qax + P.Q(M, s.a) * P.B(S, s.x, ma) * qi(S, s.z, Qax);
        if (!P.quasi_invertible(S, v, ma) || !P.quasi_invertible(S, s.y, -vp)) continue;
        if (!P.quasi_invertible(M, s.b, -v)) continue;
        pool.push_back(s);
    }
    auto wit = [&](std::size_t i) {
        const auto& s = pool[i];
        return json{{"x", vec_str(s.x)}, {"z", vec_str(s.z)}, {"y", vec_str(s.y)}, {"a", vec_str(s.a)}, {"b", vec_str(s.b)}};
    };
    auto geoJ = [&](const Sample& s) { return j_map(gp.plus_point(s.x), gp.minus_point(s.a), gp.plus_point(s.z)); };

    CheckRecord compact = make_record("compact", "J^{xz}_a(y) = (x^{-a} - y^{-a} + z^{-a})^a", "random");
    finish(compact, run_cases(pool.size(), true, [&](std::size_t i) {
               const auto& s = pool[i];
               Matrix ma = -s.a;
               Matrix w = qi(S, s.x, ma) - qi(S, s.y, ma) + qi(S, s.z, ma);
               auto g = gp.plus_coord(geoJ(s)(gp.plus_point(s.y)));
               return g && *g == qi(S, w, s.a) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(compact);

    CheckRecord vrec = make_record("step3 v", "J^{xz}_a(o) = (x^{-a} + z^{-a})^a = x + B(x,-a) z^{Q(a)x}", "random");
    finish(vrec, run_cases(pool.size(), true, [&](std::size_t i) {
               const auto& s = pool[i];
               Matrix ma = -s.a, Qax = P.Q(M, s.a) * s.x;
               Matrix v1 = qi(S, qi(S, s.x, ma) + qi(S, s.z, ma), s.a);
               Matrix v2 = s.x + P.B(S, s.x, ma) * qi(S, s.z, Qax);
               auto g = gp.plus_coord(geoJ(s)(gp.base.o));
               return g && *g == v1 && v1 == v2 ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(vrec);

    CheckRecord vprec = make_record("step3 v'", "J^{xz}_a(o') = 2a + Q(a)x + Q(a)B(x,-a) z^{Q(a)x} = 2a + Q(a)x + B(a,-x) (Q(a)z)^x",
                                    "random");
    finish(vprec, run_cases(pool.size(), true, [&](std::size_t i) {
               const auto& s = pool[i];
               Matrix ma = -s.a, Qa = P.Q(M, s.a), Qax = Qa * s.x;
               Matrix v1 = two * s.a + Qax + Qa * P.B(S, s.x, ma) * qi(S, s.z, Qax);
               if (!P.quasi_invertible(M, Qa * s.z, s.x)) return Verdict::Skip;
               Matrix v2 = two * s.a + Qax + P.B(M, s.a, -s.x) * qi(M, Qa * s.z, s.x);
               auto g = gp.minus_coord(geoJ(s)(gp.base.o_prime));
               return g && *g == v1 && v1 == v2 ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(vprec);

    auto v_of = [&](const Sample& s) {
        Matrix ma = -s.a, Qax = P.Q(M, s.a) * s.x;
        return s.x + P.B(S, s.x, ma) * qi(S, s.z, Qax);
    };
    auto vp_of = [&](const Sample& s, const Matrix& v) { return two * s.a + P.Q(M, s.a) * v; };

    CheckRecord jy = make_record("step3 J(y)", "J^{xz}_a(y) = v - beta(v,-a) y^{-v'}", "random");
    finish(jy, run_cases(pool.size(), true, [&](std::size_t i) {
               const auto& s = pool[i];
               Matrix v = v_of(s), vp = vp_of(s, v);
               Matrix f = v - P.B(S, v, -s.a) * qi(S, s.y, -vp);
               auto g = gp.plus_coord(geoJ(s)(gp.plus_point(s.y)));
               return g && *g == f ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(jy);

    CheckRecord jb = make_record("step3 J(b)", "J^{xz}_a(b) = v' - B(-a,v) b^{-v}", "random");
    finish(jb, run_cases(pool.size(), true, [&](std::size_t i) {
               const auto& s = pool[i];
               Matrix v = v_of(s), vp = vp_of(s, v);
               Matrix f = vp - P.B(M, -s.a, v) * qi(M, s.b, -v);
               auto g = gp.minus_coord(geoJ(s)(gp.minus_point(s.b)));
               return g && *g == f ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(jb);

    CheckRecord st2 = make_record("step2", "J_a^{vo}(y) = v - beta(v,-a) y^{-v'} with v' = 2a + Q(a)v = J_a^{vo}(o')",
                                  "random");
    finish(st2, run_cases(pool.size(), true, [&](std::size_t i) {
               const auto& s = pool[i];
               Matrix v = s.x, vp = vp_of(s, v);
               if (!P.quasi_invertible(S, s.y, -vp)) return Verdict::Skip;
               ProjMap Jv = j_map(gp.plus_point(v), gp.minus_point(s.a), gp.base.o);
               auto g = gp.plus_coord(Jv(gp.plus_point(s.y)));
               auto g2 = gp.minus_coord(Jv(gp.base.o_prime));
               Matrix f = v - P.B(S, v, -s.a) * qi(S, s.y, -vp);
               return g && g2 && *g == f && *g2 == vp ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(st2);

    CheckRecord xz = make_record("x=z", "step3 with z = x agrees with step2 for v = J^{xx}_a(o)", "random");
    finish(xz, run_cases(pool.size(), true, [&](std::size_t i) {
               Sample s = pool[i];
               s.z = s.x;
               Matrix ma = -s.a, Qax = P.Q(M, s.a) * s.x;
               if (!P.quasi_invertible(S, s.x, Qax)) return Verdict::Skip;
               Matrix v = v_of(s), vp = vp_of(s, v);
               if (!P.quasi_invertible(S, v, ma) || !P.quasi_invertible(S, s.y, -vp)) return Verdict::Skip;
               Matrix step3 = v - P.B(S, v, ma) * qi(S, s.y, -vp);
               ProjMap Jv = j_map(gp.plus_point(v), gp.minus_point(s.a), gp.base.o);
               auto g = gp.plus_coord(Jv(gp.plus_point(s.y)));
               return g && *g == step3 ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(xz);

    CheckRecord bt = make_record("beta identities", "beta((-v)^a,-a) = beta(v^{-a},a) = beta(v,-a)^{-1}", "random");
    finish(bt, run_cases(pool.size(), true, [&](std::size_t i) {
               const auto& s = pool[i];
               Matrix v = s.x, ma = -s.a;
               if (!P.quasi_invertible(S, -v, s.a)) return Verdict::Skip;
               auto b1 = P.beta(S, qi(S, -v, s.a), ma);
               auto b2 = P.beta(S, qi(S, v, ma), s.a);
               auto b3 = P.beta(S, v, ma);
               bool ok = b1 == b2 && b2.first == invert_matrix(b3.first) && b2.second == invert_matrix(b3.second);
               return ok ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(bt);

    if (pool.size() < samples) {
        CheckRecord r = make_record("sample budget", "enough quasi-invertible samples", "random");
        r.status = Status::Incomplete;
        r.cases = pool.size();
        r.note = "only " + std::to_string(pool.size()) + " usable samples after " + std::to_string(attempts) + " draws";
        rep.add(r);
    }
    for (auto& r : rep.checks)
        if (r.name != "sample budget")
            r.note += (r.note.empty() ? "" : "; ") + std::to_string(attempts - pool.size()) + " draws resampled";
    return rep;
}

// ---------------------------------------------------------------- algebras

Matrix JordanAlgebra::U(const Matrix& x) const {
    const auto& P = gp.pair;
    return P.Q(Side::Plus, x) * invert_matrix(P.Q(Side::Plus, e));
}

Matrix JordanAlgebra::inverse(const Matrix& y) const {
    auto Ui = try_invert(U(y));
    if (!Ui) throw NotInvertible("element is not invertible in the Jordan algebra");
    return *Ui * y;
}

JordanAlgebra jordan_algebra_from_triple(const Geometry& g, const Point& o, const Point& op, const Point& ep,
                                         std::uint64_t samples, std::uint64_t seed) {
    if (!transversal(o, op) || !transversal(o, ep) || !transversal(op, ep))
        throw DomainError("(o,o',e) is not pairwise transversal");
    JordanAlgebra A{extract_pair(g, {o, op}), {}, {}};
    A.e = *A.gp.plus_coord(ep);
    const auto& P = A.gp.pair;
    const Side S = Side::Plus;
    if (!is_invertible(P.Q(S, A.e))) throw StructuralError("Q(e) is not invertible");
    CheckReport& rep = A.report;
    rep.suite = "jordan-algebra";
    rep.ring = P.ring->text();
    rep.geometry = g.text();
    rep.seed = seed;
    Rng rng(seed);
    std::vector<Matrix> xs, ys;
    for (std::uint64_t i = 0; i < samples; ++i) {
        xs.push_back(P.random(S, rng));
        ys.push_back(P.random(S, rng));
    }
    auto wit = [&](std::size_t i) { return json{{"x", vec_str(xs[i])}, {"y", vec_str(ys[i])}}; };

    CheckRecord unit = make_record("unit", "U_e = id", "exhaustive");
    unit.cases = 1;
    if (!A.U(A.e).is_identity()) {
        unit.status = Status::Fail;
        unit.witness = {{"U_e", A.U(A.e).str()}};
    }
    rep.add(unit);

    CheckRecord ff = make_record("fundamental formula", "U_{U_x y} = U_x U_y U_x", "random");
    finish(ff, run_cases(xs.size(), true, [&](std::size_t i) {
               return A.U(A.U(xs[i]) * ys[i]) == A.U(xs[i]) * A.U(ys[i]) * A.U(xs[i]) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(ff);

    ProjMap Je = j_map(o, ep, op);
    CheckRecord inv = make_record("inversion", "j(y) = U_y^{-1} y = J^{oo'}_e(y)", "random");
    finish(inv, run_cases(ys.size(), true, [&](std::size_t i) {
               Point Y = A.gp.plus_point(ys[i]);
               bool invertible = is_invertible(A.U(ys[i]));
               if (invertible != transversal(Y, o)) return Verdict::Fail;
               if (!invertible) return Verdict::Skip;
               auto g = A.gp.plus_coord(Je(Y));
               return g && *g == A.inverse(ys[i]) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(inv);

    CheckRecord qx = make_record("Q_x = U_x", "J_x^{oo'} J_e^{oo'} = U_x on V for invertible x", "random");
    finish(qx, run_cases(xs.size(), true, [&](std::size_t i) {
               Point X = A.gp.plus_point(xs[i]);
               if (!transversal(X, o)) return Verdict::Skip;
               ProjMap Qm = j_map(o, X, op) * Je;
               Matrix Ux = A.U(xs[i]);
               for (std::size_t k = 0; k < P.n(S); ++k) {
                   auto w = A.gp.plus_coord(Qm(A.gp.plus_point(P.unit(S, k))));
                   if (!w || *w != Ux * P.unit(S, k)) return Verdict::Fail;
               }
               return Verdict::Pass;
           }),
           wit);
    rep.add(qx);

    CheckRecord vx = make_record("invertible = U_{oo'}", "V^x = U_{oo'}", "random");
    std::vector<Matrix> pts = ys;
    if (auto all = all_vectors(P, S, 4096)) {
        pts = *all;
        vx.mode = "exhaustive";
    }
    finish(vx, run_cases(pts.size(), true, [&](std::size_t i) {
               return is_invertible(A.U(pts[i])) == transversal(A.gp.plus_point(pts[i]), o) ? Verdict::Pass : Verdict::Fail;
           }),
           [&](std::size_t i) { return json{{"y", vec_str(pts[i])}}; });
    rep.add(vx);
    return A;
}

Matrix AssociativeAlgebra::product(const Matrix& u, const Matrix& v) const {
    const auto& P = gp.pair;
    const std::size_t n = P.n(Side::Plus);
    Matrix out = P.zero(Side::Plus);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            Element c = u(i, 0) * v(j, 0);
            if (!c.is_zero()) out = out + c * table[i * n + j];
        }
    return out;
}

AssociativeAlgebra associative_algebra_from_triple(const Geometry& g, const Point& o, const Point& op, const Point& ep,
                                                   std::uint64_t samples, std::uint64_t seed) {
    if (!transversal(o, op) || !transversal(o, ep) || !transversal(op, ep))
        throw DomainError("(o,o',e) is not pairwise transversal");
    AssociativeAlgebra A{extract_pair(g, {o, op}), {}, {}, {}};
    A.e = *A.gp.plus_coord(ep);
    const auto& P = A.gp.pair;
    const Side S = Side::Plus;
    const std::size_t n = P.n(S);
    RingRef K = P.ring, TT = second_tangent_ring(K);
    auto tx = extend_geometry(g, TT);
    Point oT = tx.lift(o), opT = tx.lift(op), eT = tx.lift(ep);
    Chart cT = make_chart(oT, opT);
    const std::size_t p = A.gp.chart.p, q = A.gp.chart.q;
    Element e1 = TT->generator(0), e2 = TT->generator(1);
    // group law m(x,z) = M^{oo'}_{xz}(e)
    auto m = [](const Point& O, const Point& Op, const Point& E, const Point& x, const Point& z) {
        return m_map(O, x, Op, z)(E);
    };
    auto tt_product = [&](const Matrix& u, const Matrix& v) {
        Matrix eu = unvec(A.e, q, p).embed(TT);
        Point x = from_plus(cT, eu + e1 * unvec(u, q, p).embed(TT));
        Point z = from_plus(cT, eu + e2 * unvec(v, q, p).embed(TT));
        Matrix r = to_plus(cT, m(oT, opT, eT, x, z));
        return vec(coefficient_matrix(r, Monomial{1, 1}));
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) A.table.push_back(tt_product(P.unit(S, i), P.unit(S, j)));

    CheckReport& rep = A.report;
    rep.suite = "associative-algebra";
    rep.ring = K->text();
    rep.geometry = g.text();
    rep.seed = seed;
    Rng rng(seed);
    std::vector<std::array<Matrix, 3>> cs;
    for (std::uint64_t i = 0; i < samples; ++i) cs.push_back({P.random(S, rng), P.random(S, rng), P.random(S, rng)});
    auto wit = [&](std::size_t i) { return json{{"u", vec_str(cs[i][0])}, {"v", vec_str(cs[i][1])}, {"w", vec_str(cs[i][2])}}; };

    CheckRecord bil = make_record("bilinearity", "e1 e2 (uv) = (e1 u)(e2 v) is bilinear", "random");
    finish(bil, run_cases(cs.size(), true, [&](std::size_t i) {
               return tt_product(cs[i][0], cs[i][1]) == A.product(cs[i][0], cs[i][1]) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(bil);
    CheckRecord as = make_record("associativity", "u(vw) = (uv)w", "random");
    finish(as, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               return A.product(c[0], A.product(c[1], c[2])) == A.product(A.product(c[0], c[1]), c[2]) ? Verdict::Pass
                                                                                                       : Verdict::Fail;
           }),
           wit);
    rep.add(as);
    CheckRecord un = make_record("unit", "ev = ve = v", "random");
    finish(un, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& v = cs[i][0];
               return A.product(A.e, v) == v && A.product(v, A.e) == v ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(un);
    CheckRecord gl = make_record("group law", "uv = M^{oo'}_{uv}(e) on U_{oo'}", "random");
    finish(gl, run_cases(cs.size(), true, [&](std::size_t i) {
               Point U = A.gp.plus_point(cs[i][0]), V = A.gp.plus_point(cs[i][1]);
               if (!transversal(U, o) || !transversal(V, o)) return Verdict::Skip;
               auto r = A.gp.plus_coord(m(o, op, ep, U, V));
               return r && *r == A.product(cs[i][0], cs[i][1]) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(gl);
    return A;
}

// ---------------------------------------------------------------- triple systems

namespace {
// Kernel of m^T over a field: the orthogonal complement of the column span.
Matrix orthogonal_complement(const Matrix& basis) {
    RingRef R = basis.ring();
    if (!R->is_field()) throw UnsupportedRing("orthogonal complement needs a field");
    const std::size_t n = basis.rows(), r = basis.cols();
    Matrix A = basis.transpose();  // r x n, reduce to row echelon form
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t col = 0; col < n && row < r; ++col) {
        std::size_t piv = row;
        while (piv < r && A(piv, col).is_zero()) ++piv;
        if (piv == r) continue;
        for (std::size_t k = 0; k < n; ++k) std::swap(A(row, k), A(piv, k));
        Element inv = A(row, col).inv();
        for (std::size_t k = 0; k < n; ++k) A(row, k) = A(row, k) * inv;
        for (std::size_t i = 0; i < r; ++i)
            if (i != row && !A(i, col).is_zero()) {
                Element f = A(i, col);
                for (std::size_t k = 0; k < n; ++k) A(i, k) = A(i, k) - f * A(row, k);
            }
        pivots.push_back(col);
        ++row;
    }
    std::vector<std::size_t> free;
    for (std::size_t c = 0; c < n; ++c)
        if (std::find(pivots.begin(), pivots.end(), c) == pivots.end()) free.push_back(c);
    Matrix K(R, n, free.size());
    for (std::size_t j = 0; j < free.size(); ++j) {
        K(free[j], j) = R->one();
        for (std::size_t i = 0; i < pivots.size(); ++i) K(pivots[i], j) = -A(i, free[j]);
    }
    return K;
}
}  // namespace

PointMap polarity_by_name(const Geometry& g, const std::string& name) {
    if (name == "perp") {
        Geometry geo = g;
        return [geo](const Point& x) { return geo.point(orthogonal_complement(x.basis)); };
    }
    if (name == "swap") {
        std::size_t n = g.dim();
        if (n % 2) throw DomainError("swap polarity needs even ambient rank");
        Matrix m(g.ring(), n, n);
        for (std::size_t i = 0; i < n / 2; ++i) {
            m(i, n / 2 + i) = g.ring()->one();
            m(n / 2 + i, i) = g.ring()->one();
        }
        ProjMap f(m);
        return [f](const Point& x) { return f(x); };
    }
    throw ParseError("unknown polarity '" + name + "' (swap | perp)");
}

Matrix JordanTripleSystem::Q(const Matrix& x) const { return as_pair.Q(Side::Plus, x); }

JordanTripleSystem jts_from_polarity(const Geometry& g, const PointMap& p, const Point& o, const PairCheckOptions& opt) {
    Point op = p(o);
    if (!transversal(o, op)) throw NotPolarity("p(o) is not transversal to o");
    if (p(op) != o) throw NotPolarity("p is not an involution at o");
    JordanTripleSystem T{extract_pair(g, {o, op}), {}, {}, {}};
    const auto& P = T.gp.pair;
    const Side S = Side::Plus, M = Side::Minus;
    if (P.n(S) != P.n(M)) throw DomainError("polarity must exchange modules of equal rank");
    const std::size_t n = P.n(S);
    Matrix Pm(P.ring, n, n), Pp(P.ring, n, n);
    for (std::size_t i = 0; i < n; ++i) {
        auto c = T.gp.minus_coord(p(T.gp.plus_point(P.unit(S, i))));
        auto d = T.gp.plus_coord(p(T.gp.minus_point(P.unit(M, i))));
        if (!c || !d) throw NotPolarity("polarity does not exchange U_o and U_o'");
        Pm.set_block(0, i, *c);
        Pp.set_block(0, i, *d);
    }
    T.P = Pm;
    T.as_pair = pair_from_function(
        P.ring, n, n, [&](Side, const Matrix& x, const Matrix& y) { return P.Q(S, x) * (Pm * y); },
        "jts(" + g.text() + ")");
    CheckReport& rep = T.report;
    rep.suite = "jts";
    rep.ring = P.ring->text();
    rep.geometry = g.text();
    rep.seed = opt.seed;
    Rng rng(opt.seed);
    std::vector<std::pair<Matrix, Matrix>> cs;
    for (std::uint64_t i = 0; i < opt.samples; ++i) cs.push_back({P.random(S, rng), P.random(M, rng)});
    auto wit = [&](std::size_t i) { return json{{"x", vec_str(cs[i].first)}, {"a", vec_str(cs[i].second)}}; };

    CheckRecord lin = make_record("polarity linear", "p acts linearly between U_o' and U_o", "random");
    finish(lin, run_cases(cs.size(), opt.parallel, [&](std::size_t i) {
               auto c = T.gp.minus_coord(p(T.gp.plus_point(cs[i].first)));
               return c && *c == Pm * cs[i].first ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(lin);
    CheckRecord inv = make_record("involution", "the induced pair involution squares to id", "exhaustive");
    inv.cases = 1;
    if (!(Pp * Pm).is_identity() || !(Pm * Pp).is_identity()) inv.status = Status::Fail;
    rep.add(inv);
    CheckRecord aut = make_record("pair automorphism", "P Q+(x) a = Q-(P x) P' a", "random");
    finish(aut, run_cases(cs.size(), opt.parallel, [&](std::size_t i) {
               const auto& [x, a] = cs[i];
               return Pm * (P.Q(S, x) * a) == P.Q(M, Pm * x) * (Pp * a) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(aut);
    CheckRecord agree = make_record("basis values", "Q(e_i) = Q+(e_i) P", "exhaustive");
    for (std::size_t i = 0; i < n; ++i) {
        ++agree.cases;
        if (T.as_pair.basis[0][i] != P.basis[0][i] * Pm) agree.status = Status::Fail;
    }
    rep.add(agree);
    PairCheckOptions o2 = opt;
    rep.absorb(check_pair_identities(T.as_pair, o2), "JTS ");
    return T;
}

// ---------------------------------------------------------------- Koecher jets

namespace {

struct Node {
    enum Kind { Var, Num, Add, Sub, Neg, Scale, Q1, Q2, Dop, Bop, Qi } kind;
    std::string var;
    long long num = 0;
    std::vector<std::shared_ptr<Node>> kids;
    Side side = Side::Plus;
};
using NodeP = std::shared_ptr<Node>;

class Parser {
public:
    explicit Parser(std::string s) : s_(std::move(s)) {}
    NodeP parse() {
        NodeP n = expr();
        skip();
        if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
        return n;
    }

private:
    std::string s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& m) {
        throw ParseError("expression: " + m + " at position " + std::to_string(pos_));
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!eat(c)) fail(std::string("expected '") + c + "'");
    }
    static NodeP mk(Node::Kind k, std::vector<NodeP> kids = {}) {
        auto n = std::make_shared<Node>();
        n->kind = k;
        n->kids = std::move(kids);
        return n;
    }
    void same_side(const NodeP& a, const NodeP& b) {
        if (a->side != b->side) fail("adding vectors from different modules");
    }
    void opposite(const NodeP& a, const NodeP& b) {
        if (a->side == b->side) fail("operator arguments must lie in opposite modules");
    }
    NodeP expr() {
        NodeP n;
        if (eat('-')) {
            NodeP t = term();
            n = mk(Node::Neg, {t});
            n->side = t->side;
        } else {
            n = term();
        }
        for (;;) {
            if (eat('+')) {
                NodeP t = term();
                same_side(n, t);
                Side sd = n->side;
                n = mk(Node::Add, {n, t});
                n->side = sd;
            } else if (eat('-')) {
                NodeP t = term();
                same_side(n, t);
                Side sd = n->side;
                n = mk(Node::Sub, {n, t});
                n->side = sd;
            } else {
                return n;
            }
        }
    }
    NodeP term() {
        skip();
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            long long v = 0;
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) v = v * 10 + (s_[pos_++] - '0');
            eat('*');
            NodeP u = unary();
            NodeP n = mk(Node::Scale, {u});
            n->num = v;
            n->side = u->side;
            return n;
        }
        return unary();
    }
    NodeP unary() {
        skip();
        if (eat('(')) {
            NodeP n = expr();
            expect(')');
            return n;
        }
        if (pos_ >= s_.size()) fail("unexpected end");
        if (s_.compare(pos_, 3, "qi(") == 0) {
            pos_ += 3;
            NodeP x = expr();
            expect(',');
            NodeP a = expr();
            expect(')');
            opposite(x, a);
            NodeP n = mk(Node::Qi, {x, a});
            n->side = x->side;
            return n;
        }
        char c = s_[pos_];
        if (c == 'Q' || c == 'D' || c == 'B') {
            ++pos_;
            expect('(');
            NodeP a1 = expr();
            NodeP a2;
            if (eat(',')) a2 = expr();
            expect(')');
            NodeP arg = unary();
            NodeP n;
            if (c == 'Q' && !a2) {
                opposite(a1, arg);
                n = mk(Node::Q1, {a1, arg});
            } else if (c == 'Q') {
                same_side(a1, a2);
                opposite(a1, arg);
                n = mk(Node::Q2, {a1, a2, arg});
            } else {
                if (!a2) fail(std::string(1, c) + " takes two arguments");
                opposite(a1, a2);
                same_side(a1, arg);
                n = mk(c == 'D' ? Node::Dop : Node::Bop, {a1, a2, arg});
            }
            n->side = a1->side;
            return n;
        }
        if (std::string("xyzuvw").find(c) != std::string::npos || std::string("abcd").find(c) != std::string::npos) {
            ++pos_;
            NodeP n = mk(Node::Var);
            n->var = std::string(1, c);
            n->side = std::string("xyzuvw").find(c) != std::string::npos ? Side::Plus : Side::Minus;
            return n;
        }
        fail(std::string("unknown symbol '") + c + "'");
    }
};

Matrix eval(const Node& n, const QuadraticJordanPair& p, const std::map<std::string, Matrix>& env) {
    auto k = [&](std::size_t i) { return eval(*n.kids[i], p, env); };
    switch (n.kind) {
        case Node::Var: return env.at(n.var);
        case Node::Num: break;
        case Node::Add: return k(0) + k(1);
        case Node::Sub: return k(0) - k(1);
        case Node::Neg: return -k(0);
        case Node::Scale: return p.ring->from_int(n.num) * k(0);
        case Node::Q1: return p.Q(n.side, k(0)) * k(1);
        case Node::Q2: return p.Q(n.side, k(0), k(1)) * k(2);
        case Node::Dop: return p.D(n.side, k(0), k(1)) * k(2);
        case Node::Bop: return p.B(n.side, k(0), k(1)) * k(2);
        case Node::Qi: return p.quasi_inverse(n.side, k(0), k(1));
    }
    throw StructuralError("bad expression node");
}

void collect_vars(const Node& n, std::map<std::string, Side>& out) {
    if (n.kind == Node::Var) out[n.var] = n.side;
    for (auto& c : n.kids) collect_vars(*c, out);
}

}  // namespace

JordanExpression JordanExpression::parse(const std::string& s) {
    Parser(s).parse();
    return {s};
}

CheckReport koecher_jet_check(const JordanExpression& e, const QuadraticJordanPair& p, int k, std::uint64_t samples,
                              std::uint64_t seed) {
    NodeP root = Parser(e.text).parse();
    std::map<std::string, Side> vars;
    collect_vars(*root, vars);
    RingRef J = jet_ring(p.ring, k);
    QuadraticJordanPair pj = p.over(J);
    Element delta = J->generator(0);
    CheckReport rep;
    rep.suite = "koecher";
    rep.ring = J->text();
    rep.seed = seed;
    CheckRecord r = make_record("identity", e.text + " = 0 in every delta-component", "jets");
    r.note = "V+ arguments scaled by delta";
    Rng rng(seed);
    for (std::uint64_t i = 0; i < samples && r.status == Status::Pass; ++i) {
        std::map<std::string, Matrix> env;
        for (auto& [name, side] : vars) {
            Matrix v = pj.random(side, rng);
            env[name] = side == Side::Plus ? delta * v : v;
        }
        Matrix val = eval(*root, pj, env);
        for (int d = 0; d <= k; ++d) {
            ++r.cases;
            Monomial m{std::uint16_t(d)};
            Matrix comp = val.map(p.ring, [&](const Element& x) { return J->coefficient(x, m); });
            if (!comp.is_zero()) {
                r.status = Status::Fail;
                json w{{"order", d}, {"component", vec_str(comp)}};
                for (auto& [name, v] : env) w[name] = vec_str(v);
                r.witness = w;
                break;
            }
        }
    }
    rep.add(r);
    return rep;
}

// ---------------------------------------------------------------- tangent contracts

namespace {
Point perturb(const ExtendedGeometry& tx, const Point& p, Rng& rng) {
    RingRef A = tx.A;
    Matrix B = p.basis.embed(A);
    Element eps = A->generator(0);
    for (std::size_t i = 0; i < B.rows(); ++i)
        for (std::size_t j = 0; j < B.cols(); ++j) B(i, j) = B(i, j) + eps * A->embed(tx.base.ring()->random(rng));
    return tx.ext.point(B);
}

Point transversal_to(const Geometry& g, Rng& rng, std::initializer_list<const Point*> others, std::size_t rank) {
    for (int t = 0; t < 1000; ++t) {
        Point p = g.random_point_of_rank(rng, rank);
        bool ok = true;
        for (auto* o : others) ok = ok && transversal(p, *o);
        if (ok) return p;
    }
    throw DomainError("could not sample a transversal point");
}
}  // namespace

CheckReport tangent_contracts(const Geometry& g, std::uint64_t samples, std::uint64_t seed) {
    RingRef K = g.ring();
    auto tx = extend_geometry(g, tangent_ring(K));
    RingRef T = tx.A;
    Element eps = T->generator(0);
    Monomial m1{1};
    CheckReport rep;
    rep.suite = "tangent";
    rep.ring = T->text();
    rep.geometry = g.text();
    rep.seed = seed;
    auto ranks = g.ranks();
    std::size_t n = g.dim();
    // pick a rank with a complementary rank available
    std::size_t pr = 0;
    for (std::size_t r : ranks)
        if (g.allows_rank(n - r) && r > 0 && r < n) {
            pr = r;
            break;
        }
    if (pr == 0) throw DomainError("geometry has no transversal pairs");
    const std::size_t qr = n - pr;

    struct Cfg {
        Point a, x, z, y, ap;
        Matrix W;
        Point xs, as, zs, ys, bs;
        Element r;
    };
    Rng rng(seed);
    std::vector<Cfg> cs;
    for (std::uint64_t i = 0; i < samples; ++i) {
        Cfg c;
        c.a = g.random_point_of_rank(rng, qr);
        c.x = transversal_to(g, rng, {&c.a}, pr);
        c.z = transversal_to(g, rng, {&c.a}, pr);
        c.y = g.random_point_of_rank(rng, pr);
        c.ap = transversal_to(g, rng, {&c.x}, qr);
        c.W = Matrix(K, qr, pr);
        for (std::size_t r = 0; r < qr; ++r)
            for (std::size_t s = 0; s < pr; ++s) c.W(r, s) = K->random(rng);
        c.xs = perturb(tx, c.x, rng);
        c.as = perturb(tx, c.a, rng);
        c.zs = perturb(tx, c.z, rng);
        c.ys = perturb(tx, c.y, rng);
        Point b = transversal_to(g, rng, {&c.z, &c.x}, qr);
        c.bs = perturb(tx, b, rng);
        do c.r = K->random(rng); while (!c.r.is_unit());
        c.r = T->embed(c.r) + eps * T->embed(K->random(rng));
        cs.push_back(c);
    }
    auto wit = [&](std::size_t i) {
        return json{{"a", g.label(cs[i].a)}, {"x", g.label(cs[i].x)}, {"z", g.label(cs[i].z)}, {"y", g.label(cs[i].y)}};
    };

    CheckRecord triv = make_record("translations trivial on T_a", "T(L_a^{xz}) = id on the fiber over a", "random");
    finish(triv, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               // chart (a, x): V+ = U_x with origin a
               Chart ch = make_chart(tx.lift(c.a), tx.lift(c.x));
               Matrix W = c.W.transpose();  // pr x qr: coordinates of rank-qr points
               Point f = from_plus(ch, eps * W.embed(T));
               Point img = translation(tx.lift(c.a), tx.lift(c.x), tx.lift(c.z))(f);
               return to_plus(ch, img) == eps * W.embed(T) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(triv);

    CheckRecord jt = make_record("tangent of J at its fixed point", "T_x(J^{ab}_x) = -id", "random");
    finish(jt, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               // J^{a b}_x with a, b transversal to x: use a' and a
               if (!transversal(c.a, c.x)) return Verdict::Skip;
               Chart ch = make_chart(tx.lift(c.x), tx.lift(c.ap));
               Point f = from_plus(ch, eps * c.W.embed(T));
               Point img = j_map(tx.lift(c.a), tx.lift(c.x), tx.lift(c.ap))(f);
               return to_plus(ch, img) == -(eps * c.W.embed(T)) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(jt);

    CheckRecord fj = make_record("functoriality J", "pi(J^A(x,a,z)(y)) = J(pi x, pi a, pi z)(pi y)", "random");
    finish(fj, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               Point lhs = tx.project(j_map(c.xs, c.as, c.zs)(c.ys));
               Point rhs = j_map(tx.project(c.xs), tx.project(c.as), tx.project(c.zs))(tx.project(c.ys));
               return lhs == rhs ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(fj);

    CheckRecord fm = make_record("functoriality M", "pi(M^A(x,a,z,b)(y)) = M(pi x, pi a, pi z, pi b)(pi y)", "random");
    finish(fm, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               Point lhs = tx.project(m_map(c.xs, c.as, c.zs, c.bs)(c.ys));
               Point rhs = m_map(tx.project(c.xs), tx.project(c.as), tx.project(c.zs), tx.project(c.bs))(tx.project(c.ys));
               return lhs == rhs ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(fm);

    CheckRecord fs = make_record("functoriality S", "pi(r^a_x(y)) = (pi r)^{pi a}_{pi x}(pi y)", "random");
    finish(fs, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               Point lhs = tx.project(scale(c.r, c.xs, c.as, c.ys));
               Point rhs = scale(weil_project(c.r), tx.project(c.xs), tx.project(c.as), tx.project(c.ys));
               return lhs == rhs ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(fs);

    CheckRecord zs = make_record("zero section", "pi(zeta(p)) = p", "random");
    finish(zs, run_cases(cs.size(), true, [&](std::size_t i) {
               return tx.project(tx.lift(cs[i].y)) == cs[i].y ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(zs);

    CheckRecord ci = make_record("chart independence", "re-anchoring a tangent vector gives the same fiber point", "random");
    finish(ci, run_cases(cs.size(), true, [&](std::size_t i) {
               const auto& c = cs[i];
               if (!transversal(c.a, c.x)) return Verdict::Skip;
               TangentVector tv{c.x, c.a, c.W};
               TangentVector tw = tv.reanchor(tx, c.ap);
               return tw.to_point(tx) == tv.to_point(tx) ? Verdict::Pass : Verdict::Fail;
           }),
           wit);
    rep.add(ci);
    return rep;
}

}  // namespace jordanlab
