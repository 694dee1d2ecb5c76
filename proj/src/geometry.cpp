#include "jordanlab/geometry.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace jordanlab {

// ---------------------------------------------------------------- ProjMap

Matrix normalize_projective(const Matrix& m) {
    RingRef R = m.ring();
    if (R->kind() == RingKind::Integers) {
        for (const auto& e : m.entries()) {
            if (e.is_zero()) continue;
            if (std::get<BigInt>(e.payload()) < 0) return -m;
            return m;
        }
        return m;
    }
    for (const auto& e : m.entries()) {
        if (e.is_one()) return m;
        if (e.is_unit()) return e.inv() * m;
    }
    return m;
}

ProjMap::ProjMap(Matrix m) : m_(normalize_projective(m)) {
    if (m_.rows() != m_.cols()) throw StructuralError("projective map must be square");
}

ProjMap ProjMap::identity(RingRef r, std::size_t n) { return ProjMap(Matrix::identity(r, n)); }

Point ProjMap::operator()(const Point& p) const { return Point{canonical_span(m_ * p.basis)}; }

ProjMap ProjMap::inverse() const { return ProjMap(invert_matrix(m_)); }

ProjMap ProjMap::pow(int e) const {
    if (e < 0) return inverse().pow(-e);
    ProjMap r = identity(m_.ring(), m_.rows()), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

bool ProjMap::is_identity() const { return m_.is_identity(); }

// ---------------------------------------------------------------- Geometry

Geometry Geometry::grassmannian(RingRef r, std::size_t n) {
    if (n < 2) throw StructuralError("ambient rank must be >= 2");
    Geometry g;
    g.ring_ = r;
    g.n_ = n;
    g.kind_ = Kind::Full;
    return g;
}

Geometry Geometry::typed(RingRef r, std::size_t p, std::size_t q) {
    if (p + q < 2) throw StructuralError("ambient rank must be >= 2");
    Geometry g;
    g.ring_ = r;
    g.n_ = p + q;
    g.p_ = p;
    g.q_ = q;
    g.kind_ = Kind::Typed;
    return g;
}

Geometry Geometry::projective_line(RingRef r) {
    Geometry g;
    g.ring_ = r;
    g.n_ = 2;
    g.p_ = g.q_ = 1;
    g.kind_ = Kind::ProjLine;
    return g;
}

Geometry Geometry::parse(std::string_view text) {
    std::string t(text);
    if (t.rfind("projline:", 0) == 0) return projective_line(Ring::parse(t.substr(9)));
    if (t.rfind("gras:", 0) == 0) {
        std::string rest = t.substr(5);
        auto colon = rest.rfind(':');
        if (colon == std::string::npos) throw ParseError("geometry needs gras:<ring>:<n>: " + t);
        RingRef r = Ring::parse(rest.substr(0, colon));
        std::string dims = rest.substr(colon + 1);
        try {
            auto plus = dims.find('+');
            if (plus == std::string::npos) return grassmannian(r, std::stoul(dims));
            return typed(r, std::stoul(dims.substr(0, plus)), std::stoul(dims.substr(plus + 1)));
        } catch (const std::invalid_argument&) {
            throw ParseError("bad dimensions '" + dims + "' in " + t);
        }
    }
    throw ParseError("unknown geometry '" + t + "'");
}

std::string Geometry::text() const {
    switch (kind_) {
        case Kind::ProjLine: return "projline:" + ring_->text();
        case Kind::Typed: return "gras:" + ring_->text() + ":" + std::to_string(p_) + "+" + std::to_string(q_);
        default: return "gras:" + ring_->text() + ":" + std::to_string(n_);
    }
}

bool Geometry::allows_rank(std::size_t r) const {
    switch (kind_) {
        case Kind::Full: return r <= n_;
        default: return r == p_ || r == q_;
    }
}

std::vector<std::size_t> Geometry::ranks() const {
    std::vector<std::size_t> out;
    for (std::size_t r = 0; r <= n_; ++r)
        if (allows_rank(r)) out.push_back(r);
    return out;
}

Geometry Geometry::over(RingRef a) const {
    Geometry g = *this;
    g.ring_ = a;
    return g;
}

Point Geometry::point(const Matrix& spanning) const {
    if (spanning.rows() != n_) throw StructuralError("point basis has wrong ambient rank");
    Point p{canonical_span(spanning.embed(ring_))};
    if (!allows_rank(p.rank()))
        throw DomainError("rank " + std::to_string(p.rank()) + " point not in geometry " + text());
    return p;
}

Point Geometry::affine(const Element& t) const {
    if (n_ != 2) throw StructuralError("affine coordinates need rank-2 ambient module");
    return point(Matrix::column({ring_->embed(t), ring_->one()}));
}

Point Geometry::infinity() const {
    if (n_ != 2) throw StructuralError("infinity needs rank-2 ambient module");
    return point(Matrix::column({ring_->one(), ring_->zero()}));
}

Point Geometry::parse_point(std::string_view s) const {
    std::string t(s);
    if (!t.empty() && t[0] == '#') {
        auto pts = enumerate();
        std::size_t k = std::stoul(t.substr(1));
        if (k >= pts.size()) throw DomainError("point index out of range: " + t);
        return pts[k];
    }
    if (t == "inf") return infinity();
    return affine(ring_->parse_element(t));
}

std::optional<Element> Geometry::affine_coordinate(const Point& x) const {
    if (x.dim() != 2 || x.rank() != 1) return std::nullopt;
    const Element& v = x.basis(1, 0);
    if (!v.is_unit()) return std::nullopt;
    return x.basis(0, 0) * v.inv();
}

std::string Geometry::label(const Point& x) const {
    if (kind_ == Kind::ProjLine) {
        auto t = affine_coordinate(x);
        if (t) return t->str();
        if (x.basis(0, 0).is_unit() && x.basis(1, 0).is_zero()) return "inf";
    }
    return x.basis.str();
}

std::vector<Point> Geometry::enumerate() const {
    if (!ring_->is_field() || !ring_->is_finite())
        throw UnsupportedRing("enumeration needs a finite field, got " + ring_->text());
    std::uint64_t q = *ring_->size();
    std::vector<Point> out;
    for (std::size_t r : ranks()) {
        // pivot row sets in lexicographic order
        std::vector<std::size_t> piv(r);
        for (std::size_t i = 0; i < r; ++i) piv[i] = i;
        while (true) {
            std::vector<std::pair<std::size_t, std::size_t>> free;
            for (std::size_t k = 0; k < r; ++k)
                for (std::size_t i = piv[k] + 1; i < n_; ++i)
                    if (std::find(piv.begin(), piv.end(), i) == piv.end()) free.push_back({i, k});
            std::vector<std::uint64_t> digits(free.size(), 0);
            while (true) {
                Matrix b(ring_, n_, r);
                for (std::size_t k = 0; k < r; ++k) b(piv[k], k) = ring_->one();
                for (std::size_t f = 0; f < free.size(); ++f)
                    b(free[f].first, free[f].second) = ring_->element_at(digits[f]);
                out.push_back(Point{b});
                std::size_t f = 0;
                while (f < digits.size() && digits[f] == q - 1) digits[f++] = 0;
                if (f == digits.size()) break;
                ++digits[f];
            }
            // next combination
            std::size_t k = r;
            while (k > 0 && piv[k - 1] == n_ - r + k - 1) --k;
            if (k == 0) break;
            ++piv[k - 1];
            for (std::size_t j = k; j < r; ++j) piv[j] = piv[j - 1] + 1;
        }
    }
    return out;
}

Point Geometry::random_point_of_rank(Rng& rng, std::size_t r) const {
    for (int attempt = 0; attempt < 1000; ++attempt) {
        Matrix m(ring_, n_, r);
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < r; ++j) m(i, j) = ring_->random(rng);
        try {
            Point p{canonical_span(m)};
            if (p.rank() == r) return p;
        } catch (const NotSummand&) {
        }
    }
    throw DomainError("could not sample a point of rank " + std::to_string(r));
}

Point Geometry::random_point(Rng& rng) const {
    auto rs = ranks();
    std::uniform_int_distribution<std::size_t> d(0, rs.size() - 1);
    return random_point_of_rank(rng, rs[d(rng)]);
}

// ---------------------------------------------------------------- structure maps

bool transversal(const Point& x, const Point& a) {
    if (x.dim() != a.dim() || x.rank() + a.rank() != x.dim()) return false;
    if (x.rank() == 0 || a.rank() == 0) return true;
    return is_invertible(Matrix::hcat(x.basis, a.basis));
}

bool in_U(const Point& x, const std::vector<Point>& avoid) {
    return std::all_of(avoid.begin(), avoid.end(), [&](const Point& a) { return transversal(x, a); });
}

Matrix projector(const Point& x, const Point& a) {
    if (!transversal(x, a)) throw DomainError("projector: points are not transversal");
    std::size_t n = x.dim(), r = x.rank();
    RingRef R = x.ring();
    if (r == 0) return Matrix(R, n, n);
    if (r == n) return Matrix::identity(R, n);
    Matrix C = Matrix::hcat(x.basis, a.basis);
    Matrix Cinv = invert_matrix(C);
    // P = X * (first r rows of C^{-1})
    return x.basis * Cinv.block(0, 0, r, n);
}

Matrix j_operator(const Point& x, const Point& a, const Point& z) {
    if (!transversal(x, a) || !transversal(z, a)) throw DomainError("J: (x,a,z) not in D3");
    return projector(x, a) - projector(a, z);
}

ProjMap j_map(const Point& x, const Point& a, const Point& z) { return ProjMap(j_operator(x, a, z)); }

Matrix m_operator(const Point& x, const Point& a, const Point& z, const Point& b) {
    if (!transversal(x, a) || !transversal(a, z) || !transversal(z, b) || !transversal(b, x))
        throw DomainError("M: (x,a,z,b) not a closed transversal chain");
    return projector(x, a) - projector(b, z);
}

ProjMap m_map(const Point& x, const Point& a, const Point& z, const Point& b) {
    return ProjMap(m_operator(x, a, z, b));
}

Matrix scale_operator(const Element& r, const Point& y, const Point& a) {
    if (!transversal(y, a)) throw DomainError("scale: y and a not transversal");
    return projector(y, a) + y.ring()->embed(r) * projector(a, y);
}

ProjMap scale_map(const Element& r, const Point& y, const Point& a) {
    if (!r.is_unit()) throw DomainError("scale map needs an invertible scalar");
    return ProjMap(scale_operator(r, y, a));
}

Point apply_operator(const Matrix& g, const Point& x) {
    Point out{canonical_span(g * x.basis)};
    if (out.rank() != x.rank()) throw DomainError("operator drops rank on this point");
    return out;
}

Point scale(const Element& r, const Point& y, const Point& a, const Point& x) {
    if (!r.is_unit() && !transversal(x, a)) throw DomainError("scale: x not in U_a for non-invertible r");
    return apply_operator(scale_operator(r, y, a), x);
}

ProjMap translation(const Point& a, const Point& x, const Point& z) {
    ProjMap ux = j_map(x, a, x) * j_map(x, a, z);
    ProjMap uz = j_map(x, a, z) * j_map(z, a, z);
    if (ux != uz) throw StructuralError("translation depends on the auxiliary point");
    return ux;
}

ProjMap lambda_map(const Point& x, const Point& a, const Point& y, const Point& b) {
    return translation(y, b, a) * translation(a, y, x);
}

ProjMap bergman(const Point& x, const Point& a, const Point& y, const Point& b) {
    return translation(x, a, b) * translation(b, x, y) * translation(y, b, a) * translation(a, y, x);
}

ProjMap bergman_via_j(const Point& x, const Point& a, const Point& y, const Point& b) {
    return j_map(a, x, b) * j_map(x, b, y) * j_map(b, y, a) * j_map(y, a, x);
}

Point midpoint(const Point& x, const Point& a, const Point& z) {
    RingRef R = x.ring();
    auto half = R->from_int(2).try_inv();
    if (!half) throw UnsupportedRing("midpoints need 2 invertible in " + R->text());
    return scale(*half, x, a, z);
}

TripleDecomposition triple_decomposition(const ProjMap& g, const Point& o, const Point& op) {
    Point t = g(o);
    if (!transversal(t, op)) throw NotInBigCell("g(o) is not transversal to o'");
    Point w = g.inverse()(op);
    Point tp = scale(o.ring()->from_int(-1), op, o, w);
    ProjMap h = translation(op, o, t) * g * translation(o, op, tp);
    return {t, h, tp};
}

// ---------------------------------------------------------------- charts

Chart make_chart(const Point& o, const Point& op) {
    if (!transversal(o, op)) throw DomainError("chart base points are not transversal");
    Chart c{o, op, Matrix::hcat(o.basis, op.basis), Matrix(), o.rank(), op.rank()};
    c.Cinv = invert_matrix(c.C);
    return c;
}

Matrix to_plus(const Chart& c, const Point& y) {
    if (y.rank() != c.p) throw DomainError("chart: wrong rank for V+");
    Matrix B = c.Cinv * y.basis;
    auto B1inv = try_invert(B.block(0, 0, c.p, c.p));
    if (!B1inv) throw DomainError("chart: point not transversal to o'");
    return B.block(c.p, 0, c.q, c.p) * *B1inv;
}

Point from_plus(const Chart& c, const Matrix& X) {
    Matrix top = Matrix::vcat(Matrix::identity(c.C.ring(), c.p), X);
    return Point{canonical_span(c.C * top)};
}

Matrix to_minus(const Chart& c, const Point& b) {
    if (b.rank() != c.q) throw DomainError("chart: wrong rank for V-");
    Matrix B = c.Cinv * b.basis;
    auto C2inv = try_invert(B.block(c.p, 0, c.q, c.q));
    if (!C2inv) throw DomainError("chart: point not transversal to o");
    return -(B.block(0, 0, c.p, c.q) * *C2inv);
}

Point from_minus(const Chart& c, const Matrix& A) {
    Matrix stack = Matrix::vcat(-A, Matrix::identity(c.C.ring(), c.q));
    return Point{canonical_span(c.C * stack)};
}

Matrix in_chart(const Chart& c, const Matrix& g) { return c.Cinv * g * c.C; }

// ---------------------------------------------------------------- chains

namespace {
std::unordered_map<std::string, int> index_points(const std::vector<Point>& pts) {
    std::unordered_map<std::string, int> idx;
    for (std::size_t i = 0; i < pts.size(); ++i) idx[pts[i].key()] = int(i);
    return idx;
}
}  // namespace

ProjMap transporter(const Geometry& g, const std::pair<Point, Point>& src, const std::pair<Point, Point>& dst) {
    if (!transversal(src.first, src.second) || !transversal(dst.first, dst.second))
        throw DomainError("transporter endpoints must be transversal pairs");
    auto pts = g.enumerate();
    auto idx = index_points(pts);
    const int N = int(pts.size());
    std::vector<std::vector<bool>> T(N, std::vector<bool>(N));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) T[i][j] = transversal(pts[i], pts[j]);
    auto node = [&](int x, int a) { return x * N + a; };
    int s = node(idx.at(src.first.key()), idx.at(src.second.key()));
    int d = node(idx.at(dst.first.key()), idx.at(dst.second.key()));
    std::vector<int> parent(N * N, -2);
    parent[s] = -1;
    std::deque<int> queue{s};
    while (!queue.empty() && parent[d] == -2) {
        int cur = queue.front();
        queue.pop_front();
        int x = cur / N, a = cur % N;
        (void)x;
        for (int y = 0; y < N; ++y) {
            if (!T[a][y]) continue;
            for (int b = 0; b < N; ++b) {
                if (!T[y][b] || parent[node(y, b)] != -2) continue;
                parent[node(y, b)] = cur;
                queue.push_back(node(y, b));
            }
        }
    }
    if (parent[d] == -2) throw NoChain("no transversal chain between the pairs");
    std::vector<int> path;
    for (int v = d; v != -1; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    ProjMap out = ProjMap::identity(g.ring(), g.dim());
    for (std::size_t k = 1; k < path.size(); ++k) {
        int x = path[k - 1] / N, a = path[k - 1] % N, y = path[k] / N, b = path[k] % N;
        out = lambda_map(pts[x], pts[a], pts[y], pts[b]) * out;
    }
    if (out(src.first) != dst.first || out(src.second) != dst.second)
        throw StructuralError("transporter postcondition failed");
    return out;
}

ComponentInfo components(const Geometry& g) {
    auto pts = g.enumerate();
    const int N = int(pts.size());
    std::vector<std::vector<int>> adj(N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (transversal(pts[i], pts[j])) adj[i].push_back(j);
    ComponentInfo info;
    info.component.assign(N, -1);
    info.color.assign(N, -1);
    info.bipartite = true;
    for (int s = 0; s < N; ++s) {
        if (info.component[s] != -1) continue;
        std::deque<int> queue{s};
        info.component[s] = info.count;
        info.color[s] = 0;
        while (!queue.empty()) {
            int v = queue.front();
            queue.pop_front();
            for (int w : adj[v]) {
                if (info.component[w] == -1) {
                    info.component[w] = info.count;
                    info.color[w] = 1 - info.color[v];
                    queue.push_back(w);
                } else if (info.color[w] == info.color[v]) {
                    info.bipartite = false;
                }
            }
        }
        ++info.count;
    }
    if (!info.bipartite) info.color.clear();
    return info;
}

Dissociation dissociate(const Geometry& g) {
    auto pts = g.enumerate();
    Dissociation d;
    for (int tag = 0; tag < 2; ++tag)
        for (auto& p : pts) d.points.push_back({tag, p});
    std::size_t N = d.points.size();
    d.transversal.assign(N, std::vector<bool>(N, false));
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
            d.transversal[i][j] =
                d.points[i].first != d.points[j].first && transversal(d.points[i].second, d.points[j].second);
    return d;
}

// ---------------------------------------------------------------- closed forms

namespace closed_form {

namespace {
std::optional<Element> divide(const Element& n, const Element& d) {
    auto inv = d.try_inv();
    if (!inv) return std::nullopt;
    return n * *inv;
}
}  // namespace

std::optional<Element> j_inf(const Element& x, const Element& z, const Element& y) { return x - y + z; }

std::optional<Element> j_zero_inf(const Element& a, const Element& y) { return divide(a * a, y); }

std::optional<Element> m_zero_inf(const Element& a, const Element& b, const Element& y) { return divide(a * b, y); }

std::optional<Element> m_xz_inf_a(const Element& x, const Element& z, const Element& a, const Element& y) {
    auto ai = a.try_inv();
    if (!ai) return std::nullopt;
    return divide(x - y + z - x * *ai * z, y.ring()->one() - *ai * y);
}

std::optional<Element> m_xz_a_inf_at_zero(const Element& x, const Element& a, const Element& z) {
    auto ai = a.try_inv();
    if (!ai) return std::nullopt;
    return x - x * *ai * z + z;
}

namespace {
std::optional<Element> j_generic_impl(const Element& x, const Element& a, const Element& z, const Element& y,
                                      bool printed) {
    auto ai = a.try_inv();
    if (!ai) return std::nullopt;
    Element two = y.ring()->from_int(2);
    Element ai2 = *ai * *ai;
    Element num = x - y + z - two * x * *ai * z + ai2 * x * y * z;
    Element quad = printed ? x * y + y * z + x * z : x * y + y * z - x * z;
    Element den = y.ring()->one() - two * *ai * y + ai2 * quad;
    return divide(num, den);
}
}  // namespace

std::optional<Element> j_generic(const Element& x, const Element& a, const Element& z, const Element& y) {
    return j_generic_impl(x, a, z, y, false);
}

std::optional<Element> j_generic_printed(const Element& x, const Element& a, const Element& z, const Element& y) {
    return j_generic_impl(x, a, z, y, true);
}

}  // namespace closed_form

}  // namespace jordanlab
