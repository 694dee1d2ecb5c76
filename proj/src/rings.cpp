#include "jordanlab/rings.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <memory>
#include <mutex>
#include <numeric>
#include <sstream>

namespace jordanlab {

namespace {

std::int64_t mod_norm(std::int64_t v, std::int64_t n) {
    v %= n;
    return v < 0 ? v + n : v;
}

unsigned degree(const Monomial& m) {
    unsigned d = 0;
    for (auto e : m) d += e;
    return d;
}

// Graded order; within a degree, x before y.
bool mono_less(const Monomial& a, const Monomial& b) {
    unsigned da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return a > b;
}

bool is_const_mono(const Monomial& m) {
    return std::all_of(m.begin(), m.end(), [](auto e) { return e == 0; });
}

std::int64_t ipow(std::int64_t b, int e) {
    std::int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

// Polynomials over F_p as coefficient vectors, low degree first.
using PolyP = std::vector<int>;

PolyP poly_from_code(std::int64_t code, int p, int k) {
    PolyP r(k, 0);
    for (int i = 0; i < k; ++i) {
        r[i] = int(code % p);
        code /= p;
    }
    return r;
}

std::int64_t code_from_poly(const PolyP& f, int p) {
    std::int64_t c = 0;
    for (int i = int(f.size()) - 1; i >= 0; --i) c = c * p + f[i];
    return c;
}

PolyP poly_mod(PolyP a, const PolyP& m, int p) {
    // m is monic of degree deg(m)
    int dm = int(m.size()) - 1;
    for (int i = int(a.size()) - 1; i >= dm; --i) {
        int c = a[i] % p;
        if (c == 0) continue;
        for (int j = 0; j <= dm; ++j) a[i - dm + j] = int(mod_norm(a[i - dm + j] - std::int64_t(c) * m[j], p));
    }
    a.resize(std::max(dm, 1));
    for (auto& c : a) c = int(mod_norm(c, p));
    return a;
}

bool divides(const PolyP& d, const PolyP& f, int p) {
    PolyP r = poly_mod(f, d, p);
    return std::all_of(r.begin(), r.end(), [](int c) { return c == 0; });
}

std::mutex& registry_mutex() {
    static std::mutex m;
    return m;
}

std::map<std::string, std::unique_ptr<Ring>>& registry() {
    static std::map<std::string, std::unique_ptr<Ring>> r;
    return r;
}

}  // namespace

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Smallest monic irreducible polynomial of degree k over F_p, encoded in base p
// without its leading coefficient.
std::int64_t smallest_irreducible_code(int p, int k) {
    std::int64_t count = ipow(p, k);
    for (std::int64_t c = 0; c < count; ++c) {
        PolyP f = poly_from_code(c, p, k);
        f.push_back(1);
        bool irreducible = true;
        for (int d = 1; d <= k / 2 && irreducible; ++d) {
            std::int64_t cd = ipow(p, d);
            for (std::int64_t g = 0; g < cd && irreducible; ++g) {
                PolyP h = poly_from_code(g, p, d);
                h.push_back(1);
                if (divides(h, f, p)) irreducible = false;
            }
        }
        if (irreducible) return c;
    }
    throw Error("no irreducible polynomial found");
}

// ---------------------------------------------------------------- registry

RingRef Ring::intern(Ring r) {
    std::lock_guard<std::mutex> lock(registry_mutex());
    auto& reg = registry();
    auto it = reg.find(r.text_);
    if (it != reg.end()) return it->second.get();
    auto key = r.text_;
    auto ptr = std::unique_ptr<Ring>(new Ring(std::move(r)));
    RingRef out = ptr.get();
    reg.emplace(key, std::move(ptr));
    return out;
}

RingRef Ring::integers() {
    static RingRef r = [] {
        Ring x;
        x.kind_ = RingKind::Integers;
        x.text_ = "Z";
        return intern(std::move(x));
    }();
    return r;
}

RingRef Ring::rationals() {
    static RingRef r = [] {
        Ring x;
        x.kind_ = RingKind::Rationals;
        x.text_ = "Q";
        return intern(std::move(x));
    }();
    return r;
}

RingRef Ring::prime_field(std::int64_t p) {
    if (!is_prime(p)) throw StructuralError("PrimeField requires a prime, got " + std::to_string(p));
    if (p > (std::int64_t(1) << 31)) throw UnsupportedRing("prime too large");
    Ring x;
    x.kind_ = RingKind::PrimeField;
    x.mod_ = p;
    x.text_ = "Fp:" + std::to_string(p);
    return intern(std::move(x));
}

RingRef Ring::modular(std::int64_t n) {
    if (n < 2) throw StructuralError("ModularIntegers requires n >= 2");
    if (n > (std::int64_t(1) << 31)) throw UnsupportedRing("modulus too large");
    Ring x;
    x.kind_ = RingKind::ModularIntegers;
    x.mod_ = n;
    x.text_ = "Zn:" + std::to_string(n);
    return intern(std::move(x));
}

RingRef Ring::galois(std::int64_t q) {
    if (is_prime(q)) return prime_field(q);
    int p = 0, k = 0;
    for (std::int64_t d = 2; d <= q; ++d) {
        if (q % d == 0) {
            p = int(d);
            break;
        }
    }
    std::int64_t t = q;
    while (p > 0 && t % p == 0) {
        t /= p;
        ++k;
    }
    if (p == 0 || t != 1) throw StructuralError("Fq requires a prime power, got " + std::to_string(q));
    if (q > 256) throw UnsupportedRing("Galois fields limited to q <= 256");
    Ring x;
    x.kind_ = RingKind::GaloisField;
    x.mod_ = q;
    x.gf_p_ = p;
    x.gf_k_ = k;
    x.text_ = "Fq:" + std::to_string(q);
    PolyP m = poly_from_code(smallest_irreducible_code(p, k), p, k);
    m.push_back(1);
    auto Q = std::size_t(q);
    x.gf_add_.assign(Q * Q, 0);
    x.gf_mul_.assign(Q * Q, 0);
    x.gf_inv_.assign(Q, 0);
    for (std::int64_t a = 0; a < q; ++a) {
        PolyP fa = poly_from_code(a, p, k);
        for (std::int64_t b = 0; b < q; ++b) {
            PolyP fb = poly_from_code(b, p, k);
            PolyP s(k);
            for (int i = 0; i < k; ++i) s[i] = (fa[i] + fb[i]) % p;
            x.gf_add_[a * Q + b] = std::uint16_t(code_from_poly(s, p));
            PolyP prod(2 * k, 0);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + fa[i] * fb[j]) % p;
            x.gf_mul_[a * Q + b] = std::uint16_t(code_from_poly(poly_mod(prod, m, p), p));
        }
    }
    for (std::int64_t a = 1; a < q; ++a)
        for (std::int64_t b = 1; b < q; ++b)
            if (x.gf_mul_[a * Q + b] == 1) x.gf_inv_[a] = std::uint16_t(b);
    return intern(std::move(x));
}

RingRef Ring::polynomial(RingRef base, std::vector<std::string> vars) {
    if (vars.empty()) return base;
    Ring x;
    x.kind_ = RingKind::Polynomial;
    x.base_ = base;
    x.gens_ = std::move(vars);
    std::string t = "Poly:" + base->text() + "[";
    for (std::size_t i = 0; i < x.gens_.size(); ++i) t += (i ? "," : "") + x.gens_[i];
    x.text_ = t + "]";
    return intern(std::move(x));
}

RingRef Ring::weil(RingRef base, std::vector<std::string> gens, std::vector<int> orders) {
    if (gens.empty()) return base;
    if (gens.size() != orders.size()) throw StructuralError("Weil: generator/order count mismatch");
    for (int o : orders)
        if (o < 1) throw StructuralError("Weil: truncation orders must be >= 1");
    if (base->kind() == RingKind::Weil) {
        auto g = base->gens();
        auto o = base->orders();
        for (std::size_t i = 0; i < gens.size(); ++i) {
            if (std::find(g.begin(), g.end(), gens[i]) != g.end())
                throw StructuralError("Weil: duplicate generator " + gens[i]);
            g.push_back(gens[i]);
            o.push_back(orders[i]);
        }
        return weil(base->base(), g, o);
    }
    Ring x;
    x.kind_ = RingKind::Weil;
    x.base_ = base;
    x.gens_ = std::move(gens);
    x.orders_ = std::move(orders);
    std::string t = "Weil:" + base->text() + "[";
    for (std::size_t i = 0; i < x.gens_.size(); ++i)
        t += (i ? "," : "") + x.gens_[i] + "^" + std::to_string(x.orders_[i] + 1);
    x.text_ = t + "]";
    // all surviving monomials
    Monomial m(x.gens_.size(), 0);
    while (true) {
        x.monos_.push_back(m);
        std::size_t i = 0;
        while (i < m.size() && m[i] == x.orders_[i]) m[i++] = 0;
        if (i == m.size()) break;
        ++m[i];
    }
    std::sort(x.monos_.begin(), x.monos_.end(), mono_less);
    return intern(std::move(x));
}

RingRef weil_extend(RingRef base, const std::vector<std::string>& gens, const std::vector<int>& orders) {
    return Ring::weil(base, gens, orders);
}

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_top(const std::string& s, char sep) {
    std::vector<std::string> out;
    int depth = 0;
    std::string cur;
    for (char c : s) {
        if (c == '[' || c == '(') ++depth;
        if (c == ']' || c == ')') --depth;
        if (c == sep && depth == 0) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

std::int64_t parse_int(const std::string& s, const std::string& ctx) {
    try {
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw ParseError("");
        return v;
    } catch (...) {
        throw ParseError("bad integer '" + s + "' in ring descriptor " + ctx);
    }
}

}  // namespace

RingRef Ring::parse(std::string_view text) {
    std::string t = trim(text);
    if (t == "Z") return integers();
    if (t == "Q") return rationals();
    auto starts = [&](const char* p) { return t.rfind(p, 0) == 0; };
    if (starts("Fp:")) return prime_field(parse_int(t.substr(3), t));
    if (starts("Zn:")) return modular(parse_int(t.substr(3), t));
    if (starts("Fq:")) return galois(parse_int(t.substr(3), t));
    if (starts("Poly:") || starts("Weil:")) {
        bool weil_kind = starts("Weil:");
        std::string rest = t.substr(5);
        if (rest.empty() || rest.back() != ']') throw ParseError("missing generator list in " + t);
        int depth = 0;
        std::size_t open = std::string::npos;
        for (std::size_t i = rest.size(); i-- > 0;) {
            if (rest[i] == ']') ++depth;
            if (rest[i] == '[') {
                if (--depth == 0) {
                    open = i;
                    break;
                }
            }
        }
        if (open == std::string::npos) throw ParseError("unbalanced brackets in " + t);
        RingRef base = parse(rest.substr(0, open));
        auto items = split_top(rest.substr(open + 1, rest.size() - open - 2), ',');
        std::vector<std::string> names;
        std::vector<int> orders;
        for (auto& it : items) {
            if (it.empty()) throw ParseError("empty generator in " + t);
            if (weil_kind) {
                auto caret = it.find('^');
                if (caret == std::string::npos) throw ParseError("Weil generator needs ^k: " + it);
                names.push_back(trim(it.substr(0, caret)));
                orders.push_back(int(parse_int(trim(it.substr(caret + 1)), t)) - 1);
            } else {
                names.push_back(it);
            }
        }
        for (auto& n : names) {
            if (n.empty() || !std::isalpha((unsigned char)n[0]))
                throw ParseError("bad generator name '" + n + "' in " + t);
        }
        return weil_kind ? weil(base, names, orders) : polynomial(base, names);
    }
    throw ParseError("unknown ring descriptor '" + t + "'");
}

// ---------------------------------------------------------------- properties

std::int64_t Ring::characteristic() const {
    switch (kind_) {
        case RingKind::Integers:
        case RingKind::Rationals: return 0;
        case RingKind::PrimeField:
        case RingKind::ModularIntegers: return mod_;
        case RingKind::GaloisField: return gf_p_;
        default: return base_->characteristic();
    }
}

bool Ring::is_field() const {
    return kind_ == RingKind::Rationals || kind_ == RingKind::PrimeField || kind_ == RingKind::GaloisField;
}

bool Ring::is_local_weil() const { return kind_ == RingKind::Weil && base_->is_field(); }

bool Ring::is_finite() const {
    switch (kind_) {
        case RingKind::PrimeField:
        case RingKind::ModularIntegers:
        case RingKind::GaloisField: return true;
        case RingKind::Weil: return base_->is_finite();
        default: return false;
    }
}

std::optional<std::uint64_t> Ring::size() const {
    switch (kind_) {
        case RingKind::PrimeField:
        case RingKind::ModularIntegers:
        case RingKind::GaloisField: return std::uint64_t(mod_);
        case RingKind::Weil: {
            auto b = base_->size();
            if (!b) return std::nullopt;
            std::uint64_t r = 1;
            for (std::size_t i = 0; i < monos_.size(); ++i) {
                if (r > (std::uint64_t(1) << 40) / *b) return std::nullopt;
                r *= *b;
            }
            return r;
        }
        default: return std::nullopt;
    }
}

bool Ring::truncated(const Monomial& m) const {
    if (kind_ != RingKind::Weil) return false;
    for (std::size_t i = 0; i < m.size(); ++i)
        if (int(m[i]) > orders_[i]) return true;
    return false;
}

unsigned Ring::total_degree_bound() const {
    unsigned s = 0;
    for (int o : orders_) s += unsigned(o);
    return s;
}

// ---------------------------------------------------------------- constructors

Element Ring::zero() const { return from_int(0); }
Element Ring::one() const { return from_int(1); }

Element Ring::from_int(long long v) const { return from_bigint(BigInt(static_cast<long>(v))); }

Element Ring::from_bigint(const BigInt& v) const {
    switch (kind_) {
        case RingKind::Integers: return Element(this, v);
        case RingKind::Rationals: return Element(this, BigRat(v));
        case RingKind::PrimeField:
        case RingKind::ModularIntegers: {
            BigInt r = v % mod_;
            if (r < 0) r += mod_;
            return Element(this, std::int64_t(r.get_si()));
        }
        case RingKind::GaloisField: {
            BigInt r = v % gf_p_;
            if (r < 0) r += gf_p_;
            return Element(this, std::int64_t(r.get_si()));
        }
        default: {
            Element c = base_->from_bigint(v);
            Element::Sparse t;
            if (!c.is_zero()) t.push_back({Monomial(gens_.size(), 0), c});
            return Element(this, std::move(t));
        }
    }
}

Element Ring::generator(std::size_t i) const {
    if (kind_ == RingKind::GaloisField) {
        if (i != 0) throw StructuralError("Galois field has one generator");
        return Element(this, std::int64_t(gf_k_ > 1 ? gf_p_ : 0));
    }
    if (kind_ != RingKind::Polynomial && kind_ != RingKind::Weil) throw StructuralError("ring has no generators");
    if (i >= gens_.size()) throw StructuralError("generator index out of range");
    Monomial m(gens_.size(), 0);
    m[i] = 1;
    Element::Sparse t;
    if (!truncated(m)) t.push_back({m, base_->one()});
    return Element(this, std::move(t));
}

Element Ring::generator(std::string_view name) const {
    if (kind_ == RingKind::GaloisField && name == "t") return generator(0);
    for (std::size_t i = 0; i < gens_.size(); ++i)
        if (gens_[i] == name) return generator(i);
    if (base_) return embed(base_->generator(name));
    throw ParseError("unknown generator '" + std::string(name) + "' in ring " + text_);
}

Element Ring::element_at(std::uint64_t index) const {
    switch (kind_) {
        case RingKind::PrimeField:
        case RingKind::ModularIntegers:
        case RingKind::GaloisField: return Element(this, std::int64_t(index % std::uint64_t(mod_)));
        case RingKind::Weil: {
            auto b = base_->size();
            if (!b) throw UnsupportedRing("enumeration of infinite ring " + text_);
            Element::Sparse t;
            for (auto& m : monos_) {
                Element c = base_->element_at(index % *b);
                index /= *b;
                if (!c.is_zero()) t.push_back({m, c});
            }
            return Element(this, std::move(t));
        }
        default: throw UnsupportedRing("enumeration of infinite ring " + text_);
    }
}

// ---------------------------------------------------------------- arithmetic

Element Ring::canonical_sparse(Element::Sparse terms) const {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return mono_less(a.m, b.m); });
    Element::Sparse out;
    out.reserve(terms.size());
    for (auto& t : terms) {
        if (truncated(t.m)) continue;
        if (!out.empty() && out.back().m == t.m) {
            out.back().c = out.back().c + t.c;
        } else {
            out.push_back(std::move(t));
        }
    }
    out.erase(std::remove_if(out.begin(), out.end(), [](const Term& t) { return t.c.is_zero(); }), out.end());
    return Element(this, std::move(out));
}

Element Ring::add(const Element& a, const Element& b) const {
    switch (kind_) {
        case RingKind::Integers: return Element(this, BigInt(std::get<BigInt>(a.payload()) + std::get<BigInt>(b.payload())));
        case RingKind::Rationals: return Element(this, BigRat(std::get<BigRat>(a.payload()) + std::get<BigRat>(b.payload())));
        case RingKind::PrimeField:
        case RingKind::ModularIntegers: {
            std::int64_t s = std::get<std::int64_t>(a.payload()) + std::get<std::int64_t>(b.payload());
            return Element(this, s >= mod_ ? s - mod_ : s);
        }
        case RingKind::GaloisField:
            return Element(this, std::int64_t(gf_add_[std::get<std::int64_t>(a.payload()) * mod_ + std::get<std::int64_t>(b.payload())]));
        default: {
            const auto& x = std::get<Element::Sparse>(a.payload());
            const auto& y = std::get<Element::Sparse>(b.payload());
            Element::Sparse out;
            out.reserve(x.size() + y.size());
            std::size_t i = 0, j = 0;
            while (i < x.size() || j < y.size()) {
                if (j == y.size() || (i < x.size() && mono_less(x[i].m, y[j].m))) {
                    out.push_back(x[i++]);
                } else if (i == x.size() || mono_less(y[j].m, x[i].m)) {
                    out.push_back(y[j++]);
                } else {
                    Element c = x[i].c + y[j].c;
                    if (!c.is_zero()) out.push_back({x[i].m, std::move(c)});
                    ++i;
                    ++j;
                }
            }
            return Element(this, std::move(out));
        }
    }
}

Element Ring::neg(const Element& a) const {
    switch (kind_) {
        case RingKind::Integers: return Element(this, BigInt(-std::get<BigInt>(a.payload())));
        case RingKind::Rationals: return Element(this, BigRat(-std::get<BigRat>(a.payload())));
        case RingKind::PrimeField:
        case RingKind::ModularIntegers: {
            std::int64_t v = std::get<std::int64_t>(a.payload());
            return Element(this, v == 0 ? 0 : mod_ - v);
        }
        case RingKind::GaloisField: {
            auto f = poly_from_code(std::get<std::int64_t>(a.payload()), gf_p_, gf_k_);
            for (auto& c : f) c = (gf_p_ - c) % gf_p_;
            return Element(this, code_from_poly(f, gf_p_));
        }
        default: {
            Element::Sparse out = std::get<Element::Sparse>(a.payload());
            for (auto& t : out) t.c = -t.c;
            return Element(this, std::move(out));
        }
    }
}

Element Ring::sub(const Element& a, const Element& b) const { return add(a, neg(b)); }

Element Ring::mul(const Element& a, const Element& b) const {
    switch (kind_) {
        case RingKind::Integers: return Element(this, BigInt(std::get<BigInt>(a.payload()) * std::get<BigInt>(b.payload())));
        case RingKind::Rationals: return Element(this, BigRat(std::get<BigRat>(a.payload()) * std::get<BigRat>(b.payload())));
        case RingKind::PrimeField:
        case RingKind::ModularIntegers: {
            __int128 p = __int128(std::get<std::int64_t>(a.payload())) * std::get<std::int64_t>(b.payload());
            return Element(this, std::int64_t(p % mod_));
        }
        case RingKind::GaloisField:
            return Element(this, std::int64_t(gf_mul_[std::get<std::int64_t>(a.payload()) * mod_ + std::get<std::int64_t>(b.payload())]));
        default: {
            const auto& x = std::get<Element::Sparse>(a.payload());
            const auto& y = std::get<Element::Sparse>(b.payload());
            if (x.empty() || y.empty()) return zero();
            Element::Sparse out;
            out.reserve(x.size() * y.size());
            Monomial m(gens_.size());
            for (auto& s : x) {
                for (auto& t : y) {
                    bool dead = false;
                    for (std::size_t k = 0; k < m.size(); ++k) {
                        m[k] = std::uint16_t(s.m[k] + t.m[k]);
                        if (kind_ == RingKind::Weil && int(m[k]) > orders_[k]) dead = true;
                    }
                    if (dead) continue;
                    out.push_back({m, s.c * t.c});
                }
            }
            return canonical_sparse(std::move(out));
        }
    }
}

bool Ring::is_zero(const Element& a) const {
    switch (kind_) {
        case RingKind::Integers: return std::get<BigInt>(a.payload()) == 0;
        case RingKind::Rationals: return std::get<BigRat>(a.payload()) == 0;
        case RingKind::PrimeField:
        case RingKind::ModularIntegers:
        case RingKind::GaloisField: return std::get<std::int64_t>(a.payload()) == 0;
        default: return std::get<Element::Sparse>(a.payload()).empty();
    }
}

Element Ring::base_part(const Element& a) const {
    if (kind_ != RingKind::Weil && kind_ != RingKind::Polynomial) return a;
    const auto& x = std::get<Element::Sparse>(a.payload());
    if (!x.empty() && is_const_mono(x.front().m)) return x.front().c;
    return base_->zero();
}

Element Ring::residue(const Element& a) const {
    Element r = a;
    while (r.ring()->kind() == RingKind::Weil) r = r.ring()->base_part(r);
    return r;
}

bool Ring::is_unit(const Element& a) const {
    switch (kind_) {
        case RingKind::Integers: return abs(std::get<BigInt>(a.payload())) == 1;
        case RingKind::Rationals:
        case RingKind::PrimeField:
        case RingKind::GaloisField: return !is_zero(a);
        case RingKind::ModularIntegers: return std::gcd(std::get<std::int64_t>(a.payload()), mod_) == 1;
        case RingKind::Weil: return base_->is_unit(base_part(a));
        case RingKind::Polynomial: {
            const auto& x = std::get<Element::Sparse>(a.payload());
            return x.size() == 1 && is_const_mono(x[0].m) && base_->is_unit(x[0].c);
        }
    }
    return false;
}

std::optional<Element> Ring::inverse(const Element& a) const {
    switch (kind_) {
        case RingKind::Integers: {
            const auto& v = std::get<BigInt>(a.payload());
            if (abs(v) != 1) return std::nullopt;
            return a;
        }
        case RingKind::Rationals: {
            const auto& v = std::get<BigRat>(a.payload());
            if (v == 0) return std::nullopt;
            return Element(this, BigRat(1 / v));
        }
        case RingKind::PrimeField:
        case RingKind::ModularIntegers: {
            std::int64_t v = std::get<std::int64_t>(a.payload());
            // extended Euclid
            std::int64_t r0 = mod_, r1 = v, s0 = 0, s1 = 1;
            while (r1 != 0) {
                std::int64_t q = r0 / r1;
                std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
                std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
            }
            if (r0 != 1) return std::nullopt;
            return Element(this, mod_norm(s0, mod_));
        }
        case RingKind::GaloisField: {
            std::int64_t v = std::get<std::int64_t>(a.payload());
            if (v == 0) return std::nullopt;
            return Element(this, std::int64_t(gf_inv_[v]));
        }
        case RingKind::Polynomial: {
            if (!is_unit(a)) return std::nullopt;
            auto c = base_->inverse(std::get<Element::Sparse>(a.payload())[0].c);
            if (!c) return std::nullopt;
            return embed(*c);
        }
        case RingKind::Weil: {
            Element c = base_part(a);
            auto ci = base_->inverse(c);
            if (!ci) return std::nullopt;
            Element cinv = embed(*ci);
            Element n = one() - a * cinv;  // nilpotent
            Element sum = one(), pw = one();
            for (unsigned k = 0; k < total_degree_bound(); ++k) {
                pw = pw * n;
                if (pw.is_zero()) break;
                sum = sum + pw;
            }
            return sum * cinv;
        }
    }
    return std::nullopt;
}

bool Ring::has_subring(RingRef r) const {
    if (r == this || r == integers()) return true;
    if (kind_ == RingKind::Polynomial || kind_ == RingKind::Weil) return base_->has_subring(r);
    return false;
}

Element Ring::embed(const Element& a) const {
    if (a.ring() == this) return a;
    if (a.ring() == integers()) return from_bigint(std::get<BigInt>(a.payload()));
    if ((kind_ == RingKind::Polynomial || kind_ == RingKind::Weil) && base_->has_subring(a.ring())) {
        Element c = base_->embed(a);
        Element::Sparse t;
        if (!c.is_zero()) t.push_back({Monomial(gens_.size(), 0), c});
        return Element(this, std::move(t));
    }
    throw StructuralError("cannot embed element of " + a.ring()->text() + " into " + text_);
}

Element Ring::coefficient(const Element& a, const Monomial& m) const {
    if (kind_ != RingKind::Weil && kind_ != RingKind::Polynomial) throw StructuralError("coefficient on non-sparse ring");
    for (auto& t : std::get<Element::Sparse>(a.payload()))
        if (t.m == m) return t.c;
    return base_->zero();
}

Element Ring::substitute(const Element& a, RingRef target, const std::vector<Element>& images) const {
    if (kind_ != RingKind::Weil && kind_ != RingKind::Polynomial) return target->embed(a);
    if (images.size() != gens_.size()) throw StructuralError("substitute: image count mismatch");
    Element out = target->zero();
    for (auto& t : std::get<Element::Sparse>(a.payload())) {
        Element v = target->embed(t.c);
        for (std::size_t i = 0; i < t.m.size(); ++i)
            if (t.m[i]) v = v * images[i].pow(t.m[i]);
        out = out + v;
    }
    return out;
}

Element Ring::frobenius(const Element& a) const {
    if (kind_ == RingKind::PrimeField) return a;
    if (kind_ == RingKind::GaloisField) return a.pow(unsigned(gf_p_));
    throw UnsupportedRing("frobenius needs a finite field");
}

Element weil_project(const Element& a) {
    Element r = a;
    while (r.ring()->kind() == RingKind::Weil) r = r.ring()->base_part(r);
    return r;
}

Element weil_project_to(const Element& a, RingRef target) {
    RingRef src = a.ring();
    if (src == target) return a;
    if (src->kind() != RingKind::Weil) throw StructuralError("weil_project_to: source is not Weil");
    if (target == src->base()) return src->base_part(a);
    if (target->kind() != RingKind::Weil || target->base() != src->base())
        throw StructuralError("weil_project_to: incompatible target " + target->text());
    std::vector<int> where;
    for (auto& g : target->gens()) {
        auto it = std::find(src->gens().begin(), src->gens().end(), g);
        if (it == src->gens().end()) throw StructuralError("weil_project_to: missing generator " + g);
        where.push_back(int(it - src->gens().begin()));
    }
    std::vector<Element> images;
    for (std::size_t i = 0; i < src->gens().size(); ++i) {
        auto it = std::find(where.begin(), where.end(), int(i));
        images.push_back(it == where.end() ? target->zero() : target->generator(std::size_t(it - where.begin())));
    }
    return src->substitute(a, target, images);
}

// ---------------------------------------------------------------- text

namespace {

bool needs_parens(const std::string& s) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] == '+' || s[i] == '-' || s[i] == '*') return true;
    return false;
}

std::string mono_text(const Monomial& m, const std::vector<std::string>& names) {
    std::string s;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (!m[i]) continue;
        if (!s.empty()) s += "*";
        s += names[i];
        if (m[i] > 1) s += "^" + std::to_string(m[i]);
    }
    return s;
}

}  // namespace

std::string Ring::format(const Element& a) const {
    switch (kind_) {
        case RingKind::Integers: return std::get<BigInt>(a.payload()).get_str();
        case RingKind::Rationals: return std::get<BigRat>(a.payload()).get_str();
        case RingKind::PrimeField:
        case RingKind::ModularIntegers: return std::to_string(std::get<std::int64_t>(a.payload()));
        case RingKind::GaloisField: {
            auto f = poly_from_code(std::get<std::int64_t>(a.payload()), gf_p_, gf_k_);
            std::string s;
            for (int i = 0; i < gf_k_; ++i) {
                if (!f[i]) continue;
                if (!s.empty()) s += "+";
                s += std::to_string(f[i]);
                if (i >= 1) s += "*t";
                if (i >= 2) s += "^" + std::to_string(i);
            }
            return s.empty() ? "0" : s;
        }
        default: {
            const auto& x = std::get<Element::Sparse>(a.payload());
            if (x.empty()) return "0";
            std::string s;
            for (auto& t : x) {
                std::string c = t.c.str();
                std::string m = mono_text(t.m, gens_);
                std::string piece;
                if (m.empty()) {
                    piece = needs_parens(c) ? "(" + c + ")" : c;
                } else {
                    piece = (needs_parens(c) ? "(" + c + ")" : c) + "*" + m;
                }
                if (!s.empty() && piece[0] != '-') s += "+";
                s += piece;
            }
            return s;
        }
    }
}

namespace {

class ElementParser {
public:
    ElementParser(RingRef r, std::string_view s) : r_(r), s_(s) {}

    Element run() {
        Element v = expr();
        skip();
        if (pos_ != s_.size()) fail("trailing characters");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) {
        throw ParseError("cannot parse '" + std::string(s_) + "' in ring " + r_->text() + ": " + why);
    }
    void skip() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_])) ++pos_;
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    Element expr() {
        Element v = term();
        while (true) {
            if (eat('+'))
                v = v + term();
            else if (eat('-'))
                v = v - term();
            else
                return v;
        }
    }
    Element term() {
        Element v = unary();
        while (true) {
            if (eat('*')) {
                v = v * unary();
            } else if (eat('/')) {
                Element d = unary();
                auto inv = d.try_inv();
                if (!inv) fail("division by non-unit " + d.str());
                v = v * *inv;
            } else {
                return v;
            }
        }
    }
    Element unary() {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    Element power() {
        Element b = atom();
        if (eat('^')) {
            skip();
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
            if (st == pos_) fail("exponent expected");
            b = b.pow(unsigned(std::stoul(std::string(s_.substr(st, pos_ - st)))));
        }
        return b;
    }
    Element atom() {
        skip();
        if (pos_ >= s_.size()) fail("unexpected end");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            Element v = expr();
            if (!eat(')')) fail("')' expected");
            return v;
        }
        if (std::isdigit((unsigned char)c)) {
            std::size_t st = pos_;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) ++pos_;
            return r_->from_bigint(BigInt(std::string(s_.substr(st, pos_ - st))));
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            std::size_t st = pos_;
            while (pos_ < s_.size() && (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_')) ++pos_;
            return r_->generator(s_.substr(st, pos_ - st));
        }
        fail(std::string("unexpected '") + c + "'");
    }

    RingRef r_;
    std::string_view s_;
    std::size_t pos_ = 0;
};

}  // namespace

Element Ring::parse_element(std::string_view s) const { return ElementParser(this, s).run(); }

Element Ring::random(Rng& rng, int height) const {
    switch (kind_) {
        case RingKind::Integers:
        case RingKind::Rationals: {
            std::uniform_int_distribution<int> d(-height, height);
            return from_int(d(rng));
        }
        case RingKind::PrimeField:
        case RingKind::ModularIntegers:
        case RingKind::GaloisField: {
            std::uniform_int_distribution<std::int64_t> d(0, mod_ - 1);
            return Element(this, d(rng));
        }
        case RingKind::Weil: {
            Element::Sparse t;
            for (auto& m : monos_) {
                Element c = base_->random(rng, height);
                if (!c.is_zero()) t.push_back({m, c});
            }
            return Element(this, std::move(t));
        }
        case RingKind::Polynomial: return embed(base_->random(rng, height));
    }
    return zero();
}

// ---------------------------------------------------------------- Element

namespace {
void check_same(const Element& a, const Element& b) {
    if (!a.ring() || a.ring() != b.ring())
        throw StructuralError("descriptor mismatch: " + (a.ring() ? a.ring()->text() : std::string("<none>")) +
                              " vs " + (b.ring() ? b.ring()->text() : std::string("<none>")));
}
}  // namespace

bool Element::is_zero() const { return ring_->is_zero(*this); }
bool Element::is_one() const { return *this == ring_->one(); }
bool Element::is_unit() const { return ring_->is_unit(*this); }

Element Element::inv() const {
    auto r = ring_->inverse(*this);
    if (!r) throw NotInvertible(str() + " is not invertible in " + ring_->text());
    return *r;
}

std::optional<Element> Element::try_inv() const { return ring_->inverse(*this); }

Element Element::pow(unsigned e) const {
    Element r = ring_->one(), b = *this;
    while (e) {
        if (e & 1u) r = r * b;
        e >>= 1u;
        if (e) b = b * b;
    }
    return r;
}

std::string Element::str() const { return ring_ ? ring_->format(*this) : std::string("<null>"); }

Element operator+(const Element& a, const Element& b) {
    check_same(a, b);
    return a.ring()->add(a, b);
}
Element operator-(const Element& a, const Element& b) {
    check_same(a, b);
    return a.ring()->sub(a, b);
}
Element operator*(const Element& a, const Element& b) {
    check_same(a, b);
    return a.ring()->mul(a, b);
}
Element operator-(const Element& a) { return a.ring()->neg(a); }

bool operator==(const Element& a, const Element& b) {
    check_same(a, b);
    if (a.payload().index() != b.payload().index()) return false;
    switch (a.payload().index()) {
        case 0: return std::get<0>(a.payload()) == std::get<0>(b.payload());
        case 1: return std::get<1>(a.payload()) == std::get<1>(b.payload());
        case 2: return std::get<2>(a.payload()) == std::get<2>(b.payload());
        default: {
            const auto& x = std::get<3>(a.payload());
            const auto& y = std::get<3>(b.payload());
            if (x.size() != y.size()) return false;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i].m != y[i].m || !(x[i].c == y[i].c)) return false;
            return true;
        }
    }
}

}  // namespace jordanlab
