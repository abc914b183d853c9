// Multivariate polynomials over a number field, with terms kept in graded
// lexicographic order on the declared variable list.  Includes exact division,
// pseudo-division and a primitive-PRS multivariate gcd; these back the
// normalization of rational functions.
#pragma once

#include "ncg/number_field.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace ncg {

struct PolyRing {
    std::shared_ptr<const NumberField> field;
    std::vector<std::string> vars;

    int nvars() const { return static_cast<int>(vars.size()); }
    int var_index(const std::string& name) const {
        for (int i = 0; i < nvars(); ++i)
            if (vars[i] == name) return i;
        return -1;
    }
    static std::shared_ptr<const PolyRing> make(std::shared_ptr<const NumberField> f,
                                                std::vector<std::string> vars) {
        auto r = std::make_shared<PolyRing>();
        r->field = std::move(f);
        r->vars = std::move(vars);
        return r;
    }
    static std::shared_ptr<const PolyRing> rational(std::vector<std::string> vars) {
        return make(NumberField::rationals(), std::move(vars));
    }
};

using Mono = std::vector<uint32_t>;

inline uint32_t mono_degree(const Mono& m) {
    uint32_t d = 0;
    for (auto e : m) d += e;
    return d;
}

// Graded lex: higher total degree wins; ties broken lexicographically with the
// earlier declared variable more significant.
struct GradedLexLess {
    bool operator()(const Mono& a, const Mono& b) const {
        uint32_t da = mono_degree(a), db = mono_degree(b);
        if (da != db) return da < db;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    }
};

class MPoly {
  public:
    using TermMap = std::map<Mono, NFElem, GradedLexLess>;

    MPoly() = default;
    explicit MPoly(std::shared_ptr<const PolyRing> ring) : ring_(std::move(ring)) {}

    static MPoly zero(const std::shared_ptr<const PolyRing>& r) { return MPoly(r); }
    static MPoly constant(const std::shared_ptr<const PolyRing>& r, const NFElem& c) {
        MPoly p(r);
        if (!c.is_zero()) p.terms_.emplace(Mono(r->nvars(), 0), c);
        return p;
    }
    static MPoly constant(const std::shared_ptr<const PolyRing>& r, const Rat& q) {
        return constant(r, NFElem::from_rat(r->field, q));
    }
    static MPoly var(const std::shared_ptr<const PolyRing>& r, int idx, uint32_t exp = 1) {
        MPoly p(r);
        if (idx < 0 || idx >= r->nvars())
            throw std::invalid_argument("mpoly: variable index out of range");
        Mono m(r->nvars(), 0);
        m[idx] = exp;
        p.terms_.emplace(std::move(m), NFElem::one(r->field));
        return p;
    }
    static MPoly var(const std::shared_ptr<const PolyRing>& r, const std::string& name) {
        int idx = r->var_index(name);
        if (idx < 0) throw std::invalid_argument("mpoly: unknown variable " + name);
        return var(r, idx);
    }

    const std::shared_ptr<const PolyRing>& ring() const { return ring_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() ||
               (terms_.size() == 1 && mono_degree(terms_.begin()->first) == 0);
    }
    NFElem constant_value() const {
        if (terms_.empty()) return NFElem::zero(ring_->field);
        return terms_.begin()->second;
    }

    uint32_t total_degree() const {
        return terms_.empty() ? 0 : mono_degree(terms_.rbegin()->first);
    }
    uint32_t degree_in(int v) const {
        uint32_t d = 0;
        for (const auto& [m, c] : terms_) d = std::max(d, m[v]);
        return d;
    }
    const Mono& leading_mono() const { return terms_.rbegin()->first; }
    const NFElem& leading_coeff() const { return terms_.rbegin()->second; }

    void add_term(const Mono& m, const NFElem& c) {
        if (c.is_zero()) return;
        auto it = terms_.find(m);
        if (it == terms_.end()) {
            terms_.emplace(m, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend MPoly operator+(const MPoly& a, const MPoly& b) {
        a.check(b);
        MPoly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, c);
        return r;
    }
    friend MPoly operator-(const MPoly& a, const MPoly& b) {
        a.check(b);
        MPoly r = a;
        for (const auto& [m, c] : b.terms_) r.add_term(m, -c);
        return r;
    }
    MPoly operator-() const {
        MPoly r(ring_);
        for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
        return r;
    }
    friend MPoly operator*(const MPoly& a, const MPoly& b) {
        a.check(b);
        MPoly r(a.ring_);
        for (const auto& [ma, ca] : a.terms_) {
            for (const auto& [mb, cb] : b.terms_) {
                Mono m(ma);
                for (std::size_t i = 0; i < m.size(); ++i) m[i] += mb[i];
                r.add_term(m, ca * cb);
            }
        }
        return r;
    }
    friend MPoly operator*(const MPoly& a, const NFElem& c) {
        MPoly r(a.ring_);
        if (c.is_zero()) return r;
        for (const auto& [m, x] : a.terms_) r.add_term(m, x * c);
        return r;
    }
    friend MPoly operator*(const MPoly& a, const Rat& q) {
        return a * NFElem::from_rat(a.ring_->field, q);
    }

    MPoly pow(uint32_t n) const {
        MPoly r = constant(ring_, Rat(1));
        MPoly base = *this;
        while (n) {
            if (n & 1) r = r * base;
            base = base * base;
            n >>= 1;
        }
        return r;
    }

    friend bool operator==(const MPoly& a, const MPoly& b) {
        a.check(b);
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const MPoly& a, const MPoly& b) { return !(a == b); }
    friend bool operator<(const MPoly& a, const MPoly& b) {
        return std::lexicographical_compare(
            a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
            [](const auto& x, const auto& y) {
                GradedLexLess lt;
                if (lt(x.first, y.first)) return true;
                if (lt(y.first, x.first)) return false;
                return x.second < y.second;
            });
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::ostringstream os;
        bool first = true;
        // print highest term first
        for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
            std::string cs = it->second.str();
            bool neg = !cs.empty() && cs[0] == '-' && cs.find('+', 1) == std::string::npos &&
                       cs.find('-', 1) == std::string::npos;
            if (!first) os << (neg ? " - " : " + ");
            else if (neg) os << "-";
            if (neg) cs = cs.substr(1);
            bool carrier = false;
            std::ostringstream mono;
            for (std::size_t v = 0; v < it->first.size(); ++v) {
                if (it->first[v] == 0) continue;
                if (carrier) mono << "*";
                mono << ring_->vars[v];
                if (it->first[v] > 1) mono << "^" << it->first[v];
                carrier = true;
            }
            bool unit_coeff = (cs == "1") && carrier;
            bool needs_paren = cs.find('+') != std::string::npos ||
                               cs.find('-', 1) != std::string::npos;
            if (!unit_coeff) {
                if (needs_paren && carrier) os << "(" << cs << ")";
                else os << cs;
                if (carrier) os << "*";
            }
            os << mono.str();
            first = false;
        }
        return os.str();
    }

  private:
    void check(const MPoly& b) const {
        if (ring_.get() != b.ring_.get())
            throw std::invalid_argument("mpoly: mixed-ring arithmetic");
    }
    std::shared_ptr<const PolyRing> ring_;
    TermMap terms_;
};

inline bool is_zero(const MPoly& p) { return p.is_zero(); }

// ---- exact division ------------------------------------------------------

inline std::optional<MPoly> try_divexact(const MPoly& a, const MPoly& b) {
    if (b.is_zero()) return std::nullopt;
    MPoly r = a, q(a.ring());
    while (!r.is_zero()) {
        const Mono& lm = r.leading_mono();
        const Mono& lb = b.leading_mono();
        Mono diff(lm.size());
        for (std::size_t i = 0; i < lm.size(); ++i) {
            if (lm[i] < lb[i]) return std::nullopt;
            diff[i] = lm[i] - lb[i];
        }
        NFElem c = r.leading_coeff() * b.leading_coeff().inverse();
        MPoly t(a.ring());
        t.add_term(diff, c);
        q = q + t;
        r = r - t * b;
    }
    return q;
}

inline MPoly divexact(const MPoly& a, const MPoly& b) {
    auto q = try_divexact(a, b);
    if (!q) throw std::domain_error("mpoly: inexact division");
    return *q;
}

// Unit normalization: scale so the graded-lex leading coefficient is 1.
inline MPoly make_monic(const MPoly& p) {
    if (p.is_zero()) return p;
    return p * p.leading_coeff().inverse();
}

// ---- gcd (primitive PRS) -------------------------------------------------

namespace detail {

// coefficients of p viewed as a univariate polynomial in variable v
inline std::map<uint32_t, MPoly> split_in(const MPoly& p, int v) {
    std::map<uint32_t, MPoly> out;
    for (const auto& [m, c] : p.terms()) {
        Mono rest = m;
        uint32_t e = rest[v];
        rest[v] = 0;
        auto it = out.find(e);
        if (it == out.end()) it = out.emplace(e, MPoly(p.ring())).first;
        it->second.add_term(rest, c);
    }
    return out;
}

inline MPoly join_in(const std::shared_ptr<const PolyRing>& ring,
                     const std::map<uint32_t, MPoly>& coeffs, int v) {
    MPoly p(ring);
    for (const auto& [e, c] : coeffs) {
        for (const auto& [m, x] : c.terms()) {
            Mono mm = m;
            mm[v] += e;
            p.add_term(mm, x);
        }
    }
    return p;
}

inline MPoly lead_coeff_in(const MPoly& p, int v) {
    uint32_t d = p.degree_in(v);
    MPoly out(p.ring());
    for (const auto& [m, c] : p.terms()) {
        if (m[v] != d) continue;
        Mono rest = m;
        rest[v] = 0;
        out.add_term(rest, c);
    }
    return out;
}

inline MPoly shift_var(const MPoly& p, int v, uint32_t e) {
    MPoly out(p.ring());
    for (const auto& [m, c] : p.terms()) {
        Mono mm = m;
        mm[v] += e;
        out.add_term(mm, c);
    }
    return out;
}

// pseudo-remainder of a by b in variable v (up to content, which the
// primitive PRS strips anyway)
inline MPoly prem(MPoly a, const MPoly& b, int v) {
    const uint32_t db = b.degree_in(v);
    MPoly lb = lead_coeff_in(b, v);
    while (!a.is_zero() && a.degree_in(v) >= db) {
        uint32_t da = a.degree_in(v);
        MPoly la = lead_coeff_in(a, v);
        a = a * lb - shift_var(la, v, da - db) * b;
    }
    return a;
}

}  // namespace detail

MPoly mpoly_gcd(const MPoly& a, const MPoly& b);

namespace detail {

inline MPoly content_in(const MPoly& p, int v) {
    auto coeffs = split_in(p, v);
    MPoly g(p.ring());
    for (const auto& [e, c] : coeffs) {
        g = mpoly_gcd(g, c);
        if (g.is_constant() && !g.is_zero()) break;
    }
    return g;
}

}  // namespace detail

// gcd normalized to have graded-lex leading coefficient 1
inline MPoly mpoly_gcd(const MPoly& a, const MPoly& b) {
    if (a.is_zero()) return make_monic(b);
    if (b.is_zero()) return make_monic(a);
    if (a.is_constant() || b.is_constant())
        return MPoly::constant(a.ring(), Rat(1));
    // main variable: highest declared index occurring in either
    int v = -1;
    for (int i = a.ring()->nvars() - 1; i >= 0; --i) {
        if (a.degree_in(i) > 0 || b.degree_in(i) > 0) { v = i; break; }
    }
    if (a.degree_in(v) == 0) return mpoly_gcd(a, detail::content_in(b, v));
    if (b.degree_in(v) == 0) return mpoly_gcd(detail::content_in(a, v), b);

    MPoly ca = detail::content_in(a, v), cb = detail::content_in(b, v);
    MPoly pa = divexact(a, ca), pb = divexact(b, cb);
    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    MPoly g(a.ring());
    while (true) {
        MPoly r = detail::prem(pa, pb, v);
        if (r.is_zero()) { g = pb; break; }
        if (r.degree_in(v) == 0) { g = MPoly::constant(a.ring(), Rat(1)); break; }
        r = divexact(r, detail::content_in(r, v));
        pa = pb;
        pb = r;
    }
    return make_monic(mpoly_gcd(ca, cb) * g);
}

}  // namespace ncg
