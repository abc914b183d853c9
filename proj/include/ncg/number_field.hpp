// Algebraic number fields Q(g) presented by a monic minimal polynomial, and
// their elements.  Degree-1 fields are plain Q.  Elements are coefficient
// vectors in the power basis 1, g, ..., g^(deg-1); arithmetic reduces modulo
// the minimal polynomial and inversion runs the extended Euclidean algorithm
// in Q[x].
#pragma once

#include "ncg/rational.hpp"

#include <cassert>
#include <memory>
#include <sstream>
#include <vector>

namespace ncg {

namespace detail {

// Dense univariate polynomials over Q, lowest degree first, no trailing zeros.
using UPoly = std::vector<Rat>;

inline void upoly_trim(UPoly& p) {
    while (!p.empty() && is_zero(p.back())) p.pop_back();
}

inline UPoly upoly_add(const UPoly& a, const UPoly& b) {
    UPoly r(std::max(a.size(), b.size()), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    upoly_trim(r);
    return r;
}

inline UPoly upoly_scale(const UPoly& a, const Rat& c) {
    if (is_zero(c)) return {};
    UPoly r = a;
    for (auto& x : r) x *= c;
    return r;
}

inline UPoly upoly_mul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    upoly_trim(r);
    return r;
}

// Division with remainder; divisor must be nonzero.
inline void upoly_divmod(UPoly a, const UPoly& b, UPoly& quo, UPoly& rem) {
    assert(!b.empty());
    quo.assign(a.size() > b.size() ? a.size() - b.size() + 1 : 1, Rat(0));
    const Rat lead = b.back();
    while (a.size() >= b.size() && !a.empty()) {
        Rat c = a.back() / lead;
        std::size_t shift = a.size() - b.size();
        quo[shift] = c;
        for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        upoly_trim(a);
        if (a.size() < b.size()) break;
    }
    upoly_trim(quo);
    rem = a;
}

}  // namespace detail

struct NumberField {
    std::string gen;               // generator name, e.g. "omega"
    detail::UPoly minpoly;         // monic, degree >= 1, lowest degree first

    int degree() const { return static_cast<int>(minpoly.size()) - 1; }

    // Reduction rows for g^d .. g^(2d-2): row k = coefficients of g^(d+k).
    std::vector<std::vector<Rat>> pow_red;

    static std::shared_ptr<const NumberField> make(std::string gen_name,
                                                   detail::UPoly monic_minpoly) {
        auto f = std::make_shared<NumberField>();
        f->gen = std::move(gen_name);
        f->minpoly = std::move(monic_minpoly);
        if (f->minpoly.size() < 2)
            throw std::invalid_argument("number field: minimal polynomial must have degree >= 1");
        if (!is_one(f->minpoly.back()))
            throw std::invalid_argument("number field: minimal polynomial must be monic");
        const int d = f->degree();
        // g^d = -(lower coefficients); then multiply by g repeatedly.
        std::vector<Rat> cur(d, Rat(0));
        for (int i = 0; i < d; ++i) cur[i] = -f->minpoly[i];
        for (int k = 0; k + 1 < d || k == 0; ++k) {
            if (k > 0) {
                std::vector<Rat> nxt(d, Rat(0));
                // multiply cur by g: shift up, reduce the overflow term.
                Rat top = cur[d - 1];
                for (int i = d - 1; i > 0; --i) nxt[i] = cur[i - 1];
                nxt[0] = 0;
                for (int i = 0; i < d; ++i) nxt[i] += top * f->pow_red[0][i];
                cur = nxt;
            }
            f->pow_red.push_back(cur);
            if (d == 1) break;
        }
        return f;
    }

    // The rationals as a degree-1 field (generator is 0).
    static const std::shared_ptr<const NumberField>& rationals() {
        static const std::shared_ptr<const NumberField> q =
            make("", detail::UPoly{Rat(0), Rat(1)});
        return q;
    }
};

class NFElem {
  public:
    NFElem() = default;
    NFElem(std::shared_ptr<const NumberField> f, std::vector<Rat> coeffs)
        : field_(std::move(f)), c_(std::move(coeffs)) {
        assert(static_cast<int>(c_.size()) == field_->degree());
    }

    static NFElem from_rat(const std::shared_ptr<const NumberField>& f, const Rat& q) {
        std::vector<Rat> c(f->degree(), Rat(0));
        c[0] = q;
        return NFElem(f, std::move(c));
    }
    static NFElem zero(const std::shared_ptr<const NumberField>& f) {
        return from_rat(f, Rat(0));
    }
    static NFElem one(const std::shared_ptr<const NumberField>& f) {
        return from_rat(f, Rat(1));
    }
    static NFElem gen(const std::shared_ptr<const NumberField>& f) {
        std::vector<Rat> c(f->degree(), Rat(0));
        if (f->degree() == 1) {
            // generator of a degree-1 field is its rational root
            c[0] = -f->minpoly[0];
        } else {
            c[1] = 1;
        }
        return NFElem(f, std::move(c));
    }

    const std::shared_ptr<const NumberField>& field() const { return field_; }
    const std::vector<Rat>& coeffs() const { return c_; }

    bool is_zero() const {
        for (const auto& x : c_)
            if (!ncg::is_zero(x)) return false;
        return true;
    }
    bool is_rational() const {
        for (std::size_t i = 1; i < c_.size(); ++i)
            if (!ncg::is_zero(c_[i])) return false;
        return true;
    }
    const Rat& rat_value() const {
        assert(is_rational());
        return c_[0];
    }

    friend NFElem operator+(const NFElem& a, const NFElem& b) {
        a.check(b);
        std::vector<Rat> c(a.c_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] += b.c_[i];
        return NFElem(a.field_, std::move(c));
    }
    friend NFElem operator-(const NFElem& a, const NFElem& b) {
        a.check(b);
        std::vector<Rat> c(a.c_);
        for (std::size_t i = 0; i < c.size(); ++i) c[i] -= b.c_[i];
        return NFElem(a.field_, std::move(c));
    }
    NFElem operator-() const {
        std::vector<Rat> c(c_);
        for (auto& x : c) x = -x;
        return NFElem(field_, std::move(c));
    }
    friend NFElem operator*(const NFElem& a, const NFElem& b) {
        a.check(b);
        const int d = a.field_->degree();
        std::vector<Rat> prod(2 * d - 1, Rat(0));
        for (int i = 0; i < d; ++i) {
            if (ncg::is_zero(a.c_[i])) continue;
            for (int j = 0; j < d; ++j) prod[i + j] += a.c_[i] * b.c_[j];
        }
        std::vector<Rat> c(prod.begin(), prod.begin() + d);
        for (int k = d; k < 2 * d - 1; ++k) {
            if (ncg::is_zero(prod[k])) continue;
            const auto& row = a.field_->pow_red[k - d];
            for (int i = 0; i < d; ++i) c[i] += prod[k] * row[i];
        }
        return NFElem(a.field_, std::move(c));
    }
    friend NFElem operator*(const NFElem& a, const Rat& q) {
        std::vector<Rat> c(a.c_);
        for (auto& x : c) x *= q;
        return NFElem(a.field_, std::move(c));
    }
    friend NFElem operator*(const Rat& q, const NFElem& a) { return a * q; }

    NFElem inverse() const {
        if (is_zero()) throw std::domain_error("number field: inverse of zero");
        // Extended Euclid in Q[x]: s*this + t*minpoly = gcd = const.
        detail::UPoly r0 = field_->minpoly, r1(c_.begin(), c_.end());
        detail::upoly_trim(r1);
        detail::UPoly s0 = {}, s1 = {Rat(1)};  // coefficients of `this`
        while (true) {
            detail::UPoly q, r;
            detail::upoly_divmod(r0, r1, q, r);
            if (r.empty()) break;
            detail::UPoly s2 = detail::upoly_add(s0, detail::upoly_scale(detail::upoly_mul(q, s1), Rat(-1)));
            r0 = r1; r1 = r; s0 = s1; s1 = s2;
        }
        // r1 is a nonzero constant times the gcd; minpoly irreducible => deg 0.
        if (r1.size() != 1)
            throw std::domain_error("number field: minimal polynomial is not irreducible over Q");
        NFElem inv(field_, [&] {
            std::vector<Rat> c(field_->degree(), Rat(0));
            for (std::size_t i = 0; i < s1.size() && i < c.size(); ++i) c[i] = s1[i] / r1[0];
            return c;
        }());
        return inv;
    }

    friend bool operator==(const NFElem& a, const NFElem& b) {
        a.check(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const NFElem& a, const NFElem& b) { return !(a == b); }

    // Total order used only for canonical sorting of terms.
    friend bool operator<(const NFElem& a, const NFElem& b) {
        a.check(b);
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            int cmp = cmp_rat(a.c_[i], b.c_[i]);
            if (cmp != 0) return cmp < 0;
        }
        return false;
    }

    std::string str() const {
        if (is_rational()) return to_string(c_[0]);
        std::ostringstream os;
        bool first = true;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (ncg::is_zero(c_[i])) continue;
            if (!first) os << (sgn(c_[i]) >= 0 ? "+" : "");
            os << to_string(c_[i]);
            if (i >= 1) os << "*" << field_->gen;
            if (i >= 2) os << "^" << i;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

  private:
    static int cmp_rat(const Rat& a, const Rat& b) { return cmp(a, b); }
    void check(const NFElem& b) const {
        if (field_.get() != b.field_.get())
            throw std::invalid_argument("number field: mixed-field arithmetic");
    }
    std::shared_ptr<const NumberField> field_;
    std::vector<Rat> c_;
};

inline bool is_zero(const NFElem& x) { return x.is_zero(); }
inline NFElem inv(const NFElem& x) { return x.inverse(); }
inline NFElem zero_like(const NFElem& x) { return NFElem::zero(x.field()); }
inline NFElem one_like(const NFElem& x) { return NFElem::one(x.field()); }

}  // namespace ncg
