// Rational functions: gcd-reduced fractions of multivariate polynomials with
// the denominator normalized to leading coefficient 1.  Also provides field
// embeddings and substitution of rational functions for variables, which back
// parametric families and probe evaluation.
#pragma once

#include "ncg/poly.hpp"

#include <optional>

namespace ncg {

class RatFunc {
  public:
    RatFunc() = default;
    explicit RatFunc(MPoly num)
        : num_(std::move(num)), den_(MPoly::constant(num_.ring(), Rat(1))) {}
    RatFunc(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
        normalize();
    }

    static RatFunc zero(const std::shared_ptr<const PolyRing>& r) {
        return RatFunc(MPoly::zero(r));
    }
    static RatFunc one(const std::shared_ptr<const PolyRing>& r) {
        return RatFunc(MPoly::constant(r, Rat(1)));
    }
    static RatFunc constant(const std::shared_ptr<const PolyRing>& r, const Rat& q) {
        return RatFunc(MPoly::constant(r, q));
    }
    static RatFunc constant(const std::shared_ptr<const PolyRing>& r, const NFElem& c) {
        return RatFunc(MPoly::constant(r, c));
    }
    static RatFunc var(const std::shared_ptr<const PolyRing>& r, const std::string& name) {
        return RatFunc(MPoly::var(r, name));
    }
    static RatFunc from_poly(MPoly p) { return RatFunc(std::move(p)); }

    const MPoly& num() const { return num_; }
    const MPoly& den() const { return den_; }
    const std::shared_ptr<const PolyRing>& ring() const { return num_.ring(); }

    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return den_one() && num_.is_constant() &&
                                 num_.constant_value() == NFElem::one(ring()->field); }
    bool is_poly() const { return den_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    NFElem constant_value() const {
        return num_.constant_value() * den_.constant_value().inverse();
    }

    friend RatFunc operator+(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.den_one() && b.den_one()) return RatFunc(a.num_ + b.num_);
        return RatFunc(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatFunc operator-(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) return a;
        if (a.den_one() && b.den_one()) return RatFunc(a.num_ - b.num_);
        return RatFunc(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    RatFunc operator-() const {
        RatFunc r = *this;
        r.num_ = -r.num_;
        return r;
    }
    friend RatFunc operator*(const RatFunc& a, const RatFunc& b) {
        if (a.is_zero() || b.is_zero()) return zero(a.ring());
        if (a.den_one() && b.den_one()) return RatFunc(a.num_ * b.num_);
        return RatFunc(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatFunc operator*(const RatFunc& a, const Rat& q) {
        if (ncg::is_zero(q)) return zero(a.ring());
        RatFunc r = a;
        r.num_ = r.num_ * q;
        return r;
    }
    friend RatFunc operator/(const RatFunc& a, const RatFunc& b) {
        if (b.is_zero()) throw std::domain_error("ratfunc: division by zero");
        if (a.is_zero()) return a;
        return RatFunc(a.num_ * b.den_, a.den_ * b.num_);
    }
    RatFunc inverse() const {
        if (is_zero()) throw std::domain_error("ratfunc: inverse of zero");
        return RatFunc(den_, num_);
    }

    friend bool operator==(const RatFunc& a, const RatFunc& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatFunc& a, const RatFunc& b) { return !(a == b); }

    std::string str() const {
        if (den_one()) return num_.str();
        std::string n = num_.str(), d = den_.str();
        bool np = num_.terms().size() > 1, dp = den_.terms().size() > 1;
        return (np ? "(" + n + ")" : n) + "/" + (dp ? "(" + d + ")" : d);
    }

  private:
    bool den_one() const {
        return den_.is_constant() && den_.constant_value() == NFElem::one(ring()->field);
    }
    void normalize() {
        if (den_.is_zero()) throw std::domain_error("ratfunc: zero denominator");
        if (num_.is_zero()) {
            den_ = MPoly::constant(num_.ring(), Rat(1));
            return;
        }
        if (!den_.is_constant()) {
            MPoly g = mpoly_gcd(num_, den_);
            if (!g.is_constant()) {
                num_ = divexact(num_, g);
                den_ = divexact(den_, g);
            }
        }
        NFElem lc = den_.leading_coeff();
        if (!(lc == NFElem::one(ring()->field))) {
            NFElem ilc = lc.inverse();
            num_ = num_ * ilc;
            den_ = den_ * ilc;
        }
    }

    MPoly num_, den_;
};

inline bool is_zero(const RatFunc& f) { return f.is_zero(); }
inline RatFunc inv(const RatFunc& f) { return f.inverse(); }
inline RatFunc zero_like(const RatFunc& f) { return RatFunc::zero(f.ring()); }
inline RatFunc one_like(const RatFunc& f) { return RatFunc::one(f.ring()); }

// ---- field embeddings and substitution ------------------------------------

// Maps elements of one number field into another by sending the generator to
// a chosen image; verified to satisfy the source minimal polynomial.
struct FieldEmbed {
    std::shared_ptr<const NumberField> src, dst;
    NFElem gen_image;

    static FieldEmbed identity(const std::shared_ptr<const NumberField>& f) {
        return FieldEmbed{f, f, NFElem::gen(f)};
    }

    bool verify() const {
        NFElem acc = NFElem::zero(dst);
        NFElem p = NFElem::one(dst);
        for (const auto& c : src->minpoly) {
            acc = acc + p * c;
            p = p * gen_image;
        }
        return acc.is_zero();
    }

    NFElem apply(const NFElem& x) const {
        if (src.get() == dst.get()) return x;
        NFElem acc = NFElem::zero(dst);
        NFElem p = NFElem::one(dst);
        for (const auto& c : x.coeffs()) {
            acc = acc + p * c;
            p = p * gen_image;
        }
        return acc;
    }
};

// var_images[i] is the image of source variable i in the target ring.
struct Substitution {
    std::shared_ptr<const PolyRing> target;
    FieldEmbed embed;
    std::vector<RatFunc> var_images;

    static Substitution identity_on(const std::shared_ptr<const PolyRing>& r) {
        Substitution s;
        s.target = r;
        s.embed = FieldEmbed::identity(r->field);
        for (int i = 0; i < r->nvars(); ++i)
            s.var_images.push_back(RatFunc::var(r, r->vars[i]));
        return s;
    }

    RatFunc apply_poly(const MPoly& p) const {
        RatFunc acc = RatFunc::zero(target);
        for (const auto& [m, c] : p.terms()) {
            RatFunc term = RatFunc::constant(target, embed.apply(c));
            for (std::size_t v = 0; v < m.size(); ++v) {
                for (uint32_t k = 0; k < m[v]; ++k) term = term * var_images[v];
            }
            acc = acc + term;
        }
        return acc;
    }

    // nullopt if the denominator vanishes under the substitution
    std::optional<RatFunc> apply(const RatFunc& f) const {
        RatFunc n = apply_poly(f.num());
        RatFunc d = apply_poly(f.den());
        if (d.is_zero()) return std::nullopt;
        return n / d;
    }
};

}  // namespace ncg
