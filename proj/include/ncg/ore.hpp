// The coordinate algebra with relation [r, t] = lambda * r, with r invertible,
// together with its three-dimensional exterior algebra: the central one-form
// basis {dr, v} where v = r dt - t dr, the central volume form Vol = v ^ dr,
// and nothing above degree two.  Elements are kept in the normal order
// r^m t^n with m any integer and n a natural number; coefficients are
// rational functions in the deformation parameter and any declared module
// parameters.
#pragma once

#include "ncg/ratfunc.hpp"

#include <map>

namespace ncg {

struct OreRing {
    std::shared_ptr<const PolyRing> ring;
    RatFunc lambda;

    static std::shared_ptr<const OreRing> make(std::shared_ptr<const PolyRing> ring,
                                               const std::string& lambda_var) {
        return make(ring, RatFunc::var(ring, lambda_var));
    }

    // deformation parameter given directly, e.g. as a nonzero constant
    static std::shared_ptr<const OreRing> make(std::shared_ptr<const PolyRing> ring,
                                               const RatFunc& lambda) {
        auto R = std::make_shared<OreRing>();
        R->lambda = lambda;
        R->ring = std::move(ring);
        return R;
    }
};

class OreElement {
  public:
    using Key = std::pair<long long, long long>;  // (power of r, power of t)

    OreElement() = default;
    explicit OreElement(std::shared_ptr<const OreRing> R) : R_(std::move(R)) {}

    static OreElement zero(std::shared_ptr<const OreRing> R) { return OreElement(std::move(R)); }
    static OreElement monomial(std::shared_ptr<const OreRing> R, long long m, long long n,
                               const RatFunc& c) {
        OreElement x(std::move(R));
        x.add_term(m, n, c);
        return x;
    }
    static OreElement from_coeff(std::shared_ptr<const OreRing> R, const RatFunc& c) {
        return monomial(std::move(R), 0, 0, c);
    }
    static OreElement one(std::shared_ptr<const OreRing> R) {
        RatFunc c = RatFunc::one(R->ring);
        return monomial(std::move(R), 0, 0, c);
    }
    static OreElement r_pow(std::shared_ptr<const OreRing> R, long long m) {
        RatFunc c = RatFunc::one(R->ring);
        return monomial(std::move(R), m, 0, c);
    }
    static OreElement t_pow(std::shared_ptr<const OreRing> R, long long n) {
        RatFunc c = RatFunc::one(R->ring);
        return monomial(std::move(R), 0, n, c);
    }

    const std::shared_ptr<const OreRing>& ore_ring() const { return R_; }
    const std::map<Key, RatFunc>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(long long m, long long n, const RatFunc& c) {
        if (n < 0) throw std::invalid_argument("OreElement: negative power of t");
        if (c.is_zero()) return;
        Key k{m, n};
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) terms_.erase(it);
        }
    }

    friend OreElement operator+(const OreElement& a, const OreElement& b) {
        OreElement out = a;
        for (const auto& [k, c] : b.terms_) out.add_term(k.first, k.second, c);
        return out;
    }
    friend OreElement operator-(const OreElement& a, const OreElement& b) {
        OreElement out = a;
        for (const auto& [k, c] : b.terms_) out.add_term(k.first, k.second, -c);
        return out;
    }
    OreElement operator-() const {
        OreElement out(R_);
        for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
        return out;
    }

    // normal-ordered product: t^n r^p = r^p (t - p lambda)^n
    friend OreElement operator*(const OreElement& a, const OreElement& b) {
        OreElement out(a.R_ ? a.R_ : b.R_);
        if (!out.R_) return out;
        const RatFunc& lam = out.R_->lambda;
        for (const auto& [ka, ca] : a.terms_) {
            for (const auto& [kb, cb] : b.terms_) {
                const long long m = ka.first, n = ka.second;
                const long long p = kb.first, q = kb.second;
                RatFunc c = ca * cb;
                if (p == 0 || n == 0) {
                    out.add_term(m + p, n + q, c);
                    continue;
                }
                // expand (t - p lambda)^n binomially
                RatFunc shift = lam * rat(-p);
                std::vector<RatFunc> shift_pows(n + 1, RatFunc::one(out.R_->ring));
                for (long long j = 1; j <= n; ++j) shift_pows[j] = shift_pows[j - 1] * shift;
                Rat ch(1);
                for (long long j = 0; j <= n; ++j) {
                    // coefficient of t^j: C(n, j) shift^{n-j}
                    out.add_term(m + p, j + q, c * shift_pows[n - j] * ch);
                    ch = ch * rat(n - j) / rat(j + 1);
                }
            }
        }
        return out;
    }
    friend OreElement operator*(const OreElement& a, const RatFunc& s) {
        OreElement out(a.R_);
        for (const auto& [k, c] : a.terms_) out.add_term(k.first, k.second, c * s);
        return out;
    }
    friend OreElement operator*(const RatFunc& s, const OreElement& a) { return a * s; }

    friend bool operator==(const OreElement& a, const OreElement& b) {
        return (a - b).is_zero();
    }

    std::string str() const {
        if (terms_.empty()) return "0";
        std::string s;
        bool first = true;
        for (const auto& [k, c] : terms_) {
            if (!first) s += " + ";
            first = false;
            s += "(" + c.str() + ")";
            if (k.first != 0) s += "*r^" + std::to_string(k.first);
            if (k.second != 0) s += "*t^" + std::to_string(k.second);
        }
        return s;
    }

  private:
    std::shared_ptr<const OreRing> R_;
    std::map<Key, RatFunc> terms_;
};

inline bool is_zero(const OreElement& x) { return x.is_zero(); }
inline OreElement zero_like(const OreElement& x) { return OreElement::zero(x.ore_ring()); }
inline OreElement one_like(const OreElement& x) { return OreElement::one(x.ore_ring()); }

// exterior algebra dimensions: 1, 2 (basis dr, v), 1 (basis Vol), then zero
inline constexpr int ORE_BASIS_DR = 0;
inline constexpr int ORE_BASIS_V = 1;

inline int ore_dim_form(int n) {
    switch (n) {
        case 0: return 1;
        case 1: return 2;
        case 2: return 1;
        default: return 0;
    }
}

struct OreForm {
    std::shared_ptr<const OreRing> R;
    int deg = 0;
    std::vector<OreElement> c;  // one coefficient per basis form of this degree

    static OreForm zero(std::shared_ptr<const OreRing> R, int deg) {
        OreForm f;
        f.deg = deg;
        f.c.assign(ore_dim_form(deg), OreElement::zero(R));
        f.R = std::move(R);
        return f;
    }
    bool is_zero() const {
        for (const auto& x : c)
            if (!x.is_zero()) return false;
        return true;
    }
    friend OreForm operator+(const OreForm& a, const OreForm& b) {
        OreForm out = a;
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = out.c[i] + b.c[i];
        return out;
    }
    friend OreForm operator-(const OreForm& a, const OreForm& b) {
        OreForm out = a;
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = out.c[i] - b.c[i];
        return out;
    }
    OreForm operator-() const {
        OreForm out = *this;
        for (auto& x : out.c) x = -x;
        return out;
    }
    // algebra element acting from the left (the basis forms are central, so
    // right action is the same product taken on the other side)
    friend OreForm operator*(const OreElement& a, const OreForm& f) {
        OreForm out = f;
        for (auto& x : out.c) x = a * x;
        return out;
    }
    friend OreForm operator*(const OreForm& f, const OreElement& a) {
        OreForm out = f;
        for (auto& x : out.c) x = x * a;
        return out;
    }
};

// wedge structure on the central basis: dr^v = -Vol, v^dr = Vol, v^v = lambda Vol
inline OreForm wedge(const OreForm& A, const OreForm& B) {
    OreForm out = OreForm::zero(A.R, A.deg + B.deg);
    if (A.deg + B.deg > 2) return out;
    if (A.deg == 0) {
        for (std::size_t j = 0; j < B.c.size(); ++j) out.c[j] = A.c[0] * B.c[j];
        return out;
    }
    if (B.deg == 0) {
        for (std::size_t i = 0; i < A.c.size(); ++i) out.c[i] = A.c[i] * B.c[0];
        return out;
    }
    // both degree 1
    const RatFunc& lam = A.R->lambda;
    const OreElement &a = A.c[ORE_BASIS_DR], &b = A.c[ORE_BASIS_V];
    const OreElement &cc = B.c[ORE_BASIS_DR], &dd = B.c[ORE_BASIS_V];
    out.c[0] = -(a * dd) + b * cc + (b * dd) * lam;
    return out;
}

// differential of an algebra element:
//   d(r^m t^n) = m r^{m-1} t^n dr
//              + sum_{k=0}^{n-1} r^{m-1} (t+lambda)^k (t^{n-1-k} v + t^{n-k} dr)
inline OreForm ore_d(const OreElement& f) {
    const auto& R = f.ore_ring();
    OreForm out = OreForm::zero(R, 1);
    OreElement t_plus_lam =
        OreElement::t_pow(R, 1) + OreElement::from_coeff(R, R->lambda);
    for (const auto& [k, c] : f.terms()) {
        const long long m = k.first, n = k.second;
        if (m != 0)
            out.c[ORE_BASIS_DR] =
                out.c[ORE_BASIS_DR] + OreElement::monomial(R, m - 1, n, c * rat(m));
        OreElement tl_pow = OreElement::one(R);
        for (long long kk = 0; kk < n; ++kk) {
            OreElement common = OreElement::monomial(R, m - 1, 0, c) * tl_pow;
            out.c[ORE_BASIS_V] = out.c[ORE_BASIS_V] + common * OreElement::t_pow(R, n - 1 - kk);
            out.c[ORE_BASIS_DR] = out.c[ORE_BASIS_DR] + common * OreElement::t_pow(R, n - kk);
            tl_pow = tl_pow * t_plus_lam;
        }
    }
    return out;
}

// differential of a form; the only nonzero basis differential is
// d v = -2 r^{-1} Vol, and everything above degree two is zero
inline OreForm ore_d(const OreForm& F) {
    OreForm out = OreForm::zero(F.R, F.deg + 1);
    if (F.deg >= 2) return out;
    if (F.deg == 0) return ore_d(F.c[0]);
    // degree 1: d(f_dr dr + f_v v) = d(f_dr)^dr + d(f_v)^v - 2 f_v r^{-1} Vol
    OreForm dr_basis = OreForm::zero(F.R, 1);
    dr_basis.c[ORE_BASIS_DR] = OreElement::one(F.R);
    OreForm v_basis = OreForm::zero(F.R, 1);
    v_basis.c[ORE_BASIS_V] = OreElement::one(F.R);
    out = wedge(ore_d(F.c[ORE_BASIS_DR]), dr_basis) + wedge(ore_d(F.c[ORE_BASIS_V]), v_basis);
    out.c[0] = out.c[0] -
               F.c[ORE_BASIS_V] * OreElement::r_pow(F.R, -1) * RatFunc::constant(F.R->ring, rat(2));
    return out;
}

}  // namespace ncg
