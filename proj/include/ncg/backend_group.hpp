// Coefficient backend for a finite-group exterior calculus.  Algebra elements
// are functions on the group with rational-function values (so connection
// parameters stay symbolic), the grade of a basis form is the product of its
// letters, and moving an algebra element across a basis element twists it by
// right translation.
#pragma once

#include "ncg/group_calculus.hpp"
#include "ncg/ratfunc.hpp"

namespace ncg {

class GroupBackend {
  public:
    using Alg = std::vector<RatFunc>;  // one value per group point
    using Combo = std::vector<std::pair<Alg, int>>;

    GroupBackend(std::shared_ptr<const ExteriorAlgebra> cal,
                 std::shared_ptr<const PolyRing> ring)
        : cal_(std::move(cal)), ring_(std::move(ring)) {}

    const ExteriorAlgebra& cal() const { return *cal_; }
    const FiniteGroup& group() const { return *cal_->G; }
    const std::shared_ptr<const PolyRing>& ring() const { return ring_; }

    int top() const { return cal_->top; }
    int dim_form(int n) const { return cal_->dim(n); }

    // ---- algebra -----------------------------------------------------------
    Alg zero_alg() const { return Alg(group().n, RatFunc::zero(ring_)); }
    Alg one_alg() const { return Alg(group().n, RatFunc::one(ring_)); }
    Alg const_alg(const RatFunc& v) const { return Alg(group().n, v); }
    Alg const_alg(const Rat& q) const { return const_alg(RatFunc::constant(ring_, q)); }
    Alg delta(int point, const RatFunc& v) const {
        Alg a = zero_alg();
        a[point] = v;
        return a;
    }
    bool is_zero_alg(const Alg& a) const {
        for (const auto& x : a)
            if (!x.is_zero()) return false;
        return true;
    }
    Alg add(const Alg& a, const Alg& b) const {
        Alg out = a;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] + b[i];
        return out;
    }
    Alg sub(const Alg& a, const Alg& b) const {
        Alg out = a;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] - b[i];
        return out;
    }
    Alg neg(const Alg& a) const {
        Alg out = a;
        for (auto& x : out) x = -x;
        return out;
    }
    Alg mul(const Alg& a, const Alg& b) const {
        Alg out = a;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] * b[i];
        return out;
    }
    Alg scale(const Alg& a, const RatFunc& s) const {
        Alg out = a;
        for (auto& x : out) x = x * s;
        return out;
    }

    // ---- grades -------------------------------------------------------------
    int grade_id() const { return group().identity; }
    int grade_mul(int g, int h) const { return group().mul(g, h); }
    int form_grade(int n, int i) const { return cal_->grade[n][i]; }
    Alg apply_grade(int g, const Alg& a) const {
        if (g == group().identity) return a;
        Alg out = a;
        for (int x = 0; x < group().n; ++x) out[x] = a[group().mul(x, g)];
        return out;
    }

    // ---- exterior structure ---------------------------------------------------
    const Combo& wedge_basis(int n, int i, int m, int j) const {
        auto key = std::array<int, 4>{n, i, m, j};
        auto it = wedge_cache_.find(key);
        if (it != wedge_cache_.end()) return it->second;
        Combo combo;
        if (n == 0) {
            combo.emplace_back(one_alg(), j);
        } else if (m == 0) {
            combo.emplace_back(one_alg(), i);
        } else {
            for (const auto& [q, k] : cal_->wedge_words(n, i, m, j))
                combo.emplace_back(const_alg(q), k);
        }
        return wedge_cache_.emplace(key, std::move(combo)).first->second;
    }
    const Combo& d_basis(int n, int i) const {
        auto key = std::pair<int, int>{n, i};
        auto it = d_cache_.find(key);
        if (it != d_cache_.end()) return it->second;
        Combo combo;
        if (n > 0)
            for (const auto& [q, k] : cal_->d_word[n][i]) combo.emplace_back(const_alg(q), k);
        return d_cache_.emplace(key, std::move(combo)).first->second;
    }
    std::vector<Alg> d_alg(const Alg& a) const {
        std::vector<Alg> out;
        out.reserve(cal_->num_gens());
        for (int l = 0; l < cal_->num_gens(); ++l)
            out.push_back(sub(apply_grade(cal_->gens[l], a), a));
        return out;
    }
    std::vector<int> form_word(int n, int i) const {
        std::vector<int> w;
        for (uint8_t l : cal_->words[n][i]) w.push_back(l);
        return w;
    }

    // ---- probing / equations ----------------------------------------------------
    std::vector<Alg> probes() const {
        std::vector<Alg> out;
        for (int x = 0; x < group().n; ++x) out.push_back(delta(x, RatFunc::one(ring_)));
        return out;
    }
    // Each basis one-form written as a sum of f dg terms: xi_a = sum_x delta_x d(delta_{x a}).
    std::vector<std::vector<std::pair<Alg, Alg>>> one_form_presentations() const {
        std::vector<std::vector<std::pair<Alg, Alg>>> pres(cal_->num_gens());
        auto one = RatFunc::one(ring_);
        for (int a = 0; a < cal_->num_gens(); ++a)
            for (int x = 0; x < group().n; ++x)
                pres[a].emplace_back(delta(x, one), delta(group().mul(x, cal_->gens[a]), one));
        return pres;
    }
    // The delta probes span the whole algebra, so no extra generators are needed
    // to certify right-module consistency.
    std::vector<Alg> algebra_generators() const { return {}; }
    std::vector<RatFunc> atoms(const Alg& a) const { return a; }

    // A coefficient is "constant" exactly when it agrees at every group point.
    std::optional<RatFunc> alg_to_const(const Alg& a) const {
        for (std::size_t x = 1; x < a.size(); ++x)
            if (!(a[x] == a[0])) return std::nullopt;
        return a[0];
    }

  private:
    std::shared_ptr<const ExteriorAlgebra> cal_;
    std::shared_ptr<const PolyRing> ring_;
    mutable std::map<std::array<int, 4>, Combo> wedge_cache_;
    mutable std::map<std::pair<int, int>, Combo> d_cache_;
};

}  // namespace ncg
