// Sets of polynomial conditions on symbolic parameters.  Every condition is
// stored as a monic numerator polynomial (deduplicated, sorted), with any
// non-constant denominators that appeared along the way recorded separately
// as genericity assumptions.  Two sets are compared first by literal normal
// forms and then, if that fails, by sampling both zero sets on a seeded grid
// of rational points.
#pragma once

#include "ncg/ratfunc.hpp"

#include <optional>
#include <random>
#include <sstream>

namespace ncg {

inline NFElem eval_mpoly(const MPoly& p, const std::vector<Rat>& point) {
    NFElem acc = NFElem::zero(p.ring()->field);
    for (const auto& [mono, coeff] : p.terms()) {
        Rat m(1);
        for (std::size_t v = 0; v < mono.size(); ++v)
            for (uint32_t e = 0; e < mono[v]; ++e) m *= point[v];
        acc = acc + coeff * m;
    }
    return acc;
}

class EquationSet {
  public:
    explicit EquationSet(std::shared_ptr<const PolyRing> ring) : ring_(std::move(ring)) {}

    const std::shared_ptr<const PolyRing>& ring() const { return ring_; }
    const std::vector<MPoly>& eqs() const { return eqs_; }
    const std::vector<MPoly>& denominators() const { return denoms_; }
    bool empty() const { return eqs_.empty(); }
    std::size_t size() const { return eqs_.size(); }

    void add_poly(const MPoly& p) {
        if (p.is_zero()) return;
        insert_sorted(eqs_, make_monic(p));
    }
    void add(const RatFunc& r) {
        if (!r.den().is_constant()) insert_sorted(denoms_, make_monic(r.den()));
        add_poly(r.num());
    }
    void add_denominator(const MPoly& p) {
        if (!p.is_constant()) insert_sorted(denoms_, make_monic(p));
    }
    void merge(const EquationSet& other) {
        for (const auto& e : other.eqs_) insert_sorted(eqs_, e);
        for (const auto& d : other.denoms_) insert_sorted(denoms_, d);
    }

    // a constant nonzero equation means the conditions are unsatisfiable
    bool unsatisfiable() const {
        for (const auto& e : eqs_)
            if (e.is_constant()) return true;
        return false;
    }

    // all equations vanish under the substitution, every genericity
    // denominator staying nonzero; returns the offending polynomial otherwise
    std::optional<std::string> check_vanishes(const Substitution& sub) const {
        for (const auto& d : denoms_) {
            auto v = sub.apply(RatFunc::from_poly(d));
            if (!v || v->is_zero())
                return "genericity denominator vanishes: " + d.str();
        }
        for (const auto& e : eqs_) {
            auto v = sub.apply(RatFunc::from_poly(e));
            if (!v) return "substitution undefined on: " + e.str();
            if (!v->is_zero()) return "equation does not vanish: " + e.str();
        }
        return std::nullopt;
    }

    std::string str() const {
        std::ostringstream os;
        for (std::size_t i = 0; i < eqs_.size(); ++i) {
            if (i) os << "; ";
            os << eqs_[i].str() << " = 0";
        }
        if (!denoms_.empty()) {
            os << "  [generic: ";
            for (std::size_t i = 0; i < denoms_.size(); ++i) {
                if (i) os << ", ";
                os << denoms_[i].str() << " != 0";
            }
            os << "]";
        }
        return os.str();
    }

  private:
    static void insert_sorted(std::vector<MPoly>& v, const MPoly& p) {
        auto it = std::lower_bound(v.begin(), v.end(), p);
        if (it == v.end() || !(*it == p)) v.insert(it, p);
    }

    std::shared_ptr<const PolyRing> ring_;
    std::vector<MPoly> eqs_;
    std::vector<MPoly> denoms_;
};

struct EquivalenceReport {
    bool equivalent = false;
    std::string detail;
};

// Zero-set comparison: identical normal forms first; otherwise both sets are
// evaluated on a grid of small rational points — exhaustive over {-2..2} when
// the parameter count allows, seeded random small values otherwise — skipping
// points where a recorded denominator of either side vanishes.  The indicator
// "all equations vanish here" must agree at every probed point; the grid is
// small enough that the solution families, which contain small rational
// points, are actually hit.
inline EquivalenceReport equations_equivalent(const EquationSet& A, const EquationSet& B,
                                              unsigned seed = 20260819, int samples = 20000) {
    if (A.eqs() == B.eqs()) return {true, "identical normal forms"};

    const auto& ring = A.ring();
    const int nv = ring->nvars();

    auto all_zero = [](const EquationSet& S, const std::vector<Rat>& pt) {
        for (const auto& e : S.eqs())
            if (!is_zero(eval_mpoly(e, pt))) return false;
        return true;
    };
    auto denom_ok = [](const EquationSet& S, const std::vector<Rat>& pt) {
        for (const auto& d : S.denominators())
            if (is_zero(eval_mpoly(d, pt))) return false;
        return true;
    };

    int used = 0, agree_zero = 0;
    std::string mismatch;
    auto probe = [&](const std::vector<Rat>& pt) {
        if (!denom_ok(A, pt) || !denom_ok(B, pt)) return true;
        ++used;
        bool za = all_zero(A, pt), zb = all_zero(B, pt);
        if (za != zb) {
            std::ostringstream os;
            os << "zero sets differ at (";
            for (int v = 0; v < nv; ++v) {
                if (v) os << ", ";
                os << ring->vars[v] << "=" << pt[v].get_str();
            }
            os << "): " << (za ? "first" : "second") << " vanishes, the other does not";
            mismatch = os.str();
            return false;
        }
        if (za) ++agree_zero;
        return true;
    };

    bool exhaustive = true;
    long long total = 1;
    for (int v = 0; v < nv; ++v) {
        total *= 5;
        if (total > samples) {
            exhaustive = false;
            break;
        }
    }
    if (exhaustive) {
        std::vector<Rat> pt(nv, Rat(0));
        std::vector<int> ctr(nv, 0);
        bool done = nv == 0;
        while (!done) {
            for (int v = 0; v < nv; ++v) pt[v] = rat(ctr[v] - 2);
            if (!probe(pt)) return {false, mismatch};
            int v = 0;
            while (v < nv && ++ctr[v] == 5) ctr[v++] = 0;
            done = v == nv;
        }
    } else {
        std::mt19937 rng(seed);
        std::uniform_int_distribution<int> val(-2, 2);
        for (int s = 0; s < samples; ++s) {
            std::vector<Rat> pt;
            pt.reserve(nv);
            for (int v = 0; v < nv; ++v) pt.push_back(rat(val(rng)));
            if (!probe(pt)) return {false, mismatch};
        }
    }
    std::ostringstream os;
    os << "zero sets agree on " << used << " grid points (" << agree_zero
       << " common zeros)";
    return {true, os.str()};
}

}  // namespace ncg
