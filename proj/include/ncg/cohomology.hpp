// cohomology of a flat module connection and the braided cup product
//
// A degree-n cochain with values in a module E is a tensor with slots
// [form(n), module(E)]; the differential is the extended covariant
// derivative.  When the curvature vanishes these assemble into a complex
// whose per-degree dimensions are computed by exact linear algebra over the
// coefficient field of the group backend.  The cup product pairs cochains
// valued in E and F into one valued in E (x) F by braiding E past the
// second form factor with the extended sigma-hat.
#pragma once

#include "ncg/backend_group.hpp"
#include "ncg/connection.hpp"
#include "ncg/matrix.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace ncg {

// scalar coordinates of a cochain: one entry per (form word, module index,
// group point)
inline std::vector<RatFunc> cochain_coords(const GroupBackend& bk,
                                           const Tensor<GroupBackend>& t) {
    std::vector<RatFunc> out;
    for (const auto& cell : t.c)
        for (const auto& comp : cell) out.push_back(comp);
    return out;
}

// matrix of the extended covariant derivative on degree-n cochains, acting
// on coordinate columns
inline Mat<RatFunc> cochain_derivative_matrix(const GroupBackend& bk,
                                              const Connection<GroupBackend>& conn, int n) {
    const int np = bk.cal().G->n;
    const int cols = bk.dim_form(n) * conn.mod->rank * np;
    const int rows = bk.dim_form(n + 1) * conn.mod->rank * np;
    Mat<RatFunc> M(rows, cols, RatFunc::zero(bk.ring()));
    int j = 0;
    for (int w = 0; w < bk.dim_form(n); ++w)
        for (int m = 0; m < conn.mod->rank; ++m)
            for (int x = 0; x < np; ++x, ++j) {
                Tensor<GroupBackend> t =
                    Tensor<GroupBackend>::zero(bk, {Slot::form(n), Slot::module(conn.mod)});
                t.c[t.flatten({w, m})][x] = RatFunc::one(bk.ring());
                auto coords = cochain_coords(bk, covariant_derivative(t, conn));
                for (int i = 0; i < rows; ++i) M.at(i, j) = coords[i];
            }
    return M;
}

struct CohomologyResult {
    std::vector<int> dims;             // dim H^n for n = 0 .. top
    std::vector<int> cocycle_dims;     // dim ker of the degree-n derivative
    std::vector<int> coboundary_dims;  // dim im of the degree-(n-1) derivative
};

// per-degree cohomology of a flat connection, by kernel/image ranks over
// the coefficient field (generic ranks when the ring has parameters)
inline CohomologyResult flat_cohomology(const GroupBackend& bk,
                                        const Connection<GroupBackend>& conn) {
    if (!curvature(conn).is_zero())
        throw std::invalid_argument("flat cohomology needs a flat connection");
    const int np = bk.cal().G->n;
    const int top = bk.cal().top;
    CohomologyResult res;
    int prev_rank = 0;
    for (int n = 0; n <= top; ++n) {
        const int dom = bk.dim_form(n) * conn.mod->rank * np;
        const int rk = n < top ? rank(cochain_derivative_matrix(bk, conn, n)) : 0;
        res.cocycle_dims.push_back(dom - rk);
        res.coboundary_dims.push_back(prev_rank);
        res.dims.push_back(dom - rk - prev_rank);
        prev_rank = rk;
    }
    return res;
}

inline bool is_cocycle(const Connection<GroupBackend>& conn, const Tensor<GroupBackend>& t) {
    return covariant_derivative(t, conn).is_zero();
}

// whether t lies in the image of the derivative one degree down
inline bool is_coboundary(const GroupBackend& bk, const Connection<GroupBackend>& conn,
                          const Tensor<GroupBackend>& t) {
    const int n = t.slots[0].form_deg;
    if (n == 0) return t.is_zero();
    auto M = cochain_derivative_matrix(bk, conn, n - 1);
    return solve(M, cochain_coords(bk, t), RatFunc::zero(bk.ring())).has_value();
}

// cup product on cochains: alpha in Omega^m (x) E, beta in Omega^n (x) F
// map to (id ^ sigma-hat (x) id)(alpha (x) beta) in Omega^{m+n} (x) E (x) F.
// For cocycles of a flat extendable (E, sigma) and flat F this represents
// the product of the classes under the tensor connection.
template <class B>
Tensor<B> cup_product(const B& bk, const Tensor<B>& alpha, const SigmaMap<B>& sigE,
                      const Tensor<B>& beta, const std::shared_ptr<const Module>& modEF) {
    if (alpha.slots.size() != 2 || beta.slots.size() != 2)
        throw std::invalid_argument("cup product needs [form, module] cochains");
    const int n = beta.slots[0].form_deg;
    auto hat = sigma_hat_images(bk, sigE, n);
    auto braided = apply_at(tensor_prod(alpha, beta), 1, 2, hat);
    return flatten_mods(merge_forms(braided, 0), 1, modEF);
}

}  // namespace ncg
