// Finitely generated projective modules presented by a projector matrix,
// connections on them in matrix form, curvature, the dual right connection
// with its defining residuals, cycle traces of endomorphisms, and Chern-type
// invariants built from curvature powers.
//
// Conventions: the module is the space of row vectors x over the algebra with
// x P = x.  A degree-n element of Omega^n (x) E is a row of n-forms fixed by
// P on the right; a degree-n endomorphism is an N x N matrix Theta of n-forms
// with P Theta = Theta = Theta P, acting by x -> x Theta, so composition
// wedges matrices left to right in application order.  The dual module is the
// space of columns y with P y = y, paired by matrix product.
#pragma once

#include "ncg/connection.hpp"

namespace ncg {

// A rectangular matrix of forms of one fixed degree; entries are tensors with
// a single form slot so the wedge, differential, and grade bookkeeping of the
// backend apply entrywise.
template <class B>
struct FormMat {
    const B* bk = nullptr;
    int deg = 0;
    int rows = 0, cols = 0;
    std::vector<Tensor<B>> e;  // row-major

    Tensor<B>& at(int i, int j) { return e[i * cols + j]; }
    const Tensor<B>& at(int i, int j) const { return e[i * cols + j]; }

    static FormMat zero(const B& bk, int deg, int rows, int cols) {
        FormMat m;
        m.bk = &bk;
        m.deg = deg;
        m.rows = rows;
        m.cols = cols;
        m.e.assign(static_cast<std::size_t>(rows) * cols,
                   Tensor<B>::zero(bk, {Slot::form(deg)}));
        return m;
    }
    static FormMat identity(const B& bk, int n) {
        FormMat m = zero(bk, 0, n, n);
        for (int i = 0; i < n; ++i) m.at(i, i).c[0] = bk.one_alg();
        return m;
    }
    // degree-zero matrix from algebra entries
    static FormMat from_alg(const B& bk, const std::vector<std::vector<typename B::Alg>>& a) {
        FormMat m = zero(bk, 0, static_cast<int>(a.size()),
                         a.empty() ? 0 : static_cast<int>(a[0].size()));
        for (int i = 0; i < m.rows; ++i)
            for (int j = 0; j < m.cols; ++j) m.at(i, j).c[0] = a[i][j];
        return m;
    }

    bool is_zero() const {
        for (const auto& t : e)
            if (!t.is_zero()) return false;
        return true;
    }
    FormMat operator+(const FormMat& o) const {
        FormMat m = *this;
        for (std::size_t k = 0; k < e.size(); ++k) m.e[k] = e[k] + o.e[k];
        return m;
    }
    FormMat operator-(const FormMat& o) const {
        FormMat m = *this;
        for (std::size_t k = 0; k < e.size(); ++k) m.e[k] = e[k] - o.e[k];
        return m;
    }
    FormMat operator-() const {
        FormMat m = *this;
        for (auto& t : m.e) t = -t;
        return m;
    }
};

// matrix product with entrywise wedge; degrees add
template <class B>
FormMat<B> mat_wedge(const FormMat<B>& a, const FormMat<B>& b) {
    const B& bk = *a.bk;
    if (a.cols != b.rows) throw std::invalid_argument("mat_wedge: shape mismatch");
    FormMat<B> out = FormMat<B>::zero(bk, a.deg + b.deg, a.rows, b.cols);
    for (int i = 0; i < a.rows; ++i)
        for (int j = 0; j < b.cols; ++j)
            for (int k = 0; k < a.cols; ++k) {
                if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
                out.at(i, j) =
                    out.at(i, j) + merge_forms(tensor_prod(a.at(i, k), b.at(k, j)), 0);
            }
    return out;
}

// entrywise exterior derivative; degree rises by one
template <class B>
FormMat<B> mat_d(const FormMat<B>& a) {
    FormMat<B> out = FormMat<B>::zero(*a.bk, a.deg + 1, a.rows, a.cols);
    for (std::size_t k = 0; k < a.e.size(); ++k) out.e[k] = d_form_tensor(a.e[k]);
    return out;
}

template <class B>
Tensor<B> mat_trace(const FormMat<B>& a) {
    Tensor<B> acc = Tensor<B>::zero(*a.bk, {Slot::form(a.deg)});
    for (int i = 0; i < a.rows && i < a.cols; ++i) acc = acc + a.at(i, i);
    return acc;
}

// ---------------------------------------------------------------------------
// projector modules and matrix connections

template <class B>
struct ProjectorModule {
    const B* bk = nullptr;
    int n = 0;       // ambient free rank
    FormMat<B> P;    // idempotent degree-0 matrix
};

template <class B>
ProjectorModule<B> make_projector_module(const B& bk, FormMat<B> P) {
    if (P.deg != 0 || P.rows != P.cols)
        throw std::invalid_argument("projector module: square degree-0 matrix required");
    if (!(mat_wedge(P, P) - P).is_zero())
        throw std::invalid_argument("projector module: matrix is not idempotent");
    ProjectorModule<B> out;
    out.bk = &bk;
    out.n = P.rows;
    out.P = std::move(P);
    return out;
}

template <class B>
ProjectorModule<B> free_projector_module(const B& bk, int n) {
    return make_projector_module(bk, FormMat<B>::identity(bk, n));
}

// nabla x = dx P + x Gamma on rows x = x P, for Gamma = P Gamma P of degree 1
template <class B>
struct MatrixConnection {
    ProjectorModule<B> mod;
    FormMat<B> gamma;
};

template <class B>
MatrixConnection<B> make_matrix_connection(const ProjectorModule<B>& mod, FormMat<B> gamma) {
    if (gamma.deg != 1 || gamma.rows != mod.n || gamma.cols != mod.n)
        throw std::invalid_argument("matrix connection: degree-1 square matrix required");
    if (!(mat_wedge(mod.P, mat_wedge(gamma, mod.P)) - gamma).is_zero())
        throw std::invalid_argument("matrix connection: matrix not stabilized by the projector");
    return {mod, std::move(gamma)};
}

// the connection induced by the projector alone
template <class B>
MatrixConnection<B> grassmann_connection(const ProjectorModule<B>& mod) {
    return {mod, FormMat<B>::zero(*mod.bk, 1, mod.n, mod.n)};
}

// nabla of a degree-k row vector eta = eta P: d(eta) P + (-1)^k eta ^ Gamma
template <class B>
FormMat<B> matrix_covariant_derivative(const MatrixConnection<B>& conn, const FormMat<B>& eta) {
    auto lead = mat_wedge(mat_d(eta), conn.mod.P);
    auto mix = mat_wedge(eta, conn.gamma);
    return (eta.deg % 2 == 0) ? lead + mix : lead - mix;
}

// the curvature as a canonical degree-2 endomorphism matrix
template <class B>
FormMat<B> matrix_curvature(const MatrixConnection<B>& conn) {
    const auto& P = conn.mod.P;
    auto m1 = mat_wedge(mat_d(P), P) + conn.gamma;  // rows nabla e_i on the basis rows of P
    auto r = mat_wedge(mat_d(m1), P) - mat_wedge(m1, conn.gamma);
    return mat_wedge(P, r);
}

// covariant derivative of a degree-n endomorphism matrix:
// P (dTheta P + (-1)^n Theta ^ Gamma - Gamma ^ Theta)
template <class B>
FormMat<B> matrix_morphism_derivative(const MatrixConnection<B>& conn, const FormMat<B>& theta) {
    const auto& P = conn.mod.P;
    auto lead = mat_wedge(mat_d(theta), P);
    auto right = mat_wedge(theta, conn.gamma);
    auto left = mat_wedge(conn.gamma, theta);
    auto sum = (theta.deg % 2 == 0) ? lead + right - left : lead - right - left;
    return mat_wedge(P, sum);
}

// ---------------------------------------------------------------------------
// the dual right connection on columns y = P y:  nabla-tilde y = P dy - Gamma y

template <class B>
FormMat<B> dual_connection_matrix(const MatrixConnection<B>& conn) {
    return -conn.gamma;
}

// Leibniz residual of the dual pair on the coevaluation: the row-side matrix
// dP P + Gamma plus the column-side matrix P dP - Gamma must reassemble dP.
template <class B>
FormMat<B> dual_connection_residual(const MatrixConnection<B>& conn) {
    const auto& P = conn.mod.P;
    auto dP = mat_d(P);
    auto row_side = mat_wedge(dP, P) + conn.gamma;
    auto col_side = mat_wedge(P, dP) + dual_connection_matrix(conn);
    return row_side + col_side - dP;
}

// d(ev(x,y)) - ev(nabla x, y) - ev(x, nabla-tilde y) on a degree-0 row x = xP
// and column y = Py; zero exactly by the Leibniz rule of the dual pair.
template <class B>
Tensor<B> evaluation_residual(const MatrixConnection<B>& conn, const FormMat<B>& x,
                              const FormMat<B>& y) {
    const auto& P = conn.mod.P;
    auto nx = mat_wedge(mat_d(x), P) + mat_wedge(x, conn.gamma);
    auto ny = mat_wedge(P, mat_d(y)) + mat_wedge(dual_connection_matrix(conn), y);
    auto res = mat_d(mat_wedge(x, y)) - mat_wedge(nx, y) - mat_wedge(x, ny);
    return res.e[0];
}

// ---------------------------------------------------------------------------
// bridges between endomorphism matrices and graded morphisms on free modules

// a connection on the one-forms written over the free row module with P = id
template <class B>
MatrixConnection<B> connection_matrix(const B& bk, const Connection<B>& conn) {
    const int d1 = bk.dim_form(1);
    if (conn.mod->rank != d1)
        throw std::invalid_argument("connection matrix: connection on the one-forms required");
    auto mod = free_projector_module(bk, d1);
    FormMat<B> gamma = FormMat<B>::zero(bk, 1, d1, d1);
    for (int i = 0; i < d1; ++i)
        for (int a = 0; a < d1; ++a)
            for (int j = 0; j < d1; ++j)
                gamma.at(i, j).c[a] =
                    bk.add(gamma.at(i, j).c[a], conn.gamma[i].c[conn.gamma[i].flatten({a, j})]);
    return {mod, std::move(gamma)};
}

template <class B>
FormMat<B> morphism_matrix(const B& bk, const GradedMorphism<B>& psi) {
    if (psi.src->rank != psi.dst->rank)
        throw std::invalid_argument("morphism matrix: endomorphism required");
    const int r = psi.src->rank, dn = bk.dim_form(psi.deg);
    FormMat<B> out = FormMat<B>::zero(bk, psi.deg, r, r);
    for (int i = 0; i < r; ++i)
        for (int w = 0; w < dn; ++w)
            for (int j = 0; j < r; ++j)
                out.at(i, j).c[w] =
                    bk.add(out.at(i, j).c[w], psi.images[i].c[psi.images[i].flatten({w, j})]);
    return out;
}

template <class B>
GradedMorphism<B> matrix_morphism(const B& bk, const FormMat<B>& theta,
                                  std::shared_ptr<const Module> mod) {
    if (theta.rows != mod->rank || theta.cols != mod->rank)
        throw std::invalid_argument("matrix morphism: rank mismatch");
    GradedMorphism<B> out;
    out.bk = &bk;
    out.src = mod;
    out.dst = mod;
    out.deg = theta.deg;
    const int dn = bk.dim_form(theta.deg);
    for (int i = 0; i < theta.rows; ++i) {
        Tensor<B> img = Tensor<B>::zero(bk, {Slot::form(theta.deg), Slot::module(mod)});
        for (int w = 0; w < dn; ++w)
            for (int j = 0; j < theta.cols; ++j)
                img.c[img.flatten({w, j})] = theta.at(i, j).c[w];
        out.images.push_back(std::move(img));
    }
    return out;
}

// ---------------------------------------------------------------------------
// cycle traces over the group backend

// a closed graded trace applied to a single-form-slot tensor
inline RatFunc cycle_apply(const GroupBackend& bk, const Cycle& cyc,
                           const Tensor<GroupBackend>& t) {
    if (t.slots.size() != 1 || t.slots[0].form_deg != cyc.deg)
        throw std::invalid_argument("cycle apply: single form slot of the cycle degree required");
    RatFunc acc = RatFunc::zero(bk.ring());
    for (int w = 0; w < t.slot_dim(0); ++w)
        for (std::size_t x = 0; x < t.c[w].size(); ++x)
            if (!is_zero(cyc.val[w][x]))
                acc = acc + t.c[w][x] * RatFunc::constant(bk.ring(), cyc.val[w][x]);
    return acc;
}

// Tr of an endomorphism matrix against a cycle of the matching degree; with
// the dual basis rows of P this is the cycle applied to the matrix trace.
inline RatFunc cycle_trace(const GroupBackend& bk, const Cycle& cyc,
                           const FormMat<GroupBackend>& theta) {
    return cycle_apply(bk, cyc, mat_trace(theta));
}

// Tr of the n-th wedge power of the curvature: invariant under change of
// connection on the same module.
inline RatFunc chern_invariant(const GroupBackend& bk, const MatrixConnection<GroupBackend>& conn,
                               const Cycle& cyc, int npow) {
    auto R = matrix_curvature(conn);
    auto acc = conn.mod.P;
    for (int k = 0; k < npow; ++k) acc = mat_wedge(acc, R);
    return cycle_trace(bk, cyc, acc);
}

}  // namespace ncg
