// Calculus of graded left-module morphisms between based modules with
// connections: composition, the covariant derivative of a morphism, its
// square as a curvature commutator, the braided tensor product of morphisms,
// and both Bianchi identities packaged as residuals.  A degree-n morphism
// E -> Omega^n (x) F is stored by its images on the source basis, which makes
// it a left-module map by construction; all conditions tied to the right
// action live in equation sets instead.
#pragma once

#include "ncg/connection.hpp"

namespace ncg {

// phi after psi, computed as (id ^ phi) psi; degrees add.
template <class B>
GradedMorphism<B> compose(const B& bk, const GradedMorphism<B>& phi,
                          const GradedMorphism<B>& psi) {
    if (phi.src->rank != psi.dst->rank)
        throw std::invalid_argument("compose: source/target rank mismatch");
    GradedMorphism<B> out;
    out.bk = &bk;
    out.src = psi.src;
    out.dst = phi.dst;
    out.deg = phi.deg + psi.deg;
    for (const auto& img : psi.images)
        out.images.push_back(merge_forms(apply_at(img, 1, 1, phi.images), 0));
    return out;
}

// theta composed with itself n times (n = 0 gives the identity).
template <class B>
GradedMorphism<B> compose_power(const B& bk, const GradedMorphism<B>& theta, int n) {
    auto out = identity_morphism(bk, theta.src);
    for (int k = 0; k < n; ++k) out = compose(bk, theta, out);
    return out;
}

// The connection whose covariant derivative on the rank-one free module is
// plain d.
template <class B>
Connection<B> trivial_connection(const B& bk) {
    auto triv = trivial_module(bk);
    std::vector<Tensor<B>> gamma;
    gamma.push_back(Tensor<B>::zero(bk, {Slot::form(1), Slot::module(triv)}));
    return make_connection(bk, triv, std::move(gamma));
}

// A metric viewed as the degree-0 morphism A -> Omega1 (x) Omega1, 1 -> g.
template <class B>
GradedMorphism<B> metric_as_morphism(const B& bk, const Metric<B>& met) {
    GradedMorphism<B> out;
    out.bk = &bk;
    out.src = trivial_module(bk);
    out.dst = module_tensor(bk, met.mod, met.mod);
    out.deg = 0;
    out.images.push_back(flatten_mods(prepend_form0(met.g), 1, out.dst));
    return out;
}

// The tautological degree-1 morphism Omega1 -> Omega1 (x) A, xi -> xi (x) 1;
// its covariant derivative is minus the torsion.
template <class B>
GradedMorphism<B> tautological_one_form_morphism(const B& bk) {
    GradedMorphism<B> out;
    out.bk = &bk;
    out.src = omega1_module(bk);
    out.dst = trivial_module(bk);
    out.deg = 1;
    for (int i = 0; i < out.src->rank; ++i)
        out.images.push_back(Tensor<B>::delta(
            bk, {Slot::form(1), Slot::module(out.dst)}, {i, 0}, bk.one_alg()));
    return out;
}

// Covariant derivative of a degree-n morphism psi: E -> Omega^n (x) F with
// respect to connections on both ends: nabla_F^[n] psi - (id ^ psi) nabla_E,
// of degree n+1 between the same modules.
template <class B>
GradedMorphism<B> morphism_derivative(const B& bk, const GradedMorphism<B>& psi,
                                      const Connection<B>& connE, const Connection<B>& connF) {
    if (connE.mod->rank != psi.src->rank || connF.mod->rank != psi.dst->rank)
        throw std::invalid_argument("morphism derivative: connection/morphism mismatch");
    GradedMorphism<B> out;
    out.bk = &bk;
    out.src = psi.src;
    out.dst = psi.dst;
    out.deg = psi.deg + 1;
    for (int i = 0; i < psi.src->rank; ++i) {
        auto lead = covariant_derivative(psi.images[i], connF);
        auto mix = merge_forms(apply_at(connE.gamma[i], 1, 1, psi.images), 0);
        out.images.push_back(lead - mix);
    }
    return out;
}

// The square of the morphism derivative is composition with the curvatures:
// nabla nabla (nabla nabla psi) = R_F . psi - psi . R_E.  Returns the
// difference of the two sides, identically zero for every morphism.
template <class B>
GradedMorphism<B> dd_commutator_residual(const B& bk, const GradedMorphism<B>& psi,
                                         const Connection<B>& connE,
                                         const Connection<B>& connF) {
    auto dd = morphism_derivative(
        bk, morphism_derivative(bk, psi, connE, connF), connE, connF);
    auto rf = compose(bk, curvature(connF), psi);
    auto re = compose(bk, psi, curvature(connE));
    GradedMorphism<B> out = dd;
    for (std::size_t i = 0; i < out.images.size(); ++i)
        out.images[i] = dd.images[i] - rf.images[i] + re.images[i];
    return out;
}

// Braided tensor product of morphisms: phi (deg n): E -> Omega^n (x) G and
// psi (deg m): F -> Omega^m (x) H combine to a degree n+m morphism
// E (x) F -> Omega^{n+m} (x) G (x) H by moving the forms produced by psi
// across G with the degree-m extension of G's braiding, with the Koszul sign
// (-1)^{nm} of psi passing the forms of phi.  Source basis is ordered with
// the E index outermost, matching module_tensor.
template <class B>
GradedMorphism<B> boxtimes(const B& bk, const GradedMorphism<B>& phi,
                           const SigmaMap<B>& sigG, const GradedMorphism<B>& psi) {
    if (sigG.mod->rank != phi.dst->rank)
        throw std::invalid_argument("boxtimes: braiding must live on the first target");
    auto hat = sigma_hat_images(bk, sigG, psi.deg);
    const bool flip = (phi.deg % 2 == 1) && (psi.deg % 2 == 1);
    GradedMorphism<B> out;
    out.bk = &bk;
    out.src = module_tensor(bk, phi.src, psi.src);
    out.dst = module_tensor(bk, phi.dst, psi.dst);
    out.deg = phi.deg + psi.deg;
    for (int i = 0; i < phi.src->rank; ++i)
        for (int j = 0; j < psi.src->rank; ++j) {
            auto t = tensor_prod(phi.images[i], psi.images[j]);
            auto braided = apply_at(t, 1, 2, hat);
            auto img = flatten_mods(merge_forms(braided, 0), 1, out.dst);
            out.images.push_back(flip ? -img : img);
        }
    return out;
}

// Both Bianchi identities as residual tensors on the one-form basis: the
// first is ^R - dT + (id ^ T) nabla, the second is the covariant derivative
// of the curvature as a degree-2 morphism.  When the calculus has nothing in
// degree three both lists are zero tensors of shape [Form 3, module].
template <class B>
struct BianchiResiduals {
    std::vector<Tensor<B>> first, second;
};

template <class B>
BianchiResiduals<B> bianchi_residuals(const B& bk, const Connection<B>& conn) {
    auto R = curvature(conn);
    auto T = torsion(bk, conn);
    BianchiResiduals<B> out;
    out.first = bianchi_first_residuals(bk, conn, R, T);
    out.second = morphism_derivative(bk, R, conn, conn).images;
    return out;
}

}  // namespace ncg
