// Left connections on based bimodules, the braiding derived from them, and
// the derived geometric quantities: curvature, torsion, cotorsion, tensor
// connections, extendability of the braiding, metrics with their
// compatibility conditions, and the first Bianchi identity.  Everything is
// generic over the coefficient backend; parameter conditions come out as
// EquationSets.
#pragma once

#include "ncg/equations.hpp"
#include "ncg/matrix.hpp"
#include "ncg/tensor.hpp"

namespace ncg {

// ---------------------------------------------------------------------------
// connections and morphisms as stored data

template <class B>
struct Connection {
    const B* bk = nullptr;
    std::shared_ptr<const Module> mod;
    std::vector<Tensor<B>> gamma;  // nabla e_i, slots [Form1, Mod]
};

template <class B>
Connection<B> make_connection(const B& bk, std::shared_ptr<const Module> mod,
                              std::vector<Tensor<B>> gamma) {
    if (static_cast<int>(gamma.size()) != mod->rank)
        throw std::invalid_argument("connection: one value per module basis element required");
    for (const auto& t : gamma)
        if (t.slots.size() != 2 || t.slots[0].form_deg != 1 || t.slots[1].is_form())
            throw std::invalid_argument("connection: values must live in Omega1 (x) module");
    Connection<B> out;
    out.bk = &bk;
    out.mod = std::move(mod);
    out.gamma = std::move(gamma);
    return out;
}

// A left-module map E -> Omega^deg (x) F, given on basis elements.
template <class B>
struct GradedMorphism {
    const B* bk = nullptr;
    std::shared_ptr<const Module> src, dst;
    int deg = 0;
    std::vector<Tensor<B>> images;  // slots [Form deg, ModDst]

    bool is_zero() const {
        for (const auto& t : images)
            if (!t.is_zero()) return false;
        return true;
    }
};

template <class B>
GradedMorphism<B> identity_morphism(const B& bk, std::shared_ptr<const Module> mod) {
    GradedMorphism<B> id;
    id.bk = &bk;
    id.src = mod;
    id.dst = mod;
    id.deg = 0;
    for (int i = 0; i < mod->rank; ++i)
        id.images.push_back(Tensor<B>::delta(
            bk, {Slot::form(0), Slot::module(mod)}, {0, i}, bk.one_alg()));
    return id;
}

template <class B>
Tensor<B> unit_tensor(const B& bk, std::shared_ptr<const Module> m, int idx = 0) {
    return Tensor<B>::delta(bk, {Slot::module(std::move(m))}, {idx}, bk.one_alg());
}

// Prefixes a degree-zero form slot (same coefficient layout).
template <class B>
Tensor<B> prepend_form0(const Tensor<B>& T) {
    std::vector<Slot> slots;
    slots.push_back(Slot::form(0));
    slots.insert(slots.end(), T.slots.begin(), T.slots.end());
    Tensor<B> out = Tensor<B>::zero(*T.bk, std::move(slots));
    out.c = T.c;
    return out;
}

// Collects the vanishing conditions of every coefficient of a tensor.
template <class B>
void add_tensor_equations(EquationSet& out, const B& bk, const Tensor<B>& T) {
    for (const auto& a : T.c)
        for (const auto& r : bk.atoms(a)) out.add(r);
}

// Rebuilds a tensor over another backend instance by mapping each coefficient
// (used to substitute parameter values, possibly into a different ring).
template <class B, class F>
Tensor<B> map_tensor(const B& dst, const Tensor<B>& T, F&& f) {
    Tensor<B> out = Tensor<B>::zero(dst, T.slots);
    for (std::size_t i = 0; i < T.c.size(); ++i) out.c[i] = f(T.c[i]);
    return out;
}

// ---------------------------------------------------------------------------
// covariant derivative and curvature

// nabla^[p] (w (x) e) = dw (x) e + (-1)^p w ^ nabla e, on slots [Form p, Mod].
template <class B>
Tensor<B> covariant_derivative(const Tensor<B>& T, const Connection<B>& conn) {
    if (T.slots.size() != 2 || !T.slots[0].is_form() || T.slots[1].is_form())
        throw std::invalid_argument("covariant derivative needs slots [form, module]");
    const int p = T.slots[0].form_deg;
    auto lead = d_form_tensor(T);
    auto mix = merge_forms(apply_at(T, 1, 1, conn.gamma), 0);
    return (p % 2 == 0) ? lead + mix : lead - mix;
}

template <class B>
GradedMorphism<B> curvature(const Connection<B>& conn) {
    GradedMorphism<B> R;
    R.bk = conn.bk;
    R.src = conn.mod;
    R.dst = conn.mod;
    R.deg = 2;
    for (const auto& gi : conn.gamma) R.images.push_back(covariant_derivative(gi, conn));
    return R;
}

// ---------------------------------------------------------------------------
// torsion and cotorsion (connections on the one-forms)

template <class B>
GradedMorphism<B> torsion(const B& bk, const Connection<B>& conn) {
    const int d1 = bk.dim_form(1);
    if (conn.mod->rank != d1)
        throw std::invalid_argument("torsion needs a connection on the one-forms");
    auto triv = trivial_module(bk);
    GradedMorphism<B> T;
    T.bk = &bk;
    T.src = conn.mod;
    T.dst = triv;
    T.deg = 2;
    for (int a = 0; a < d1; ++a) {
        auto wedged = merge_forms(mod_to_form(conn.gamma[a], 1, 1), 0);  // wedge(nabla e_a)
        Tensor<B> de = Tensor<B>::zero(bk, {Slot::form(2)});
        for (const auto& [q, k] : bk.d_basis(1, a)) de.c[k] = bk.add(de.c[k], q);
        T.images.push_back(tensor_prod(wedged - de, unit_tensor(bk, triv)));
    }
    return T;
}

// ---------------------------------------------------------------------------
// the braiding derived from a connection

template <class B>
struct SigmaMap {
    const B* bk = nullptr;
    std::shared_ptr<const Module> mod;
    std::vector<Tensor<B>> images;  // sigma(e_i (x) xi_a) at index i*dim1 + a, slots [Form1, Mod]

    const Tensor<B>& image(int i, int a) const { return images[i * bk->dim_form(1) + a]; }
};

// nabla(e_i f) - sigma(e_i (x) df) - (nabla e_i) f; zero for every f exactly
// when sigma makes the connection a bimodule connection.
template <class B>
Tensor<B> right_module_residual(const B& bk, const Connection<B>& conn, const SigmaMap<B>& sig,
                                int i, const typename B::Alg& f) {
    const int d1 = bk.dim_form(1);
    const int gi = conn.mod->grades[i];
    auto fi = bk.apply_grade(gi, f);  // e_i f = tw_i(f) e_i
    Tensor<B> lhs = Tensor<B>::zero(bk, {Slot::form(1), Slot::module(conn.mod)});
    auto dfi = bk.d_alg(fi);
    for (int b = 0; b < d1; ++b) lhs.c[lhs.flatten({b, i})] = dfi[b];
    lhs = lhs + conn.gamma[i].scale_left(fi);
    Tensor<B> mid = Tensor<B>::zero(bk, {Slot::form(1), Slot::module(conn.mod)});
    auto df = bk.d_alg(f);
    for (int a = 0; a < d1; ++a)
        if (!bk.is_zero_alg(df[a]))
            mid = mid + sig.image(i, a).scale_left(bk.apply_grade(gi, df[a]));
    return lhs - mid - conn.gamma[i].act_right(f);
}

// Conditions for the derived braiding to be well defined as a bimodule map:
// residuals over the backend's probes, plus commutation of the braiding
// images with the coordinate generators when the probes do not span.
template <class B>
EquationSet right_module_equations(const B& bk, const Connection<B>& conn,
                                   const SigmaMap<B>& sig) {
    EquationSet out(bk.ring());
    for (int i = 0; i < conn.mod->rank; ++i)
        for (const auto& f : bk.probes())
            add_tensor_equations(out, bk, right_module_residual(bk, conn, sig, i, f));
    for (const auto& g : bk.algebra_generators())
        for (const auto& img : sig.images)
            add_tensor_equations(out, bk, img.scale_left(g) - img.act_right(g));
    return out;
}

// Conditions for a graded left-module morphism to commute with the right
// action as well: tw_i(f) m(e_i) = m(e_i) f for every basis element and every
// probe (and coordinate generator, where the probes do not span).
template <class B>
EquationSet morphism_right_module_equations(const B& bk, const GradedMorphism<B>& m) {
    EquationSet out(bk.ring());
    auto add_for = [&](const typename B::Alg& f) {
        for (int i = 0; i < m.src->rank; ++i) {
            auto lhs = m.images[i].scale_left(bk.apply_grade(m.src->grades[i], f));
            add_tensor_equations(out, bk, lhs - m.images[i].act_right(f));
        }
    };
    for (const auto& f : bk.probes()) add_for(f);
    for (const auto& f : bk.algebra_generators()) add_for(f);
    return out;
}

// The right-module conditions for the curvature specifically, expressed
// through the braiding: the defect R(e f) - R(e) f equals
// (d (x) id - id ^ nabla) sigma(e (x) df) - (id ^ sigma)(nabla e (x) df),
// and since the defect is a twisted derivation in f it vanishes identically
// exactly when it vanishes on basis elements e and coordinate generators f.
// Equivalent to morphism_right_module_equations(curvature(conn)) wherever
// sigma satisfies the defining property of the derived braiding.
template <class B>
EquationSet curvature_right_module_equations(const B& bk, const Connection<B>& conn,
                                             const SigmaMap<B>& sig) {
    EquationSet out(bk.ring());
    const int d1 = bk.dim_form(1);
    for (const auto& f : bk.algebra_generators()) {
        auto df = bk.d_alg(f);
        for (int i = 0; i < conn.mod->rank; ++i) {
            Tensor<B> eidf = Tensor<B>::zero(bk, {Slot::module(conn.mod), Slot::form(1)});
            Tensor<B> nadf = Tensor<B>::zero(
                bk, {Slot::form(1), Slot::module(conn.mod), Slot::form(1)});
            for (int b = 0; b < d1; ++b) {
                if (bk.is_zero_alg(df[b])) continue;
                auto xb = Tensor<B>::delta(bk, {Slot::form(1)}, {b}, bk.one_alg());
                auto ei = Tensor<B>::delta(bk, {Slot::module(conn.mod)}, {i}, bk.one_alg());
                eidf = eidf + tensor_prod(ei.act_right(df[b]), xb);
                nadf = nadf + tensor_prod(conn.gamma[i].act_right(df[b]), xb);
            }
            auto lhs = covariant_derivative(apply_at(eidf, 0, 2, sig.images), conn);
            auto rhs = merge_forms(apply_at(nadf, 1, 2, sig.images), 0);
            add_tensor_equations(out, bk, lhs - rhs);
        }
    }
    return out;
}

// The canonical braiding of the trivial module: 1 (x) xi -> xi (x) 1.
template <class B>
std::vector<Tensor<B>> trivial_sigma_images(const B& bk) {
    auto triv = trivial_module(bk);
    std::vector<Tensor<B>> out;
    for (int a = 0; a < bk.dim_form(1); ++a)
        out.push_back(Tensor<B>::delta(bk, {Slot::form(1), Slot::module(triv)},
                                       {a, 0}, bk.one_alg()));
    return out;
}

// Membership condition for a degree-n left-module map in the bimodule
// morphism category: (id ^ psi) sigma_E = (-1)^n (id ^ sigma_F)(psi (x) id)
// as maps E (x) Omega1 -> Omega^{n+1} (x) F.  Vacuous when Omega^{n+1} = 0.
// The residual tensors come indexed by (source basis element, one-form basis
// element), linear in the images of psi.
template <class B>
std::vector<Tensor<B>> graded_morphism_residuals(const B& bk, const GradedMorphism<B>& psi,
                                                 const SigmaMap<B>& sigE,
                                                 const std::vector<Tensor<B>>& sigF_images) {
    std::vector<Tensor<B>> out;
    const int d1 = bk.dim_form(1);
    for (int i = 0; i < psi.src->rank; ++i)
        for (int a = 0; a < d1; ++a) {
            auto lhs = merge_forms(apply_at(sigE.image(i, a), 1, 1, psi.images), 0);
            auto t = tensor_prod(psi.images[i],
                                 Tensor<B>::delta(bk, {Slot::form(1)}, {a}, bk.one_alg()));
            auto rhs = merge_forms(apply_at(t, 1, 2, sigF_images), 0);
            out.push_back((psi.deg % 2 == 0) ? lhs - rhs : lhs + rhs);
        }
    return out;
}

template <class B>
EquationSet graded_morphism_equations(const B& bk, const GradedMorphism<B>& psi,
                                      const SigmaMap<B>& sigE,
                                      const std::vector<Tensor<B>>& sigF_images) {
    EquationSet out(bk.ring());
    for (const auto& res : graded_morphism_residuals(bk, psi, sigE, sigF_images))
        add_tensor_equations(out, bk, res);
    return out;
}

template <class B>
struct SigmaResult {
    SigmaMap<B> sigma;      // candidate braiding, valid where the equations vanish
    EquationSet equations;  // right-module conditions on the parameters
    bool bimodule = false;  // equations are empty: sigma works identically
    std::string witness;    // first failing probe when the conditions cannot hold
};

// Constructs sigma(e_i (x) xi_a) from sigma(e (x) df) = nabla(e f) - (nabla e) f,
// expanding each basis one-form as a sum of f dg terms.
template <class B>
SigmaResult<B> derive_sigma(const B& bk, const Connection<B>& conn) {
    const int d1 = bk.dim_form(1);
    const auto pres = bk.one_form_presentations();

    SigmaResult<B> out{{}, EquationSet(bk.ring()), false, ""};
    out.sigma.bk = &bk;
    out.sigma.mod = conn.mod;
    for (int i = 0; i < conn.mod->rank; ++i) {
        const int gi = conn.mod->grades[i];
        for (int a = 0; a < d1; ++a) {
            Tensor<B> img = Tensor<B>::zero(bk, {Slot::form(1), Slot::module(conn.mod)});
            for (const auto& [f, g] : pres[a]) {
                // tw_i(f) [ d(tw_i g) (x) e_i + tw_i(g) nabla e_i - (nabla e_i) g ]
                auto tg = bk.apply_grade(gi, g);
                Tensor<B> term = Tensor<B>::zero(bk, {Slot::form(1), Slot::module(conn.mod)});
                auto dtg = bk.d_alg(tg);
                for (int b = 0; b < d1; ++b) term.c[term.flatten({b, i})] = dtg[b];
                term = term + conn.gamma[i].scale_left(tg) - conn.gamma[i].act_right(g);
                img = img + term.scale_left(bk.apply_grade(gi, f));
            }
            out.sigma.images.push_back(std::move(img));
        }
    }

    out.equations = right_module_equations(bk, conn, out.sigma);
    out.bimodule = out.equations.empty();
    if (out.equations.unsatisfiable()) {
        const auto probes = bk.probes();
        for (int i = 0; i < conn.mod->rank && out.witness.empty(); ++i)
            for (std::size_t k = 0; k < probes.size(); ++k) {
                auto res = right_module_residual(bk, conn, out.sigma, i, probes[k]);
                if (!res.is_zero()) {
                    std::ostringstream os;
                    os << "no right-module structure: moving probe #" << k
                       << " across basis element " << i << " leaves a nonzero residual";
                    out.witness = os.str();
                    break;
                }
            }
        if (out.witness.empty())
            out.witness = "no right-module structure: braiding images fail to commute "
                          "with the coordinate generators";
    }
    return out;
}

// Extends the braiding to E (x) Omega^n -> Omega^n (x) E by moving the module
// factor across one letter at a time (well defined where sigma is extendable).
template <class B>
std::vector<Tensor<B>> sigma_hat_images(const B& bk, const SigmaMap<B>& sig, int n) {
    const int d1 = bk.dim_form(1), dn = bk.dim_form(n);
    std::vector<Tensor<B>> out;
    std::vector<std::vector<Tensor<B>>> slices(d1);
    for (int a = 0; a < d1; ++a)
        for (int k = 0; k < sig.mod->rank; ++k) slices[a].push_back(sig.images[k * d1 + a]);
    for (int i = 0; i < sig.mod->rank; ++i)
        for (int j = 0; j < dn; ++j) {
            Tensor<B> state = Tensor<B>::delta(
                bk, {Slot::form(0), Slot::module(sig.mod)}, {0, i}, bk.one_alg());
            for (int letter : bk.form_word(n, j))
                state = merge_forms(apply_at(state, 1, 1, slices[letter]), 0);
            out.push_back(std::move(state));
        }
    return out;
}

// ---------------------------------------------------------------------------
// tensor connections

// nabla_{E(x)F} = nabla_E (x) id + (sigma_E (x) id)(id (x) nabla_F)
template <class B>
Connection<B> tensor_connection(const B& bk, const Connection<B>& connE, const SigmaMap<B>& sigE,
                                const Connection<B>& connF) {
    auto prod = module_tensor(bk, connE.mod, connF.mod);
    std::vector<Tensor<B>> gamma;
    for (int i = 0; i < connE.mod->rank; ++i)
        for (int j = 0; j < connF.mod->rank; ++j) {
            auto term1 = tensor_prod(connE.gamma[i], unit_tensor(bk, connF.mod, j));
            auto term2 = apply_at(tensor_prod(unit_tensor(bk, connE.mod, i), connF.gamma[j]),
                                  0, 2, sigE.images);
            gamma.push_back(flatten_mods(term1 + term2, 1, prod));
        }
    return make_connection(bk, prod, std::move(gamma));
}

// sigma_{E(x)F} = (sigma_E (x) id)(id (x) sigma_F)
template <class B>
SigmaMap<B> sigma_product(const B& bk, const SigmaMap<B>& sigE, const SigmaMap<B>& sigF) {
    auto prod = module_tensor(bk, sigE.mod, sigF.mod);
    const int d1 = bk.dim_form(1);
    SigmaMap<B> out;
    out.bk = &bk;
    out.mod = prod;
    for (int i = 0; i < sigE.mod->rank; ++i)
        for (int j = 0; j < sigF.mod->rank; ++j)
            for (int a = 0; a < d1; ++a) {
                auto t = tensor_prod(unit_tensor(bk, sigE.mod, i), sigF.images[j * d1 + a]);
                t = apply_at(t, 0, 2, sigE.images);  // [Form1, ModE, ModF]
                out.images.push_back(flatten_mods(t, 1, prod));
            }
    return out;
}

// ---------------------------------------------------------------------------
// extendability of the braiding

template <class B>
struct ExtendabilityResult {
    EquationSet equations;                           // conditions to descend to Omega2
    std::vector<Tensor<B>> sigma_hat2;               // candidate degree-2 images
    std::vector<std::vector<RatFunc>> wedge_kernel;  // kernel of the wedge, coords (a, b)
};

// The braiding extends to degree two exactly when moving the module factor
// across a wedge relation and wedging again gives zero.
template <class B>
ExtendabilityResult<B> extendability_equations(const B& bk, const SigmaMap<B>& sig) {
    const int d1 = bk.dim_form(1), d2 = bk.dim_form(2);
    auto one = RatFunc::one(bk.ring());

    Mat<RatFunc> N(d2, d1 * d1, RatFunc::zero(bk.ring()));
    for (int a = 0; a < d1; ++a)
        for (int b = 0; b < d1; ++b) {
            const auto combo = bk.wedge_basis(1, a, 1, b);
            for (const auto& [q, k] : combo) {
                auto cq = bk.alg_to_const(q);
                if (!cq)
                    throw std::logic_error("wedge structure constants must be central");
                N.at(k, a * d1 + b) = N.at(k, a * d1 + b) + *cq;
            }
        }

    ExtendabilityResult<B> out{EquationSet(bk.ring()), {}, kernel(N, one)};
    for (const auto& q : out.wedge_kernel)
        for (int i = 0; i < sig.mod->rank; ++i) {
            Tensor<B> state = Tensor<B>::zero(
                bk, {Slot::module(sig.mod), Slot::form(1), Slot::form(1)});
            for (int a = 0; a < d1; ++a)
                for (int b = 0; b < d1; ++b)
                    if (!q[a * d1 + b].is_zero())
                        state.c[state.flatten({i, a, b})] = bk.const_alg(q[a * d1 + b]);
            auto moved = apply_at(state, 0, 2, sig.images);   // [F1, Mod, F1]
            moved = apply_at(moved, 1, 2, sig.images);        // [F1, F1, Mod]
            add_tensor_equations(out.equations, bk, merge_forms(moved, 0));
        }
    out.sigma_hat2 = sigma_hat_images(bk, sig, 2);
    return out;
}

// The canonical braiding of a finite-group calculus: Psi(xi_a (x) xi_b) =
// xi_{aba^{-1}} (x) xi_a.  (Only instantiated for group backends.)
template <class B>
std::vector<Tensor<B>> group_braiding_images(const B& bk) {
    const int d1 = bk.dim_form(1);
    std::vector<Tensor<B>> out;
    for (int a = 0; a < d1; ++a)
        for (int b = 0; b < d1; ++b) {
            int gab = bk.cal().letter_of_gen(
                bk.group().conj(bk.cal().gens[a], bk.cal().gens[b]));
            out.push_back(Tensor<B>::delta(bk, {Slot::form(1), Slot::form(1)},
                                           {gab, a}, bk.one_alg()));
        }
    return out;
}

// Alternative extendability route through a braiding of the one-forms:
// (id (x) sigma)(sigma (x) id)(id (x) Psi) = (Psi (x) id)(id (x) sigma)(sigma (x) id).
template <class B>
EquationSet mixed_braid_equations(const B& bk, const SigmaMap<B>& sig,
                                  const std::vector<Tensor<B>>& braid) {
    EquationSet out(bk.ring());
    const int d1 = bk.dim_form(1);
    for (int i = 0; i < sig.mod->rank; ++i)
        for (int b = 0; b < d1; ++b)
            for (int c = 0; c < d1; ++c) {
                auto state = Tensor<B>::delta(
                    bk, {Slot::module(sig.mod), Slot::form(1), Slot::form(1)},
                    {i, b, c}, bk.one_alg());
                auto lhs = apply_at(state, 1, 2, braid);
                lhs = apply_at(lhs, 0, 2, sig.images);
                lhs = apply_at(lhs, 1, 2, sig.images);
                auto rhs = apply_at(state, 0, 2, sig.images);
                rhs = apply_at(rhs, 1, 2, sig.images);
                rhs = apply_at(rhs, 0, 2, braid);
                add_tensor_equations(out, bk, lhs - rhs);
            }
    return out;
}

// ---------------------------------------------------------------------------
// metrics

template <class B>
struct Metric {
    const B* bk = nullptr;
    std::shared_ptr<const Module> mod;  // the one-forms as a module
    Tensor<B> g;                        // slots [Mod, Mod]
    std::vector<std::vector<typename B::Alg>> pairing;  // (xi_a, xi_b)
};

// Validates quantum symmetry (the wedge of the metric vanishes) and that the
// pairing inverts the metric on both sides; degenerate input is an error.
template <class B>
Metric<B> make_metric(const B& bk, std::shared_ptr<const Module> mod, Tensor<B> g,
                      std::vector<std::vector<typename B::Alg>> pairing) {
    const int d1 = bk.dim_form(1);
    if (mod->rank != d1 || g.slots.size() != 2 || g.slots[0].is_form() || g.slots[1].is_form())
        throw std::invalid_argument("metric: element of Omega1 (x) Omega1 required");
    if (!merge_forms(mod_to_form(mod_to_form(g, 0, 1), 1, 1), 0).is_zero())
        throw std::invalid_argument("metric: not quantum symmetric (wedge does not vanish)");

    // sum_b tw_a(G_bc) (xi_a, xi_b) = delta_ac  and  sum_c G_bc tw_b((xi_c, xi_a)) = delta_ab
    for (int a = 0; a < d1; ++a)
        for (int cc = 0; cc < d1; ++cc) {
            auto acc = bk.zero_alg();
            for (int b = 0; b < d1; ++b)
                acc = bk.add(acc, bk.mul(bk.apply_grade(mod->grades[a],
                                                        g.c[g.flatten({b, cc})]),
                                         pairing[a][b]));
            auto want = a == cc ? bk.one_alg() : bk.zero_alg();
            if (!bk.is_zero_alg(bk.sub(acc, want)))
                throw std::invalid_argument("metric: pairing fails to invert on the left");
        }
    for (int b = 0; b < d1; ++b)
        for (int a = 0; a < d1; ++a) {
            auto acc = bk.zero_alg();
            for (int cc = 0; cc < d1; ++cc)
                acc = bk.add(acc, bk.mul(g.c[g.flatten({b, cc})],
                                         bk.apply_grade(mod->grades[b], pairing[cc][a])));
            auto want = a == b ? bk.one_alg() : bk.zero_alg();
            if (!bk.is_zero_alg(bk.sub(acc, want)))
                throw std::invalid_argument("metric: pairing fails to invert on the right");
        }

    Metric<B> out;
    out.bk = &bk;
    out.mod = std::move(mod);
    out.g = std::move(g);
    out.pairing = std::move(pairing);
    return out;
}

// Cotorsion: the covariant exterior derivative of the metric element,
// (d (x) id - id ^ nabla) g.
template <class B>
Tensor<B> cotorsion(const Connection<B>& conn, const Metric<B>& met) {
    return covariant_derivative(mod_to_form(met.g, 0, 1), conn);
}

// Full metric compatibility: the tensor-product connection kills the metric.
template <class B>
Tensor<B> metric_compat_residual(const B& bk, const Connection<B>& conn, const SigmaMap<B>& sig,
                                 const Metric<B>& met) {
    auto connSq = tensor_connection(bk, conn, sig, conn);
    auto gt = flatten_mods(prepend_form0(met.g), 1, connSq.mod);
    return covariant_derivative(gt, connSq);
}

template <class B>
EquationSet metric_compat_equations(const B& bk, const Connection<B>& conn,
                                    const SigmaMap<B>& sig, const Metric<B>& met) {
    EquationSet out(bk.ring());
    add_tensor_equations(out, bk, metric_compat_residual(bk, conn, sig, met));
    return out;
}

// The braided antisymmetry of the curvature forced at metric-compatible
// points: the curvature of the tensor-square connection applied to the metric
// element.  Preserving the metric means the tensor-square connection kills g,
// so applying its curvature to g gives zero — independently of whether the
// braiding extends to higher degrees.
template <class B>
Tensor<B> riemann_antisymmetry_residual(const B& bk, const Connection<B>& conn,
                                        const SigmaMap<B>& sig, const Metric<B>& met) {
    auto connSq = tensor_connection(bk, conn, sig, conn);
    auto R2 = curvature(connSq);
    auto gt = flatten_mods(met.g, 0, connSq.mod);
    return apply_at(gt, 0, 1, R2.images);  // [F2, ModProd]
}

// (R (x) id + (sigma-hat (x) id)(id (x) R)) g: the split form of the same
// residual.  It agrees with the residual above exactly when the braiding is
// extendable, which is how the curvature of a tensor product decomposes.
template <class B>
Tensor<B> riemann_antisymmetry_split(const B& bk, const GradedMorphism<B>& R,
                                     const SigmaMap<B>& sig, const Metric<B>& met) {
    auto t1 = apply_at(met.g, 0, 1, R.images);  // [F2, Mod, Mod]
    auto t2 = apply_at(met.g, 1, 1, R.images);  // [Mod, F2, Mod]
    t2 = apply_at(t2, 0, 2, sigma_hat_images(bk, sig, 2));
    return t1 + t2;
}

// Trace through the metric duality: (id (x) ev)((theta (x) id)(g)).
template <class B>
Tensor<B> metric_trace(const B& bk, const Metric<B>& met, const GradedMorphism<B>& theta) {
    auto t = apply_at(met.g, 0, 1, theta.images);  // [Form deg, Mod, Mod]
    std::vector<Tensor<B>> ev;
    const int d1 = met.mod->rank;
    for (int a = 0; a < d1; ++a)
        for (int b = 0; b < d1; ++b) {
            Tensor<B> e;
            e.bk = &bk;
            e.c = {met.pairing[a][b]};
            ev.push_back(std::move(e));
        }
    return apply_at(t, 1, 2, ev);
}

// The quantum dimension is the metric trace of the identity.
template <class B>
typename B::Alg quantum_dimension(const B& bk, const Metric<B>& met) {
    return metric_trace(bk, met, identity_morphism(bk, met.mod)).c[0];
}

// ---------------------------------------------------------------------------
// first Bianchi identity: wedge(R) = dT - (id ^ T) nabla

template <class B>
std::vector<Tensor<B>> bianchi_first_residuals(const B& bk, const Connection<B>& conn,
                                               const GradedMorphism<B>& R,
                                               const GradedMorphism<B>& T) {
    std::vector<Tensor<B>> out;
    for (int a = 0; a < conn.mod->rank; ++a) {
        auto lhs = tensor_prod(merge_forms(mod_to_form(R.images[a], 1, 1), 0),
                               unit_tensor(bk, T.dst));
        auto dT = d_form_tensor(T.images[a]);
        auto idT = merge_forms(apply_at(conn.gamma[a], 1, 1, T.images), 0);
        out.push_back(lhs - (dT - idT));
    }
    return out;
}

// ---------------------------------------------------------------------------
// compatibility of the extended braiding with the covariant derivative:
// nabla^[n] sigma-hat = (id ^ sigma-hat)(nabla (x) id) + sigma-hat(id (x) d)

template <class B>
EquationSet braiding_derivative_residual(const B& bk, const Connection<B>& conn,
                                         const SigmaMap<B>& sig, int n) {
    EquationSet out(bk.ring());
    const int dn = bk.dim_form(n), dn1 = bk.dim_form(n + 1);
    auto shn = sigma_hat_images(bk, sig, n);
    auto shn1 = sigma_hat_images(bk, sig, n + 1);
    for (int i = 0; i < conn.mod->rank; ++i) {
        const int gi = conn.mod->grades[i];
        for (int w = 0; w < dn; ++w) {
            auto lhs = covariant_derivative(shn[i * dn + w], conn);
            auto t = tensor_prod(conn.gamma[i],
                                 Tensor<B>::delta(bk, {Slot::form(n)}, {w}, bk.one_alg()));
            auto rhs1 = merge_forms(apply_at(t, 1, 2, shn), 0);
            Tensor<B> rhs2 = Tensor<B>::zero(
                bk, {Slot::form(n + 1), Slot::module(conn.mod)});
            if (dn1 > 0)
                for (const auto& [q, k] : bk.d_basis(n, w))
                    rhs2 = rhs2 + shn1[i * dn1 + k].scale_left(bk.apply_grade(gi, q));
            add_tensor_equations(out, bk, lhs - rhs1 - rhs2);
        }
    }
    return out;
}

}  // namespace ncg
