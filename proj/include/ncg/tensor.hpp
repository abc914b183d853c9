// Tensors of forms and module factors over a coefficient backend.  A tensor
// is a slot list (each slot a form degree or a based module) with a dense
// coefficient array, all algebra coefficients collected at the far left.
// Moving a coefficient out of the interior twists it by the grades of
// everything it crosses, which is the only place bimodule structure enters.
#pragma once

#include <memory>
#include <numeric>
#include <string>
#include <vector>

namespace ncg {

struct Module {
    std::string name;
    int rank = 0;
    std::vector<int> grades;  // right-action twist of each basis element
};

inline std::shared_ptr<const Module> make_module(std::string name, std::vector<int> grades) {
    auto m = std::make_shared<Module>();
    m->name = std::move(name);
    m->rank = static_cast<int>(grades.size());
    m->grades = std::move(grades);
    return m;
}

template <class B>
std::shared_ptr<const Module> omega1_module(const B& bk) {
    std::vector<int> grades;
    for (int i = 0; i < bk.dim_form(1); ++i) grades.push_back(bk.form_grade(1, i));
    return make_module("Omega1", std::move(grades));
}

template <class B>
std::shared_ptr<const Module> trivial_module(const B& bk) {
    return make_module("A", {bk.grade_id()});
}

template <class B>
std::shared_ptr<const Module> module_tensor(const B& bk, const std::shared_ptr<const Module>& E,
                                            const std::shared_ptr<const Module>& F) {
    std::vector<int> grades;
    for (int i = 0; i < E->rank; ++i)
        for (int j = 0; j < F->rank; ++j) grades.push_back(bk.grade_mul(E->grades[i], F->grades[j]));
    return make_module(E->name + "(x)" + F->name, std::move(grades));
}

struct Slot {
    int form_deg = -1;
    std::shared_ptr<const Module> mod;
    bool is_form() const { return form_deg >= 0; }

    static Slot form(int deg) {
        Slot s;
        s.form_deg = deg;
        return s;
    }
    static Slot module(std::shared_ptr<const Module> m) {
        Slot s;
        s.mod = std::move(m);
        return s;
    }
};

template <class B>
class Tensor {
  public:
    using Alg = typename B::Alg;

    const B* bk = nullptr;
    std::vector<Slot> slots;
    std::vector<Alg> c;

    static Tensor zero(const B& bk_, std::vector<Slot> slots_) {
        Tensor t;
        t.bk = &bk_;
        t.slots = std::move(slots_);
        t.c.assign(t.total_size(), bk_.zero_alg());
        return t;
    }
    // basis tensor with a single coefficient
    static Tensor delta(const B& bk_, std::vector<Slot> slots_, const std::vector<int>& idx,
                        const Alg& a) {
        Tensor t = zero(bk_, std::move(slots_));
        t.c[t.flatten(idx)] = a;
        return t;
    }

    int slot_dim(int s) const {
        return slots[s].is_form() ? bk->dim_form(slots[s].form_deg) : slots[s].mod->rank;
    }
    int slot_grade(int s, int i) const {
        return slots[s].is_form() ? bk->form_grade(slots[s].form_deg, i) : slots[s].mod->grades[i];
    }
    int total_size() const {
        int n = 1;
        for (std::size_t s = 0; s < slots.size(); ++s) n *= slot_dim(static_cast<int>(s));
        return n;
    }
    int flatten(const std::vector<int>& idx) const {
        int flat = 0;
        for (std::size_t s = 0; s < slots.size(); ++s)
            flat = flat * slot_dim(static_cast<int>(s)) + idx[s];
        return flat;
    }
    std::vector<int> unflatten(int flat) const {
        std::vector<int> idx(slots.size());
        for (int s = static_cast<int>(slots.size()) - 1; s >= 0; --s) {
            idx[s] = flat % slot_dim(s);
            flat /= slot_dim(s);
        }
        return idx;
    }

    bool is_zero() const {
        for (const auto& a : c)
            if (!bk->is_zero_alg(a)) return false;
        return true;
    }
    friend Tensor operator+(const Tensor& x, const Tensor& y) {
        Tensor out = x;
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = x.bk->add(out.c[i], y.c[i]);
        return out;
    }
    friend Tensor operator-(const Tensor& x, const Tensor& y) {
        Tensor out = x;
        for (std::size_t i = 0; i < out.c.size(); ++i) out.c[i] = x.bk->sub(out.c[i], y.c[i]);
        return out;
    }
    Tensor operator-() const {
        Tensor out = *this;
        for (auto& a : out.c) a = bk->neg(a);
        return out;
    }
    Tensor scale_left(const Alg& a) const {
        Tensor out = *this;
        for (auto& x : out.c) x = bk->mul(a, x);
        return out;
    }
    // right action: move the algebra element leftward across every slot
    Tensor act_right(const Alg& a) const {
        Tensor out = *this;
        for (int flat = 0; flat < total_size(); ++flat) {
            if (bk->is_zero_alg(out.c[flat])) continue;
            auto idx = unflatten(flat);
            int g = bk->grade_id();
            for (std::size_t s = 0; s < slots.size(); ++s)
                g = bk->grade_mul(g, slot_grade(static_cast<int>(s), idx[s]));
            out.c[flat] = bk->mul(out.c[flat], bk->apply_grade(g, a));
        }
        return out;
    }
};

// Replaces slots [s, s+n_in) by the image slots of a left-module map given on
// basis combinations.  Image coefficients migrate to the far left, twisted by
// the grades of the prefix they cross.
template <class B>
Tensor<B> apply_at(const Tensor<B>& T, int s, int n_in,
                   const std::vector<Tensor<B>>& images) {
    const B& bk = *T.bk;
    std::vector<Slot> out_slots(T.slots.begin(), T.slots.begin() + s);
    for (const auto& sl : images[0].slots) out_slots.push_back(sl);
    const int n_tail = static_cast<int>(T.slots.size()) - s - n_in;
    for (int k = 0; k < n_tail; ++k) out_slots.push_back(T.slots[s + n_in + k]);

    Tensor<B> out = Tensor<B>::zero(bk, std::move(out_slots));
    const int img_rank = static_cast<int>(images[0].slots.size());
    for (int flat = 0; flat < T.total_size(); ++flat) {
        if (bk.is_zero_alg(T.c[flat])) continue;
        auto idx = T.unflatten(flat);
        int g = bk.grade_id();
        for (int p = 0; p < s; ++p) g = bk.grade_mul(g, T.slot_grade(p, idx[p]));
        int mid = 0;
        for (int p = s; p < s + n_in; ++p) mid = mid * T.slot_dim(p) + idx[p];
        const Tensor<B>& img = images[mid];
        for (int jflat = 0; jflat < img.total_size(); ++jflat) {
            if (bk.is_zero_alg(img.c[jflat])) continue;
            auto jdx = img.unflatten(jflat);
            std::vector<int> odx(idx.begin(), idx.begin() + s);
            odx.insert(odx.end(), jdx.begin(), jdx.end());
            odx.insert(odx.end(), idx.begin() + s + n_in, idx.end());
            int oflat = out.flatten(odx);
            out.c[oflat] = bk.add(out.c[oflat],
                                  bk.mul(T.c[flat], bk.apply_grade(g, img.c[jflat])));
        }
        (void)img_rank;
    }
    return out;
}

// Wedges two adjacent form slots into one.
template <class B>
Tensor<B> merge_forms(const Tensor<B>& T, int s) {
    const B& bk = *T.bk;
    const int p = T.slots[s].form_deg, q = T.slots[s + 1].form_deg;
    std::vector<Slot> out_slots(T.slots.begin(), T.slots.begin() + s);
    out_slots.push_back(Slot::form(p + q));
    out_slots.insert(out_slots.end(), T.slots.begin() + s + 2, T.slots.end());

    Tensor<B> out = Tensor<B>::zero(bk, std::move(out_slots));
    for (int flat = 0; flat < T.total_size(); ++flat) {
        if (bk.is_zero_alg(T.c[flat])) continue;
        auto idx = T.unflatten(flat);
        int g = bk.grade_id();
        for (int r = 0; r < s; ++r) g = bk.grade_mul(g, T.slot_grade(r, idx[r]));
        const auto combo = bk.wedge_basis(p, idx[s], q, idx[s + 1]);
        for (const auto& [a, k] : combo) {
            std::vector<int> odx(idx.begin(), idx.begin() + s);
            odx.push_back(k);
            odx.insert(odx.end(), idx.begin() + s + 2, idx.end());
            int oflat = out.flatten(odx);
            out.c[oflat] =
                bk.add(out.c[oflat], bk.mul(T.c[flat], bk.apply_grade(g, a)));
        }
    }
    return out;
}

// Reinterprets a module slot whose basis is the one-form basis as a form slot
// (used to wedge connection outputs, e.g. for torsion), and conversely.
template <class B>
Tensor<B> mod_to_form(const Tensor<B>& T, int s, int deg = 1) {
    Tensor<B> out = T;
    out.slots[s] = Slot::form(deg);
    return out;
}
template <class B>
Tensor<B> form_to_mod(const Tensor<B>& T, int s, std::shared_ptr<const Module> m) {
    Tensor<B> out = T;
    out.slots[s] = Slot::module(std::move(m));
    return out;
}

// d applied to a tensor whose leading slot is a form: d(c w (x) rest) =
// (dc ^ w) (x) rest + c (dw) (x) rest.
template <class B>
Tensor<B> d_form_tensor(const Tensor<B>& T) {
    const B& bk = *T.bk;
    const int p = T.slots[0].form_deg;
    std::vector<Slot> out_slots = T.slots;
    out_slots[0] = Slot::form(p + 1);
    Tensor<B> out = Tensor<B>::zero(bk, std::move(out_slots));
    if (p + 1 > bk.top()) return out;

    for (int flat = 0; flat < T.total_size(); ++flat) {
        if (bk.is_zero_alg(T.c[flat])) continue;
        auto idx = T.unflatten(flat);
        const int w = idx[0];
        auto dc = bk.d_alg(T.c[flat]);
        for (int a = 0; a < bk.dim_form(1); ++a) {
            if (bk.is_zero_alg(dc[a])) continue;
            const auto combo = bk.wedge_basis(1, a, p, w);
            for (const auto& [q, k] : combo) {
                auto odx = idx;
                odx[0] = k;
                int oflat = out.flatten(odx);
                out.c[oflat] = bk.add(out.c[oflat], bk.mul(dc[a], q));
            }
        }
        const auto dcombo = bk.d_basis(p, w);
        for (const auto& [a, k] : dcombo) {
            auto odx = idx;
            odx[0] = k;
            int oflat = out.flatten(odx);
            out.c[oflat] = bk.add(out.c[oflat], bk.mul(T.c[flat], a));
        }
    }
    return out;
}

// Tensor product, coefficients of the right factor migrating across the left.
template <class B>
Tensor<B> tensor_prod(const Tensor<B>& X, const Tensor<B>& Y) {
    const B& bk = *X.bk;
    std::vector<Slot> out_slots = X.slots;
    out_slots.insert(out_slots.end(), Y.slots.begin(), Y.slots.end());
    Tensor<B> out = Tensor<B>::zero(bk, std::move(out_slots));
    for (int xf = 0; xf < X.total_size(); ++xf) {
        if (bk.is_zero_alg(X.c[xf])) continue;
        auto xdx = X.unflatten(xf);
        int g = bk.grade_id();
        for (std::size_t s = 0; s < X.slots.size(); ++s)
            g = bk.grade_mul(g, X.slot_grade(static_cast<int>(s), xdx[s]));
        for (int yf = 0; yf < Y.total_size(); ++yf) {
            if (bk.is_zero_alg(Y.c[yf])) continue;
            auto ydx = Y.unflatten(yf);
            std::vector<int> odx = xdx;
            odx.insert(odx.end(), ydx.begin(), ydx.end());
            int oflat = out.flatten(odx);
            out.c[oflat] =
                bk.add(out.c[oflat], bk.mul(X.c[xf], bk.apply_grade(g, Y.c[yf])));
        }
    }
    return out;
}

// Combines two adjacent module slots into their tensor-product module.
template <class B>
Tensor<B> flatten_mods(const Tensor<B>& T, int s, std::shared_ptr<const Module> prod) {
    const B& bk = *T.bk;
    std::vector<Slot> out_slots(T.slots.begin(), T.slots.begin() + s);
    out_slots.push_back(Slot::module(std::move(prod)));
    out_slots.insert(out_slots.end(), T.slots.begin() + s + 2, T.slots.end());
    Tensor<B> out = Tensor<B>::zero(bk, std::move(out_slots));
    for (int flat = 0; flat < T.total_size(); ++flat) {
        if (bk.is_zero_alg(T.c[flat])) continue;
        auto idx = T.unflatten(flat);
        std::vector<int> odx(idx.begin(), idx.begin() + s);
        odx.push_back(idx[s] * T.slot_dim(s + 1) + idx[s + 1]);
        odx.insert(odx.end(), idx.begin() + s + 2, idx.end());
        out.c[out.flatten(odx)] = T.c[flat];
    }
    return out;
}

// Splits a product-module slot back into two factors.
template <class B>
Tensor<B> split_mod(const Tensor<B>& T, int s, std::shared_ptr<const Module> E,
                    std::shared_ptr<const Module> F) {
    const B& bk = *T.bk;
    std::vector<Slot> out_slots(T.slots.begin(), T.slots.begin() + s);
    out_slots.push_back(Slot::module(E));
    out_slots.push_back(Slot::module(F));
    out_slots.insert(out_slots.end(), T.slots.begin() + s + 1, T.slots.end());
    Tensor<B> out = Tensor<B>::zero(bk, std::move(out_slots));
    const int fr = F->rank;
    for (int flat = 0; flat < T.total_size(); ++flat) {
        if (bk.is_zero_alg(T.c[flat])) continue;
        auto idx = T.unflatten(flat);
        std::vector<int> odx(idx.begin(), idx.begin() + s);
        odx.push_back(idx[s] / fr);
        odx.push_back(idx[s] % fr);
        odx.insert(odx.end(), idx.begin() + s + 1, idx.end());
        out.c[out.flatten(odx)] = T.c[flat];
    }
    return out;
}

}  // namespace ncg
