// First-order differential calculus on the function algebra of a finite
// group, generated by a conjugation-stable set of nonidentity elements, and
// its exterior algebra: degree n is built as the quotient of (degree n-1
// tensor generators) by the braiding-fixed relations pushed up from two
// degrees below.  Canonical bases are the non-pivot monomial words of the
// unique reduced row echelon form of the relation matrix, with words ordered
// lexicographically in the declared generator order, so every normal form is
// reproducible.
#pragma once

#include "ncg/finite_group.hpp"
#include "ncg/matrix.hpp"

#include <cstdint>
#include <map>
#include <sstream>

namespace ncg {

using Word = std::vector<uint8_t>;                 // letters index into gens
using WordCombo = std::vector<std::pair<Rat, int>>;  // sorted by index, combined

inline void combo_add(WordCombo& acc, const Rat& c, int idx) {
    if (is_zero(c)) return;
    for (auto& [q, i] : acc) {
        if (i == idx) {
            q += c;
            return;
        }
    }
    acc.emplace_back(c, idx);
}

inline void combo_compact(WordCombo& acc) {
    WordCombo out;
    for (auto& [q, i] : acc)
        if (!is_zero(q)) out.emplace_back(q, i);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.second < b.second; });
    acc = std::move(out);
}

class ExteriorAlgebra {
  public:
    std::shared_ptr<const FiniteGroup> G;
    std::vector<int> gens;      // conjugation-stable generating set, declared order
    int degree_cap = 8;
    bool truncated = false;
    int top = 0;

    // words[n] = canonical basis words of degree n, in lex order
    std::vector<std::vector<Word>> words;
    // append[n][i][a]: normal form of (canonical degree-(n-1) word i) * letter a
    std::vector<std::vector<std::vector<WordCombo>>> append;
    // d_word[n][i]: differential of canonical word i in degree n
    std::vector<std::vector<WordCombo>> d_word;
    // grade[n][i]: group element = ordered product of the word's letters
    std::vector<std::vector<int>> grade;

    int num_gens() const { return static_cast<int>(gens.size()); }
    int dim(int n) const {
        if (n < 0 || n >= static_cast<int>(words.size())) return 0;
        return static_cast<int>(words[n].size());
    }
    int gen_of_letter(int a) const { return gens[a]; }
    int letter_of_gen(int g) const {
        for (int a = 0; a < num_gens(); ++a)
            if (gens[a] == g) return a;
        return -1;
    }

    std::string word_name(int n, int i) const {
        if (n == 0) return "1";
        std::ostringstream os;
        const Word& w = words[n][i];
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (k) os << "^";
            os << "e_" << G->names[gens[w[k]]];
        }
        return os.str();
    }

    // normal form of appending letter a to canonical degree-n word i
    const WordCombo& nf_append(int n, int i, int a) const { return append[n + 1][i][a]; }

    // normal form of an arbitrary word (folds letters through the rewrite maps);
    // empty result means the word dies in the quotient (or exceeds the top degree)
    WordCombo nf_word(const Word& w) const {
        if (w.empty()) return {{Rat(1), 0}};
        if (static_cast<int>(w.size()) > top) return {};
        WordCombo cur = {{Rat(1), static_cast<int>(w[0])}};
        for (std::size_t k = 1; k < w.size(); ++k) {
            WordCombo next;
            for (const auto& [c, i] : cur)
                for (const auto& [c2, j] : nf_append(static_cast<int>(k), i, w[k]))
                    combo_add(next, c * c2, j);
            combo_compact(next);
            cur = std::move(next);
            if (cur.empty()) return cur;
        }
        return cur;
    }

    // wedge of two canonical words, memoized
    const WordCombo& wedge_words(int n, int i, int m, int j) const {
        if (n == 0 || m == 0)
            throw std::invalid_argument("wedge_words: degree-0 handled by scalar multiply");
        auto key = std::array<int, 4>{n, i, m, j};
        auto it = wedge_cache_.find(key);
        if (it != wedge_cache_.end()) return it->second;
        WordCombo cur;
        if (n + m > top) {
            cur = {};
        } else {
            cur = {{Rat(1), i}};
            const Word& wj = words[m][j];
            for (std::size_t k = 0; k < wj.size(); ++k) {
                WordCombo next;
                for (const auto& [c, idx] : cur)
                    for (const auto& [c2, idx2] : nf_append(n + static_cast<int>(k), idx, wj[k]))
                        combo_add(next, c * c2, idx2);
                combo_compact(next);
                cur = std::move(next);
                if (cur.empty()) break;
            }
        }
        return wedge_cache_.emplace(key, std::move(cur)).first->second;
    }

  private:
    mutable std::map<std::array<int, 4>, WordCombo> wedge_cache_;
};

// Validates the generating set and builds the exterior algebra.
inline std::shared_ptr<const ExteriorAlgebra> build_calculus(
    std::shared_ptr<const FiniteGroup> G, std::vector<int> gens, int degree_cap = 8) {
    auto cal = std::make_shared<ExteriorAlgebra>();
    cal->G = G;
    cal->gens = gens;
    cal->degree_cap = degree_cap;
    const int m = static_cast<int>(gens.size());
    if (m == 0) throw std::invalid_argument("calculus: empty generating set");
    for (int a : gens) {
        if (a == G->identity)
            throw std::invalid_argument("calculus: identity cannot generate the calculus");
        for (int g = 0; g < G->n; ++g) {
            int c = G->conj(g, a);
            if (cal->letter_of_gen(c) < 0)
                throw std::invalid_argument("calculus: generating set not conjugation-stable");
        }
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j)
            if (gens[i] == gens[j]) throw std::invalid_argument("calculus: duplicate generator");

    // braiding-fixed relation space in degree 2: kernel of (id - Psi) where
    // Psi(e_a (x) e_b) = e_{aba^-1} (x) e_a
    Mat<Rat> one_minus_psi(m * m, m * m, Rat(0));
    for (int a = 0; a < m; ++a) {
        for (int b = 0; b < m; ++b) {
            int src = a * m + b;
            int ca = cal->letter_of_gen(G->conj(gens[a], gens[b]));
            int dst = ca * m + a;
            one_minus_psi.at(src, src) += 1;
            one_minus_psi.at(dst, src) -= 1;
        }
    }
    auto rel_basis = kernel(one_minus_psi, Rat(0));  // vectors over pair index a*m+b

    // degree 0 and 1
    cal->words.push_back({Word{}});
    cal->words.push_back({});
    for (int a = 0; a < m; ++a) cal->words[1].push_back(Word{static_cast<uint8_t>(a)});
    cal->append.resize(2);
    cal->append[1].assign(1, std::vector<WordCombo>(m));
    for (int a = 0; a < m; ++a) cal->append[1][0][a] = {{Rat(1), a}};

    // higher degrees by iterated quotient
    for (int n = 2;; ++n) {
        const auto& prev = cal->words[n - 1];
        const int ncols = static_cast<int>(prev.size()) * m;
        if (ncols == 0) break;
        const auto& below = cal->words[n - 2];
        const int nrel = static_cast<int>(rel_basis.size());
        const int nrows = static_cast<int>(below.size()) * nrel;
        Mat<Rat> relmat(std::max(nrows, 1), ncols, Rat(0));
        int row = 0;
        for (std::size_t k = 0; k < below.size(); ++k) {
            for (int r = 0; r < nrel; ++r, ++row) {
                for (int a = 0; a < m; ++a) {
                    for (int b = 0; b < m; ++b) {
                        const Rat& coeff = rel_basis[r][a * m + b];
                        if (is_zero(coeff)) continue;
                        // NF(word_k * a) (x) b
                        const WordCombo& nf = cal->nf_append(n - 2, static_cast<int>(k), a);
                        for (const auto& [c, i] : nf)
                            relmat.at(row, i * m + b) += coeff * c;
                    }
                }
            }
        }
        std::vector<int> pivots = nrows ? rref(relmat) : std::vector<int>{};
        std::vector<bool> is_piv(ncols, false);
        for (int c : pivots) is_piv[c] = true;

        // canonical words: non-pivot columns in lex order
        std::vector<Word> wn;
        std::vector<int> col_to_canon(ncols, -1);
        for (int col = 0; col < ncols; ++col) {
            if (is_piv[col]) continue;
            Word w = prev[col / m];
            w.push_back(static_cast<uint8_t>(col % m));
            col_to_canon[col] = static_cast<int>(wn.size());
            wn.push_back(std::move(w));
        }

        // rewrite of every (prev word, letter) pair
        std::vector<std::vector<WordCombo>> app(prev.size(), std::vector<WordCombo>(m));
        for (std::size_t r = 0; r < pivots.size(); ++r) {
            int col = pivots[r];
            WordCombo nf;
            for (int j = 0; j < ncols; ++j) {
                if (j == col || is_piv[j]) continue;
                const Rat& q = relmat.at(static_cast<int>(r), j);
                if (!is_zero(q)) combo_add(nf, -q, col_to_canon[j]);
            }
            combo_compact(nf);
            app[col / m][col % m] = std::move(nf);
        }
        for (int col = 0; col < ncols; ++col)
            if (!is_piv[col]) app[col / m][col % m] = {{Rat(1), col_to_canon[col]}};

        cal->append.push_back(std::move(app));
        cal->words.push_back(std::move(wn));
        if (cal->words[n].empty()) {
            cal->top = n - 1;
            break;
        }
        if (n == degree_cap) {
            cal->top = n;
            cal->truncated = true;
            break;
        }
    }

    // grades
    cal->grade.resize(cal->words.size());
    for (std::size_t n = 0; n < cal->words.size(); ++n) {
        for (const auto& w : cal->words[n]) {
            int g = G->identity;
            for (uint8_t a : w) g = G->mul(g, gens[a]);
            cal->grade[n].push_back(g);
        }
    }

    // differentials of canonical words: d w = theta ^ w - (-1)^|w| w ^ theta
    cal->d_word.resize(cal->words.size());
    for (int n = 0; n <= cal->top; ++n) {
        for (int i = 0; i < cal->dim(n); ++i) {
            WordCombo dw;
            if (n + 1 <= cal->top) {
                for (int a = 0; a < m; ++a) {
                    // theta ^ w: prepend letter a
                    Word w = cal->words[n][i];
                    Word aw;
                    aw.push_back(static_cast<uint8_t>(a));
                    aw.insert(aw.end(), w.begin(), w.end());
                    for (const auto& [c, j] : cal->nf_word(aw)) combo_add(dw, c, j);
                    // -(-1)^n w ^ theta: append letter a
                    if (n == 0) {
                        combo_add(dw, Rat(-1), a);
                    } else {
                        const Rat sign = (n % 2 == 0) ? Rat(-1) : Rat(1);
                        for (const auto& [c, j] : cal->nf_append(n, i, a))
                            combo_add(dw, sign * c, j);
                    }
                }
            }
            combo_compact(dw);
            cal->d_word[n].push_back(std::move(dw));
        }
    }
    return cal;
}

// ---- forms over the function algebra ---------------------------------------

// A degree-n form with coefficients written on the left of each canonical
// basis word; coefficients are functions on the group, i.e. one K value per
// group element.
template <class K>
struct GroupForm {
    const ExteriorAlgebra* cal = nullptr;
    int deg = 0;
    std::vector<std::vector<K>> c;  // [word][group point]

    static GroupForm zero(const ExteriorAlgebra& cal_, int deg_, const K& proto) {
        GroupForm f;
        f.cal = &cal_;
        f.deg = deg_;
        if (int dm = cal_.dim(deg_); dm > 0)
            f.c.assign(dm, std::vector<K>(cal_.G->n, zero_like(proto)));
        return f;
    }
    bool is_zero() const {
        for (const auto& row : c)
            for (const auto& x : row)
                if (!ncg::is_zero(x)) return false;
        return true;
    }
    friend GroupForm operator+(const GroupForm& a, const GroupForm& b) {
        GroupForm r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i)
            for (std::size_t x = 0; x < r.c[i].size(); ++x) r.c[i][x] = r.c[i][x] + b.c[i][x];
        return r;
    }
    friend GroupForm operator-(const GroupForm& a, const GroupForm& b) {
        GroupForm r = a;
        for (std::size_t i = 0; i < r.c.size(); ++i)
            for (std::size_t x = 0; x < r.c[i].size(); ++x) r.c[i][x] = r.c[i][x] - b.c[i][x];
        return r;
    }
    GroupForm operator-() const {
        GroupForm r = *this;
        for (auto& row : r.c)
            for (auto& x : row) x = -x;
        return r;
    }
    GroupForm scaled(const K& s) const {
        GroupForm r = *this;
        for (auto& row : r.c)
            for (auto& x : row) x = x * s;
        return r;
    }
};

// right translation R_g f (x) = f(x g) on coefficient vectors
template <class K>
std::vector<K> right_translate(const FiniteGroup& G, int g, const std::vector<K>& f) {
    std::vector<K> out(f.size(), f[0]);
    for (int x = 0; x < G.n; ++x) out[x] = f[G.mul(x, g)];
    return out;
}

template <class K>
GroupForm<K> wedge(const GroupForm<K>& A, const GroupForm<K>& B) {
    const ExteriorAlgebra& cal = *A.cal;
    const K proto = A.c.empty() ? (B.c.empty() ? K() : B.c[0][0]) : A.c[0][0];
    GroupForm<K> out = GroupForm<K>::zero(cal, A.deg + B.deg, proto);
    if (A.deg + B.deg > cal.top) return out;
    for (int i = 0; i < cal.dim(A.deg); ++i) {
        bool row_zero = true;
        for (const auto& x : A.c[i])
            if (!is_zero(x)) { row_zero = false; break; }
        if (row_zero) continue;
        for (int j = 0; j < cal.dim(B.deg); ++j) {
            // move B's coefficient left across word i: twist by the word grade
            std::vector<K> moved =
                A.deg == 0 ? B.c[j]
                           : right_translate(*cal.G, cal.grade[A.deg][i], B.c[j]);
            const WordCombo* combo = nullptr;
            WordCombo scalar_combo;
            if (A.deg == 0) {
                scalar_combo = {{Rat(1), j}};
                combo = &scalar_combo;
            } else if (B.deg == 0) {
                scalar_combo = {{Rat(1), i}};
                combo = &scalar_combo;
            } else {
                combo = &cal.wedge_words(A.deg, i, B.deg, j);
            }
            for (const auto& [q, k] : *combo) {
                for (int x = 0; x < cal.G->n; ++x) {
                    K t = A.c[i][x] * moved[x];
                    if (!is_zero(t)) out.c[k][x] = out.c[k][x] + t * q;
                }
            }
        }
    }
    return out;
}

// differential of a function (degree-0 coefficient vector)
template <class K>
GroupForm<K> d_function(const ExteriorAlgebra& cal, const std::vector<K>& f) {
    GroupForm<K> out = GroupForm<K>::zero(cal, 1, f[0]);
    for (int a = 0; a < cal.num_gens(); ++a) {
        std::vector<K> rf = right_translate(*cal.G, cal.gens[a], f);
        for (int x = 0; x < cal.G->n; ++x) out.c[a][x] = rf[x] - f[x];
    }
    return out;
}

template <class K>
GroupForm<K> d(const GroupForm<K>& F) {
    const ExteriorAlgebra& cal = *F.cal;
    const K proto = F.c.empty() ? K() : F.c[0][0];
    GroupForm<K> out = GroupForm<K>::zero(cal, F.deg + 1, proto);
    if (F.deg + 1 > cal.top) {
        // still need d of coefficients only when the word part survives; the
        // target space is zero, so the result is zero
        return out;
    }
    for (int i = 0; i < cal.dim(F.deg); ++i) {
        // df ^ w
        for (int a = 0; a < cal.num_gens(); ++a) {
            std::vector<K> rf = right_translate(*cal.G, cal.gens[a], F.c[i]);
            Word aw;
            aw.push_back(static_cast<uint8_t>(a));
            if (F.deg > 0) {
                const Word& w = cal.words[F.deg][i];
                aw.insert(aw.end(), w.begin(), w.end());
            }
            for (const auto& [q, k] : cal.nf_word(aw))
                for (int x = 0; x < cal.G->n; ++x)
                    out.c[k][x] = out.c[k][x] + (rf[x] - F.c[i][x]) * q;
        }
        // f * dw
        if (F.deg > 0) {
            for (const auto& [q, k] : cal.d_word[F.deg][i])
                for (int x = 0; x < cal.G->n; ++x) out.c[k][x] = out.c[k][x] + F.c[i][x] * q;
        }
    }
    return out;
}

// ---- cycles -----------------------------------------------------------------

struct Cycle {
    const ExteriorAlgebra* cal = nullptr;
    int deg = 0;
    std::vector<std::vector<Rat>> val;  // [word][point]

    // integral of a top-degree form
    template <class K>
    K apply(const GroupForm<K>& f, const K& proto) const {
        K acc = zero_like(proto);
        for (std::size_t i = 0; i < val.size(); ++i)
            for (std::size_t x = 0; x < val[i].size(); ++x)
                if (!is_zero(val[i][x])) acc = acc + f.c[i][x] * val[i][x];
        return acc;
    }

    // the standard cycle: sum of the coefficient of each top word over all
    // group points
    static Cycle standard(const ExteriorAlgebra& cal) {
        Cycle c;
        c.cal = &cal;
        c.deg = cal.top;
        c.val.assign(cal.dim(cal.top), std::vector<Rat>(cal.G->n, Rat(1)));
        return c;
    }
};

struct CycleCheck {
    bool ok = true;
    std::string witness;
};

// Exhaustively verifies the defining cycle conditions on basis probes:
// closed forms integrate to the boundary value zero, and the graded symmetry
// holds on every split of the degree.
inline CycleCheck cycle_verify(const ExteriorAlgebra& cal, const Cycle& cyc) {
    CycleCheck res;
    const int n = cyc.deg;
    const Rat proto(0);
    auto delta_form = [&](int deg, int w, int x) {
        GroupForm<Rat> f = GroupForm<Rat>::zero(cal, deg, proto);
        f.c[w][x] = 1;
        return f;
    };
    // integral of d(xi) vanishes
    for (int w = 0; w < cal.dim(n - 1); ++w) {
        for (int x = 0; x < cal.G->n; ++x) {
            Rat v = cyc.apply(d(delta_form(n - 1, w, x)), proto);
            if (!is_zero(v)) {
                res.ok = false;
                res.witness = "d-integral nonzero on " + cal.word_name(n - 1, w) +
                              " at point " + cal.G->names[x];
                return res;
            }
        }
    }
    // graded symmetry on all degree splits
    for (int p = 0; p <= n; ++p) {
        int q = n - p;
        Rat sign = (p * q) % 2 == 0 ? Rat(1) : Rat(-1);
        for (int w1 = 0; w1 < cal.dim(p); ++w1)
            for (int x1 = 0; x1 < cal.G->n; ++x1)
                for (int w2 = 0; w2 < cal.dim(q); ++w2)
                    for (int x2 = 0; x2 < cal.G->n; ++x2) {
                        GroupForm<Rat> a = delta_form(p, w1, x1), b = delta_form(q, w2, x2);
                        Rat lhs = cyc.apply(wedge(a, b), proto);
                        Rat rhs = sign * cyc.apply(wedge(b, a), proto);
                        if (lhs != rhs) {
                            res.ok = false;
                            res.witness = "graded symmetry fails on split " +
                                          std::to_string(p) + "+" + std::to_string(q);
                            return res;
                        }
                    }
    }
    return res;
}

// ---- de Rham cohomology ------------------------------------------------------

// Betti numbers of the complex, computed over the rationals on the
// delta-function basis.
inline std::vector<int> de_rham_betti(const ExteriorAlgebra& cal) {
    const int N = cal.G->n;
    std::vector<int> ranks;  // rank of d_n : Omega^n -> Omega^{n+1}
    for (int n = 0; n <= cal.top; ++n) {
        int rows = cal.dim(n + 1) * N;
        int cols = cal.dim(n) * N;
        if (rows == 0 || cols == 0) {
            ranks.push_back(0);
            continue;
        }
        Mat<Rat> m(rows, cols, Rat(0));
        for (int w = 0; w < cal.dim(n); ++w) {
            for (int x = 0; x < N; ++x) {
                GroupForm<Rat> f = GroupForm<Rat>::zero(cal, n, Rat(0));
                f.c[w][x] = 1;
                GroupForm<Rat> df = d(f);
                int col = w * N + x;
                for (int w2 = 0; w2 < cal.dim(n + 1); ++w2)
                    for (int y = 0; y < N; ++y) m.at(w2 * N + y, col) = df.c[w2][y];
            }
        }
        ranks.push_back(rank(std::move(m)));
    }
    std::vector<int> betti;
    for (int n = 0; n <= cal.top; ++n) {
        int dim_n = cal.dim(n) * N;
        int r_n = ranks[n];
        int r_prev = n > 0 ? ranks[n - 1] : 0;
        betti.push_back(dim_n - r_n - r_prev);
    }
    return betti;
}

}  // namespace ncg
