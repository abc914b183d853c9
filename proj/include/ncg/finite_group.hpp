// Finite groups given by explicit multiplication tables, with full table
// validation, plus the two built-in families used across the test corpus:
// the symmetric group on three letters and cyclic groups.
#pragma once

#include "ncg/rational.hpp"

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncg {

struct FiniteGroup {
    int n = 0;
    std::vector<int> table;           // table[a*n+b] = a*b
    std::vector<std::string> names;
    int identity = -1;
    std::vector<int> inverse;

    int mul(int a, int b) const { return table[a * n + b]; }
    int inv(int a) const { return inverse[a]; }
    int conj(int a, int b) const { return mul(mul(a, b), inv(a)); }  // a b a^-1

    int index_of(const std::string& name) const {
        for (int i = 0; i < n; ++i)
            if (names[i] == name) return i;
        return -1;
    }

    static std::shared_ptr<const FiniteGroup> from_table(std::vector<std::string> names,
                                                         std::vector<int> table) {
        auto g = std::make_shared<FiniteGroup>();
        g->n = static_cast<int>(names.size());
        g->names = std::move(names);
        g->table = std::move(table);
        if (static_cast<int>(g->table.size()) != g->n * g->n)
            throw std::invalid_argument("group: table size mismatch");
        for (int v : g->table)
            if (v < 0 || v >= g->n) throw std::invalid_argument("group: table entry out of range");
        // identity
        for (int e = 0; e < g->n; ++e) {
            bool ok = true;
            for (int a = 0; a < g->n && ok; ++a)
                ok = g->mul(e, a) == a && g->mul(a, e) == a;
            if (ok) { g->identity = e; break; }
        }
        if (g->identity < 0) throw std::invalid_argument("group: no identity element");
        // inverses
        g->inverse.assign(g->n, -1);
        for (int a = 0; a < g->n; ++a) {
            for (int b = 0; b < g->n; ++b) {
                if (g->mul(a, b) == g->identity && g->mul(b, a) == g->identity) {
                    g->inverse[a] = b;
                    break;
                }
            }
            if (g->inverse[a] < 0) throw std::invalid_argument("group: missing inverse");
        }
        // associativity
        for (int a = 0; a < g->n; ++a)
            for (int b = 0; b < g->n; ++b)
                for (int c = 0; c < g->n; ++c)
                    if (g->mul(g->mul(a, b), c) != g->mul(a, g->mul(b, c)))
                        throw std::invalid_argument("group: associativity fails");
        return g;
    }

    // Symmetric group on {1,2,3}; product x*y acts as "apply y, then x".
    // Elements: e, the transpositions u=(12), v=(23), w=(13), and the two
    // 3-cycles uv=(123), vu=(132).
    static std::shared_ptr<const FiniteGroup> s3() {
        using Perm = std::array<int, 3>;
        const std::vector<Perm> perms = {
            {0, 1, 2},  // e
            {1, 0, 2},  // u = (12)
            {0, 2, 1},  // v = (23)
            {2, 1, 0},  // w = (13)
            {1, 2, 0},  // uv: checked below
            {2, 0, 1},  // vu
        };
        auto compose = [](const Perm& x, const Perm& y) {  // apply y then x
            Perm r;
            for (int i = 0; i < 3; ++i) r[i] = x[y[i]];
            return r;
        };
        auto find = [&](const Perm& p) {
            for (std::size_t i = 0; i < perms.size(); ++i)
                if (perms[i] == p) return static_cast<int>(i);
            throw std::logic_error("s3: closure failure");
        };
        std::vector<int> table(36);
        for (int a = 0; a < 6; ++a)
            for (int b = 0; b < 6; ++b) table[a * 6 + b] = find(compose(perms[a], perms[b]));
        auto g = from_table({"e", "u", "v", "w", "uv", "vu"}, std::move(table));
        // pin the naming convention: u*v must be the element named "uv"
        if (g->mul(1, 2) != 4 || g->mul(2, 1) != 5)
            throw std::logic_error("s3: naming convention violated");
        return g;
    }

    static std::shared_ptr<const FiniteGroup> cyclic(int m) {
        if (m < 1) throw std::invalid_argument("cyclic: order must be positive");
        std::vector<std::string> names;
        std::vector<int> table(m * m);
        for (int i = 0; i < m; ++i) names.push_back("g" + std::to_string(i));
        for (int a = 0; a < m; ++a)
            for (int b = 0; b < m; ++b) table[a * m + b] = (a + b) % m;
        return from_table(std::move(names), std::move(table));
    }
};

}  // namespace ncg
