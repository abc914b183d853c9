// Dense exact matrices over any of the library's scalar types (rationals,
// number-field elements, rational functions), with unique reduced row echelon
// form, kernel bases, linear solving, and a fraction-free determinant for
// polynomial matrices.
#pragma once

#include "ncg/ratfunc.hpp"

#include <functional>
#include <vector>

namespace ncg {

template <class K>
struct Mat {
    int rows = 0, cols = 0;
    std::vector<K> a;

    Mat() = default;
    Mat(int r, int c, const K& fill) : rows(r), cols(c), a(r * c, fill) {}

    K& at(int i, int j) { return a[i * cols + j]; }
    const K& at(int i, int j) const { return a[i * cols + j]; }

    static Mat zero_like_proto(int r, int c, const K& proto) {
        return Mat(r, c, zero_like(proto));
    }
    static Mat identity(int n, const K& proto) {
        Mat m(n, n, zero_like(proto));
        for (int i = 0; i < n; ++i) m.at(i, i) = one_like(proto);
        return m;
    }

    friend Mat operator*(const Mat& x, const Mat& y) {
        Mat r(x.rows, y.cols, zero_like(x.a.empty() ? y.a[0] : x.a[0]));
        for (int i = 0; i < x.rows; ++i)
            for (int k = 0; k < x.cols; ++k) {
                if (is_zero(x.at(i, k))) continue;
                for (int j = 0; j < y.cols; ++j)
                    r.at(i, j) = r.at(i, j) + x.at(i, k) * y.at(k, j);
            }
        return r;
    }
};

// In-place reduced row echelon form; returns pivot column indices.
// The RREF is unique, so downstream canonical bases are reproducible.
template <class K>
std::vector<int> rref(Mat<K>& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int p = -1;
        for (int i = row; i < m.rows; ++i) {
            if (!is_zero(m.at(i, col))) { p = i; break; }
        }
        if (p < 0) continue;
        if (p != row)
            for (int j = 0; j < m.cols; ++j) std::swap(m.at(p, j), m.at(row, j));
        K piv_inv = inv(m.at(row, col));
        for (int j = col; j < m.cols; ++j) m.at(row, j) = m.at(row, j) * piv_inv;
        for (int i = 0; i < m.rows; ++i) {
            if (i == row || is_zero(m.at(i, col))) continue;
            K f = m.at(i, col);
            for (int j = col; j < m.cols; ++j)
                m.at(i, j) = m.at(i, j) - f * m.at(row, j);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

template <class K>
int rank(Mat<K> m) {
    return static_cast<int>(rref(m).size());
}

// Basis of the right kernel {x : m x = 0}, one column vector per basis element.
template <class K>
std::vector<std::vector<K>> kernel(Mat<K> m, const K& proto) {
    std::vector<int> piv = rref(m);
    std::vector<bool> is_piv(m.cols, false);
    for (int c : piv) is_piv[c] = true;
    std::vector<std::vector<K>> basis;
    for (int j = 0; j < m.cols; ++j) {
        if (is_piv[j]) continue;
        std::vector<K> v(m.cols, zero_like(proto));
        v[j] = one_like(proto);
        for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = -(m.at(r, j) * one_like(proto));
        basis.push_back(std::move(v));
    }
    return basis;
}

// Solves m x = b exactly; nullopt when inconsistent.  When the solution is
// not unique, free variables are set to zero (deterministically).
template <class K>
std::optional<std::vector<K>> solve(Mat<K> m, std::vector<K> b, const K& proto) {
    int n = m.cols;
    Mat<K> aug(m.rows, n + 1, zero_like(proto));
    for (int i = 0; i < m.rows; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n) = b[i];
    }
    std::vector<int> piv = rref(aug);
    if (!piv.empty() && piv.back() == n) return std::nullopt;
    std::vector<K> x(n, zero_like(proto));
    for (std::size_t r = 0; r < piv.size(); ++r) x[piv[r]] = aug.at(r, n);
    return x;
}

// Fraction-free determinant (Bareiss); K must support divexact.
inline MPoly bareiss_det(Mat<MPoly> m) {
    if (m.rows != m.cols) throw std::invalid_argument("bareiss: square matrix required");
    const int n = m.rows;
    if (n == 0) throw std::invalid_argument("bareiss: empty matrix");
    auto ring = m.at(0, 0).ring();
    MPoly prev = MPoly::constant(ring, Rat(1));
    int sign = 1;
    for (int k = 0; k < n - 1; ++k) {
        if (m.at(k, k).is_zero()) {
            int p = -1;
            for (int i = k + 1; i < n; ++i)
                if (!m.at(i, k).is_zero()) { p = i; break; }
            if (p < 0) return MPoly::zero(ring);
            for (int j = 0; j < n; ++j) std::swap(m.at(p, j), m.at(k, j));
            sign = -sign;
        }
        for (int i = k + 1; i < n; ++i) {
            for (int j = k + 1; j < n; ++j) {
                MPoly t = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                m.at(i, j) = divexact(t, prev);
            }
            m.at(i, k) = MPoly::zero(ring);
        }
        prev = m.at(k, k);
    }
    MPoly det = m.at(n - 1, n - 1);
    return sign < 0 ? -det : det;
}

}  // namespace ncg
