#pragma once

#include "contor/matrix.hpp"

#include <optional>
#include <stdexcept>
#include <vector>

namespace contor {

// Smith normal form U*A*V = D with U, V unimodular and D diagonal with a
// divisibility chain d_i | d_{i+1}, d_i >= 0. Pivots pick the entry of
// minimal absolute value to limit coefficient growth.
struct SmithResult {
    DenseInt U, D, V;
    std::vector<Int> diag;   // nonzero invariant factors, in order
    std::size_t rank = 0;
    bool with_transforms = true;
};

namespace detail {

inline void row_sub(DenseInt& m, std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    auto& d = m[dst];
    const auto& s = m[src];
    for (std::size_t j = 0; j < d.size(); ++j) d[j] -= q * s[j];
}
inline void col_sub(DenseInt& m, std::size_t dst, std::size_t src, const Int& q) {
    if (q == 0) return;
    for (auto& row : m) row[dst] -= q * row[src];
}
inline void col_swap(DenseInt& m, std::size_t a, std::size_t b) {
    for (auto& row : m) std::swap(row[a], row[b]);
}

}  // namespace detail

inline SmithResult smith_normal_form_shaped(DenseInt A, std::size_t m, std::size_t n,
                                            bool with_transforms = true) {
    if (A.size() != m || (m && A[0].size() != n))
        throw std::invalid_argument("smith shape mismatch");
    SmithResult res;
    res.with_transforms = with_transforms;
    if (with_transforms) {
        res.U = SparseIntMat::identity(m).dense();
        res.V = SparseIntMat::identity(n).dense();
    }
    const DenseInt original = with_transforms ? A : DenseInt{};

    const std::size_t bound = std::min(m, n);
    std::size_t t = 0;
    for (; t < bound; ++t) {
        // locate minimal nonzero |entry| in the lower-right block
        std::size_t pi = t, pj = t;
        bool found = false;
        Int best;
        for (std::size_t i = t; i < m; ++i)
            for (std::size_t j = t; j < n; ++j) {
                if (A[i][j] == 0) continue;
                Int a = int_abs(A[i][j]);
                if (!found || a < best) {
                    best = a;
                    pi = i;
                    pj = j;
                    found = true;
                }
            }
        if (!found) break;

        while (true) {
            std::swap(A[pi], A[t]);
            if (with_transforms) std::swap(res.U[pi], res.U[t]);
            detail::col_swap(A, pj, t);
            if (with_transforms) detail::col_swap(res.V, pj, t);

            bool again = false;
            for (std::size_t i = t + 1; i < m && !again; ++i) {
                if (A[i][t] == 0) continue;
                Int q = A[i][t] / A[t][t];
                detail::row_sub(A, i, t, q);
                if (with_transforms) detail::row_sub(res.U, i, t, q);
                if (A[i][t] != 0) again = true;  // remainder smaller than pivot
            }
            if (!again) {
                for (std::size_t j = t + 1; j < n && !again; ++j) {
                    if (A[t][j] == 0) continue;
                    Int q = A[t][j] / A[t][t];
                    detail::col_sub(A, j, t, q);
                    if (with_transforms) detail::col_sub(res.V, j, t, q);
                    if (A[t][j] != 0) again = true;
                }
            }
            if (!again) {
                // pivot must divide the remaining block for the chain property
                bool fixed = true;
                for (std::size_t i = t + 1; i < m && fixed; ++i)
                    for (std::size_t j = t + 1; j < n && fixed; ++j)
                        if (A[i][j] % A[t][t] != 0) {
                            detail::row_sub(A, t, i, Int(-1));  // add row i to row t
                            if (with_transforms) detail::row_sub(res.U, t, i, Int(-1));
                            fixed = false;
                        }
                if (fixed) break;
                again = true;
            }
            // re-pick the pivot inside the block
            pi = t;
            pj = t;
            bool f2 = false;
            Int b2;
            for (std::size_t i = t; i < m; ++i)
                for (std::size_t j = t; j < n; ++j) {
                    if (A[i][j] == 0) continue;
                    Int a = int_abs(A[i][j]);
                    if (!f2 || a < b2) {
                        b2 = a;
                        pi = i;
                        pj = j;
                        f2 = true;
                    }
                }
        }

        if (A[t][t] < 0) {
            for (auto& v : A[t]) v = -v;
            if (with_transforms)
                for (auto& v : res.U[t]) v = -v;
        }
    }

    res.rank = t;
    res.D = std::move(A);
    for (std::size_t i = 0; i < res.rank; ++i) res.diag.push_back(res.D[i][i]);

    if (with_transforms) {
        // exact verification of the decomposition
        auto shaped = [](const DenseInt& d, std::size_t r, std::size_t c) {
            SparseIntMat s(r, c);
            for (std::size_t i = 0; i < r; ++i)
                for (std::size_t j = 0; j < c; ++j)
                    if (d[i][j] != 0) s.set(i, j, d[i][j]);
            return s;
        };
        SparseIntMat u = shaped(res.U, m, m);
        SparseIntMat v = shaped(res.V, n, n);
        SparseIntMat a = shaped(original, m, n);
        SparseIntMat d = shaped(res.D, m, n);
        if (!((u * a) * v == d)) throw std::logic_error("smith decomposition failed verification");
    }
    return res;
}

inline SmithResult smith_normal_form(DenseInt A, bool with_transforms = true) {
    const std::size_t m = A.size();
    const std::size_t n = m ? A[0].size() : 0;
    return smith_normal_form_shaped(std::move(A), m, n, with_transforms);
}

inline SmithResult smith_normal_form(const SparseIntMat& A, bool with_transforms = true) {
    DenseInt d(A.rows(), std::vector<Int>(A.cols(), Int(0)));
    for (std::size_t j = 0; j < A.cols(); ++j)
        for (const auto& [i, v] : A.column(j)) d[i][j] = v;
    return smith_normal_form_shaped(std::move(d), A.rows(), A.cols(), with_transforms);
}

// Fraction-free determinant (Bareiss).
inline Int bareiss_det(DenseInt a) {
    const std::size_t n = a.size();
    if (n == 0) return Int(1);
    if (a[0].size() != n) throw std::invalid_argument("determinant of non-square matrix");
    Int sign(1), prev(1);
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && a[p][k] == 0) ++p;
            if (p == n) return Int(0);
            std::swap(a[p], a[k]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
        prev = a[k][k];
    }
    return sign * a[n - 1][n - 1];
}

inline std::size_t rank_z(const SparseIntMat& A) {
    return smith_normal_form(A, /*with_transforms=*/false).rank;
}

// Integer basis of ker A (columns of V beyond the rank are a basis of the
// saturated kernel lattice).
inline std::vector<std::vector<Int>> kernel_basis(const SparseIntMat& A) {
    SmithResult s = smith_normal_form(A);
    std::vector<std::vector<Int>> basis;
    for (std::size_t j = s.rank; j < A.cols(); ++j) {
        std::vector<Int> v(A.cols());
        for (std::size_t i = 0; i < A.cols(); ++i) v[i] = s.V[i][j];
        basis.push_back(std::move(v));
    }
    return basis;
}

// Particular integer solution of A x = b, if one exists. Deterministic.
inline std::optional<std::vector<Int>> solve_integer(const SmithResult& s,
                                                     const std::vector<Int>& b) {
    const std::size_t m = s.U.size();
    const std::size_t n = s.V.size();
    if (b.size() != m) throw std::invalid_argument("solve shape mismatch");
    std::vector<Int> ub(m, Int(0));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (s.U[i][j] != 0 && b[j] != 0) ub[i] += s.U[i][j] * b[j];
    std::vector<Int> y(n, Int(0));
    for (std::size_t i = 0; i < m; ++i) {
        if (i < s.rank) {
            if (ub[i] % s.diag[i] != 0) return std::nullopt;
            y[i] = ub[i] / s.diag[i];
        } else if (ub[i] != 0) {
            return std::nullopt;
        }
    }
    std::vector<Int> x(n, Int(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (s.V[i][j] != 0 && y[j] != 0) x[i] += s.V[i][j] * y[j];
    return x;
}

inline std::optional<std::vector<Int>> solve_integer(const SparseIntMat& A,
                                                     const std::vector<Int>& b) {
    return solve_integer(smith_normal_form(A), b);
}

}  // namespace contor
