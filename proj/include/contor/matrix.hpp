#pragma once

#include "contor/rational.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <ostream>
#include <vector>

namespace contor {

using DenseInt = std::vector<std::vector<Int>>;

// Sparse integer matrix, column-major lists of (row, value). Entries within a
// column are sorted by row and never zero.
class SparseIntMat {
public:
    SparseIntMat() = default;
    SparseIntMat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), col_(cols) {}

    static SparseIntMat identity(std::size_t n) {
        SparseIntMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.col_[i].emplace_back(i, Int(1));
        return m;
    }
    static SparseIntMat from_dense(const DenseInt& d) {
        std::size_t r = d.size(), c = r ? d[0].size() : 0;
        SparseIntMat m(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j)
                if (d[i][j] != 0) m.col_[j].emplace_back(i, d[i][j]);
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    const std::vector<std::pair<std::size_t, Int>>& column(std::size_t j) const { return col_[j]; }

    void set(std::size_t i, std::size_t j, Int v) {
        auto& c = col_[j];
        auto it = std::lower_bound(c.begin(), c.end(), i,
                                   [](const auto& e, std::size_t r) { return e.first < r; });
        if (it != c.end() && it->first == i) {
            if (v == 0)
                c.erase(it);
            else
                it->second = std::move(v);
        } else if (v != 0) {
            c.emplace(it, i, std::move(v));
        }
    }
    void add_to(std::size_t i, std::size_t j, const Int& v) {
        if (v == 0) return;
        auto& c = col_[j];
        auto it = std::lower_bound(c.begin(), c.end(), i,
                                   [](const auto& e, std::size_t r) { return e.first < r; });
        if (it != c.end() && it->first == i) {
            it->second += v;
            if (it->second == 0) c.erase(it);
        } else {
            c.emplace(it, i, v);
        }
    }
    Int get(std::size_t i, std::size_t j) const {
        const auto& c = col_[j];
        auto it = std::lower_bound(c.begin(), c.end(), i,
                                   [](const auto& e, std::size_t r) { return e.first < r; });
        if (it != c.end() && it->first == i) return it->second;
        return Int(0);
    }

    bool is_zero() const {
        for (const auto& c : col_)
            if (!c.empty()) return false;
        return true;
    }

    bool operator==(const SparseIntMat& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && col_ == o.col_;
    }

    SparseIntMat operator*(const SparseIntMat& o) const {
        if (cols_ != o.rows_) throw std::invalid_argument("matrix product shape mismatch");
        SparseIntMat out(rows_, o.cols_);
        for (std::size_t j = 0; j < o.cols_; ++j) {
            std::map<std::size_t, Int> acc;
            for (const auto& [k, v] : o.col_[j])
                for (const auto& [i, w] : col_[k]) acc[i] += v * w;
            for (auto& [i, v] : acc)
                if (v != 0) out.col_[j].emplace_back(i, std::move(v));
        }
        return out;
    }
    SparseIntMat operator+(const SparseIntMat& o) const { return combine(o, 1); }
    SparseIntMat operator-(const SparseIntMat& o) const { return combine(o, -1); }
    SparseIntMat operator-() const {
        SparseIntMat out(*this);
        for (auto& c : out.col_)
            for (auto& e : c) e.second = -e.second;
        return out;
    }

    SparseIntMat transpose() const {
        SparseIntMat out(cols_, rows_);
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : col_[j]) out.col_[i].emplace_back(j, v);
        for (auto& c : out.col_)
            std::sort(c.begin(), c.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
        return out;
    }

    std::vector<Int> apply(const std::vector<Int>& x) const {
        if (x.size() != cols_) throw std::invalid_argument("matrix-vector shape mismatch");
        std::vector<Int> out(rows_, Int(0));
        for (std::size_t j = 0; j < cols_; ++j) {
            if (x[j] == 0) continue;
            for (const auto& [i, v] : col_[j]) out[i] += v * x[j];
        }
        return out;
    }

    DenseInt dense() const {
        DenseInt d(rows_, std::vector<Int>(cols_, Int(0)));
        for (std::size_t j = 0; j < cols_; ++j)
            for (const auto& [i, v] : col_[j]) d[i][j] = v;
        return d;
    }

    std::size_t entry_count() const {
        std::size_t n = 0;
        for (const auto& c : col_) n += c.size();
        return n;
    }

    friend std::ostream& operator<<(std::ostream& os, const SparseIntMat& m) {
        auto d = m.dense();
        for (std::size_t i = 0; i < m.rows_; ++i) {
            os << (i ? "\n" : "") << "[";
            for (std::size_t j = 0; j < m.cols_; ++j) os << (j ? " " : "") << d[i][j];
            os << "]";
        }
        return os;
    }

private:
    SparseIntMat combine(const SparseIntMat& o, int s) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix sum shape mismatch");
        SparseIntMat out(rows_, cols_);
        for (std::size_t j = 0; j < cols_; ++j) {
            auto a = col_[j].begin(), ae = col_[j].end();
            auto b = o.col_[j].begin(), be = o.col_[j].end();
            while (a != ae || b != be) {
                if (b == be || (a != ae && a->first < b->first)) {
                    out.col_[j].push_back(*a++);
                } else if (a == ae || b->first < a->first) {
                    out.col_[j].emplace_back(b->first, s * b->second);
                    ++b;
                } else {
                    Int v = a->second + s * b->second;
                    if (v != 0) out.col_[j].emplace_back(a->first, std::move(v));
                    ++a;
                    ++b;
                }
            }
        }
        return out;
    }

    std::size_t rows_ = 0, cols_ = 0;
    std::vector<std::vector<std::pair<std::size_t, Int>>> col_;
};

// Dense rational matrix, used for field-level work (shift equivalence,
// canonical forms).
struct QMat {
    std::size_t rows = 0, cols = 0;
    std::vector<std::vector<Rat>> a;

    QMat() = default;
    QMat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r, std::vector<Rat>(c, Rat(0))) {}
    static QMat identity(std::size_t n) {
        QMat m(n, n);
        for (std::size_t i = 0; i < n; ++i) m.a[i][i] = 1;
        return m;
    }
    static QMat from_int(const DenseInt& d) {
        QMat m(d.size(), d.empty() ? 0 : d[0].size());
        for (std::size_t i = 0; i < m.rows; ++i)
            for (std::size_t j = 0; j < m.cols; ++j) m.a[i][j] = Rat(d[i][j]);
        return m;
    }

    bool operator==(const QMat& o) const = default;

    QMat operator*(const QMat& o) const {
        if (cols != o.rows) throw std::invalid_argument("matrix product shape mismatch");
        QMat out(rows, o.cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t k = 0; k < cols; ++k) {
                if (a[i][k] == 0) continue;
                for (std::size_t j = 0; j < o.cols; ++j) out.a[i][j] += a[i][k] * o.a[k][j];
            }
        return out;
    }
};

// Row-reduces m in place; returns the pivot columns.
inline std::vector<std::size_t> rref(QMat& m) {
    std::vector<std::size_t> pivots;
    std::size_t r = 0;
    for (std::size_t c = 0; c < m.cols && r < m.rows; ++c) {
        std::size_t p = r;
        while (p < m.rows && m.a[p][c] == 0) ++p;
        if (p == m.rows) continue;
        std::swap(m.a[p], m.a[r]);
        Rat inv = m.a[r][c];
        for (std::size_t j = c; j < m.cols; ++j) m.a[r][j] /= inv;
        for (std::size_t i = 0; i < m.rows; ++i) {
            if (i == r || m.a[i][c] == 0) continue;
            Rat f = m.a[i][c];
            for (std::size_t j = c; j < m.cols; ++j) m.a[i][j] -= f * m.a[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

inline std::size_t rank_q(QMat m) { return rref(m).size(); }

inline Rat det_q(QMat m) {
    if (m.rows != m.cols) throw std::invalid_argument("determinant of non-square matrix");
    Rat det(1);
    for (std::size_t c = 0; c < m.cols; ++c) {
        std::size_t p = c;
        while (p < m.rows && m.a[p][c] == 0) ++p;
        if (p == m.rows) return Rat(0);
        if (p != c) {
            std::swap(m.a[p], m.a[c]);
            det = -det;
        }
        det *= m.a[c][c];
        for (std::size_t i = c + 1; i < m.rows; ++i) {
            if (m.a[i][c] == 0) continue;
            Rat f = m.a[i][c] / m.a[c][c];
            for (std::size_t j = c; j < m.cols; ++j) m.a[i][j] -= f * m.a[c][j];
        }
    }
    return det;
}

}  // namespace contor
