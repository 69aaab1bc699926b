#pragma once

#include "contor/rcf.hpp"

#include <map>
#include <vector>

namespace contor {

// A linear endomorphism over Q, one per homology degree.
using LinearEndo = QMat;

// Restriction of A to its eventual image im(A^dim): the largest subspace on
// which A acts invertibly. Returned in the coordinates of a column basis of
// A^dim; possibly 0 x 0.
inline LinearEndo invertible_part(const LinearEndo& A) {
    if (A.rows != A.cols) throw std::invalid_argument("invertible_part of a non-square matrix");
    const std::size_t n = A.rows;
    if (n == 0) return A;
    QMat power = QMat::identity(n);
    for (std::size_t k = 0; k < n; ++k) power = power * A;

    QMat red = power;
    std::vector<std::size_t> pivots = rref(red);
    const std::size_t r = pivots.size();
    QMat basis(n, r);  // chosen columns of A^n
    for (std::size_t j = 0; j < r; ++j)
        for (std::size_t i = 0; i < n; ++i) basis.a[i][j] = power.a[i][pivots[j]];

    // solve basis * M = A * basis; the eventual image is A-invariant
    QMat rhs = A * basis;
    QMat aug(n, r + r);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < r; ++j) aug.a[i][j] = basis.a[i][j];
        for (std::size_t j = 0; j < r; ++j) aug.a[i][r + j] = rhs.a[i][j];
    }
    rref(aug);
    LinearEndo M(r, r);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < r; ++j) M.a[i][j] = aug.a[i][r + j];
    // consistency: rows beyond the basis rank must have vanished
    for (std::size_t i = r; i < n; ++i)
        for (std::size_t j = 0; j < r; ++j)
            if (aug.a[i][r + j] != 0)
                throw std::logic_error("eventual image is not invariant");
    if (r && det_q(M) == 0) throw std::logic_error("restriction to the eventual image is singular");
    return M;
}

// Linear shift equivalence over Q: invertible parts are similar.
inline bool shift_equivalent(const LinearEndo& A, const LinearEndo& B) {
    return rational_canonical_form(invertible_part(A)) ==
           rational_canonical_form(invertible_part(B));
}

// Homological index data: one matrix per degree; missing degrees are 0 x 0.
using GradedEndo = std::map<int, LinearEndo>;

struct DegreeVerdict {
    int degree = 0;
    bool equivalent = true;
};

struct ShiftComparison {
    bool equivalent = true;
    std::vector<DegreeVerdict> degrees;
};

inline ShiftComparison compare_homological_indices(const GradedEndo& a, const GradedEndo& b) {
    ShiftComparison out;
    std::map<int, bool> seen;
    for (const auto& [d, m] : a) seen[d] = true;
    for (const auto& [d, m] : b) seen[d] = true;
    for (const auto& [d, unused] : seen) {
        LinearEndo ma = a.count(d) ? a.at(d) : LinearEndo(0, 0);
        LinearEndo mb = b.count(d) ? b.at(d) : LinearEndo(0, 0);
        DegreeVerdict v;
        v.degree = d;
        v.equivalent = shift_equivalent(ma, mb);
        out.equivalent = out.equivalent && v.equivalent;
        out.degrees.push_back(v);
    }
    return out;
}

}  // namespace contor
