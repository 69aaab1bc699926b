#pragma once

// Shared helpers for the test suites: independent oracles (rational-arithmetic
// rank, brute-force enumerations) and deterministic random generators. These
// stay independent of the library code paths they are used to check.

#include "contor/cubical.hpp"
#include "contor/expr.hpp"
#include "contor/homology.hpp"
#include "contor/matrix.hpp"

#include <random>
#include <vector>

namespace testsupport {

using namespace contor;

// Rank over Q by plain Gaussian elimination; oracle for SNF-derived ranks.
inline std::size_t rank_oracle(const DenseInt& m) {
    std::size_t rows = m.size(), cols = rows ? m[0].size() : 0;
    std::vector<std::vector<Rat>> a(rows, std::vector<Rat>(cols));
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < cols; ++j) a[i][j] = Rat(m[i][j]);
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        std::size_t p = rank;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[rank]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || a[i][c] == 0) continue;
            Rat f = a[i][c] / a[rank][c];
            for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[rank][j];
        }
        ++rank;
    }
    return rank;
}

inline std::size_t rank_oracle(const SparseIntMat& m) { return rank_oracle(m.dense()); }

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
    Rat rational(int max_num = 8, int max_den = 6) {
        int num = uniform(-max_num, max_num);
        int den = uniform(1, max_den);
        return Rat(num, den);
    }
    // random rational strictly inside [lo, hi]
    Rat point_in(const Interval& iv) {
        int den = uniform(7, 97);
        int num = uniform(1, den - 1);
        return iv.lo + (iv.hi - iv.lo) * Rat(num, den);
    }
};

inline ExprPtr random_expr(Rng& rng, int dim, int depth) {
    if (depth == 0 || rng.uniform(0, 4) == 0) {
        if (rng.uniform(0, 1) == 0) return ExprNode::variable(rng.uniform(0, dim - 1));
        return ExprNode::constant(rng.rational());
    }
    switch (rng.uniform(0, 4)) {
        case 0:
            return ExprNode::binary(ExprNode::Op::Add, random_expr(rng, dim, depth - 1),
                                    random_expr(rng, dim, depth - 1));
        case 1:
            return ExprNode::binary(ExprNode::Op::Sub, random_expr(rng, dim, depth - 1),
                                    random_expr(rng, dim, depth - 1));
        case 2:
            return ExprNode::binary(ExprNode::Op::Mul, random_expr(rng, dim, depth - 1),
                                    random_expr(rng, dim, depth - 1));
        case 3:
            return ExprNode::neg(random_expr(rng, dim, depth - 1));
        default:
            return ExprNode::pow(random_expr(rng, dim, depth - 1), rng.uniform(0, 3));
    }
}

inline MapExpr random_map(Rng& rng, int dim, int depth, bool with_piecewise = false) {
    std::vector<ExprPtr> comps;
    for (int i = 0; i < dim; ++i) {
        ExprPtr e = random_expr(rng, dim, depth);
        if (with_piecewise && rng.uniform(0, 2) == 0)
            e = ExprNode::ifneg(rng.uniform(0, dim - 1), random_expr(rng, dim, depth - 1), e);
        comps.push_back(std::move(e));
    }
    return MapExpr(dim, std::move(comps));
}

// Random face-closed cubical set: closure of a few random top cells.
inline CubicalSet random_cubical_set(Rng& rng, const GridPtr& grid, int max_tops) {
    std::vector<std::vector<int>> tops;
    int count = rng.uniform(1, max_tops);
    for (int t = 0; t < count; ++t) {
        std::vector<int> idx;
        for (int i = 0; i < grid->dim(); ++i)
            idx.push_back(rng.uniform(0, grid->ncells[static_cast<std::size_t>(i)] - 1));
        tops.push_back(std::move(idx));
    }
    return CubicalSet::from_top_cells(grid, tops);
}

// Random chain self-map: u d + d u + lambda, which commutes with d for any
// degree-(+1) integer block u.
inline ChainMap random_chain_self_map(Rng& rng, const ComplexPtr& c, int lambda_lo = -2,
                                      int lambda_hi = 2) {
    int top = c->top_degree();
    std::vector<SparseIntMat> u(static_cast<std::size_t>(top) + 1);
    for (int n = 0; n < top; ++n) {
        SparseIntMat m(c->dim(n + 1), c->dim(n));
        for (std::size_t j = 0; j < c->dim(n); ++j)
            for (std::size_t i = 0; i < c->dim(n + 1); ++i)
                if (rng.uniform(0, 3) == 0) m.set(i, j, Int(rng.uniform(-2, 2)));
        u[static_cast<std::size_t>(n)] = std::move(m);
    }

    int lambda = rng.uniform(lambda_lo, lambda_hi);
    ChainMap f;
    f.src = c;
    f.dst = c;
    for (int n = 0; n <= top; ++n) {
        SparseIntMat m(c->dim(n), c->dim(n));
        for (std::size_t i = 0; i < c->dim(n); ++i) m.set(i, i, Int(lambda));
        if (n < top) {
            const SparseIntMat& un = u[static_cast<std::size_t>(n)];
            m = m + c->boundary(n + 1) * un;
        }
        if (n > 0) {
            const SparseIntMat& um = u[static_cast<std::size_t>(n - 1)];
            m = m + um * c->boundary(n);
        }
        f.mat.push_back(std::move(m));
    }
    validate_chain_map(f, "random_chain_self_map");
    return f;
}

// Signed permutation of each degree's basis; a chain isomorphism onto the
// conjugated complex.
struct PermutedComplex {
    ComplexPtr complex;
    ChainMap iso;      // original -> permuted
    ChainMap iso_inv;  // permuted -> original
};

inline PermutedComplex permuted_copy(Rng& rng, const ComplexPtr& c) {
    int top = c->top_degree();
    std::vector<SparseIntMat> p(static_cast<std::size_t>(top) + 1);
    std::vector<SparseIntMat> pinv(static_cast<std::size_t>(top) + 1);
    for (int n = 0; n <= top; ++n) {
        std::size_t d = c->dim(n);
        std::vector<std::size_t> perm(d);
        for (std::size_t i = 0; i < d; ++i) perm[i] = i;
        for (std::size_t i = d; i > 1; --i)
            std::swap(perm[i - 1],
                      perm[static_cast<std::size_t>(rng.uniform(0, static_cast<int>(i) - 1))]);
        SparseIntMat m(d, d);
        for (std::size_t i = 0; i < d; ++i) m.set(perm[i], i, Int(rng.uniform(0, 1) ? 1 : -1));
        pinv[static_cast<std::size_t>(n)] = m.transpose();  // signed permutations: inverse = transpose
        p[static_cast<std::size_t>(n)] = std::move(m);
    }
    std::vector<SparseIntMat> bnd(static_cast<std::size_t>(top) + 1);
    bnd[0] = SparseIntMat(0, c->dim(0));
    for (int n = 1; n <= top; ++n)
        bnd[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n - 1)] * c->boundary(n) *
                                           pinv[static_cast<std::size_t>(n)];
    PermutedComplex out;
    out.complex = std::make_shared<const ChainComplex>(make_abstract_complex(std::move(bnd)));
    out.iso.src = c;
    out.iso.dst = out.complex;
    out.iso_inv.src = out.complex;
    out.iso_inv.dst = c;
    for (int n = 0; n <= top; ++n) {
        out.iso.mat.push_back(p[static_cast<std::size_t>(n)]);
        out.iso_inv.mat.push_back(pinv[static_cast<std::size_t>(n)]);
    }
    validate_chain_map(out.iso, "permuted_copy iso");
    validate_chain_map(out.iso_inv, "permuted_copy iso_inv");
    return out;
}

}  // namespace testsupport
