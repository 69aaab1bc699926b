#pragma once

#include "contor/cubical.hpp"
#include "contor/smith.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace contor {

// Finitely generated abelian group: free rank plus torsion coefficients in a
// divisibility chain (each entry >= 2 and dividing the next).
struct HomologyGroup {
    long betti = 0;
    std::vector<Int> torsion;

    bool trivial() const { return betti == 0 && torsion.empty(); }
    bool operator==(const HomologyGroup& o) const = default;
    auto operator<=>(const HomologyGroup& o) const = default;

    static HomologyGroup free(long rank) { return HomologyGroup{rank, {}}; }

    std::string str() const {
        if (trivial()) return "0";
        std::ostringstream os;
        bool first = true;
        if (betti > 0) {
            os << "Z";
            if (betti > 1) os << "^" << betti;
            first = false;
        }
        for (const auto& t : torsion) {
            if (!first) os << " + ";
            os << "Z/" << t.str();
            first = false;
        }
        return os.str();
    }
};

// GAP-convention abelian invariants: one 0 per free factor, then the torsion
// split into prime powers, ascending.
inline std::vector<Int> gap_invariants(const HomologyGroup& g) {
    std::vector<Int> out(static_cast<std::size_t>(g.betti), Int(0));
    std::vector<Int> powers;
    for (Int t : g.torsion) {
        for (Int p(2); p * p <= t; ++p) {
            if (t % p != 0) continue;
            Int pk(1);
            while (t % p == 0) {
                pk *= p;
                t /= p;
            }
            powers.push_back(pk);
        }
        if (t > 1) powers.push_back(t);
    }
    std::sort(powers.begin(), powers.end());
    out.insert(out.end(), powers.begin(), powers.end());
    return out;
}

// Abelian group presented by an integer relation matrix acting on Z^g
// (columns are relations): coker = Z^g / im(rel).
inline HomologyGroup cokernel_group(const SparseIntMat& rel) {
    SmithResult s = smith_normal_form(rel, /*with_transforms=*/false);
    HomologyGroup g;
    g.betti = static_cast<long>(rel.rows() - s.rank);
    for (const auto& d : s.diag)
        if (d >= 2) g.torsion.push_back(d);
    return g;
}

// H_n = ker d_n / im d_{n+1} via Smith normal form.
inline std::vector<HomologyGroup> homology(const ChainComplex& c) {
    if (!c.boundary_squares_to_zero())
        throw std::invalid_argument("boundary does not square to zero");
    int top = c.top_degree();
    std::vector<HomologyGroup> out(static_cast<std::size_t>(top) + 1);
    std::vector<std::size_t> rank(static_cast<std::size_t>(top) + 2, 0);
    std::vector<std::vector<Int>> divs(static_cast<std::size_t>(top) + 2);
    for (int n = 1; n <= top; ++n) {
        SmithResult s = smith_normal_form(c.boundary(n), /*with_transforms=*/false);
        rank[static_cast<std::size_t>(n)] = s.rank;
        divs[static_cast<std::size_t>(n)] = s.diag;
    }
    for (int n = 0; n <= top; ++n) {
        HomologyGroup g;
        g.betti = static_cast<long>(c.dim(n)) - static_cast<long>(rank[static_cast<std::size_t>(n)]) -
                  static_cast<long>(rank[static_cast<std::size_t>(n) + 1]);
        for (const auto& d : divs[static_cast<std::size_t>(n) + 1])
            if (d >= 2) g.torsion.push_back(d);
        out[static_cast<std::size_t>(n)] = std::move(g);
    }
    while (out.size() > 1 && out.back().trivial()) out.pop_back();
    return out;
}

inline bool homology_equal(const std::vector<HomologyGroup>& a,
                           const std::vector<HomologyGroup>& b) {
    std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        HomologyGroup ga = i < a.size() ? a[i] : HomologyGroup{};
        HomologyGroup gb = i < b.size() ? b[i] : HomologyGroup{};
        if (!(ga == gb)) return false;
    }
    return true;
}

// Generators of H_n and coordinates in the quotient, derived from Smith
// transforms so that induced maps come out in a reproducible basis.
struct HomologyBasis {
    std::vector<std::vector<Int>> kernel;      // columns: saturated basis of ker d_n
    DenseInt u_quot;                           // change of basis on kernel coordinates
    std::vector<Int> moduli;                   // invariant factors of im d_{n+1} inside the kernel
    std::size_t torsion_count = 0;             // leading coordinates with modulus >= 2
    std::size_t free_count = 0;                // trailing free coordinates
    std::vector<std::vector<Int>> free_cycles; // chain-level representatives of free generators
};

namespace detail {

inline HomologyBasis homology_basis(const ChainComplex& c, int n) {
    HomologyBasis hb;
    if (n < 0 || n > c.top_degree()) {
        hb.u_quot = DenseInt{};
        return hb;
    }
    const SparseIntMat& dn = c.boundary(n);
    hb.kernel = kernel_basis(dn);
    const std::size_t k = hb.kernel.size();

    // express im d_{n+1} in kernel coordinates
    SparseIntMat K(c.dim(n), k);
    for (std::size_t j = 0; j < k; ++j)
        for (std::size_t i = 0; i < c.dim(n); ++i)
            if (hb.kernel[j][i] != 0) K.set(i, j, hb.kernel[j][i]);
    SmithResult ks = smith_normal_form(K);

    std::size_t next_cols = (n + 1 <= c.top_degree()) ? c.dim(n + 1) : 0;
    SparseIntMat X(k, next_cols);
    if (next_cols) {
        const SparseIntMat& dn1 = c.boundary(n + 1);
        for (std::size_t j = 0; j < next_cols; ++j) {
            std::vector<Int> col(c.dim(n), Int(0));
            for (const auto& [i, v] : dn1.column(j)) col[i] = v;
            auto sol = solve_integer(ks, col);
            if (!sol) throw std::logic_error("boundary image not inside kernel lattice");
            for (std::size_t i = 0; i < k; ++i)
                if ((*sol)[i] != 0) X.set(i, j, (*sol)[i]);
        }
    }
    SmithResult xs = smith_normal_form(X);
    hb.u_quot = std::move(xs.U);
    hb.moduli.assign(k, Int(0));
    for (std::size_t i = 0; i < xs.rank; ++i) hb.moduli[i] = xs.diag[i];

    // quotient coordinates: modulus 1 kills the coordinate, >= 2 is torsion,
    // 0 is free
    for (std::size_t i = 0; i < k; ++i) {
        if (hb.moduli[i] >= 2) ++hb.torsion_count;
        if (hb.moduli[i] == 0) ++hb.free_count;
    }

    // chain representatives of the free generators: rows of u_quot^{-1}?
    // Using U X V = D, the new kernel basis is K * U^{-1}; we get U^{-1}
    // by solving. Cheaper: generators in quotient coordinates are unit
    // vectors; map them back through the kernel with V of the *kernel*
    // coordinate change. We only need representatives, so solve
    // u_quot * w = e_i exactly over Z.
    SparseIntMat uq(k, k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j)
            if (hb.u_quot[i][j] != 0) uq.set(i, j, hb.u_quot[i][j]);
    SmithResult us = smith_normal_form(uq);
    for (std::size_t i = 0; i < k; ++i) {
        if (hb.moduli[i] != 0) continue;
        std::vector<Int> e(k, Int(0));
        e[i] = 1;
        auto w = solve_integer(us, e);
        if (!w) throw std::logic_error("unimodular solve failed");
        std::vector<Int> rep(c.dim(n), Int(0));
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t r = 0; r < c.dim(n); ++r) rep[r] += hb.kernel[j][r] * (*w)[j];
        hb.free_cycles.push_back(std::move(rep));
    }
    return hb;
}

}  // namespace detail

// Matrix of the induced map on H_n. Free part in the SNF-derived basis;
// torsion part reported separately with its moduli.
struct InducedMap {
    DenseInt free_part;                 // free x free
    DenseInt torsion_part;              // torsion x torsion (entries mod moduli)
    std::vector<Int> torsion_moduli;    // destination moduli
};

inline InducedMap induced_map_on_homology(const ChainMap& f, int n) {
    validate_chain_map(f, "induced_map_on_homology");
    HomologyBasis src = detail::homology_basis(*f.src, n);
    HomologyBasis dst = detail::homology_basis(*f.dst, n);

    // helper: homology coordinates of a cycle in the destination
    SparseIntMat Kd(f.dst->dim(n), dst.kernel.size());
    for (std::size_t j = 0; j < dst.kernel.size(); ++j)
        for (std::size_t i = 0; i < f.dst->dim(n); ++i)
            if (dst.kernel[j][i] != 0) Kd.set(i, j, dst.kernel[j][i]);
    SmithResult kd = smith_normal_form(Kd);

    auto quot_coords = [&](const std::vector<Int>& cycle) {
        auto y = solve_integer(kd, cycle);
        if (!y) throw std::logic_error("image of a cycle is not a cycle");
        std::vector<Int> q(dst.kernel.size(), Int(0));
        for (std::size_t i = 0; i < dst.kernel.size(); ++i)
            for (std::size_t j = 0; j < dst.kernel.size(); ++j)
                if (dst.u_quot[i][j] != 0 && (*y)[j] != 0) q[i] += dst.u_quot[i][j] * (*y)[j];
        return q;
    };

    InducedMap out;
    out.free_part.assign(dst.free_count, std::vector<Int>(src.free_count, Int(0)));
    for (std::size_t gj = 0; gj < src.free_count; ++gj) {
        std::vector<Int> img = f.at(n).apply(src.free_cycles[gj]);
        std::vector<Int> q = quot_coords(img);
        std::size_t gi = 0;
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (dst.moduli[i] != 0) continue;
            out.free_part[gi][gj] = q[i];
            ++gi;
        }
    }

    // torsion generators of the source: coordinates with modulus >= 2
    std::vector<std::size_t> src_tor, dst_tor;
    for (std::size_t i = 0; i < src.moduli.size(); ++i)
        if (src.moduli[i] >= 2) src_tor.push_back(i);
    for (std::size_t i = 0; i < dst.moduli.size(); ++i)
        if (dst.moduli[i] >= 2) dst_tor.push_back(i);
    for (std::size_t i : dst_tor) out.torsion_moduli.push_back(dst.moduli[i]);
    out.torsion_part.assign(dst_tor.size(), std::vector<Int>(src_tor.size(), Int(0)));
    if (!src_tor.empty()) {
        // representatives of torsion generators, same construction as free ones
        SparseIntMat uq(src.moduli.size(), src.moduli.size());
        for (std::size_t i = 0; i < src.moduli.size(); ++i)
            for (std::size_t j = 0; j < src.moduli.size(); ++j)
                if (src.u_quot[i][j] != 0) uq.set(i, j, src.u_quot[i][j]);
        SmithResult us = smith_normal_form(uq);
        for (std::size_t tj = 0; tj < src_tor.size(); ++tj) {
            std::vector<Int> e(src.moduli.size(), Int(0));
            e[src_tor[tj]] = 1;
            auto w = solve_integer(us, e);
            if (!w) throw std::logic_error("unimodular solve failed");
            std::vector<Int> rep(f.src->dim(n), Int(0));
            for (std::size_t j = 0; j < src.moduli.size(); ++j)
                for (std::size_t r = 0; r < f.src->dim(n); ++r)
                    rep[r] += src.kernel[j][r] * (*w)[j];
            std::vector<Int> q = quot_coords(f.at(n).apply(rep));
            for (std::size_t ti = 0; ti < dst_tor.size(); ++ti) {
                Int v = q[dst_tor[ti]] % dst.moduli[dst_tor[ti]];
                if (v < 0) v += dst.moduli[dst_tor[ti]];
                out.torsion_part[ti][tj] = v;
            }
        }
    }
    return out;
}

}  // namespace contor
