#pragma once

#include "contor/carrier.hpp"
#include "contor/dynamics.hpp"
#include "contor/homology.hpp"

#include <map>
#include <string>
#include <tuple>

namespace contor {

// Mapping-torus chain complex: the mapping cone of delta with
// C_n(cone) = C_n(target) + C_{n-1}(source) and
// d(x, y) = (dx + delta(y), -dy).
struct TorusComplex {
    ChainComplex complex;
    std::string kind;  // "cone(id - f)" or "cone(p - q)"
};

namespace detail {

inline ChainComplex mapping_cone(const ComplexPtr& CZ, const ComplexPtr& CX,
                                 const std::vector<SparseIntMat>& delta) {
    int top_x = CX->top_degree();
    int top_z = CZ->top_degree();
    int top = std::max(top_x, top_z + 1);
    auto xdim = [&](int n) { return CX->dim(n); };
    auto zdim = [&](int n) { return CZ->dim(n); };

    std::vector<SparseIntMat> bnd(static_cast<std::size_t>(top) + 1);
    bnd[0] = SparseIntMat(0, xdim(0));
    for (int n = 1; n <= top; ++n) {
        std::size_t rows = xdim(n - 1) + zdim(n - 2 < 0 ? -1 : n - 2);
        std::size_t cols = xdim(n) + zdim(n - 1);
        SparseIntMat m(rows, cols);
        if (n <= top_x) {
            const SparseIntMat& dx = CX->boundary(n);
            for (std::size_t j = 0; j < dx.cols(); ++j)
                for (const auto& [i, v] : dx.column(j)) m.add_to(i, j, v);
        }
        if (n - 1 <= static_cast<int>(delta.size()) - 1 && n - 1 >= 0) {
            const SparseIntMat& dl = delta[static_cast<std::size_t>(n - 1)];
            for (std::size_t j = 0; j < dl.cols(); ++j)
                for (const auto& [i, v] : dl.column(j)) m.add_to(i, xdim(n) + j, v);
        }
        if (n - 1 >= 1 && n - 1 <= top_z) {
            const SparseIntMat& dz = CZ->boundary(n - 1);
            for (std::size_t j = 0; j < dz.cols(); ++j)
                for (const auto& [i, v] : dz.column(j))
                    m.add_to(xdim(n - 1) + i, xdim(n) + j, -v);
        }
        bnd[static_cast<std::size_t>(n)] = std::move(m);
    }
    return make_abstract_complex(std::move(bnd));
}

}  // namespace detail

// Algebraic mapping torus of a chain self-map: the cone of (id - f).
// Its homology fits the long exact sequence
//   ... -> H_n(C) --(id - f*)--> H_n(C) -> H_n(Tor) -> H_{n-1}(C) -> ...
inline TorusComplex algebraic_mapping_torus(const ComplexPtr& C, const ChainMap& f) {
    if (f.src.get() != f.dst.get() || f.src.get() != C.get())
        throw std::invalid_argument("algebraic mapping torus needs an endomorphism of C");
    validate_chain_map(f, "algebraic_mapping_torus");
    std::vector<SparseIntMat> delta;
    for (int n = 0; n <= C->top_degree(); ++n)
        delta.push_back(SparseIntMat::identity(C->dim(n)) - f.at(n));
    TorusComplex t;
    t.complex = detail::mapping_cone(C, C, delta);
    t.kind = "cone(id - f)";
    return t;
}

// Homotopy-colimit torus of two chain maps p, q : CZ -> CX: the cone of
// (p - q), with C(X) in degree n and C(Z) in degree n-1.
inline TorusComplex torus_pq(const ComplexPtr& CZ, const ComplexPtr& CX, const ChainMap& p,
                             const ChainMap& q) {
    if (p.src.get() != CZ.get() || q.src.get() != CZ.get() || p.dst.get() != CX.get() ||
        q.dst.get() != CX.get())
        throw std::invalid_argument("torus_pq needs two maps CZ -> CX");
    validate_chain_map(p, "torus_pq(p)");
    validate_chain_map(q, "torus_pq(q)");
    std::vector<SparseIntMat> delta;
    for (int n = 0; n <= CZ->top_degree(); ++n) {
        SparseIntMat d = p.at(n) - q.at(n);
        if (d.rows() == 0 && CX->dim(n) != 0) d = SparseIntMat(CX->dim(n), CZ->dim(n));
        delta.push_back(std::move(d));
    }
    TorusComplex t;
    t.complex = detail::mapping_cone(CZ, CX, delta);
    t.kind = "cone(p - q)";
    return t;
}

// Vietoris side condition for graph enclosures: each fiber (the cubical set
// spanned by the value cells) must have the homology of a point. Cells whose
// image left the grid entirely are reported separately, not failed.
struct FiberVerdict {
    bool pass = true;
    std::vector<Cube> failing;
    std::vector<Cube> skipped_escapes;
};

inline FiberVerdict check_fiber_acyclicity(const MultivaluedMap& Z) {
    if (!Z.graph_tag) throw std::invalid_argument("fiber check needs a graph enclosure");
    FiberVerdict v;
    for (std::size_t i = 0; i < Z.domain.size(); ++i) {
        if (Z.values[i].empty()) {
            if (Z.escapes[i])
                v.skipped_escapes.push_back(Z.domain[i]);
            else {
                v.failing.push_back(Z.domain[i]);
                v.pass = false;
            }
            continue;
        }
        CubicalSet fiber = CubicalSet::closure_of(Z.dst_grid, Z.values[i]);
        auto h = homology(chain_complex(fiber));
        bool acyclic = h[0] == HomologyGroup::free(1);
        for (std::size_t n = 1; n < h.size(); ++n)
            if (!h[n].trivial()) acyclic = false;
        if (!acyclic) {
            v.failing.push_back(Z.domain[i]);
            v.pass = false;
        }
    }
    return v;
}

// Chain model of the graph enclosure over the quotient N/L, with the two
// projections to the quotient model of the pair: cells are products of
// quotient cells, where any factor inside L collapses to the base point.
struct PairGraph {
    ComplexPtr CZ;
    ComplexPtr CX;  // the pointed model of the pair
    ChainMap p, q;
    // Vietoris condition over the quotient: the fiber of p over each quotient
    // cell must be acyclic, otherwise cone(p - q) need not compute the torus
    // homology (typically a sign that the grid is too coarse).
    FiberVerdict quotient_fibers;
};

namespace detail {

struct QuotCell {  // factor cell of the quotient: a cube or the base point
    bool is_pt = false;
    Cube cube;
    auto operator<=>(const QuotCell&) const = default;
};

struct PairCell {
    QuotCell a, b;
    auto operator<=>(const PairCell&) const = default;
    int dim() const { return (a.is_pt ? 0 : a.cube.dim()) + (b.is_pt ? 0 : b.cube.dim()); }
};

}  // namespace detail

inline PairGraph pair_graph_complex(const MultivaluedMap& F, const QuotientModel& model) {
    using detail::PairCell;
    using detail::QuotCell;
    const IndexPair& pair = model.pair;
    const ChainComplex& CX = *model.pointed;

    auto quot = [&](const Cube& c) {
        QuotCell q;
        if (pair.L.contains(c))
            q.is_pt = true;
        else
            q.cube = c;
        return q;
    };

    // enumerate quotient product cells from the top product cells; the graph
    // of the index map always passes through (pt, pt)
    std::set<PairCell> cells;
    cells.insert(PairCell{QuotCell{true, {}}, QuotCell{true, {}}});
    for (const Cube& c : pair.n_top) {
        for (const Cube& d : F.value(c)) {
            if (!pair.n_top.count(d)) continue;  // clipped to the pair
            std::set<Cube> fa, fb;
            all_faces_into(c, fa);
            all_faces_into(d, fb);
            for (const Cube& alpha : fa)
                for (const Cube& beta : fb) cells.insert(PairCell{quot(alpha), quot(beta)});
        }
    }

    int top = 0;
    for (const auto& pc : cells) top = std::max(top, pc.dim());
    std::vector<std::vector<PairCell>> basis(static_cast<std::size_t>(top) + 1);
    for (const auto& pc : cells) basis[static_cast<std::size_t>(pc.dim())].push_back(pc);
    std::map<PairCell, std::pair<int, std::size_t>> index;
    for (int n = 0; n <= top; ++n)
        for (std::size_t j = 0; j < basis[static_cast<std::size_t>(n)].size(); ++j)
            index[basis[static_cast<std::size_t>(n)][j]] = {n, j};

    // per-factor quotient boundary: faces in L collapse (to the base point in
    // degree one, dropped above)
    auto factor_boundary = [&](const QuotCell& qc) {
        std::vector<std::pair<QuotCell, int>> out;
        if (qc.is_pt) return out;
        for (auto& [f, s] : boundary_faces(qc.cube)) out.emplace_back(quot(f), s);
        return out;
    };

    std::vector<SparseIntMat> bnd(static_cast<std::size_t>(top) + 1);
    bnd[0] = SparseIntMat(0, basis[0].size());
    for (int n = 1; n <= top; ++n) {
        SparseIntMat m(basis[static_cast<std::size_t>(n - 1)].size(),
                       basis[static_cast<std::size_t>(n)].size());
        for (std::size_t j = 0; j < basis[static_cast<std::size_t>(n)].size(); ++j) {
            const PairCell& pc = basis[static_cast<std::size_t>(n)][j];
            int adim = pc.a.is_pt ? 0 : pc.a.cube.dim();
            for (auto& [fa, s] : factor_boundary(pc.a)) {
                PairCell t{fa, pc.b};
                if (t.dim() != n - 1) continue;  // positive-degree face collapsed away
                auto it = index.find(t);
                if (it == index.end()) throw std::logic_error("pair graph not face-closed");
                m.add_to(it->second.second, j, Int(s));
            }
            int ksign = (adim % 2 == 0) ? 1 : -1;
            for (auto& [fb, s] : factor_boundary(pc.b)) {
                PairCell t{pc.a, fb};
                if (t.dim() != n - 1) continue;
                auto it = index.find(t);
                if (it == index.end()) throw std::logic_error("pair graph not face-closed");
                m.add_to(it->second.second, j, Int(ksign * s));
            }
        }
        bnd[static_cast<std::size_t>(n)] = std::move(m);
    }

    PairGraph out;
    out.CX = model.pointed;
    out.CZ = std::make_shared<const ChainComplex>(make_abstract_complex(std::move(bnd)));

    // projections: drop a factor when the other is a vertex (or the point)
    auto model_index = [&](const QuotCell& qc) -> std::size_t {
        if (qc.is_pt) return CX.basepoint_index();
        auto idx = CX.index_of(qc.cube.dim(), qc.cube);
        if (!idx) throw std::logic_error("quotient cell missing from the pair model");
        return *idx;
    };
    ChainMap p, q;
    p.src = out.CZ;
    p.dst = out.CX;
    q.src = out.CZ;
    q.dst = out.CX;
    for (int n = 0; n <= top; ++n) {
        SparseIntMat mp(CX.dim(n), basis[static_cast<std::size_t>(n)].size());
        SparseIntMat mq(CX.dim(n), basis[static_cast<std::size_t>(n)].size());
        for (std::size_t j = 0; j < basis[static_cast<std::size_t>(n)].size(); ++j) {
            const PairCell& pc = basis[static_cast<std::size_t>(n)][j];
            int adim = pc.a.is_pt ? 0 : pc.a.cube.dim();
            int bdim = pc.b.is_pt ? 0 : pc.b.cube.dim();
            if (bdim == 0) mp.set(model_index(pc.a), j, Int(1));
            if (adim == 0) mq.set(model_index(pc.b), j, Int(1));
        }
        p.mat.push_back(std::move(mp));
        q.mat.push_back(std::move(mq));
    }
    validate_chain_map(p, "pair_graph_complex(p)");
    validate_chain_map(q, "pair_graph_complex(q)");
    out.p = std::move(p);
    out.q = std::move(q);

    // quotient-level fibers of the first projection
    std::map<QuotCell, std::vector<QuotCell>> fibers;
    for (const auto& pc : cells) fibers[pc.a].push_back(pc.b);
    for (const auto& [a, bs] : fibers) {
        int ftop = 0;
        for (const auto& b : bs) ftop = std::max(ftop, b.is_pt ? 0 : b.cube.dim());
        std::vector<std::vector<QuotCell>> fbasis(static_cast<std::size_t>(ftop) + 1);
        std::map<QuotCell, std::size_t> fidx;
        for (const auto& b : bs) fbasis[static_cast<std::size_t>(b.is_pt ? 0 : b.cube.dim())].push_back(b);
        for (auto& level : fbasis)
            for (std::size_t j = 0; j < level.size(); ++j) fidx[level[j]] = j;
        std::vector<SparseIntMat> fb(static_cast<std::size_t>(ftop) + 1);
        fb[0] = SparseIntMat(0, fbasis[0].size());
        bool closed = true;
        for (int n = 1; n <= ftop && closed; ++n) {
            SparseIntMat m(fbasis[static_cast<std::size_t>(n - 1)].size(),
                           fbasis[static_cast<std::size_t>(n)].size());
            for (std::size_t j = 0; j < fbasis[static_cast<std::size_t>(n)].size(); ++j) {
                for (auto& [f2, s] : factor_boundary(fbasis[static_cast<std::size_t>(n)][j])) {
                    if ((f2.is_pt ? 0 : f2.cube.dim()) != n - 1) continue;
                    auto it = fidx.find(f2);
                    if (it == fidx.end()) {
                        closed = false;
                        break;
                    }
                    m.add_to(it->second, j, Int(s));
                }
            }
            fb[static_cast<std::size_t>(n)] = std::move(m);
        }
        bool acyclic = closed;
        if (closed) {
            auto h = homology(make_abstract_complex(std::move(fb)));
            acyclic = h[0] == HomologyGroup::free(1);
            for (std::size_t n = 1; n < h.size(); ++n)
                if (!h[n].trivial()) acyclic = false;
        }
        if (!acyclic) {
            out.quotient_fibers.pass = false;
            out.quotient_fibers.failing.push_back(a.is_pt ? Cube() : a.cube);
        }
    }
    return out;
}

}  // namespace contor
