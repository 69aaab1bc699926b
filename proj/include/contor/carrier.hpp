#pragma once

#include "contor/dynamics.hpp"
#include "contor/homology.hpp"

#include <functional>
#include <optional>

namespace contor {

struct CarrierError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pointed and reduced chain models of the quotient N/L of an index pair.
struct QuotientModel {
    IndexPair pair;
    ComplexPtr pointed;
    ComplexPtr reduced;
};

inline QuotientModel quotient_model(const IndexPair& p) {
    QuotientModel m;
    m.pair = p;
    m.pointed = std::make_shared<const ChainComplex>(pointed_pair_complex(p.N, p.L));
    m.reduced = std::make_shared<const ChainComplex>(
        detail::build_complex(p.N, &p.L, detail::QuotientMode::DropL));
    return m;
}

// Acyclic-carrier assignment: a destination subcomplex per source cell, plus
// an optional canonical vertex used in degree 0. An empty carrier means the
// cell maps into the collapsed exit region (the base point).
struct Carrier {
    CubicalSet cells;
    std::optional<Cube> vertex_hint;
};
using CarrierFn = std::function<Carrier(const Cube&)>;

namespace detail {

// Solves the boundary equation for one cell inside its carrier, in the
// pointed quotient model of dst.
inline std::vector<Int> solve_in_carrier(const QuotientModel& dst, int n, const Carrier& K,
                                         const std::vector<Int>& rhs, const std::string& what) {
    const ChainComplex& D = *dst.pointed;
    std::vector<std::size_t> cols, rows;
    for (const Cube& q : K.cells.cubes) {
        if (dst.pair.L.contains(q)) continue;
        if (q.dim() == n) {
            auto idx = D.index_of(n, q);
            if (idx) cols.push_back(*idx);
        } else if (q.dim() == n - 1) {
            auto idx = D.index_of(n - 1, q);
            if (idx) rows.push_back(*idx);
        }
    }
    if (n == 1 && D.pointed) rows.push_back(D.basepoint_index());
    std::sort(rows.begin(), rows.end());
    std::sort(cols.begin(), cols.end());

    std::vector<std::size_t> row_pos(D.dim(n - 1), SIZE_MAX);
    for (std::size_t r = 0; r < rows.size(); ++r) row_pos[rows[r]] = r;

    std::vector<Int> b(rows.size(), Int(0));
    for (std::size_t i = 0; i < rhs.size(); ++i) {
        if (rhs[i] == 0) continue;
        if (row_pos[i] == SIZE_MAX)
            throw CarrierError(what + ": boundary chain leaves the carrier");
        b[row_pos[i]] = rhs[i];
    }

    SparseIntMat R(rows.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [i, v] : D.boundary(n).column(cols[c]))
            if (row_pos[i] != SIZE_MAX) R.set(row_pos[i], c, v);
    // entries of carrier columns outside carrier rows would escape the
    // subcomplex; carriers are closed, so they cannot occur
    for (std::size_t c = 0; c < cols.size(); ++c)
        for (const auto& [i, v] : D.boundary(n).column(cols[c]))
            if (row_pos[i] == SIZE_MAX)
                throw CarrierError(what + ": carrier is not a closed subcomplex");

    auto x = solve_integer(R, b);
    if (!x) throw CarrierError(what + ": carrier is not acyclic enough to carry the chain");
    std::vector<Int> out(D.dim(n), Int(0));
    for (std::size_t c = 0; c < cols.size(); ++c) out[cols[c]] = (*x)[c];
    return out;
}

}  // namespace detail

// Builds a chain map src -> dst on the pointed quotient models, degree by
// degree, with phi(sigma) supported in the carrier of sigma.
inline ChainMap chain_selector(const QuotientModel& src, const QuotientModel& dst,
                               const CarrierFn& carrier_of, const std::string& what) {
    const ChainComplex& S = *src.pointed;
    const ChainComplex& D = *dst.pointed;
    ChainMap f;
    f.src = src.pointed;
    f.dst = dst.pointed;
    f.mat.resize(static_cast<std::size_t>(S.top_degree()) + 1);
    for (int n = 0; n <= S.top_degree(); ++n)
        f.mat[static_cast<std::size_t>(n)] = SparseIntMat(D.dim(n), S.dim(n));

    // base point maps to base point
    if (S.pointed && D.pointed)
        f.mat[0].set(D.basepoint_index(), S.basepoint_index(), Int(1));

    // degree 0: canonical vertex of the carrier, or the base point
    const auto& verts = S.cells[0];
    for (std::size_t j = 0; j < verts.size(); ++j) {
        Carrier K = carrier_of(verts[j]);
        if (K.cells.empty()) {
            if (!D.pointed) throw CarrierError(what + ": empty carrier without a base point");
            f.mat[0].set(D.basepoint_index(), j, Int(1));
            continue;
        }
        Cube target;
        if (K.vertex_hint) {
            target = *K.vertex_hint;
            if (!K.cells.contains(target))
                throw CarrierError(what + ": canonical vertex escapes the carrier");
        } else {
            auto vs = K.cells.cells_of_dim(0);
            target = vs.front();  // cube order is deterministic
        }
        if (dst.pair.L.contains(target)) {
            if (!D.pointed) throw CarrierError(what + ": empty carrier without a base point");
            f.mat[0].set(D.basepoint_index(), j, Int(1));
        } else {
            auto idx = D.index_of(0, target);
            if (!idx) throw CarrierError(what + ": carrier vertex missing from destination");
            f.mat[0].set(*idx, j, Int(1));
        }
    }

    for (int n = 1; n <= S.top_degree(); ++n) {
        const auto& cs = S.cells[static_cast<std::size_t>(n)];
        for (std::size_t j = 0; j < cs.size(); ++j) {
            // rhs = phi(d sigma)
            std::vector<Int> col(S.dim(n), Int(0));
            col[j] = 1;
            std::vector<Int> dsig = S.boundary(n).apply(col);
            std::vector<Int> rhs = f.mat[static_cast<std::size_t>(n - 1)].apply(dsig);
            bool rhs_zero = true;
            for (const auto& v : rhs)
                if (v != 0) rhs_zero = false;

            Carrier K = carrier_of(cs[j]);
            if (K.cells.empty()) {
                if (!rhs_zero)
                    throw CarrierError(what + ": empty carrier for a cell with nonzero boundary image");
                continue;
            }
            std::vector<Int> x = detail::solve_in_carrier(dst, n, K, rhs, what);
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] != 0) f.mat[static_cast<std::size_t>(n)].set(i, j, x[i]);
        }
    }
    validate_chain_map(f, what.c_str());
    return f;
}

namespace detail {

// Hull of the value cells of each top cell; the carrier box of a lower cell
// is the intersection over its incident top cells, which is monotone under
// faces and still contains the true image.
struct CarrierBoxes {
    std::map<Cube, std::optional<Box>> top_hull;  // nullopt: empty value (full escape)

    static CarrierBoxes build(const MultivaluedMap& F, const IndexPair& src) {
        CarrierBoxes cb;
        const Grid& g = *F.dst_grid;
        for (const Cube& c : src.n_top) {
            const auto& val = F.value(c);
            if (val.empty()) {
                cb.top_hull[c] = std::nullopt;
                continue;
            }
            Box h = val.front().box(g);
            for (const Cube& d : val) h = hull(h, d.box(g));
            cb.top_hull[c] = std::move(h);
        }
        return cb;
    }

    std::optional<Box> box_for(const Cube& cell, const IndexPair& src) const {
        std::optional<Box> acc;
        bool found = false;
        for (const auto& [top, hb] : top_hull) {
            if (!cell.face_of(top)) continue;
            found = true;
            if (!hb) return std::nullopt;
            if (!acc) {
                acc = hb;
                continue;
            }
            std::vector<Interval> iv;
            for (int i = 0; i < acc->dim(); ++i) {
                Rat lo = std::max((*acc)[i].lo, (*hb)[i].lo);
                Rat hi = std::min((*acc)[i].hi, (*hb)[i].hi);
                if (lo > hi) return std::nullopt;
                iv.emplace_back(lo, hi);
            }
            acc = Box(std::move(iv));
        }
        if (!found) throw CarrierError("cell has no incident top cell in the source pair");
        return acc;
    }
};

}  // namespace detail

// Chain map induced by a box-valued enclosure on the pointed quotient models
// of the two pairs. Carriers are the grid covers of per-cell image boxes;
// they must restrict to destination cells (else the input is outside the
// supported class and the caller may fall back to explicit matrices).
inline ChainMap carrier_chain_map(const MultivaluedMap& F, const QuotientModel& src,
                                  const QuotientModel& dst) {
    auto boxes = std::make_shared<detail::CarrierBoxes>(detail::CarrierBoxes::build(F, src.pair));
    const GridPtr grid = F.dst_grid;
    IndexPair dst_pair = dst.pair;
    IndexPair src_pair = src.pair;

    CarrierFn fn = [boxes, grid, dst_pair, src_pair](const Cube& cell) -> Carrier {
        Carrier K;
        K.cells = CubicalSet(grid);
        std::optional<Box> b = boxes->box_for(cell, src_pair);
        if (!b) return K;
        detail::CoverResult cov = detail::cover_cells(*grid, *b);
        if (cov.cells.empty()) return K;
        std::vector<Cube> tops;
        for (const auto& idx : cov.cells) {
            Cube t = Cube::top_cell(idx);
            if (!dst_pair.n_top.count(t))
                throw CarrierError("carrier is not a single box inside the destination pair at " +
                                   cell.str());
            tops.push_back(std::move(t));
        }
        K.cells = CubicalSet::closure_of(grid, tops);
        // canonical vertex: the minimal corner of the carrier box, clipped to
        // the grid; it lies inside every enclosing carrier
        std::vector<int> vidx;
        for (int i = 0; i < grid->dim(); ++i) {
            Rat lo = std::max((*b)[i].lo, grid->bounds[i].lo);
            Rat t = (lo - grid->bounds[i].lo) / grid->cell_width(i);
            Int fl = numerator(t) / denominator(t);
            vidx.push_back(static_cast<int>(fl));
        }
        Cube v = Cube::vertex(vidx);
        if (K.cells.contains(v)) K.vertex_hint = v;
        return K;
    };
    return chain_selector(src, dst, fn, "carrier_chain_map");
}

inline ChainMap carrier_chain_map(const MultivaluedMap& F, const IndexPair& src,
                                  const IndexPair& dst) {
    return carrier_chain_map(F, quotient_model(src), quotient_model(dst));
}

// The same chain map on the reduced models: drop the base-point row/column.
inline ChainMap reduce_pointed_map(const ChainMap& f, const QuotientModel& src,
                                   const QuotientModel& dst) {
    ChainMap r;
    r.src = src.reduced;
    r.dst = dst.reduced;
    r.mat = f.mat;
    const std::size_t sp = src.pointed->basepoint_index();
    const std::size_t dp = dst.pointed->basepoint_index();
    SparseIntMat m0(dst.reduced->dim(0), src.reduced->dim(0));
    for (std::size_t j = 0; j < src.reduced->dim(0); ++j) {
        std::size_t jj = j < sp ? j : j + 1;
        for (const auto& [i, v] : f.mat[0].column(jj))
            if (i != dp) m0.set(i < dp ? i : i - 1, j, v);
    }
    r.mat[0] = std::move(m0);
    validate_chain_map(r, "reduce_pointed_map");
    return r;
}

// Chain-level section of the first-factor projection for a diagonal-style
// enclosure: sigma is carried into closure(sigma x sigma).
inline ChainMap diagonal_inclusion_chain_map(const CubicalSet& X, const ComplexPtr& CX,
                                             const CubicalSet& Z, const ComplexPtr& CZ) {
    QuotientModel src;
    src.pair.N = X;
    src.pair.L = CubicalSet(X.grid);
    src.pointed = CX;
    src.reduced = CX;
    QuotientModel dst;
    dst.pair.N = Z;
    dst.pair.L = CubicalSet(Z.grid);
    dst.pointed = CZ;
    dst.reduced = CZ;
    GridPtr zgrid = Z.grid;
    CarrierFn fn = [zgrid, &Z](const Cube& cell) -> Carrier {
        Carrier K;
        Cube sq = product(cell, cell);
        if (!Z.contains(sq))
            throw CarrierError("diagonal cell missing from the enclosure: " + sq.str());
        K.cells = CubicalSet::closure_of(zgrid, {sq});
        if (cell.dim() == 0) K.vertex_hint = sq;
        return K;
    };
    return chain_selector(src, dst, fn, "diagonal_inclusion_chain_map");
}

}  // namespace contor
