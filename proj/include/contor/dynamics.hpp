#pragma once

#include "contor/cubical.hpp"
#include "contor/expr.hpp"

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace contor {

struct IsolationError : std::runtime_error {
    std::vector<Cube> violating;
    explicit IsolationError(std::vector<Cube> cells)
        : std::runtime_error(describe(cells)), violating(std::move(cells)) {}
    static std::string describe(const std::vector<Cube>& cells) {
        std::ostringstream os;
        os << "invariant part touches the seed boundary; enlarge the seed or refine the grid:";
        for (const auto& c : cells) os << " " << c.str();
        return os.str();
    }
};

// Combinatorial multivalued map: maximal cells of the source to sets of
// maximal cells of the target (top grid cells for full-grid enclosures).
// Escape flags mark cells whose interval image pokes outside the grid box.
struct MultivaluedMap {
    GridPtr src_grid, dst_grid;
    std::vector<Cube> domain;                // sorted
    std::vector<std::vector<Cube>> values;   // sorted, parallel to domain
    std::vector<bool> escapes;
    bool graph_tag = false;

    std::size_t index_of(const Cube& c) const {
        auto it = std::lower_bound(domain.begin(), domain.end(), c);
        if (it == domain.end() || !(*it == c))
            throw std::out_of_range("cell not in the map domain: " + c.str());
        return static_cast<std::size_t>(it - domain.begin());
    }
    const std::vector<Cube>& value(const Cube& c) const { return values[index_of(c)]; }
    bool escapes_at(const Cube& c) const { return escapes[index_of(c)]; }

    std::size_t max_fiber() const {
        std::size_t m = 0;
        for (const auto& v : values) m = std::max(m, v.size());
        return m;
    }
};

namespace detail {

// Minimal closed cover of an interval by grid cells along dimension i:
// cells whose open interval meets [a, b], or, for a degenerate image pinned
// on a grid line, the cells whose closed interval contains it. The union of
// the chosen closed cells always contains [a, b] clipped to the grid box.
struct AxisCover {
    int lo = 0, hi = -1;  // inclusive index range; empty when lo > hi
    bool escape = false;
    bool outside = false;
};

inline AxisCover axis_cover(const Grid& g, int dim, const Interval& img) {
    AxisCover out;
    const Rat lo = g.bounds[dim].lo, hi = g.bounds[dim].hi;
    const Rat w = g.cell_width(dim);
    const int n = g.ncells[static_cast<std::size_t>(dim)];
    out.escape = img.lo < lo || img.hi > hi;
    Rat a = std::max(img.lo, lo), b = std::min(img.hi, hi);
    if (a > b) {
        out.outside = true;
        return out;
    }
    auto on_line = [&](const Rat& x, int& k) {
        Rat t = (x - lo) / w;
        if (denominator(t) != 1) return false;
        k = static_cast<int>(numerator(t));
        return true;
    };
    auto floor_idx = [&](const Rat& x) {
        Rat t = (x - lo) / w;
        Int fl = numerator(t) / denominator(t);
        if (numerator(t) < 0 && fl * denominator(t) != numerator(t)) --fl;
        return static_cast<int>(fl);
    };
    int k;
    if (a == b) {
        if (on_line(a, k)) {
            out.lo = std::max(0, k - 1);
            out.hi = std::min(n - 1, k);
        } else {
            out.lo = out.hi = floor_idx(a);
        }
        return out;
    }
    out.lo = on_line(a, k) ? k : floor_idx(a);
    out.hi = on_line(b, k) ? k - 1 : floor_idx(b);
    out.lo = std::max(0, out.lo);
    out.hi = std::min(n - 1, out.hi);
    return out;
}

struct CoverResult {
    std::vector<std::vector<int>> cells;  // top-cell multi-indices
    bool escape = false;
};

inline CoverResult cover_cells(const Grid& g, const Box& img) {
    CoverResult res;
    std::vector<AxisCover> axes;
    for (int i = 0; i < g.dim(); ++i) {
        AxisCover ac = axis_cover(g, i, img[i]);
        res.escape = res.escape || ac.escape;
        if (ac.outside || ac.lo > ac.hi) return res;  // empty cover
        axes.push_back(ac);
    }
    std::vector<int> idx(static_cast<std::size_t>(g.dim()));
    for (int i = 0; i < g.dim(); ++i) idx[static_cast<std::size_t>(i)] = axes[static_cast<std::size_t>(i)].lo;
    while (true) {
        res.cells.push_back(idx);
        int i = g.dim() - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == axes[static_cast<std::size_t>(i)].hi) {
            idx[static_cast<std::size_t>(i)] = axes[static_cast<std::size_t>(i)].lo;
            --i;
        }
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
    }
    return res;
}

}  // namespace detail

// Rigorous combinatorial enclosure of the graph of expr over the grid: for
// each top cell c, value(c) covers the interval image of the closed cell, so
// the graph over c is contained in c x |value(c)| whenever the image stays
// inside the grid box. Cells with escaping images are flagged, not dropped.
inline MultivaluedMap enclose_graph(const MapExpr& expr, const GridPtr& grid) {
    if (expr.arity != grid->dim())
        throw std::invalid_argument("expression arity does not match grid dimension");
    MultivaluedMap F;
    F.src_grid = grid;
    F.dst_grid = grid;
    F.graph_tag = true;

    std::vector<int> idx(static_cast<std::size_t>(grid->dim()), 0);
    while (true) {
        Cube c = Cube::top_cell(idx);
        Box img = evaluate_interval(expr, grid->cell_box(idx));
        detail::CoverResult cov = detail::cover_cells(*grid, img);
        std::vector<Cube> val;
        val.reserve(cov.cells.size());
        for (const auto& t : cov.cells) val.push_back(Cube::top_cell(t));
        std::sort(val.begin(), val.end());
        F.domain.push_back(std::move(c));
        F.values.push_back(std::move(val));
        F.escapes.push_back(cov.escape);

        int i = grid->dim() - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] ==
                             grid->ncells[static_cast<std::size_t>(i)] - 1) {
            idx[static_cast<std::size_t>(i)] = 0;
            --i;
        }
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
    }
    return F;
}

// Enclosure over the maximal cells of a sub-cubical-set domain, with values
// among the maximal cells of `target`. Degenerate target coordinates require
// exact containment of the image slice.
inline MultivaluedMap enclose_graph_on(const MapExpr& expr, const CubicalSet& domain,
                                       const CubicalSet& target) {
    const Grid& g = *domain.grid;
    if (expr.arity != g.dim())
        throw std::invalid_argument("expression arity does not match grid dimension");
    MultivaluedMap F;
    F.src_grid = domain.grid;
    F.dst_grid = target.grid;
    F.graph_tag = true;

    std::vector<Cube> maxt = target.maximal_cells();
    for (const Cube& c : domain.maximal_cells()) {
        Box img = evaluate_interval(expr, c.box(g));
        std::vector<Cube> val;
        for (const Cube& m : maxt) {
            bool ok = true;
            for (int i = 0; i < g.dim() && ok; ++i) {
                auto [k, e] = m.c[static_cast<std::size_t>(i)];
                Interval mi(g.grid_line(i, k), g.grid_line(i, k + e));
                const Interval& ii = img[i];
                if (e == 0) {
                    ok = ii.contains(mi.lo);
                } else {
                    bool open_meets = ii.hi > mi.lo && ii.lo < mi.hi;
                    bool pinned = ii.is_point() && mi.contains(ii.lo);
                    ok = open_meets || pinned;
                }
            }
            if (ok) val.push_back(m);
        }
        std::sort(val.begin(), val.end());
        F.domain.push_back(c);
        F.values.push_back(std::move(val));
        F.escapes.push_back(!g.bounds.contains(img));
    }
    return F;
}

// The product-cell support Z of a graph enclosure: the closure of all cells
// c x c' with c' in F(c), inside the product grid.
inline CubicalSet graph_support(const MultivaluedMap& F) {
    auto pgrid = std::make_shared<Grid>(Grid::product(*F.src_grid, *F.dst_grid));
    CubicalSet Z(pgrid);
    for (std::size_t i = 0; i < F.domain.size(); ++i)
        for (const Cube& d : F.values[i]) Z.insert_with_closure(product(F.domain[i], d));
    return Z;
}

// Greatest subset of M in which every cell has both a successor and a
// predecessor inside the subset: the combinatorial invariant part,
// containing Inv(|M|, f) for every selector of the enclosure.
inline std::set<Cube> invariant_part(const MultivaluedMap& F, const std::set<Cube>& M) {
    std::set<Cube> A = M;
    bool changed = true;
    while (changed) {
        changed = false;
        std::set<Cube> has_pred;
        for (const Cube& c : A)
            for (const Cube& d : F.value(c))
                if (A.count(d)) has_pred.insert(d);
        for (auto it = A.begin(); it != A.end();) {
            bool succ = false;
            for (const Cube& d : F.value(*it))
                if (A.count(d)) {
                    succ = true;
                    break;
                }
            if (!succ || !has_pred.count(*it)) {
                it = A.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    return A;
}

// Cells reachable as the midpoint of an F-chain of length 2n inside M.
inline std::set<Cube> inv_n(const MultivaluedMap& F, const std::set<Cube>& M, int n) {
    if (n < 0) throw std::invalid_argument("inv_n needs n >= 0");
    std::set<Cube> forward = M, backward = M;
    for (int k = 0; k < n; ++k) {
        std::set<Cube> next;
        for (const Cube& c : forward)
            for (const Cube& d : F.value(c))
                if (M.count(d)) next.insert(d);
        forward = std::move(next);
        std::set<Cube> prev;
        for (const Cube& c : M) {
            for (const Cube& d : F.value(c))
                if (backward.count(d)) {
                    prev.insert(c);
                    break;
                }
        }
        backward = std::move(prev);
    }
    std::set<Cube> out;
    for (const Cube& c : forward)
        if (backward.count(c)) out.insert(c);
    return out;
}

// Strong combinatorial index pair (N, L), stored as closed cubical sets plus
// the defining top-cell lists.
struct IndexPair {
    CubicalSet N, L;
    std::set<Cube> n_top, l_top;

    static IndexPair from_top_sets(const GridPtr& grid, const std::set<Cube>& n_top,
                                   const std::set<Cube>& l_top) {
        IndexPair p;
        p.n_top = n_top;
        p.l_top = l_top;
        p.N = CubicalSet::closure_of(grid, {n_top.begin(), n_top.end()});
        p.L = CubicalSet::closure_of(grid, {l_top.begin(), l_top.end()});
        return p;
    }
};

namespace detail {

inline bool touches_grid_boundary(const Cube& c, const Grid& g) {
    for (int i = 0; i < c.space_dim(); ++i) {
        auto [k, e] = c.c[static_cast<std::size_t>(i)];
        if (k == 0 || k + e == g.ncells[static_cast<std::size_t>(i)]) return true;
    }
    return false;
}

}  // namespace detail

// Grows N from the invariant part of the seed by adding image cells inside
// the seed region, then peels the exit set L until f(L) n N stays in L.
// Escaping cells and cells mapping outside N are forced into L.
inline IndexPair build_index_pair(const MultivaluedMap& F, const std::set<Cube>& seed) {
    const GridPtr& grid = F.src_grid;
    std::set<Cube> inv = invariant_part(F, seed);

    std::vector<Cube> bad;
    for (const Cube& c : inv) {
        if (detail::touches_grid_boundary(c, *grid)) {
            bad.push_back(c);
            continue;
        }
        for (const Cube& d : F.domain)
            if (!seed.count(d) && c.touches(d)) {
                bad.push_back(c);
                break;
            }
    }
    if (!bad.empty()) throw IsolationError(std::move(bad));

    std::set<Cube> N = inv;
    std::vector<Cube> queue(inv.begin(), inv.end());
    while (!queue.empty()) {
        Cube c = queue.back();
        queue.pop_back();
        for (const Cube& d : F.value(c))
            if (seed.count(d) && N.insert(d).second) queue.push_back(d);
    }

    std::set<Cube> L;
    for (const Cube& c : N) {
        if (F.escapes_at(c)) {
            L.insert(c);
            continue;
        }
        for (const Cube& d : F.value(c))
            if (!N.count(d)) {
                L.insert(c);
                break;
            }
    }
    bool grew = true;
    while (grew) {
        grew = false;
        for (const Cube& c : std::set<Cube>(L)) {
            for (const Cube& d : F.value(c))
                if (N.count(d) && L.insert(d).second) grew = true;
        }
    }
    return IndexPair::from_top_sets(grid, N, L);
}

// Verdict of the strong index pair conditions, with violating cells listed
// per condition.
struct PairVerdict {
    bool pass = true;
    std::vector<Cube> exit_violations;       // f(L) n N not inside L
    std::vector<Cube> stay_violations;       // f(N \ L) not inside N (or escapes)
    std::vector<Cube> isolation_violations;  // Inv(N \ L) touches L or the complement
};

inline PairVerdict verify_index_pair(const MultivaluedMap& F, const IndexPair& pair) {
    PairVerdict v;
    std::set<Cube> interior;
    for (const Cube& c : pair.n_top)
        if (!pair.l_top.count(c)) interior.insert(c);

    for (const Cube& c : pair.l_top)
        for (const Cube& d : F.value(c))
            if (pair.n_top.count(d) && !pair.l_top.count(d)) {
                v.exit_violations.push_back(c);
                break;
            }
    for (const Cube& c : interior) {
        if (F.escapes_at(c)) {
            v.stay_violations.push_back(c);
            continue;
        }
        for (const Cube& d : F.value(c))
            if (!pair.n_top.count(d)) {
                v.stay_violations.push_back(c);
                break;
            }
    }
    std::set<Cube> inv = invariant_part(F, interior);
    for (const Cube& c : inv) {
        bool touches_bad = detail::touches_grid_boundary(c, *F.src_grid);
        for (const Cube& d : pair.l_top)
            if (!touches_bad && c.touches(d)) touches_bad = true;
        if (!touches_bad)
            for (const Cube& d : F.domain)
                if (!pair.n_top.count(d) && c.touches(d)) {
                    touches_bad = true;
                    break;
                }
        if (touches_bad) v.isolation_violations.push_back(c);
    }
    v.pass = v.exit_violations.empty() && v.stay_violations.empty() &&
             v.isolation_violations.empty();
    return v;
}

}  // namespace contor
