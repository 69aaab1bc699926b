#pragma once

#include "contor/interval.hpp"
#include "contor/matrix.hpp"
#include "contor/smith.hpp"

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace contor {

// Uniform cubical grid over a box: ncells[i] equal cells per dimension.
struct Grid {
    Box bounds;
    std::vector<int> ncells;

    Grid(Box b, std::vector<int> n) : bounds(std::move(b)), ncells(std::move(n)) {
        if (static_cast<int>(ncells.size()) != bounds.dim())
            throw std::invalid_argument("grid cell counts must match box dimension");
        for (int c : ncells)
            if (c <= 0) throw std::invalid_argument("grid needs positive cell counts");
        for (int i = 0; i < bounds.dim(); ++i)
            if (bounds[i].is_point()) throw std::invalid_argument("grid box must have positive widths");
    }

    int dim() const { return bounds.dim(); }
    Rat cell_width(int i) const { return bounds[i].width() / ncells[static_cast<std::size_t>(i)]; }
    Rat grid_line(int i, int k) const { return bounds[i].lo + cell_width(i) * k; }

    Box cell_box(const std::vector<int>& idx) const {
        std::vector<Interval> iv;
        iv.reserve(idx.size());
        for (int i = 0; i < dim(); ++i) {
            int k = idx[static_cast<std::size_t>(i)];
            if (k < 0 || k >= ncells[static_cast<std::size_t>(i)])
                throw std::out_of_range("cell index outside grid");
            iv.emplace_back(grid_line(i, k), grid_line(i, k + 1));
        }
        return Box(std::move(iv));
    }

    bool operator==(const Grid& o) const { return bounds == o.bounds && ncells == o.ncells; }

    // Product grid housing graph enclosures Z in X x X.
    static Grid product(const Grid& a, const Grid& b) {
        std::vector<Interval> iv = a.bounds.iv;
        iv.insert(iv.end(), b.bounds.iv.begin(), b.bounds.iv.end());
        std::vector<int> n = a.ncells;
        n.insert(n.end(), b.ncells.begin(), b.ncells.end());
        return Grid(Box(std::move(iv)), std::move(n));
    }
};

using GridPtr = std::shared_ptr<const Grid>;

// Elementary cube: per coordinate a grid interval [k, k+ext] with ext = 0
// (degenerate, a vertex slot) or 1 (an edge slot). Dimension = number of
// extents equal to 1.
struct Cube {
    std::vector<std::pair<int, int>> c;  // (anchor index, extent)

    Cube() = default;
    explicit Cube(std::vector<std::pair<int, int>> coords) : c(std::move(coords)) {}

    static Cube top_cell(const std::vector<int>& idx) {
        std::vector<std::pair<int, int>> v;
        v.reserve(idx.size());
        for (int k : idx) v.emplace_back(k, 1);
        return Cube(std::move(v));
    }
    static Cube vertex(const std::vector<int>& idx) {
        std::vector<std::pair<int, int>> v;
        v.reserve(idx.size());
        for (int k : idx) v.emplace_back(k, 0);
        return Cube(std::move(v));
    }

    int space_dim() const { return static_cast<int>(c.size()); }
    int dim() const {
        int d = 0;
        for (const auto& [k, e] : c) d += e;
        return d;
    }
    bool is_top(const Grid& g) const { return dim() == g.dim(); }

    std::vector<int> anchor() const {
        std::vector<int> a;
        a.reserve(c.size());
        for (const auto& [k, e] : c) a.push_back(k);
        return a;
    }

    bool in_grid(const Grid& g) const {
        if (space_dim() != g.dim()) return false;
        for (int i = 0; i < space_dim(); ++i) {
            auto [k, e] = c[static_cast<std::size_t>(i)];
            if (e != 0 && e != 1) return false;
            if (k < 0 || k + e > g.ncells[static_cast<std::size_t>(i)]) return false;
        }
        return true;
    }

    Box box(const Grid& g) const {
        std::vector<Interval> iv;
        iv.reserve(c.size());
        for (int i = 0; i < space_dim(); ++i) {
            auto [k, e] = c[static_cast<std::size_t>(i)];
            iv.emplace_back(g.grid_line(i, k), g.grid_line(i, k + e));
        }
        return Box(std::move(iv));
    }

    // closures intersect
    bool touches(const Cube& o) const {
        for (int i = 0; i < space_dim(); ++i) {
            auto [k1, e1] = c[static_cast<std::size_t>(i)];
            auto [k2, e2] = o.c[static_cast<std::size_t>(i)];
            if (k1 + e1 < k2 || k2 + e2 < k1) return false;
        }
        return true;
    }
    // this is a face of o (closure containment)
    bool face_of(const Cube& o) const {
        for (int i = 0; i < space_dim(); ++i) {
            auto [k1, e1] = c[static_cast<std::size_t>(i)];
            auto [k2, e2] = o.c[static_cast<std::size_t>(i)];
            if (k1 < k2 || k1 + e1 > k2 + e2) return false;
        }
        return true;
    }

    auto operator<=>(const Cube& o) const = default;

    friend Cube product(const Cube& a, const Cube& b) {
        std::vector<std::pair<int, int>> v = a.c;
        v.insert(v.end(), b.c.begin(), b.c.end());
        return Cube(std::move(v));
    }

    Cube slice(int from, int to) const {  // coordinates [from, to)
        return Cube(std::vector<std::pair<int, int>>(c.begin() + from, c.begin() + to));
    }

    std::string str() const {
        std::ostringstream os;
        os << "(";
        for (int i = 0; i < space_dim(); ++i) {
            if (i) os << " ";
            os << c[static_cast<std::size_t>(i)].first;
            if (c[static_cast<std::size_t>(i)].second) os << "'";
        }
        os << ")";
        return os.str();
    }
};

// Proper faces of codimension 1 with the alternating-sign convention: walking
// the nondegenerate coordinates in increasing coordinate order, the m-th
// contributes (-1)^(m-1) * (upper - lower).
inline std::vector<std::pair<Cube, int>> boundary_faces(const Cube& q) {
    std::vector<std::pair<Cube, int>> out;
    int m = 0;
    for (int i = 0; i < q.space_dim(); ++i) {
        auto [k, e] = q.c[static_cast<std::size_t>(i)];
        if (e == 0) continue;
        int sign = (m % 2 == 0) ? 1 : -1;
        Cube upper = q, lower = q;
        upper.c[static_cast<std::size_t>(i)] = {k + 1, 0};
        lower.c[static_cast<std::size_t>(i)] = {k, 0};
        out.emplace_back(std::move(upper), sign);
        out.emplace_back(std::move(lower), -sign);
        ++m;
    }
    return out;
}

inline void all_faces_into(const Cube& q, std::set<Cube>& out) {
    if (!out.insert(q).second) return;
    for (auto& [f, s] : boundary_faces(q)) all_faces_into(f, out);
}

// Finite face-closed set of elementary cubes from one grid.
struct CubicalSet {
    GridPtr grid;
    std::set<Cube> cubes;

    CubicalSet() = default;
    explicit CubicalSet(GridPtr g) : grid(std::move(g)) {}

    static CubicalSet from_top_cells(GridPtr g, const std::vector<std::vector<int>>& idxs) {
        CubicalSet s(g);
        for (const auto& idx : idxs) s.insert_with_closure(Cube::top_cell(idx));
        return s;
    }
    static CubicalSet closure_of(GridPtr g, const std::vector<Cube>& cs) {
        CubicalSet s(g);
        for (const auto& c : cs) s.insert_with_closure(c);
        return s;
    }

    void insert_with_closure(const Cube& q) {
        if (!q.in_grid(*grid)) throw std::out_of_range("cube outside grid: " + q.str());
        all_faces_into(q, cubes);
    }

    bool empty() const { return cubes.empty(); }
    bool contains(const Cube& q) const { return cubes.count(q) > 0; }

    bool subset_of(const CubicalSet& o) const {
        for (const auto& q : cubes)
            if (!o.contains(q)) return false;
        return true;
    }

    std::vector<Cube> cells_of_dim(int d) const {
        std::vector<Cube> out;
        for (const auto& q : cubes)
            if (q.dim() == d) out.push_back(q);
        return out;
    }
    std::vector<Cube> top_cells() const { return cells_of_dim(grid->dim()); }

    // cubes not a proper face of another member
    std::vector<Cube> maximal_cells() const {
        std::vector<Cube> out;
        for (const auto& q : cubes) {
            bool maximal = true;
            for (const auto& p : cubes) {
                if (p.dim() > q.dim() && q.face_of(p)) {
                    maximal = false;
                    break;
                }
            }
            if (maximal) out.push_back(q);
        }
        return out;
    }

    int max_dim() const {
        int d = -1;
        for (const auto& q : cubes) d = std::max(d, q.dim());
        return d;
    }
};

// Graded integer chain complex with an ordered cube basis per degree. A
// pointed complex carries one extra base-point generator appended to the
// degree-0 basis (it has no cube label).
struct ChainComplex {
    std::vector<std::size_t> dims;          // rank of C_n per degree
    std::vector<std::vector<Cube>> cells;   // cube labels per degree (may be empty for abstract complexes)
    std::vector<SparseIntMat> bnd;          // bnd[n] : C_n -> C_{n-1}; bnd[0] has 0 rows
    bool pointed = false;
    GridPtr grid;

    int top_degree() const { return static_cast<int>(dims.size()) - 1; }
    std::size_t dim(int n) const {
        if (n < 0 || n > top_degree()) return 0;
        return dims[static_cast<std::size_t>(n)];
    }
    std::size_t basepoint_index() const { return cells[0].size(); }

    std::optional<std::size_t> index_of(int n, const Cube& q) const {
        if (n < 0 || n > top_degree()) return std::nullopt;
        const auto& cs = cells[static_cast<std::size_t>(n)];
        auto it = std::lower_bound(cs.begin(), cs.end(), q);
        if (it != cs.end() && *it == q) return static_cast<std::size_t>(it - cs.begin());
        return std::nullopt;
    }

    const SparseIntMat& boundary(int n) const { return bnd[static_cast<std::size_t>(n)]; }

    bool boundary_squares_to_zero() const {
        for (int n = 2; n <= top_degree(); ++n)
            if (!(boundary(n - 1) * boundary(n)).is_zero()) return false;
        return true;
    }

    std::size_t total_cells() const {
        std::size_t t = 0;
        for (int n = 0; n <= top_degree(); ++n) t += dim(n);
        return t;
    }
};

using ComplexPtr = std::shared_ptr<const ChainComplex>;

// Abstract complex from boundary matrices alone (no cube labels); dims come
// from the matrix shapes. bnd[0] may be a 0 x dim(C_0) placeholder.
inline ChainComplex make_abstract_complex(std::vector<SparseIntMat> boundaries) {
    if (boundaries.empty()) throw std::invalid_argument("abstract complex needs at least degree 0");
    ChainComplex cc;
    cc.dims.resize(boundaries.size());
    cc.dims[0] = boundaries[0].cols();
    for (std::size_t n = 1; n < boundaries.size(); ++n) {
        if (boundaries[n].rows() != boundaries[n - 1].cols())
            throw std::invalid_argument("boundary shapes do not chain");
        cc.dims[n] = boundaries[n].cols();
    }
    cc.cells.resize(boundaries.size());
    cc.bnd = std::move(boundaries);
    if (!cc.boundary_squares_to_zero())
        throw std::invalid_argument("boundary does not square to zero");
    return cc;
}

namespace detail {

// Shared builder: cells of N not in L; `mode` controls what happens to
// boundary terms that fall into L.
enum class QuotientMode { Plain, DropL, PointedL };

inline ChainComplex build_complex(const CubicalSet& N, const CubicalSet* L, QuotientMode mode) {
    ChainComplex cc;
    cc.grid = N.grid;
    int top = N.max_dim();
    cc.cells.resize(static_cast<std::size_t>(std::max(top + 1, 1)));
    for (const auto& q : N.cubes) {
        if (L && L->contains(q)) continue;
        cc.cells[static_cast<std::size_t>(q.dim())].push_back(q);
    }
    // std::set iteration is ordered, so each degree list is already sorted
    cc.pointed = (mode == QuotientMode::PointedL);
    cc.dims.resize(cc.cells.size());
    for (std::size_t n = 0; n < cc.cells.size(); ++n) cc.dims[n] = cc.cells[n].size();
    if (cc.pointed) ++cc.dims[0];

    cc.bnd.resize(cc.cells.size());
    cc.bnd[0] = SparseIntMat(0, cc.dim(0));
    for (int n = 1; n <= cc.top_degree(); ++n) {
        SparseIntMat m(cc.dim(n - 1), cc.dim(n));
        const auto& cs = cc.cells[static_cast<std::size_t>(n)];
        for (std::size_t j = 0; j < cs.size(); ++j) {
            for (auto& [f, s] : boundary_faces(cs[j])) {
                if (L && L->contains(f)) {
                    if (mode == QuotientMode::PointedL && n == 1)
                        m.add_to(cc.basepoint_index(), j, Int(s));
                    continue;  // DropL, or a positive-degree face collapsed into the base point
                }
                auto idx = cc.index_of(n - 1, f);
                if (!idx) throw std::logic_error("face missing from complex: " + f.str());
                m.add_to(*idx, j, Int(s));
            }
        }
        cc.bnd[static_cast<std::size_t>(n)] = std::move(m);
    }
    return cc;
}

}  // namespace detail

inline ChainComplex chain_complex(const CubicalSet& s) {
    return detail::build_complex(s, nullptr, detail::QuotientMode::Plain);
}

// Chain model of the pointed quotient N/L: cells of N \ L plus an explicit
// base-point generator; edges with an endpoint in L attach to the base point.
// Computes the unreduced homology of N/L.
inline ChainComplex pointed_pair_complex(const CubicalSet& N, const CubicalSet& L) {
    if (!L.subset_of(N)) throw std::invalid_argument("L is not contained in N");
    return detail::build_complex(N, &L, detail::QuotientMode::PointedL);
}

// Relative chains of (N, L): boundary entries into L-cells dropped. For
// nonempty L this computes the reduced homology of N/L; for L = {} the result
// keeps an explicit base-point generator so unreduced torus constructions
// over N/{} = N + point remain correct.
inline ChainComplex relative_chain_complex(const CubicalSet& N, const CubicalSet& L) {
    if (!L.subset_of(N)) throw std::invalid_argument("L is not contained in N");
    if (L.empty()) return detail::build_complex(N, &L, detail::QuotientMode::PointedL);
    return detail::build_complex(N, &L, detail::QuotientMode::DropL);
}

// Degree-0 chain map between complexes.
struct ChainMap {
    ComplexPtr src, dst;
    std::vector<SparseIntMat> mat;  // mat[n] : src C_n -> dst C_n, n = 0..src top degree

    const SparseIntMat& at(int n) const {
        static const SparseIntMat empty;
        if (n < 0 || n >= static_cast<int>(mat.size())) return empty;
        return mat[static_cast<std::size_t>(n)];
    }

    bool commutes() const {
        int top = src->top_degree();
        for (int n = 1; n <= top; ++n) {
            SparseIntMat lhs = (n <= dst->top_degree())
                                   ? dst->boundary(n) * at(n)
                                   : SparseIntMat(0, src->dim(n));
            SparseIntMat rhs = at(n - 1) * src->boundary(n);
            if (n > dst->top_degree()) {
                if (!at(n).is_zero() || !rhs.is_zero()) return false;
                continue;
            }
            if (!(lhs == rhs)) return false;
        }
        return true;
    }
};

inline SparseIntMat chain_map_matrix(const ChainMap& f, int n) {
    if (n >= 0 && n < static_cast<int>(f.mat.size())) return f.mat[static_cast<std::size_t>(n)];
    return SparseIntMat(f.dst->dim(n), f.src->dim(n));
}

inline ChainMap compose(const ChainMap& g, const ChainMap& f) {
    if (g.src.get() != f.dst.get())
        throw std::invalid_argument("compose: inner complexes do not match");
    ChainMap h;
    h.src = f.src;
    h.dst = g.dst;
    int top = f.src->top_degree();
    for (int n = 0; n <= top; ++n)
        h.mat.push_back(chain_map_matrix(g, n) * chain_map_matrix(f, n));
    return h;
}

inline ChainMap identity_chain_map(const ComplexPtr& c) {
    ChainMap f;
    f.src = c;
    f.dst = c;
    for (int n = 0; n <= c->top_degree(); ++n)
        f.mat.push_back(SparseIntMat::identity(c->dim(n)));
    return f;
}

inline void validate_chain_map(const ChainMap& f, const char* what) {
    if (!f.commutes())
        throw std::logic_error(std::string(what) + ": chain map does not commute with boundaries");
}

enum class Factor { First, Second };

// Chain-level projection of a product-grid complex onto one factor: an
// n-cube maps to its projected cube when the other factor is fully
// degenerate, and to zero otherwise.
inline ChainMap projection_chain_map(const ComplexPtr& CZ, Factor which, const ComplexPtr& CX) {
    if (!CZ->grid || !CX->grid) throw std::invalid_argument("projection needs grid-labelled complexes");
    int dx = CX->grid->dim();
    int dz = CZ->grid->dim();
    if (dz != 2 * dx) throw std::invalid_argument("projection source must be a product grid");
    int from = (which == Factor::First) ? 0 : dx;
    int drop_from = (which == Factor::First) ? dx : 0;

    ChainMap f;
    f.src = CZ;
    f.dst = CX;
    for (int n = 0; n <= CZ->top_degree(); ++n) {
        SparseIntMat m(CX->dim(n), CZ->dim(n));
        const auto& cs = CZ->cells[static_cast<std::size_t>(n)];
        for (std::size_t j = 0; j < cs.size(); ++j) {
            Cube kept = cs[j].slice(from, from + dx);
            Cube dropped = cs[j].slice(drop_from, drop_from + dx);
            if (dropped.dim() != 0) continue;  // degenerate collapse
            auto idx = CX->index_of(n, kept);
            if (!idx) throw std::invalid_argument("projected cube missing from target: " + kept.str());
            m.set(*idx, j, Int(1));
        }
        f.mat.push_back(std::move(m));
    }
    validate_chain_map(f, "projection_chain_map");
    return f;
}

}  // namespace contor
