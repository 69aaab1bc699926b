#include "contor/cubical.hpp"
#include "contor/homology.hpp"

#include "support.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace contor;
using testsupport::Rng;

namespace {
GridPtr line_grid(int n) {
    return std::make_shared<Grid>(Box{Interval(Rat(-2), Rat(2))}, std::vector<int>{n});
}
CubicalSet full_line(const GridPtr& g) {
    std::vector<std::vector<int>> tops;
    for (int k = 0; k < g->ncells[0]; ++k) tops.push_back({k});
    return CubicalSet::from_top_cells(g, tops);
}
}  // namespace

TEST_CASE("chain complex of the full interval: 9 vertices, 8 edges, boundary rank 8") {
    auto g = line_grid(8);
    ChainComplex c = chain_complex(full_line(g));
    REQUIRE(c.top_degree() == 1);
    CHECK(c.dim(0) == 9);
    CHECK(c.dim(1) == 8);
    CHECK(c.boundary_squares_to_zero());
    CHECK(testsupport::rank_oracle(c.boundary(1)) == 8);
}

TEST_CASE("single vertex complex") {
    auto g = line_grid(2);
    CubicalSet s(g);
    s.insert_with_closure(Cube::vertex({1}));
    ChainComplex c = chain_complex(s);
    CHECK(c.dim(0) == 1);
    CHECK(c.top_degree() == 0);
    auto h = homology(c);
    REQUIRE(h.size() == 1);
    CHECK(h[0] == HomologyGroup::free(1));
}

TEST_CASE("unit square closure: 4 vertices, 4 edges, 1 square, boundary rank 1") {
    auto g = std::make_shared<Grid>(Box{Interval(Rat(0), Rat(1)), Interval(Rat(0), Rat(1))},
                                    std::vector<int>{1, 1});
    CubicalSet s = CubicalSet::from_top_cells(g, {{0, 0}});
    ChainComplex c = chain_complex(s);
    CHECK(c.dim(0) == 4);
    CHECK(c.dim(1) == 4);
    CHECK(c.dim(2) == 1);
    CHECK(c.boundary_squares_to_zero());
    CHECK(testsupport::rank_oracle(c.boundary(2)) == 1);
}

TEST_CASE("relative complex of the 2x index pair is a circle") {
    auto g = line_grid(8);
    CubicalSet N = full_line(g);
    CubicalSet L = CubicalSet::from_top_cells(g, {{0}, {1}, {6}, {7}});
    auto h = homology(relative_chain_complex(N, L));
    REQUIRE(h.size() == 2);
    CHECK(h[0] == HomologyGroup{});       // H0 = 0
    CHECK(h[1] == HomologyGroup::free(1));  // H1 = Z
}

TEST_CASE("horseshoe square with three strips removed: H1 = Z^2") {
    auto g = std::make_shared<Grid>(Box{Interval(Rat(0), Rat(1)), Interval(Rat(0), Rat(1))},
                                    std::vector<int>{1, 5});
    std::vector<std::vector<int>> all;
    for (int r = 0; r < 5; ++r) all.push_back({0, r});
    CubicalSet N = CubicalSet::from_top_cells(g, all);
    CubicalSet L = CubicalSet::from_top_cells(g, {{0, 0}, {0, 2}, {0, 4}});
    auto h = homology(relative_chain_complex(N, L));
    REQUIRE(h.size() >= 2);
    CHECK(h[0] == HomologyGroup{});
    CHECK(h[1] == HomologyGroup::free(2));
    if (h.size() > 2) CHECK(h[2] == HomologyGroup{});
}

TEST_CASE("L = N gives the zero complex plus base-point convention") {
    auto g = line_grid(4);
    CubicalSet N = full_line(g);
    ChainComplex c = relative_chain_complex(N, N);
    for (int n = 0; n <= c.top_degree(); ++n) CHECK(c.dim(n) == 0);
    // pointed variant keeps exactly the base point
    ChainComplex p = pointed_pair_complex(N, N);
    CHECK(p.dim(0) == 1);
    auto h = homology(p);
    CHECK(h[0] == HomologyGroup::free(1));
}

TEST_CASE("relative complex with empty L = chain complex plus one extra Z in degree 0") {
    Rng rng(31);
    auto g2 = std::make_shared<Grid>(Box{Interval(Rat(0), Rat(3)), Interval(Rat(0), Rat(3))},
                                     std::vector<int>{3, 3});
    for (int t = 0; t < 5; ++t) {
        CubicalSet s = testsupport::random_cubical_set(rng, g2, 6);
        auto plain = homology(chain_complex(s));
        auto rel = homology(relative_chain_complex(s, CubicalSet(g2)));
        REQUIRE(!rel.empty());
        HomologyGroup h0 = rel[0];
        REQUIRE(h0.betti >= 1);
        h0.betti -= 1;  // remove the base-point summand
        CHECK(h0 == plain[0]);
        for (std::size_t n = 1; n < std::max(plain.size(), rel.size()); ++n) {
            HomologyGroup a = n < plain.size() ? plain[n] : HomologyGroup{};
            HomologyGroup b = n < rel.size() ? rel[n] : HomologyGroup{};
            CHECK(a == b);
        }
    }
}

TEST_CASE("errors: L not inside N, cubes outside the grid") {
    auto g = line_grid(4);
    CubicalSet N = CubicalSet::from_top_cells(g, {{0}, {1}});
    CubicalSet L = CubicalSet::from_top_cells(g, {{3}});
    CHECK_THROWS_AS(relative_chain_complex(N, L), std::invalid_argument);
    CubicalSet s(g);
    CHECK_THROWS_AS(s.insert_with_closure(Cube::top_cell({7})), std::out_of_range);
}

TEST_CASE("projection chain maps collapse degenerate factors") {
    auto g = line_grid(4);
    CubicalSet X = full_line(g);
    auto CX = std::make_shared<const ChainComplex>(chain_complex(X));

    // diagonal enclosure of the identity: closure of cells c x c
    auto g2 = std::make_shared<Grid>(Grid::product(*g, *g));
    CubicalSet Z(g2);
    for (int k = 0; k < 4; ++k)
        Z.insert_with_closure(product(Cube::top_cell({k}), Cube::top_cell({k})));
    auto CZ = std::make_shared<const ChainComplex>(chain_complex(Z));

    ChainMap p = projection_chain_map(CZ, Factor::First, CX);
    ChainMap q = projection_chain_map(CZ, Factor::Second, CX);
    CHECK(p.commutes());
    CHECK(q.commutes());

    // vertex (v, w) -> v under p, -> w under q
    Cube vw = product(Cube::vertex({1}), Cube::vertex({2}));
    auto jv = CZ->index_of(0, vw);
    REQUIRE(jv);
    auto pv = CX->index_of(0, Cube::vertex({1}));
    auto qv = CX->index_of(0, Cube::vertex({2}));
    CHECK(p.at(0).get(*pv, *jv) == 1);
    CHECK(q.at(0).get(*qv, *jv) == 1);

    // edge x vertex -> edge under p, -> 0 under q
    Cube ev = product(Cube::top_cell({1}), Cube::vertex({1}));
    auto je = CZ->index_of(1, ev);
    REQUIRE(je);
    auto pe = CX->index_of(1, Cube::top_cell({1}));
    CHECK(p.at(1).get(*pe, *je) == 1);
    for (std::size_t i = 0; i < CX->dim(1); ++i) CHECK(q.at(1).get(i, *je) == 0);

    // square e x f -> 0 under both projections in degree 2
    Cube sq = product(Cube::top_cell({2}), Cube::top_cell({2}));
    auto js = CZ->index_of(2, sq);
    REQUIRE(js);
    for (std::size_t i = 0; i < p.at(2).rows(); ++i) CHECK(p.at(2).get(i, *js) == 0);
    for (std::size_t i = 0; i < q.at(2).rows(); ++i) CHECK(q.at(2).get(i, *js) == 0);
}
