#include <cmath>

#include "doctest.h"
#include "nocsched/mesh.hpp"

using namespace nocsched;

TEST_CASE("row-major tile indexing") {
    Mesh m(3, 5);
    CHECK(m.tile_count() == 15);
    CHECK(m.row_of(7) == 1);
    CHECK(m.col_of(7) == 2);
    CHECK(m.tile_at(2, 1) == 7);
    CHECK(m.valid_tile(0));
    CHECK(m.valid_tile(14));
    CHECK(!m.valid_tile(15));
    CHECK(!m.valid_tile(-1));
}

TEST_CASE("neighbor counts on a 4x4 mesh") {
    Mesh m(4, 4);
    // corners have 2 neighbors, edges 3, interior 4
    CHECK(m.neighbors(0).size() == 2);
    CHECK(m.neighbors(3).size() == 2);
    CHECK(m.neighbors(12).size() == 2);
    CHECK(m.neighbors(15).size() == 2);
    CHECK(m.neighbors(1).size() == 3);
    CHECK(m.neighbors(4).size() == 3);
    CHECK(m.neighbors(5).size() == 4);
    CHECK(m.neighbors(10).size() == 4);
    // neighborhood is symmetric
    for (int t = 0; t < m.tile_count(); ++t)
        for (int n : m.neighbors(t)) {
            bool back = false;
            for (int nn : m.neighbors(n)) back |= (nn == t);
            CHECK(back);
        }
}

TEST_CASE("center and distances") {
    Mesh m(4, 4);
    const Point c = m.center();
    CHECK(c.x == doctest::Approx(1.5));
    CHECK(c.y == doctest::Approx(1.5));
    CHECK(dist_from_point(m, 0, c) == doctest::Approx(std::sqrt(4.5)));
    CHECK(dist_from_point(m, 5, c) == doctest::Approx(std::sqrt(0.5)));
    CHECK(m.diagonal() == doctest::Approx(std::sqrt(18.0)));
}

TEST_CASE("xy routing is column-segment-first") {
    Mesh m(4, 4);
    // tile 0 = (col 0, row 0), tile 15 = (col 3, row 3)
    const Route r = xy_route(m, 0, 15);
    const Route want = {0, 1, 2, 3, 7, 11, 15};
    CHECK(r == want);
    // reverse direction
    const Route back = xy_route(m, 15, 0);
    const Route want_back = {15, 14, 13, 12, 8, 4, 0};
    CHECK(back == want_back);
    // degenerate route
    CHECK(xy_route(m, 6, 6) == Route{6});
    CHECK_THROWS(xy_route(m, 0, 16));
}

TEST_CASE("grid interpolation: hand-computed 2x2 bilinear values") {
    Mesh m(2, 2);
    // tiles row-major: (c0,r0)=310 (c1,r0)=320 (c0,r1)=330 (c1,r1)=340
    const std::vector<double> temps = {310, 320, 330, 340};
    const auto g = interpolate_grid(m, temps);
    const double want[9] = {310, 315, 320, 320, 325, 330, 330, 335, 340};
    for (int i = 0; i < 9; ++i) CHECK(g[i] == doctest::Approx(want[i]));
}

TEST_CASE("grid interpolation is the identity on a 3x3 mesh") {
    Mesh m(3, 3);
    const std::vector<double> temps = {331, 339, 342, 350, 336, 348, 333, 345, 358};
    const auto g = interpolate_grid(m, temps);
    for (int i = 0; i < 9; ++i) CHECK(g[i] == doctest::Approx(temps[i]).epsilon(1e-12));
}
