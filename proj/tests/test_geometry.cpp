#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frontlab/geometry.hpp"
#include "frontlab/radial.hpp"

using namespace frontlab;

TEST_CASE("empty spec rasterizes to an all-fluid mask") {
    ObstacleSpec spec{Empty{}};
    auto g = rasterize(spec, 0.05, {-2.0, 3.0, 2.0}, LateralBC::periodic);
    CHECK(g.nx == 100);
    CHECK(g.ny == 40);
    for (auto s : g.solid) CHECK(s == 0);
    CHECK(g.M == 0.0);
    CHECK(tunnel_clearance(g) == doctest::Approx(1.0));  // half-height
}

TEST_CASE("periodic slit wall: slit width in cells, hole measure") {
    ObstacleSpec spec{PeriodicSlits{1.0, 0.05, 4.0}};
    auto g = rasterize(spec, 0.025, {-1.0, 2.0, 4.0}, LateralBC::periodic);
    // slit is exactly 2 cells wide in every wall column
    for (int ix = 0; ix < g.nx; ++ix) {
        double x = g.xc(ix);
        if (x < 0.0 || x > 1.0) continue;
        int fluid = 0;
        for (int iy = 0; iy < g.ny; ++iy)
            if (!g.is_solid(ix, iy)) ++fluid;
        CHECK(fluid == 2);
    }
    CHECK(hole_measure(spec, g) == doctest::Approx(0.05).epsilon(0.05));
    CHECK(tunnel_clearance(g) < 7.0);  // far below any bubble radius
}

TEST_CASE("sealed slab has a disconnected complement") {
    ObstacleSpec spec{SlabWithHoles{0.0, 1.0, {}}};
    CHECK_THROWS_AS(rasterize(spec, 0.05, {-2.0, 3.0, 2.0},
                              LateralBC::periodic),
                    DisconnectedComplement);
    // hole_measure on a manually sealed mask is zero
    GridDomain g;
    g.h = 0.1;
    g.nx = 30;
    g.ny = 10;
    g.x1_offset = -1.0;
    g.M = 1.0;
    g.solid.assign(g.cells(), 0);
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy)
            if (g.xc(ix) > 0.0 && g.xc(ix) < 1.0) g.solid[g.idx(ix, iy)] = 1;
    CHECK(hole_measure(spec, g) == 0.0);
}

TEST_CASE("hole measure of two rectangular holes, grid refinement") {
    // two holes 0.13 x 1 each: analytic area 0.26, first-order convergence
    ObstacleSpec spec{SlabWithHoles{
        0.0, 1.0,
        {Rect{-0.5, 0.815, 1.5, 0.945}, Rect{-0.5, 2.635, 1.5, 2.765}}}};
    double exact = 0.26;
    for (double h : {0.05, 0.025}) {
        auto g = rasterize(spec, h, {-1.0, 2.0, 4.0}, LateralBC::periodic);
        CHECK(std::abs(hole_measure(spec, g) - exact) <= 2.2 * h * h / 0.05);
    }
}

TEST_CASE("obstacle outside the slab is rejected") {
    ObstacleSpec spec{Debris{{{-1.0, 1.0}}, 0.25, {}}};
    CHECK_THROWS_AS(rasterize(spec, 0.05, {-2.0, 2.0, 2.0},
                              LateralBC::reflecting),
                    ObstacleOutsideSlab);
}

TEST_CASE("blade flux") {
    CHECK(blade_flux({1.0, 0.05, 0.35, 1}) == doctest::Approx(0.1));
    CHECK(blade_flux({1.0, 0.05, 0.35, 0}) == 0.0);
    CHECK(blade_flux({1.0, 0.02, 0.35, 3}) == doctest::Approx(0.12));
}

TEST_CASE("tunnel clearance: wide tunnel admits the critical ball") {
    double R0 = 7.3955, h = 0.05;
    double w = 2.0 * R0 + 4.0 * h;  // tunnel width
    ObstacleSpec spec{SlabWithHoles{
        0.0, 1.0, {Rect{-0.5, 2.0, 1.5, 2.0 + w}}}};
    auto g = rasterize(spec, h, {-3.0, 4.0, w + 8.0}, LateralBC::reflecting);
    double rho = tunnel_clearance(g);
    CHECK(rho >= R0);
    CHECK(rho <= w / 2.0 + 2.0 * h);
}

TEST_CASE("clearance is monotone under added debris") {
    std::vector<Rect> walls{Rect{0.0, 0.0, 1.0, 2.0},
                            Rect{0.0, 8.0, 1.0, 10.0}};
    double prev = 1e9;
    std::vector<Point> disks;
    for (int n = 0; n <= 2; ++n) {
        ObstacleSpec spec{Debris{disks, 0.3, walls}};
        auto g =
            rasterize(spec, 0.05, {-2.0, 3.0, 10.0}, LateralBC::reflecting);
        double rho = tunnel_clearance(g);
        CHECK(rho <= prev + 1e-12);
        prev = rho;
        disks.push_back(n == 0 ? Point{0.5, 5.0} : Point{0.5, 6.5});
    }
    CHECK(prev < 3.0);
}

TEST_CASE("directional convexity line scan") {
    // flat left face: the x1=a cross-section carries the whole shadow
    ObstacleSpec trap{ConvexBlock{{{0.0, 0.0, 1.0}, {2.0, 0.0, 0.2}}}};
    auto g = rasterize(trap, 0.05, {-2.0, 3.0, 8.0}, LateralBC::reflecting);
    CHECK(convex_line_scan(g));

    // slanted left face: segments fine, but the left cross-section is short
    ObstacleSpec slant{ConvexBlock{{{0.0, 0.0, 1.0}, {2.0, 0.4, 0.6}}}};
    auto g1 = rasterize(slant, 0.05, {-2.0, 3.0, 8.0}, LateralBC::reflecting);
    CHECK(!convex_line_scan(g1));

    // two separated disks violate the single-run condition
    ObstacleSpec two{Debris{{{0.5, 1.0}, {0.5, 3.0}}, 0.3, {}}};
    auto g2 = rasterize(two, 0.05, {-2.0, 3.0, 4.0}, LateralBC::reflecting);
    CHECK(!convex_line_scan(g2));
}

TEST_CASE("bubble embedding") {
    Nonlinearity nl(0.25);
    auto b = solve_bubble(nl, 8.0, 2);
    REQUIRE(b.has_value());
    ObstacleSpec spec{SlabWithHoles{
        0.0, 1.0, {Rect{-0.5, 10.0, 1.5, 30.0}}}};
    auto g = rasterize(spec, 0.1, {-30.0, 5.0, 40.0}, LateralBC::reflecting);
    Point P{-15.0, 20.0};
    auto u = embed_bubble(*b, P, g);
    double worst = 0.0;
    for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
            double r = std::hypot(g.xc(ix) - P.x, g.yc(iy) - P.y);
            if (r >= b->R) CHECK(u.at(ix, iy) == 0.0);
            worst = std::max(worst, u.at(ix, iy));
        }
    // center cell carries ~Psi(0) > alpha
    CHECK(worst > nl.alpha);
    CHECK(worst <= b->center_value + 1e-12);
    CHECK_THROWS_AS(embed_bubble(*b, Point{-4.0, 5.0}, g),
                    TooCloseToObstacle);
}
