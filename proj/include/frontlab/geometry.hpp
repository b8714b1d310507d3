// Wall geometry: obstacle descriptions, cell-center rasterization to a grid
// mask, and the geometric functionals (hole measure, blade flux, tunnel
// clearance, directional-convexity scan) used by the propagation criteria.
#ifndef FRONTLAB_GEOMETRY_HPP
#define FRONTLAB_GEOMETRY_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace frontlab {

struct DisconnectedComplement : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ObstacleOutsideSlab : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct TooCloseToObstacle : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct BadGeometry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Rect {
    double x0, y0, x1, y1;
    bool contains(double x, double y) const {
        return x >= x0 && x <= x1 && y >= y0 && y <= y1;
    }
};

struct Point {
    double x, y;
};

// Obstacle variants. All live inside the slab {0 <= x1 <= M}; y is the
// transverse coordinate, with the domain either y-periodic or reflecting.
struct Empty {};

struct SlabWithHoles {
    double a, b;                   // slab occupies a <= x1 <= b
    std::vector<Rect> hole_rects;  // fluid carve-outs
};

struct PeriodicSlits {
    double thickness;    // slab 0 <= x1 <= thickness
    double slit_width;
    double period;       // slit centered at period/2 (mod period) in y
};

struct ParallelBlades {
    double blade_len;        // blades span 0 <= x1 <= blade_len
    double blade_thickness;
    double gap;              // fluid gap between consecutive blades
    int count;               // blades per periodicity cell
};

struct Debris {
    std::vector<Point> disk_centers;
    double disk_radius;
    std::vector<Rect> solid_rects;  // optional surrounding wall pieces
};

// Directionally convex block: piecewise-linear profile (y, x_lo, x_hi),
// sorted by y; the block is the union of the segments [x_lo(y), x_hi(y)].
struct ConvexBlock {
    struct Section {
        double y, x_lo, x_hi;
    };
    std::vector<Section> profile;
};

// Narrow-mouth reservoir: solid block with an interior cavity connected to
// the left face by a thin mouth channel.
struct Reservoir {
    double mouth_width;
    double cavity_size;   // square cavity side
    double entrance_len;  // mouth channel length (block face to cavity)
    double wall_margin = 0.3;
};

struct ObstacleSpec {
    std::variant<Empty, SlabWithHoles, PeriodicSlits, ParallelBlades, Debris,
                 ConvexBlock, Reservoir>
        shape;
    double M() const;                        // wall thickness bound
    bool contains(double x, double y) const; // solid-membership test
};

enum class LateralBC { periodic, reflecting };

struct GridDomain {
    double h = 0.05;
    int nx = 0, ny = 0;
    LateralBC lateral_bc = LateralBC::reflecting;
    double x1_offset = 0.0;  // world x of the left edge of column 0
    double M = 0.0;
    std::vector<std::uint8_t> solid;  // 1 = obstacle cell

    std::size_t idx(int ix, int iy) const {
        return std::size_t(ix) * ny + iy;
    }
    bool is_solid(int ix, int iy) const { return solid[idx(ix, iy)] != 0; }
    double xc(int ix) const { return x1_offset + (ix + 0.5) * h; }
    double yc(int iy) const { return (iy + 0.5) * h; }
    double height() const { return ny * h; }
    std::size_t cells() const { return std::size_t(nx) * ny; }
};

// Grid-sampled function; values on solid cells are kept at 0.
struct ScalarField {
    const GridDomain* grid = nullptr;
    std::vector<double> values;

    explicit ScalarField(const GridDomain& g)
        : grid(&g), values(g.cells(), 0.0) {}
    double& at(int ix, int iy) { return values[grid->idx(ix, iy)]; }
    double at(int ix, int iy) const { return values[grid->idx(ix, iy)]; }
};

struct Extent {
    double x_min, x_max, height;
};

GridDomain rasterize(const ObstacleSpec& spec, double h, const Extent& extent,
                     LateralBC bc);

// Lebesgue measure (cells x h^2) of fluid cells with a < x1 < b, restricted
// to one periodicity cell for periodic walls.
double hole_measure(const ObstacleSpec& spec, const GridDomain& grid);

// Exact boundary integral of |nu . e1| over one periodicity cell: the blade
// end caps are the only contributions.
double blade_flux(const ParallelBlades& spec);

// Largest rho such that fluid cells with distance-to-solid >= rho connect
// {x1 < 0} to {x1 > M}; the empty obstacle reports the domain half-height.
double tunnel_clearance(const GridDomain& grid);

// Definition 4.8 line-scan test on the rasterized mask: every grid row and
// column meets the solid set in one run, and the leftmost solid column's
// cross-section equals the y-projection of the whole solid set.
bool convex_line_scan(const GridDomain& grid);

// Euclidean distance transform: per-cell distance (world units) to the
// nearest solid cell center; +inf when there are no solid cells.
std::vector<double> distance_to_solid(const GridDomain& grid);

}  // namespace frontlab

#endif
