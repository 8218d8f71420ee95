#ifndef BTN_FIELD_HPP
#define BTN_FIELD_HPP

#include <filesystem>
#include <memory>
#include <span>
#include <vector>

namespace btn {

/// Uniform node-centered rectangular grid on [0,lx] x [0,ly].
/// Node (i,j) sits at (i*hx, j*hy); storage over the grid is row-major,
/// index = j*nx + i. The side lengths are snapped so that hx*(nx-1) == lx
/// and hy*(ny-1) == ly hold exactly in floating point.
struct Grid {
    int nx = 0;
    int ny = 0;
    double lx = 0.0;
    double ly = 0.0;
    double hx = 0.0;
    double hy = 0.0;

    Grid(int nx_, int ny_, double lx_, double ly_);

    int num_nodes() const { return nx * ny; }
    int num_interior() const { return (nx - 2) * (ny - 2); }
    int node(int i, int j) const { return j * nx + i; }
    double x(int i) const { return i * hx; }
    double y(int j) const { return j * hy; }
    bool on_boundary(int i, int j) const {
        return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
    }
    bool same_geometry(const Grid& o) const {
        return nx == o.nx && ny == o.ny && lx == o.lx && ly == o.ly;
    }
    /// FNV-1a over the defining parameters; used by run manifests.
    std::uint64_t hash() const;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int nx, int ny, double lx = 1.0, double ly = 1.0);

/// Nodal scalar field. A plain value snapshot: copying copies the data,
/// the grid is shared and immutable.
class ScalarField {
public:
    explicit ScalarField(GridPtr grid, double fill = 0.0);

    const Grid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }

    double& operator()(int i, int j) { return v_[grid_->node(i, j)]; }
    double operator()(int i, int j) const { return v_[grid_->node(i, j)]; }
    double& operator[](int k) { return v_[k]; }
    double operator[](int k) const { return v_[k]; }

    std::span<double> values() { return v_; }
    std::span<const double> values() const { return v_; }
    int size() const { return static_cast<int>(v_.size()); }

    bool all_finite() const;
    bool boundary_is_zero() const;
    /// Overwrite every boundary node with exactly 0.
    void zero_boundary();

private:
    GridPtr grid_;
    std::vector<double> v_;
};

/// Two scalar components (m1, m2) on a shared grid.
struct VectorField2 {
    ScalarField c1;
    ScalarField c2;

    explicit VectorField2(GridPtr grid, double fill = 0.0)
        : c1(grid, fill), c2(std::move(grid), fill) {}
    VectorField2(ScalarField a, ScalarField b);

    const Grid& grid() const { return c1.grid(); }
    const GridPtr& grid_ptr() const { return c1.grid_ptr(); }
    bool all_finite() const { return c1.all_finite() && c2.all_finite(); }
    bool boundary_is_zero() const {
        return c1.boundary_is_zero() && c2.boundary_is_zero();
    }
    void zero_boundary() {
        c1.zero_boundary();
        c2.zero_boundary();
    }
    double max_magnitude() const;
};

// Field snapshots: text header "BTNFIELD v1 nx ny lx ly\n" followed by
// nx*ny little-endian IEEE-754 doubles in row-major node order. The header
// prints lx/ly with max_digits10 so the round-trip is bit-exact.
void write_field(const std::filesystem::path& path, const ScalarField& f);
ScalarField read_field(const std::filesystem::path& path);

} // namespace btn

#endif
