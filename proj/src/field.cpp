#include "btn/field.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace btn {

Grid::Grid(int nx_, int ny_, double lx_, double ly_)
    : nx(nx_), ny(ny_) {
    if (nx < 3 || ny < 3)
        throw std::invalid_argument("Grid: need nx >= 3 and ny >= 3");
    if (!(lx_ > 0.0) || !(ly_ > 0.0) || !std::isfinite(lx_) || !std::isfinite(ly_))
        throw std::invalid_argument("Grid: side lengths must be positive and finite");
    hx = lx_ / (nx - 1);
    hy = ly_ / (ny - 1);
    // Snap so hx*(nx-1) == lx holds exactly; off by at most one ulp of the input.
    lx = hx * (nx - 1);
    ly = hy * (ny - 1);
}

std::uint64_t Grid::hash() const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t w) {
        for (int b = 0; b < 8; ++b) {
            h ^= (w >> (8 * b)) & 0xffu;
            h *= 1099511628211ull;
        }
    };
    mix(static_cast<std::uint64_t>(nx));
    mix(static_cast<std::uint64_t>(ny));
    mix(std::bit_cast<std::uint64_t>(lx));
    mix(std::bit_cast<std::uint64_t>(ly));
    return h;
}

GridPtr make_grid(int nx, int ny, double lx, double ly) {
    return std::make_shared<const Grid>(nx, ny, lx, ly);
}

ScalarField::ScalarField(GridPtr grid, double fill)
    : grid_(std::move(grid)), v_(static_cast<std::size_t>(grid_->num_nodes()), fill) {}

bool ScalarField::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

bool ScalarField::boundary_is_zero() const {
    const Grid& g = *grid_;
    for (int i = 0; i < g.nx; ++i)
        if (v_[g.node(i, 0)] != 0.0 || v_[g.node(i, g.ny - 1)] != 0.0) return false;
    for (int j = 0; j < g.ny; ++j)
        if (v_[g.node(0, j)] != 0.0 || v_[g.node(g.nx - 1, j)] != 0.0) return false;
    return true;
}

void ScalarField::zero_boundary() {
    const Grid& g = *grid_;
    for (int i = 0; i < g.nx; ++i) {
        v_[g.node(i, 0)] = 0.0;
        v_[g.node(i, g.ny - 1)] = 0.0;
    }
    for (int j = 0; j < g.ny; ++j) {
        v_[g.node(0, j)] = 0.0;
        v_[g.node(g.nx - 1, j)] = 0.0;
    }
}

VectorField2::VectorField2(ScalarField a, ScalarField b)
    : c1(std::move(a)), c2(std::move(b)) {
    if (!c1.grid().same_geometry(c2.grid()))
        throw std::invalid_argument("VectorField2: components must share one grid");
}

double VectorField2::max_magnitude() const {
    double best = 0.0;
    const auto a = c1.values(), b = c2.values();
    for (std::size_t k = 0; k < a.size(); ++k)
        best = std::max(best, std::sqrt(a[k] * a[k] + b[k] * b[k]));
    return best;
}

namespace {

void put_le64(std::ostream& os, double x) {
    auto w = std::bit_cast<std::uint64_t>(x);
    unsigned char bytes[8];
    for (int b = 0; b < 8; ++b) bytes[b] = static_cast<unsigned char>((w >> (8 * b)) & 0xffu);
    os.write(reinterpret_cast<const char*>(bytes), 8);
}

double get_le64(std::istream& is) {
    unsigned char bytes[8];
    is.read(reinterpret_cast<char*>(bytes), 8);
    std::uint64_t w = 0;
    for (int b = 0; b < 8; ++b) w |= static_cast<std::uint64_t>(bytes[b]) << (8 * b);
    return std::bit_cast<double>(w);
}

} // namespace

void write_field(const std::filesystem::path& path, const ScalarField& f) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_field: cannot open " + path.string());
    const Grid& g = f.grid();
    char header[128];
    std::snprintf(header, sizeof(header), "BTNFIELD v1 %d %d %.17g %.17g\n",
                  g.nx, g.ny, g.lx, g.ly);
    os << header;
    for (double x : f.values()) put_le64(os, x);
    if (!os) throw std::runtime_error("write_field: write failed for " + path.string());
}

ScalarField read_field(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_field: cannot open " + path.string());
    std::string line;
    std::getline(is, line);
    std::istringstream hs(line);
    std::string magic, version;
    int nx = 0, ny = 0;
    double lx = 0.0, ly = 0.0;
    hs >> magic >> version >> nx >> ny >> lx >> ly;
    if (!hs || magic != "BTNFIELD" || version != "v1")
        throw std::runtime_error("read_field: bad header in " + path.string());
    ScalarField f(make_grid(nx, ny, lx, ly));
    for (double& x : f.values()) x = get_le64(is);
    if (!is) throw std::runtime_error("read_field: truncated data in " + path.string());
    return f;
}

} // namespace btn
