#pragma once

#include <stdexcept>

namespace ddc {

/// Uniform cell-centered rectangular mesh. Cells are indexed row-major,
/// cell (i,j) -> i + nx*j, with centers at ((i+1/2)hx, (j+1/2)hy).
struct Grid {
    int nx = 0;
    int ny = 0;
    double Lx = 0.0;
    double Ly = 0.0;
    double hx = 0.0;
    double hy = 0.0;
    double cell_area = 0.0;

    int ncells() const { return nx * ny; }
    int idx(int i, int j) const { return i + nx * j; }
    double xc(int i) const { return (i + 0.5) * hx; }
    double yc(int j) const { return (j + 0.5) * hy; }
    double area() const { return Lx * Ly; }

    bool same_as(const Grid& o) const {
        return nx == o.nx && ny == o.ny && Lx == o.Lx && Ly == o.Ly;
    }
};

inline Grid build_grid(int nx, int ny, double Lx, double Ly) {
    if (nx < 4 || ny < 4)
        throw std::invalid_argument("build_grid: cell counts must be >= 4");
    if (!(Lx > 0.0) || !(Ly > 0.0))
        throw std::invalid_argument("build_grid: domain extents must be positive");
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.Lx = Lx;
    g.Ly = Ly;
    g.hx = Lx / nx;
    g.hy = Ly / ny;
    g.cell_area = g.hx * g.hy;
    return g;
}

}  // namespace ddc
