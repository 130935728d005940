#pragma once

#include <vector>

#include "ddc/grid.hpp"

namespace ddc {

/// One value per cell, row-major (i + nx*j).
struct ScalarField {
    Grid grid;
    std::vector<double> data;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0)
        : grid(g), data(static_cast<size_t>(g.ncells()), fill) {}

    double& operator()(int i, int j) { return data[static_cast<size_t>(grid.idx(i, j))]; }
    double operator()(int i, int j) const { return data[static_cast<size_t>(grid.idx(i, j))]; }
    double& operator[](int c) { return data[static_cast<size_t>(c)]; }
    double operator[](int c) const { return data[static_cast<size_t>(c)]; }
    int size() const { return grid.ncells(); }
};

/// One value per interior face, split by orientation. Boundary faces are not
/// stored; every operation treats them as zero flux.
///   x-face k = i + (nx-1)*j sits between cells (i,j) and (i+1,j), 0 <= i < nx-1
///   y-face k = i + nx*j     sits between cells (i,j) and (i,j+1), 0 <= j < ny-1
struct FaceField {
    Grid grid;
    std::vector<double> x;
    std::vector<double> y;

    FaceField() = default;
    explicit FaceField(const Grid& g)
        : grid(g),
          x(static_cast<size_t>((g.nx - 1) * g.ny), 0.0),
          y(static_cast<size_t>(g.nx * (g.ny - 1)), 0.0) {}

    int xidx(int i, int j) const { return i + (grid.nx - 1) * j; }
    int yidx(int i, int j) const { return i + grid.nx * j; }
};

}  // namespace ddc
