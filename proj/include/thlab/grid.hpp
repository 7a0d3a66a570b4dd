#pragma once

#include <stdexcept>

namespace thlab {

/// Staggered MAC layout on the unit square (0,1)x(0,1).
/// x1 is the periodic direction (nx cells), x2 is wall-bounded (ny cells).
/// u1 lives on x-faces (i*hx, (j+1/2)*hy), u2 on y-faces ((i+1/2)*hx, j*hy),
/// theta and cell scalars at centers ((i+1/2)*hx, (j+1/2)*hy).
struct Grid {
    int nx = 0;
    int ny = 0;
    double hx = 0.0;
    double hy = 0.0;

    int n_u1() const { return nx * ny; }
    int n_u2() const { return nx * (ny + 1); }
    int n_cell() const { return nx * ny; }

    double xf(int i) const { return i * hx; }
    double xc(int i) const { return (i + 0.5) * hx; }
    double yf(int j) const { return j * hy; }
    double yc(int j) const { return (j + 0.5) * hy; }

    // periodic wrap of an x-index
    int wrap(int i) const {
        if (i >= nx) return i - nx;
        if (i < 0) return i + nx;
        return i;
    }

    bool operator==(const Grid& o) const { return nx == o.nx && ny == o.ny; }
    bool operator!=(const Grid& o) const { return !(*this == o); }
};

inline Grid make_grid(int nx, int ny) {
    if (nx < 4 || ny < 4)
        throw std::invalid_argument("make_grid: nx and ny must be >= 4 (degenerate stencils)");
    Grid g;
    g.nx = nx;
    g.ny = ny;
    g.hx = 1.0 / nx;
    g.hy = 1.0 / ny;
    return g;
}

} // namespace thlab
