#pragma once

#include <cstddef>
#include <vector>

#include "thlab/grid.hpp"

namespace thlab {

/// Cell-centered scalar samples, row-major: data[j*nx + i].
/// Used for the shifted temperature theta (homogeneous Dirichlet at the
/// walls via ghost reflection, periodic in x1) and for generic cell fields
/// such as the discrete divergence or the pressure correction.
struct ScalarField {
    int nx = 0;
    int ny = 0;
    std::vector<double> data;

    ScalarField() = default;
    explicit ScalarField(const Grid& g) : nx(g.nx), ny(g.ny), data(static_cast<size_t>(g.nx) * g.ny, 0.0) {}

    double& at(int i, int j) { return data[static_cast<size_t>(j) * nx + i]; }
    double at(int i, int j) const { return data[static_cast<size_t>(j) * nx + i]; }

    bool conforms(const Grid& g) const { return nx == g.nx && ny == g.ny; }
};

using TemperatureField = ScalarField;

/// MAC velocity: u1 on x-faces (nx*ny values, heights (j+1/2)hy),
/// u2 on y-faces (nx*(ny+1) values, rows j=0..ny). The wall rows of u2
/// (j=0 and j=ny) are Dirichlet zero and are kept identically zero.
struct VelocityField {
    int nx = 0;
    int ny = 0;
    std::vector<double> u1; // nx*ny
    std::vector<double> u2; // nx*(ny+1)

    VelocityField() = default;
    explicit VelocityField(const Grid& g)
        : nx(g.nx), ny(g.ny),
          u1(static_cast<size_t>(g.nx) * g.ny, 0.0),
          u2(static_cast<size_t>(g.nx) * (g.ny + 1), 0.0) {}

    double& U1(int i, int j) { return u1[static_cast<size_t>(j) * nx + i]; }
    double U1(int i, int j) const { return u1[static_cast<size_t>(j) * nx + i]; }
    double& U2(int i, int j) { return u2[static_cast<size_t>(j) * nx + i]; }
    double U2(int i, int j) const { return u2[static_cast<size_t>(j) * nx + i]; }

    // re-pin the Dirichlet rows; cheap and idempotent
    void enforce_wall_bc() {
        for (int i = 0; i < nx; ++i) {
            U2(i, 0) = 0.0;
            U2(i, ny) = 0.0;
        }
    }

    bool conforms(const Grid& g) const { return nx == g.nx && ny == g.ny; }
};

/// The state pair u = {v, theta}.
struct State {
    VelocityField v;
    ScalarField th;

    State() = default;
    explicit State(const Grid& g) : v(g), th(g) {}
};

// ---- elementwise arithmetic -------------------------------------------------

inline void axpy(double a, const ScalarField& x, ScalarField& y) {
    for (size_t n = 0; n < y.data.size(); ++n) y.data[n] += a * x.data[n];
}

inline void axpy(double a, const VelocityField& x, VelocityField& y) {
    for (size_t n = 0; n < y.u1.size(); ++n) y.u1[n] += a * x.u1[n];
    for (size_t n = 0; n < y.u2.size(); ++n) y.u2[n] += a * x.u2[n];
}

inline void axpy(double a, const State& x, State& y) {
    axpy(a, x.v, y.v);
    axpy(a, x.th, y.th);
}

inline void scale(double a, ScalarField& x) {
    for (double& t : x.data) t *= a;
}

inline void scale(double a, VelocityField& x) {
    for (double& t : x.u1) t *= a;
    for (double& t : x.u2) t *= a;
}

inline void scale(double a, State& x) {
    scale(a, x.v);
    scale(a, x.th);
}

inline ScalarField diff(const ScalarField& a, const ScalarField& b) {
    ScalarField r = a;
    axpy(-1.0, b, r);
    return r;
}

inline VelocityField diff(const VelocityField& a, const VelocityField& b) {
    VelocityField r = a;
    axpy(-1.0, b, r);
    return r;
}

inline State diff(const State& a, const State& b) {
    State r = a;
    axpy(-1.0, b, r);
    return r;
}

} // namespace thlab
