#pragma once

#include "thlab/field.hpp"
#include "thlab/grid.hpp"

namespace thlab {

// Discrete L2 scalar products. Quadrature weight hx*hy per degree of freedom;
// the u2 wall rows carry half weight but are identically zero, so they drop out.
double inner_l2(const ScalarField& a, const ScalarField& b, const Grid& g);
double inner_l2(const VelocityField& a, const VelocityField& b, const Grid& g);

double l2_norm(const ScalarField& f, const Grid& g);
double l2_norm(const VelocityField& f, const Grid& g);

/// |{v,theta}| = sqrt(|v|^2 + |theta|^2)
double l2_norm(const State& u, const Grid& g);

// Discrete Dirichlet forms. One-sided (half-cell) differences at the walls,
// periodic wrap in x1. Chosen so that (apply_A1(v), v) == h1_seminorm(v)^2
// holds exactly by summation by parts.
double h1_seminorm(const ScalarField& f, const Grid& g);
double h1_seminorm(const VelocityField& f, const Grid& g);
double h1_seminorm(const State& u, const Grid& g);

/// MAC divergence at cell centers.
ScalarField divergence(const VelocityField& v, const Grid& g);
double max_abs_divergence(const VelocityField& v, const Grid& g);

/// theta = T - T0 + x2 sampled at cell centers.
ScalarField shift_temperature(const ScalarField& T_physical, double T0, const Grid& g);

/// Interpolate a cell scalar to interior y-faces (two-point average); wall
/// faces get zero. This is the e2*theta buoyancy carrier in the v-equation.
VelocityField theta_to_yfaces(const ScalarField& th, const Grid& g);

/// Interpolate u2 to cell centers (two-point average); the v2 source in the
/// theta-equation.
ScalarField u2_to_centers(const VelocityField& v, const Grid& g);

} // namespace thlab
