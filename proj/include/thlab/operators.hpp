#pragma once

#include <cstdint>

#include "thlab/field.hpp"
#include "thlab/grid.hpp"

namespace thlab {

/// Negative discrete Laplacian on MAC velocities with the scheme's boundary
/// conditions (periodic x1, Dirichlet ghost reflection for u1, vertex
/// Dirichlet rows for u2). Unweighted: callers apply nu. Satisfies
/// (apply_A1(v), v) = h1_seminorm(v)^2 by summation by parts.
VelocityField apply_A1(const VelocityField& v, const Grid& g);

/// Scalar analogue for cell-centered fields.
ScalarField apply_A2(const ScalarField& th, const Grid& g);

/// Raw convective forms (y.grad w, z); building blocks of the skew forms.
double conv_form(const VelocityField& y, const VelocityField& w, const VelocityField& z, const Grid& g);
double conv_form(const VelocityField& y, const ScalarField& phi, const ScalarField& psi, const Grid& g);

/// Skew trilinear forms: b(y,w,z) = ((y.grad w, z) - (y.grad z, w)) / 2.
/// b1(y,w,w) = 0 and b1(y,w,z) = -b1(y,z,w) hold exactly by construction.
double b1(const VelocityField& y, const VelocityField& w, const VelocityField& z, const Grid& g);
double b2(const VelocityField& y, const ScalarField& phi, const ScalarField& psi, const Grid& g);

/// L2 representers of the skew advection: (skew_advect(y,w), z) = b(y,w,z)
/// for every admissible z. These drive the implicit step and the residuals.
VelocityField skew_advect(const VelocityField& y, const VelocityField& w, const Grid& g);
ScalarField skew_advect(const VelocityField& y, const ScalarField& phi, const Grid& g);

/// Coupling operator Ru = -{e2 theta, v2} with two-point interpolation of
/// theta to y-faces and of u2 to centers.
State apply_R(const State& u, const Grid& g);

/// Monte-Carlo lower estimate of the discrete Ladyzhenskaya constant in
/// |b1(y,w,z)| <= c_b |y|^(1/2) ||y||^(1/2) ||w|| |z|^(1/2) ||z||^(1/2),
/// maximized over random divergence-free triples. Deterministic given seed;
/// nondecreasing in the sample count for a fixed seed. sampler_kind selects
/// an independent generator family (0 = projected white noise, 1 = smooth
/// streamfunction modes) for cross-checking.
double estimate_cb(const Grid& g, int samples, uint64_t seed, int sampler_kind = 0);

} // namespace thlab
