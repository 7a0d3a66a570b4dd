#pragma once

#include <complex>
#include <vector>

#include "thlab/fft.hpp"
#include "thlab/field.hpp"
#include "thlab/grid.hpp"

namespace thlab {

/// Leray projection of a MAC velocity onto the discretely divergence-free
/// subspace: v -> v - grad(q), div(grad q) = div(v), periodic in x1 and
/// homogeneous Neumann in x2. Direct solver: DFT in x1, one real tridiagonal
/// factorization per wavenumber in x2. The zero wavenumber is singular up to
/// constants; q is fixed by zero mean.
class PressureProjector {
public:
    explicit PressureProjector(const Grid& g);

    /// Solve div(grad q) = rhs (rhs must have zero mean up to roundoff).
    ScalarField solve(const ScalarField& rhs) const;

    VelocityField project(const VelocityField& v) const;

private:
    Grid g_;
    Dft dft_;
    int nh_;
    // per-wavenumber Thomas factorizations of (lambda_x(m) + L_Neumann,y)
    std::vector<std::vector<double>> diag_mod_;  // modified diagonals
    std::vector<std::vector<double>> sub_mult_;  // forward-elimination multipliers
    double off_;                                 // constant off-diagonal (-1/hy^2)
    mutable std::vector<std::complex<double>> spec_; // ny * nh scratch
    mutable std::vector<std::complex<double>> col_;  // length ny scratch
};

/// Convenience wrapper; builds a projector per call. Hot paths should hold a
/// PressureProjector instead.
VelocityField project(const VelocityField& v, const Grid& g);

} // namespace thlab
