#pragma once

#include <cstdint>

#include "thlab/field.hpp"
#include "thlab/grid.hpp"

namespace thlab {

/// Small deterministic generator (splitmix64 core). Identical streams on any
/// platform, cheap to fork per sample index.
struct Rng {
    uint64_t s;

    explicit Rng(uint64_t seed) : s(seed + 0x9e3779b97f4a7c15ULL) {}

    uint64_t next() {
        uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; } // [0,1)
    double sym() { return 2.0 * uniform() - 1.0; }                             // [-1,1)

    /// fork a stream for sample #idx so that growing a sample set keeps the
    /// earlier samples bit-identical
    static Rng fork(uint64_t seed, uint64_t idx) {
        Rng r(seed ^ (0xd1342543de82ef95ULL * (idx + 1)));
        r.next();
        return r;
    }
};

/// White-noise fields (walls zeroed). Not divergence-free; project as needed.
VelocityField random_velocity_white(const Grid& g, Rng& rng);
ScalarField random_scalar_white(const Grid& g, Rng& rng);

/// Smooth random combinations of low Fourier modes. The velocity variant is
/// built from a nodal streamfunction, so it is discretely divergence-free by
/// exact telescoping of the MAC differences.
VelocityField random_velocity_smooth(const Grid& g, Rng& rng, int max_mode = 4, int n_modes = 4);
ScalarField random_scalar_smooth(const Grid& g, Rng& rng, int max_mode = 4, int n_modes = 4);

/// Band-limited rough field: white noise restricted to the top octave of
/// wavenumbers, H1-normalized. Used for the residual-forcing scaling runs.
VelocityField random_velocity_rough(const Grid& g, Rng& rng);
ScalarField random_scalar_rough(const Grid& g, Rng& rng);

/// Full-spectrum field with H1-critical decay (per-mode L2 energy ~ 1/lambda^2,
/// so the H1 norm diverges only logarithmically with the grid cutoff),
/// H1-normalized. This is the regime where the O(sqrt(k)) trajectory
/// divergence bound of the time discretization is attained.
VelocityField random_velocity_h1edge(const Grid& g, Rng& rng);
ScalarField random_scalar_h1edge(const Grid& g, Rng& rng);

} // namespace thlab
