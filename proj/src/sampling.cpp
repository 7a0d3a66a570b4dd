#include "thlab/sampling.hpp"

#include <cmath>

#include "thlab/field_ops.hpp"

namespace thlab {

namespace {
constexpr double kPi = 3.14159265358979323846;

/// u1 = delta_y psi, u2 = -delta_x psi from a nodal streamfunction with zero
/// wall rows; divergence vanishes by telescoping.
VelocityField velocity_from_streamfunction(const Grid& g, const std::vector<double>& psi) {
    // psi indexed psi[j*nx + i], j = 0..ny (nodes), periodic in i
    VelocityField v(g);
    auto P = [&](int i, int j) { return psi[static_cast<size_t>(j) * g.nx + g.wrap(i)]; };
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            v.U1(i, j) = (P(i, j + 1) - P(i, j)) / g.hy;
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            v.U2(i, j) = -(P(i + 1, j) - P(i, j)) / g.hx;
    v.enforce_wall_bc();
    return v;
}

std::vector<double> mode_streamfunction(const Grid& g, Rng& rng, int mode_lo_x, int mode_hi_x,
                                        int mode_lo_y, int mode_hi_y, int n_modes) {
    std::vector<double> psi(static_cast<size_t>(g.nx) * (g.ny + 1), 0.0);
    for (int t = 0; t < n_modes; ++t) {
        const int m = mode_lo_x + static_cast<int>(rng.next() % static_cast<uint64_t>(mode_hi_x - mode_lo_x + 1));
        const int p = mode_lo_y + static_cast<int>(rng.next() % static_cast<uint64_t>(mode_hi_y - mode_lo_y + 1));
        const double a = rng.sym();
        const double phase = 2.0 * kPi * rng.uniform();
        for (int j = 0; j <= g.ny; ++j) {
            const double sy = std::sin(kPi * p * g.yf(j));
            for (int i = 0; i < g.nx; ++i)
                psi[static_cast<size_t>(j) * g.nx + i] += a * std::cos(2.0 * kPi * m * g.xf(i) + phase) * sy;
        }
    }
    return psi;
}

} // namespace

VelocityField random_velocity_white(const Grid& g, Rng& rng) {
    VelocityField v(g);
    for (double& t : v.u1) t = rng.sym();
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) v.U2(i, j) = rng.sym();
    return v;
}

ScalarField random_scalar_white(const Grid& g, Rng& rng) {
    ScalarField f(g);
    for (double& t : f.data) t = rng.sym();
    return f;
}

VelocityField random_velocity_smooth(const Grid& g, Rng& rng, int max_mode, int n_modes) {
    const int mx = std::min(max_mode, g.nx / 2 - 1);
    const int my = std::min(max_mode, g.ny / 2 - 1);
    return velocity_from_streamfunction(g, mode_streamfunction(g, rng, 0, mx, 1, my, n_modes));
}

ScalarField random_scalar_smooth(const Grid& g, Rng& rng, int max_mode, int n_modes) {
    ScalarField f(g);
    const int mx = std::min(max_mode, g.nx / 2 - 1);
    const int my = std::min(max_mode, g.ny / 2 - 1);
    for (int t = 0; t < n_modes; ++t) {
        const int m = static_cast<int>(rng.next() % static_cast<uint64_t>(mx + 1));
        const int p = 1 + static_cast<int>(rng.next() % static_cast<uint64_t>(my));
        const double a = rng.sym();
        const double phase = 2.0 * kPi * rng.uniform();
        for (int j = 0; j < g.ny; ++j) {
            const double sy = std::sin(kPi * p * g.yc(j));
            for (int i = 0; i < g.nx; ++i)
                f.at(i, j) += a * std::cos(2.0 * kPi * m * g.xc(i) + phase) * sy;
        }
    }
    return f;
}

VelocityField random_velocity_rough(const Grid& g, Rng& rng) {
    const int mlo_x = std::max(1, g.nx / 4), mhi_x = std::max(mlo_x, g.nx / 2 - 1);
    const int mlo_y = std::max(1, g.ny / 4), mhi_y = std::max(mlo_y, g.ny / 2 - 1);
    VelocityField v =
        velocity_from_streamfunction(g, mode_streamfunction(g, rng, mlo_x, mhi_x, mlo_y, mhi_y, 16));
    const double h1 = h1_seminorm(v, g);
    if (h1 > 0.0) scale(1.0 / h1, v);
    return v;
}

VelocityField random_velocity_h1edge(const Grid& g, Rng& rng) {
    // streamfunction amplitude ~ lambda^(-3/2) gives per-mode velocity
    // energy ~ lambda^(-2)
    std::vector<double> psi(static_cast<size_t>(g.nx) * (g.ny + 1), 0.0);
    for (int m = 0; m <= g.nx / 2 - 1; ++m) {
        for (int pmode = 1; pmode <= g.ny / 2 - 1; ++pmode) {
            const double lam = 4.0 * kPi * kPi * (m * m + pmode * pmode);
            const double a = rng.sym() / std::pow(lam, 1.5);
            const double phase = 2.0 * kPi * rng.uniform();
            for (int j = 0; j <= g.ny; ++j) {
                const double sy = std::sin(kPi * pmode * g.yf(j));
                for (int i = 0; i < g.nx; ++i)
                    psi[static_cast<size_t>(j) * g.nx + i] +=
                        a * std::cos(2.0 * kPi * m * g.xf(i) + phase) * sy;
            }
        }
    }
    VelocityField v = velocity_from_streamfunction(g, psi);
    const double h1 = h1_seminorm(v, g);
    if (h1 > 0.0) scale(1.0 / h1, v);
    return v;
}

ScalarField random_scalar_h1edge(const Grid& g, Rng& rng) {
    ScalarField f(g);
    for (int m = 0; m <= g.nx / 2 - 1; ++m) {
        for (int pmode = 1; pmode <= g.ny / 2 - 1; ++pmode) {
            const double lam = 4.0 * kPi * kPi * (m * m + pmode * pmode);
            const double a = rng.sym() / lam;
            const double phase = 2.0 * kPi * rng.uniform();
            for (int j = 0; j < g.ny; ++j) {
                const double sy = std::sin(kPi * pmode * g.yc(j));
                for (int i = 0; i < g.nx; ++i)
                    f.at(i, j) += a * std::cos(2.0 * kPi * m * g.xc(i) + phase) * sy;
            }
        }
    }
    const double h1 = h1_seminorm(f, g);
    if (h1 > 0.0) scale(1.0 / h1, f);
    return f;
}

ScalarField random_scalar_rough(const Grid& g, Rng& rng) {
    ScalarField f(g);
    const int mlo_x = std::max(1, g.nx / 4), mhi_x = std::max(mlo_x, g.nx / 2 - 1);
    const int mlo_y = std::max(1, g.ny / 4), mhi_y = std::max(mlo_y, g.ny / 2 - 1);
    for (int t = 0; t < 16; ++t) {
        const int m = mlo_x + static_cast<int>(rng.next() % static_cast<uint64_t>(mhi_x - mlo_x + 1));
        const int p = mlo_y + static_cast<int>(rng.next() % static_cast<uint64_t>(mhi_y - mlo_y + 1));
        const double a = rng.sym();
        const double phase = 2.0 * kPi * rng.uniform();
        for (int j = 0; j < g.ny; ++j) {
            const double sy = std::sin(kPi * p * g.yc(j));
            for (int i = 0; i < g.nx; ++i)
                f.at(i, j) += a * std::cos(2.0 * kPi * m * g.xc(i) + phase) * sy;
        }
    }
    const double h1 = h1_seminorm(f, g);
    if (h1 > 0.0) scale(1.0 / h1, f);
    return f;
}

} // namespace thlab
