#include "thlab/operators.hpp"

#include <cmath>
#include <stdexcept>

#include "thlab/field_ops.hpp"
#include "thlab/poisson.hpp"
#include "thlab/sampling.hpp"

namespace thlab {

namespace {

// ghost reflection across the walls for fields stored at cell heights
// (u1 and theta): value at j = -1 is -value at 0, at j = ny is -value at ny-1.
struct GhostIdx {
    int j;
    double sign;
};

inline GhostIdx ghost_up(int j, int ny) {
    return (j + 1 <= ny - 1) ? GhostIdx{j + 1, 1.0} : GhostIdx{ny - 1, -1.0};
}
inline GhostIdx ghost_dn(int j, int /*ny*/) {
    return (j - 1 >= 0) ? GhostIdx{j - 1, 1.0} : GhostIdx{0, -1.0};
}

// (y . grad w) sampled on x-faces / y-faces / centers; the gather halves of
// the trilinear forms. Interpolations are two- and four-point averages so the
// gather/scatter pair below stays an exact transpose.
VelocityField advect_gather(const VelocityField& y, const VelocityField& w, const Grid& g) {
    VelocityField a(g);
    const double i2hx = 1.0 / (2.0 * g.hx), i2hy = 1.0 / (2.0 * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            const double dwdx = (w.U1(ip, j) - w.U1(im, j)) * i2hx;
            const GhostIdx u = ghost_up(j, g.ny), d = ghost_dn(j, g.ny);
            const double dwdy = (u.sign * w.U1(i, u.j) - d.sign * w.U1(i, d.j)) * i2hy;
            const double y2b = 0.25 * (y.U2(im, j) + y.U2(i, j) + y.U2(im, j + 1) + y.U2(i, j + 1));
            a.U1(i, j) = y.U1(i, j) * dwdx + y2b * dwdy;
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            const double dwdx = (w.U2(ip, j) - w.U2(im, j)) * i2hx;
            const double dwdy = (w.U2(i, j + 1) - w.U2(i, j - 1)) * i2hy;
            const double y1b = 0.25 * (y.U1(i, j - 1) + y.U1(ip, j - 1) + y.U1(i, j) + y.U1(ip, j));
            a.U2(i, j) = y1b * dwdx + y.U2(i, j) * dwdy;
        }
    }
    return a;
}

// transpose of advect_gather in its second argument: (out, z) = (advect_gather(y,z), d)
VelocityField advect_scatter(const VelocityField& y, const VelocityField& d, const Grid& g) {
    VelocityField out(g);
    const double i2hx = 1.0 / (2.0 * g.hx), i2hy = 1.0 / (2.0 * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            const double f = d.U1(i, j);
            const double cx = y.U1(i, j) * i2hx;
            out.U1(ip, j) += cx * f;
            out.U1(im, j) -= cx * f;
            const double y2b = 0.25 * (y.U2(im, j) + y.U2(i, j) + y.U2(im, j + 1) + y.U2(i, j + 1));
            const double cy = y2b * i2hy;
            const GhostIdx u = ghost_up(j, g.ny), dn = ghost_dn(j, g.ny);
            out.U1(i, u.j) += u.sign * cy * f;
            out.U1(i, dn.j) -= dn.sign * cy * f;
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            const double f = d.U2(i, j);
            const double y1b = 0.25 * (y.U1(i, j - 1) + y.U1(ip, j - 1) + y.U1(i, j) + y.U1(ip, j));
            const double cx = y1b * i2hx;
            out.U2(ip, j) += cx * f;
            out.U2(im, j) -= cx * f;
            const double cy = y.U2(i, j) * i2hy;
            if (j + 1 <= g.ny - 1) out.U2(i, j + 1) += cy * f;
            if (j - 1 >= 1) out.U2(i, j - 1) -= cy * f;
        }
    }
    out.enforce_wall_bc();
    return out;
}

ScalarField advect_gather(const VelocityField& y, const ScalarField& phi, const Grid& g) {
    ScalarField a(g);
    const double i2hx = 1.0 / (2.0 * g.hx), i2hy = 1.0 / (2.0 * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            const double dpdx = (phi.at(ip, j) - phi.at(im, j)) * i2hx;
            const GhostIdx u = ghost_up(j, g.ny), d = ghost_dn(j, g.ny);
            const double dpdy = (u.sign * phi.at(i, u.j) - d.sign * phi.at(i, d.j)) * i2hy;
            const double y1c = 0.5 * (y.U1(i, j) + y.U1(ip, j));
            const double y2c = 0.5 * (y.U2(i, j) + y.U2(i, j + 1));
            a.at(i, j) = y1c * dpdx + y2c * dpdy;
        }
    }
    return a;
}

ScalarField advect_scatter(const VelocityField& y, const ScalarField& d, const Grid& g) {
    ScalarField out(g);
    const double i2hx = 1.0 / (2.0 * g.hx), i2hy = 1.0 / (2.0 * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            const double f = d.at(i, j);
            const double y1c = 0.5 * (y.U1(i, j) + y.U1(ip, j));
            const double cx = y1c * i2hx;
            out.at(ip, j) += cx * f;
            out.at(im, j) -= cx * f;
            const double y2c = 0.5 * (y.U2(i, j) + y.U2(i, j + 1));
            const double cy = y2c * i2hy;
            const GhostIdx u = ghost_up(j, g.ny), dn = ghost_dn(j, g.ny);
            out.at(i, u.j) += u.sign * cy * f;
            out.at(i, dn.j) -= dn.sign * cy * f;
        }
    }
    return out;
}

} // namespace

VelocityField apply_A1(const VelocityField& v, const Grid& g) {
    if (!v.conforms(g)) throw std::invalid_argument("apply_A1: shape mismatch");
    VelocityField out(g);
    const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            const GhostIdx u = ghost_up(j, g.ny), d = ghost_dn(j, g.ny);
            out.U1(i, j) = (2.0 * v.U1(i, j) - v.U1(ip, j) - v.U1(im, j)) * ihx2 +
                           (2.0 * v.U1(i, j) - u.sign * v.U1(i, u.j) - d.sign * v.U1(i, d.j)) * ihy2;
        }
    }
    for (int j = 1; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            out.U2(i, j) = (2.0 * v.U2(i, j) - v.U2(ip, j) - v.U2(im, j)) * ihx2 +
                           (2.0 * v.U2(i, j) - v.U2(i, j + 1) - v.U2(i, j - 1)) * ihy2;
        }
    }
    out.enforce_wall_bc();
    return out;
}

ScalarField apply_A2(const ScalarField& th, const Grid& g) {
    if (!th.conforms(g)) throw std::invalid_argument("apply_A2: shape mismatch");
    ScalarField out(g);
    const double ihx2 = 1.0 / (g.hx * g.hx), ihy2 = 1.0 / (g.hy * g.hy);
    for (int j = 0; j < g.ny; ++j) {
        for (int i = 0; i < g.nx; ++i) {
            const int ip = g.wrap(i + 1), im = g.wrap(i - 1);
            const GhostIdx u = ghost_up(j, g.ny), d = ghost_dn(j, g.ny);
            out.at(i, j) = (2.0 * th.at(i, j) - th.at(ip, j) - th.at(im, j)) * ihx2 +
                           (2.0 * th.at(i, j) - u.sign * th.at(i, u.j) - d.sign * th.at(i, d.j)) * ihy2;
        }
    }
    return out;
}

double conv_form(const VelocityField& y, const VelocityField& w, const VelocityField& z, const Grid& g) {
    return inner_l2(advect_gather(y, w, g), z, g);
}

double conv_form(const VelocityField& y, const ScalarField& phi, const ScalarField& psi, const Grid& g) {
    return inner_l2(advect_gather(y, phi, g), psi, g);
}

double b1(const VelocityField& y, const VelocityField& w, const VelocityField& z, const Grid& g) {
    return 0.5 * (conv_form(y, w, z, g) - conv_form(y, z, w, g));
}

double b2(const VelocityField& y, const ScalarField& phi, const ScalarField& psi, const Grid& g) {
    return 0.5 * (conv_form(y, phi, psi, g) - conv_form(y, psi, phi, g));
}

VelocityField skew_advect(const VelocityField& y, const VelocityField& w, const Grid& g) {
    VelocityField a = advect_gather(y, w, g);
    VelocityField b = advect_scatter(y, w, g);
    axpy(-1.0, b, a);
    scale(0.5, a);
    return a;
}

ScalarField skew_advect(const VelocityField& y, const ScalarField& phi, const Grid& g) {
    ScalarField a = advect_gather(y, phi, g);
    ScalarField b = advect_scatter(y, phi, g);
    axpy(-1.0, b, a);
    scale(0.5, a);
    return a;
}

State apply_R(const State& u, const Grid& g) {
    State r(g);
    r.v = theta_to_yfaces(u.th, g);
    scale(-1.0, r.v);
    r.th = u2_to_centers(u.v, g);
    scale(-1.0, r.th);
    return r;
}

double estimate_cb(const Grid& g, int samples, uint64_t seed, int sampler_kind) {
    if (samples < 100) throw std::invalid_argument("estimate_cb: samples must be >= 100");
    PressureProjector proj(g);
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        Rng rng = Rng::fork(seed + 0x9E1Bu * static_cast<uint64_t>(sampler_kind), static_cast<uint64_t>(s));
        VelocityField y, w, z;
        ScalarField phi(g), psi(g);
        if (sampler_kind == 0) {
            // spread of spatial scales; the sup is approached by smooth fields
            const int mm = 1 + static_cast<int>(rng.next() % 8);
            y = random_velocity_smooth(g, rng, mm);
            w = random_velocity_smooth(g, rng, mm);
            z = random_velocity_smooth(g, rng, mm);
            phi = random_scalar_smooth(g, rng, mm);
            psi = random_scalar_smooth(g, rng, mm);
        } else {
            // independent family: sparse near-pure modes
            y = random_velocity_smooth(g, rng, 5, 1);
            w = random_velocity_smooth(g, rng, 5, 1);
            z = random_velocity_smooth(g, rng, 5, 1);
            phi = random_scalar_smooth(g, rng, 5, 1);
            psi = random_scalar_smooth(g, rng, 5, 1);
        }
        const double yl = l2_norm(y, g), yh = h1_seminorm(y, g);
        const double wl = l2_norm(w, g), wh = h1_seminorm(w, g);
        const double zl = l2_norm(z, g), zh = h1_seminorm(z, g);
        const double pl = l2_norm(phi, g), ph = h1_seminorm(phi, g);
        const double sl = l2_norm(psi, g), sh = h1_seminorm(psi, g);
        if (yl * wl * zl * pl * sl < 1e-300) continue;
        const double yA = l2_norm(proj.project(apply_A1(y, g)), g); // Stokes operator norm
        const double wA = l2_norm(proj.project(apply_A1(w, g)), g);
        const double pA = l2_norm(apply_A2(phi, g), g);

        const double bv = std::fabs(b1(y, w, z, g));
        const double bt = std::fabs(b2(y, phi, psi, g));
        // a single constant serves all six form inequalities; record the
        // largest observed ratio over all of them
        best = std::max(best, bv / (std::sqrt(yl * yh) * wh * std::sqrt(zl * zh)));
        best = std::max(best, bv / (std::sqrt(yl * yA) * wh * zl));
        best = std::max(best, bv / (std::sqrt(yl * yh) * std::sqrt(wh * wA) * zl));
        best = std::max(best, bt / (std::sqrt(yl * yh) * ph * std::sqrt(sl * sh)));
        best = std::max(best, bt / (std::sqrt(yl * yA) * ph * sl));
        best = std::max(best, bt / (std::sqrt(yl * yh) * std::sqrt(ph * pA) * sl));
    }
    return best;
}

} // namespace thlab
