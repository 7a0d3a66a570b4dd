#include "thlab/field_ops.hpp"

#include <cmath>
#include <stdexcept>

namespace thlab {

namespace {

void require_conforms(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("field/grid shape mismatch in ") + what);
}

} // namespace

double inner_l2(const ScalarField& a, const ScalarField& b, const Grid& g) {
    require_conforms(a.conforms(g) && b.conforms(g), "inner_l2(scalar)");
    double s = 0.0;
    for (size_t n = 0; n < a.data.size(); ++n) s += a.data[n] * b.data[n];
    return s * g.hx * g.hy;
}

double inner_l2(const VelocityField& a, const VelocityField& b, const Grid& g) {
    require_conforms(a.conforms(g) && b.conforms(g), "inner_l2(velocity)");
    double s = 0.0;
    for (size_t n = 0; n < a.u1.size(); ++n) s += a.u1[n] * b.u1[n];
    // interior y-face rows only; wall rows are pinned to zero (half weight moot)
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) s += a.U2(i, j) * b.U2(i, j);
    return s * g.hx * g.hy;
}

double l2_norm(const ScalarField& f, const Grid& g) { return std::sqrt(inner_l2(f, f, g)); }
double l2_norm(const VelocityField& f, const Grid& g) { return std::sqrt(inner_l2(f, f, g)); }

double l2_norm(const State& u, const Grid& g) {
    return std::sqrt(inner_l2(u.v, u.v, g) + inner_l2(u.th, u.th, g));
}

double h1_seminorm(const ScalarField& f, const Grid& g) {
    require_conforms(f.conforms(g), "h1_seminorm(scalar)");
    const double hx = g.hx, hy = g.hy;
    double s = 0.0;
    // x-gradients between centers, periodic
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (f.at(g.wrap(i + 1), j) - f.at(i, j)) / hx;
            s += d * d * hx * hy;
        }
    // interior y-gradients between centers
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (f.at(i, j) - f.at(i, j - 1)) / hy;
            s += d * d * hx * hy;
        }
    // half-cell wall gradients (Dirichlet zero on both walls)
    for (int i = 0; i < g.nx; ++i) {
        const double db = 2.0 * f.at(i, 0) / hy;
        const double dt = 2.0 * f.at(i, g.ny - 1) / hy;
        s += (db * db + dt * dt) * hx * (hy / 2.0);
    }
    return std::sqrt(s);
}

double h1_seminorm(const VelocityField& f, const Grid& g) {
    require_conforms(f.conforms(g), "h1_seminorm(velocity)");
    const double hx = g.hx, hy = g.hy;
    double s = 0.0;
    // u1: same boundary structure as a cell scalar (Dirichlet ghosts in y)
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (f.U1(g.wrap(i + 1), j) - f.U1(i, j)) / hx;
            s += d * d * hx * hy;
        }
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (f.U1(i, j) - f.U1(i, j - 1)) / hy;
            s += d * d * hx * hy;
        }
    for (int i = 0; i < g.nx; ++i) {
        const double db = 2.0 * f.U1(i, 0) / hy;
        const double dt = 2.0 * f.U1(i, g.ny - 1) / hy;
        s += (db * db + dt * dt) * hx * (hy / 2.0);
    }
    // u2: vertex Dirichlet rows at j=0 and j=ny, all y-differences full weight
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (f.U2(g.wrap(i + 1), j) - f.U2(i, j)) / hx;
            s += d * d * hx * hy;
        }
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double d = (f.U2(i, j + 1) - f.U2(i, j)) / hy;
            s += d * d * hx * hy;
        }
    return std::sqrt(s);
}

double h1_seminorm(const State& u, const Grid& g) {
    const double a = h1_seminorm(u.v, g);
    const double b = h1_seminorm(u.th, g);
    return std::sqrt(a * a + b * b);
}

ScalarField divergence(const VelocityField& v, const Grid& g) {
    require_conforms(v.conforms(g), "divergence");
    ScalarField d(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            d.at(i, j) = (v.U1(g.wrap(i + 1), j) - v.U1(i, j)) / g.hx +
                         (v.U2(i, j + 1) - v.U2(i, j)) / g.hy;
        }
    return d;
}

double max_abs_divergence(const VelocityField& v, const Grid& g) {
    ScalarField d = divergence(v, g);
    double m = 0.0;
    for (double t : d.data) m = std::max(m, std::fabs(t));
    return m;
}

ScalarField shift_temperature(const ScalarField& T_physical, double T0, const Grid& g) {
    require_conforms(T_physical.conforms(g), "shift_temperature");
    ScalarField th(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) th.at(i, j) = T_physical.at(i, j) - T0 + g.yc(j);
    return th;
}

VelocityField theta_to_yfaces(const ScalarField& th, const Grid& g) {
    require_conforms(th.conforms(g), "theta_to_yfaces");
    VelocityField b(g);
    for (int j = 1; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            b.U2(i, j) = 0.5 * (th.at(i, j - 1) + th.at(i, j));
    return b;
}

ScalarField u2_to_centers(const VelocityField& v, const Grid& g) {
    require_conforms(v.conforms(g), "u2_to_centers");
    ScalarField c(g);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            c.at(i, j) = 0.5 * (v.U2(i, j) + v.U2(i, j + 1));
    return c;
}

} // namespace thlab
