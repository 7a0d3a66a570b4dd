#include "thlab/poisson.hpp"

#include <cmath>

#include "thlab/field_ops.hpp"

namespace thlab {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

PressureProjector::PressureProjector(const Grid& g)
    : g_(g), dft_(g.nx), nh_(g.nx / 2 + 1), off_(-1.0 / (g.hy * g.hy)) {
    const int ny = g_.ny;
    const double ihy2 = 1.0 / (g_.hy * g_.hy);
    diag_mod_.resize(nh_);
    sub_mult_.resize(nh_);
    for (int m = 0; m < nh_; ++m) {
        const double lx = (2.0 - 2.0 * std::cos(2.0 * kPi * m / g_.nx)) / (g_.hx * g_.hx);
        // m = 0: reduced system on j = 1..ny-1 with q(0) pinned to 0
        const int j0 = (m == 0) ? 1 : 0;
        const int n = ny - j0;
        std::vector<double> dm(n), sm(n, 0.0);
        for (int r = 0; r < n; ++r) {
            const int j = j0 + r;
            double d = lx + (2.0 - (j == 0 ? 1.0 : 0.0) - (j == ny - 1 ? 1.0 : 0.0)) * ihy2;
            if (r > 0) {
                sm[r] = off_ / dm[r - 1];
                d -= sm[r] * off_;
            }
            dm[r] = d;
        }
        diag_mod_[m] = std::move(dm);
        sub_mult_[m] = std::move(sm);
    }
    spec_.resize(static_cast<size_t>(g_.ny) * nh_);
    col_.resize(g_.ny);
}

ScalarField PressureProjector::solve(const ScalarField& rhs) const {
    const int ny = g_.ny, nx = g_.nx;
    // row transforms; store solve RHS = -rhs_hat so that (lx + L_Ny) q = -rhs
    for (int j = 0; j < ny; ++j)
        dft_.forward_r2c(&rhs.data[static_cast<size_t>(j) * nx], &spec_[static_cast<size_t>(j) * nh_]);

    for (int m = 0; m < nh_; ++m) {
        const int j0 = (m == 0) ? 1 : 0;
        const int n = ny - j0;
        const auto& dm = diag_mod_[m];
        const auto& sm = sub_mult_[m];
        for (int r = 0; r < n; ++r) col_[r] = -spec_[static_cast<size_t>(j0 + r) * nh_ + m];
        for (int r = 1; r < n; ++r) col_[r] -= sm[r] * col_[r - 1];
        col_[n - 1] /= dm[n - 1];
        for (int r = n - 2; r >= 0; --r) col_[r] = (col_[r] - off_ * col_[r + 1]) / dm[r];
        if (m == 0) {
            // pinned q(0)=0, then shift the whole column to zero mean
            std::complex<double> mean{0.0, 0.0};
            for (int r = 0; r < n; ++r) mean += col_[r];
            mean /= static_cast<double>(ny);
            spec_[0 * nh_ + 0] = -mean;
            for (int r = 0; r < n; ++r) spec_[static_cast<size_t>(1 + r) * nh_ + 0] = col_[r] - mean;
        } else {
            for (int r = 0; r < n; ++r) spec_[static_cast<size_t>(r) * nh_ + m] = col_[r];
        }
    }

    ScalarField q(g_);
    for (int j = 0; j < ny; ++j)
        dft_.inverse_c2r(&spec_[static_cast<size_t>(j) * nh_], &q.data[static_cast<size_t>(j) * nx]);
    return q;
}

VelocityField PressureProjector::project(const VelocityField& v) const {
    ScalarField div = divergence(v, g_);
    ScalarField q = solve(div);
    VelocityField out = v;
    for (int j = 0; j < g_.ny; ++j)
        for (int i = 0; i < g_.nx; ++i)
            out.U1(i, j) -= (q.at(i, j) - q.at(g_.wrap(i - 1), j)) / g_.hx;
    for (int j = 1; j < g_.ny; ++j)
        for (int i = 0; i < g_.nx; ++i)
            out.U2(i, j) -= (q.at(i, j) - q.at(i, j - 1)) / g_.hy;
    out.enforce_wall_bc();
    return out;
}

VelocityField project(const VelocityField& v, const Grid& g) {
    return PressureProjector(g).project(v);
}

} // namespace thlab
