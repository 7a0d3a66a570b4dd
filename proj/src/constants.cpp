#include "thlab/constants.hpp"

#include <cfloat>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "thlab/field_ops.hpp"

namespace thlab {

namespace {

// |x2|_{L2} over the unit square; upper bound used when majorizing
// truncation norms by |theta| + |x2|
const double kX2Norm = 1.0 / std::sqrt(3.0);

// keep entries positive: reciprocals of overflowed quantities underflow to
// zero, which we clamp at the smallest normal double ("saturated-min")
double sat_pos(double x, const char* name) {
    if (std::isnan(x) || x < 0.0)
        throw std::logic_error(std::string("constants: non-positive or NaN value for ") + name);
    if (x == 0.0) return DBL_MIN;
    return x;
}

} // namespace

double ConstantsTable::M1_of(double th_l2_bound) const {
    return omega_sqrt + 2.0 * (th_l2_bound + kX2Norm);
}

double ConstantsTable::K1_of(double v_l2, double M1v) const {
    return std::sqrt(v_l2 * v_l2 + M1v * M1v / (nu * nu));
}

double ConstantsTable::K2_of(double K1v) const {
    return 2.0 * (1.0 + 2.0 * cb_hat * cb_hat * K1v * K1v / (nu * nu));
}

double ConstantsTable::K3_of(double v_h1_init, double K1b, double M1b, double horizon) const {
    const double lin = v_h1_init * v_h1_init + 28.0 / (5.0 * nu) * M1b * M1b * horizon;
    const double ex = 0.2 + (2.0 / nu) * c1 * K1b * K1b * (K1b * K1b + (3.0 / nu) * M1b * M1b * horizon);
    return std::sqrt(lin * std::exp(ex));
}

double ConstantsTable::kappa3_of(double K1b, double K3v) const {
    return sat_pos(1.0 / (10.0 * c1 * K1b * K1b * K2_of(K1b) * K3v * K3v), "kappa3");
}

double ConstantsTable::rho1_of(double rv) const {
    const double lin = rho0 * rho0 * ((2.0 / nu) * (1.0 / rv + 1.0 / nu) + 14.0 / (5.0 * nu) * rv);
    const double ex = (2.0 / nu) * c1 * rho0 * rho0 * rho0 * rho0 * (1.0 + (3.0 / nu) * rv);
    return std::sqrt(lin * std::exp(ex));
}

double ConstantsTable::T0_of(double R) const {
    double t1 = 0.0;
    if (2.0 * R > omega_sqrt) t1 = 2.0 * std::log(2.0 * R / omega_sqrt) / kappa;
    const double omega = omega_sqrt * omega_sqrt;
    const double arg = nu * nu * (R * R + (4.0 / (nu * nu)) * (omega + 2.0 * R * R)) / omega;
    double t2 = 0.0;
    if (arg > 1.0) t2 = (2.0 / nu) * std::log(arg);
    return t1 + t2;
}

double ConstantsTable::kappa7_of(double s) const {
    const double M1s = M1_of(s);
    const double K1s = K1_of(s, M1s);
    const double k2s = sat_pos(nu * nu / (40.0 * c1 * K1s * K1s * M1s * M1s), "kappa2(s)");
    const double K3a = K3_of(s, K1s, M1s, T0_of(s) + r);
    const double K3b = K3_of(rho1, K1s, M1s, r);
    const double k4s = std::min(std::min(kappa1, k2s),
                                std::min(kappa3_of(K1s, K3a), kappa3_of(K1s, K3b)));
    const double K4s = std::max(K3a, K3b);
    const double k5s = sat_pos(1.0 / (2.0 * c2 * K1s * K1s * K4s * K4s), "kappa5(s)");
    return sat_pos(std::min(std::min(k4s, k5s), T / 2.0), "kappa7(s)");
}

double ConstantsTable::K5_of(double s) const {
    const double M1s = M1_of(s);
    const double K1s = K1_of(s, M1s);
    const double K3a = K3_of(s, K1s, M1s, T0_of(s) + r);
    const double K3b = K3_of(rho1, K1s, M1s, r);
    const double K4s = std::max(K3a, K3b);
    const double e = c2 * K1s * K1s * K4s * K4s * T;
    // finite-horizon theta bound (squared) and the large-time bound
    double B = std::numeric_limits<double>::infinity();
    if (std::isfinite(K4s) && std::isfinite(e))
        B = std::pow(4.0, e) * (s * s + 2.0 / (kappa * K4s * K4s));
    double M2s = std::numeric_limits<double>::infinity();
    if (std::isfinite(e)) {
        const double lin = (2.0 / kappa) * (M1s * M1s / T + K1s * K1s / kappa + K1s * K1s * T);
        M2s = std::sqrt(lin * std::exp(4.0 * e));
    }
    const double M3s = std::max(std::sqrt(B), M2s);
    return std::sqrt(K4s * K4s + M3s * M3s);
}

ConstantsTable build_constants(const State& u0, const SchemeParams& p, const Grid& g,
                               double horizon_T, double r, double cb_hat) {
    if (!(cb_hat > 0.0)) throw std::invalid_argument("build_constants: cb_hat missing or non-positive");
    if (!(horizon_T > 0.0) || !(r > 0.0)) throw std::invalid_argument("build_constants: T and r must be positive");
    p.validate();

    ConstantsTable c;
    c.nu = p.nu;
    c.kappa = p.kappa;
    c.k = p.k;
    c.cb_hat = cb_hat;
    c.r = r;
    c.T = horizon_T;

    c.kappa1 = std::min(1.0 / (2.0 * p.kappa), 1.0 / p.nu);
    if (r < 4.0 * c.kappa1)
        throw std::invalid_argument("build_constants: r must be >= 4*kappa1");

    c.v0_l2 = l2_norm(u0.v, g);
    c.v0_h1 = h1_seminorm(u0.v, g);
    c.th0_l2 = l2_norm(u0.th, g);
    c.th0_h1 = h1_seminorm(u0.th, g);
    c.u0_l2 = l2_norm(u0, g);
    c.u0_h1 = h1_seminorm(u0, g);

    // truncation norms of the initial shifted temperature
    {
        double sp = 0.0, sm = 0.0;
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const double d = u0.th.at(i, j) - g.yc(j);
                sp += std::max(d, 0.0) * std::max(d, 0.0);
                sm += std::max(-(d + 1.0), 0.0) * std::max(-(d + 1.0), 0.0);
            }
        c.trunc_plus0 = std::sqrt(sp * g.hx * g.hy);
        c.trunc_minus0 = std::sqrt(sm * g.hx * g.hy);
    }

    c.M1 = c.omega_sqrt + c.trunc_plus0 + c.trunc_minus0;
    c.K1 = c.K1_of(c.v0_l2, c.M1);
    c.c1 = 27.0 * std::pow(cb_hat, 4) / (2.0 * std::pow(p.nu, 3));
    c.c2 = 27.0 * std::pow(cb_hat, 4) / (32.0 * p.kappa * p.kappa);
    c.K2 = c.K2_of(c.K1);
    c.kappa2 = sat_pos(p.nu * p.nu / (40.0 * c.c1 * c.K1 * c.K1 * c.M1 * c.M1), "kappa2");

    c.rho0 = 2.0 * c.omega_sqrt + std::sqrt(5.0) * c.omega_sqrt / p.nu;

    const double R = c.u0_l2;
    c.T0 = c.T0_of(R);
    c.N0_1 = (2.0 * R > c.omega_sqrt) ? 2.0 * std::log(2.0 * R / c.omega_sqrt) / (p.kappa * p.k) : 0.0;
    {
        const double omega = c.omega_sqrt * c.omega_sqrt;
        const double arg = p.nu * p.nu * (R * R + (4.0 / (p.nu * p.nu)) * (omega + 2.0 * R * R)) / omega;
        c.N0_2 = (arg > 1.0) ? (2.0 / (p.nu * p.k)) * std::log(arg) : 0.0;
    }
    c.N0 = c.N0_1 + c.N0_2;
    c.N1 = c.N0 + std::floor(1.0 / p.k);

    c.K3_first = c.K3_of(c.v0_h1, c.K1, c.M1, c.T0 + r);
    c.rho1 = c.rho1_of(r);
    c.K3_second = c.K3_of(c.rho1, c.K1, c.M1, r);
    c.kappa3_first = c.kappa3_of(c.K1, c.K3_first);
    c.kappa3_second = c.kappa3_of(c.K1, c.K3_second);
    c.kappa4 = std::min(std::min(c.kappa1, c.kappa2), std::min(c.kappa3_first, c.kappa3_second));
    c.K4 = std::max(c.K3_first, c.K3_second);
    c.kappa5 = sat_pos(1.0 / (2.0 * c.c2 * c.K1 * c.K1 * c.K4 * c.K4), "kappa5");

    {
        const double e = c.c2 * c.K1 * c.K1 * c.K4 * c.K4 * horizon_T;
        double B = std::numeric_limits<double>::infinity();
        if (std::isfinite(c.K4) && std::isfinite(e))
            B = std::pow(4.0, e) * (c.th0_h1 * c.th0_h1 + 2.0 / (p.kappa * c.K4 * c.K4));
        if (std::isfinite(e)) {
            const double lin =
                (2.0 / p.kappa) * (c.M1 * c.M1 / horizon_T + c.K1 * c.K1 / p.kappa + c.K1 * c.K1 * horizon_T);
            c.M2 = std::sqrt(lin * std::exp(4.0 * e));
        } else {
            c.M2 = std::numeric_limits<double>::infinity();
        }
        c.M3 = std::max(std::sqrt(B), c.M2);
    }
    c.kappa6 = std::min(std::min(c.kappa4, c.kappa5), horizon_T / 2.0);

    c.kappa7_u0 = c.kappa7_of(c.u0_h1);
    c.K5_u0 = c.K5_of(c.u0_h1);

    c.R_star = std::sqrt(2.0 * c.rho0 * c.rho0 * (2.0 + 1.0 / p.nu + 1.0 / p.kappa) *
                         (1.0 / p.nu + 1.0 / p.kappa));
    c.R1 = c.K5_of(c.R_star);
    c.kappa8 = std::min(std::min(1.0, c.kappa1), c.kappa7_of(c.R_star));
    c.kappa0 = std::min(c.kappa8, c.kappa7_of(c.R1));

    return c;
}

std::vector<ConstantEntry> ConstantsTable::entries() const {
    std::vector<ConstantEntry> e;
    auto add = [&](const char* n, double v, const char* prov) { e.push_back({n, v, prov}); };
    add("cb_hat", cb_hat, "measured Ladyzhenskaya constant, Monte-Carlo lower estimate over random admissible triples");
    add("M1", M1, "M1 = |Omega|^(1/2) + |(theta0 - x2)_+| + |(theta0 - x2 + 1)_-|");
    add("K1", K1, "K1^2 = |v0|^2 + M1^2/nu^2");
    add("K2", K2, "K2 = 2(1 + 2 cb^2 K1^2 / nu^2)");
    add("c1", c1, "c1 = 27 cb^4 / (2 nu^3)");
    add("c2", c2, "c2 = 27 cb^4 / (32 kappa^2)");
    add("kappa1", kappa1, "kappa1 = min{1/(2 kappa), 1/nu}");
    add("kappa2", kappa2, "kappa2 = nu^2 / (40 c1 K1^2 M1^2)");
    add("K3_first", K3_first, "K3(|v0|_H1, theta0; T0 + r), finite-interval H1 bound");
    add("K3_second", K3_second, "K3(rho1(r), theta0; r), re-applied on later windows (global K1, M1 kept; conservative)");
    add("kappa3_first", kappa3_first, "kappa3 = 1/(10 c1 K1^2 K2 K3^2) at T0 + r");
    add("kappa3_second", kappa3_second, "kappa3 at (rho1(r), r)");
    add("kappa4", kappa4, "kappa4 = min{kappa1, kappa2, kappa3(T0+r), kappa3(rho1, r)}");
    add("K4", K4, "K4 = max{K3_first, K3_second}; uniform H1 bound for v");
    add("kappa5", kappa5, "kappa5 = 1/(2 c2 K1^2 K4^2)");
    add("M2", M2, "M2^2 = (2/kappa)(M1^2/T + K1^2/kappa + K1^2 T) e^{4 c2 K1^2 K4^2 T}");
    add("M3", M3, "M3 = max{sqrt(4^{c2 K1^2 K4^2 T}(|theta0|_H1^2 + 2/(kappa K4^2))), M2} (sqrt added for norm consistency)");
    add("kappa6", kappa6, "kappa6 = min{kappa4, kappa5, T/2}");
    add("kappa7_u0", kappa7_u0, "kappa7(s) = kappa6 with all data norms majorized by s; evaluated at s = |u0|_V");
    add("K5_u0", K5_u0, "K5(s) = sqrt(K4(s)^2 + M3(s)^2); evaluated at s = |u0|_V");
    add("rho0", rho0, "rho0 = 2|Omega|^(1/2) + sqrt(5)|Omega|^(1/2)/nu");
    add("rho1", rho1, "rho1(r)^2 = rho0^2[(2/nu)(1/r + 1/nu) + 14 r/(5 nu)] e^{(2/nu) c1 rho0^4 (1 + 3r/nu)}");
    add("R_star", R_star, "R*^2 = 2 rho0^2 (2 + 1/nu + 1/kappa)(1/nu + 1/kappa)");
    add("R1", R1, "R1 = K5(R*)");
    add("kappa8", kappa8, "kappa8 = min{1, kappa1, kappa7(R*)}");
    add("kappa0", kappa0, "kappa0 = min{kappa8, kappa7(R1)}");
    add("T0", T0, "T0 = N0 * k, entry time of the H-absorbing ball (k-independent)");
    add("N0_1", N0_1, "N0_1 = 2 ln(2R/|Omega|^(1/2)) / (kappa k), clamped at 0");
    add("N0_2", N0_2, "N0_2 = (2/(nu k)) ln(nu^2 [R^2 + (4/nu^2)(|Omega| + 2R^2)]/|Omega|), clamped at 0");
    add("N0", N0, "N0 = N0_1 + N0_2");
    add("N1", N1, "N1 = N0 + floor(1/k)");
    if (!std::isnan(K5_override))
        add("K5_override", K5_override, "heuristic: measured trajectory bound substituted for the saturated theory K5");
    if (!std::isnan(kappa7_override))
        add("kappa7_override", kappa7_override, "heuristic: kappa7 term relaxed; theory value saturates below representable range");
    return e;
}

std::string ConstantsTable::to_json(const std::string& config_hash) const {
    nlohmann::json j;
    if (!config_hash.empty()) j["config_hash"] = config_hash;
    j["inputs"] = {{"nu", nu},       {"kappa", kappa},   {"k", k},
                   {"r", r},         {"T", T},           {"v0_l2", v0_l2},
                   {"v0_h1", v0_h1}, {"th0_l2", th0_l2}, {"th0_h1", th0_h1},
                   {"u0_l2", u0_l2}, {"u0_h1", u0_h1},   {"trunc_plus0", trunc_plus0},
                   {"trunc_minus0", trunc_minus0}};
    for (const auto& e : entries()) {
        nlohmann::json item;
        if (std::isfinite(e.value)) {
            item["value"] = e.value;
        } else {
            item["value"] = "inf";
            item["saturated"] = true;
        }
        if (e.value == DBL_MIN) item["saturated"] = true;
        item["provenance"] = e.provenance;
        j["constants"][e.name] = item;
    }
    return j.dump(2);
}

} // namespace thlab
