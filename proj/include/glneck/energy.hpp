#pragma once

#include <algorithm>
#include <cmath>

#include "glneck/operators.hpp"

namespace glneck {

struct EnergyReport {
    double epsilon = 0;
    double dirichlet = 0;
    double potential = 0;
    double total = 0;
    double sup_modulus = 0;
    Field density;  // per-node e_ε(u)
};

inline double sup_check(const Field& u) {
    double m = 0;
    const auto& g = u.grid();
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) m = std::max(m, u.modulus(i, j));
    return m;
}

namespace detail {

/// Sum of squared forward differences over grid edges, times h²/2 per direction.
/// This is the discrete Dirichlet energy ½∫|∇u|² (flat weights — the conformal
/// factors cancel between |du|²_h and dvol_h in 2-D).
inline double dirichlet_edge_sum(const Field& u) {
    const auto& g = u.grid();
    const int nc = u.n_comp();
    double s = 0;
    const int ix_max = g.bc == Bc::periodic ? g.nx : g.nx - 1;
    const int jy_max = g.bc == Bc::periodic ? g.ny : g.ny - 1;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < ix_max; ++i) {
            const int ip = g.bc == Bc::periodic ? g.wrap_x(i + 1) : i + 1;
            for (int c = 0; c < nc; ++c) {
                const double d = u.at(ip, j, c) - u.at(i, j, c);
                s += d * d;
            }
        }
    for (int j = 0; j < jy_max; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const int jp = g.bc == Bc::periodic ? g.wrap_y(j + 1) : j + 1;
            for (int c = 0; c < nc; ++c) {
                const double d = u.at(i, jp, c) - u.at(i, j, c);
                s += d * d;
            }
        }
    return 0.5 * s;  // h² volume and 1/h² from differences cancel
}

}  // namespace detail

/// E_ε(u) = ½∫|du|²_h + ∫(1-|u|²)²/(4ε²), midpoint quadrature with volume e^{2λ}h².
inline EnergyReport energy(const Field& u, double eps) {
    if (!(eps > 0)) throw ConfigError("epsilon must be positive");
    const auto& g = u.grid();
    EnergyReport rep;
    rep.epsilon = eps;
    rep.dirichlet = detail::dirichlet_edge_sum(u);
    rep.density = Field(u.grid_ptr(), 1);

    const double inv4e2 = 0.25 / (eps * eps);
    double pot = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double m2 = [&] {
                double s = 0;
                for (int c = 0; c < u.n_comp(); ++c) s += u.at(i, j, c) * u.at(i, j, c);
                return s;
            }();
            const double p = (1.0 - m2) * (1.0 - m2) * inv4e2;
            pot += p * g.volume(i, j);
            rep.sup_modulus = std::max(rep.sup_modulus, std::sqrt(m2));
            // per-node density: averaged adjacent-edge gradient energy, metric form
            double grad2 = 0;
            for (int c = 0; c < u.n_comp(); ++c) {
                double sx = 0, wx = 0, sy = 0, wy = 0;
                auto edge = [&](double a, double b) {
                    const double d = (b - a) / g.spacing;
                    return d * d;
                };
                if (g.bc == Bc::periodic) {
                    sx = edge(u.at(g.wrap_x(i - 1), j, c), u.at(i, j, c)) +
                         edge(u.at(i, j, c), u.at(g.wrap_x(i + 1), j, c));
                    wx = 2;
                    sy = edge(u.at(i, g.wrap_y(j - 1), c), u.at(i, j, c)) +
                         edge(u.at(i, j, c), u.at(i, g.wrap_y(j + 1), c));
                    wy = 2;
                } else {
                    if (i > 0) { sx += edge(u.at(i - 1, j, c), u.at(i, j, c)); wx += 1; }
                    if (i < g.nx - 1) { sx += edge(u.at(i, j, c), u.at(i + 1, j, c)); wx += 1; }
                    if (j > 0) { sy += edge(u.at(i, j - 1, c), u.at(i, j, c)); wy += 1; }
                    if (j < g.ny - 1) { sy += edge(u.at(i, j, c), u.at(i, j + 1, c)); wy += 1; }
                }
                grad2 += sx / wx + sy / wy;
            }
            const double lam = g.lambda(i, j);
            rep.density.at(i, j, 0) = 0.5 * std::exp(-2.0 * lam) * grad2 + p;
        }
    rep.dirichlet *= 1.0;  // already dimensionless; edge count carries the h² factor
    rep.potential = pot;
    rep.total = rep.dirichlet + rep.potential;
    return rep;
}

/// r = -Δ_h u - u(1-|u|²)/ε² on interior nodes; 0 on the Dirichlet ring.
/// This is the volume-weighted gradient of the discrete energy: ⟨r, v⟩ with
/// weights e^{2λ}h² equals the exact directional derivative dE(v) for v
/// supported on interior nodes; descent steps move along -r.
inline Field el_residual(const Field& u, double eps) {
    if (!(eps > 0)) throw ConfigError("epsilon must be positive");
    const auto& g = u.grid();
    Field lap = laplace_beltrami(g, u);
    Field r(u.grid_ptr(), u.n_comp());
    const double inv_e2 = 1.0 / (eps * eps);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.is_boundary(i, j)) continue;
            double m2 = 0;
            for (int c = 0; c < u.n_comp(); ++c) m2 += u.at(i, j, c) * u.at(i, j, c);
            for (int c = 0; c < u.n_comp(); ++c)
                r.at(i, j, c) = -lap.at(i, j, c) - u.at(i, j, c) * (1.0 - m2) * inv_e2;
        }
    return r;
}

inline double max_abs_residual(const Field& r) {
    double m = 0;
    for (double v : r.values()) m = std::max(m, std::abs(v));
    return m;
}

/// D²E_ε(u)[v] = ∫|∇v|² + (2/ε²)⟨u,v⟩² - (1/ε²)(1-|u|²)|v|².
/// Exact second t-derivative of the discrete energy along u + t v.
inline double second_variation(const Field& u, double eps, const Field& v) {
    if (!(eps > 0)) throw ConfigError("epsilon must be positive");
    if (!u.same_layout(v)) throw Error("mismatched fields in second_variation");
    const auto& g = u.grid();
    if (g.bc == Bc::dirichlet) {
        for (int i = 0; i < g.nx; ++i)
            for (int j : {0, g.ny - 1})
                for (int c = 0; c < v.n_comp(); ++c)
                    if (std::abs(v.at(i, j, c)) > 0)
                        throw Error("variation must vanish on the Dirichlet boundary");
        for (int j = 0; j < g.ny; ++j)
            for (int i : {0, g.nx - 1})
                for (int c = 0; c < v.n_comp(); ++c)
                    if (std::abs(v.at(i, j, c)) > 0)
                        throw Error("variation must vanish on the Dirichlet boundary");
    }
    double q = 2.0 * detail::dirichlet_edge_sum(v);  // ∫|∇v|², no ½
    const double inv_e2 = 1.0 / (eps * eps);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double uv = 0, m2 = 0, v2 = 0;
            for (int c = 0; c < u.n_comp(); ++c) {
                uv += u.at(i, j, c) * v.at(i, j, c);
                m2 += u.at(i, j, c) * u.at(i, j, c);
                v2 += v.at(i, j, c) * v.at(i, j, c);
            }
            q += g.volume(i, j) * inv_e2 * (2.0 * uv * uv - (1.0 - m2) * v2);
        }
    return q;
}

/// Polarized bilinear form of the second variation.
inline double second_variation_bilinear(const Field& u, double eps, const Field& v,
                                        const Field& w) {
    Field p = v, m = v;
    for (size_t k = 0; k < p.values().size(); ++k) {
        p.values()[k] += w.values()[k];
        m.values()[k] -= w.values()[k];
    }
    return 0.25 * (second_variation(u, eps, p) - second_variation(u, eps, m));
}

}  // namespace glneck
