#pragma once

#include <cmath>
#include <vector>

#include "glneck/annulus.hpp"
#include "glneck/energy.hpp"
#include "glneck/operators.hpp"

namespace glneck {

/// u ∧ ∇u with centered stencils. One component per index pair (i<j),
/// pair order (0,1), (0,2), ..., (1,2), ...
struct WedgeCurrent {
    std::vector<std::pair<int, int>> pairs;
    Field cur_x, cur_y;   // per pair
    Field div_residual;   // per pair, centered divergence
};

inline std::vector<std::pair<int, int>> wedge_pairs(int n_comp) {
    std::vector<std::pair<int, int>> p;
    for (int a = 0; a < n_comp; ++a)
        for (int b = a + 1; b < n_comp; ++b) p.emplace_back(a, b);
    return p;
}

inline WedgeCurrent wedge_current(const Field& u) {
    const auto& g = u.grid();
    WedgeCurrent w;
    w.pairs = wedge_pairs(u.n_comp());
    const int np = static_cast<int>(w.pairs.size());
    w.cur_x = Field(u.grid_ptr(), np);
    w.cur_y = Field(u.grid_ptr(), np);
    GradientPair gr = gradients(g, u);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i)
            for (int p = 0; p < np; ++p) {
                const auto [a, b] = w.pairs[p];
                w.cur_x.at(i, j, p) =
                    u.at(i, j, a) * gr.dx.at(i, j, b) - u.at(i, j, b) * gr.dx.at(i, j, a);
                w.cur_y.at(i, j, p) =
                    u.at(i, j, a) * gr.dy.at(i, j, b) - u.at(i, j, b) * gr.dy.at(i, j, a);
            }
    w.div_residual = divergence(g, w.cur_x, w.cur_y);
    return w;
}

inline double max_div_residual(const WedgeCurrent& w, int margin = 2) {
    const auto& g = w.cur_x.grid();
    double m = 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.bc == Bc::dirichlet &&
                (i < margin || i >= g.nx - margin || j < margin || j >= g.ny - margin))
                continue;
            double s = 0;
            for (int p = 0; p < w.div_residual.n_comp(); ++p)
                s += w.div_residual.at(i, j, p) * w.div_residual.at(i, j, p);
            m = std::max(m, std::sqrt(s));
        }
    return m;
}

/// Hopf differential H = ∂_z u · ∂_z u, ∂_z = (∂_x - i∂_y)/2, and |∂_z̄ H|.
struct HopfDifferential {
    Field re, im;       // H per node
    Field antiholo;     // |∂_z̄ H|
    double l1_antiholo = 0;  // ∫|∂_z̄ H| with volume weights
};

inline HopfDifferential hopf_differential(const Field& u) {
    const auto& g = u.grid();
    GradientPair gr = gradients(g, u);
    HopfDifferential h;
    h.re = Field(u.grid_ptr(), 1);
    h.im = Field(u.grid_ptr(), 1);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            double re = 0, im = 0;
            for (int c = 0; c < u.n_comp(); ++c) {
                const double ax = gr.dx.at(i, j, c), ay = gr.dy.at(i, j, c);
                // (ax - i ay)²/4 summed over components
                re += (ax * ax - ay * ay) * 0.25;
                im += -2.0 * ax * ay * 0.25;
            }
            h.re.at(i, j, 0) = re;
            h.im.at(i, j, 0) = im;
        }
    GradientPair gre = gradients(g, h.re), gim = gradients(g, h.im);
    h.antiholo = Field(u.grid_ptr(), 1);
    const int margin = g.bc == Bc::dirichlet ? 2 : 0;
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            if (g.bc == Bc::dirichlet &&
                (i < margin || i >= g.nx - margin || j < margin || j >= g.ny - margin))
                continue;
            const double re = 0.5 * (gre.dx.at(i, j, 0) - gim.dy.at(i, j, 0));
            const double im = 0.5 * (gre.dy.at(i, j, 0) + gim.dx.at(i, j, 0));
            const double v = std::hypot(re, im);
            h.antiholo.at(i, j, 0) = v;
            h.l1_antiholo += v * g.volume(i, j);
        }
    return h;
}

/// Pohozaev balance on B_R: c∫_{B_R}(1-|v|²)² against R∮_{∂B_R}[|∇v|² + (1-|v|²)²],
/// with c = 1/ε². Flat charts only.
struct PohozaevReport {
    double radius = 0;
    double interior_potential = 0;
    double boundary_term = 0;
    double constant = 0;  // interior / boundary
    double defect = 0;    // interior - boundary
};

inline PohozaevReport pohozaev_check(const Field& u, double eps, double cx, double cy, double R) {
    const auto& g = u.grid();
    for (double l : g.lambda_field)
        if (std::abs(l) > 1e-12) throw NumericError("pohozaev_check requires a flat chart");
    if (R >= g.inradius_from(cx, cy)) throw NumericError("pohozaev ball exits domain");

    PohozaevReport rep;
    rep.radius = R;
    const double c = 1.0 / (eps * eps);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) {
            const double dx = g.x(i) - cx, dy = g.y(j) - cy;
            if (dx * dx + dy * dy > R * R) continue;
            double m2 = 0;
            for (int k = 0; k < u.n_comp(); ++k) m2 += u.at(i, j, k) * u.at(i, j, k);
            rep.interior_potential += c * (1.0 - m2) * (1.0 - m2) * g.volume(i, j);
        }
    // shell integrand |∇v|² + (1-|v|²)² resampled on the circle
    GradientPair gr = gradients(g, u);
    const int n_theta = 256;
    std::vector<double> buf(u.n_comp());
    double ring = 0;
    for (int t = 0; t < n_theta; ++t) {
        const double th = 2.0 * M_PI * t / n_theta;
        const double px = cx + R * std::cos(th), py = cy + R * std::sin(th);
        double g2 = 0, m2 = 0;
        bilinear(g, gr.dx, px, py, buf.data());
        for (double v : buf) g2 += v * v;
        bilinear(g, gr.dy, px, py, buf.data());
        for (double v : buf) g2 += v * v;
        bilinear(g, u, px, py, buf.data());
        for (double v : buf) m2 += v * v;
        ring += g2 + (1.0 - m2) * (1.0 - m2);
    }
    ring *= 2.0 * M_PI * R / n_theta;  // dl
    rep.boundary_term = R * ring;
    rep.constant = rep.boundary_term > 0 ? rep.interior_potential / rep.boundary_term
                                         : (rep.interior_potential > 0 ? HUGE_VAL : 0.0);
    rep.defect = rep.interior_potential - rep.boundary_term;
    return rep;
}

/// Fubini shell selection: radius in [R1, R2] minimizing R∮[|∇v|²+(1-|v|²)²].
inline double pohozaev_select_shell(const Field& u, double cx, double cy, double R1, double R2,
                                    int n_scan = 24) {
    const auto& g = u.grid();
    GradientPair gr = gradients(g, u);
    const int n_theta = 128;
    std::vector<double> buf(u.n_comp());
    double best_r = R1, best = HUGE_VAL;
    for (int s = 0; s < n_scan; ++s) {
        const double R = R1 + (R2 - R1) * (s + 0.5) / n_scan;
        if (R >= g.inradius_from(cx, cy)) break;
        double ring = 0;
        for (int t = 0; t < n_theta; ++t) {
            const double th = 2.0 * M_PI * t / n_theta;
            const double px = cx + R * std::cos(th), py = cy + R * std::sin(th);
            double g2 = 0, m2 = 0;
            bilinear(g, gr.dx, px, py, buf.data());
            for (double v : buf) g2 += v * v;
            bilinear(g, gr.dy, px, py, buf.data());
            for (double v : buf) g2 += v * v;
            bilinear(g, u, px, py, buf.data());
            for (double v : buf) m2 += v * v;
            ring += g2 + (1.0 - m2) * (1.0 - m2);
        }
        ring *= 2.0 * M_PI * R * R / n_theta;  // R ∮ ... dl
        if (ring < best) {
            best = ring;
            best_r = R;
        }
    }
    return best_r;
}

/// Bochner check: fraction of interior nodes where -Δ_h e_ε(u) > C (e² + e).
struct BochnerReport {
    Field lhs, rhs;
    double violation_fraction = 0;
    double max_ratio = 0;  // sup lhs/rhs over interior — the calibrated constant
};

inline BochnerReport bochner_residual(const Field& u, double eps, double C) {
    const auto& g = u.grid();
    EnergyReport er = energy(u, eps);
    Field lap = laplace_beltrami(g, er.density);
    BochnerReport rep;
    rep.lhs = Field(u.grid_ptr(), 1);
    rep.rhs = Field(u.grid_ptr(), 1);
    size_t n_int = 0, n_bad = 0;
    const int margin = g.bc == Bc::dirichlet ? 2 : 0;
    for (int j = margin; j < g.ny - margin; ++j)
        for (int i = margin; i < g.nx - margin; ++i) {
            const double e = er.density.at(i, j, 0);
            const double lhs = -lap.at(i, j, 0);
            const double rhs = e * e + e;
            rep.lhs.at(i, j, 0) = lhs;
            rep.rhs.at(i, j, 0) = rhs;
            ++n_int;
            if (lhs > C * rhs) ++n_bad;
            if (rhs > 1e-300) rep.max_ratio = std::max(rep.max_ratio, lhs / rhs);
        }
    rep.violation_fraction = n_int ? static_cast<double>(n_bad) / n_int : 0.0;
    return rep;
}

/// Residual of Δ|u| + |u|(1-|u|²)/ε² = |u∧∇u|²/|u|³ and the gradient-splitting
/// defect |∇u|² - |∇|u||² - |u∧∇u|²/|u|². Interior nodes of the region only.
struct ModulusReport {
    Field pde_residual;
    Field split_defect;
    double max_pde = 0, max_split = 0;
};

inline ModulusReport modulus_equation_residual(const Field& u, double eps,
                                               const std::vector<char>* region = nullptr) {
    const auto& g = u.grid();
    Field mod(u.grid_ptr(), 1);
    for (int j = 0; j < g.ny; ++j)
        for (int i = 0; i < g.nx; ++i) mod.at(i, j, 0) = u.modulus(i, j);
    for (size_t p = 0; p < g.n_nodes(); ++p)
        if ((!region || (*region)[p]) && mod.values()[p] < 1e-6)
            throw NumericError("modulus degenerate");

    Field lap_mod = laplace_beltrami(g, mod);
    GradientPair gm = gradients(g, mod);
    GradientPair gu = gradients(g, u);
    WedgeCurrent w = wedge_current(u);
    ModulusReport rep;
    rep.pde_residual = Field(u.grid_ptr(), 1);
    rep.split_defect = Field(u.grid_ptr(), 1);
    const double inv_e2 = 1.0 / (eps * eps);
    const int margin = g.bc == Bc::dirichlet ? 1 : 0;
    for (int j = margin; j < g.ny - margin; ++j)
        for (int i = margin; i < g.nx - margin; ++i) {
            if (region && !(*region)[g.node(i, j)]) continue;
            const double m = mod.at(i, j, 0);
            double wedge2 = 0;
            for (int p = 0; p < w.cur_x.n_comp(); ++p)
                wedge2 += w.cur_x.at(i, j, p) * w.cur_x.at(i, j, p) +
                          w.cur_y.at(i, j, p) * w.cur_y.at(i, j, p);
            double grad2 = 0;
            for (int c = 0; c < u.n_comp(); ++c)
                grad2 += gu.dx.at(i, j, c) * gu.dx.at(i, j, c) +
                         gu.dy.at(i, j, c) * gu.dy.at(i, j, c);
            const double gradmod2 =
                gm.dx.at(i, j, 0) * gm.dx.at(i, j, 0) + gm.dy.at(i, j, 0) * gm.dy.at(i, j, 0);
            const double pde =
                lap_mod.at(i, j, 0) + m * (1.0 - m * m) * inv_e2 - wedge2 / (m * m * m);
            const double split = grad2 - gradmod2 - wedge2 / (m * m);
            rep.pde_residual.at(i, j, 0) = pde;
            rep.split_defect.at(i, j, 0) = split;
            rep.max_pde = std::max(rep.max_pde, std::abs(pde));
            rep.max_split = std::max(rep.max_split, std::abs(split));
        }
    return rep;
}

}  // namespace glneck
