#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "glneck/grid.hpp"

namespace glneck {

/// Dyadic bookkeeping around a concentration center: annuli A_j = B_{2^{-j}} \ B_{2^{-j-1}}
/// and the neck A(η,δ) = B_η \ B_{δ/η}. s1..s2 is the fully interior dyadic range
/// 2δ/η <= 2^{-s2} <= 2^{-s1} <= η/2 used by ledgers and profile fits.
struct AnnulusSystem {
    GridPtr grid;
    double cx = 0, cy = 0;  // center snapped to the nearest node
    double eta = 0, delta = 0, delta0 = 0;
    int s1 = 0, s2 = -1;       // interior dyadic indices (may be empty: s2 < s1)
    int j_lo = 0, j_hi = -1;   // annuli touching the neck, covering j_lo..j_hi
    std::vector<int> annulus_of_node;  // -1 outside the neck, else j

    double inner_radius() const { return delta / eta; }
    double outer_radius() const { return eta; }
    int n_interior() const { return s2 - s1 + 1; }

    double r_of(int i, int j) const {
        const double dx = grid->x(i) - cx, dy = grid->y(j) - cy;
        return std::hypot(dx, dy);
    }

    bool in_neck(size_t node) const { return annulus_of_node[node] >= 0; }
};

/// j such that r ∈ (2^{-j-1}, 2^{-j}].
inline int dyadic_index(double r) {
    int j = static_cast<int>(std::floor(-std::log2(r)));
    // nudge exact/rounded powers onto the closed outer edge
    if (std::pow(2.0, -j - 1) >= r) ++j;
    if (std::pow(2.0, -j) < r) --j;
    return j;
}

inline AnnulusSystem annulus_system(GridPtr grid, double cx, double cy, double eta, double delta,
                                    double delta0 = 1e-2) {
    AnnulusSystem ann;
    ann.grid = grid;
    // snap center to the nearest node
    int ic = static_cast<int>(std::lround((cx + 0.5 * grid->extent_x) / grid->spacing));
    int jc = static_cast<int>(std::lround((cy + 0.5 * grid->extent_y) / grid->spacing));
    ic = std::min(std::max(ic, 0), grid->nx - 1);
    jc = std::min(std::max(jc, 0), grid->ny - 1);
    ann.cx = grid->x(ic);
    ann.cy = grid->y(jc);
    ann.eta = eta;
    ann.delta = delta;
    ann.delta0 = delta0;

    if (!(delta > 0) || !(eta > 0) || delta / eta >= eta) throw NumericError("degenerate neck");
    if (eta >= grid->inradius_from(ann.cx, ann.cy))
        throw NumericError("neck outer radius exceeds domain inradius (eta must be < " +
                           std::to_string(grid->inradius_from(ann.cx, ann.cy)) + ")");

    ann.s1 = static_cast<int>(std::ceil(std::log2(2.0 / eta)));
    ann.s2 = static_cast<int>(std::floor(std::log2(eta / (2.0 * delta))));
    ann.j_lo = dyadic_index(eta);
    ann.j_hi = dyadic_index(delta / eta);
    if (std::pow(2.0, -ann.j_hi - 1) >= delta / eta) --ann.j_hi;  // inner edge open

    ann.annulus_of_node.assign(grid->n_nodes(), -1);
    const double rin = delta / eta;
    for (int j = 0; j < grid->ny; ++j)
        for (int i = 0; i < grid->nx; ++i) {
            const double r = ann.r_of(i, j);
            if (r > rin && r <= eta) {
                int k = dyadic_index(r);
                k = std::min(std::max(k, ann.j_lo), ann.j_hi);
                ann.annulus_of_node[grid->node(i, j)] = k;
            }
        }
    return ann;
}

/// Field values interpolated onto circles: values[ring][theta*n_comp + c].
struct PolarSamples {
    std::vector<double> radii;
    int n_theta = 0;
    int n_comp = 0;
    std::vector<std::vector<double>> values;

    double theta(int t) const { return 2.0 * M_PI * t / n_theta; }
    double at(int ring, int t, int c) const {
        return values[ring][static_cast<size_t>(t) * n_comp + c];
    }
};

/// Bilinear interpolation of f at a physical point; pre: point inside the chart.
inline void bilinear(const DomainGrid& grid, const Field& f, double px, double py, double* out) {
    const double gx = (px + 0.5 * grid.extent_x) / grid.spacing;
    const double gy = (py + 0.5 * grid.extent_y) / grid.spacing;
    int i0, j0;
    double fx, fy;
    if (grid.bc == Bc::periodic) {
        i0 = static_cast<int>(std::floor(gx));
        j0 = static_cast<int>(std::floor(gy));
        fx = gx - i0;
        fy = gy - j0;
        i0 = grid.wrap_x(i0);
        j0 = grid.wrap_y(j0);
    } else {
        if (gx < 0 || gx > grid.nx - 1 || gy < 0 || gy > grid.ny - 1)
            throw NumericError("interpolation point exits domain");
        i0 = std::min(static_cast<int>(std::floor(gx)), grid.nx - 2);
        j0 = std::min(static_cast<int>(std::floor(gy)), grid.ny - 2);
        fx = gx - i0;
        fy = gy - j0;
    }
    const int i1 = grid.bc == Bc::periodic ? grid.wrap_x(i0 + 1) : i0 + 1;
    const int j1 = grid.bc == Bc::periodic ? grid.wrap_y(j0 + 1) : j0 + 1;
    for (int c = 0; c < f.n_comp(); ++c)
        out[c] = (1 - fx) * (1 - fy) * f.at(i0, j0, c) + fx * (1 - fy) * f.at(i1, j0, c) +
                 (1 - fx) * fy * f.at(i0, j1, c) + fx * fy * f.at(i1, j1, c);
}

inline PolarSamples polar_resample(const DomainGrid& grid, const Field& f, double cx, double cy,
                                   const std::vector<double>& radii, int n_theta) {
    check_match(grid, f);
    PolarSamples ps;
    ps.radii = radii;
    ps.n_theta = n_theta;
    ps.n_comp = f.n_comp();
    ps.values.resize(radii.size());
    for (double r : radii)
        if (grid.bc == Bc::dirichlet && r >= grid.inradius_from(cx, cy))
            throw NumericError("polar circle exits domain (r = " + std::to_string(r) + ")");
    std::vector<double> buf(f.n_comp());
    for (size_t k = 0; k < radii.size(); ++k) {
        ps.values[k].resize(static_cast<size_t>(n_theta) * f.n_comp());
        for (int t = 0; t < n_theta; ++t) {
            const double th = 2.0 * M_PI * t / n_theta;
            bilinear(grid, f, cx + radii[k] * std::cos(th), cy + radii[k] * std::sin(th),
                     buf.data());
            for (int c = 0; c < f.n_comp(); ++c)
                ps.values[k][static_cast<size_t>(t) * f.n_comp() + c] = buf[c];
        }
    }
    return ps;
}

}  // namespace glneck
