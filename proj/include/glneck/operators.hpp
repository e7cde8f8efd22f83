#pragma once

#include <cmath>

#include "glneck/grid.hpp"

namespace glneck {

/// Δ_h f = e^{-2λ} Δ f via the 5-point stencil. Second-order on smooth data.
/// On Dirichlet grids the output is 0 on the boundary ring (values there are data,
/// not unknowns); interior stencils read the stored boundary values directly.
inline Field laplace_beltrami(const DomainGrid& grid, const Field& f) {
    check_match(grid, f);
    Field out(f.grid_ptr(), f.n_comp());
    const double inv_h2 = 1.0 / (grid.spacing * grid.spacing);
    const int nx = grid.nx, ny = grid.ny, nc = f.n_comp();
    if (grid.bc == Bc::periodic) {
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i) {
                const int ip = grid.wrap_x(i + 1), im = grid.wrap_x(i - 1);
                const int jp = grid.wrap_y(j + 1), jm = grid.wrap_y(j - 1);
                const double w = std::exp(-2.0 * grid.lambda(i, j)) * inv_h2;
                for (int c = 0; c < nc; ++c)
                    out.at(i, j, c) = w * (f.at(ip, j, c) + f.at(im, j, c) + f.at(i, jp, c) +
                                           f.at(i, jm, c) - 4.0 * f.at(i, j, c));
            }
    } else {
        for (int j = 1; j < ny - 1; ++j)
            for (int i = 1; i < nx - 1; ++i) {
                const double w = std::exp(-2.0 * grid.lambda(i, j)) * inv_h2;
                for (int c = 0; c < nc; ++c)
                    out.at(i, j, c) = w * (f.at(i + 1, j, c) + f.at(i - 1, j, c) +
                                           f.at(i, j + 1, c) + f.at(i, j - 1, c) -
                                           4.0 * f.at(i, j, c));
            }
    }
    return out;
}

struct GradientPair {
    Field dx, dy;  // flat-chart partials, per component

    /// π/2 rotation: perp = (-∂_y f, ∂_x f).
    Field perp_x() const {
        Field g = dy;
        for (double& v : g.values()) v = -v;
        return g;
    }
    Field perp_y() const { return dx; }
};

/// Centered first differences; one-sided second-order stencils on Dirichlet edges.
inline GradientPair gradients(const DomainGrid& grid, const Field& f) {
    check_match(grid, f);
    GradientPair g{Field(f.grid_ptr(), f.n_comp()), Field(f.grid_ptr(), f.n_comp())};
    const double inv2h = 0.5 / grid.spacing;
    const int nx = grid.nx, ny = grid.ny, nc = f.n_comp();
    auto one_sided = [&](double f0, double f1, double f2) {
        return (-3.0 * f0 + 4.0 * f1 - f2) * inv2h;
    };
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            for (int c = 0; c < nc; ++c) {
                double gx, gy;
                if (grid.bc == Bc::periodic) {
                    gx = (f.at(grid.wrap_x(i + 1), j, c) - f.at(grid.wrap_x(i - 1), j, c)) * inv2h;
                    gy = (f.at(i, grid.wrap_y(j + 1), c) - f.at(i, grid.wrap_y(j - 1), c)) * inv2h;
                } else {
                    if (i == 0)
                        gx = one_sided(f.at(0, j, c), f.at(1, j, c), f.at(2, j, c));
                    else if (i == nx - 1)
                        gx = -one_sided(f.at(nx - 1, j, c), f.at(nx - 2, j, c), f.at(nx - 3, j, c));
                    else
                        gx = (f.at(i + 1, j, c) - f.at(i - 1, j, c)) * inv2h;
                    if (j == 0)
                        gy = one_sided(f.at(i, 0, c), f.at(i, 1, c), f.at(i, 2, c));
                    else if (j == ny - 1)
                        gy = -one_sided(f.at(i, ny - 1, c), f.at(i, ny - 2, c), f.at(i, ny - 3, c));
                    else
                        gy = (f.at(i, j + 1, c) - f.at(i, j - 1, c)) * inv2h;
                }
                g.dx.at(i, j, c) = gx;
                g.dy.at(i, j, c) = gy;
            }
    return g;
}

/// Centered divergence of a per-component plane vector field (fx, fy).
/// Dirichlet grids: computed on interior nodes only, 0 on the ring.
inline Field divergence(const DomainGrid& grid, const Field& fx, const Field& fy) {
    check_match(grid, fx);
    check_match(grid, fy);
    Field out(fx.grid_ptr(), fx.n_comp());
    const double inv2h = 0.5 / grid.spacing;
    const int nx = grid.nx, ny = grid.ny, nc = fx.n_comp();
    const bool per = grid.bc == Bc::periodic;
    const int i0 = per ? 0 : 1, i1 = per ? nx : nx - 1;
    const int j0 = per ? 0 : 1, j1 = per ? ny : ny - 1;
    for (int j = j0; j < j1; ++j)
        for (int i = i0; i < i1; ++i) {
            const int ip = per ? grid.wrap_x(i + 1) : i + 1;
            const int im = per ? grid.wrap_x(i - 1) : i - 1;
            const int jp = per ? grid.wrap_y(j + 1) : j + 1;
            const int jm = per ? grid.wrap_y(j - 1) : j - 1;
            for (int c = 0; c < nc; ++c)
                out.at(i, j, c) =
                    (fx.at(ip, j, c) - fx.at(im, j, c) + fy.at(i, jp, c) - fy.at(i, jm, c)) * inv2h;
        }
    return out;
}

}  // namespace glneck
