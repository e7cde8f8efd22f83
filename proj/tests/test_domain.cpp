#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include "glneck/annulus.hpp"
#include "glneck/energy.hpp"
#include "glneck/grid.hpp"
#include "glneck/operators.hpp"

using namespace glneck;

namespace {

GridPtr torus(int n, double L = 1.0) {
    return build_grid({GridKind::torus, n, n, L, L});
}

GridPtr patch(GridKind kind, int n, double L) {
    return build_grid({kind, n, n, L, L});
}

}  // namespace

TEST_CASE("build_grid populates the conformal factor") {
    auto t = torus(64);
    for (double l : t->lambda_field) REQUIRE(l == 0.0);

    auto p = patch(GridKind::plane_patch, 65, 4.0);  // [-2,2]², odd n puts a node at 0
    const int ic = 32;
    REQUIRE(p->x(ic) == Catch::Approx(0.0).margin(1e-15));
    REQUIRE(p->lambda(ic, ic) == Catch::Approx(std::log(2.0)));
    // λ = 0 at |x| = 1
    const int i1 = static_cast<int>(std::lround((1.0 + 2.0) / p->spacing));
    if (std::abs(p->x(i1) - 1.0) < 1e-12)
        REQUIRE(p->lambda(i1, ic) == Catch::Approx(0.0).margin(1e-14));

    REQUIRE(t->bc == Bc::periodic);
    REQUIRE(p->bc == Bc::dirichlet);
    REQUIRE_THROWS_AS(build_grid({GridKind::torus, 4, 4, 1, 1}), ConfigError);
    REQUIRE_THROWS_AS(build_grid({GridKind::disk, 16, 16, -1, -1}), ConfigError);
}

TEST_CASE("laplace_beltrami is exact on quadratics and constants") {
    auto g = patch(GridKind::disk, 33, 2.0);
    Field f(g, 1), c(g, 1, 3.5);
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i)
            f.at(i, j, 0) = g->x(i) * g->x(i) + g->y(j) * g->y(j);
    Field lap = laplace_beltrami(*g, f);
    Field lapc = laplace_beltrami(*g, c);
    for (int j = 1; j < g->ny - 1; ++j)
        for (int i = 1; i < g->nx - 1; ++i) {
            REQUIRE(lap.at(i, j, 0) == Catch::Approx(4.0).margin(1e-10));
            REQUIRE(lapc.at(i, j, 0) == Catch::Approx(0.0).margin(1e-12));
        }
}

TEST_CASE("laplace_beltrami converges at second order on sin(2πx)") {
    double err[2];
    int ns[2] = {64, 128};
    for (int k = 0; k < 2; ++k) {
        auto g = torus(ns[k]);
        Field f(g, 1);
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i) f.at(i, j, 0) = std::sin(2.0 * M_PI * g->x(i));
        Field lap = laplace_beltrami(*g, f);
        double e = 0;
        for (int j = 0; j < g->ny; ++j)
            for (int i = 0; i < g->nx; ++i)
                e = std::max(e, std::abs(lap.at(i, j, 0) +
                                         4.0 * M_PI * M_PI * std::sin(2.0 * M_PI * g->x(i))));
        err[k] = e;
    }
    const double ratio = err[0] / err[1];
    REQUIRE(ratio > 3.5);
    REQUIRE(ratio < 4.5);
}

TEST_CASE("gradients: linear fields and the curl-of-gradient identity") {
    auto g = torus(48);
    Field f(g, 1);
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i)
            f.at(i, j, 0) = std::sin(2.0 * M_PI * g->x(i)) * std::cos(2.0 * M_PI * g->y(j));
    GradientPair gr = gradients(*g, f);
    // div(perp_grad f) = 0 to rounding: matching centered stencils commute
    Field px = gr.perp_x(), py = gr.perp_y();
    Field div = divergence(*g, px, py);
    for (double v : div.values()) REQUIRE(std::abs(v) < 1e-11);

    auto d = patch(GridKind::disk, 32, 2.0);
    Field lin(d, 1);
    for (int j = 0; j < d->ny; ++j)
        for (int i = 0; i < d->nx; ++i) lin.at(i, j, 0) = d->x(i);
    GradientPair gl = gradients(*d, lin);
    for (int j = 1; j < d->ny - 1; ++j)
        for (int i = 1; i < d->nx - 1; ++i) {
            REQUIRE(gl.dx.at(i, j, 0) == Catch::Approx(1.0).margin(1e-12));
            REQUIRE(gl.dy.at(i, j, 0) == Catch::Approx(0.0).margin(1e-12));
        }
}

TEST_CASE("duality: <Δ_h f, g>_vol = -<∇f,∇g> up to rounding on the torus") {
    auto g = torus(32);
    Field f(g, 1), w(g, 1);
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            f.at(i, j, 0) = std::sin(2 * M_PI * g->x(i)) + 0.3 * std::cos(4 * M_PI * g->y(j));
            w.at(i, j, 0) = std::sin(2 * M_PI * g->x(i)) * (1.0 + 0.2 * std::cos(2 * M_PI * g->y(j)));
        }
    Field lap = laplace_beltrami(*g, f);
    double lhs = 0;
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) lhs += lap.at(i, j, 0) * w.at(i, j, 0) * g->volume(i, j);
    // edge-sum pairing by polarization of the Dirichlet form
    Field s = f, d2 = f;
    for (size_t k = 0; k < s.values().size(); ++k) {
        s.values()[k] += w.values()[k];
        d2.values()[k] -= w.values()[k];
    }
    const double rhs =
        0.5 * (detail::dirichlet_edge_sum(s) - detail::dirichlet_edge_sum(d2));  // Σ Df·Dg h²
    REQUIRE(lhs == Catch::Approx(-rhs).margin(1e-10 * (1.0 + std::abs(rhs))));
}

TEST_CASE("annulus_system: dyadic indices and the exact partition") {
    auto g = patch(GridKind::disk, 129, 2.0);
    AnnulusSystem ann = annulus_system(g, 0, 0, 0.5, 1.0 / 32.0);
    REQUIRE(ann.inner_radius() == Catch::Approx(1.0 / 16.0));
    REQUIRE(ann.s1 == 2);                       // 2^{-s1} <= η/2 = 1/4
    REQUIRE(std::pow(2.0, -ann.s1) <= 0.25 + 1e-15);
    REQUIRE(std::pow(2.0, -ann.s2) >= 2.0 * ann.delta / ann.eta - 1e-15);

    // every neck node lies in exactly one annulus, and counts add up
    size_t neck_nodes = 0;
    std::vector<size_t> per_j(ann.j_hi - ann.j_lo + 1, 0);
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            const double r = ann.r_of(i, j);
            const int a = ann.annulus_of_node[g->node(i, j)];
            if (r > ann.inner_radius() && r <= ann.eta) {
                ++neck_nodes;
                REQUIRE(a >= ann.j_lo);
                REQUIRE(a <= ann.j_hi);
                ++per_j[a - ann.j_lo];
            } else {
                REQUIRE(a == -1);
            }
        }
    size_t total = 0;
    for (size_t c : per_j) total += c;
    REQUIRE(total == neck_nodes);

    REQUIRE_THROWS_AS(annulus_system(g, 0, 0, 0.125, 0.125), NumericError);  // η = δ
}

TEST_CASE("polar_resample: constants, linear exactness, Fourier mode recovery") {
    auto g = patch(GridKind::disk, 129, 2.0);
    Field one(g, 1, 1.0), fx(g, 1), fm(g, 1);
    for (int j = 0; j < g->ny; ++j)
        for (int i = 0; i < g->nx; ++i) {
            fx.at(i, j, 0) = g->x(i);
            const double th = std::atan2(g->y(j), g->x(i));
            fm.at(i, j, 0) = std::cos(3.0 * th) * std::exp(-g->x(i) * g->x(i));
        }
    const int nt = 64;
    auto p1 = polar_resample(*g, one, 0, 0, {0.3, 0.6}, nt);
    for (const auto& ring : p1.values)
        for (double v : ring) REQUIRE(v == Catch::Approx(1.0).margin(1e-12));

    auto p2 = polar_resample(*g, fx, 0, 0, {0.5}, nt);
    for (int t = 0; t < nt; ++t)
        REQUIRE(p2.at(0, t, 0) ==
                Catch::Approx(0.5 * std::cos(p2.theta(t))).margin(3 * g->spacing * g->spacing));

    auto p3 = polar_resample(*g, fm, 0, 0, {0.55}, nt);
    double best = 0;
    int best_m = -1;
    for (int m = 0; m <= 8; ++m) {
        std::complex<double> c{0, 0};
        for (int t = 0; t < nt; ++t)
            c += p3.at(0, t, 0) * std::exp(std::complex<double>(0, -m * p3.theta(t)));
        if (std::abs(c) > best) {
            best = std::abs(c);
            best_m = m;
        }
    }
    REQUIRE(best_m == 3);

    REQUIRE_THROWS_AS(polar_resample(*g, one, 0, 0, {1.5}, nt), NumericError);
}
