#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "glneck/error.hpp"

namespace glneck {

enum class GridKind { torus, disk, plane_patch };
enum class Bc { periodic, dirichlet };

inline std::string to_string(GridKind k) {
    switch (k) {
        case GridKind::torus: return "torus";
        case GridKind::disk: return "disk";
        case GridKind::plane_patch: return "plane_patch";
    }
    return "?";
}

inline std::string to_string(Bc b) { return b == Bc::periodic ? "periodic" : "dirichlet"; }

inline GridKind grid_kind_from_string(const std::string& s) {
    if (s == "torus") return GridKind::torus;
    if (s == "disk") return GridKind::disk;
    if (s == "plane_patch") return GridKind::plane_patch;
    throw ConfigError("unsupported grid kind: " + s);
}

struct GridSpec {
    GridKind kind = GridKind::torus;
    int nx = 64;
    int ny = 64;
    double extent_x = 1.0;  // full physical side length
    double extent_y = 1.0;
};

/// Uniform Cartesian chart with conformal metric h = e^{2λ}δ, centered at the origin.
///
/// torus: periodic nodes x_i = -L/2 + i h with h = L/n (no duplicated seam).
/// disk / plane_patch: Dirichlet nodes x_i = -L/2 + i h with h = L/(n-1),
/// both edges included; the outermost ring is the Dirichlet boundary.
/// plane_patch carries the stereographic factor λ(x) = log(2/(1+|x|²)).
class DomainGrid {
public:
    GridKind kind;
    Bc bc;
    int nx, ny;
    double spacing;
    double extent_x, extent_y;
    std::vector<double> lambda_field;  // per node

    static std::shared_ptr<const DomainGrid> build(const GridSpec& spec) {
        auto g = std::make_shared<DomainGrid>();
        if (spec.nx < 8 || spec.ny < 8) throw ConfigError("grid needs n_x, n_y >= 8");
        if (spec.extent_x <= 0 || spec.extent_y <= 0) throw ConfigError("grid extent must be positive");
        g->kind = spec.kind;
        g->bc = spec.kind == GridKind::torus ? Bc::periodic : Bc::dirichlet;
        g->nx = spec.nx;
        g->ny = spec.ny;
        g->extent_x = spec.extent_x;
        g->extent_y = spec.extent_y;
        const double hx = spec.kind == GridKind::torus ? spec.extent_x / spec.nx
                                                       : spec.extent_x / (spec.nx - 1);
        const double hy = spec.kind == GridKind::torus ? spec.extent_y / spec.ny
                                                       : spec.extent_y / (spec.ny - 1);
        if (std::abs(hx - hy) > 1e-12 * hx)
            throw ConfigError("grid must be isotropic (extent/node counts give unequal spacing)");
        g->spacing = hx;
        g->lambda_field.assign(static_cast<size_t>(spec.nx) * spec.ny, 0.0);
        if (spec.kind == GridKind::plane_patch) {
            for (int j = 0; j < g->ny; ++j)
                for (int i = 0; i < g->nx; ++i) {
                    const double x = g->x(i), y = g->y(j);
                    g->lambda_field[g->node(i, j)] = std::log(2.0 / (1.0 + x * x + y * y));
                }
        }
        return g;
    }

    size_t node(int i, int j) const { return static_cast<size_t>(j) * nx + i; }
    size_t n_nodes() const { return static_cast<size_t>(nx) * ny; }
    double x(int i) const { return -0.5 * extent_x + i * spacing; }
    double y(int j) const { return -0.5 * extent_y + j * spacing; }
    double lambda(int i, int j) const { return lambda_field[node(i, j)]; }

    bool is_boundary(int i, int j) const {
        if (bc == Bc::periodic) return false;
        return i == 0 || i == nx - 1 || j == 0 || j == ny - 1;
    }

    /// Volume weight of the midpoint quadrature at a node, e^{2λ} h².
    double volume(int i, int j) const {
        const double l = lambda_field[node(i, j)];
        return std::exp(2.0 * l) * spacing * spacing;
    }

    /// Distance from (px,py) to the nearest domain edge (torus: half the extent).
    double inradius_from(double px, double py) const {
        if (bc == Bc::periodic) return 0.5 * std::min(extent_x, extent_y);
        const double dx = 0.5 * extent_x - std::abs(px);
        const double dy = 0.5 * extent_y - std::abs(py);
        return std::min(dx, dy);
    }

    int wrap_x(int i) const { return ((i % nx) + nx) % nx; }
    int wrap_y(int j) const { return ((j % ny) + ny) % ny; }
};

using GridPtr = std::shared_ptr<const DomainGrid>;

inline GridPtr build_grid(const GridSpec& spec) { return DomainGrid::build(spec); }

/// Nodal map into R^{n_comp}; components interleaved per node, rows over y.
class Field {
public:
    Field() = default;
    Field(GridPtr grid, int n_comp, double fill = 0.0)
        : grid_(std::move(grid)), n_comp_(n_comp),
          values_(grid_->n_nodes() * static_cast<size_t>(n_comp), fill) {
        if (n_comp < 1) throw ConfigError("n_comp must be >= 1");
    }

    const DomainGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    int n_comp() const { return n_comp_; }

    double& at(int i, int j, int c) { return values_[grid_->node(i, j) * n_comp_ + c]; }
    double at(int i, int j, int c) const { return values_[grid_->node(i, j) * n_comp_ + c]; }
    double& at(size_t node, int c) { return values_[node * n_comp_ + c]; }
    double at(size_t node, int c) const { return values_[node * n_comp_ + c]; }

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    double modulus(int i, int j) const {
        double s = 0;
        for (int c = 0; c < n_comp_; ++c) s += at(i, j, c) * at(i, j, c);
        return std::sqrt(s);
    }

    bool all_finite() const {
        for (double v : values_)
            if (!std::isfinite(v)) return false;
        return true;
    }

    bool same_layout(const Field& other) const {
        return grid_.get() == other.grid_.get() && n_comp_ == other.n_comp_;
    }

private:
    GridPtr grid_;
    int n_comp_ = 0;
    std::vector<double> values_;
};

inline void check_match(const DomainGrid& grid, const Field& f) {
    if (&grid != &f.grid()) throw Error("grid/field mismatch");
}

}  // namespace glneck
