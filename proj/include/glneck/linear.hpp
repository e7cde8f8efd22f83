#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <functional>
#include <vector>

#include "glneck/grid.hpp"

namespace glneck {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// -Δ with Dirichlet data on an arbitrary active-node set of a Dirichlet grid.
/// Matrix convention: h²·(-Δ₅), i.e. 4 on the diagonal and -1 off; the
/// right-hand side must be scaled by h² accordingly.
class MaskedPoisson {
public:
    MaskedPoisson(GridPtr grid, std::vector<char> active) : grid_(std::move(grid)), active_(std::move(active)) {
        if (grid_->bc != Bc::dirichlet) throw Error("MaskedPoisson needs a Dirichlet grid");
        dof_.assign(grid_->n_nodes(), -1);
        for (int j = 1; j < grid_->ny - 1; ++j)
            for (int i = 1; i < grid_->nx - 1; ++i) {
                const size_t p = grid_->node(i, j);
                if (active_[p]) dof_[p] = n_dof_++;
            }
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(n_dof_) * 5);
        for (int j = 1; j < grid_->ny - 1; ++j)
            for (int i = 1; i < grid_->nx - 1; ++i) {
                const int d = dof_[grid_->node(i, j)];
                if (d < 0) continue;
                trip.emplace_back(d, d, 4.0);
                for (auto [di, dj] : neighbors()) {
                    const int dn = dof_at(i + di, j + dj);
                    if (dn >= 0) trip.emplace_back(d, dn, -1.0);
                }
            }
        SpMat A(n_dof_, n_dof_);
        A.setFromTriplets(trip.begin(), trip.end());
        ldlt_.compute(A);
        if (ldlt_.info() != Eigen::Success) throw NumericError("Poisson factorization failed");
    }

    /// All interior nodes active.
    explicit MaskedPoisson(GridPtr grid)
        : MaskedPoisson(grid, std::vector<char>(grid->n_nodes(), 1)) {}

    int n_dof() const { return n_dof_; }
    int dof_at(int i, int j) const {
        if (i < 0 || i >= grid_->nx || j < 0 || j >= grid_->ny) return -1;
        return dof_[grid_->node(i, j)];
    }
    bool is_active(size_t node) const { return dof_[node] >= 0; }

    /// Solve -Δ f = rhs with values of `bc` on every inactive node.
    /// rhs and bc are full-grid fields; the result has bc values outside the
    /// active set and the solution inside.
    Field solve(const Field& rhs, const Field& bc) const {
        const auto& g = *grid_;
        const int nc = rhs.n_comp();
        Field out = bc;
        const double h2 = g.spacing * g.spacing;
        for (int c = 0; c < nc; ++c) {
            Vec b = Vec::Zero(n_dof_);
            for (int j = 1; j < g.ny - 1; ++j)
                for (int i = 1; i < g.nx - 1; ++i) {
                    const int d = dof_at(i, j);
                    if (d < 0) continue;
                    double v = h2 * rhs.at(i, j, c);
                    for (auto [di, dj] : neighbors())
                        if (dof_at(i + di, j + dj) < 0) v += bc.at(i + di, j + dj, c);
                    b[d] = v;
                }
            Vec x = ldlt_.solve(b);
            if (ldlt_.info() != Eigen::Success) throw NumericError("Poisson solve failed");
            for (int j = 1; j < g.ny - 1; ++j)
                for (int i = 1; i < g.nx - 1; ++i) {
                    const int d = dof_at(i, j);
                    if (d >= 0) out.at(i, j, c) = x[d];
                }
        }
        return out;
    }

    static const std::array<std::pair<int, int>, 4>& neighbors() {
        static const std::array<std::pair<int, int>, 4> n{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};
        return n;
    }

private:
    GridPtr grid_;
    std::vector<char> active_;
    std::vector<int> dof_;
    int n_dof_ = 0;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
};

/// SPD preconditioner (h²(-Δ₅) + shift·h²·I) over all free nodes of the grid,
/// applied per component. On the torus the stencil wraps; on Dirichlet grids
/// the ring is pinned to zero.
class ShiftedLaplacian {
public:
    ShiftedLaplacian(GridPtr grid, double shift) : grid_(std::move(grid)) {
        const auto& g = *grid_;
        const double h2 = g.spacing * g.spacing;
        dof_.assign(g.n_nodes(), -1);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i)
                if (!g.is_boundary(i, j)) dof_[g.node(i, j)] = n_dof_++;
        std::vector<Eigen::Triplet<double>> trip;
        trip.reserve(static_cast<size_t>(n_dof_) * 5);
        for (int j = 0; j < g.ny; ++j)
            for (int i = 0; i < g.nx; ++i) {
                const int d = dof_[g.node(i, j)];
                if (d < 0) continue;
                trip.emplace_back(d, d, 4.0 + shift * h2);
                for (auto [di, dj] : MaskedPoisson::neighbors()) {
                    int ii = i + di, jj = j + dj;
                    if (g.bc == Bc::periodic) {
                        ii = g.wrap_x(ii);
                        jj = g.wrap_y(jj);
                    } else if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny)
                        continue;
                    const int dn = dof_[g.node(ii, jj)];
                    if (dn >= 0) trip.emplace_back(d, dn, -1.0);
                }
            }
        SpMat A(n_dof_, n_dof_);
        A.setFromTriplets(trip.begin(), trip.end());
        ldlt_.compute(A);
        if (ldlt_.info() != Eigen::Success) throw NumericError("preconditioner factorization failed");
    }

    /// Apply P⁻¹ componentwise to a nodal gradient (zero outside free nodes).
    Field apply_inverse(const Field& gradient) const {
        const auto& g = *grid_;
        Field out(gradient.grid_ptr(), gradient.n_comp());
        Vec b(n_dof_);
        for (int c = 0; c < gradient.n_comp(); ++c) {
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const int d = dof_[g.node(i, j)];
                    if (d >= 0) b[d] = gradient.at(i, j, c);
                }
            Vec x = ldlt_.solve(b);
            for (int j = 0; j < g.ny; ++j)
                for (int i = 0; i < g.nx; ++i) {
                    const int d = dof_[g.node(i, j)];
                    if (d >= 0) out.at(i, j, c) = x[d];
                }
        }
        return out;
    }

private:
    GridPtr grid_;
    std::vector<int> dof_;
    int n_dof_ = 0;
    Eigen::SimplicialLDLT<SpMat> ldlt_;
};

/// Preconditioned conjugate gradients on a matrix-free SPD operator.
/// Returns false if negative curvature is detected (operator not SPD).
struct CgResult {
    bool spd = true;
    bool converged = false;
    int iterations = 0;
};

inline CgResult pcg(const std::function<void(const Vec&, Vec&)>& apply_A,
                    const std::function<void(const Vec&, Vec&)>& apply_Minv, const Vec& b, Vec& x,
                    double rel_tol, int max_iter) {
    CgResult res;
    const int n = static_cast<int>(b.size());
    Vec r = b, z(n), p(n), Ap(n);
    x.setZero();
    apply_Minv(r, z);
    p = z;
    double rz = r.dot(z);
    const double b_norm = b.norm();
    if (b_norm == 0) {
        res.converged = true;
        return res;
    }
    for (int it = 0; it < max_iter; ++it) {
        apply_A(p, Ap);
        const double pAp = p.dot(Ap);
        if (pAp <= 0) {
            res.spd = false;
            return res;
        }
        const double alpha = rz / pAp;
        x += alpha * p;
        r -= alpha * Ap;
        res.iterations = it + 1;
        if (r.norm() <= rel_tol * b_norm) {
            res.converged = true;
            return res;
        }
        apply_Minv(r, z);
        const double rz_new = r.dot(z);
        p = z + (rz_new / rz) * p;
        rz = rz_new;
    }
    return res;
}

}  // namespace glneck
