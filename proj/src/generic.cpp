#include "asep/generic.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include "asep/model.hpp"
#include "asep/observables.hpp"
#include "asep/steady.hpp"

namespace asep {

VectorXd numeric_steady_state(const BoundaryRates& rates) {
    rates.validate();
    rates.require_positive();
    if (rates.n_sites > kDenseLimit) {
        throw validation_error("dense eigen route limited to small chains");
    }
    const MatrixXd m = build_markov_generator(rates);
    Eigen::EigenSolver<MatrixXd> eig(m);
    if (eig.info() != Eigen::Success) {
        throw numerical_error("eigen decomposition failed");
    }
    const auto& vals = eig.eigenvalues();
    Eigen::Index best = 0;
    Eigen::Index second = -1;
    for (Eigen::Index i = 1; i < vals.size(); ++i) {
        if (std::abs(vals[i]) < std::abs(vals[best])) {
            second = best;
            best = i;
        } else if (second < 0 || std::abs(vals[i]) < std::abs(vals[second])) {
            second = i;
        }
    }
    if (std::abs(vals[best]) > 1e-10) {
        throw numerical_error("no eigenvalue at zero");
    }
    if (second >= 0 && std::abs(vals[second]) <= 1e-10) {
        throw numerical_error("null space dimension != 1");
    }
    VectorXd v = eig.eigenvectors().col(best).real();
    const double total = v.sum();
    if (total == 0) throw numerical_error("stationary vector has zero sum");
    v /= total;
    return v;
}

VectorXd numeric_steady_state_sparse(const BoundaryRates& rates) {
    rates.validate();
    rates.require_positive();
    if (rates.n_sites > kSparseLimit) {
        throw validation_error("sparse route limited to kSparseLimit sites");
    }
    const Eigen::SparseMatrix<double> m = build_markov_sparse(rates);
    const Eigen::Index dim = m.rows();

    // Rough stationary estimate by uniformized power iteration; it seeds the
    // Krylov solve and picks the pin index below at the distribution's mode.
    double scale = 0;
    for (Eigen::Index i = 0; i < dim; ++i) scale = std::max(scale, -m.coeff(i, i));
    VectorXd guess = VectorXd::Constant(dim, 1.0 / static_cast<double>(dim));
    for (int step = 0; step < 300; ++step) {
        guess += (m * guess) / scale;
        guess /= guess.sum();
    }
    Eigen::Index pin = 0;
    guess.maxCoeff(&pin);

    // Column sums of the generator vanish, so row `pin` of M phi = 0 follows
    // from the other rows; replacing it with phi[pin] = 1 gives a nonsingular
    // system whose solution is the stationary vector up to scale.  The
    // replacement keeps the matrix sparse, and pinning at the mode keeps the
    // solution O(1) componentwise.
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(m.nonZeros()) + 1);
    for (int outer = 0; outer < m.outerSize(); ++outer) {
        for (Eigen::SparseMatrix<double>::InnerIterator it(m, outer); it; ++it) {
            if (it.row() != pin) trips.emplace_back(it.row(), it.col(), it.value());
        }
    }
    trips.emplace_back(pin, pin, 1.0);
    Eigen::SparseMatrix<double> a(dim, dim);
    a.setFromTriplets(trips.begin(), trips.end());
    a.makeCompressed();

    VectorXd rhs = VectorXd::Zero(dim);
    rhs[pin] = 1.0;
    Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>>
        solver;
    solver.preconditioner().setDroptol(1e-3);
    solver.preconditioner().setFillfactor(7);
    solver.setTolerance(1e-13);
    solver.setMaxIterations(20000);
    solver.compute(a);
    if (solver.info() != Eigen::Success) {
        throw numerical_error("preconditioner for the generator failed");
    }
    VectorXd v = solver.solveWithGuess(rhs, VectorXd(guess / guess[pin]));
    if (!v.allFinite() || solver.error() > 1e-11) {
        throw numerical_error("sparse solve for the stationary vector failed");
    }
    return v / v.sum();
}

VectorXd numeric_steady_state_auto(const BoundaryRates& rates) {
    rates.validate();
    if (rates.n_sites <= kDenseLimit) return numeric_steady_state(rates);
    return numeric_steady_state_sparse(rates);
}

DecompositionResult omega_decomposition(const BoundaryRates& rates) {
    rates.validate();
    rates.require_positive();
    const VectorXd phi = numeric_steady_state_auto(rates);
    const int n = rates.n_sites;
    MatrixXd b(rates.dim(), n + 1);
    for (int k = 0; k <= n; ++k) {
        b.col(k) = steady_state_formula(rates, k);
    }
    Eigen::BDCSVD<MatrixXd> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10);
    DecompositionResult out;
    out.rank_deficient = svd.rank() < n + 1;
    out.omega = svd.solve(phi);
    out.residual = (b * out.omega - phi).norm() / phi.norm();
    out.ratios = out.omega / out.omega[n];
    return out;
}

std::vector<CurrentScanRow> scan_current(const BoundaryRates& tpl,
                                         ScanVariable vary,
                                         const std::vector<double>& grid,
                                         Exec ex) {
    tpl.validate();
    // theta and delta scans replace the template delta point by point, so
    // only the three fixed rates must be positive up front; the current sign
    // diagnostic theta(r) then stays well defined at every grid point.
    if (vary == ScanVariable::sites) {
        tpl.require_positive();
    } else if (!(tpl.alpha > 0 && tpl.beta > 0 && tpl.gamma > 0)) {
        throw validation_error("scan needs strictly positive alpha, beta, gamma");
    }
    for (double g : grid) {
        if (!std::isfinite(g)) throw validation_error("scan grid must be finite");
        if (vary == ScanVariable::delta && !(g > 0)) {
            throw validation_error("delta grid values must be positive");
        }
        if (vary == ScanVariable::sites) {
            const long long s = std::llround(g);
            if (s < 2 || s > kSparseLimit) {
                throw validation_error("site grid values must round into [2, 16]");
            }
        }
    }
    std::vector<CurrentScanRow> rows(grid.size());
    parallel_for(ex, static_cast<std::int64_t>(grid.size()), [&](std::int64_t i) {
        const double g = grid[static_cast<std::size_t>(i)];
        BoundaryRates r = tpl;
        switch (vary) {
            case ScanVariable::theta:
                r = tpl.with_delta(tpl.alpha * tpl.beta *
                                   std::pow(tpl.q, tpl.n_sites - 1 - g) /
                                   tpl.gamma);
                break;
            case ScanVariable::delta:
                r = tpl.with_delta(g);
                break;
            case ScanVariable::sites:
                r = tpl.with_sites(static_cast<int>(std::llround(g)));
                break;
        }
        const VectorXd v = numeric_steady_state_auto(r);
        CurrentScanRow& row = rows[static_cast<std::size_t>(i)];
        row.vary_value = g;
        row.theta = (vary == ScanVariable::theta) ? g : theta(r);
        row.current = current(v, r);
    });
    return rows;
}

std::vector<DensityScanRow> scan_density(const BoundaryRates& tpl,
                                         const std::vector<double>& thetas,
                                         Exec ex) {
    tpl.validate();
    // The template delta is replaced by the theta value at every point.
    if (!(tpl.alpha > 0 && tpl.beta > 0 && tpl.gamma > 0)) {
        throw validation_error("scan needs strictly positive alpha, beta, gamma");
    }
    for (double th : thetas) {
        if (!std::isfinite(th)) throw validation_error("scan grid must be finite");
    }
    const int n = tpl.n_sites;
    std::vector<DensityScanRow> rows(thetas.size() * static_cast<std::size_t>(n));
    parallel_for(ex, static_cast<std::int64_t>(thetas.size()), [&](std::int64_t i) {
        const double th = thetas[static_cast<std::size_t>(i)];
        const BoundaryRates r = tpl.with_delta(
            tpl.alpha * tpl.beta * std::pow(tpl.q, tpl.n_sites - 1 - th) /
            tpl.gamma);
        const VectorXd v = numeric_steady_state_auto(r);
        const VectorXd rho = density_profile(v, r);
        for (int site = 1; site <= n; ++site) {
            DensityScanRow& row =
                rows[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                     static_cast<std::size_t>(site - 1)];
            row.theta = th;
            row.site = site;
            row.density = rho[site - 1];
        }
    });
    return rows;
}

double collinearity(const VectorXd& u, const VectorXd& v) {
    if (u.size() != v.size()) {
        throw validation_error("collinearity needs vectors of equal length");
    }
    const double un = u.squaredNorm();
    const double vn = v.norm();
    if (un == 0 || vn == 0) {
        throw validation_error("collinearity of a zero vector is undefined");
    }
    const VectorXd rej = v - (u.dot(v) / un) * u;
    return rej.norm() / vn;
}

}  // namespace asep
