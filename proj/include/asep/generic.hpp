#pragma once

#include <vector>

#include "asep/exec.hpp"
#include "asep/types.hpp"

namespace asep {

// Steady state from dense eigen-decomposition of the generator: eigenvalue
// nearest 0 must satisfy |E| <= 1e-10 and be simple (numerical_error
// otherwise); the vector is sign-fixed positive and normalized to sum 1.
VectorXd numeric_steady_state(const BoundaryRates& rates);

// Replaced-row sparse solve of M phi = 0, sum(phi) = 1, for chains up to
// kSparseLimit sites where the dense eigen route is out of reach.
VectorXd numeric_steady_state_sparse(const BoundaryRates& rates);

// Dispatches on n_sites between the two routes above.
VectorXd numeric_steady_state_auto(const BoundaryRates& rates);

struct DecompositionResult {
    VectorXd omega;        // omega_0..omega_N
    VectorXd ratios;       // omega_k / omega_N
    double residual = 0;   // ||B omega - phi|| / ||phi||
    bool rank_deficient = false;
};

// Least-squares expansion of the numeric steady state over the closed-form
// family phi_k = steady_state_formula(rates, k), k = 0..N, evaluated at the
// given (generally unconstrained) rates.
DecompositionResult omega_decomposition(const BoundaryRates& rates);

enum class ScanVariable { theta, delta, sites };

struct CurrentScanRow {
    double vary_value;
    double theta;
    double current;
};

// Steady-state current along a parameter grid.  theta varies delta as
// delta = alpha beta q^{N-1-theta} / gamma; sites varies the chain length
// (values rounded to int).  Rows keep grid order; rows are independent, so
// Exec::parallel is exact.
std::vector<CurrentScanRow> scan_current(const BoundaryRates& tpl,
                                         ScanVariable vary,
                                         const std::vector<double>& grid,
                                         Exec ex = Exec::parallel);

struct DensityScanRow {
    double theta;
    int site;
    double density;
};

// Density profiles at a list of theta values (delta solved per row).
std::vector<DensityScanRow> scan_density(const BoundaryRates& tpl,
                                         const std::vector<double>& thetas,
                                         Exec ex = Exec::parallel);

// sin of the angle between u and v: ||v - proj_u v|| / ||v||.  Stable down
// to angles far below what acos of a normalized dot product resolves.
double collinearity(const VectorXd& u, const VectorXd& v);

}  // namespace asep
