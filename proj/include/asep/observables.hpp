#pragma once

#include "asep/types.hpp"

namespace asep {

// All observables are ratios against the all-ones left row vector, so they
// are insensitive to the normalization (and overall sign) of the state.

// Left-boundary particle current alpha P(site 1 empty) - gamma P(occupied).
double current(const VectorXd& state, const BoundaryRates& rates);

// beta P(site N occupied) - delta P(site N empty).
double right_boundary_current(const VectorXd& state, const BoundaryRates& rates);

// Net flow across bond k -> k+1: (q P(10) - P(01)) / (q+1), k in [1, N-1].
double bond_current(const VectorXd& state, const BoundaryRates& rates, int bond);

// Site occupation probabilities <n_k>, k = 1..N.
VectorXd density_profile(const VectorXd& state, const BoundaryRates& rates);

// Printed closed forms, valid at the matching constraint class.
double closed_form_current_m1(const BoundaryRates& rates);
double closed_form_current_m2(const BoundaryRates& rates);
double closed_form_density_m0(const BoundaryRates& rates, int site);
double closed_form_density_m1(const BoundaryRates& rates, int site);

// Leading large-N behavior of the class-M current (M in {1,2}), branch
// selected by q: for q > 1 the current decays like q^{1-N} (q^{N-2-(M-1)}
// for q < 1, with a leading minus sign).  n_sites is passed explicitly so
// the asymptote can be tabulated without rebuilding rates.
double large_n_current_asymptote(const BoundaryRates& rates, int m, int n_sites);

}  // namespace asep
