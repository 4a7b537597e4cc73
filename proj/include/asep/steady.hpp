#pragma once

#include <vector>

#include "asep/chiral.hpp"
#include "asep/exec.hpp"
#include "asep/types.hpp"

namespace asep {

// Boundary weight factors of the closed-form steady state.  g(0) = 1;
// g_left uses (alpha, gamma), g_right is the same expression with
// (beta, delta) substituted.
double g_left(int n, const BoundaryRates& rates);
double g_right(int n, const BoundaryRates& rates);

// f(l_1..l_M) = prod_{s=1..M} (gamma q^{-l_s} + alpha q^{-s}) with the kink
// positions sorted ascending (zeros and Ns included).
double kink_coefficient_f(const KinkState& k, const BoundaryRates& rates);

// kappa = prod_{s=1..m_0} g_left(s) * prod_{s=1..m_N} g_right(s); depends on
// the kink state only through the multiplicities at 0 and N.
double kink_coefficient_kappa(const KinkState& k, const BoundaryRates& rates);

enum class Normalization {
    raw,          // coefficients exactly as the closed form produces them
    probability,  // divided by the component sum (requires a uniform sign)
};

// Sum of kappa * f * kink_vector over the full symmetric kink set, evaluated
// verbatim at the given rates with no constraint check.  This is the generic
// entry point used by the omega decomposition; it is a steady state only
// when the constraint class m holds.  Deterministic pairwise summation, so
// serial and parallel runs agree bitwise.
VectorXd steady_state_formula(const BoundaryRates& rates, int m,
                              Exec ex = Exec::parallel);

// Checked steady state: requires strictly positive rates and constraint
// class m (validation_error otherwise, carrying the constraint residual);
// verifies ||M phi|| / ||phi|| <= 1e-10 matrix-free before returning
// (identity_error otherwise).
VectorXd steady_state(const BoundaryRates& rates, int m,
                      Normalization norm = Normalization::raw,
                      Exec ex = Exec::parallel);

// Single-kink expansion coefficients chi_0..chi_N used at constraint class 1:
// chi_n = gamma q^{-n} + alpha/q for 1 <= n <= N-1, chi_0 = g_left(1) f(|0>),
// chi_N = g_right(1) f(|N>).  No constraint precondition, so the recursion
// check below can probe deliberately broken rates.
std::vector<double> m1_coefficients(const BoundaryRates& rates);

struct RecursionReport {
    // Residuals of the five stationarity line groups on chi, each normalized
    // by the largest term in the line:
    //   [0] bulk lines n = 2..N-2
    //   [1] line adjacent to the left boundary
    //   [2] line adjacent to the right boundary (holds only under the
    //       class-1 constraint)
    //   [3] left boundary line
    //   [4] right boundary line
    std::array<double, 5> per_line{};
    double max_residual = 0;
};

// Evaluates the class-1 recursion on m1_coefficients at the given rates
// (n_sites >= 3).
RecursionReport verify_m1_recursion(const BoundaryRates& rates);

}  // namespace asep
