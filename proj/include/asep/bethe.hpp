#pragma once

#include <cstdint>
#include <vector>

#include "asep/exec.hpp"
#include "asep/types.hpp"

namespace asep {

// The four T-Q parameterizations of the transfer-matrix eigenvalues.
//   I   : N-1 roots, functions (a1,d1), valid for generic rates
//   II  : no roots, Lambda = a2 + d2, the trivial (steady-state) eigenvalue
//   III : Mt = N-1-M roots, functions (a1,d1), needs constraint class M
//   IV  : M roots, functions (a2,d2), needs constraint class M
enum class TQKind { I, II, III, IV };

struct BetheRootSet {
    TQKind kind = TQKind::I;
    std::vector<complexd> roots;
    // The all-roots-at-infinity solution of kind IV is kept symbolic so its
    // eigenvalue is exactly 0; string_size is the nominal root count M.
    bool is_infinite_string = false;
    int string_size = 0;
};

struct QuasiMomentum {
    complexd p;    // e^{ip} = (nu - q) / (sqrt(q)(nu - 1))
    complexd eps;  // deviation e^{ip} - 1/sqrt(q)
};

struct MatchPair {
    int level;       // index into the exact-eigenvalue list
    int set;         // index into the root-set list
    double abs_err;  // |E_set - E_level|
};

struct MatchReport {
    std::vector<MatchPair> matched;
    std::vector<int> unmatched_levels;
    std::vector<int> unmatched_sets;
    double max_abs_err = 0;
};

// Symbolic infinite-string solution (kind IV) with M nominal roots.
BetheRootSet infinite_string(int m);

// Number of roots the given kind carries: N-1, 0, N-1-M, M.  Kinds III/IV
// require the constraint class to hold; M = N makes kind III inapplicable.
int root_count(TQKind kind, const BoundaryRates& rates);

// Evaluates Lambda_kind(x).  Throws validation_error at poles of the
// prefactors (x^2 = q) or zeros of the Q-polynomial.
complexd tq_lambda(const BetheRootSet& s, complexd x, const BoundaryRates& rates);

// Per-root residual of the pole-cleared Bethe equations
//   atil(l_j) prod_k (l_k - q l_j)(l_k l_j - 1)
//     + dtil(l_j) prod_k (l_k - l_j/q)(l_k l_j - q^2) = 0,
// each normalized by the larger term magnitude.  The q^{+-weight} factors of
// the T-Q relations cancel against the Q-shift prefactors for every kind, so
// one form serves all four.
VectorXd bae_residual(const BetheRootSet& s, const BoundaryRates& rates);

// Canonical form: roots moved to modulus >= sqrt(q) under lambda -> q/lambda
// (upper-half representative on the |lambda| = sqrt(q) circle itself), then
// sorted by (Re, Im).  Idempotent; leaves residual and eigenvalue invariant.
BetheRootSet canonicalize(const BetheRootSet& s, double q);

// Newton polish of a single root set in log coordinates (analytic Jacobian
// via dual numbers, row-scaled).  Throws numerical_error on non-convergence.
BetheRootSet polish(const BetheRootSet& s, const BoundaryRates& rates,
                    double tol = 1e-12, int max_iter = 200);

// Multi-start Newton solver.  Starts are independent (log-uniform moduli in
// [1e-2, 1e2], uniform phases, per-start seed substreams); converged sets are
// canonicalized, filtered (no roots within 1e-8 of {1, q}, no repeated
// roots), deduplicated in start order, and sorted by eigenvalue.
std::vector<BetheRootSet> solve_baes(TQKind kind, const BoundaryRates& rates,
                                     int n_starts = 2000, std::uint64_t seed = 1,
                                     Exec ex = Exec::parallel);

// E from the root sum: kinds I and III subtract alpha+beta+gamma+delta, kind
// IV does not, kind II and the infinite string are exactly 0.  Throws
// validation_error if a root sits within 1e-8 of {1, q}.
complexd eigenvalue_from_roots(const BetheRootSet& s, const BoundaryRates& rates);

// Greedy bipartite match of root-set eigenvalues against an exact spectrum,
// pairs accepted while |dE| <= tol, smallest errors first.
MatchReport match_spectrum(const std::vector<BetheRootSet>& sets,
                           const std::vector<complexd>& exact_levels,
                           const BoundaryRates& rates, double tol);

// Quasi-momenta of a kind-IV root set; the infinite string yields
// string_size copies of the limit value with eps = 0.
std::vector<QuasiMomentum> quasi_momentum(const BetheRootSet& s, double q);

}  // namespace asep
