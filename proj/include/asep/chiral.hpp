#pragma once

#include <array>
#include <string>
#include <vector>

#include "asep/exec.hpp"
#include "asep/types.hpp"

namespace asep {

// A kink configuration: multiset n_1 <= ... <= n_M with n_i in [0, N].
// Repetitions are only meaningful at 0 and N (m_0 and m_N copies); interior
// positions are strictly increasing.
struct KinkState {
    std::vector<int> kinks;
};

// Site phases z_1..z_N of the factorized vector: z_r = (r-1) - #{i: n_i < r}.
// Equivalently z_1 = -m_0 and z increments by 1 across every site except
// where a kink sits.
std::vector<int> phase_path(const KinkState& k, int n_sites);

// Tensor product of local vectors (gamma, alpha q^{z_r}): the component at a
// bit configuration is prod_r (occupied ? alpha q^{z_r} : gamma).
VectorXd kink_vector(const KinkState& k, const BoundaryRates& rates);

// Variant with the occupied entry alpha q^{x0+z_r} where q^{x0} = -gamma/alpha,
// i.e. (gamma, -gamma q^{z_r}).  Every such vector has zero component sum and
// the family spans the zero-sum hyperplane for any rates.
VectorXd kink_vector_tilde(const KinkState& k, const BoundaryRates& rates);

struct BasisElement {
    KinkState state;
    bool independent;  // member of the linearly independent subset (m_N <= 1)
};

// Full symmetric kink set for M kinks on N sites: m_0 zeros, a strictly
// increasing interior subset of [1, N-1], m_N copies of N.  Count
// sum_{m_0+k+m_N=M} C(N-1, k); the independent subset has
// sum_{n<=M} C(N, n) elements.
std::vector<BasisElement> enumerate_basis(int m, int n_sites);

// Columns = kink vectors of the full set, in enumerate_basis order.
MatrixXd kink_family(int m, const BoundaryRates& rates, Exec ex = Exec::parallel);
MatrixXd tilde_family(int m, const BoundaryRates& rates, Exec ex = Exec::parallel);

struct LocalRelationReport {
    // Max relative residual per identity, over all sampled phases:
    //   [0] sigma^z recursion on the local vector
    //   [1] bond annihilation of phi(x) (x) phi(x+1)
    //   [2] bond action on phi(x) (x) phi(x) as a sigma^z commutator
    //   [3] left-boundary action as (phi, sigma^z phi) combination
    //   [4] right-boundary action as (phi, sigma^z phi) combination
    std::array<double, 5> per_relation{};
    double max_residual = 0;
};

// Evaluates the five 2- and 4-dimensional local identities behind the kink
// construction at each sampled complex phase x.
LocalRelationReport verify_local_relations(const BoundaryRates& rates,
                                           const std::vector<complexd>& sample_phases);

// Rank of the column family by singular values above 1e-10 * sigma_max.
// Columns are unit-normalized first: raw kink vectors span q^{O(N^2)} in
// scale, which a relative cutoff on the stacked family cannot survive.
int family_rank(const MatrixXd& vectors);

// Invariance residual max_j ||(I - P_V) op v_j|| / ||op v_j|| over the
// unit-normalized family members v_j, with P_V the orthogonal projector onto
// the column span of V (SVD with relative cutoff 1e-10).  The per-member
// ratio is scale-invariant and keeps a leak confined to a few members from
// being diluted by the rest of the family; members annihilated by op count
// as invariant.
double check_invariant_subspace(const MatrixXd& vectors, const MatrixXd& op);

}  // namespace asep
