#pragma once

#include <optional>

#include <Eigen/SparseCore>

#include "asep/types.hpp"

namespace asep {

// Continuous-time generator of the open asymmetric exclusion chain in the
// shared StateIndex convention.  Columns are assembled move-by-move in target
// order and the diagonal is set to minus that ordered sum, so every column
// sums to 0.0 exactly in floating point (not just approximately).
MatrixXd build_markov_generator(const BoundaryRates& rates);

// Same generator as a compressed sparse matrix (for replaced-row linear
// solves at sizes where the dense build is wasteful).
Eigen::SparseMatrix<double> build_markov_sparse(const BoundaryRates& rates);

// Matrix-free y = M v, assembled from the same per-column move list as
// build_markov_generator.  O(N 2^N), no matrix storage.
VectorXd apply_markov(const BoundaryRates& rates, const VectorXd& v);

// Spin-chain form of the generator: M = (sqrt(q)/(2(1+q))) G^{-1} H G with
// the diagonal gauge G below.  rho is the free gauge parameter; any nonzero
// value satisfies the similarity identity, rho = sqrt(gamma/alpha) makes H
// Hermitian when alpha*beta*q^{N-1} = gamma*delta.
MatrixXcd build_xxz_hamiltonian(const BoundaryRates& rates, complexd rho);

// Diagonal of G: product over occupied sites n of rho * q^{(1-n)/2}.
VectorXcd gauge_diagonal(const BoundaryRates& rates, complexd rho);

// (a,c) are the roots of t^2 - s t + p with p = -alpha/gamma and
// s = (1-q)/(gamma(q+1)) - 1 - p; (b,d) likewise from (beta, delta).
// Canonical branch: Re(a) >= Re(c), ties broken by Im(a) >= Im(c).
ReflectionParams rates_to_reflection_params(const BoundaryRates& rates);

// Inverse of the map above (rational in a..d); the q and n_sites fields of
// the result are taken from the arguments.
BoundaryRates reflection_params_to_rates(const ReflectionParams& p, double q,
                                         int n_sites);

// theta = log(alpha*beta*q^{N-1}/(gamma*delta)) / log(q).  Integer values
// select the invariant-subspace classes.
double theta(const BoundaryRates& rates);

// The integer m in [0, N] minimizing |alpha*beta*q^{N-1-m} - gamma*delta|,
// if that residual is within tol_rel * gamma*delta; empty otherwise.
std::optional<ConstraintClass> constraint_class(const BoundaryRates& rates,
                                                double tol_rel = 1e-10);

// Adjust one boundary rate so that alpha*beta*q^{N-1-m} = gamma*delta holds
// exactly (up to roundoff) for the requested class m.
double solve_delta_for_class(const BoundaryRates& rates, int m);
double solve_beta_for_class(const BoundaryRates& rates, int m);

}  // namespace asep
