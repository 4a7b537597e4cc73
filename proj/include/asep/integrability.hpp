#pragma once

#include <utility>

#include "asep/exec.hpp"
#include "asep/types.hpp"

namespace asep {

// Trigonometric-free rational R-matrix on C^2 x C^2 at spectral point x:
//   [[q-x, 0,      0,        0],
//    [0,   1-x,    (q-1)x,   0],
//    [0,   q-1,    q(1-x),   0],
//    [0,   0,      0,      q-x]]
// R(1) = (q-1) * SWAP.
Eigen::Matrix4cd r_matrix(complexd x, double q);

// Boundary reflection matrices.  K^- is parameterized by (a,c), K^+ by (b,d)
// and q; both polynomial in x, finite everywhere.
Eigen::Matrix2cd k_minus(complexd x, const ReflectionParams& p);
Eigen::Matrix2cd k_plus(complexd x, double q, const ReflectionParams& p);

// Relative Frobenius residual of
//   R12(x/y) R13(x/z) R23(y/z) = R23(y/z) R13(x/z) R12(x/y)
// on the triple space.
double ybe_residual(complexd x, complexd y, complexd z, double q);

// Relative Frobenius residuals of the boundary reflection identity for K^-
// and of its dual for K^+ (the dual uses Rtilde = ((R^{t1})^{-1})^{t1}).
// Throws numerical_error if the partial transpose is singular at a required
// point.
std::pair<double, double> re_residual(complexd x, complexd y,
                                      const BoundaryRates& rates);

// tau(x) = tr_0{ K^+(x) R_{0,N}..R_{0,1} K^-(x) R_{1,0}..R_{N,0} } acting on
// the 2^N physical space.  Column-by-column sparse application, O(N 4^N)
// total; columns are independent so Exec::parallel gives bit-identical
// results.  Dense sizes only (n_sites <= kDenseLimit).
MatrixXcd transfer_matrix(complexd x, const BoundaryRates& rates,
                          Exec ex = Exec::parallel);

enum class DerivativeRoute { finite_difference, analytic };

// Recovers the Markov generator from the transfer matrix:
//   A = ((1-q)/(2(1+q))) tau'(1) tau(1)^{-1},  result = A - c I
// with c fixed by trace matching against build_markov_generator.
// finite_difference uses a Richardson-extrapolated central difference
// (tolerance 1e-6); analytic propagates a dual number through every factor
// of tau (tolerance 1e-8).  Throws identity_error if the reconstruction
// misses build_markov_generator beyond tolerance, numerical_error if tau(1)
// is singular.
MatrixXd markov_from_transfer(const BoundaryRates& rates,
                              DerivativeRoute route = DerivativeRoute::analytic,
                              Exec ex = Exec::parallel);

}  // namespace asep
