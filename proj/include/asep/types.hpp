#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace asep {

using complexd = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

// Error taxonomy, aligned with the CLI exit codes:
//   validation_error -> 1 (bad parameters or inputs)
//   identity_error   -> 2 (an exact identity violated beyond tolerance)
//   numerical_error  -> 3 (solver breakdown, singular matrix, no convergence)
struct validation_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct identity_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct numerical_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// |q-1| below this is rejected everywhere: the gauge transformation, the T-Q
// machinery and the steady-state coefficients all divide by q-1, and values
// this close to 1 are numerically useless in double precision anyway.
inline constexpr double kQOneGuard = 1e-5;

// Largest chain length for which dense 2^N x 2^N operators are built.
inline constexpr int kDenseLimit = 10;

// Largest chain length for the sparse replaced-row steady-state solve used by
// system-size scans.
inline constexpr int kSparseLimit = 16;

struct BoundaryRates {
    double alpha = 0;  // left injection
    double beta = 0;   // right extraction
    double gamma = 0;  // left extraction
    double delta = 0;  // right injection
    double q = 0;      // hopping asymmetry: right hop q/(q+1), left hop 1/(q+1)
    int n_sites = 0;

    // Throws validation_error on non-finite or negative rates, q <= 0,
    // |q-1| <= kQOneGuard, or n_sites < 2.
    void validate() const;

    // Additional preconditions demanded by specific operations.
    void require_positive() const;  // all four boundary rates strictly > 0
    void require_chiral() const;    // alpha > 0 and gamma > 0

    int dim() const { return 1 << n_sites; }
    double total() const { return alpha + beta + gamma + delta; }

    BoundaryRates with_delta(double d) const {
        BoundaryRates r = *this;
        r.delta = d;
        return r;
    }
    BoundaryRates with_beta(double b) const {
        BoundaryRates r = *this;
        r.beta = b;
        return r;
    }
    BoundaryRates with_sites(int n) const {
        BoundaryRates r = *this;
        r.n_sites = n;
        return r;
    }
};

// Boundary parameters of the integrable structure.  (a,c) encode the left
// boundary (alpha, gamma), (b,d) the right one (beta, delta); canonical branch
// Re(a) >= Re(c) with tie-break Im(a) >= Im(c), same for (b,d).
struct ReflectionParams {
    complexd a, b, c, d;
};

// Nearest integer class of the constraint alpha*beta*q^{N-1-m} = gamma*delta,
// with residual = |alpha*beta*q^{N-1-m} - gamma*delta|.
struct ConstraintClass {
    int m = 0;
    double residual = 0;
};

// StateIndex convention shared by every module: site 1 is the most
// significant bit of the flat index, bit value 1 = occupied.
inline int bit_at(int index, int site, int n_sites) {
    return (index >> (n_sites - site)) & 1;
}
inline int flip_bit(int index, int site, int n_sites) {
    return index ^ (1 << (n_sites - site));
}
std::string bitstring(int index, int n_sites);
int index_of_bitstring(const std::string& bits);

}  // namespace asep
