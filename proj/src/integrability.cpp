#include "asep/integrability.hpp"

#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/LU>

#include "asep/dual.hpp"
#include "asep/model.hpp"

namespace asep {

namespace {

using Matrix8cd = Eigen::Matrix<complexd, 8, 8>;

std::string point_string(complexd z) {
    std::ostringstream os;
    os << z.real() << (z.imag() < 0 ? "" : "+") << z.imag() << "i";
    return os.str();
}

// The six nonzero R-matrix entries at spectral point x, in scalar type S so
// the same kernel serves plain evaluation and dual-number differentiation.
template <class S>
struct RFactors {
    S r00, r11, r12, r21, r22, r33;
};

template <class S>
RFactors<S> r_factors(const S& x, double q) {
    RFactors<S> f;
    f.r00 = S(q) - x;
    f.r11 = S(1.0) - x;
    f.r12 = S(q - 1.0) * x;
    f.r21 = S(q - 1.0);
    f.r22 = S(q) * (S(1.0) - x);
    f.r33 = f.r00;
    return f;
}

template <class S>
std::array<S, 4> k_minus_entries(const S& x, const ReflectionParams& p) {
    const complexd ac = p.a * p.c;
    const complexd apc = p.a + p.c;
    const S x2 = x * x;
    return {S(ac + 1.0) * x2 + S(apc) * x, x2 - S(1.0), S(ac) * (S(1.0) - x2),
            S(ac + 1.0) + S(apc) * x};
}

template <class S>
std::array<S, 4> k_plus_entries(const S& x, double q, const ReflectionParams& p) {
    const complexd bd = p.b * p.d;
    const complexd bpd = p.b + p.d;
    const S x2 = x * x;
    return {S((bd + 1.0) * q * q) + S(bpd * q) * x, S(bd * q * q) - S(bd) * x2,
            S(q) * x2 - S(q * q * q), S(bd + 1.0) * x2 * S(q) + S(bpd * q * q) * x};
}

// One column of tau(x) = tr_0{K+ R_{0,N}..R_{0,1} K- R_{1,0}..R_{N,0}}.
// The joint (aux x physical) state is held as two physical vectors (w0, w1)
// indexed by the auxiliary bit; each R factor mixes one physical site with
// the auxiliary space through the six sparse entries.
template <class S>
void tau_column(const S& x, double q, const ReflectionParams& p, int n, int c,
                std::vector<S>& out) {
    const int dim = 1 << n;
    const RFactors<S> r = r_factors(x, q);
    const std::array<S, 4> km = k_minus_entries(x, p);
    const std::array<S, 4> kp = k_plus_entries(x, q, p);
    std::vector<S> w0(dim), w1(dim);
    for (int j = 0; j < dim; ++j) out[j] = S(0.0);

    for (int aux_in = 0; aux_in < 2; ++aux_in) {
        for (int j = 0; j < dim; ++j) {
            w0[j] = S(0.0);
            w1[j] = S(0.0);
        }
        (aux_in == 0 ? w0 : w1)[c] = S(1.0);

        // R_{k,0} factors, site-major local index (s, a), applied k = N..1.
        for (int k = n; k >= 1; --k) {
            const int mask = 1 << (n - k);
            for (int p0 = 0; p0 < dim; ++p0) {
                if (p0 & mask) continue;
                const int p1 = p0 | mask;
                const S in1 = w1[p0];
                const S in2 = w0[p1];
                w0[p0] = r.r00 * w0[p0];
                w1[p0] = r.r11 * in1 + r.r12 * in2;
                w0[p1] = r.r21 * in1 + r.r22 * in2;
                w1[p1] = r.r33 * w1[p1];
            }
        }
        // K^- on the auxiliary space.
        for (int j = 0; j < dim; ++j) {
            const S a0 = w0[j];
            const S a1 = w1[j];
            w0[j] = km[0] * a0 + km[1] * a1;
            w1[j] = km[2] * a0 + km[3] * a1;
        }
        // R_{0,k} factors, aux-major local index (a, s), applied k = 1..N.
        for (int k = 1; k <= n; ++k) {
            const int mask = 1 << (n - k);
            for (int p0 = 0; p0 < dim; ++p0) {
                if (p0 & mask) continue;
                const int p1 = p0 | mask;
                const S in1 = w0[p1];
                const S in2 = w1[p0];
                w0[p0] = r.r00 * w0[p0];
                w0[p1] = r.r11 * in1 + r.r12 * in2;
                w1[p0] = r.r21 * in1 + r.r22 * in2;
                w1[p1] = r.r33 * w1[p1];
            }
        }
        // Trace over aux with the K^+ weights: kp is row-major 2x2.
        const S c0 = (aux_in == 0) ? kp[0] : kp[2];
        const S c1 = (aux_in == 0) ? kp[1] : kp[3];
        for (int j = 0; j < dim; ++j) out[j] += c0 * w0[j] + c1 * w1[j];
    }
}

MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
    MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix8cd op12(const Eigen::Matrix4cd& r) {
    return kron(r, MatrixXcd::Identity(2, 2));
}
Matrix8cd op23(const Eigen::Matrix4cd& r) {
    return kron(MatrixXcd::Identity(2, 2), r);
}
Matrix8cd op13(const Eigen::Matrix4cd& r) {
    Matrix8cd m = Matrix8cd::Zero();
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i3 = 0; i3 < 2; ++i3)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int j3 = 0; j3 < 2; ++j3)
                    for (int k = 0; k < 2; ++k)
                        m((i1 * 2 + k) * 2 + i3, (j1 * 2 + k) * 2 + j3) =
                            r(i1 * 2 + i3, j1 * 2 + j3);
    return m;
}

Eigen::Matrix4cd swap_matrix() {
    Eigen::Matrix4cd s = Eigen::Matrix4cd::Zero();
    s(0, 0) = s(1, 2) = s(2, 1) = s(3, 3) = 1.0;
    return s;
}

Eigen::Matrix4cd partial_transpose_1(const Eigen::Matrix4cd& m) {
    Eigen::Matrix4cd out;
    for (int i1 = 0; i1 < 2; ++i1)
        for (int i2 = 0; i2 < 2; ++i2)
            for (int j1 = 0; j1 < 2; ++j1)
                for (int j2 = 0; j2 < 2; ++j2)
                    out(j1 * 2 + i2, i1 * 2 + j2) = m(i1 * 2 + i2, j1 * 2 + j2);
    return out;
}

// Rtilde(x) = ((R(x)^{t1})^{-1})^{t1}; singular partial transposes are a
// genuine feature of the dual reflection identity, reported with the point.
Eigen::Matrix4cd r_tilde(const Eigen::Matrix4cd& r, complexd at) {
    const Eigen::Matrix4cd rt = partial_transpose_1(r);
    Eigen::FullPivLU<Eigen::Matrix4cd> lu(rt);
    if (!lu.isInvertible()) {
        throw numerical_error("partial transpose of R singular at x = " +
                              point_string(at));
    }
    return partial_transpose_1(lu.inverse());
}

Eigen::Matrix4cd op1(const Eigen::Matrix2cd& k) {
    return kron(k, MatrixXcd::Identity(2, 2));
}
Eigen::Matrix4cd op2(const Eigen::Matrix2cd& k) {
    return kron(MatrixXcd::Identity(2, 2), k);
}

}  // namespace

Eigen::Matrix4cd r_matrix(complexd x, double q) {
    Eigen::Matrix4cd r = Eigen::Matrix4cd::Zero();
    const RFactors<complexd> f = r_factors(x, q);
    r(0, 0) = f.r00;
    r(1, 1) = f.r11;
    r(1, 2) = f.r12;
    r(2, 1) = f.r21;
    r(2, 2) = f.r22;
    r(3, 3) = f.r33;
    return r;
}

Eigen::Matrix2cd k_minus(complexd x, const ReflectionParams& p) {
    const std::array<complexd, 4> e = k_minus_entries(x, p);
    Eigen::Matrix2cd k;
    k << e[0], e[1], e[2], e[3];
    return k;
}

Eigen::Matrix2cd k_plus(complexd x, double q, const ReflectionParams& p) {
    const std::array<complexd, 4> e = k_plus_entries(x, q, p);
    Eigen::Matrix2cd k;
    k << e[0], e[1], e[2], e[3];
    return k;
}

double ybe_residual(complexd x, complexd y, complexd z, double q) {
    const Matrix8cd lhs = op12(r_matrix(x / y, q)) * op13(r_matrix(x / z, q)) *
                          op23(r_matrix(y / z, q));
    const Matrix8cd rhs = op23(r_matrix(y / z, q)) * op13(r_matrix(x / z, q)) *
                          op12(r_matrix(x / y, q));
    const double scale = lhs.norm();
    return (lhs - rhs).norm() / (scale > 0 ? scale : 1.0);
}

std::pair<double, double> re_residual(complexd x, complexd y,
                                      const BoundaryRates& rates) {
    const ReflectionParams p = rates_to_reflection_params(rates);
    const double q = rates.q;
    const Eigen::Matrix4cd swap = swap_matrix();
    auto r12 = [&](complexd u) { return r_matrix(u, q); };
    auto r21 = [&](complexd u) {
        return (swap * r_matrix(u, q) * swap).eval();
    };

    const Eigen::Matrix4cd re_lhs = r12(x / y) * op1(k_minus(x, p)) * r21(y * x) *
                                    op2(k_minus(y, p));
    const Eigen::Matrix4cd re_rhs = op2(k_minus(y, p)) * r12(x * y) *
                                    op1(k_minus(x, p)) * r21(x / y);
    const double re_scale = re_lhs.norm();
    const double re = (re_lhs - re_rhs).norm() / (re_scale > 0 ? re_scale : 1.0);

    const Eigen::Matrix4cd rt12 = r_tilde(r12(y * x), y * x);
    const Eigen::Matrix4cd rt21 = r_tilde(r21(y * x), y * x);
    const Eigen::Matrix4cd dre_lhs = r12(x / y) * op1(k_plus(y, q, p)) * rt12 *
                                     op2(k_plus(x, q, p));
    const Eigen::Matrix4cd dre_rhs = op2(k_plus(x, q, p)) * rt21 *
                                     op1(k_plus(y, q, p)) * r21(x / y);
    const double dre_scale = dre_lhs.norm();
    const double dre = (dre_lhs - dre_rhs).norm() / (dre_scale > 0 ? dre_scale : 1.0);
    return {re, dre};
}

MatrixXcd transfer_matrix(complexd x, const BoundaryRates& rates, Exec ex) {
    rates.validate();
    if (rates.n_sites > kDenseLimit) {
        throw validation_error("transfer matrix limited to dense sizes");
    }
    const ReflectionParams p = rates_to_reflection_params(rates);
    const int dim = rates.dim();
    MatrixXcd tau(dim, dim);
    parallel_for(ex, dim, [&](std::int64_t c) {
        std::vector<complexd> col(dim);
        tau_column(x, rates.q, p, rates.n_sites, static_cast<int>(c), col);
        for (int j = 0; j < dim; ++j) tau(j, static_cast<int>(c)) = col[j];
    });
    return tau;
}

MatrixXd markov_from_transfer(const BoundaryRates& rates, DerivativeRoute route,
                              Exec ex) {
    rates.validate();
    if (rates.n_sites > kDenseLimit) {
        throw validation_error("transfer matrix limited to dense sizes");
    }
    const ReflectionParams p = rates_to_reflection_params(rates);
    const int dim = rates.dim();
    MatrixXcd tau0(dim, dim);
    MatrixXcd tau_prime(dim, dim);

    if (route == DerivativeRoute::analytic) {
        // Dual pass at x = 1 with unit seed: value and derivative in one sweep.
        parallel_for(ex, dim, [&](std::int64_t c) {
            std::vector<Dual> col(dim);
            tau_column(Dual(complexd(1.0), complexd(1.0)), rates.q, p,
                       rates.n_sites, static_cast<int>(c), col);
            for (int j = 0; j < dim; ++j) {
                tau0(j, static_cast<int>(c)) = col[j].v;
                tau_prime(j, static_cast<int>(c)) = col[j].d;
            }
        });
    } else {
        const double h = 1e-6;
        tau0 = transfer_matrix(complexd(1.0), rates, ex);
        const MatrixXcd d_h = (transfer_matrix(complexd(1.0 + h), rates, ex) -
                               transfer_matrix(complexd(1.0 - h), rates, ex)) /
                              (2.0 * h);
        const MatrixXcd d_h2 = (transfer_matrix(complexd(1.0 + h / 2), rates, ex) -
                                transfer_matrix(complexd(1.0 - h / 2), rates, ex)) /
                               h;
        tau_prime = (4.0 * d_h2 - d_h) / 3.0;  // one Richardson level
    }

    Eigen::FullPivLU<MatrixXcd> lu(tau0);
    if (!lu.isInvertible()) {
        throw numerical_error("transfer matrix singular at x = 1");
    }
    const double coef = (1.0 - rates.q) / (2.0 * (1.0 + rates.q));
    const MatrixXcd a = coef * tau_prime * lu.inverse();

    const MatrixXd exact = build_markov_generator(rates);
    const complexd shift = (a.trace() - complexd(exact.trace())) / double(dim);
    const MatrixXcd recon = a - shift.real() * MatrixXcd::Identity(dim, dim);

    const double err = (recon - exact.cast<complexd>()).cwiseAbs().maxCoeff();
    const double scale = exact.cwiseAbs().maxCoeff();
    const double tol = (route == DerivativeRoute::analytic ? 1e-8 : 1e-6) * scale;
    if (!(err <= tol)) {
        throw identity_error("transfer-matrix reconstruction off by " +
                             std::to_string(err / scale) + " relative");
    }
    return recon.real();
}

}  // namespace asep
