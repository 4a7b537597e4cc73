#include "asep/steady.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "asep/model.hpp"

namespace asep {

namespace {

template <class T>
T g_factor(int n, T in_rate, T out_rate, T q) {
    if (n < 0) throw validation_error("boundary weight order must be >= 0");
    if (n == 0) return T(1);
    const T qn = std::pow(q, T(n));
    const T denom = (qn - T(1)) * (out_rate + in_rate / qn);
    return (q - T(1)) / ((q + T(1)) * denom) -
           (std::pow(q, T(n - 1)) - T(1)) *
               (out_rate + in_rate * std::pow(q, T(1 - n))) / denom;
}

// The kink-set sum cancels badly for high classes (condition number ~1e7 at
// M = N = 8), which a double pipeline turns into a ~1e-9 nullity residual.
// Weights and accumulation therefore run in long double; the public
// double-precision helpers below keep their exact historical values.
template <class T>
T kink_f(const KinkState& k, const BoundaryRates& rates) {
    std::vector<int> sorted = k.kinks;
    std::sort(sorted.begin(), sorted.end());
    const T q(rates.q), a(rates.alpha), g(rates.gamma);
    T f(1);
    for (std::size_t s = 0; s < sorted.size(); ++s) {
        f *= g * std::pow(q, T(-sorted[s])) +
             a * std::pow(q, -T(static_cast<double>(s + 1)));
    }
    return f;
}

template <class T>
T kink_kappa(const KinkState& k, const BoundaryRates& rates) {
    int m0 = 0;
    int mn = 0;
    for (int pos : k.kinks) {
        if (pos == 0) ++m0;
        if (pos == rates.n_sites) ++mn;
    }
    T kappa(1);
    for (int s = 1; s <= m0; ++s) {
        kappa *= g_factor<T>(s, T(rates.alpha), T(rates.gamma), T(rates.q));
    }
    for (int s = 1; s <= mn; ++s) {
        kappa *= g_factor<T>(s, T(rates.beta), T(rates.delta), T(rates.q));
    }
    return kappa;
}

}  // namespace

double g_left(int n, const BoundaryRates& rates) {
    rates.validate();
    return g_factor<double>(n, rates.alpha, rates.gamma, rates.q);
}

double g_right(int n, const BoundaryRates& rates) {
    rates.validate();
    return g_factor<double>(n, rates.beta, rates.delta, rates.q);
}

double kink_coefficient_f(const KinkState& k, const BoundaryRates& rates) {
    rates.validate();
    return kink_f<double>(k, rates);
}

double kink_coefficient_kappa(const KinkState& k, const BoundaryRates& rates) {
    rates.validate();
    return kink_kappa<double>(k, rates);
}

VectorXd steady_state_formula(const BoundaryRates& rates, int m, Exec ex) {
    rates.validate();
    const std::vector<BasisElement> basis = enumerate_basis(m, rates.n_sites);
    using VecLD = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    const VecLD zero = VecLD::Zero(rates.dim());
    const VecLD sum = pairwise_sum(
        ex, static_cast<std::int64_t>(basis.size()), zero,
        [&](std::int64_t i) -> VecLD {
            const KinkState& k = basis[static_cast<std::size_t>(i)].state;
            const long double w = kink_kappa<long double>(k, rates) *
                                  kink_f<long double>(k, rates);
            return (w * kink_vector(k, rates).cast<long double>()).eval();
        });
    return sum.cast<double>();
}

VectorXd steady_state(const BoundaryRates& rates, int m, Normalization norm,
                      Exec ex) {
    rates.validate();
    rates.require_positive();
    if (m < 0 || m > rates.n_sites) {
        throw validation_error("constraint class must lie in [0, N]");
    }
    const auto cls = constraint_class(rates);
    if (!cls || cls->m != m) {
        std::ostringstream msg;
        msg << "rates do not satisfy constraint class " << m;
        if (cls) {
            msg << " (best class " << cls->m << ", residual " << cls->residual
                << ")";
        } else {
            const double probe =
                std::abs(rates.alpha * rates.beta *
                             std::pow(rates.q, rates.n_sites - 1 - m) -
                         rates.gamma * rates.delta);
            msg << " (residual " << probe << ")";
        }
        throw validation_error(msg.str());
    }

    VectorXd v = steady_state_formula(rates, m, ex);
    const double vnorm = v.norm();
    if (!(vnorm > 0)) throw numerical_error("steady state vanished");
    const VectorXd mv = apply_markov(rates, v);
    const double nullity = mv.norm() / vnorm;
    if (nullity > 1e-10) {
        std::ostringstream msg;
        msg << "closed form is not annihilated by the generator: residual "
            << nullity;
        throw identity_error(msg.str());
    }
    if (norm == Normalization::probability) {
        const double mx = v.maxCoeff();
        const double mn = v.minCoeff();
        if (mn < 0 && mx > 0 && std::min(-mn, mx) > 1e-12 * std::max(-mn, mx)) {
            throw numerical_error("mixed-sign components cannot be normalized");
        }
        const double total = v.sum();
        if (total == 0) throw numerical_error("zero component sum");
        v /= total;
    }
    return v;
}

std::vector<double> m1_coefficients(const BoundaryRates& rates) {
    rates.validate();
    const int n = rates.n_sites;
    std::vector<double> chi(static_cast<std::size_t>(n + 1));
    KinkState left{{0}};
    KinkState right{{n}};
    chi[0] = g_left(1, rates) * kink_coefficient_f(left, rates);
    for (int k = 1; k <= n - 1; ++k) {
        chi[static_cast<std::size_t>(k)] =
            rates.gamma * std::pow(rates.q, -k) + rates.alpha / rates.q;
    }
    chi[static_cast<std::size_t>(n)] =
        g_right(1, rates) * kink_coefficient_f(right, rates);
    return chi;
}

RecursionReport verify_m1_recursion(const BoundaryRates& rates) {
    rates.validate();
    const int n = rates.n_sites;
    if (n < 3) throw validation_error("recursion check needs at least 3 sites");
    const std::vector<double> chi = m1_coefficients(rates);
    const double q = rates.q;

    auto line = [](std::initializer_list<double> terms) {
        double sum = 0;
        double scale = 1e-300;
        for (double t : terms) {
            sum += t;
            scale = std::max(scale, std::abs(t));
        }
        return std::abs(sum) / scale;
    };

    RecursionReport report;
    for (int k = 2; k <= n - 2; ++k) {
        const double r = line({chi[static_cast<std::size_t>(k)],
                               -q / (q + 1.0) * chi[static_cast<std::size_t>(k + 1)],
                               -1.0 / (q + 1.0) * chi[static_cast<std::size_t>(k - 1)]});
        report.per_line[0] = std::max(report.per_line[0], r);
    }
    report.per_line[1] =
        line({chi[1], -q / (q + 1.0) * chi[2],
              -(rates.alpha + q * rates.gamma) / q * chi[0]});
    report.per_line[2] =
        line({chi[static_cast<std::size_t>(n - 1)],
              -(rates.beta + q * rates.delta) * chi[static_cast<std::size_t>(n)],
              -1.0 / (q + 1.0) * chi[static_cast<std::size_t>(n - 2)]});
    report.per_line[3] =
        line({(rates.alpha + rates.gamma) * chi[0], -q / (q + 1.0) * chi[1]});
    report.per_line[4] =
        line({(rates.beta + rates.delta) * chi[static_cast<std::size_t>(n)],
              -1.0 / (q + 1.0) * chi[static_cast<std::size_t>(n - 1)]});
    report.max_residual =
        *std::max_element(report.per_line.begin(), report.per_line.end());
    return report;
}

}  // namespace asep
