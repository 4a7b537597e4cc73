#include "asep/observables.hpp"

#include <cmath>

#include "asep/model.hpp"

namespace asep {

namespace {

void check_state(const VectorXd& state, const BoundaryRates& rates) {
    rates.validate();
    if (state.size() != rates.dim()) {
        throw validation_error("state dimension does not match 2^N");
    }
    if (state.sum() == 0) {
        throw validation_error("state has zero component sum");
    }
}

}  // namespace

double current(const VectorXd& state, const BoundaryRates& rates) {
    check_state(state, rates);
    const Eigen::Index half = state.size() / 2;
    const double empty1 = state.head(half).sum();
    const double occ1 = state.tail(half).sum();
    return (rates.alpha * empty1 - rates.gamma * occ1) / (empty1 + occ1);
}

double right_boundary_current(const VectorXd& state, const BoundaryRates& rates) {
    check_state(state, rates);
    const int n = rates.n_sites;
    double empty_n = 0;
    double occ_n = 0;
    for (Eigen::Index c = 0; c < state.size(); ++c) {
        (bit_at(static_cast<int>(c), n, n) ? occ_n : empty_n) += state[c];
    }
    return (rates.beta * occ_n - rates.delta * empty_n) / (empty_n + occ_n);
}

double bond_current(const VectorXd& state, const BoundaryRates& rates, int bond) {
    check_state(state, rates);
    if (bond < 1 || bond >= rates.n_sites) {
        throw validation_error("bond index out of range");
    }
    double p10 = 0;
    double p01 = 0;
    for (Eigen::Index c = 0; c < state.size(); ++c) {
        const int u = static_cast<int>(c);
        const int b1 = bit_at(u, bond, rates.n_sites);
        const int b2 = bit_at(u, bond + 1, rates.n_sites);
        if (b1 == 1 && b2 == 0) p10 += state[c];
        if (b1 == 0 && b2 == 1) p01 += state[c];
    }
    return (rates.q * p10 - p01) / ((rates.q + 1.0) * state.sum());
}

VectorXd density_profile(const VectorXd& state, const BoundaryRates& rates) {
    check_state(state, rates);
    VectorXd rho = VectorXd::Zero(rates.n_sites);
    for (Eigen::Index c = 0; c < state.size(); ++c) {
        for (int site = 1; site <= rates.n_sites; ++site) {
            if (bit_at(static_cast<int>(c), site, rates.n_sites)) {
                rho[site - 1] += state[c];
            }
        }
    }
    return rho / state.sum();
}

double closed_form_current_m1(const BoundaryRates& rates) {
    rates.validate();
    rates.require_positive();
    const double q = rates.q;
    const double al = rates.alpha;
    const double be = rates.beta;
    const double ga = rates.gamma;
    const double de = rates.delta;
    const int n = rates.n_sites;
    const double denom =
        2.0 * (n - 1) * (1.0 - q * q) +
        (q + 1.0) * (al / ga + be / de - ga * q / al - de * q / be) +
        (1.0 - q) * (1.0 / ga + 1.0 / de + q / al + q / be);
    return -(q - 1.0) * (q - 1.0) / denom;
}

double closed_form_current_m2(const BoundaryRates& rates) {
    rates.validate();
    rates.require_positive();
    const double q = rates.q;
    const double al = rates.alpha;
    const double be = rates.beta;
    const double ga = rates.gamma;
    const double de = rates.delta;
    const int n = rates.n_sites;

    double s1 = 0;  // sum_m q^{-m} (ga + al q^{m-2})^2
    double s3 = 0;  // sum_n q^{-n} (ga + al q^{n-1})^2
    for (int m = 1; m <= n - 1; ++m) {
        const double f2 = ga + al * std::pow(q, m - 2);
        const double f1 = ga + al * std::pow(q, m - 1);
        s1 += std::pow(q, -m) * f2 * f2;
        s3 += std::pow(q, -m) * f1 * f1;
    }
    double s2 = 0;  // double sum over 1 <= n0 < m0 <= N-1
    for (int n0 = 1; n0 <= n - 2; ++n0) {
        const double fn = ga + al * std::pow(q, n0 - 1);
        for (int m0 = n0 + 1; m0 <= n - 1; ++m0) {
            const double fm = ga + al * std::pow(q, m0 - 2);
            s2 += std::pow(q, -m0 - n0) * fm * fm * fn * fn;
        }
    }

    const double a1 =
        al * ga * (q * q - 1.0) *
        ((q + 1.0) * q * q * q * s1 + q * al * ga / (be * de) * (be + de * q) -
         (al + ga * q * q + al * q + ga * q - q) * (al + ga * q));
    const double a2 =
        std::pow(q, 4) * std::pow(q + 1.0, 3) * s2 +
        std::pow(q, 3) * (q + 1.0) * (q + 1.0) * (q * ga + al) * s1 +
        q * q * (q + 1.0) * (q + 1.0) * al * ga / (be * de) * (be + de * q) * s3 -
        al * al * ga * ga / (be * be * de * de) *
            (be + de * q * q + be * q + de * q - q) * (be + de * q) *
            (be + de * q * q) -
        (al + ga * q * q + al * q + ga * q - q) * (al + ga * q) *
            (al + ga * q * q) +
        q * (q + 1.0) * al * ga / (be * de) * (al + ga * q) * (be + de * q);
    return a1 / a2;
}

double closed_form_density_m0(const BoundaryRates& rates, int site) {
    rates.validate();
    rates.require_chiral();
    if (site < 1 || site > rates.n_sites) {
        throw validation_error("site index out of range");
    }
    const double w = rates.alpha * std::pow(rates.q, site - 1);
    return w / (rates.gamma + w);
}

double closed_form_density_m1(const BoundaryRates& rates, int site) {
    rates.validate();
    rates.require_positive();
    if (site < 1 || site > rates.n_sites) {
        throw validation_error("site index out of range");
    }
    const double q = rates.q;
    const double al = rates.alpha;
    const double be = rates.beta;
    const double ga = rates.gamma;
    const double de = rates.delta;
    const int n = rates.n_sites;
    const int k = site;
    const double denom =
        2.0 * (n - 1) * (1.0 - q * q) +
        (q + 1.0) * (al / ga + be / de - ga * q / al - de * q / be) +
        (1.0 - q) * (1.0 / ga + 1.0 / de + q / al + q / be);
    const double t1 =
        (al * ga / (be * de) *
             (be * be + 2.0 * be * de * (q - 1.0) * (k - n) - de * de * q) +
         al * al * std::pow(q, k - 1) - ga * ga * std::pow(q, 2 - k)) /
        ((1.0 - q) * (ga + al * std::pow(q, k - 1)));
    const double t2 =
        (al * al * std::pow(q, k - 1) - ga * ga * std::pow(q, 2 - k) - al * al +
         2.0 * al * ga * (k - 1) * (q - 1.0) + ga * ga * q) /
        ((q - 1.0) * (ga + al * std::pow(q, k - 2)));
    const double t3 = (al + ga * q) / ((q + 1.0) * (ga + al * std::pow(q, k - 2)));
    const double t4 = al * ga * (be + de * q) /
                      (be * de * (q + 1.0) * (ga + al * std::pow(q, k - 1)));
    return 1.0 + (q * q - 1.0) / al * (t1 + t2 + t3 + t4) / denom;
}

double large_n_current_asymptote(const BoundaryRates& rates, int m, int n_sites) {
    rates.validate();
    rates.require_positive();
    if (m != 1 && m != 2) {
        throw validation_error("asymptote available for classes 1 and 2 only");
    }
    if (n_sites < 2) throw validation_error("need at least two sites");
    const double q = rates.q;
    const double al = rates.alpha;
    const double be = rates.beta;
    const double ga = rates.gamma;
    const double de = rates.delta;
    const double extra = (m == 2) ? (q + 1.0) : 1.0;
    if (q > 1.0) {
        return ga * de * (q - 1.0) * (q - 1.0) * extra *
               std::pow(q, 1 - n_sites) / (al * (de + de * q + q - 1.0));
    }
    const int expo = (m == 1) ? n_sites - 2 : n_sites - 3;
    return -al * be * (q - 1.0) * (q - 1.0) * extra * std::pow(q, expo) /
           (ga * (be + be * q - q + 1.0));
}

}  // namespace asep
