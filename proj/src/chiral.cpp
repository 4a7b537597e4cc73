#include "asep/chiral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "asep/model.hpp"

namespace asep {

namespace {

constexpr double kTiny = 1e-300;

void validate_kinks(const KinkState& k, int n_sites) {
    int prev = -1;
    for (int pos : k.kinks) {
        if (pos < 0 || pos > n_sites) {
            throw validation_error("kink position outside [0, N]");
        }
        if (pos < prev) throw validation_error("kink positions must be sorted");
        if (pos == prev && pos != 0 && pos != n_sites) {
            throw validation_error("interior kink positions must be distinct");
        }
        prev = pos;
    }
}

VectorXd product_vector(const KinkState& k, const BoundaryRates& rates,
                        double occupied_scale) {
    rates.validate();
    validate_kinks(k, rates.n_sites);
    const int n = rates.n_sites;
    const std::vector<int> z = phase_path(k, n);
    std::vector<double> occ(static_cast<std::size_t>(n));
    for (int r = 0; r < n; ++r) {
        occ[static_cast<std::size_t>(r)] =
            occupied_scale * std::pow(rates.q, z[static_cast<std::size_t>(r)]);
    }
    const Eigen::Index dim = rates.dim();
    VectorXd v(dim);
    for (Eigen::Index c = 0; c < dim; ++c) {
        double prod = 1.0;
        for (int site = 1; site <= n; ++site) {
            prod *= bit_at(static_cast<int>(c), site, n)
                        ? occ[static_cast<std::size_t>(site - 1)]
                        : rates.gamma;
        }
        v[c] = prod;
    }
    return v;
}

// 4x4 bulk bond generator on (ee, eo, oe, oo), column = source.
Eigen::Matrix4cd bond_generator(double q) {
    Eigen::Matrix4cd m = Eigen::Matrix4cd::Zero();
    m(1, 1) = -1.0 / (q + 1.0);
    m(2, 1) = 1.0 / (q + 1.0);
    m(1, 2) = q / (q + 1.0);
    m(2, 2) = -q / (q + 1.0);
    return m;
}

// Residual normalized by the mass of the contributing terms, not by
// max(|lhs|, |rhs|): several identities have phases where both sides vanish
// by cancellation and a self-relative norm would amplify roundoff to O(1).
double rel_residual(const Eigen::VectorXcd& lhs, const Eigen::VectorXcd& rhs,
                    double term_scale) {
    return (lhs - rhs).cwiseAbs().maxCoeff() / std::max(term_scale, kTiny);
}

}  // namespace

std::vector<int> phase_path(const KinkState& k, int n_sites) {
    std::vector<int> z(static_cast<std::size_t>(n_sites));
    for (int r = 1; r <= n_sites; ++r) {
        int below = 0;
        for (int pos : k.kinks) {
            if (pos < r) ++below;
        }
        z[static_cast<std::size_t>(r - 1)] = (r - 1) - below;
    }
    return z;
}

VectorXd kink_vector(const KinkState& k, const BoundaryRates& rates) {
    rates.require_chiral();
    return product_vector(k, rates, rates.alpha);
}

VectorXd kink_vector_tilde(const KinkState& k, const BoundaryRates& rates) {
    rates.require_chiral();
    return product_vector(k, rates, -rates.gamma);
}

std::vector<BasisElement> enumerate_basis(int m, int n_sites) {
    if (n_sites < 2) throw validation_error("need at least two sites");
    if (m < 0 || m > n_sites) {
        throw validation_error("kink number must lie in [0, N]");
    }
    std::vector<BasisElement> out;
    for (int m0 = 0; m0 <= m; ++m0) {
        for (int mn = 0; mn + m0 <= m; ++mn) {
            const int k = m - m0 - mn;
            if (k > n_sites - 1) continue;
            // Lexicographic k-subsets of {1, .., N-1}.
            std::vector<int> pick(static_cast<std::size_t>(k));
            for (int i = 0; i < k; ++i) pick[static_cast<std::size_t>(i)] = i + 1;
            while (true) {
                BasisElement e;
                e.state.kinks.assign(static_cast<std::size_t>(m0), 0);
                e.state.kinks.insert(e.state.kinks.end(), pick.begin(), pick.end());
                e.state.kinks.insert(e.state.kinks.end(),
                                     static_cast<std::size_t>(mn), n_sites);
                e.independent = (mn <= 1);
                out.push_back(std::move(e));
                if (k == 0) break;
                int i = k - 1;
                while (i >= 0 &&
                       pick[static_cast<std::size_t>(i)] == n_sites - 1 - (k - 1 - i)) {
                    --i;
                }
                if (i < 0) break;
                ++pick[static_cast<std::size_t>(i)];
                for (int j = i + 1; j < k; ++j) {
                    pick[static_cast<std::size_t>(j)] =
                        pick[static_cast<std::size_t>(j - 1)] + 1;
                }
            }
        }
    }
    return out;
}

namespace {

MatrixXd family_matrix(int m, const BoundaryRates& rates, Exec ex, bool tilde) {
    rates.validate();
    const std::vector<BasisElement> basis = enumerate_basis(m, rates.n_sites);
    MatrixXd fam(rates.dim(), static_cast<Eigen::Index>(basis.size()));
    parallel_for(ex, static_cast<std::int64_t>(basis.size()), [&](std::int64_t i) {
        const KinkState& k = basis[static_cast<std::size_t>(i)].state;
        fam.col(static_cast<Eigen::Index>(i)) =
            tilde ? kink_vector_tilde(k, rates) : kink_vector(k, rates);
    });
    return fam;
}

}  // namespace

MatrixXd kink_family(int m, const BoundaryRates& rates, Exec ex) {
    return family_matrix(m, rates, ex, false);
}

MatrixXd tilde_family(int m, const BoundaryRates& rates, Exec ex) {
    return family_matrix(m, rates, ex, true);
}

LocalRelationReport verify_local_relations(
    const BoundaryRates& rates, const std::vector<complexd>& sample_phases) {
    rates.validate();
    rates.require_chiral();
    const double q = rates.q;
    const double al = rates.alpha;
    const double ga = rates.gamma;
    const double lq = std::log(q);
    const Eigen::Matrix4cd mb = bond_generator(q);

    Eigen::Matrix2cd m_left;
    m_left << -rates.alpha, rates.gamma, rates.alpha, -rates.gamma;
    Eigen::Matrix2cd m_right;
    m_right << -rates.delta, rates.beta, rates.delta, -rates.beta;

    LocalRelationReport report;
    for (complexd x : sample_phases) {
        const complexd qx = std::exp(x * lq);
        Eigen::Vector2cd phi(ga, al * qx);
        Eigen::Vector2cd phi1(ga, al * qx * q);
        Eigen::Vector2cd szphi(ga, -al * qx);

        const double phimax =
            std::max(phi.cwiseAbs().maxCoeff(), phi1.cwiseAbs().maxCoeff());

        const Eigen::Vector2cd rec =
            (q + 1.0) / (q - 1.0) * phi - 2.0 / (q - 1.0) * phi1;
        const double r0 = rel_residual(
            szphi, rec, (1.0 + (std::abs(q + 1.0) + 2.0) / std::abs(q - 1.0)) * phimax);

        auto tensor = [](const Eigen::Vector2cd& a, const Eigen::Vector2cd& b) {
            Eigen::Vector4cd t;
            t << a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1];
            return t;
        };
        const double mbmax = mb.cwiseAbs().maxCoeff();
        const Eigen::Vector4cd pair01 = tensor(phi, phi1);
        const double r1 =
            rel_residual(mb * pair01, Eigen::Vector4cd::Zero(),
                         mbmax * pair01.cwiseAbs().maxCoeff());

        const Eigen::Vector4cd pair00 = tensor(phi, phi);
        const Eigen::Vector4cd rhs2 = (q - 1.0) / (2.0 * (q + 1.0)) *
                                      (tensor(szphi, phi) - tensor(phi, szphi));
        const double r2 = rel_residual(mb * pair00, rhs2,
                                       (mbmax + std::abs(q - 1.0) / (q + 1.0)) *
                                           pair00.cwiseAbs().maxCoeff());

        const complexd qmx = 1.0 / qx;
        const complexd c0l = (1.0 - qmx) * (al * qx - ga) / 2.0;
        const complexd c1l = (1.0 - qmx) * (al * qx + ga) / 2.0;
        const double r3 = rel_residual(
            m_left * phi, c0l * phi + c1l * szphi,
            (m_left.cwiseAbs().maxCoeff() + std::abs(c0l) + std::abs(c1l)) * phimax);

        const complexd fac = (rates.alpha * rates.beta -
                              rates.gamma * rates.delta * qmx) /
                             (2.0 * al * ga);
        const complexd c0r = (al * qx - ga) * fac;
        const complexd c1r = (al * qx + ga) * fac;
        const double r4 = rel_residual(
            m_right * phi, c0r * phi + c1r * szphi,
            (m_right.cwiseAbs().maxCoeff() + std::abs(c0r) + std::abs(c1r)) * phimax);

        const std::array<double, 5> rs{r0, r1, r2, r3, r4};
        for (int i = 0; i < 5; ++i) {
            report.per_relation[static_cast<std::size_t>(i)] = std::max(
                report.per_relation[static_cast<std::size_t>(i)], rs[static_cast<std::size_t>(i)]);
        }
    }
    report.max_residual =
        *std::max_element(report.per_relation.begin(), report.per_relation.end());
    return report;
}

namespace {

// Unit-normalize the columns (zero columns stay zero).  The raw kink vectors
// carry q^{O(N^2)} dynamic range across members, which corrupts a relative
// singular-value cutoff applied to the stacked family.
MatrixXd unit_columns(const MatrixXd& vectors) {
    MatrixXd v = vectors;
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const double n = v.col(c).norm();
        if (n > 0) v.col(c) /= n;
    }
    return v;
}

}  // namespace

int family_rank(const MatrixXd& vectors) {
    if (vectors.cols() == 0 || vectors.rows() == 0) return 0;
    Eigen::BDCSVD<MatrixXd> svd(unit_columns(vectors));
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= 0) return 0;
    const double cut = 1e-10 * sv[0];
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv[i] > cut) ++rank;
    }
    return rank;
}

double check_invariant_subspace(const MatrixXd& vectors, const MatrixXd& op) {
    if (op.cols() != vectors.rows()) {
        throw validation_error("operator and vector dimensions do not match");
    }
    const MatrixXd v = unit_columns(vectors);
    Eigen::BDCSVD<MatrixXd> svd(v, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        if (sv.size() && sv[i] > 1e-10 * sv[0]) ++rank;
    }
    if (rank == 0) return 0;
    const MatrixXd u = svd.matrixU().leftCols(rank);
    // Worst relative leak over family members.  A per-member ratio keeps the
    // measure scale-invariant and stops a large family from diluting a leak
    // that is confined to a few members; columns the operator annihilates
    // (relative to its norm) are trivially invariant and are skipped.
    const double opnorm = op.norm();
    double worst = 0;
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
        const VectorXd y = op * v.col(c);
        const double yn = y.norm();
        if (yn <= 1e-12 * opnorm) continue;
        const double leak = (y - u * (u.transpose() * y)).norm() / yn;
        worst = std::max(worst, leak);
    }
    return worst;
}

}  // namespace asep
