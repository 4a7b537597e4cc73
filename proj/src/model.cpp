#include "asep/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Sparse>

namespace asep {

namespace {

bool finite(double v) { return std::isfinite(v); }

struct Move {
    int target;
    double rate;
};

// All transitions out of configuration c, sorted by target index.  The
// order is part of the contract: the diagonal is minus the sum taken in
// this order, which is what makes the assembled column sums exactly zero.
void column_moves(const BoundaryRates& r, int c, std::vector<Move>& out) {
    out.clear();
    const int n = r.n_sites;
    if (bit_at(c, 1, n) == 0) {
        out.push_back({flip_bit(c, 1, n), r.alpha});
    } else {
        out.push_back({flip_bit(c, 1, n), r.gamma});
    }
    const double right = r.q / (r.q + 1.0);
    const double left = 1.0 / (r.q + 1.0);
    for (int k = 1; k < n; ++k) {
        const int b1 = bit_at(c, k, n);
        const int b2 = bit_at(c, k + 1, n);
        if (b1 == b2) continue;
        const int target = flip_bit(flip_bit(c, k, n), k + 1, n);
        out.push_back({target, b1 == 1 ? right : left});
    }
    if (bit_at(c, n, n) == 0) {
        out.push_back({flip_bit(c, n, n), r.delta});
    } else {
        out.push_back({flip_bit(c, n, n), r.beta});
    }
    std::sort(out.begin(), out.end(),
              [](const Move& a, const Move& b) { return a.target < b.target; });
}

}  // namespace

void BoundaryRates::validate() const {
    if (!finite(alpha) || !finite(beta) || !finite(gamma) || !finite(delta) ||
        !finite(q)) {
        throw validation_error("rates must be finite");
    }
    if (alpha < 0 || beta < 0 || gamma < 0 || delta < 0) {
        throw validation_error("boundary rates must be non-negative");
    }
    if (q <= 0) throw validation_error("q must be positive");
    if (std::abs(q - 1.0) <= kQOneGuard) {
        throw validation_error("q too close to 1 (symmetric point unsupported)");
    }
    if (n_sites < 2) throw validation_error("need at least 2 sites");
    if (n_sites > 26) throw validation_error("n_sites too large for flat int indexing");
}

void BoundaryRates::require_positive() const {
    if (alpha <= 0 || beta <= 0 || gamma <= 0 || delta <= 0) {
        throw validation_error("all four boundary rates must be strictly positive");
    }
}

void BoundaryRates::require_chiral() const {
    if (alpha <= 0 || gamma <= 0) {
        throw validation_error("alpha and gamma must be strictly positive");
    }
}

std::string bitstring(int index, int n_sites) {
    std::string s(static_cast<std::size_t>(n_sites), '0');
    for (int k = 1; k <= n_sites; ++k) {
        if (bit_at(index, k, n_sites)) s[static_cast<std::size_t>(k - 1)] = '1';
    }
    return s;
}

int index_of_bitstring(const std::string& bits) {
    if (bits.empty()) throw validation_error("empty bitstring");
    int idx = 0;
    for (char ch : bits) {
        if (ch != '0' && ch != '1') {
            throw validation_error("bitstring must contain only 0 and 1");
        }
        idx = (idx << 1) | (ch == '1' ? 1 : 0);
    }
    return idx;
}

MatrixXd build_markov_generator(const BoundaryRates& rates) {
    rates.validate();
    const int dim = rates.dim();
    MatrixXd m = MatrixXd::Zero(dim, dim);
    std::vector<Move> moves;
    for (int c = 0; c < dim; ++c) {
        column_moves(rates, c, moves);
        double total = 0;
        for (const Move& mv : moves) {
            m(mv.target, c) += mv.rate;
            total += mv.rate;
        }
        m(c, c) = -total;
    }
    return m;
}

Eigen::SparseMatrix<double> build_markov_sparse(const BoundaryRates& rates) {
    rates.validate();
    const int dim = rates.dim();
    Eigen::SparseMatrix<double> m(dim, dim);
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(dim) * (rates.n_sites + 2));
    std::vector<Move> moves;
    for (int c = 0; c < dim; ++c) {
        column_moves(rates, c, moves);
        double total = 0;
        for (const Move& mv : moves) {
            trips.emplace_back(mv.target, c, mv.rate);
            total += mv.rate;
        }
        trips.emplace_back(c, c, -total);
    }
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

VectorXd apply_markov(const BoundaryRates& rates, const VectorXd& v) {
    rates.validate();
    const int dim = rates.dim();
    if (v.size() != dim) throw validation_error("state dimension mismatch");
    VectorXd y = VectorXd::Zero(dim);
    std::vector<Move> moves;
    for (int c = 0; c < dim; ++c) {
        column_moves(rates, c, moves);
        double total = 0;
        for (const Move& mv : moves) {
            y[mv.target] += mv.rate * v[c];
            total += mv.rate;
        }
        y[c] -= total * v[c];
    }
    return y;
}

MatrixXcd build_xxz_hamiltonian(const BoundaryRates& rates, complexd rho) {
    rates.validate();
    if (rho == complexd(0, 0)) throw validation_error("gauge parameter rho must be nonzero");
    const int n = rates.n_sites;
    const int dim = rates.dim();
    const double q = rates.q;
    const double sq = std::sqrt(q);
    const complexd rho2 = rho * rho;
    const complexd i1(0, 1);

    // Boundary fields (h_x, h_y, h_z) at sites 1 and N.
    const complexd h1x = (q + 1) * (rates.gamma + rates.alpha * rho2) / (sq * rho);
    const complexd h1y = (q + 1) * i1 * (rates.gamma - rates.alpha * rho2) / (sq * rho);
    const double h1z = (q + 1) * (rates.gamma - rates.alpha) / sq;
    const double qp = std::pow(q, (n - 1) / 2.0);
    const double qm = std::pow(q, (1 - n) / 2.0);
    const complexd hnx = (q + 1) * (rates.beta * qp + rates.delta * rho2 * qm) / (sq * rho);
    const complexd hny = (q + 1) * i1 * (rates.beta * qp - rates.delta * rho2 * qm) / (sq * rho);
    const double hnz = (q + 1) * (rates.beta - rates.delta) / sq;

    const double bond_diag = -(q + 1) / sq;           // sigma^z sigma^z - 1 on opposite bits
    const double edge_diag = (q - 1) / (2.0 * sq);    // (sigma^z_1 - sigma^z_N) weight
    const double shift = -(q + 1) * rates.total() / sq;

    MatrixXcd h = MatrixXcd::Zero(dim, dim);
    auto apply_field = [&](int c, int site, complexd hx, complexd hy, double hz) {
        const int b = bit_at(c, site, n);
        const int f = flip_bit(c, site, n);
        h(f, c) += hx;
        h(f, c) += hy * (b == 0 ? i1 : -i1);
        h(c, c) += hz * (b == 0 ? 1.0 : -1.0);
    };
    for (int c = 0; c < dim; ++c) {
        for (int k = 1; k < n; ++k) {
            if (bit_at(c, k, n) == bit_at(c, k + 1, n)) continue;
            const int swapped = flip_bit(flip_bit(c, k, n), k + 1, n);
            h(swapped, c) += 2.0;  // sigma^x sigma^x + sigma^y sigma^y
            h(c, c) += bond_diag;
        }
        apply_field(c, 1, h1x, h1y, h1z);
        apply_field(c, n, hnx, hny, hnz);
        h(c, c) += edge_diag * ((bit_at(c, 1, n) == 0 ? 1.0 : -1.0) -
                                (bit_at(c, n, n) == 0 ? 1.0 : -1.0));
        h(c, c) += shift;
    }
    return h;
}

VectorXcd gauge_diagonal(const BoundaryRates& rates, complexd rho) {
    rates.validate();
    if (rho == complexd(0, 0)) throw validation_error("gauge parameter rho must be nonzero");
    const int n = rates.n_sites;
    const int dim = rates.dim();
    VectorXcd g(dim);
    for (int c = 0; c < dim; ++c) {
        complexd entry(1, 0);
        for (int site = 1; site <= n; ++site) {
            if (bit_at(c, site, n)) entry *= rho * std::pow(rates.q, (1.0 - site) / 2.0);
        }
        g[c] = entry;
    }
    return g;
}

namespace {

// Roots of t^2 - s t + p, larger one first under (Re, Im) lexicographic order.
std::pair<complexd, complexd> boundary_root_pair(double q, double in_rate,
                                                 double out_rate) {
    const double p = -in_rate / out_rate;
    const double s = (1.0 - q) / (out_rate * (q + 1.0)) - 1.0 - p;
    const complexd disc = std::sqrt(complexd(s * s - 4.0 * p, 0));
    complexd r1 = (s + disc) / 2.0;
    complexd r2 = (s - disc) / 2.0;
    const bool swap = (r1.real() < r2.real()) ||
                      (r1.real() == r2.real() && r1.imag() < r2.imag());
    if (swap) std::swap(r1, r2);
    return {r1, r2};
}

}  // namespace

ReflectionParams rates_to_reflection_params(const BoundaryRates& rates) {
    rates.validate();
    if (rates.gamma == 0 || rates.delta == 0) {
        throw validation_error("gamma and delta must be nonzero for boundary parameters");
    }
    ReflectionParams out;
    std::tie(out.a, out.c) = boundary_root_pair(rates.q, rates.alpha, rates.gamma);
    std::tie(out.b, out.d) = boundary_root_pair(rates.q, rates.beta, rates.delta);
    return out;
}

BoundaryRates reflection_params_to_rates(const ReflectionParams& p, double q,
                                         int n_sites) {
    const complexd denom_l = (p.a + 1.0) * (p.c + 1.0) * (q + 1.0);
    const complexd denom_r = (p.b + 1.0) * (p.d + 1.0) * (q + 1.0);
    if (std::abs(denom_l) < 1e-300 || std::abs(denom_r) < 1e-300) {
        throw validation_error("boundary parameters at -1 have no rate preimage");
    }
    const complexd alpha = (q - 1.0) * p.a * p.c / denom_l;
    const complexd gamma = (1.0 - q) / denom_l;
    const complexd beta = (q - 1.0) * p.b * p.d / denom_r;
    const complexd delta = (1.0 - q) / denom_r;
    auto to_real = [](complexd z, const char* name) {
        if (std::abs(z.imag()) > 1e-9 * (1.0 + std::abs(z.real()))) {
            throw numerical_error(std::string("rate ") + name +
                                  " has a non-negligible imaginary part");
        }
        return z.real();
    };
    BoundaryRates r;
    r.alpha = to_real(alpha, "alpha");
    r.beta = to_real(beta, "beta");
    r.gamma = to_real(gamma, "gamma");
    r.delta = to_real(delta, "delta");
    r.q = q;
    r.n_sites = n_sites;
    return r;
}

double theta(const BoundaryRates& rates) {
    rates.validate();
    rates.require_positive();
    const double ratio = rates.alpha * rates.beta *
                         std::pow(rates.q, rates.n_sites - 1) /
                         (rates.gamma * rates.delta);
    return std::log(ratio) / std::log(rates.q);
}

std::optional<ConstraintClass> constraint_class(const BoundaryRates& rates,
                                                double tol_rel) {
    rates.validate();
    const double gd = rates.gamma * rates.delta;
    if (gd <= 0) return std::nullopt;
    int best_m = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int m = 0; m <= rates.n_sites; ++m) {
        const double lhs = rates.alpha * rates.beta *
                           std::pow(rates.q, rates.n_sites - 1 - m);
        const double res = std::abs(lhs - gd);
        if (res < best) {
            best = res;
            best_m = m;
        }
    }
    if (best <= tol_rel * gd) return ConstraintClass{best_m, best};
    return std::nullopt;
}

double solve_delta_for_class(const BoundaryRates& rates, int m) {
    rates.validate();
    if (m < 0 || m > rates.n_sites) throw validation_error("class index outside [0, N]");
    if (rates.gamma <= 0) throw validation_error("gamma must be positive to solve for delta");
    return rates.alpha * rates.beta * std::pow(rates.q, rates.n_sites - 1 - m) /
           rates.gamma;
}

double solve_beta_for_class(const BoundaryRates& rates, int m) {
    rates.validate();
    if (m < 0 || m > rates.n_sites) throw validation_error("class index outside [0, N]");
    if (rates.alpha <= 0) throw validation_error("alpha must be positive to solve for beta");
    return rates.gamma * rates.delta /
           (rates.alpha * std::pow(rates.q, rates.n_sites - 1 - m));
}

}  // namespace asep
