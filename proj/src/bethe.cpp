#include "asep/bethe.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/LU>

#include "asep/dual.hpp"
#include "asep/model.hpp"
#include "asep/rng.hpp"

namespace asep {

namespace {

constexpr double kTiny = 1e-300;

bool uses_first_pair(TQKind kind) {
    return kind == TQKind::I || kind == TQKind::III;
}

// x*y - m with fma-compensated products and exact two-sums, keeping full
// relative accuracy when x*y lands within rounding distance of m.  The BAE
// scattering factors (l_k l_j - 1) and (l_k l_j - q^2) go through here:
// root pairs can sit ~1e-7 from those manifolds (Newton stalls on the 1e-9
// relative noise floor of the naive evaluation).
double two_sum(double a, double b, double& err) {
    const double s = a + b;
    const double bb = s - a;
    err = (a - (s - bb)) + (b - bb);
    return s;
}

complexd product_minus(const complexd& x, const complexd& y, double m) {
    const double ar = x.real(), ai = x.imag();
    const double br = y.real(), bi = y.imag();
    const double p1 = ar * br, e1 = std::fma(ar, br, -p1);
    const double p2 = ai * bi, e2 = std::fma(ai, bi, -p2);
    const double p3 = ar * bi, e3 = std::fma(ar, bi, -p3);
    const double p4 = ai * br, e4 = std::fma(ai, br, -p4);
    double u1, u2, u3;
    const double s1 = two_sum(p1, -m, u1);
    const double s2 = two_sum(s1, -p2, u2);
    const double re = s2 + (u1 + u2 + (e1 - e2));
    const double s3 = two_sum(p3, p4, u3);
    const double im = s3 + (u3 + (e3 + e4));
    return {re, im};
}

Dual product_minus(const Dual& x, const Dual& y, double m) {
    return {product_minus(x.v, y.v, m), x.v * y.d + x.d * y.v};
}

// Boundary factor products shared by the rational transfer-eigenvalue
// functions and their pole-cleared forms.
template <class S>
S boundary_a(const S& x, TQKind kind, double q, const ReflectionParams& p) {
    if (uses_first_pair(kind)) {
        return (S(p.a) * x + S(1.0)) * (S(p.c) * x + S(1.0)) *
               (S(p.b) * x + S(1.0)) * (S(p.d) * x + S(1.0));
    }
    (void)q;
    return (x + S(p.a)) * (x + S(p.c)) * (x + S(p.b)) * (x + S(p.d));
}

template <class S>
S boundary_d(const S& x, TQKind kind, double q, const ReflectionParams& p) {
    if (uses_first_pair(kind)) {
        return (x + S(p.a * q)) * (x + S(p.c * q)) * (x + S(p.b * q)) *
               (x + S(p.d * q));
    }
    return (S(p.a) * x + S(q)) * (S(p.c) * x + S(q)) * (S(p.b) * x + S(q)) *
           (S(p.d) * x + S(q));
}

// Pole-cleared transfer-eigenvalue functions.  Multiplying the rational
// forms by (q - x^2) removes the only denominator, which is what the Bethe
// system is solved on; the rational forms themselves live in tq_lambda.
template <class S>
S a_tilde(const S& x, TQKind kind, double q, const ReflectionParams& p, int n) {
    return S(q) * (S(q * q) - x * x) * boundary_a(x, kind, q, p) *
           pow_int(S(q) - x, 2 * n);
}

template <class S>
S d_tilde(const S& x, TQKind kind, double q, const ReflectionParams& p, int n) {
    return (S(1.0) - x * x) * S(std::pow(q, n)) * boundary_d(x, kind, q, p) *
           pow_int(S(1.0) - x, 2 * n);
}

// Both sides of Bethe equation j for every j: the equation is t1_j + t2_j = 0,
//   t1_j = atil(l_j) prod_k (l_k - q l_j)(l_k l_j - 1)
//   t2_j = dtil(l_j) prod_k (l_k - l_j/q)(l_k l_j - q^2)
template <class S>
void bae_terms(const std::vector<S>& roots, TQKind kind, double q,
               const ReflectionParams& p, int n, std::vector<S>& t1,
               std::vector<S>& t2) {
    const std::size_t m = roots.size();
    t1.resize(m);
    t2.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const S& lj = roots[j];
        S pp = S(1.0);
        S pm = S(1.0);
        for (std::size_t k = 0; k < m; ++k) {
            const S& lk = roots[k];
            pp = pp * (lk - S(q) * lj) * product_minus(lk, lj, 1.0);
            pm = pm * (lk - lj / S(q)) * product_minus(lk, lj, q * q);
        }
        t1[j] = a_tilde(lj, kind, q, p, n) * pp;
        t2[j] = d_tilde(lj, kind, q, p, n) * pm;
    }
}

double scaled_residual(complexd f, complexd t1, complexd t2) {
    return std::abs(f) / std::max({std::abs(t1), std::abs(t2), kTiny});
}

complexd q_poly(complexd x, const std::vector<complexd>& roots, double q) {
    complexd out(1, 0);
    for (complexd l : roots) out *= (l - x) * (l * x - q);
    return out;
}

struct NewtonOutcome {
    std::vector<complexd> roots;
    double residual = std::numeric_limits<double>::infinity();
    bool converged = false;
};

// Damped Newton on the pole-cleared system in log coordinates u = log(l).
// The Jacobian comes from dual-number passes (seed dl_j = l_j for column j),
// and rows are scaled by the larger term magnitude so the linear solve stays
// conditioned across the wildly different scales of (q - x)^{2N}.
NewtonOutcome newton_solve(std::vector<complexd> start, TQKind kind, double q,
                           const ReflectionParams& p, int n, double tol,
                           int max_iter) {
    const int m = static_cast<int>(start.size());
    NewtonOutcome out;
    if (m == 0) {
        out.converged = true;
        out.residual = 0;
        return out;
    }
    std::vector<complexd> u(start.size());
    for (int j = 0; j < m; ++j) u[j] = std::log(start[j]);

    std::vector<complexd> roots(m);
    std::vector<complexd> t1(m), t2(m);
    std::vector<Dual> droots(m), dt1(m), dt2(m);
    MatrixXcd jac(m, m);
    VectorXcd rhs(m);

    for (int it = 0; it < max_iter; ++it) {
        for (int j = 0; j < m; ++j) roots[j] = std::exp(u[j]);
        bae_terms(roots, kind, q, p, n, t1, t2);
        double rmax = 0;
        for (int j = 0; j < m; ++j) {
            rmax = std::max(rmax, scaled_residual(t1[j] + t2[j], t1[j], t2[j]));
        }
        if (rmax < tol) {
            out.roots = roots;
            out.residual = rmax;
            out.converged = true;
            return out;
        }

        for (int k = 0; k < m; ++k) {
            for (int j = 0; j < m; ++j) {
                droots[j] = Dual(roots[j], j == k ? roots[j] : complexd(0, 0));
            }
            bae_terms(droots, kind, q, p, n, dt1, dt2);
            for (int j = 0; j < m; ++j) jac(j, k) = dt1[j].d + dt2[j].d;
        }
        for (int j = 0; j < m; ++j) {
            const double scale =
                1.0 / std::max({std::abs(t1[j]), std::abs(t2[j]), kTiny});
            jac.row(j) *= scale;
            rhs[j] = -(t1[j] + t2[j]) * scale;
        }
        const VectorXcd du = Eigen::PartialPivLU<MatrixXcd>(jac).solve(rhs);
        if (!du.allFinite()) return out;
        double step = 0;
        for (int j = 0; j < m; ++j) step = std::max(step, std::abs(du[j]));
        const double damp = step > 2.0 ? 2.0 / step : 1.0;
        for (int j = 0; j < m; ++j) {
            u[j] += damp * du[j];
            if (std::abs(u[j].real()) > 14.0) return out;  // fled to 0 or infinity
        }
    }
    return out;
}

bool near_pole(complexd root, double q) {
    const double tol = 1e-8 * (1.0 + q);
    return std::abs(root - complexd(1, 0)) < tol ||
           std::abs(root - complexd(q, 0)) < tol;
}

bool has_repeated_root(const std::vector<complexd>& roots) {
    for (std::size_t i = 0; i < roots.size(); ++i) {
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (std::abs(roots[i] - roots[j]) <= 1e-8 * (1.0 + std::abs(roots[i]))) {
                return true;
            }
        }
    }
    return false;
}

bool same_root_set(const std::vector<complexd>& a, const std::vector<complexd>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i] - b[i]) > 1e-8 * (1.0 + std::abs(a[i]))) return false;
    }
    return true;
}

}  // namespace

BetheRootSet infinite_string(int m) {
    if (m < 0) throw validation_error("string size must be non-negative");
    BetheRootSet s;
    s.kind = TQKind::IV;
    s.is_infinite_string = true;
    s.string_size = m;
    return s;
}

int root_count(TQKind kind, const BoundaryRates& rates) {
    rates.validate();
    switch (kind) {
        case TQKind::I:
            return rates.n_sites - 1;
        case TQKind::II:
            return 0;
        default:
            break;
    }
    const auto cls = constraint_class(rates);
    if (!cls) {
        throw validation_error("kinds III and IV require a constraint class");
    }
    if (kind == TQKind::IV) return cls->m;
    const int mt = rates.n_sites - 1 - cls->m;
    if (mt < 0) {
        throw validation_error("kind III inapplicable at constraint class N");
    }
    return mt;
}

complexd tq_lambda(const BetheRootSet& s, complexd x, const BoundaryRates& rates) {
    rates.validate();
    const ReflectionParams p = rates_to_reflection_params(rates);
    const double q = rates.q;
    const int n = rates.n_sites;
    if (std::abs(q - x * x) <= 1e-12 * (q + std::norm(x))) {
        throw validation_error("prefactor pole at x^2 = q");
    }
    const complexd a_val = (q * q * q - q * x * x) / (q - x * x) *
                           boundary_a(x, s.kind, q, p) *
                           pow_int(complexd(q, 0) - x, 2 * n);
    const complexd d_val = (1.0 - x * x) / (q - x * x) * std::pow(q, n) *
                           boundary_d(x, s.kind, q, p) *
                           pow_int(complexd(1, 0) - x, 2 * n);

    if (s.is_infinite_string || s.kind == TQKind::II) {
        // All Q-ratios go to q^{+-M}, cancelling the weights exactly.
        return a_val + d_val;
    }
    for (complexd l : s.roots) {
        if (std::abs(l - x) <= 1e-12 * (1.0 + std::abs(l) + std::abs(x)) ||
            std::abs(l * x - q) <= 1e-12 * (q + std::abs(l * x))) {
            throw validation_error("x is a zero of the Q-polynomial");
        }
    }
    double weight_exp = 0;
    switch (s.kind) {
        case TQKind::I:
            weight_exp = 1.0 - rates.n_sites;
            break;
        case TQKind::III:
        case TQKind::IV:
            weight_exp = -static_cast<double>(s.roots.size());
            break;
        case TQKind::II:
            break;
    }
    const double w = std::pow(q, weight_exp);
    const complexd qx = q_poly(x, s.roots, q);
    return w * a_val * q_poly(q * x, s.roots, q) / qx +
           (1.0 / w) * d_val * q_poly(x / q, s.roots, q) / qx;
}

VectorXd bae_residual(const BetheRootSet& s, const BoundaryRates& rates) {
    rates.validate();
    if (s.is_infinite_string) return VectorXd::Zero(s.string_size);
    const ReflectionParams p = rates_to_reflection_params(rates);
    std::vector<complexd> t1, t2;
    bae_terms(s.roots, s.kind, rates.q, p, rates.n_sites, t1, t2);
    VectorXd r(static_cast<Eigen::Index>(s.roots.size()));
    for (std::size_t j = 0; j < s.roots.size(); ++j) {
        r[static_cast<Eigen::Index>(j)] =
            scaled_residual(t1[j] + t2[j], t1[j], t2[j]);
    }
    return r;
}

BetheRootSet canonicalize(const BetheRootSet& s, double q) {
    BetheRootSet out = s;
    const double sq = std::sqrt(q);
    for (complexd& l : out.roots) {
        const double mod = std::abs(l);
        if (std::abs(mod - sq) <= 1e-8 * (1.0 + sq)) {
            // On the self-dual circle q/l is the conjugate: pick Im >= 0.
            if (l.imag() < 0) l = q / l;
        } else if (mod < sq) {
            l = q / l;
        }
    }
    std::sort(out.roots.begin(), out.roots.end(), [](complexd a, complexd b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return out;
}

BetheRootSet polish(const BetheRootSet& s, const BoundaryRates& rates, double tol,
                    int max_iter) {
    rates.validate();
    if (s.is_infinite_string || s.roots.empty()) return s;
    const ReflectionParams p = rates_to_reflection_params(rates);
    NewtonOutcome o =
        newton_solve(s.roots, s.kind, rates.q, p, rates.n_sites, tol, max_iter);
    if (!o.converged) {
        throw numerical_error("Bethe root polishing did not converge");
    }
    BetheRootSet out = s;
    out.roots = std::move(o.roots);
    return canonicalize(out, rates.q);
}

std::vector<BetheRootSet> solve_baes(TQKind kind, const BoundaryRates& rates,
                                     int n_starts, std::uint64_t seed, Exec ex) {
    rates.validate();
    if (kind == TQKind::II) {
        throw validation_error("the trivial relation has no roots to solve for");
    }
    if (n_starts < 1) throw validation_error("need at least one start");
    const int m = root_count(kind, rates);
    if (m == 0) {
        // Zero-root member (class boundary): the eigenvalue function still
        // applies, there is just nothing to solve.
        BetheRootSet s;
        s.kind = kind;
        return {s};
    }
    const ReflectionParams p = rates_to_reflection_params(rates);
    const double q = rates.q;
    const int n = rates.n_sites;

    struct Slot {
        bool ok = false;
        std::vector<complexd> roots;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n_starts));
    parallel_for(ex, n_starts, [&](std::int64_t start) {
        SplitMix64 rng(substream_seed(seed, static_cast<std::uint64_t>(start)));
        std::vector<complexd> init(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            const double mod =
                std::exp(rng.next_uniform(std::log(1e-2), std::log(1e2)));
            const double ph = rng.next_uniform(-M_PI, M_PI);
            init[static_cast<std::size_t>(j)] = std::polar(mod, ph);
        }
        NewtonOutcome o = newton_solve(std::move(init), kind, q, p, n, 1e-12, 200);
        if (!o.converged) return;
        for (complexd l : o.roots) {
            if (near_pole(l, q)) return;
        }
        BetheRootSet tmp;
        tmp.kind = kind;
        tmp.roots = std::move(o.roots);
        tmp = canonicalize(tmp, q);
        if (has_repeated_root(tmp.roots)) return;
        Slot& slot = slots[static_cast<std::size_t>(start)];
        slot.ok = true;
        slot.roots = std::move(tmp.roots);
    });

    std::vector<BetheRootSet> found;
    for (const Slot& slot : slots) {
        if (!slot.ok) continue;
        bool dup = false;
        for (const BetheRootSet& f : found) {
            if (same_root_set(f.roots, slot.roots)) {
                dup = true;
                break;
            }
        }
        if (dup) continue;
        BetheRootSet s;
        s.kind = kind;
        s.roots = slot.roots;
        found.push_back(std::move(s));
    }
    std::sort(found.begin(), found.end(),
              [&](const BetheRootSet& a, const BetheRootSet& b) {
                  const complexd ea = eigenvalue_from_roots(a, rates);
                  const complexd eb = eigenvalue_from_roots(b, rates);
                  if (ea.real() != eb.real()) return ea.real() < eb.real();
                  return ea.imag() < eb.imag();
              });
    return found;
}

complexd eigenvalue_from_roots(const BetheRootSet& s, const BoundaryRates& rates) {
    rates.validate();
    if (s.is_infinite_string || s.kind == TQKind::II) return complexd(0, 0);
    const double q = rates.q;
    complexd sum(0, 0);
    for (complexd l : s.roots) {
        if (near_pole(l, q)) {
            throw validation_error("Bethe root at a pole of the energy formula");
        }
        sum += l / ((l - 1.0) * (l - q));
    }
    complexd e = (1.0 - q) * (1.0 - q) / (q + 1.0) * sum;
    if (uses_first_pair(s.kind)) e -= rates.total();
    return e;
}

MatchReport match_spectrum(const std::vector<BetheRootSet>& sets,
                           const std::vector<complexd>& exact_levels,
                           const BoundaryRates& rates, double tol) {
    struct Cand {
        double err;
        int set;
        int level;
    };
    std::vector<complexd> energies;
    energies.reserve(sets.size());
    for (const BetheRootSet& s : sets) {
        energies.push_back(eigenvalue_from_roots(s, rates));
    }
    std::vector<Cand> cands;
    for (int si = 0; si < static_cast<int>(sets.size()); ++si) {
        for (int li = 0; li < static_cast<int>(exact_levels.size()); ++li) {
            const double err = std::abs(energies[si] - exact_levels[li]);
            if (err <= tol) cands.push_back({err, si, li});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.err != b.err) return a.err < b.err;
        if (a.set != b.set) return a.set < b.set;
        return a.level < b.level;
    });
    std::vector<bool> set_used(sets.size(), false);
    std::vector<bool> level_used(exact_levels.size(), false);
    MatchReport report;
    for (const Cand& c : cands) {
        if (set_used[c.set] || level_used[c.level]) continue;
        set_used[c.set] = true;
        level_used[c.level] = true;
        report.matched.push_back({c.level, c.set, c.err});
        report.max_abs_err = std::max(report.max_abs_err, c.err);
    }
    for (int li = 0; li < static_cast<int>(exact_levels.size()); ++li) {
        if (!level_used[li]) report.unmatched_levels.push_back(li);
    }
    for (int si = 0; si < static_cast<int>(sets.size()); ++si) {
        if (!set_used[si]) report.unmatched_sets.push_back(si);
    }
    return report;
}

std::vector<QuasiMomentum> quasi_momentum(const BetheRootSet& s, double q) {
    if (s.kind != TQKind::IV) {
        throw validation_error("quasi-momenta defined for the root family of kind IV");
    }
    const double sq = std::sqrt(q);
    std::vector<QuasiMomentum> out;
    if (s.is_infinite_string) {
        QuasiMomentum lim;
        lim.p = -complexd(0, 1) * std::log(complexd(1.0 / sq, 0));
        lim.eps = complexd(0, 0);
        out.assign(static_cast<std::size_t>(s.string_size), lim);
        return out;
    }
    for (complexd nu : s.roots) {
        if (std::abs(nu - complexd(1, 0)) <= 1e-12 * (1.0 + std::abs(nu))) {
            throw validation_error("quasi-momentum pole at root = 1");
        }
        QuasiMomentum qm;
        const complexd eip = (nu - q) / (sq * (nu - 1.0));
        qm.p = -complexd(0, 1) * std::log(eip);
        qm.eps = eip - 1.0 / sq;
        out.push_back(qm);
    }
    return out;
}

}  // namespace asep
