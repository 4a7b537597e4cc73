#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"

#include "asep/generic.hpp"
#include "asep/model.hpp"
#include "asep/observables.hpp"
#include "asep/rng.hpp"
#include "asep/steady.hpp"

using namespace asep;

namespace {

// Figure-style benchmark parameter sets.
const BoundaryRates kOmegaRates{0.51, 1.27, 0.83, 1.0, 1.62, 4};
const BoundaryRates kReversalRates{1.30, 0.40, 2.10, 0.70, 1.35, 6};

BoundaryRates random_class_rates(int n_sites, int m, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const double q =
        rng.next_u64() % 2 ? rng.next_uniform(0.15, 0.85) : rng.next_uniform(1.2, 2.8);
    BoundaryRates r{rng.next_uniform(0.2, 1.5), rng.next_uniform(0.2, 1.5),
                    rng.next_uniform(0.2, 1.5), 0.0, q, n_sites};
    return r.with_delta(solve_delta_for_class(r, m));
}

}  // namespace

TEST_SUITE("generic") {

TEST_CASE("dense and sparse null-space routes agree") {
    for (std::uint64_t s : {71u, 72u}) {
        SplitMix64 rng(s);
        const BoundaryRates r{rng.next_uniform(0.2, 1.5), rng.next_uniform(0.2, 1.5),
                              rng.next_uniform(0.2, 1.5), rng.next_uniform(0.2, 1.5),
                              s == 71u ? 0.5 : 1.8, 6};
        const VectorXd dense = numeric_steady_state(r);
        const VectorXd sparse = numeric_steady_state_sparse(r);
        CHECK((dense - sparse).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK(dense.sum() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(dense.minCoeff() > 0);
    }
    CHECK_THROWS_AS(numeric_steady_state(kOmegaRates.with_sites(11)),
                    validation_error);
    CHECK_THROWS_AS(numeric_steady_state_sparse(kOmegaRates.with_sites(17)),
                    validation_error);
}

TEST_CASE("numeric route is collinear with the closed form") {
    for (int m : {0, 2, 4}) {
        const BoundaryRates r = random_class_rates(5, m, 80u + m);
        const VectorXd numeric = numeric_steady_state_auto(r);
        const VectorXd closed = steady_state_formula(r, m);
        CHECK(collinearity(numeric, closed) <= 1e-8);
    }
}

TEST_CASE("omega decomposition along a boundary-rate sweep") {
    for (double delta : {0.6, 1.0, 2.0482, 3.0}) {
        const DecompositionResult d =
            omega_decomposition(kOmegaRates.with_delta(delta));
        REQUIRE(d.omega.size() == kOmegaRates.n_sites + 1);
        CHECK(d.residual <= 1e-8);
        CHECK_FALSE(d.rank_deficient);
        CHECK(d.ratios.size() == d.omega.size());
        CHECK(d.ratios[kOmegaRates.n_sites] == 1.0);
    }
}

TEST_CASE("omega collapses onto one component at integer theta") {
    const BoundaryRates base = kOmegaRates;
    for (int m : {1, 2, 3}) {
        const BoundaryRates r = base.with_delta(solve_delta_for_class(base, m));
        const DecompositionResult d = omega_decomposition(r);
        CHECK(d.residual <= 1e-8);
        for (int k = 0; k <= r.n_sites; ++k) {
            if (k == m) continue;
            CHECK(std::abs(d.omega[k]) <= 1e-6 * std::abs(d.omega[m]));
        }
    }
}

TEST_CASE("current sign tracks the constraint exponent") {
    std::vector<double> grid;
    for (int i = 0; i <= 24; ++i) grid.push_back(-3.0 + 0.25 * i);
    for (double q : {0.5, 2.5}) {
        BoundaryRates tpl{1.30, 0.46, 2.11, 0.0, q, 4};
        const std::vector<CurrentScanRow> rows =
            scan_current(tpl, ScanVariable::theta, grid, Exec::parallel);
        REQUIRE(rows.size() == grid.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].vary_value == grid[i]);
            CHECK(rows[i].theta == doctest::Approx(grid[i]).epsilon(1e-9));
            const double marker = std::pow(q, rows[i].theta) - 1.0;
            if (std::abs(marker) < 1e-12) {
                CHECK(std::abs(rows[i].current) <= 1e-12);
            } else {
                CHECK(rows[i].current * marker > 0);
            }
        }
    }
}

TEST_CASE("current reverses direction with system size") {
    std::vector<double> sizes;
    for (int n = 2; n <= 16; ++n) sizes.push_back(n);
    const std::vector<CurrentScanRow> rows =
        scan_current(kReversalRates, ScanVariable::sites, sizes);
    REQUIRE(rows.size() == sizes.size());
    int sign_changes = 0;
    for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
        if (rows[i].current * rows[i + 1].current < 0) ++sign_changes;
    }
    CHECK(sign_changes == 1);
    CHECK(rows[2].current < 0);  // N = 4
    CHECK(rows[3].current > 0);  // N = 5
    // theta crosses zero at the same place the current does.
    for (const CurrentScanRow& row : rows) {
        if (std::abs(row.theta) > 1e-9) {
            const double marker = std::pow(kReversalRates.q, row.theta) - 1.0;
            CHECK(row.current * marker > 0);
        }
    }
}

TEST_CASE("density scan layout") {
    const BoundaryRates tpl{1.30, 0.46, 2.11, 0.0, 0.5, 5};
    const std::vector<double> thetas{0.0, 3.5, 7.0};
    const std::vector<DensityScanRow> rows = scan_density(tpl, thetas);
    REQUIRE(rows.size() == thetas.size() * static_cast<std::size_t>(tpl.n_sites));
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        for (int site = 1; site <= tpl.n_sites; ++site) {
            const DensityScanRow& row =
                rows[i * static_cast<std::size_t>(tpl.n_sites) +
                     static_cast<std::size_t>(site - 1)];
            CHECK(row.theta == doctest::Approx(thetas[i]).epsilon(1e-12));
            CHECK(row.site == site);
            CHECK(row.density >= 0.0);
            CHECK(row.density <= 1.0);
        }
    }
    // theta = 0 row group must reproduce the factorized class-0 profile.
    const BoundaryRates r0 =
        tpl.with_delta(solve_delta_for_class(tpl, 0));
    const VectorXd dens0 = density_profile(numeric_steady_state(r0), r0);
    for (int site = 1; site <= tpl.n_sites; ++site) {
        CHECK(rows[static_cast<std::size_t>(site - 1)].density ==
              doctest::Approx(dens0[site - 1]).epsilon(1e-9));
    }
}

TEST_CASE("scan determinism across execution policies") {
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(-2.0 + 0.4 * i);
    const BoundaryRates tpl{0.9, 0.7, 1.1, 0.0, 1.7, 5};
    const auto a = scan_current(tpl, ScanVariable::theta, grid, Exec::serial);
    const auto b = scan_current(tpl, ScanVariable::theta, grid, Exec::parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].current == b[i].current);
        CHECK(a[i].theta == b[i].theta);
    }
}

TEST_CASE("collinearity measure") {
    VectorXd u(3), w(3);
    u << 1, 2, 3;
    w << -3, 0, 1;  // orthogonal to u
    CHECK(collinearity(u, 2.5 * u) <= 1e-15);
    CHECK(collinearity(u, w) == doctest::Approx(1.0).epsilon(1e-14));
    const VectorXd tilted = u + 1e-9 * w;
    CHECK(collinearity(u, tilted) ==
          doctest::Approx(1e-9 * w.norm() / u.norm()).epsilon(1e-4));
    CHECK_THROWS_AS(collinearity(u, VectorXd::Zero(3)), validation_error);
    CHECK_THROWS_AS(collinearity(VectorXd::Zero(3), u), validation_error);
    CHECK_THROWS_AS(collinearity(u, VectorXd::Ones(4)), validation_error);
}

}  // TEST_SUITE
