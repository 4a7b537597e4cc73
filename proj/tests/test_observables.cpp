#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "doctest.h"

#include "asep/chiral.hpp"
#include "asep/generic.hpp"
#include "asep/model.hpp"
#include "asep/observables.hpp"
#include "asep/rng.hpp"
#include "asep/steady.hpp"

using namespace asep;

namespace {

const BoundaryRates kTableBase{0.23, 0.32, 0.17, 0.0, 0.5, 4};

BoundaryRates class_rates(int m) {
    return kTableBase.with_delta(solve_delta_for_class(kTableBase, m));
}

BoundaryRates random_class_rates(int n_sites, int m, std::uint64_t seed) {
    SplitMix64 rng(seed);
    const double q =
        rng.next_u64() % 2 ? rng.next_uniform(0.15, 0.85) : rng.next_uniform(1.2, 2.8);
    BoundaryRates r{rng.next_uniform(0.2, 1.5), rng.next_uniform(0.2, 1.5),
                    rng.next_uniform(0.2, 1.5), 0.0, q, n_sites};
    return r.with_delta(solve_delta_for_class(r, m));
}

}  // namespace

TEST_SUITE("observables") {

TEST_CASE("uniform state has half filling") {
    const BoundaryRates r{0.4, 0.7, 0.9, 0.2, 0.5, 5};
    const VectorXd ones = VectorXd::Ones(r.dim());
    const VectorXd dens = density_profile(ones, r);
    for (int k = 0; k < r.n_sites; ++k) {
        CHECK(dens[k] == doctest::Approx(0.5).epsilon(1e-14));
    }
    CHECK(current(ones, r) ==
          doctest::Approx((r.alpha - r.gamma) / 2).epsilon(1e-14));
}

TEST_CASE("single-kink overlap identities") {
    for (std::uint64_t s : {21u, 22u}) {
        const BoundaryRates r = random_class_rates(5, 1, s);
        double prefactor = 1;
        for (int k = 1; k < r.n_sites; ++k) {
            prefactor *= r.gamma + r.alpha * std::pow(r.q, k - 1);
        }
        for (int n = 0; n <= r.n_sites; ++n) {
            const VectorXd v = kink_vector(KinkState{{n}}, r);
            const double overlap = v.sum();
            const double expect =
                (r.gamma + r.alpha * std::pow(r.q, n - 1)) * prefactor;
            CHECK(overlap == doctest::Approx(expect).epsilon(1e-12));

            // The current functional annihilates every kink except n = 0.
            const double j_overlap = current(v, r) * overlap;
            const double j_expect =
                r.alpha * r.gamma * (1.0 - 1.0 / r.q) * prefactor;
            if (n == 0) {
                CHECK(j_overlap == doctest::Approx(j_expect).epsilon(1e-12));
            } else {
                CHECK(std::abs(j_overlap) <= 1e-12 * std::abs(j_expect));
            }
        }
    }
}

TEST_CASE("class 0 carries no current and a factorized profile") {
    for (std::uint64_t s : {31u, 32u, 33u}) {
        const BoundaryRates r = random_class_rates(6, 0, s);
        const VectorXd phi = steady_state(r, 0);
        CHECK(std::abs(current(phi, r)) <= 1e-12);
        CHECK(std::abs(right_boundary_current(phi, r)) <= 1e-12);
        for (int b = 1; b < r.n_sites; ++b) {
            CHECK(std::abs(bond_current(phi, r, b)) <= 1e-12);
        }
        const VectorXd dens = density_profile(phi, r);
        for (int k = 1; k <= r.n_sites; ++k) {
            CHECK(std::abs(dens[k - 1] - closed_form_density_m0(r, k)) <= 1e-12);
        }
        // Monotone profile: increasing for q > 1, decreasing for q < 1.
        for (int k = 1; k < r.n_sites; ++k) {
            if (r.q > 1) {
                CHECK(dens[k] > dens[k - 1]);
            } else {
                CHECK(dens[k] < dens[k - 1]);
            }
        }
    }
}

TEST_CASE("class 1 current and density match the closed forms") {
    for (const BoundaryRates& r :
         {class_rates(1), random_class_rates(5, 1, 41), random_class_rates(6, 1, 42)}) {
        const VectorXd numeric = numeric_steady_state(r);
        const double j_closed = closed_form_current_m1(r);
        CHECK(std::abs(current(numeric, r) - j_closed) <= 1e-10);
        // Three-way agreement: closed form, chiral state, null vector.
        const VectorXd chiral = steady_state(r, 1);
        CHECK(std::abs(current(chiral, r) - j_closed) <= 1e-9);

        const VectorXd dens = density_profile(numeric, r);
        for (int k = 1; k <= r.n_sites; ++k) {
            CHECK(std::abs(dens[k - 1] - closed_form_density_m1(r, k)) <= 1e-10);
        }
    }
}

TEST_CASE("class 2 current matches the closed form") {
    for (const BoundaryRates& r :
         {class_rates(2), random_class_rates(5, 2, 51), random_class_rates(6, 2, 52)}) {
        const VectorXd numeric = numeric_steady_state(r);
        const double j_closed = closed_form_current_m2(r);
        CHECK(std::abs(current(numeric, r) - j_closed) <= 1e-10);
        const VectorXd chiral = steady_state(r, 2);
        CHECK(std::abs(current(chiral, r) - j_closed) <= 1e-9);
    }
}

TEST_CASE("stationarity equalizes the current across the chain") {
    // Not assumed anywhere in the observables: verified as a property.
    for (int m : {1, 2, 3}) {
        const BoundaryRates r = random_class_rates(6, m, 60u + m);
        const VectorXd phi = steady_state(r, m);
        const double j_left = current(phi, r);
        const double scale = std::max(std::abs(j_left), 1e-3);
        CHECK(std::abs(right_boundary_current(phi, r) - j_left) <= 1e-9 * scale);
        for (int b = 1; b < r.n_sites; ++b) {
            CHECK(std::abs(bond_current(phi, r, b) - j_left) <= 1e-9 * scale);
        }
    }
}

TEST_CASE("large-system current asymptotes") {
    // q > 1 branch: beta solved for class 1 becomes exponentially small.
    {
        BoundaryRates r{0.9, 0.0, 1.1, 0.4, 1.5, 20};
        r = r.with_beta(solve_beta_for_class(r, 1));
        REQUIRE(r.beta < 1e-2);
        const double exact = closed_form_current_m1(r);
        const double asym = large_n_current_asymptote(r, 1, r.n_sites);
        CHECK(exact > 0);
        CHECK(std::abs(asym / exact - 1.0) <= 0.05);
    }
    // q < 1 branch: delta solved for class 1, negative current.
    {
        BoundaryRates r{0.7, 0.5, 0.9, 0.0, 0.5, 14};
        r = r.with_delta(solve_delta_for_class(r, 1));
        REQUIRE(r.delta < 1e-2);
        const double exact = closed_form_current_m1(r);
        const double asym = large_n_current_asymptote(r, 1, r.n_sites);
        CHECK(exact < 0);
        CHECK(asym < 0);
        CHECK(std::abs(asym / exact - 1.0) <= 0.05);
    }
    // The class-2 asymptote is exactly (q+1) times the class-1 one.
    {
        const BoundaryRates r{0.9, 0.1, 1.1, 0.4, 1.5, 18};
        const double a1 = large_n_current_asymptote(r, 1, r.n_sites);
        const double a2 = large_n_current_asymptote(r, 2, r.n_sites);
        CHECK(a2 == doctest::Approx((r.q + 1) * a1).epsilon(1e-14));
        CHECK_THROWS_AS(large_n_current_asymptote(r, 3, r.n_sites),
                        validation_error);
    }
}

TEST_CASE("degenerate inputs are rejected") {
    const BoundaryRates r{0.4, 0.7, 0.9, 0.2, 0.5, 4};
    const VectorXd zero = VectorXd::Zero(r.dim());
    CHECK_THROWS_AS(current(zero, r), validation_error);
    CHECK_THROWS_AS(density_profile(zero, r), validation_error);
    const VectorXd ones = VectorXd::Ones(r.dim());
    CHECK_THROWS_AS(bond_current(ones, r, 0), validation_error);
    CHECK_THROWS_AS(bond_current(ones, r, 4), validation_error);
    CHECK_THROWS_AS(current(VectorXd::Ones(8), r), validation_error);
}

}  // TEST_SUITE
