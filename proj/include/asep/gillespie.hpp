#pragma once

#include <cstdint>
#include <limits>

#include "asep/types.hpp"

namespace asep {

struct SimConfig {
    BoundaryRates rates;
    std::uint64_t n_events = 0;
    // Sentinel value means "10% of n_events".
    std::uint64_t burn_in_events = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t seed = 1;
    int batch_count = 10;  // batch-means error bars; must be >= 10
};

struct SimEstimate {
    double current_mean = 0;   // left boundary: (entries - exits) / time
    double current_stderr = 0;
    VectorXd density_mean;     // time-weighted site occupations, size N
    VectorXd density_stderr;
    VectorXd bond_mean;        // net hops per unit time across bonds 1..N-1
    VectorXd bond_stderr;
    double total_time = 0;     // simulated time after burn-in
    std::uint64_t events_used = 0;
};

// Exact-clock kinetic Monte Carlo of the open chain: exponential waiting
// times from the total enabled rate, state occupation accumulated
// time-weighted before each jump.  Burn-in events are discarded; the rest
// are split into batch_count equal batches for the standard errors.  A
// single trajectory is strictly sequential and a fixed seed reproduces the
// estimate bit for bit.
SimEstimate simulate(const SimConfig& config);

}  // namespace asep
