#include "asep/gillespie.hpp"

#include <cmath>
#include <cstdint>
#include <vector>

#include "asep/rng.hpp"

namespace asep {

namespace {

struct Transition {
    double rate;
    std::uint64_t next_state;
    int bond;      // 1..N-1 for bulk hops, 0 otherwise
    int bond_dir;  // +1 right hop, -1 left hop
    int left_dir;  // +1 entry at site 1, -1 exit at site 1
};

struct BatchAccum {
    double time = 0;
    VectorXd occupancy;
    VectorXd bond_net;
    double left_net = 0;
};

double batch_stderr(const std::vector<double>& means) {
    const auto b = static_cast<double>(means.size());
    double mean = 0;
    for (double m : means) mean += m;
    mean /= b;
    double var = 0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= (b - 1.0);
    return std::sqrt(var / b);
}

}  // namespace

SimEstimate simulate(const SimConfig& config) {
    const BoundaryRates& r = config.rates;
    r.validate();
    r.require_positive();
    if (config.n_events == 0) throw validation_error("n_events must be > 0");
    if (config.batch_count < 10) {
        throw validation_error("batch_count must be >= 10");
    }
    std::uint64_t burn = config.burn_in_events;
    if (burn == std::numeric_limits<std::uint64_t>::max()) {
        burn = config.n_events / 10;
    }
    if (burn >= config.n_events) {
        throw validation_error("n_events must exceed burn_in_events");
    }

    const int n = r.n_sites;
    const std::uint64_t measured = config.n_events - burn;
    const auto nb = static_cast<std::uint64_t>(config.batch_count);
    if (measured < nb) {
        throw validation_error("fewer measured events than batches");
    }
    // Batch b covers measured-event indices [floor(b*measured/nb),
    // floor((b+1)*measured/nb)).
    std::vector<std::uint64_t> bounds(nb + 1);
    for (std::uint64_t b = 0; b <= nb; ++b) bounds[b] = b * measured / nb;

    std::vector<BatchAccum> batch(nb);
    for (BatchAccum& a : batch) {
        a.occupancy = VectorXd::Zero(n);
        a.bond_net = VectorXd::Zero(n - 1);
    }

    SplitMix64 rng(config.seed);
    std::uint64_t state = 0;  // empty chain
    const double hop_right = r.q / (r.q + 1.0);
    const double hop_left = 1.0 / (r.q + 1.0);
    std::vector<Transition> enabled;
    enabled.reserve(static_cast<std::size_t>(n + 1));

    std::uint64_t batch_idx = 0;
    for (std::uint64_t ev = 0; ev < config.n_events; ++ev) {
        enabled.clear();
        const auto bit = [&](int site) {
            return static_cast<int>((state >> (n - site)) & 1ULL);
        };
        if (bit(1) == 0) {
            enabled.push_back({r.alpha, state | (1ULL << (n - 1)), 0, 0, +1});
        } else {
            enabled.push_back({r.gamma, state & ~(1ULL << (n - 1)), 0, 0, -1});
        }
        for (int k = 1; k <= n - 1; ++k) {
            const int b1 = bit(k);
            const int b2 = bit(k + 1);
            if (b1 == b2) continue;
            const std::uint64_t mask =
                (1ULL << (n - k)) | (1ULL << (n - k - 1));
            if (b1 == 1) {
                enabled.push_back({hop_right, state ^ mask, k, +1, 0});
            } else {
                enabled.push_back({hop_left, state ^ mask, k, -1, 0});
            }
        }
        if (bit(n) == 0) {
            enabled.push_back({r.delta, state | 1ULL, 0, 0, 0});
        } else {
            enabled.push_back({r.beta, state & ~1ULL, 0, 0, 0});
        }

        double total = 0;
        for (const Transition& t : enabled) total += t.rate;
        if (!(total > 0)) throw numerical_error("zero total transition rate");

        const double dt = -std::log1p(-rng.next_unit()) / total;
        const bool measuring = ev >= burn;
        BatchAccum* acc = nullptr;
        if (measuring) {
            const std::uint64_t mi = ev - burn;
            while (batch_idx + 1 < nb && mi >= bounds[batch_idx + 1]) ++batch_idx;
            acc = &batch[batch_idx];
            acc->time += dt;
            for (int site = 1; site <= n; ++site) {
                if (bit(site)) acc->occupancy[site - 1] += dt;
            }
        }

        double pick = rng.next_unit() * total;
        const Transition* chosen = &enabled.back();
        for (const Transition& t : enabled) {
            pick -= t.rate;
            if (pick < 0) {
                chosen = &t;
                break;
            }
        }
        if (measuring) {
            if (chosen->left_dir != 0) acc->left_net += chosen->left_dir;
            if (chosen->bond != 0) acc->bond_net[chosen->bond - 1] += chosen->bond_dir;
        }
        state = chosen->next_state;
    }

    double time_total = 0;
    double left_total = 0;
    VectorXd occ_total = VectorXd::Zero(n);
    VectorXd bond_total = VectorXd::Zero(n - 1);
    for (const BatchAccum& a : batch) {
        time_total += a.time;
        left_total += a.left_net;
        occ_total += a.occupancy;
        bond_total += a.bond_net;
    }
    if (!(time_total > 0)) throw numerical_error("zero simulated time");

    SimEstimate est;
    est.total_time = time_total;
    est.events_used = measured;
    est.current_mean = left_total / time_total;
    est.density_mean = occ_total / time_total;
    est.bond_mean = bond_total / time_total;

    std::vector<double> means(nb);
    for (std::uint64_t b = 0; b < nb; ++b) {
        means[b] = batch[b].left_net / batch[b].time;
    }
    est.current_stderr = batch_stderr(means);
    est.density_stderr = VectorXd::Zero(n);
    for (int site = 0; site < n; ++site) {
        for (std::uint64_t b = 0; b < nb; ++b) {
            means[b] = batch[b].occupancy[site] / batch[b].time;
        }
        est.density_stderr[site] = batch_stderr(means);
    }
    est.bond_stderr = VectorXd::Zero(n - 1);
    for (int k = 0; k < n - 1; ++k) {
        for (std::uint64_t b = 0; b < nb; ++b) {
            means[b] = batch[b].bond_net[k] / batch[b].time;
        }
        est.bond_stderr[k] = batch_stderr(means);
    }
    return est;
}

}  // namespace asep
