#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "macrsv/analysis.hpp"
#include "macrsv/errors.hpp"
#include "macrsv/rng.hpp"

namespace macrsv {

struct InfPopParams {
    double q = 0.5;      // packet-length geometric parameter
    double p = 0.175;    // per-triple contention probability
    int triples_K = 14;
    int data_slots_N = 25;
    double load = 1.0;   // mean packet arrivals per frame

    void validate() const {
        if (q < 0.0 || q >= 1.0) throw ConfigError("q must be in [0, 1)");
        if (p <= 0.0 || p > 1.0) throw ConfigError("p must be in (0, 1]");
        if (triples_K < 1 || data_slots_N < 1) throw ConfigError("K and N must be >= 1");
        if (load < 0.0) throw ConfigError("load must be >= 0");
    }
};

struct InfPopFrame {
    long contenders = 0;  // backlog at the start of the frame
    int successes = 0;    // requests granted during the frame
    int reserved = 0;     // data slots reserved during the frame
};

// Backlog Monte Carlo with every contender held explicitly, but collapsed to
// per-length counts: within a triple only the exactly-one-transmitter event
// changes state, so that event is drawn directly with its probability and the
// winner picked in proportion to the counts. Per-frame cost is O(K + N)
// regardless of backlog size.
inline std::vector<InfPopFrame> run_infinite_population(const InfPopParams& par, long frames,
                                                        std::uint64_t seed) {
    par.validate();
    const int N = par.data_slots_N;
    const int K = par.triples_K;
    Rng rng(seed);

    std::vector<double> cdf(N + 1, 0.0);
    for (int l = 1; l <= N; ++l)
        cdf[l] = cdf[l - 1] + truncated_geometric_pmf(l, par.q, N);
    cdf[N] = 1.0;

    std::vector<long> counts(N + 1, 0);  // counts[l] = backlogged packets of length l
    std::vector<InfPopFrame> out;
    out.reserve(frames);

    for (long f = 0; f < frames; ++f) {
        long n_c = 0;
        for (int l = 1; l <= N; ++l) n_c += counts[l];

        int reserved = 0;
        int successes = 0;
        for (int k = 0; k < K; ++k) {
            int room = N - reserved;
            if (room <= 0) continue;
            long active = 0;
            for (int l = 1; l <= room && l <= N; ++l) active += counts[l];
            if (active == 0) continue;
            double g = single_transmitter_prob(static_cast<double>(active), par.p);
            if (!rng.bernoulli(g)) continue;
            std::uint64_t u = rng.below(static_cast<std::uint64_t>(active));
            int winner = 0;
            for (int l = 1; l <= room; ++l) {
                if (u < static_cast<std::uint64_t>(counts[l])) {
                    winner = l;
                    break;
                }
                u -= static_cast<std::uint64_t>(counts[l]);
            }
            counts[winner] -= 1;
            reserved += winner;
            successes += 1;
        }
        out.push_back({n_c, successes, reserved});

        int arrivals = rng.poisson(par.load);
        for (int a = 0; a < arrivals; ++a) {
            double u = rng.uniform01();
            int l = 1;
            while (l < N && u >= cdf[l]) ++l;
            counts[l] += 1;
        }
    }
    return out;
}

}  // namespace macrsv
