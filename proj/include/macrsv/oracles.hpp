#pragma once

#include <functional>
#include <vector>

#include "macrsv/analysis.hpp"

namespace macrsv::reference {

// Brute-force counterparts of the analytical pieces, computed by different
// routes than the shipped formulas so the two can be checked against each
// other.

// P(R = r | m grants) by convolving the packet-length pmf m times and
// conditioning on the total fitting into the frame.
inline std::vector<double> reserved_slots_pmf_conv(int m, double q, int N) {
    std::vector<double> out(N + 1, 0.0);
    if (m == 0) {
        out[0] = 1.0;
        return out;
    }
    std::vector<double> len = packet_length_pmf(q, N);
    std::vector<double> conv(1, 1.0);  // distribution of the running sum
    for (int k = 0; k < m; ++k) {
        std::vector<double> next(conv.size() + N, 0.0);
        for (std::size_t s = 0; s < conv.size(); ++s) {
            if (conv[s] == 0.0) continue;
            for (int l = 1; l <= N; ++l) next[s + l] += conv[s] * len[l];
        }
        conv.swap(next);
    }
    double kept = 0.0;
    for (int r = 0; r <= N && r < static_cast<int>(conv.size()); ++r) kept += conv[r];
    if (kept <= 0.0) return out;
    for (int r = 0; r <= N && r < static_cast<int>(conv.size()); ++r) out[r] = conv[r] / kept;
    return out;
}

// Per-triple grant probability by the explicit double sum over reservation
// levels and binomial dropout counts (the shipped version collapses the inner
// sum analytically).
inline double success_prob_double_sum(int m, long n_c, const AnalysisParams& par) {
    const int N = par.data_slots_N;
    long n_rem = n_c - m;
    if (n_rem <= 0 || m > N) return 0.0;
    if (m == 0) return single_transmitter_prob(static_cast<double>(n_c), par.p);
    std::vector<double> pr = reserved_slots_pmf(m, par.q, N);
    double total = 0.0;
    for (int r = m; r <= N; ++r) {
        if (pr[r] == 0.0) continue;
        double s = dropout_prob(r, par.q, N);
        double binom = std::pow(1.0 - s, static_cast<double>(n_rem));  // P(0 dropouts)
        double inner = 0.0;
        for (long nd = 0; nd <= n_rem; ++nd) {
            long active = n_rem - nd;
            inner += binom * single_transmitter_prob(static_cast<double>(active), par.p);
            if (nd < n_rem && s > 0.0 && s < 1.0)
                binom *= static_cast<double>(n_rem - nd) / static_cast<double>(nd + 1) * s /
                         (1.0 - s);
            else if (s >= 1.0)
                binom = nd + 1 == n_rem ? 1.0 : 0.0;
            else
                binom = 0.0;
        }
        total += pr[r] * inner;
    }
    return total;
}

// Per-triple grant probability by exhaustive per-contender outcome
// enumeration: each residual contender independently drops out, transmits, or
// stays silent; success means exactly one transmitter. 3^n_rem branches.
inline double success_prob_event_enum(int m, long n_c, const AnalysisParams& par) {
    const int N = par.data_slots_N;
    long n_rem = n_c - m;
    if (n_rem <= 0 || m > N) return 0.0;
    std::vector<double> pr = reserved_slots_pmf(m, par.q, N);
    double total = 0.0;
    for (int r = m == 0 ? 0 : m; r <= N; ++r) {
        if (pr[r] == 0.0) continue;
        double s = m == 0 ? 0.0 : dropout_prob(r, par.q, N);
        std::function<double(long, int)> walk = [&](long left, int transmitters) -> double {
            if (transmitters > 1) return 0.0;
            if (left == 0) return transmitters == 1 ? 1.0 : 0.0;
            double acc = 0.0;
            acc += s * walk(left - 1, transmitters);                          // dropped out
            acc += (1.0 - s) * par.p * walk(left - 1, transmitters + 1);      // transmits
            acc += (1.0 - s) * (1.0 - par.p) * walk(left - 1, transmitters);  // stays silent
            return acc;
        };
        total += pr[r] * walk(n_rem, 0);
    }
    return total;
}

// Frame-level grant distribution by enumerating every ordered
// success/failure pattern over the K triples, with an injectable per-state
// success probability.
inline std::vector<double> successes_pmf_enum(
    long n_c, const AnalysisParams& par, const std::function<double(int)>& succ_prob) {
    const int jmax = static_cast<int>(
        std::min<long>(n_c, std::min(par.triples_K, par.data_slots_N)));
    std::vector<double> dist(jmax + 1, 0.0);
    std::function<void(int, int, double)> walk = [&](int triple, int j, double prob) {
        if (triple == par.triples_K) {
            dist[j] += prob;
            return;
        }
        double ps = j < jmax ? succ_prob(j) : 0.0;
        if (ps > 0.0) walk(triple + 1, j + 1, prob * ps);
        walk(triple + 1, j, prob * (1.0 - ps));
    };
    walk(0, 0, 1.0);
    return dist;
}

inline std::vector<double> binomial_pmf(int n, double p) {
    std::vector<double> out(n + 1, 0.0);
    if (p >= 1.0) {
        out[n] = 1.0;
        return out;
    }
    double term = std::pow(1.0 - p, n);
    for (int k = 0; k <= n; ++k) {
        out[k] = term;
        if (k < n)
            term *= static_cast<double>(n - k) / static_cast<double>(k + 1) * p / (1.0 - p);
    }
    return out;
}

}  // namespace macrsv::reference
