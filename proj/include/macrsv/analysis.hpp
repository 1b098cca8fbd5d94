#pragma once

#include <cmath>
#include <cstdio>
#include <vector>

#include "macrsv/errors.hpp"

namespace macrsv {

struct AnalysisParams {
    double q = 0.5;      // packet-length geometric parameter
    double p = 0.175;    // per-triple contention probability
    int triples_K = 14;
    int data_slots_N = 25;
    double load = 1.0;   // mean packet arrivals per frame

    int n_max = 0;                    // 0 = derive from load, then auto-raise
    double tol = 1e-8;
    long max_iterations = 200000;
    double truncation_bound = 1e-6;   // may be +inf to force a fixed n_max through
    int n_max_cap = 1024;

    void validate() const {
        if (q < 0.0 || q >= 1.0) throw ConfigError("q must be in [0, 1)");
        if (p <= 0.0 || p > 1.0) throw ConfigError("p must be in (0, 1]");
        if (triples_K < 1 || data_slots_N < 1) throw ConfigError("K and N must be >= 1");
        if (load < 0.0) throw ConfigError("load must be >= 0");
        if (n_max < 0) throw ConfigError("n_max must be >= 0");
        if (tol <= 0.0) throw ConfigError("tol must be > 0");
        if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    }
};

// P(L = l), l in 1..N: geometric with ratio q truncated to the frame.
inline std::vector<double> packet_length_pmf(double q, int N) {
    std::vector<double> pmf(N + 1, 0.0);
    if (q == 0.0) {
        pmf[1] = 1.0;
        return pmf;
    }
    double w = 1.0, total = 0.0;
    for (int l = 1; l <= N; ++l, w *= q) {
        pmf[l] = w;
        total += w;
    }
    for (int l = 1; l <= N; ++l) pmf[l] /= total;
    return pmf;
}

inline double truncated_geometric_pmf(int l, double q, int N) {
    if (l < 1 || l > N) return 0.0;
    if (q == 0.0) return l == 1 ? 1.0 : 0.0;
    return std::pow(q, l - 1) * (1.0 - q) / (1.0 - std::pow(q, N));
}

// P(R = r | m granted requests), r in m..N: weights C(r-1, m-1) q^(r-m)
// normalized over the slots that fit in the frame. Computed with the running
// ratio w(r+1)/w(r) = q r / (r - m + 1).
inline std::vector<double> reserved_slots_pmf(int m, double q, int N) {
    std::vector<double> pmf(N + 1, 0.0);
    if (m == 0) {
        pmf[0] = 1.0;
        return pmf;
    }
    if (m > N) return pmf;
    double w = 1.0, total = 0.0;
    for (int r = m; r <= N; ++r) {
        pmf[r] = w;
        total += w;
        w *= q * static_cast<double>(r) / static_cast<double>(r - m + 1);
    }
    for (int r = m; r <= N; ++r) pmf[r] /= total;
    return pmf;
}

// Probability that a residual contender's packet no longer fits when r slots
// are reserved: P(L > N - r) under the truncated geometric.
inline double dropout_prob(int r, double q, int N) {
    if (r <= 0) return 0.0;
    if (r >= N) return 1.0;
    if (q == 0.0) return 0.0;  // unit-length packets always fit while r < N
    return 1.0 - (1.0 - std::pow(q, N - r)) / (1.0 - std::pow(q, N));
}

// P(exactly one of n contenders transmits), each independently with
// probability p. Evaluated in log space so huge n underflows to 0.
inline double single_transmitter_prob(double n, double p) {
    if (n <= 0.0) return 0.0;
    if (n == 1.0) return p;
    if (p >= 1.0) return 0.0;
    return std::exp(std::log(n * p) + (n - 1.0) * std::log1p(-p));
}

// Probability that the next signaling triple produces a grant, given m grants
// so far out of n_c frame-start contenders. Dropout at reservation level r
// thins each residual contender's coin to p (1 - s(r)), so the binomial sum
// over dropout counts collapses to a single-transmitter event at the thinned
// rate.
inline double success_prob(int m, long n_c, const AnalysisParams& par) {
    const int N = par.data_slots_N;
    long n_rem = n_c - m;
    if (n_rem <= 0 || m > N) return 0.0;
    if (m == 0) return single_transmitter_prob(static_cast<double>(n_c), par.p);
    std::vector<double> pr = reserved_slots_pmf(m, par.q, N);
    double total = 0.0;
    for (int r = m; r <= N; ++r) {
        if (pr[r] == 0.0) continue;
        double thinned = par.p * (1.0 - dropout_prob(r, par.q, N));
        total += pr[r] * single_transmitter_prob(static_cast<double>(n_rem), thinned);
    }
    return total;
}

// P(J = j | n_c contenders), J = grants in one frame of K triples: forward
// recursion over the triples, success probability depending only on the
// grants so far.
inline std::vector<double> successes_pmf(long n_c, const AnalysisParams& par) {
    const int jmax = static_cast<int>(
        std::min<long>(n_c, std::min(par.triples_K, par.data_slots_N)));
    std::vector<double> ps(jmax, 0.0);
    for (int j = 0; j < jmax; ++j) ps[j] = success_prob(j, n_c, par);
    std::vector<double> dp(jmax + 1, 0.0);
    dp[0] = 1.0;
    for (int k = 0; k < par.triples_K; ++k) {
        for (int j = jmax; j >= 0; --j) {
            double stay = j < jmax ? dp[j] * (1.0 - ps[j]) : dp[j];
            double win = j >= 1 ? dp[j - 1] * ps[j - 1] : 0.0;
            dp[j] = stay + win;
        }
    }
    return dp;
}

struct TransitionMatrix {
    std::vector<std::vector<double>> rows;  // (n_max+1) x (n_max+1), rows sum to 1
    std::vector<double> row_tail;           // per-row mass clamped into column n_max
};

// Contender-count chain over one frame: n' = n - J + A with A Poisson(load).
// Probability mass that would land beyond n_max is folded into the last
// column and reported per row.
inline TransitionMatrix transition_matrix(const AnalysisParams& par) {
    par.validate();
    const int S = par.n_max;
    const int K = par.triples_K;
    const int amax = S + K + 1;

    std::vector<double> pois(amax + 1, 0.0);
    pois[0] = std::exp(-par.load);
    for (int a = 1; a <= amax; ++a) pois[a] = pois[a - 1] * par.load / a;
    std::vector<double> pois_tail(amax + 2, 0.0);  // P(A > a)
    double cum = 0.0;
    for (int a = 0; a <= amax; ++a) {
        cum += pois[a];
        pois_tail[a] = std::max(0.0, 1.0 - cum);
    }

    TransitionMatrix tm;
    tm.rows.assign(S + 1, std::vector<double>(S + 1, 0.0));
    tm.row_tail.assign(S + 1, 0.0);
    for (int i = 0; i <= S; ++i) {
        std::vector<double> pj = successes_pmf(i, par);
        auto& row = tm.rows[i];
        double tail = 0.0;
        for (int j = 0; j < static_cast<int>(pj.size()); ++j) {
            if (pj[j] == 0.0) continue;
            int base = i - j;  // post-grant backlog; arrivals shift it upward
            for (int next = base; next <= S; ++next) row[next] += pj[j] * pois[next - base];
            tail += pj[j] * pois_tail[S - base];
        }
        row[S] += tail;  // mass beyond n_max folds into the last column
        tm.row_tail[i] = tail;
    }
    return tm;
}

struct StationaryResult {
    std::vector<double> pi;
    double residual = 0.0;
    long iterations = 0;
};

// Power iteration started from the empty-system state. On loads with a
// reachable low-backlog regime this settles there; when the chain drains
// toward saturation the iteration follows it and the truncation mass exposes
// the drift.
inline StationaryResult stationary_distribution(const TransitionMatrix& tm, double tol,
                                                long max_iterations) {
    const int S = static_cast<int>(tm.rows.size()) - 1;
    std::vector<double> x(S + 1, 0.0), next(S + 1, 0.0);
    x[0] = 1.0;
    double residual = 0.0;
    for (long it = 1; it <= max_iterations; ++it) {
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i <= S; ++i) {
            if (x[i] == 0.0) continue;
            const auto& row = tm.rows[i];
            for (int j = 0; j <= S; ++j) next[j] += x[i] * row[j];
        }
        residual = 0.0;
        for (int j = 0; j <= S; ++j) residual = std::max(residual, std::abs(next[j] - x[j]));
        x.swap(next);
        if (residual <= tol) return {x, residual, it};
    }
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "stationary iteration residual %.3g after %ld iterations", residual,
                  max_iterations);
    throw NoConvergence(msg, residual, max_iterations);
}

struct MarkovModel {
    AnalysisParams params;  // with the resolved n_max
    TransitionMatrix tm;
    std::vector<double> pi;
    double residual = 0.0;
    long iterations = 0;
    double truncation_mass = 0.0;  // pi-weighted clamped flux
    double worst_row_tail = 0.0;   // max over rows of the clamped tail
};

inline int default_n_max(const AnalysisParams& par) {
    return 8 * static_cast<int>(std::ceil(std::max(par.load, 1.0))) + par.triples_K + 20;
}

// Builds the truncated chain, doubling n_max until the stationary truncation
// flux is within bound (or the cap is hit). An explicit n_max is used as
// given and only checked against the bound.
inline MarkovModel build_model(AnalysisParams par) {
    par.validate();
    const bool fixed = par.n_max > 0;
    int n = fixed ? par.n_max : default_n_max(par);
    for (;;) {
        AnalysisParams cur = par;
        cur.n_max = n;
        MarkovModel model;
        model.params = cur;
        model.tm = transition_matrix(cur);
        StationaryResult st = stationary_distribution(model.tm, cur.tol, cur.max_iterations);
        model.pi = std::move(st.pi);
        model.residual = st.residual;
        model.iterations = st.iterations;
        double mass = 0.0, worst = 0.0;
        for (int i = 0; i <= n; ++i) {
            mass += model.pi[i] * model.tm.row_tail[i];
            worst = std::max(worst, model.tm.row_tail[i]);
        }
        model.truncation_mass = mass;
        model.worst_row_tail = worst;
        if (mass <= par.truncation_bound) return model;
        if (!fixed && 2 * n <= par.n_max_cap) {
            n *= 2;
            continue;
        }
        char msg[160];
        std::snprintf(msg, sizeof(msg),
                      "truncation mass %.3g exceeds bound %.3g at n_max %d", mass,
                      par.truncation_bound, n);
        throw TruncationError(msg, mass, n);
    }
}

struct Utilization {
    std::vector<double> reserved_pmf;  // stationary P(R = r), r in 0..N
    double expected = 0.0;             // stationary E[R] / N
};

inline Utilization utilization(const MarkovModel& model) {
    const auto& par = model.params;
    const int N = par.data_slots_N;
    Utilization u;
    u.reserved_pmf.assign(N + 1, 0.0);
    for (int i = 0; i <= par.n_max; ++i) {
        if (model.pi[i] == 0.0) continue;
        std::vector<double> pj = successes_pmf(i, par);
        for (int j = 0; j < static_cast<int>(pj.size()); ++j) {
            if (pj[j] == 0.0) continue;
            std::vector<double> pr = reserved_slots_pmf(j, par.q, N);
            for (int r = 0; r <= N; ++r) u.reserved_pmf[r] += model.pi[i] * pj[j] * pr[r];
        }
    }
    double mean_r = 0.0;
    for (int r = 0; r <= N; ++r) mean_r += r * u.reserved_pmf[r];
    u.expected = mean_r / N;
    return u;
}

}  // namespace macrsv
