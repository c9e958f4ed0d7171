#ifndef COPOLEM_FREQUENCIES_HPP
#define COPOLEM_FREQUENCIES_HPP

// Optimal block-type frequencies for coarse diagonal paths through a random
// A/B block field on a torus. Each step moves one column right and one row
// up or down; an up-move from corner (col, row) crosses the block (col, row)
// with the block below as its interface neighbor, a down-move crosses
// (col, row-1) with (col, row) above. The path maximizes, lexicographically,
// (number of A crossings, number of B-over-A crossings); integer DP, exact
// per field sample.

#include <cstdint>
#include <utility>
#include <vector>

#include "numeric.hpp"
#include "rng.hpp"

namespace copolem {

struct FreqConfig {
    double p = 0.5;        // density of A blocks
    int M = 512;           // torus side
    int T = 2048;          // path length in columns
    int samples = 8;
    std::uint64_t seed = 1;
};

struct FreqResult {
    double rho_A = 0, rho_BA = 0, rho_BB = 0;
    double stderr_A = 0, stderr_BA = 0;
    int samples = 0;
};

namespace detail {

struct LexPair {
    std::int64_t a = 0, ba = 0;
    bool operator<(const LexPair& o) const
    {
        return a != o.a ? a < o.a : ba < o.ba;
    }
    LexPair operator+(const LexPair& o) const { return {a + o.a, ba + o.ba}; }
};

} // namespace detail

// One field sample: returns (max A crossings, max BA crossings among
// A-optimal paths) over all length-T paths, any start row.
inline detail::LexPair optimal_crossings(const std::vector<std::vector<bool>>& isA, int T)
{
    const int M = static_cast<int>(isA.size());
    std::vector<detail::LexPair> dp(M, {0, 0}), nx(M);
    for (int t = 0; t < T; ++t) {
        const int col = t % M;
        const auto& colA = isA[col];
        for (int y = 0; y < M; ++y) nx[y] = {INT64_MIN, 0};
        for (int y = 0; y < M; ++y) {
            const int up = (y + 1) % M, dn = (y + M - 1) % M;
            bool crossedU = colA[y];            // up-move crosses (col, y)
            bool belowU = colA[dn];             // neighbor below
            detail::LexPair su{crossedU ? 1 : 0, (!crossedU && belowU) ? 1 : 0};
            bool crossedD = colA[dn];           // down-move crosses (col, y-1)
            bool aboveD = colA[y];
            detail::LexPair sd{crossedD ? 1 : 0, (!crossedD && aboveD) ? 1 : 0};
            if (nx[up] < dp[y] + su) nx[up] = dp[y] + su;
            if (nx[dn] < dp[y] + sd) nx[dn] = dp[y] + sd;
        }
        dp.swap(nx);
    }
    detail::LexPair best{INT64_MIN, 0};
    for (const auto& v : dp)
        if (best < v) best = v;
    return best;
}

inline std::vector<std::vector<bool>> sample_field(int M, double p, std::uint64_t seed)
{
    SplitMix64 rng(seed);
    std::vector<std::vector<bool>> isA(M, std::vector<bool>(M));
    for (int c = 0; c < M; ++c)
        for (int y = 0; y < M; ++y) isA[c][y] = rng.next_double() < p;
    return isA;
}

inline FreqResult optimal_frequencies(const FreqConfig& cfg)
{
    std::vector<double> rA(cfg.samples), rBA(cfg.samples);
    for (int j = 0; j < cfg.samples; ++j) {
        auto field = sample_field(cfg.M, cfg.p, stream_seed(cfg.seed, j));
        auto best = optimal_crossings(field, cfg.T);
        rA[j] = static_cast<double>(best.a) / cfg.T;
        rBA[j] = static_cast<double>(best.ba) / cfg.T;
    }
    FreqResult out;
    out.rho_A = mean(rA);
    out.rho_BA = mean(rBA);
    out.rho_BB = 1.0 - out.rho_A - out.rho_BA;
    out.stderr_A = stderr_of_mean(rA);
    out.stderr_BA = stderr_of_mean(rBA);
    out.samples = cfg.samples;
    return out;
}

} // namespace copolem

#endif
