#ifndef COPOLEM_FINITE_MODEL_HPP
#define COPOLEM_FINITE_MODEL_HPP

// Finite-size oracle for the full emulsion model: the exact log-partition
// function of an n-step corner-confined path in a sampled block field with a
// sampled monomer sequence. Used to validate the variational solvers.
//
// Geometry. The path starts at the origin, which is the shared corner of
// block column 0 at level 0. A crossing entered at corner (cL, hL) stays
// inside the two blocks at levels {h-1, h} of column c and ends with a right
// step into one of the diagonally opposite corners ((c+1)L, (h+1)L) or
// ((c+1)L, (h-1)L). The final crossing may be left incomplete.
//
// Edge-to-block assignment (boundary convention, fixed here and mirrored by
// the enumeration oracle): blocks own their upper y-boundary, so a
// horizontal step at height y belongs to the block below unless y is the
// pair's bottom boundary, which clamps into the pair; an up step from y
// belongs to the block containing (y, y+1); a down step to (y-1, y).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "numeric.hpp"
#include "rng.hpp"

namespace copolem {

struct FiniteInstance {
    int n = 0;             // steps
    int L = 0;             // block side
    double alpha = 0, beta = 0;
    std::vector<bool> omegaA; // 1-indexed monomer types, true = A
    std::vector<bool> fieldA; // block types, row-major over (column, level)
    int c_max = 0;            // columns 0..c_max
    int h_cap = 0;            // entry levels |h| <= h_cap; exact iff not binding
    bool capped = false;      // true when h_cap < c_max + 1

    bool type_is_oil(int c, int lv) const
    {
        // levels stored in [-(h_cap+1), h_cap]
        return fieldA[static_cast<std::size_t>(c) * (2 * h_cap + 2)
                      + (lv + h_cap + 1)];
    }
};

// Deterministic instance from a seed: monomers fair A/B, blocks oil with
// probability p. The level cap defaults to 16, which is non-binding (the
// model is exact) whenever n <= 30 L.
inline FiniteInstance make_finite_instance(int n, int L, double alpha, double beta,
                                           double p, std::uint64_t seed,
                                           int h_cap = 16)
{
    if (L < 4) throw std::domain_error("make_finite_instance: need L >= 4");
    if (n < 2 * L) throw std::domain_error("make_finite_instance: need n >= 2L");
    if (p <= 0.0 || p >= 1.0) throw std::domain_error("make_finite_instance: need p in (0,1)");
    FiniteInstance inst;
    inst.n = n;
    inst.L = L;
    inst.alpha = alpha;
    inst.beta = beta;
    inst.c_max = n / (2 * L);
    inst.h_cap = std::min(h_cap, inst.c_max + 1);
    inst.capped = inst.h_cap < inst.c_max + 1;
    SplitMix64 omega_rng(stream_seed(seed, 1));
    inst.omegaA.resize(n + 1);
    for (int i = 1; i <= n; ++i) inst.omegaA[i] = omega_rng.next_bool();
    SplitMix64 field_rng(stream_seed(seed, 2));
    inst.fieldA.resize(static_cast<std::size_t>(inst.c_max + 1) * (2 * inst.h_cap + 2));
    for (auto&& cell : inst.fieldA) cell = field_rng.next_double() < p;
    return inst;
}

// (1/n) log Z by a forward DP over slices of states
//   (c: column, h: entry level of the current crossing,
//    u in [0, L-1]: x-offset from the entry corner,
//    v in [-L, L]: y-offset from the entry corner,
//    d: last step direction, vertical reversals forbidden).
// A right step from u = L-1 landing at v = +-L exits into the next column's
// entry state (c+1, h +- 1, 0, 0). Weights rescale by the slice maximum.
inline double finite_log_partition(const FiniteInstance& inst)
{
    const int n = inst.n, L = inst.L, C = inst.c_max, H = inst.h_cap;
    // u runs to L inclusive: u = L with |v| < L is a valid path endpoint
    // (still confined) that admits no continuation
    const int nh = 2 * H + 1, nu = L + 1, nv = 2 * L + 1;
    const std::size_t n_states = static_cast<std::size_t>(C + 1) * nh * nu * nv * 3;
    if (n_states > 80'000'000)
        throw std::runtime_error("finite_log_partition: state space too large ("
                                 + std::to_string(n_states)
                                 + " states); reduce n or L, or lower h_cap");
    enum { U = 0, D = 1, R = 2 };
    auto idx = [&](int c, int h, int u, int v, int d) {
        return (((static_cast<std::size_t>(c) * nh + (h + H)) * nu + u) * nv
                + (v + L)) * 3 + d;
    };
    std::vector<double> cur(n_states, 0.0), nxt(n_states, 0.0);
    cur[idx(0, 0, 0, 0, R)] = 1.0;
    double logscale = 0.0;

    // water-step weight for the i-th monomer (oil steps weigh 1)
    auto water_w = [&](int i) {
        return inst.omegaA[i] ? std::exp(-inst.alpha) : std::exp(inst.beta);
    };

    for (int i = 0; i < n; ++i) {
        const double w_wet = water_w(i + 1);
        const int c_hi = std::min(C, i / (2 * L)); // reachable columns
        std::fill(nxt.begin(), nxt.end(), 0.0);
        for (int c = 0; c <= c_hi; ++c) {
            const int h_lo = std::max(-H, -(c + 1)), h_hi = std::min(H, c + 1);
            for (int h = h_lo; h <= h_hi; ++h) {
                // block weights for the two levels of this pair
                const double w_low = inst.type_is_oil(c, h - 1) ? 1.0 : w_wet;
                const double w_high = inst.type_is_oil(c, h) ? 1.0 : w_wet;
                for (int u = 0; u < L; ++u) // u = L states have no moves
                    for (int v = -L; v <= L; ++v) {
                        const std::size_t b = idx(c, h, u, v, 0);
                        const double wU = cur[b + U], wD = cur[b + D], wR = cur[b + R];
                        if (wU == 0.0 && wD == 0.0 && wR == 0.0) continue;
                        // up step: edge (v, v+1), in the upper block iff v >= 0
                        if (v + 1 <= L) {
                            const double w = (v >= 0 ? w_high : w_low) * (wU + wR);
                            if (w != 0.0) nxt[idx(c, h, u, v + 1, U)] += w;
                        }
                        // down step: edge (v-1, v), in the upper block iff v > 0
                        if (v - 1 >= -L) {
                            const double w = (v > 0 ? w_high : w_low) * (wD + wR);
                            if (w != 0.0) nxt[idx(c, h, u, v - 1, D)] += w;
                        }
                        // right step at height v, below-block unless clamped
                        const double w = (v > 0 ? w_high : w_low) * (wU + wD + wR);
                        if (w == 0.0) continue;
                        if (u + 1 < L) {
                            nxt[idx(c, h, u + 1, v, R)] += w;
                        } else if (v == L || v == -L) {
                            // exit into the diagonally opposite corner
                            const int h2 = h + (v == L ? 1 : -1);
                            if (c + 1 <= C && std::abs(h2) <= H)
                                nxt[idx(c + 1, h2, 0, 0, R)] += w;
                        } else {
                            // confined endpoint on the column boundary; a
                            // valid n-th step, but no continuation exists
                            nxt[idx(c, h, L, v, R)] += w;
                        }
                    }
            }
        }
        double m = 0.0;
        for (double w : nxt) m = std::max(m, w);
        if (m <= 0.0) throw std::runtime_error("finite_log_partition: dead DP layer");
        for (double& w : nxt) w /= m;
        logscale += std::log(m);
        cur.swap(nxt);
    }
    double total = 0.0;
    for (double w : cur) total += w;
    return (logscale + std::log(total)) / n;
}

// --- convergence study --------------------------------------------------------

struct ConvergenceRung {
    int n = 0, L = 0;
    double mean = 0;
    double spread = 0; // sample standard deviation across seeds
    int seeds = 0;
    std::vector<double> values;
};

// Runs the finite oracle over a ladder of (n, L) with several seeds each and
// reports per-rung mean and seed-to-seed spread (self-averaging check).
inline std::vector<ConvergenceRung>
convergence_study(double alpha, double beta, double p,
                  const std::vector<std::pair<int, int>>& ladder,
                  int seeds, std::uint64_t base_seed = 1)
{
    if (ladder.empty()) throw std::domain_error("convergence_study: empty ladder");
    if (seeds < 2) throw std::domain_error("convergence_study: need >= 2 seeds");
    std::vector<ConvergenceRung> out;
    for (auto [n, L] : ladder) {
        ConvergenceRung rung;
        rung.n = n; rung.L = L; rung.seeds = seeds;
        for (int s = 0; s < seeds; ++s) {
            auto inst = make_finite_instance(n, L, alpha, beta, p,
                                             stream_seed(base_seed, s));
            rung.values.push_back(finite_log_partition(inst));
        }
        rung.mean = mean(rung.values);
        double ss = 0.0;
        for (double v : rung.values) ss += (v - rung.mean) * (v - rung.mean);
        rung.spread = std::sqrt(ss / (seeds - 1));
        out.push_back(std::move(rung));
    }
    return out;
}

} // namespace copolem

#endif
