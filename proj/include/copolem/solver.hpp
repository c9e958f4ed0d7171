#ifndef COPOLEM_SOLVER_HPP
#define COPOLEM_SOLVER_HPP

// Variational solvers for the quenched free energy per step of the coarse
// path, at four levels of refinement of the block scores:
//   f_D1: A blocks kappa(x,1), every B block kappa(z,1) - r/2
//   f_D2: B-over-A blocks upgraded to psi_BA_hat (hat_kappa excursions)
//   f_L1: B-over-A blocks scored with the quenched interface rate
//   f_full: all four pair scores, path re-optimized on sampled fields
// Each is a ratio sup of (sum of a*psi) / (sum of a) and is solved by
// Dinkelbach iteration: at the current f maximize a*(psi(a) - f) per pair
// (closed form on the diagonal, Brent otherwise) and update f as the ratio.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "blocks.hpp"
#include "entropy.hpp"
#include "frequencies.hpp"
#include "numeric.hpp"

namespace copolem {

constexpr double A_MAX = 256.0; // search box for block aspect ratios

// argmax of a*(kappa_diag(a) - g_shift... ) given effective slope g:
// stationarity (1/2) log(a/(a-2)) = g.
inline double diag_argmax(double g)
{
    if (g <= 0.0) throw std::domain_error("diag_argmax: need positive slope");
    return 2.0 / (1.0 - std::exp(-2.0 * g));
}

struct SolveResult {
    double f = 0;
    double stderr_ = 0;     // propagated from sampled interface rates
    double x = 0, y = 0, z = 0; // maximizing aspect ratios (A, BA, BB blocks)
    double b = 0, c = 0;    // BA excursion geometry at the maximizer
    bool pinned = false;    // an argmax hit the search box edge
    int iterations = 0;
};

// --- f_D1 -------------------------------------------------------------------

// Two-score model: fraction rho_A of blocks scored psi_AA, the rest psi_BB.
inline SolveResult solve_f_D1(double r, double rho_A)
{
    if (r < 0.0) throw std::domain_error("solve_f_D1: need r >= 0 (cone)");
    if (rho_A <= 0.0 || rho_A > 1.0) throw std::domain_error("solve_f_D1: bad rho_A");
    double f = 1e-9; // below any fixpoint; Dinkelbach climbs monotonically
    SolveResult out;
    for (int it = 0; it < 400; ++it) {
        double x = diag_argmax(f);
        double z = diag_argmax(f + 0.5 * r);
        double N = rho_A * x * psi_AA(x) + (1.0 - rho_A) * z * psi_BB(r, z);
        double D = rho_A * x + (1.0 - rho_A) * z;
        double fn = N / D;
        out = SolveResult{fn, 0.0, x, 0.0, z, 0.0, 0.0, false, it + 1};
        if (std::abs(fn - f) < 1e-15) break;
        f = fn;
    }
    out.f = f;
    return out;
}

// --- f_D2 / f_L1 ------------------------------------------------------------

namespace detail {

// sup over a in [2, A_MAX] of a*(psi(a) - f), Brent in log a.
template <typename Psi>
std::pair<double, double> sup_weighted(Psi&& psi, double f, double lo = 2.0, double hi = A_MAX)
{
    auto r = brent_maximize([&](double la) {
        double a = std::exp(la);
        return a * (psi(a) - f);
    }, std::log(lo), std::log(hi), 1e-8, 40);
    return {std::exp(r.x), r.fx};
}

// Shared Dinkelbach loop for the three-score solvers; psiBA(a) -> value.
template <typename PsiBA>
SolveResult ratio_solve(double r, const FreqResult& rho, PsiBA&& psiBA, double f0)
{
    SolveResult out;
    double f = std::max(f0, 1e-9);
    double ylo = 2.0, yhi = A_MAX;
    for (int it = 0; it < 200; ++it) {
        double x = diag_argmax(f);
        double z = diag_argmax(f + 0.5 * r);
        double y = 0.0;
        if (rho.rho_BA > 0.0) {
            auto [ya, yv] = sup_weighted(psiBA, f, ylo, yhi);
            y = ya;
            // warm bracket for the next iteration (f moves little)
            ylo = std::max(2.0, y / 2.0);
            yhi = std::min(A_MAX, std::max(y * 2.0, 8.0));
            (void)yv;
        }
        double N = rho.rho_A * x * psi_AA(x) + rho.rho_BB * z * psi_BB(r, z)
                 + (rho.rho_BA > 0.0 ? rho.rho_BA * y * psiBA(y) : 0.0);
        double D = rho.rho_A * x + rho.rho_BB * z + rho.rho_BA * y;
        double fn = N / D;
        out.x = x; out.y = y; out.z = z; out.iterations = it + 1;
        if (std::abs(fn - f) < 1e-13) { f = fn; break; }
        f = fn;
    }
    out.f = f;
    out.pinned = out.y > 0.99 * A_MAX;
    return out;
}

} // namespace detail

// B-over-A blocks scored with hat_kappa excursions.
inline SolveResult solve_f_D2(double alpha, double beta, const FreqResult& rho)
{
    double r = alpha - beta;
    double f0 = solve_f_D1(r, rho.rho_A).f;
    auto res = detail::ratio_solve(r, rho, [&](double a) { return psi_BA_hat(r, a); }, f0);
    if (res.y > 0.0) {
        auto full = psi_BA_hat_full(r, res.y);
        res.b = full.b; res.c = full.c;
    }
    return res;
}

// B-over-A blocks scored with the quenched interface rate.
inline SolveResult solve_f_L1(const PhiProfile& phi, const FreqResult& rho)
{
    double r = phi.alpha() - phi.beta();
    double f0 = solve_f_D1(r, rho.rho_A).f;
    double touched = 0.0;
    auto psiBA = [&](double a) {
        auto c = psi_cross(CrossKind::BA, phi, a);
        touched = std::max(touched, c.stderr_);
        return c.value;
    };
    auto res = detail::ratio_solve(r, rho, psiBA, f0);
    if (res.y > 0.0) {
        auto full = psi_cross(CrossKind::BA, phi, res.y);
        res.b = full.b; res.c = full.c;
        double D = rho.rho_A * res.x + rho.rho_BA * res.y + rho.rho_BB * res.z;
        res.stderr_ = rho.rho_BA * res.y * touched / D;
    }
    return res;
}

// --- f_full -----------------------------------------------------------------

struct FullConfig {
    int M = 128;        // field torus side
    int T = 512;        // path columns
    int samples = 4;
    std::uint64_t seed = 1;
    double f0 = 0.0;    // optional warm start (e.g. f_L1); Dinkelbach
                        // converges monotonically from any start
};

struct FullResult {
    double f = 0;
    double stderr_ = 0; // between-field spread plus interface-rate error
    double a_AA = 0, a_AB = 0, a_BA = 0, a_BB = 0; // argmax aspect ratios
    bool pinned = false;
    int samples = 0;
};

// Free energy with all four pair scores, path optimized per sampled field.
inline FullResult solve_f_full(const PhiProfile& phi, double p, const FullConfig& cfg)
{
    const double r = phi.alpha() - phi.beta();
    double phierr = 0.0;
    auto psiBA = [&](double a) {
        auto c = psi_cross(CrossKind::BA, phi, a);
        phierr = std::max(phierr, c.stderr_);
        return c.value;
    };
    auto psiAB = [&](double a) {
        auto c = psi_cross(CrossKind::AB, phi, a);
        phierr = std::max(phierr, c.stderr_);
        return c.value;
    };

    FullResult out;
    std::vector<double> fs(cfg.samples);
    double f_init = cfg.f0 > 0 ? cfg.f0 : 1e-9;
    for (int j = 0; j < cfg.samples; ++j) {
        auto field = sample_field(cfg.M, p, stream_seed(cfg.seed, j));
        const int M = cfg.M;
        double f = f_init;
        double aAA = 0, aAB = 0, aBA = 0, aBB = 0;
        for (int it = 0; it < 100; ++it) {
            // per-pair weights at the current f
            aAA = diag_argmax(f);
            aBB = diag_argmax(f + 0.5 * r);
            auto [xAB, wAB] = detail::sup_weighted(psiAB, f);
            auto [xBA, wBA] = detail::sup_weighted(psiBA, f);
            aAB = xAB; aBA = xBA;
            double Nv[2][2], Dv[2][2], Wv[2][2]; // [crossed isA][below isA]
            Nv[1][1] = Nv[1][0] = aAA * psi_AA(aAA);  Dv[1][1] = Dv[1][0] = aAA;
            Nv[0][0] = aBB * psi_BB(r, aBB);          Dv[0][0] = aBB;
            Nv[0][1] = aBA * psiBA(aBA);              Dv[0][1] = aBA;
            // A block over B: interface excursions can still help
            Nv[1][0] = aAB * psiAB(aAB);              Dv[1][0] = aAB;
            for (int u = 0; u < 2; ++u)
                for (int v = 0; v < 2; ++v) Wv[u][v] = Nv[u][v] - f * Dv[u][v];
            // best-gain path on the torus, carrying (gain, N, D)
            struct Cell { double w, N, D; };
            std::vector<Cell> dp(M, {0, 0, 0}), nx(M);
            for (int t = 0; t < cfg.T; ++t) {
                const auto& colA = field[t % M];
                for (int y2 = 0; y2 < M; ++y2) nx[y2] = {-1e300, 0, 0};
                for (int y2 = 0; y2 < M; ++y2) {
                    int up = (y2 + 1) % M, dn = (y2 + M - 1) % M;
                    int cu = colA[y2], bu = colA[dn];   // up-move pair
                    int cd = colA[dn], bd = colA[y2];   // down-move pair
                    Cell cu_cell{dp[y2].w + Wv[cu][bu], dp[y2].N + Nv[cu][bu], dp[y2].D + Dv[cu][bu]};
                    Cell cd_cell{dp[y2].w + Wv[cd][bd], dp[y2].N + Nv[cd][bd], dp[y2].D + Dv[cd][bd]};
                    if (cu_cell.w > nx[up].w) nx[up] = cu_cell;
                    if (cd_cell.w > nx[dn].w) nx[dn] = cd_cell;
                }
                dp.swap(nx);
            }
            Cell best = dp[0];
            for (const auto& c : dp)
                if (c.w > best.w) best = c;
            double fn = best.N / best.D;
            if (std::abs(fn - f) < 1e-12) { f = fn; break; }
            f = fn;
        }
        fs[j] = f;
        if (j == 0) {
            f_init = std::max(f * 0.999, 1e-9); // warm start for later fields
            out.a_AA = aAA; out.a_AB = aAB; out.a_BA = aBA; out.a_BB = aBB;
            out.pinned = aAB > 0.99 * A_MAX || aBA > 0.99 * A_MAX;
        }
    }
    out.f = mean(fs);
    double se = stderr_of_mean(fs);
    out.stderr_ = std::sqrt(se * se + phierr * phierr);
    out.samples = cfg.samples;
    return out;
}

// --- phase classification -----------------------------------------------------

enum class Phase { D1, D2, L1, L2, Uncertain };

inline const char* phase_name(Phase ph)
{
    switch (ph) {
        case Phase::D1: return "D1";
        case Phase::D2: return "D2";
        case Phase::L1: return "L1";
        case Phase::L2: return "L2";
        default: return "UNCERTAIN";
    }
}

struct Classification {
    Phase phase = Phase::Uncertain;
    double f_D1 = 0, f_D2 = 0, f_L1 = 0;
    double margin_D1 = 0, err_D1 = 0;   // sup_mu {phi + r/2 - G(mu, y_D1)}
    double margin_D2 = 0, err_D2 = 0;   // sup_mu {phi - G(mu, x_D2)}
    double margin_L1 = 0, err_L1 = 0;   // sup_mu {phi - G(mu, x_L1)}
    double loc_gap = 0, loc_err = 0;    // phi - hat_kappa at the D2 excursion slope
    bool localized = false;
};

// Decide a sign with a 2-sigma band; 0 = within band (uncertain).
inline int band_sign(double v, double err, double tol = 0.0)
{
    double band = 2.0 * err + tol;
    if (v > band) return 1;
    if (v < -band) return -1;
    return 0;
}

inline Classification classify(const PhiProfile& phi, const FreqResult& rho)
{
    const double r = phi.alpha() - phi.beta();
    if (r < 0.0) throw std::domain_error("classify: outside the cone (need alpha >= beta)");
    Classification cl;

    // D1: no pair of block scores improves on the two-score model
    auto d1 = solve_f_D1(r, rho.rho_A);
    cl.f_D1 = d1.f;
    cl.margin_D1 = margin_vs_G(phi, 0.5 * r, d1.z, &cl.err_D1);
    int s1 = band_sign(cl.margin_D1, cl.err_D1);
    if (s1 < 0) { cl.phase = Phase::D1; return cl; }

    // D2: excursions pay, but only along delocalized (entropic) stretches
    auto d2 = solve_f_D2(phi.alpha(), phi.beta(), rho);
    cl.f_D2 = d2.f;
    cl.margin_D2 = margin_vs_G(phi, 0.0, d2.x, &cl.err_D2);
    int s2 = band_sign(cl.margin_D2, cl.err_D2);
    if (d2.b > 0.0 && d2.c > 0.0) {
        // localized iff the quenched rate strictly beats the path entropy at
        // the maximizing excursion slope (it can never be below it)
        double mu = d2.c / d2.b;
        cl.loc_gap = phi.value(mu) - hat_kappa(mu);
        cl.loc_err = phi.err(mu);
        cl.localized = band_sign(cl.loc_gap, cl.loc_err) > 0;
    }
    if (s1 == 0 || s2 == 0) { cl.phase = Phase::Uncertain; return cl; }
    if (s2 < 0 && !cl.localized) { cl.phase = Phase::D2; return cl; }

    // localized phases: separate by the A-block detachment criterion at x_L1
    auto l1 = solve_f_L1(phi, rho);
    cl.f_L1 = l1.f;
    cl.margin_L1 = margin_vs_G(phi, 0.0, l1.x, &cl.err_L1);
    int s3 = band_sign(cl.margin_L1, cl.err_L1);
    if (s3 == 0) { cl.phase = Phase::Uncertain; return cl; }
    cl.phase = (s3 < 0) ? Phase::L1 : Phase::L2;
    return cl;
}

} // namespace copolem

#endif
