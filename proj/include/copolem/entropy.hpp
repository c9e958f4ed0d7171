#ifndef COPOLEM_ENTROPY_HPP
#define COPOLEM_ENTROPY_HPP

// Path entropies for directed self-avoiding paths with steps U, D, R.
// Self-avoidance for this step set is exactly "no immediate vertical
// reversal" (a UD or DU adjacency revisits a site), so per-letter growth
// rates come from the Perron root of a 3x3 tilted transfer matrix over
// {U, D, R} with UD/DU transitions forbidden, followed by a Legendre
// transform pinning the right-step and net-vertical frequencies.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

#include "numeric.hpp"

namespace copolem {

// --- closed forms on the slope-1 diagonal ---------------------------------

// kappa(a, 1) for a >= 2: a*kappa(a,1) = log 2 + (1/2)[a log a - (a-2) log(a-2)].
inline double kappa_diag(double a)
{
    if (a < 2.0) throw std::domain_error("kappa_diag: need a >= 2");
    if (a == 2.0) return std::log(2.0);
    // a log a - (a-2) log(a-2) = 2 log a + (a-2) log1p(2/(a-2)), stable for large a
    double num = std::log(2.0) + std::log(a) + 0.5 * (a - 2.0) * std::log1p(2.0 / (a - 2.0));
    return num / a;
}

// d/da [a kappa(a,1)] = (1/2) log(a/(a-2)), a > 2.
inline double d_akappa_diag(double a)
{
    if (a <= 2.0) throw std::domain_error("d_akappa_diag: need a > 2");
    return 0.5 * std::log(a / (a - 2.0));
}

// Partial derivatives of kappa(a, b) at b = 1, a > 2.
inline double dkappa_da_diag(double a)
{
    if (a <= 2.0) throw std::domain_error("dkappa_da_diag: need a > 2");
    return -(std::log(2.0) + std::log(a - 2.0)) / (a * a);
}

inline double dkappa_db_diag(double a)
{
    if (a <= 2.0) throw std::domain_error("dkappa_db_diag: need a > 2");
    return (0.5 / a) * std::log(4.0 * (a - 2.0) * (a - 1.0) * (a - 1.0) / a);
}

// G(mu, a) = kappa(a,1) + a d1kappa(a,1) + (a/mu) d2kappa(a,1)
//          = ((mu-1)/(2mu)) log(a/(a-2)) + (1/mu) log(2(a-1)).
// Appears as the per-unit cost of detaching from a linear interface.
inline double G_fn(double mu, double a)
{
    if (mu < 1.0) throw std::domain_error("G_fn: need mu >= 1");
    if (a <= 2.0) throw std::domain_error("G_fn: need a > 2");
    return 0.5 * ((mu - 1.0) / mu) * std::log(a / (a - 2.0))
         + (1.0 / mu) * std::log(2.0 * (a - 1.0));
}

// --- Perron root of the tilted transfer matrix ----------------------------

// Largest eigenvalue of M = A diag(wU, wD, wR) where A allows every
// transition except U<->D. Weights are rescaled by their maximum so the
// cubic stays in range for extreme tilts; the scale factors back out.
inline double log_perron_root(double t, double s)
{
    double m = std::max({t, -t, s});
    double x = std::exp(t - m);   // U weight, rescaled
    double y = std::exp(-t - m);  // D weight
    double u = std::exp(s - m);   // R weight
    // q(l) = (l-x)(l-y)(l-u) - u*y*(l-x) - u*x*(l-y); largest root is Perron.
    double l = x + y + u; // upper bound (max row sum); Newton descends monotonically
    for (int it = 0; it < 100; ++it) {
        double q = (l - x) * (l - y) * (l - u) - u * y * (l - x) - u * x * (l - y);
        double dq = (l - y) * (l - u) + (l - x) * (l - u) + (l - x) * (l - y)
                  - u * y - u * x;
        double step = q / dq;
        l -= step;
        if (std::abs(step) < 1e-16 * l) break;
    }
    return m + std::log(l);
}

// --- numeric growth rates via Legendre transform --------------------------

// kappa(a, b): per-step growth rate of paths making aL steps with bL right
// steps and net vertical displacement +L. Domain a >= 1 + b, b >= 0.
// The slab confinement |y| < L does not affect the rate (the pinned drift
// already keeps typical paths inside), so it is dropped here; the exact
// finite-L enumeration oracle keeps it.
inline double kappa_block(double a, double b)
{
    if (b < 0.0 || a < 1.0 + b) throw std::domain_error("kappa_block: need a >= 1 + b, b >= 0");
    if (a <= 1.0 + b + 1e-12) {
        // No down steps: paths are arbitrary interleavings of bL rights and
        // (a-b)L ups, so the rate is the binomial entropy. (The Legendre
        // infimum is only approached along s = t -> infinity here.)
        if (b == 0.0) return 0.0;
        return (a * std::log(a) - b * std::log(b) - (a - b) * std::log(a - b)) / a;
    }
    const double thR = b / a;      // right-step frequency
    const double thV = 1.0 / a;    // net vertical frequency
    auto g = [&](double tt, double ss) {
        return log_perron_root(tt, ss) - thR * ss - thV * tt;
    };
    // 2D Newton on the strictly convex objective; finite-difference
    // gradient/Hessian from a 3x3 stencil. Initial tilt from the free-chain
    // right-step frequency u/(u+2) so small b starts near the optimum.
    double s = std::log(std::max(2.0 * thR / (1.0 - thR), 1e-14));
    double t = 0.0;
    const double h = 1e-5;
    bool converged = false;
    for (int it = 0; it < 40; ++it) {
        double g0 = g(t, s);
        double gpt = g(t + h, s), gmt = g(t - h, s);
        double gps = g(t, s + h), gms = g(t, s - h);
        double gts = g(t + h, s + h);
        double dt = (gpt - gmt) / (2 * h), ds = (gps - gms) / (2 * h);
        if (std::abs(dt) < 1e-11 && std::abs(ds) < 1e-11) { converged = true; break; }
        double htt = (gpt - 2 * g0 + gmt) / (h * h);
        double hss = (gps - 2 * g0 + gms) / (h * h);
        double hts = (gts - gpt - gps + g0) / (h * h);
        double det = htt * hss - hts * hts;
        if (det <= 0.0) break; // leave to the fallback
        double step_t = (hss * dt - hts * ds) / det;
        double step_s = (htt * ds - hts * dt) / det;
        // damp long steps; the objective is convex so this stays safe
        double norm = std::max(std::abs(step_t), std::abs(step_s));
        if (norm > 5.0) { step_t *= 5.0 / norm; step_s *= 5.0 / norm; }
        t -= step_t;
        s -= step_s;
        if (std::abs(t) > 60.0 || std::abs(s) > 80.0) break;
    }
    if (converged) return g(t, s);
    // fallback: nested Brent (outer in t, inner in s), slower but robust
    auto outer = [&](double tt) {
        return brent_minimize([&](double ss) { return g(tt, ss); }, -80.0, 80.0, 1e-11, 50).fx;
    };
    return brent_minimize(outer, -60.0, 60.0, 1e-10, 45).fx;
}

// hat_kappa(mu): rate for paths of length mu*bL with bL right steps ending
// back at height 0 (net vertical frequency 0). By U/D symmetry the vertical
// tilt vanishes, leaving a 1D transform; at t = 0 the Perron root is the
// explicit largest zero of l^2 - (1+u) l - u.
inline double hat_kappa(double mu)
{
    if (mu < 1.0) throw std::domain_error("hat_kappa: need mu >= 1");
    if (mu == 1.0) return 0.0; // single all-right path
    auto obj = [&](double s) {
        double u = std::exp(s);
        double lam = 0.5 * ((1.0 + u) + std::sqrt((1.0 + u) * (1.0 + u) + 4.0 * u));
        return std::log(lam) - s / mu;
    };
    return brent_minimize(obj, -60.0, 60.0, 1e-13).fx;
}

// --- exact enumeration oracles (finite L) ----------------------------------

// Count paths of aL steps from (0,0) to (bL, L), staying in the slab
// -L < y <= L, no immediate vertical reversal. Exact (GMP).
inline mpz_class count_block_paths(int L, int aL, int bL)
{
    if (L <= 0 || aL <= 0 || bL < 0 || aL < bL) throw std::invalid_argument("count_block_paths: bad sizes");
    const int H = 2 * L;            // y in (-L, L] shifted to [0, 2L-1]... shift y+L-1? use offset
    const int yoff = L - 1;         // y = -L+1 .. L  ->  index 0 .. 2L-1
    const int LAST_U = 0, LAST_D = 1, LAST_R = 2;
    // dp[x][yi][last]
    auto idx = [&](int x, int yi, int last) { return (x * H + yi) * 3 + last; };
    std::vector<mpz_class> dp((bL + 1) * H * 3), nx(dp.size());
    dp[idx(0, yoff, LAST_R)] = 1; // start at origin; a leading R or U/D both legal
    for (int step = 0; step < aL; ++step) {
        for (auto& v : nx) v = 0;
        for (int x = 0; x <= bL; ++x)
            for (int yi = 0; yi < H; ++yi)
                for (int last = 0; last < 3; ++last) {
                    const mpz_class& c = dp[idx(x, yi, last)];
                    if (c == 0) continue;
                    if (last != LAST_D && yi + 1 < H) nx[idx(x, yi + 1, LAST_U)] += c;
                    if (last != LAST_U && yi - 1 >= 0) nx[idx(x, yi - 1, LAST_D)] += c;
                    if (x + 1 <= bL) nx[idx(x + 1, yi, LAST_R)] += c;
                }
        dp.swap(nx);
    }
    mpz_class total = 0;
    for (int last = 0; last < 3; ++last) total += dp[idx(bL, yoff + L, last)];
    return total;
}

// Count paths of cL steps from (0,0) to (bL, 0), bL right steps, no slab
// constraint, no immediate vertical reversal. Exact (GMP).
inline mpz_class count_interface_paths(int cL, int bL)
{
    if (cL <= 0 || bL < 0 || cL < bL || (cL - bL) % 2 != 0)
        throw std::invalid_argument("count_interface_paths: bad sizes");
    const int ymax = (cL - bL) / 2;
    const int H = 2 * ymax + 1;
    auto idx = [&](int x, int yi, int last) { return (x * H + yi) * 3 + last; };
    std::vector<mpz_class> dp((bL + 1) * H * 3), nx(dp.size());
    dp[idx(0, ymax, 2)] = 1;
    for (int step = 0; step < cL; ++step) {
        for (auto& v : nx) v = 0;
        for (int x = 0; x <= bL; ++x)
            for (int yi = 0; yi < H; ++yi)
                for (int last = 0; last < 3; ++last) {
                    const mpz_class& c = dp[idx(x, yi, last)];
                    if (c == 0) continue;
                    if (last != 1 && yi + 1 < H) nx[idx(x, yi + 1, 0)] += c;
                    if (last != 0 && yi - 1 >= 0) nx[idx(x, yi - 1, 1)] += c;
                    if (x + 1 <= bL) nx[idx(x + 1, yi, 2)] += c;
                }
        dp.swap(nx);
    }
    mpz_class total = 0;
    for (int last = 0; last < 3; ++last) total += dp[idx(bL, ymax, last)];
    return total;
}

inline double log_mpz(const mpz_class& z)
{
    if (z <= 0) return -std::numeric_limits<double>::infinity();
    signed long exp2;
    double d = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(d) + static_cast<double>(exp2) * std::log(2.0);
}

// Finite-size rate estimate log|W| / (#steps) for the block ensemble,
// extrapolated over a ladder of L values against log(L)/L (the leading
// polynomial correction to exponential growth).
// y_i = kappa + p * log(L_i)/L_i + q / L_i, solved by least squares.
// Models |W| ~ C * L^gamma * exp(n kappa): both a power-law prefactor and a
// constant factor contribute to the finite-size rate.
inline double extrapolate_rate(const std::vector<double>& L, const std::vector<double>& y)
{
    const std::size_t n = L.size();
    double A[3][4] = {};
    for (std::size_t i = 0; i < n; ++i) {
        double f[3] = {1.0, std::log(L[i]) / L[i], 1.0 / L[i]};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) A[r][c] += f[r] * f[c];
            A[r][3] += f[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) { // Gaussian elimination w/ partial pivot
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            double m = A[r][col] / A[col][col];
            for (int c = col; c < 4; ++c) A[r][c] -= m * A[col][c];
        }
    }
    return A[0][3] / A[0][0];
}

inline double kappa_block_enum_rate(double a, double b, const std::vector<int>& Ls)
{
    std::vector<double> u, y;
    for (int L : Ls) {
        int aL = static_cast<int>(std::lround(a * L));
        int bL = static_cast<int>(std::lround(b * L));
        u.push_back(static_cast<double>(L));
        y.push_back(log_mpz(count_block_paths(L, aL, bL)) / aL);
    }
    return extrapolate_rate(u, y);
}

inline double hat_kappa_enum_rate(double mu, const std::vector<int>& bLs)
{
    std::vector<double> u, y;
    for (int bL : bLs) {
        int cL = static_cast<int>(std::lround(mu * bL));
        if ((cL - bL) % 2 != 0) ++cL;
        u.push_back(static_cast<double>(bL));
        y.push_back(log_mpz(count_interface_paths(cL, bL)) / cL);
    }
    return extrapolate_rate(u, y);
}

} // namespace copolem

#endif
