#ifndef COPOLEM_INTERFACE_HPP
#define COPOLEM_INTERFACE_HPP

// Quenched free energy per step of a copolymer near a flat oil/water
// interface. Paths make cL steps with bL right steps, start and end on the
// interface; a step lies in the water (lower halfplane) iff both endpoints
// have y <= 0. Water steps pick up exp(-alpha) for an A monomer and
// exp(+beta) for a B monomer; oil steps are free. Disorder is an i.i.d.
// fair A/B sequence along the chain.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "entropy.hpp"
#include "numeric.hpp"
#include "rng.hpp"

namespace copolem {

// Annealed-to-quenched matching region: for beta below this curve the
// quenched interface free energy equals hat_kappa(mu) exactly (annealed
// bound is achieved by paths that ignore the water).
inline double lower_bound_curve(double r)
{
    if (r < 0.0) throw std::domain_error("lower_bound_curve: need r >= 0");
    return std::log(1.0 + std::sqrt(1.0 - std::exp(-r)));
}

inline bool in_annealed_region(double alpha, double beta)
{
    return beta <= lower_bound_curve(alpha - beta) + 1e-15;
}

// One disorder sample: exact (1/cL) log Z over all admissible paths for a
// fresh A/B sequence drawn from `seed`. Linear-domain DP with per-step
// rescaling; vertical range truncated at ~5 sqrt(cL) (free-walk scale; the
// water drift is non-positive in the cone, so deeper excursions are
// exponentially negligible).
inline double interface_logZ(double alpha, double beta, int bL, int cL,
                             const std::vector<bool>& isA)
{
    if (bL < 1 || cL < bL || (cL - bL) % 2 != 0)
        throw std::invalid_argument("interface_logZ: bad geometry");
    const int ycap = std::min((cL - bL) / 2,
                              static_cast<int>(5.0 * std::sqrt(static_cast<double>(cL))) + 8);
    const int H = 2 * ycap + 1;
    auto idx = [&](int x, int yi, int last) { return (x * H + yi) * 3 + last; };
    std::vector<double> dp((bL + 1) * H * 3, 0.0), nx(dp.size());
    dp[idx(0, ycap, 2)] = 1.0;
    double logscale = 0.0;
    const double wA = std::exp(-alpha), wB = std::exp(beta);
    for (int step = 1; step <= cL; ++step) {
        std::fill(nx.begin(), nx.end(), 0.0);
        const double w = isA[step] ? wA : wB;
        for (int x = 0; x <= bL; ++x)
            for (int yi = 0; yi < H; ++yi) {
                const int y = yi - ycap;
                const double* cell = &dp[idx(x, yi, 0)];
                if (cell[0] == 0.0 && cell[1] == 0.0 && cell[2] == 0.0) continue;
                // up (no reversal: not after a down); lower iff max(y, y+1) <= 0
                if (yi + 1 < H) {
                    double wu = (y + 1 <= 0) ? w : 1.0;
                    nx[idx(x, yi + 1, 0)] += (cell[0] + cell[2]) * wu;
                }
                // down (not after an up); lower iff y <= 0
                if (yi - 1 >= 0) {
                    double wd = (y <= 0) ? w : 1.0;
                    nx[idx(x, yi - 1, 1)] += (cell[1] + cell[2]) * wd;
                }
                // right: lower iff y <= 0
                if (x + 1 <= bL) {
                    double wr = (y <= 0) ? w : 1.0;
                    nx[idx(x + 1, yi, 2)] += (cell[0] + cell[1] + cell[2]) * wr;
                }
            }
        double m = 0.0;
        for (double v : nx) m = std::max(m, v);
        if (m <= 0.0) throw std::runtime_error("interface_sample_rate: dead DP layer");
        for (double& v : nx) v /= m;
        logscale += std::log(m);
        dp.swap(nx);
    }
    double z = dp[idx(bL, ycap, 0)] + dp[idx(bL, ycap, 1)] + dp[idx(bL, ycap, 2)];
    return logscale + std::log(z);
}

// Antithetic pair: the drawn block sequence and its complement, averaged.
// The leading disorder fluctuation is odd under A/B exchange, so the pair
// average cancels it and roughly halves the sample noise.
inline double interface_sample_rate(double alpha, double beta, int bL, int cL,
                                    std::uint64_t seed)
{
    SplitMix64 rng(seed);
    std::vector<bool> isA(cL + 1), isB(cL + 1);
    for (int i = 1; i <= cL; ++i) { isA[i] = rng.next_bool(); isB[i] = !isA[i]; }
    return 0.5 * (interface_logZ(alpha, beta, bL, cL, isA)
                + interface_logZ(alpha, beta, bL, cL, isB)) / cL;
}

struct InterfaceEstimate {
    double alpha = 0, beta = 0, mu = 1;
    double value = 0;
    double stderr_ = 0;
    int samples = 0;
    std::vector<int> Ls;
    bool annealed = false; // true when the exact annealed identity was used
};

struct PhiConfig {
    std::vector<int> Ls{16, 32, 64};
    int samples = 32;
    std::uint64_t seed = 1;
    bool use_annealed_shortcut = true;
    int max_steps = 1536; // cap on cL; large mu shrinks bL instead
    std::string cache_path; // empty: in-memory only (or PHI_CACHE_PATH env)
};

// Estimates phi(alpha, beta; mu) by sample-paired extrapolation of the
// finite-size rates in 1/bL. Memoizes per (alpha, beta, mu) and optionally
// persists to a CSV cache file.
class PhiEstimator {
public:
    explicit PhiEstimator(PhiConfig cfg = {}) : cfg_(std::move(cfg))
    {
        if (cfg_.cache_path.empty())
            if (const char* env = std::getenv("PHI_CACHE_PATH")) cfg_.cache_path = env;
        if (!cfg_.cache_path.empty()) load_cache();
    }

    const PhiConfig& config() const { return cfg_; }

    InterfaceEstimate estimate(double alpha, double beta, double mu)
    {
        if (mu < 1.0) throw std::domain_error("PhiEstimator: need mu >= 1");
        if (cfg_.use_annealed_shortcut && alpha - beta >= 0.0 && in_annealed_region(alpha, beta)) {
            InterfaceEstimate e;
            e.alpha = alpha; e.beta = beta; e.mu = mu;
            e.value = hat_kappa(mu);
            e.stderr_ = 0.0;
            e.annealed = true;
            return e;
        }
        const std::string key = cache_key(alpha, beta, mu);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
        InterfaceEstimate e = compute(alpha, beta, mu);
        cache_.emplace(key, e);
        if (!cfg_.cache_path.empty()) append_cache(key, e);
        return e;
    }

private:
    InterfaceEstimate compute(double alpha, double beta, double mu) const
    {
        // rung geometry: bL from the ladder, shrunk so cL stays under the cap
        std::vector<int> bLs;
        for (int L : cfg_.Ls) {
            int b = std::min(L, std::max(4, static_cast<int>(cfg_.max_steps / mu)));
            if (bLs.empty() || b != bLs.back()) bLs.push_back(b);
        }
        std::vector<int> cLs;
        for (int b : bLs) {
            int c = static_cast<int>(std::lround(mu * b));
            if ((c - b) % 2 != 0) ++c;
            cLs.push_back(c);
        }
        // per-sample extrapolation, then sample statistics of the intercepts
        std::vector<double> intercepts(cfg_.samples);
        std::vector<double> mean_rate(bLs.size(), 0.0);
        const std::uint64_t geo = std::hash<std::string>{}(cache_key(alpha, beta, mu));
        for (int j = 0; j < cfg_.samples; ++j) {
            std::vector<double> y(bLs.size());
            // one disorder stream per sample: each rung reads a prefix of the
            // same block sequence, so the finite-size curve is smooth in L and
            // the extrapolated intercept has small per-sample variance
            std::uint64_t s = stream_seed(cfg_.seed ^ geo, j);
            for (std::size_t k = 0; k < bLs.size(); ++k) {
                y[k] = interface_sample_rate(alpha, beta, bLs[k], cLs[k], s);
                mean_rate[k] += y[k] / cfg_.samples;
            }
            if (bLs.size() >= 3) {
                std::vector<double> Lv(bLs.begin(), bLs.end());
                intercepts[j] = extrapolate_rate(Lv, y);
            } else if (bLs.size() == 2) {
                // two rungs: the log(L)/L term dominates the correction
                double u0 = std::log((double)bLs[0]) / bLs[0];
                double u1 = std::log((double)bLs[1]) / bLs[1];
                intercepts[j] = y[1] + (y[1] - y[0]) / (u0 - u1) * u1;
            } else {
                intercepts[j] = y[0];
            }
        }
        InterfaceEstimate e;
        e.alpha = alpha; e.beta = beta; e.mu = mu;
        e.value = mean(intercepts);
        double se = stderr_of_mean(intercepts);
        // drift guard: with a spare rung, compare intercepts with and
        // without the smallest size and fold the shift into the uncertainty
        double drift = 0.0;
        if (bLs.size() >= 4) {
            std::vector<double> Lv(bLs.begin(), bLs.end());
            std::vector<double> Lv3(Lv.end() - 3, Lv.end());
            std::vector<double> y3(mean_rate.end() - 3, mean_rate.end());
            drift = std::abs(extrapolate_rate(Lv, mean_rate) - extrapolate_rate(Lv3, y3));
        }
        e.stderr_ = std::sqrt(se * se + drift * drift);
        e.samples = cfg_.samples;
        e.Ls = bLs;
        return e;
    }

    std::string cache_key(double alpha, double beta, double mu) const
    {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d,%llu", alpha, beta, mu,
                      cfg_.samples, static_cast<unsigned long long>(cfg_.seed));
        std::string k(buf);
        for (int L : cfg_.Ls) k += "," + std::to_string(L);
        return k;
    }

    void load_cache()
    {
        std::ifstream in(cfg_.cache_path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (line.empty()) continue;
            auto corrupt = [&] {
                return std::runtime_error("phi cache file '" + cfg_.cache_path
                                          + "' is corrupt at line "
                                          + std::to_string(lineno));
            };
            auto bar = line.rfind('|');
            if (bar == std::string::npos) throw corrupt();
            std::istringstream ss(line.substr(bar + 1));
            InterfaceEstimate e;
            try {
                std::string tok;
                std::getline(ss, tok, ','); e.alpha = std::stod(tok);
                std::getline(ss, tok, ','); e.beta = std::stod(tok);
                std::getline(ss, tok, ','); e.mu = std::stod(tok);
                std::getline(ss, tok, ','); e.value = std::stod(tok);
                std::getline(ss, tok, ','); e.stderr_ = std::stod(tok);
                if (!std::getline(ss, tok, ',')) throw corrupt();
                e.samples = std::stoi(tok);
            } catch (const std::logic_error&) {
                throw corrupt();
            }
            cache_.emplace(line.substr(0, bar), e);
        }
    }

    void append_cache(const std::string& key, const InterfaceEstimate& e) const
    {
        std::ofstream out(cfg_.cache_path, std::ios::app);
        char buf[240];
        std::snprintf(buf, sizeof buf, "%s|%.17g,%.17g,%.17g,%.17g,%.17g,%d",
                      key.c_str(), e.alpha, e.beta, e.mu, e.value, e.stderr_, e.samples);
        out << buf << "\n";
    }

    PhiConfig cfg_;
    std::map<std::string, InterfaceEstimate> cache_;
};

} // namespace copolem

#endif
