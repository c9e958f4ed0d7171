#ifndef COPOLEM_BLOCKS_HPP
#define COPOLEM_BLOCKS_HPP

// Free energies per step for a path crossing one mesoscopic block, by the
// type pair (crossed block, block below). An A block is oil (free), a B
// block is water (average cost r/2 = (alpha-beta)/2 per step in the cone).
// Crossing strategies split the a*L steps into an interface piece (c per L
// steps gaining the interface rate at slope c/b) and a diagonal bulk piece
// entering the block corner-to-corner, kappa(a-c, 1-b).

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "entropy.hpp"
#include "interface.hpp"
#include "numeric.hpp"

namespace copolem {

inline double psi_AA(double a) { return kappa_diag(a); }

inline double psi_BB(double r, double a) { return kappa_diag(a) - 0.5 * r; }

// Interface rate profile over a fixed mu grid for one (alpha, beta).
// Inside the annealed matching region it is exact (= hat_kappa); otherwise
// sampled once per grid point and interpolated linearly in log(mu).
class PhiProfile {
public:
    PhiProfile(PhiEstimator& est, double alpha, double beta,
               std::vector<double> grid = default_grid())
        : alpha_(alpha), beta_(beta)
    {
        exact_ = est.config().use_annealed_shortcut
              && alpha - beta >= 0.0 && in_annealed_region(alpha, beta);
        if (exact_) { mu_max_ = 1e12; return; }
        grid_ = std::move(grid);
        mu_max_ = grid_.back();
        for (double mu : grid_) {
            auto e = est.estimate(alpha, beta, mu);
            val_.push_back(e.value);
            err_.push_back(e.stderr_);
        }
    }

    static std::vector<double> default_grid()
    {
        std::vector<double> g;
        for (double mu = 1.0; mu < 64.0 * 1.0001; mu *= std::pow(2.0, 0.25))
            g.push_back(std::min(mu, 64.0));
        return g;
    }

    bool exact() const { return exact_; }
    double mu_max() const { return mu_max_; }
    double alpha() const { return alpha_; }
    double beta() const { return beta_; }

    double value(double mu) const
    {
        if (exact_) return hat_kappa(mu);
        auto [k, w] = locate(mu);
        return (1.0 - w) * val_[k] + w * val_[k + 1];
    }

    double err(double mu) const
    {
        if (exact_) return 0.0;
        auto [k, w] = locate(mu);
        return std::max(err_[k], err_[k + 1]);
    }

private:
    std::pair<std::size_t, double> locate(double mu) const
    {
        if (mu <= grid_.front()) return {0, 0.0};
        if (mu >= grid_.back()) return {grid_.size() - 2, 1.0};
        std::size_t k = std::upper_bound(grid_.begin(), grid_.end(), mu) - grid_.begin() - 1;
        double w = (std::log(mu) - std::log(grid_[k]))
                 / (std::log(grid_[k + 1]) - std::log(grid_[k]));
        return {k, w};
    }

    double alpha_, beta_;
    bool exact_ = false;
    double mu_max_ = 64.0;
    std::vector<double> grid_, val_, err_;
};

enum class CrossKind { AB, BA }; // (crossed block, block below)

struct CrossResult {
    double value = 0;
    double stderr_ = 0;
    double b = 0, c = 0; // maximizing excursion geometry (0,0 = no excursion)
};

namespace detail {

// sup over {0 <= b <= 1, b <= c <= a-2+b} of
//   [ c * iface(c/b) + (a-c) * (kappa(a-c, 1-b) - bulk_cost) ] / a
// by nested Brent (outer in b, inner in c); the b = c = 0 corner (pure
// diagonal crossing) is compared separately.
template <typename F>
CrossResult cross_sup(double a, double bulk_cost, double mu_cap, F&& iface)
{
    if (a < 2.0) throw std::domain_error("cross_sup: need a >= 2");
    auto val = [&](double b, double c) {
        double excursion = (c > 0.0) ? c * iface(c / b) : 0.0;
        return (excursion + (a - c) * (kappa_block(a - c, 1.0 - b) - bulk_cost)) / a;
    };
    // x-tolerances enter the value only quadratically through the curvature,
    // so modest settings already give ~1e-14 value accuracy
    auto best_c = [&](double b) {
        double chi = std::min(a - 2.0 + b, b * mu_cap);
        return brent_maximize([&](double c) { return val(b, c); }, b, chi, 1e-8, 35);
    };
    auto outer = brent_maximize([&](double b) { return best_c(b).fx; }, 1e-9, 1.0, 1e-7, 30);
    double b = outer.x;
    auto inner = best_c(b);
    CrossResult res{inner.fx, 0.0, b, inner.x};
    double corner = (a * (kappa_diag(a) - bulk_cost)) / a;
    if (corner >= res.value) res = CrossResult{corner, 0.0, 0.0, 0.0};
    return res;
}

} // namespace detail

// B block crossed above an A block, interface excursions scored by the
// entropy rate hat_kappa (the annealed stand-in for the interface rate).
inline CrossResult psi_BA_hat_full(double r, double a)
{
    return detail::cross_sup(a, 0.5 * r, 1e12, [](double mu) { return hat_kappa(mu); });
}

inline double psi_BA_hat(double r, double a) { return psi_BA_hat_full(r, a).value; }

// Crossing free energies with the quenched interface rate.
inline CrossResult psi_cross(CrossKind kind, const PhiProfile& phi, double a)
{
    double r = phi.alpha() - phi.beta();
    double bulk_cost = (kind == CrossKind::BA) ? 0.5 * r : 0.0;
    double touched = 0.0;
    auto res = detail::cross_sup(a, bulk_cost, phi.mu_max(),
                                 [&](double mu) {
                                     touched = std::max(touched, phi.err(mu));
                                     return phi.value(mu);
                                 });
    res.stderr_ = (res.c > 0.0) ? touched : 0.0;
    return res;
}

// --- excursion criteria ------------------------------------------------------

// sup over mu >= 1 of h(mu); grid scan plus Brent refinement in log mu.
template <typename H>
inline double sup_over_mu(H&& h, double mu_max = 64.0)
{
    double best = h(1.0);
    double best_mu = 1.0;
    std::vector<double> grid;
    for (double mu = 1.0; mu < mu_max * 1.0001; mu *= std::pow(2.0, 0.125))
        grid.push_back(std::min(mu, mu_max));
    for (double mu : grid) {
        double v = h(mu);
        if (v > best) { best = v; best_mu = mu; }
    }
    double lo = std::max(1.0, best_mu / 1.2), hi = std::min(mu_max, best_mu * 1.2);
    auto ref = brent_maximize([&](double lm) { return h(std::exp(lm)); },
                              std::log(lo), std::log(hi), 1e-10);
    return std::max(best, ref.fx);
}

// > 0 iff interface excursions beat the pure diagonal crossing of a B block
// over an A block (hat_kappa scoring): psi_BA_hat(a) > psi_BB(a).
inline double margin_BA_hat_vs_BB(double r, double a)
{
    return sup_over_mu([&](double mu) { return hat_kappa(mu) + 0.5 * r - G_fn(mu, a); });
}

// > 0 iff interface excursions beat the diagonal crossing of an A block over
// a B block: psi_AB(a) > psi_AA(a). Uses the quenched rate.
inline double margin_AB_vs_AA(const PhiProfile& phi, double a, double* err = nullptr)
{
    if (err) *err = 0.0;
    return sup_over_mu([&](double mu) {
        if (err) *err = std::max(*err, phi.err(mu));
        return phi.value(mu) - G_fn(mu, a);
    }, phi.exact() ? 256.0 : phi.mu_max());
}

// Generic D-phase style margin: sup_mu { phi(mu) + shift - G(mu, a) }.
inline double margin_vs_G(const PhiProfile& phi, double shift, double a, double* err = nullptr)
{
    if (err) *err = 0.0;
    return sup_over_mu([&](double mu) {
        if (err) *err = std::max(*err, phi.err(mu));
        return phi.value(mu) + shift - G_fn(mu, a);
    }, phi.exact() ? 256.0 : phi.mu_max());
}

} // namespace copolem

#endif
