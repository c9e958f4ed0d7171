// Acceptance gate: one pass/fail line per criterion. Exit code is the
// number of failed criteria. Each criterion is self-contained; shared
// expensive state (frequency triples, the phase explorer) is built once.
//
// Criteria:
//   1. closed-form arithmetic of the path entropies        (< 1 s)
//   2. entropy rates vs exact enumeration extrapolation    (< 5 min)
//   3. quenched-interface identities                       (< 30 min)
//   4. free-energy structure at the four model levels      (< 30 min)
//   5. phase-diagram structure at p = 0.3                  (< 2 h)
//   6. transition-order probes at the phase boundaries     (< 2 h)
//   7. finite-emulsion model cross-validation              (< 1 h)
//   8. byte-identical determinism of the CLI

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "copolem/finite_model.hpp"
#include "copolem/phases.hpp"
#include "copolem/solver.hpp"

#include "../support/enum_oracle.hpp"

using namespace copolem;
using clk = std::chrono::steady_clock;

namespace {

struct Criterion {
    bool ok = true;
    std::vector<std::string> failures;

    void expect(bool cond, const std::string& what)
    {
        if (!cond) {
            ok = false;
            failures.push_back(what);
        }
    }
    template <typename... A>
    void expectf(bool cond, const char* fmtstr, A... a)
    {
        if (!cond) {
            char buf[512];
            std::snprintf(buf, sizeof buf, fmtstr, a...);
            expect(false, buf);
        }
    }
};

// --- shared state --------------------------------------------------------------

FreqResult& rho_p03()
{
    static FreqResult rho = optimal_frequencies({.p = 0.3, .M = 256, .T = 1024,
                                                 .samples = 8, .seed = 11});
    return rho;
}

FreqResult& rho_p04()
{
    static FreqResult rho = optimal_frequencies({.p = 0.4, .M = 128, .T = 512,
                                                 .samples = 3, .seed = 1});
    return rho;
}

PhaseExplorer& explorer()
{
    static PhaseConfig cfg = [] {
        PhaseConfig c;
        c.phi.Ls = {8, 12, 16, 24, 32, 48};
        c.phi.samples = 8;
        c.phi.seed = 5;
        c.beta_tol = 0.05;
        for (double mu = 1.0; mu < 16.0 * 1.0001; mu *= std::sqrt(2.0))
            c.mu_grid.push_back(mu);
        return c;
    }();
    static PhaseExplorer ex(0.3, rho_p03(), cfg);
    return ex;
}

std::vector<double> reduced_mu_grid()
{
    std::vector<double> g;
    for (double mu = 1.0; mu < 16.0 * 1.0001; mu *= std::sqrt(2.0)) g.push_back(mu);
    return g;
}

// --- criteria ------------------------------------------------------------------

Criterion closed_forms()
{
    Criterion c;
    const double log2 = std::log(2.0);
    c.expect(std::abs(kappa_diag(2.0) - log2) < 1e-12, "kappa(2,1) != log 2");
    c.expect(std::abs(kappa_diag(4.0) - log2) < 1e-12, "kappa(4,1) != log 2");
    c.expect(std::abs(kappa_diag(2.5) - 0.5 * std::log(5.0)) < 1e-12,
             "kappa(5/2,1) != (1/2) log 5");
    auto mx = brent_maximize([](double a) { return kappa_diag(a); }, 2.0001, 8.0, 1e-9);
    c.expectf(std::abs(mx.x - 2.5) < 1e-6, "argmax of kappa(.,1) = %.8f, want 5/2", mx.x);
    c.expect(std::abs(G_fn(1.0, 3.0) - std::log(4.0)) < 1e-12, "G(1,3) != log 4");
    double g_direct = 0.5 * (1.0 / 2.0) * std::log(3.7 / 1.7) + 0.5 * std::log(2.0 * 2.7);
    c.expect(std::abs(G_fn(2.0, 3.7) - g_direct) < 1e-12, "G(2,3.7) formula residual");
    c.expect(std::abs(lower_bound_curve(0.0)) < 1e-12, "lower bound at r=0 != 0");
    c.expect(std::abs(lower_bound_curve(log2) - std::log(1.0 + std::sqrt(0.5))) < 1e-12
                 && std::abs(lower_bound_curve(log2) - 0.5348) < 1e-4,
             "lower bound at r=log 2 != log(1+sqrt(1/2))");
    c.expect(std::abs(lower_bound_curve(60.0) - log2) < 1e-9,
             "lower bound limit r->inf != log 2");
    return c;
}

Criterion entropy_oracles()
{
    Criterion c;
    // ladders restricted to L <= 16 with L(a-2) even so target corners exist
    struct K { double a; std::vector<int> Ls; };
    for (const K& k : {K{2.5, {4, 8, 12, 16}},
                       K{3.0, {6, 8, 10, 12, 16}},
                       K{3.5, {4, 8, 12, 16}},
                       K{4.0, {8, 10, 12, 14, 16}},
                       K{4.5, {8, 12, 16}},
                       K{5.0, {8, 10, 12, 14, 16}}}) {
        double en = kappa_block_enum_rate(k.a, 1.0, k.Ls);
        c.expectf(std::abs(kappa_diag(k.a) - en) < 2e-2,
                  "kappa_diag(%.2f) off enumeration by %.4f", k.a, kappa_diag(k.a) - en);
    }
    for (double mu : {1.5, 2.0, 2.5, 3.0, 4.0, 5.0}) {
        double en = hat_kappa_enum_rate(mu, {8, 12, 16});
        c.expectf(std::abs(hat_kappa(mu) - en) < 2e-2,
                  "hat_kappa(%.2f) off enumeration by %.4f", mu, hat_kappa(mu) - en);
    }
    return c;
}

Criterion interface_identities()
{
    Criterion c;
    PhiConfig cfg;
    cfg.Ls = {16, 24, 32, 48, 64}; // 5 rungs: the drift guard feeds stderr
    cfg.samples = 12;
    cfg.seed = 7;
    cfg.use_annealed_shortcut = false;
    PhiEstimator est(cfg);
    std::vector<InterfaceEstimate> sampled;

    // free-at-the-interface identity: phi(alpha, 0; mu) = hat_kappa(mu)
    for (double alpha : {0.5, 1.0, 2.0})
        for (double mu : {1.5, 3.0}) {
            auto e = est.estimate(alpha, 0.0, mu);
            sampled.push_back(e);
            c.expectf(std::abs(e.value - hat_kappa(mu)) <= 2.0 * e.stderr_,
                      "phi(%.1f,0;%.1f) - hat_kappa = %.2e > 2se = %.2e",
                      alpha, mu, e.value - hat_kappa(mu), 2.0 * e.stderr_);
        }

    // annealed matching region: the sampled estimate equals hat_kappa too
    for (auto [alpha, beta] : {std::pair{1.0, 0.3}, {2.0, 0.5}, {0.8, 0.2}, {3.0, 0.6}}) {
        c.expect(in_annealed_region(alpha, beta), "point not in the matching region");
        auto e = est.estimate(alpha, beta, 1.5);
        sampled.push_back(e);
        c.expectf(std::abs(e.value - hat_kappa(1.5)) <= 2.0 * e.stderr_,
                  "phi(%.1f,%.1f;1.5) - hat_kappa = %.2e > 2se = %.2e",
                  alpha, beta, e.value - hat_kappa(1.5), 2.0 * e.stderr_);
    }

    // localized lower bound: phi(beta, beta; 9/8) >= beta/8
    for (double beta : {4.0, 8.0}) {
        auto e = est.estimate(beta, beta, 9.0 / 8.0);
        sampled.push_back(e);
        c.expectf(e.value >= beta / 8.0 - 2.0 * e.stderr_,
                  "phi(%.0f,%.0f;9/8) = %.3f below beta/8 = %.3f", beta, beta,
                  e.value, beta / 8.0);
    }

    // global domination: the quenched rate never drops below the entropy
    for (const auto& e : sampled)
        c.expectf(e.value >= hat_kappa(e.mu) - 2.0 * e.stderr_,
                  "phi(%.1f,%.1f;%.2f) below hat_kappa by more than 2se",
                  e.alpha, e.beta, e.mu);
    return c;
}

Criterion free_energy_structure()
{
    Criterion c;
    // delocalized value at zero contrast is the pure path entropy,
    // independent of the A-block frequency
    for (double p : {0.2, 0.5, 0.8}) {
        auto rho = optimal_frequencies({.p = p, .M = 64, .T = 256, .samples = 2, .seed = 5});
        double f = solve_f_D1(0.0, rho.rho_A).f;
        c.expectf(std::abs(f - 0.5 * std::log(5.0)) < 1e-10,
                  "f_D1(0) at p=%.1f off (1/2) log 5 by %.1e", p,
                  f - 0.5 * std::log(5.0));
    }

    // stationarity of the two-score optimizer
    const auto& rho = rho_p04();
    for (double r : {0.5, 1.0, 2.0}) {
        auto d = solve_f_D1(r, rho.rho_A);
        double e1 = std::log(2.0) + rho.rho_A * std::log(d.x - 2.0)
                  + (1.0 - rho.rho_A) * std::log(d.z - 2.0);
        double e2 = r + std::log(d.x * (d.z - 2.0) / (d.z * (d.x - 2.0)));
        c.expectf(std::abs(e1) < 1e-8 && std::abs(e2) < 1e-8,
                  "stationarity residuals at r=%.1f: %.1e, %.1e", r, e1, e2);
    }

    // refinement chain f_D1 <= f_D2 <= f_L1 <= f_full at 50 random cone points
    PhiEstimator est(PhiConfig{.Ls = {8, 12, 16, 24, 32}, .samples = 6, .seed = 3});
    FullConfig full;
    full.M = 128; full.T = 512; full.samples = 3; full.seed = 1; // matches rho_p04
    auto grid = reduced_mu_grid();
    SplitMix64 rng(42);
    for (int i = 0; i < 50; ++i) {
        double r = 0.05 + 1.95 * rng.next_double();
        double beta = -0.5 * r + (1.0 + 0.5 * r) * rng.next_double();
        double alpha = beta + r;
        PhiProfile phi(est, alpha, beta, grid);
        auto d1 = solve_f_D1(r, rho.rho_A);
        auto d2 = solve_f_D2(alpha, beta, rho);
        auto l1 = solve_f_L1(phi, rho);
        full.f0 = l1.f;
        auto fu = solve_f_full(phi, 0.4, full);
        double rho_slack = r * (rho.stderr_A + rho.stderr_BA);
        c.expectf(d1.f <= d2.f + 1e-3, "(%.3f,%.3f): f_D1 > f_D2", alpha, beta);
        c.expectf(d2.f <= l1.f + 1e-3 + 2.0 * l1.stderr_,
                  "(%.3f,%.3f): f_D2 > f_L1 + tol", alpha, beta);
        c.expectf(l1.f <= fu.f + 1e-3 + 2.0 * (fu.stderr_ + l1.stderr_) + rho_slack,
                  "(%.3f,%.3f): f_L1 > f_full + tol", alpha, beta);
    }

    // f_D1 and f_D2 depend on the diagonal only
    for (double r : {0.5, 1.2}) {
        std::vector<double> v1, v2;
        for (double beta : {-0.2, 0.4, 1.7}) {
            v1.push_back(solve_f_D1((beta + r) - beta, rho.rho_A).f);
            v2.push_back(solve_f_D2(beta + r, beta, rho).f);
        }
        auto span = [](const std::vector<double>& v) {
            return *std::max_element(v.begin(), v.end())
                 - *std::min_element(v.begin(), v.end());
        };
        c.expectf(span(v1) < 1e-10 && span(v2) < 1e-10,
                  "f_D1/f_D2 vary along the diagonal r=%.1f: %.1e, %.1e",
                  r, span(v1), span(v2));
    }
    return c;
}

Criterion phase_diagram()
{
    Criterion c;
    auto& ex = explorer();
    double astar = ex.alpha_star();
    c.expect(astar > 0.0, "alpha_star not positive");
    double resid = ex.d1_exit_profile(astar);
    c.expectf(std::abs(resid) < 1e-6, "exit-profile residual at alpha_star = %.1e", resid);

    auto at = ex.classify_point(astar, 0.0);
    auto past = ex.classify_point(astar + 0.1, 0.0);
    c.expectf(at.phase == Phase::D1, "(alpha*, 0) -> %s, want D1", phase_name(at.phase));
    c.expectf(past.phase == Phase::D2, "(alpha*+0.1, 0) -> %s, want D2",
              phase_name(past.phase));

    // critical curves sit above the universal lower bound
    auto cp1a = ex.beta_c1(0.5 * astar);
    auto cp1b = ex.beta_c1(0.9 * astar);
    auto cp1s = ex.beta_c1(astar);
    auto cp2a = ex.beta_c2(astar + 0.01);
    auto cp2b = ex.beta_c2(astar + 0.5);
    for (const auto& [cp, r] : {std::pair<CurvePoint, double>{cp1a, 0.5 * astar},
                                {cp1b, 0.9 * astar},
                                {cp1s, astar},
                                {cp2a, astar + 0.01},
                                {cp2b, astar + 0.5}}) {
        c.expectf(!cp.censored, "critical curve censored at r=%.3f", r);
        c.expectf(cp.beta + cp.band >= lower_bound_curve(r) - 1e-12,
                  "critical curve below the lower bound at r=%.3f", r);
    }
    c.expect(cp2a.beta > 0.0, "beta_c2 not positive near alpha_star");
    // the two curves meet from the right no higher than beta_c1 at alpha_star.
    // At r = alpha_star the delocalization margin is ~0 throughout the
    // matching region (that is what defines alpha_star), so the sign-crossing
    // estimate under-brackets beta_c1 there; certify an upper bracket instead
    // as the first beta where the margin is positive beyond two error bars.
    double bc1_lo = lower_bound_curve(astar), bc1_hi = 2.0;
    auto significant = [&](double beta) {
        auto [m, e] = ex.d1_margin(beta + astar, beta);
        return m - 2.0 * e > 0.0;
    };
    while (!significant(bc1_hi) && bc1_hi < 16.0) bc1_hi *= 2.0;
    if (bc1_hi < 16.0)
        for (int it = 0; it < 6; ++it) {
            double mid = 0.5 * (bc1_lo + bc1_hi);
            (significant(mid) ? bc1_hi : bc1_lo) = mid;
        }
    c.expectf(cp2a.beta - cp2a.band <= bc1_hi + 1e-9,
              "beta_c2(a*+0.01) = %.3f - band %.3f above the beta_c1(a*) "
              "upper bracket %.3f", cp2a.beta, cp2a.band, bc1_hi);

    // constancy of the full free energy along delocalized diagonal segments
    PhiEstimator est(PhiConfig{.Ls = {8, 12, 16}, .samples = 4, .seed = 2});
    auto grid = reduced_mu_grid();
    for (double r : {0.6 * astar, astar + 0.5}) {
        double lb = lower_bound_curve(r);
        std::vector<double> fs;
        double max_se = 0.0;
        for (int k = 0; k < 5; ++k) {
            double beta = -0.4 * r + (0.4 * r + 0.8 * lb) * k / 4.0;
            PhiProfile phi(est, beta + r, beta, grid);
            auto l1 = solve_f_L1(phi, rho_p04());
            FullConfig full;
            full.M = 128; full.T = 512; full.samples = 3; full.seed = 1;
            full.f0 = l1.f;
            auto fu = solve_f_full(phi, 0.4, full);
            fs.push_back(fu.f);
            max_se = std::max(max_se, fu.stderr_);
        }
        double m = mean(fs), var = 0.0;
        for (double v : fs) var += (v - m) * (v - m) / fs.size();
        double tol = 1e-3 + 2.0 * max_se;
        c.expectf(var < tol * tol,
                  "f_full varies on the r=%.3f delocalized segment: var=%.1e", r, var);
    }

    // labels along each diagonal step only forward: delocalized -> L1 -> L2
    for (double r : {0.6 * astar, astar + 0.5}) {
        int prev_rank = -1;
        for (double beta : {0.3 * lower_bound_curve(r), 1.5, 8.0}) {
            auto cl = ex.classify_point(beta + r, beta);
            int rank;
            switch (cl.phase) {
                case Phase::D1: case Phase::D2: rank = 0; break;
                case Phase::L1: rank = 1; break;
                case Phase::L2: rank = 2; break;
                default: continue; // indecisive near a boundary: skip
            }
            c.expectf(rank >= prev_rank,
                      "label order breaks at r=%.3f, beta=%.2f: %s", r, beta,
                      phase_name(cl.phase));
            prev_rank = std::max(prev_rank, rank);
        }
    }
    return c;
}

Criterion transition_orders()
{
    Criterion c;
    auto& ex = explorer();
    double astar = ex.alpha_star();

    // D1-D2: the excess over the second-order Taylor continuation of f_D1
    // is quadratic-scale, so the transition is of second order
    auto d12 = ex.transition_gap_probe(PhaseExplorer::ProbeKind::D1D2, astar,
                                       {0.02, 0.04, 0.06, 0.08, 0.1});
    double prev = 0.0;
    for (const auto& row : d12) {
        c.expectf(row.gap > 0.0 && row.gap / (row.delta * row.delta) > 1e-4,
                  "D1-D2 gap at delta=%.2f not quadratic-scale: %.2e", row.delta, row.gap);
        c.expectf(row.gap >= prev, "D1-D2 gap not increasing at delta=%.2f", row.delta);
        prev = row.gap;
    }
    c.expect(d12.front().gap < 0.3 * d12.back().gap + 1e-9,
             "D1-D2 gap does not vanish towards delta=0");

    // D1-L1: no first-order jump (gap/delta -> 0) and the second-order
    // coefficient stays bounded below, all within the sampling noise
    double r = std::min(0.25, 0.5 * astar);
    auto d1l1 = ex.transition_gap_probe(PhaseExplorer::ProbeKind::D1L1, r,
                                        {0.05, 0.1, 0.2});
    const auto& lo = d1l1.front();
    const auto& hi = d1l1.back();
    for (const auto& row : d1l1)
        c.expectf(row.gap >= -3.0 * row.stderr_,
                  "D1-L1 gap at delta=%.2f below the noise floor: %.2e", row.delta,
                  row.gap);
    c.expectf(lo.gap / lo.delta
                  <= std::max(0.0, hi.gap / hi.delta)
                     + 3.0 * (lo.stderr_ / lo.delta + hi.stderr_ / hi.delta),
              "D1-L1 first-order coefficient does not vanish: %.2e", lo.gap / lo.delta);
    c.expect(std::abs(lo.gap) <= std::abs(hi.gap) + 3.0 * (lo.stderr_ + hi.stderr_),
             "D1-L1 gap does not shrink towards delta=0");
    return c;
}

Criterion finite_model()
{
    Criterion c;
    // exact-enumeration equality at tiny sizes
    for (int n : {8, 12, 16})
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            auto inst = make_finite_instance(n, 4, 1.1, 0.3, 0.5, seed);
            double dp = finite_log_partition(inst);
            double en = testsupport::enumerate_log_partition(inst);
            c.expectf(std::abs(dp - en) < 1e-12,
                      "DP vs enumeration at n=%d seed=%llu: %.2e", n,
                      (unsigned long long)seed, dp - en);
        }

    // convergence towards the infinite-volume solver along an (n, L) ladder
    PhiEstimator est(PhiConfig{.Ls = {8, 16}, .samples = 4, .seed = 2});
    const std::vector<std::pair<int, int>> ladder{{256, 8}, {1024, 16}, {2048, 32}};
    for (auto [alpha, beta] : {std::pair{0.5, 0.1}, {0.8, 0.2}, {1.0, -0.3}}) {
        auto rungs = convergence_study(alpha, beta, 0.4, ladder, 3, 17);
        c.expectf(rungs.back().spread < rungs.front().spread,
                  "(%.1f,%.1f): seed spread not shrinking (%.3f -> %.3f)", alpha, beta,
                  rungs.front().spread, rungs.back().spread);
        PhiProfile phi(est, alpha, beta);
        auto fu = solve_f_full(phi, 0.4, {.M = 128, .T = 512, .samples = 3, .seed = 1});
        c.expectf(std::abs(rungs.back().mean - fu.f) < 0.1,
                  "(%.1f,%.1f): largest rung %.4f vs f_full %.4f", alpha, beta,
                  rungs.back().mean, fu.f);
    }
    return c;
}

// --- determinism of the CLI ------------------------------------------------------

std::string run_cli(const std::string& cli, const std::string& args, int& rc)
{
    std::string cmd = cli + " " + args + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) { rc = -1; return ""; }
    std::string out;
    char buf[4096];
    size_t k;
    while ((k = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, k);
    int status = pclose(p);
    rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

std::string slurp(const std::filesystem::path& f)
{
    std::ifstream in(f, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Criterion determinism()
{
    Criterion c;
    const char* cli = std::getenv("COPOLEM_CLI");
    if (!cli) {
        c.expect(false, "COPOLEM_CLI not set");
        return c;
    }
    const std::vector<std::string> stdout_cmds = {
        "entropy --kappa-diag 2,2.5,4 --hat-kappa 1.5,3 --G 1:3",
        "freq --p 0.35 --field-size 64 --field-steps 128 --field-samples 2 --seed 9",
        "blocks --r 0.8 --grid 2.5,4",
        "solve --alpha 1 --beta 0.2 --p 0.4 --field-size 64 --field-steps 128"
        " --field-samples 2 --L-ladder 8,12 --samples 2",
    };
    for (const auto& cmd : stdout_cmds) {
        int rc1 = 0, rc2 = 0;
        std::string a = run_cli(cli, cmd, rc1);
        std::string b = run_cli(cli, cmd, rc2);
        c.expectf(rc1 == 0 && rc2 == 0, "'%s' exited nonzero", cmd.c_str());
        c.expectf(a == b, "'%s' not byte-identical across reruns", cmd.c_str());
    }

    // file artifacts, including metadata
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "copolem_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    struct FileCase { const char* format; std::array<const char*, 2> exts; };
    for (const FileCase& fc : {FileCase{"csv", {".csv", ".meta.json"}},
                               FileCase{"json", {".json", ".meta.json"}}}) {
        std::string base = (dir / (std::string("phi_") + fc.format)).string();
        std::string cmd = "phi --alpha 1 --beta 0.6 --grid 1,1.5,2"
                          " --L-ladder 8,12,16 --samples 3 --format "
                          + std::string(fc.format) + " --out " + base;
        std::array<std::string, 2> first;
        for (int round = 0; round < 2; ++round) {
            int rc = 0;
            run_cli(cli, cmd, rc);
            c.expect(rc == 0, "phi file run exited nonzero");
            for (size_t i = 0; i < fc.exts.size(); ++i) {
                std::string body = slurp(base + fc.exts[i]);
                c.expectf(!body.empty(), "missing artifact %s", fc.exts[i]);
                if (round == 0) first[i] = body;
                else c.expectf(body == first[i], "artifact %s differs across reruns",
                               fc.exts[i]);
            }
        }
    }
    fs::remove_all(dir);
    return c;
}

} // namespace

int main()
{
    struct Entry {
        const char* name;
        double budget_s;
        std::function<Criterion()> run;
    };
    const std::vector<Entry> entries = {
        {"closed-form arithmetic", 1, closed_forms},
        {"entropy enumeration oracles", 300, entropy_oracles},
        {"quenched-interface identities", 1800, interface_identities},
        {"free-energy structure", 1800, free_energy_structure},
        {"phase-diagram structure (p=0.3)", 7200, phase_diagram},
        {"transition-order probes", 7200, transition_orders},
        {"finite-model cross-validation", 3600, finite_model},
        {"CLI determinism", 600, determinism},
    };
    // ACCEPT_ONLY=comma-separated criterion numbers: development filter
    const char* only = std::getenv("ACCEPT_ONLY");
    int failed = 0;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (only) {
            std::string sel = std::string(",") + only + ",";
            if (sel.find("," + std::to_string(i + 1) + ",") == std::string::npos)
                continue;
        }
        auto t0 = clk::now();
        Criterion c = entries[i].run();
        double dt = std::chrono::duration<double>(clk::now() - t0).count();
        if (dt > entries[i].budget_s) {
            c.ok = false;
            c.failures.push_back("runtime budget exceeded");
        }
        std::printf("criterion %zu/8 %-34s %s  (%.1fs)\n", i + 1, entries[i].name,
                    c.ok ? "PASS" : "FAIL", dt);
        for (const auto& f : c.failures) std::printf("    - %s\n", f.c_str());
        std::fflush(stdout);
        if (!c.ok) ++failed;
    }
    return failed;
}
