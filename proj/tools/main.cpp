// Command-line front end: evaluates the library's entropies, interface
// estimates, block free energies, solvers, and phase-diagram tracing, and
// emits deterministic CSV/JSON tables for plotting.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "copolem/entropy.hpp"
#include "copolem/finite_model.hpp"
#include "copolem/phases.hpp"

namespace {

using namespace copolem;

// --- argument handling --------------------------------------------------------

const std::set<std::string> kBoolFlags = {"full", "classify", "allow-uncertain"};

struct Args {
    std::string command;
    std::map<std::string, std::string> kv;

    bool has(const std::string& k) const { return kv.count(k) > 0; }
    std::string get(const std::string& k, const std::string& dflt = "") const
    {
        auto it = kv.find(k);
        return it == kv.end() ? dflt : it->second;
    }
    std::string require(const std::string& k) const
    {
        auto it = kv.find(k);
        if (it == kv.end()) throw std::runtime_error("missing required flag --" + k);
        return it->second;
    }
    double num(const std::string& k) const { return std::stod(require(k)); }
    double num(const std::string& k, double dflt) const
    {
        return has(k) ? std::stod(kv.at(k)) : dflt;
    }
    int integer(const std::string& k, int dflt) const
    {
        return has(k) ? std::stoi(kv.at(k)) : dflt;
    }
    bool flag(const std::string& k) const { return get(k) == "1"; }
};

std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::istringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, sep)) out.push_back(tok);
    return out;
}

std::vector<double> parse_doubles(const std::string& s)
{
    std::vector<double> out;
    for (const auto& t : split(s, ',')) out.push_back(std::stod(t));
    if (out.empty()) throw std::runtime_error("empty list: '" + s + "'");
    return out;
}

std::vector<std::pair<double, double>> parse_pairs(const std::string& s)
{
    std::vector<std::pair<double, double>> out;
    for (const auto& t : split(s, ',')) {
        auto p = split(t, ':');
        if (p.size() != 2) throw std::runtime_error("expected X:Y pair, got '" + t + "'");
        out.emplace_back(std::stod(p[0]), std::stod(p[1]));
    }
    return out;
}

std::vector<int> parse_ints(const std::string& s)
{
    std::vector<int> out;
    for (const auto& t : split(s, ',')) out.push_back(std::stoi(t));
    return out;
}

// config file: one `key=value` per line, '#' comments; flags win
void load_config_file(Args& args, const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string v) {
            auto a = v.find_first_not_of(" \t");
            auto b = v.find_last_not_of(" \t");
            return a == std::string::npos ? std::string() : v.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
        if (!key.empty() && !args.has(key)) args.kv[key] = val;
    }
}

Args parse_args(int argc, char** argv)
{
    Args args;
    if (argc < 2) throw std::runtime_error("usage: copolem <command> [flags]");
    args.command = argv[1];
    for (int i = 2; i < argc; ++i) {
        std::string tok = argv[i];
        if (tok.rfind("--", 0) != 0)
            throw std::runtime_error("unexpected argument '" + tok + "'");
        tok = tok.substr(2);
        auto eq = tok.find('=');
        if (eq != std::string::npos) {
            args.kv[tok.substr(0, eq)] = tok.substr(eq + 1);
        } else if (kBoolFlags.count(tok)) {
            args.kv[tok] = "1";
        } else {
            if (i + 1 >= argc) throw std::runtime_error("flag --" + tok + " needs a value");
            args.kv[tok] = argv[++i];
        }
    }
    if (args.has("config")) load_config_file(args, args.kv.at("config"));
    return args;
}

// --- output plumbing ----------------------------------------------------------

std::string fmt(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct Table {
    std::vector<std::string> cols;
    std::vector<std::vector<std::string>> rows;

    void row(std::vector<std::string> r) { rows.push_back(std::move(r)); }
};

std::string csv_quote(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) { if (c == '"') q += '"'; q += c; }
    return q + "\"";
}

void write_csv(const Table& t, std::ostream& out)
{
    for (std::size_t i = 0; i < t.cols.size(); ++i)
        out << (i ? "," : "") << csv_quote(t.cols[i]);
    out << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i)
            out << (i ? "," : "") << csv_quote(r[i]);
        out << "\n";
    }
}

std::string json_quote(const std::string& s)
{
    std::string q = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') q += '\\';
        q += c;
    }
    return q + "\"";
}

bool json_is_literal(const std::string& s)
{
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end && *end == '\0';
}

void write_json(const Table& t, std::ostream& out)
{
    out << "[\n";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        out << "  {";
        for (std::size_t i = 0; i < t.cols.size(); ++i) {
            const std::string& v = t.rows[r][i];
            out << (i ? ", " : "") << json_quote(t.cols[i]) << ": "
                << (json_is_literal(v) ? v : json_quote(v));
        }
        out << "}" << (r + 1 < t.rows.size() ? "," : "") << "\n";
    }
    out << "]\n";
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) { h ^= c; h *= 1099511628211ull; }
    return h;
}

// metadata: the canonical flag set, its hash, plus command-specific extras
std::string metadata_json(const Args& args,
                          const std::vector<std::pair<std::string, std::string>>& extra)
{
    std::string canon = args.command;
    for (const auto& [k, v] : args.kv) canon += ";" + k + "=" + v;
    std::ostringstream out;
    out << "{\n  \"command\": " << json_quote(args.command) << ",\n";
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx",
                  static_cast<unsigned long long>(fnv1a(canon)));
    out << "  \"config_hash\": \"" << hash << "\",\n";
    out << "  \"config\": {";
    bool first = true;
    for (const auto& [k, v] : args.kv) {
        out << (first ? "" : ", ") << json_quote(k) << ": " << json_quote(v);
        first = false;
    }
    out << "},\n";
    for (const auto& [k, v] : extra)
        out << "  " << json_quote(k) << ": "
            << (json_is_literal(v) || v == "true" || v == "false" ? v : json_quote(v))
            << ",\n";
    out << "  \"format_version\": 1\n}\n";
    return out.str();
}

void emit(const Args& args, const Table& t,
          const std::vector<std::pair<std::string, std::string>>& extra,
          const std::string& suffix = "")
{
    const std::string format = args.get("format", "csv");
    if (format != "csv" && format != "json")
        throw std::runtime_error("--format must be csv or json");
    auto write_table = [&](std::ostream& out) {
        format == "csv" ? write_csv(t, out) : write_json(t, out);
    };
    if (args.has("out")) {
        const std::string base = args.kv.at("out") + suffix;
        std::ofstream out(base + "." + format);
        if (!out) throw std::runtime_error("cannot write '" + base + "." + format + "'");
        write_table(out);
        std::ofstream meta(base + ".meta.json");
        meta << metadata_json(args, extra);
    } else {
        write_table(std::cout);
        // metadata trailer, comment-prefixed so table parsers can skip it
        std::istringstream meta(metadata_json(args, extra));
        std::string line;
        while (std::getline(meta, line)) std::cout << "# " << line << "\n";
    }
}

// --- shared builders ----------------------------------------------------------

PhiConfig phi_config(const Args& args)
{
    PhiConfig cfg;
    cfg.Ls = {8, 12, 16, 24, 32, 48};
    if (args.has("L-ladder")) cfg.Ls = parse_ints(args.kv.at("L-ladder"));
    cfg.samples = args.integer("samples", 12);
    cfg.seed = static_cast<std::uint64_t>(args.integer("seed", 1));
    cfg.cache_path = args.get("cache");
    return cfg;
}

FreqConfig freq_config(const Args& args)
{
    FreqConfig cfg;
    cfg.p = args.num("p");
    cfg.M = args.integer("field-size", cfg.M);
    cfg.T = args.integer("field-steps", cfg.T);
    cfg.samples = args.integer("field-samples", cfg.samples);
    cfg.seed = static_cast<std::uint64_t>(args.integer("seed", 1));
    return cfg;
}

// --- commands -------------------------------------------------------------------

int cmd_entropy(const Args& args)
{
    Table t;
    t.cols = {"kind", "arg1", "arg2", "value"};
    bool any = false;
    if (args.has("kappa-diag")) {
        any = true;
        for (double a : parse_doubles(args.kv.at("kappa-diag")))
            t.row({"kappa_diag", fmt(a), "1", fmt(kappa_diag(a))});
    }
    if (args.has("kappa")) {
        any = true;
        for (auto [a, b] : parse_pairs(args.kv.at("kappa")))
            t.row({"kappa", fmt(a), fmt(b), fmt(kappa_block(a, b))});
    }
    if (args.has("hat-kappa")) {
        any = true;
        for (double mu : parse_doubles(args.kv.at("hat-kappa")))
            t.row({"hat_kappa", fmt(mu), "", fmt(hat_kappa(mu))});
    }
    if (args.has("G")) {
        any = true;
        for (auto [mu, a] : parse_pairs(args.kv.at("G")))
            t.row({"G", fmt(mu), fmt(a), fmt(G_fn(mu, a))});
    }
    if (!any)
        throw std::runtime_error(
            "entropy: give --kappa-diag, --kappa, --hat-kappa, or --G");
    emit(args, t, {});
    return 0;
}

int cmd_phi(const Args& args)
{
    double alpha = args.num("alpha"), beta = args.num("beta");
    PhiEstimator est(phi_config(args));
    Table t;
    t.cols = {"mu", "value", "stderr", "annealed", "samples"};
    std::vector<double> grid = args.has("grid")
                             ? parse_doubles(args.kv.at("grid"))
                             : PhiProfile::default_grid();
    for (double mu : grid) {
        auto e = est.estimate(alpha, beta, mu);
        t.row({fmt(mu), fmt(e.value), fmt(e.stderr_),
               e.annealed ? "1" : "0", std::to_string(e.samples)});
    }
    emit(args, t, {{"alpha", fmt(alpha)}, {"beta", fmt(beta)}});
    return 0;
}

int cmd_blocks(const Args& args)
{
    double alpha, beta;
    if (args.has("r")) {
        alpha = args.num("r");
        beta = 0.0;
    } else {
        alpha = args.num("alpha");
        beta = args.num("beta");
    }
    double r = alpha - beta;
    if (r < 0.0) throw std::runtime_error("blocks: need alpha >= beta (cone)");
    std::vector<double> grid = args.has("grid") ? parse_doubles(args.kv.at("grid"))
                                                : std::vector<double>{2.5, 3.0, 4.0, 6.0};
    PhiEstimator est(phi_config(args));
    PhiProfile phi(est, alpha, beta);
    Table t;
    t.cols = {"a", "psi_AA", "psi_BB", "psi_BA_hat", "psi_AB", "psi_BA", "cross_stderr"};
    for (double a : grid) {
        if (a < 2.0) throw std::runtime_error("blocks: crossing ratios need a >= 2");
        auto ab = psi_cross(CrossKind::AB, phi, a);
        auto ba = psi_cross(CrossKind::BA, phi, a);
        t.row({fmt(a), fmt(psi_AA(a)), fmt(psi_BB(r, a)), fmt(psi_BA_hat(r, a)),
               fmt(ab.value), fmt(ba.value),
               fmt(std::max(ab.stderr_, ba.stderr_))});
    }
    emit(args, t, {{"alpha", fmt(alpha)}, {"beta", fmt(beta)},
                   {"exact_profile", phi.exact() ? "true" : "false"}});
    return 0;
}

int cmd_freq(const Args& args)
{
    auto rho = optimal_frequencies(freq_config(args));
    Table t;
    t.cols = {"quantity", "value", "stderr"};
    t.row({"rho_A", fmt(rho.rho_A), fmt(rho.stderr_A)});
    t.row({"rho_BA", fmt(rho.rho_BA), fmt(rho.stderr_BA)});
    t.row({"rho_BB", fmt(rho.rho_BB), ""});
    emit(args, t, {{"samples", std::to_string(rho.samples)}});
    return 0;
}

int cmd_solve(const Args& args)
{
    double alpha = args.num("alpha"), beta = args.num("beta");
    if (alpha - beta < 0.0 || alpha < std::abs(beta))
        throw std::runtime_error("solve: (alpha, beta) must lie in the cone");
    auto rho = optimal_frequencies(freq_config(args));
    PhiEstimator est(phi_config(args));
    PhiProfile phi(est, alpha, beta);
    Table t;
    t.cols = {"level", "f", "stderr", "x_AA", "y_BA", "z_BB"};
    auto d1 = solve_f_D1(alpha - beta, rho.rho_A);
    t.row({"f_D1", fmt(d1.f), "0", fmt(d1.x), "", fmt(d1.z)});
    auto d2 = solve_f_D2(alpha, beta, rho);
    t.row({"f_D2", fmt(d2.f), "0", fmt(d2.x), fmt(d2.y), fmt(d2.z)});
    auto l1 = solve_f_L1(phi, rho);
    t.row({"f_L1", fmt(l1.f), fmt(l1.stderr_), fmt(l1.x), fmt(l1.y), fmt(l1.z)});
    std::vector<std::pair<std::string, std::string>> extra = {
        {"alpha", fmt(alpha)}, {"beta", fmt(beta)},
        {"rho_A", fmt(rho.rho_A)}, {"rho_BA", fmt(rho.rho_BA)}};
    if (args.flag("full")) {
        FullConfig fc;
        fc.M = args.integer("field-size", fc.M);
        fc.T = args.integer("field-steps", fc.T);
        fc.samples = args.integer("field-samples", fc.samples);
        fc.seed = static_cast<std::uint64_t>(args.integer("seed", 1));
        auto fu = solve_f_full(phi, args.num("p"), fc);
        t.row({"f_full", fmt(fu.f), fmt(fu.stderr_),
               fmt(fu.a_AA), fmt(fu.a_BA), fmt(fu.a_BB)});
    }
    int rc = 0;
    if (args.flag("classify")) {
        auto cl = classify(phi, rho);
        extra.emplace_back("phase", phase_name(cl.phase));
        extra.emplace_back("margin_D1", fmt(cl.margin_D1));
        extra.emplace_back("margin_D2", fmt(cl.margin_D2));
        if (cl.phase == Phase::Uncertain && !args.flag("allow-uncertain")) rc = 2;
    }
    emit(args, t, extra);
    return rc;
}

int cmd_phase(const Args& args)
{
    double p = args.num("p");
    PhaseConfig cfg;
    cfg.phi = phi_config(args);
    cfg.beta_max = args.num("beta-max", cfg.beta_max);
    cfg.beta_tol = args.num("beta-tol", cfg.beta_tol);
    if (args.has("mu-grid")) cfg.mu_grid = parse_doubles(args.kv.at("mu-grid"));
    auto rho = optimal_frequencies(freq_config(args));
    PhaseExplorer ex(p, rho, cfg);
    double astar = ex.alpha_star();

    std::vector<double> r_grid = args.has("r-grid")
                               ? parse_doubles(args.kv.at("r-grid"))
                               : std::vector<double>{0.5 * astar, astar + 0.5};
    std::vector<double> beta_grid = args.has("beta-grid")
                                  ? parse_doubles(args.kv.at("beta-grid"))
                                  : std::vector<double>{-0.25, 0.25};
    auto pd = ex.trace_phase_diagram(r_grid, beta_grid);

    Table curves;
    curves.cols = {"kind", "r", "beta", "band", "uncertain", "censored"};
    int uncertain = 0;
    auto add_curve = [&](const char* kind, const std::vector<CurvePoint>& pts) {
        for (const auto& cp : pts) {
            curves.row({kind, fmt(cp.r), fmt(cp.beta), fmt(cp.band),
                        cp.uncertain ? "1" : "0", cp.censored ? "1" : "0"});
            uncertain += cp.uncertain ? 1 : 0;
        }
    };
    add_curve("beta_c1", pd.beta_c1);
    add_curve("beta_c2", pd.beta_c2);
    add_curve("lower_bound", pd.lower_bound);

    Table grid;
    grid.cols = {"r", "beta", "phase"};
    for (const auto& cell : pd.grid) {
        grid.row({fmt(cell.r), fmt(cell.beta), phase_name(cell.phase)});
        uncertain += cell.phase == Phase::Uncertain ? 1 : 0;
    }

    std::vector<std::pair<std::string, std::string>> extra = {
        {"alpha_star", fmt(pd.alpha_star)},
        {"l1_l2_boundary", "conjectural"},
        {"uncertain_count", std::to_string(uncertain)}};
    emit(args, curves, extra, args.has("out") ? "_curves" : "");
    emit(args, grid, extra, args.has("out") ? "_grid" : "");
    return uncertain > 0 && !args.flag("allow-uncertain") ? 2 : 0;
}

int cmd_probe_order(const Args& args)
{
    const std::string kind_s = args.require("kind");
    PhaseExplorer::ProbeKind kind;
    if (kind_s == "D1D2") kind = PhaseExplorer::ProbeKind::D1D2;
    else if (kind_s == "D1L1") kind = PhaseExplorer::ProbeKind::D1L1;
    else if (kind_s == "D2L1") kind = PhaseExplorer::ProbeKind::D2L1;
    else throw std::runtime_error("probe-order: --kind must be D1D2, D1L1, or D2L1");

    PhaseConfig cfg;
    cfg.phi = phi_config(args);
    auto rho = optimal_frequencies(freq_config(args));
    PhaseExplorer ex(args.num("p"), rho, cfg);
    double astar = ex.alpha_star();
    double r = args.num("r", kind == PhaseExplorer::ProbeKind::D1D2 ? astar
                                                                   : 0.5 * astar);
    std::vector<double> deltas = args.has("deltas")
                               ? parse_doubles(args.kv.at("deltas"))
                               : std::vector<double>{0.02, 0.04, 0.06, 0.08, 0.1};
    auto rows = ex.transition_gap_probe(kind, r, deltas);

    Table t;
    t.cols = {"delta", "gap", "stderr", "noise_dominated"};
    std::vector<double> lg_d, lg_g;
    for (const auto& row : rows) {
        t.row({fmt(row.delta), fmt(row.gap), fmt(row.stderr_),
               row.noise_dominated ? "1" : "0"});
        if (row.gap > 0.0 && !row.noise_dominated) {
            lg_d.push_back(std::log(row.delta));
            lg_g.push_back(std::log(row.gap));
        }
    }
    auto [fp, fpp] = ex.f_D1_taylor(astar);
    std::vector<std::pair<std::string, std::string>> extra = {
        {"alpha_star", fmt(astar)}, {"r", fmt(r)},
        {"f_D1_prime", fmt(fp)}, {"f_D1_second", fmt(fpp)}};
    if (lg_d.size() >= 2) {
        auto fit = fit_linear(lg_d, lg_g);
        extra.emplace_back("effective_order", fmt(fit.slope));
    }
    emit(args, t, extra);
    return 0;
}

int cmd_validate(const Args& args)
{
    double alpha = args.num("alpha", 0.5), beta = args.num("beta", 0.1);
    double p = args.num("p");
    double tol = args.num("tol", 0.12);
    int seeds = args.integer("seeds", 4);
    std::vector<std::pair<int, int>> ladder = {{128, 4}, {256, 8}, {1024, 16}};
    if (args.has("ladder")) {
        ladder.clear();
        for (auto [n, L] : parse_pairs(args.kv.at("ladder")))
            ladder.emplace_back(static_cast<int>(n), static_cast<int>(L));
    }
    auto study = convergence_study(alpha, beta, p, ladder, seeds,
                                   static_cast<std::uint64_t>(args.integer("seed", 1)));

    PhiEstimator est(phi_config(args));
    PhiProfile phi(est, alpha, beta);
    FullConfig fc;
    fc.samples = 3;
    fc.seed = static_cast<std::uint64_t>(args.integer("seed", 1));
    auto full = solve_f_full(phi, p, fc);

    Table t;
    t.cols = {"n", "L", "mean", "spread", "gap_to_f_full"};
    for (const auto& rung : study)
        t.row({std::to_string(rung.n), std::to_string(rung.L), fmt(rung.mean),
               fmt(rung.spread), fmt(rung.mean - full.f)});
    double gap = std::abs(study.back().mean - full.f);
    bool shrunk = study.back().spread < study.front().spread;
    emit(args, t, {{"f_full", fmt(full.f)}, {"f_full_stderr", fmt(full.stderr_)},
                   {"largest_rung_gap", fmt(gap)}, {"tolerance", fmt(tol)},
                   {"spread_shrinks", shrunk ? "true" : "false"}});
    if (gap > tol)
        throw std::runtime_error("validate: largest-rung gap " + fmt(gap)
                                 + " exceeds tolerance " + fmt(tol));
    if (!shrunk)
        throw std::runtime_error("validate: seed-to-seed spread did not shrink");
    return 0;
}

const char* kUsage =
    "usage: copolem <command> [--flag value ...]\n"
    "commands:\n"
    "  entropy      closed-form path entropies (--kappa-diag, --kappa, --hat-kappa, --G)\n"
    "  phi          quenched interface rate estimates (--alpha, --beta, --grid)\n"
    "  blocks       block-pair free energies (--r | --alpha/--beta, --grid)\n"
    "  freq         optimal block-visit frequencies (--p)\n"
    "  solve        free-energy levels at a cone point (--alpha, --beta, --p, [--full, --classify])\n"
    "  phase        phase diagram trace (--p, [--r-grid, --beta-grid, --out])\n"
    "  probe-order  transition-order gap probes (--kind, --p, [--r, --deltas])\n"
    "  validate     finite-size oracle vs solver (--p, [--alpha, --beta, --ladder, --tol])\n"
    "common flags: --seed, --samples, --L-ladder, --cache, --out, --format csv|json, --config\n";

} // namespace

int main(int argc, char** argv)
{
    try {
        Args args = parse_args(argc, argv);
        if (args.command == "entropy") return cmd_entropy(args);
        if (args.command == "phi") return cmd_phi(args);
        if (args.command == "blocks") return cmd_blocks(args);
        if (args.command == "freq") return cmd_freq(args);
        if (args.command == "solve") return cmd_solve(args);
        if (args.command == "phase") return cmd_phase(args);
        if (args.command == "probe-order") return cmd_probe_order(args);
        if (args.command == "validate") return cmd_validate(args);
        if (args.command == "help" || args.command == "--help") {
            std::cout << kUsage;
            return 0;
        }
        throw std::runtime_error("unknown command '" + args.command + "'");
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
