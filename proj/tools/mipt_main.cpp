// Command-line front end: runs simulation sweeps from a config file and the
// statistical analysis pipeline on the resulting tables.

#include <CLI11.hpp>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mipt/analysis.hpp"
#include "mipt/checkpoint.hpp"
#include "mipt/config.hpp"
#include "mipt/table.hpp"
#include "mipt/trajectory.hpp"
#include "mipt/version.hpp"

namespace {

using namespace mipt;

std::string hash_hex(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::vector<std::string> result_meta(std::uint64_t config_hash, std::uint64_t seed) {
    return {"miptsim results", std::string("version=") + kVersion, "config_hash=" + hash_hex(config_hash),
            "master_seed=" + std::to_string(seed)};
}

double opt_or_nan(const std::optional<double>& v) {
    return v ? *v : std::numeric_limits<double>::quiet_NaN();
}

int cmd_run(const std::string& config_path, int threads_override, std::optional<std::uint64_t> seed_override,
            const std::string& output_override, bool no_checkpoint) {
    RunConfig cfg = RunConfig::from_file(config_path);
    if (seed_override) cfg.base.master_seed = *seed_override;
    if (threads_override > 0) cfg.threads = threads_override;
    if (!output_override.empty()) cfg.output_dir = output_override;
    if (no_checkpoint) cfg.checkpoint = false;

    std::filesystem::create_directories(cfg.output_dir);
    const std::string results_path = cfg.output_dir + "/results.csv";
    const std::string checkpoint_path = cfg.output_dir + "/results.checkpoint.jsonl";
    const std::uint64_t hash = cfg.hash();

    std::map<GridKey, EnsembleResult> done;
    if (cfg.checkpoint) done = checkpoint_load(checkpoint_path, hash);

    const std::vector<SimParams> grid = cfg.grid();
    std::size_t completed = 0;
    auto resume = [&](const SimParams& p) -> std::optional<EnsembleResult> {
        auto it = done.find(grid_key(p));
        if (it == done.end()) return std::nullopt;
        EnsembleResult r = it->second;
        r.params = p.resolved();
        std::cerr << "[" << ++completed << "/" << grid.size() << "] resumed L=" << p.L << " lambda=" << p.lambda
                  << " xi_r=" << p.xi_r << " xi_s=" << p.xi_s << "\n";
        return r;
    };
    auto sink = [&](const SimParams& p, const EnsembleResult& r) {
        if (cfg.checkpoint) checkpoint_append(checkpoint_path, hash, p, r);
        std::cerr << "[" << ++completed << "/" << grid.size() << "] L=" << p.L << " lambda=" << p.lambda
                  << " xi_r=" << p.xi_r << " xi_s=" << p.xi_s << " mean_S=" << r.mean_S
                  << " var_S=" << r.var_S << "\n";
    };

    const std::vector<EnsembleResult> results = sweep(grid, cfg.threads, resume, sink);

    Table table;
    table.meta = result_meta(hash, cfg.base.master_seed);
    table.columns = {"L",     "lambda",     "xi_r",     "xi_s",       "mean_S",      "stderr_S",
                     "var_S", "stderr_var", "mean_tmi", "stderr_tmi", "n_effective"};
    bool any_aborted = false;
    for (const EnsembleResult& r : results) {
        table.rows.push_back({static_cast<double>(r.params.L), r.params.lambda, r.params.xi_r, r.params.xi_s,
                              r.mean_S, r.stderr_S, r.var_S, r.stderr_var, opt_or_nan(r.mean_tmi),
                              opt_or_nan(r.stderr_tmi), static_cast<double>(r.n_effective)});
        for (const auto& [idx, reason] : r.aborted) {
            any_aborted = true;
            std::cerr << "aborted realization " << idx << " at L=" << r.params.L << " lambda=" << r.params.lambda
                      << ": " << reason << "\n";
        }
    }
    table.write_csv(results_path);
    std::cerr << "wrote " << results_path << "\n";
    return any_aborted ? 1 : 0;
}

struct ParamGroup {
    double xi_r, xi_s;
    bool operator<(const ParamGroup& o) const {
        if (xi_r != o.xi_r) return xi_r < o.xi_r;
        return xi_s < o.xi_s;
    }
};

int cmd_analyze_peak(const std::string& input, const std::string& out_path, std::vector<double> domain, int nboot,
                     std::uint64_t seed) {
    const Table in = Table::read_csv(input);
    std::map<std::pair<ParamGroup, int>, std::vector<std::array<double, 3>>> groups;  // (lambda, var, err)
    for (std::size_t r = 0; r < in.rows.size(); ++r) {
        const ParamGroup g{in.at(r, "xi_r"), in.at(r, "xi_s")};
        const int L = static_cast<int>(in.at(r, "L"));
        const double lambda = in.at(r, "lambda");
        if (!domain.empty() && (lambda < domain[0] || lambda > domain[1])) continue;
        groups[{g, L}].push_back({lambda, in.at(r, "var_S"), in.at(r, "stderr_var")});
    }
    if (groups.empty()) throw std::runtime_error("no rows within the domain");

    Table out;
    out.meta = {"miptsim analyze peak", std::string("version=") + kVersion, "input=" + input,
                "nboot=" + std::to_string(nboot), "seed=" + std::to_string(seed)};
    out.columns = {"xi_r", "xi_s", "L", "lambda_max", "lambda_max_err", "fit_degree", "fit_chi2_red"};
    for (const auto& [key, pts] : groups) {
        std::vector<double> xs, ys, es;
        for (const auto& p : pts) {
            xs.push_back(p[0]);
            ys.push_back(p[1]);
            es.push_back(p[2]);
        }
        const double lo = domain.empty() ? *std::min_element(xs.begin(), xs.end()) : domain[0];
        const double hi = domain.empty() ? *std::max_element(xs.begin(), xs.end()) : domain[1];
        const FitResult fit = fit_exp_poly(xs, ys, es, +1);
        RngStream rng(derive_stream_seed(seed, static_cast<std::uint64_t>(key.second)));
        const PeakEstimate peak = bootstrap_peak(fit, lo, hi, nboot, rng);
        out.rows.push_back({key.first.xi_r, key.first.xi_s, static_cast<double>(key.second), peak.lambda_max,
                            peak.error, static_cast<double>(fit.degree), fit.reduced_chi2});
    }
    out.write_csv(out_path);
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_analyze_crossing(const std::string& input, const std::string& out_path, std::vector<double> domain,
                         int nboot, std::uint64_t seed) {
    const Table in = Table::read_csv(input);
    std::map<ParamGroup, std::map<int, std::vector<std::array<double, 3>>>> groups;
    for (std::size_t r = 0; r < in.rows.size(); ++r) {
        const double tmi = in.at(r, "mean_tmi");
        if (std::isnan(tmi)) continue;
        const double lambda = in.at(r, "lambda");
        if (!domain.empty() && (lambda < domain[0] || lambda > domain[1])) continue;
        const ParamGroup g{in.at(r, "xi_r"), in.at(r, "xi_s")};
        groups[g][static_cast<int>(in.at(r, "L"))].push_back({lambda, tmi, in.at(r, "stderr_tmi")});
    }
    if (groups.empty()) throw std::runtime_error("no TMI rows within the domain");

    Table out;
    out.meta = {"miptsim analyze crossing", std::string("version=") + kVersion, "input=" + input,
                "nboot=" + std::to_string(nboot), "seed=" + std::to_string(seed)};
    out.columns = {"xi_r", "xi_s", "L_lo", "L_hi", "Lbar", "lambda_cross", "lambda_cross_err"};
    for (const auto& [g, by_size] : groups) {
        if (by_size.size() < 2)
            throw std::runtime_error("crossing needs at least two system sizes per (xi_r, xi_s) group");
        std::vector<int> sizes;
        for (const auto& [L, _] : by_size) sizes.push_back(L);
        for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
            const auto fit_for = [&](int L) {
                std::vector<double> xs, ys, es;
                for (const auto& p : by_size.at(L)) {
                    xs.push_back(p[0]);
                    ys.push_back(p[1]);
                    es.push_back(p[2]);
                }
                return std::tuple{fit_exp_poly(xs, ys, es, -1), *std::min_element(xs.begin(), xs.end()),
                                  *std::max_element(xs.begin(), xs.end())};
            };
            const auto [fit_a, lo_a, hi_a] = fit_for(sizes[i]);
            const auto [fit_b, lo_b, hi_b] = fit_for(sizes[i + 1]);
            const double lo = domain.empty() ? std::max(lo_a, lo_b) : domain[0];
            const double hi = domain.empty() ? std::min(hi_a, hi_b) : domain[1];
            RngStream rng(derive_stream_seed(seed, static_cast<std::uint64_t>(sizes[i])));
            const CrossingEstimate cross = bootstrap_crossing(fit_a, fit_b, lo, hi, nboot, rng);
            const double lbar = 0.5 * (sizes[i] + sizes[i + 1]);
            out.rows.push_back({g.xi_r, g.xi_s, static_cast<double>(sizes[i]), static_cast<double>(sizes[i + 1]),
                                lbar, cross.lambda_cross, cross.error});
        }
    }
    out.write_csv(out_path);
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_analyze_extrapolate(const std::string& input, const std::string& out_path) {
    const Table in = Table::read_csv(input);

    std::string method;
    if (in.col("lambda_max") >= 0 && in.col("L") >= 0)
        method = "variance-peak";
    else if (in.col("lambda_cross") >= 0 && in.col("Lbar") >= 0)
        method = "tmi-crossing";
    else if (in.col("x") >= 0 && in.col("y") >= 0 && in.col("yerr") >= 0)
        method = "generic";
    else
        throw std::runtime_error(
            "unrecognized input schema: need (L, lambda_max, lambda_max_err), "
            "(Lbar, lambda_cross, lambda_cross_err) or (x, y, yerr) columns");

    const bool grouped = in.col("xi_r") >= 0 && in.col("xi_s") >= 0;
    std::map<ParamGroup, std::vector<std::array<double, 3>>> groups;
    for (std::size_t r = 0; r < in.rows.size(); ++r) {
        const ParamGroup g = grouped ? ParamGroup{in.at(r, "xi_r"), in.at(r, "xi_s")} : ParamGroup{0.0, 0.0};
        double x, y, e;
        if (method == "variance-peak") {
            x = 1.0 / in.at(r, "L");
            y = in.at(r, "lambda_max");
            e = in.at(r, "lambda_max_err");
        } else if (method == "tmi-crossing") {
            const double lbar = in.at(r, "Lbar");
            x = 1.0 / (lbar * lbar);
            y = in.at(r, "lambda_cross");
            e = in.at(r, "lambda_cross_err");
        } else {
            x = in.at(r, "x");
            y = in.at(r, "y");
            e = in.at(r, "yerr");
        }
        groups[g].push_back({x, y, e});
    }

    Table out;
    out.meta = {"miptsim analyze extrapolate", std::string("version=") + kVersion, "input=" + input,
                "method=" + method};
    out.columns = {"xi_r", "xi_s", "lambda_c", "lambda_c_err", "n_points"};
    for (const auto& [g, pts] : groups) {
        std::vector<double> xs, ys, es;
        for (const auto& p : pts) {
            xs.push_back(p[0]);
            ys.push_back(p[1]);
            es.push_back(p[2]);
        }
        const auto [intercept, err] = extrapolate_linear(xs, ys, es);
        out.rows.push_back({g.xi_r, g.xi_s, intercept, err, static_cast<double>(pts.size())});
    }
    out.write_csv(out_path);
    std::cerr << "wrote " << out_path << "\n";
    return 0;
}

int cmd_analyze_collapse(const std::string& input, const std::string& out_prefix, double lambda_c,
                         const CollapseOptions& options) {
    const Table in = Table::read_csv(input);
    std::set<std::pair<double, double>> distinct;
    std::vector<CollapsePoint> points;
    for (std::size_t r = 0; r < in.rows.size(); ++r) {
        if (in.col("xi_r") >= 0 && in.col("xi_s") >= 0) distinct.insert({in.at(r, "xi_r"), in.at(r, "xi_s")});
        points.push_back(CollapsePoint{static_cast<int>(in.at(r, "L")), in.at(r, "lambda"), in.at(r, "mean_S"),
                                       in.at(r, "stderr_S")});
    }
    if (distinct.size() > 1)
        throw std::runtime_error("collapse input mixes several (xi_r, xi_s) groups; filter the table first");

    const CollapseResult res = data_collapse(points, lambda_c, options);

    Table out;
    out.meta = {"miptsim analyze collapse", std::string("version=") + kVersion, "input=" + input,
                "lambda_c=" + format_double(lambda_c)};
    out.columns = {"nu", "nu_lo", "nu_hi"};
    out.rows.push_back({res.nu, res.nu_lo, res.nu_hi});
    out.write_csv(out_prefix + ".csv");

    Table profile;
    profile.meta = {"miptsim collapse chi2 profile", "lambda_c=" + format_double(lambda_c)};
    profile.columns = {"nu", "chi2"};
    for (const auto& [nu, chi2] : res.chi2_profile) profile.rows.push_back({nu, chi2});
    profile.write_csv(out_prefix + "_profile.csv");

    std::cerr << "wrote " << out_prefix << ".csv and " << out_prefix << "_profile.csv\n";
    return 0;
}

std::string default_out(const std::string& input, const std::string& suffix) {
    std::filesystem::path p(input);
    return (p.parent_path() / (p.stem().string() + suffix)).string();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-trajectory simulator for a monitored noisy, disordered Heisenberg chain"};
    app.require_subcommand(1);

    int threads = 0;
    app.add_option("--threads", threads, "Worker threads (default: MIPT_THREADS env or hardware concurrency)");
    std::uint64_t seed = 0;
    bool seed_given = false;
    app.add_option("--seed", seed, "Master seed override")->each([&](const std::string&) { seed_given = true; });

    // run
    auto* run = app.add_subcommand("run", "Run a sweep from a config file and write results.csv");
    std::string config_path;
    run->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
    std::string output_override;
    run->add_option("--output-dir", output_override, "Override [output] directory");
    bool no_checkpoint = false;
    run->add_flag("--no-checkpoint", no_checkpoint, "Disable checkpoint/resume");
    run->footer(mipt::default_config_help());

    // analyze
    auto* analyze = app.add_subcommand("analyze", "Statistical pipeline on result tables");
    analyze->require_subcommand(1);

    std::string in_path, out_path;
    std::vector<double> domain;
    int nboot = 1000;
    std::uint64_t boot_seed = 20240001ull;

    auto* peak = analyze->add_subcommand("peak", "Variance-peak location per system size");
    peak->add_option("table", in_path, "results.csv")->required()->check(CLI::ExistingFile);
    peak->add_option("--domain", domain, "lambda window [lo hi]")->expected(2);
    peak->add_option("--nboot", nboot, "Bootstrap samples");
    peak->add_option("--out", out_path, "Output path (default <input>_peaks.csv)");

    auto* crossing = analyze->add_subcommand("crossing", "TMI crossings for adjacent system sizes");
    crossing->add_option("table", in_path, "results.csv with TMI columns")->required()->check(CLI::ExistingFile);
    crossing->add_option("--domain", domain, "lambda window [lo hi]")->expected(2);
    crossing->add_option("--nboot", nboot, "Bootstrap samples");
    crossing->add_option("--out", out_path, "Output path (default <input>_crossings.csv)");

    auto* extrapolate = analyze->add_subcommand("extrapolate", "Thermodynamic-limit extrapolation (1/L or Lbar^-2)");
    extrapolate->add_option("table", in_path, "peaks/crossings table or generic (x,y,yerr)")
        ->required()
        ->check(CLI::ExistingFile);
    extrapolate->add_option("--out", out_path, "Output path (default <input>_lambda_c.csv)");

    auto* collapse = analyze->add_subcommand("collapse", "Data collapse, extracts the critical exponent nu");
    collapse->add_option("table", in_path, "results.csv")->required()->check(CLI::ExistingFile);
    double lambda_c = 0.0;
    collapse->add_option("--lambda-c", lambda_c, "Critical measurement strength")->required();
    CollapseOptions copts;
    collapse->add_option("--nu-min", copts.nu_min, "Grid lower bound");
    collapse->add_option("--nu-max", copts.nu_max, "Grid upper bound");
    collapse->add_option("--window-quantile", copts.window_quantile, "|x| quantile kept in the pooled fit");
    collapse->add_option("--out", out_path, "Output prefix (default <input>_collapse)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return cmd_run(config_path, threads, seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt,
                           output_override, no_checkpoint);

        const std::uint64_t bseed = seed_given ? seed : boot_seed;
        if (peak->parsed())
            return cmd_analyze_peak(in_path, out_path.empty() ? default_out(in_path, "_peaks.csv") : out_path,
                                    domain, nboot, bseed);
        if (crossing->parsed())
            return cmd_analyze_crossing(in_path,
                                        out_path.empty() ? default_out(in_path, "_crossings.csv") : out_path,
                                        domain, nboot, bseed);
        if (extrapolate->parsed())
            return cmd_analyze_extrapolate(in_path,
                                           out_path.empty() ? default_out(in_path, "_lambda_c.csv") : out_path);
        if (collapse->parsed())
            return cmd_analyze_collapse(in_path, out_path.empty() ? default_out(in_path, "_collapse") : out_path,
                                        lambda_c, copts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
