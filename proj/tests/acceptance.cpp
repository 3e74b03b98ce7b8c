// Acceptance suite: end-to-end checks of the simulator and the statistical
// pipeline at desk scale. Each criterion prints one [PASS]/[FAIL] line and the
// binary exits nonzero if any requested criterion fails.
//
// Heavy sweeps checkpoint per grid point into the cache directory
// (MIPT_ACCEPT_CACHE or --cache-dir), so interrupted or repeated runs only pay
// for missing points.

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "mipt/analysis.hpp"
#include "mipt/checkpoint.hpp"
#include "mipt/config.hpp"
#include "mipt/entanglement.hpp"
#include "mipt/measurement.hpp"
#include "mipt/table.hpp"
#include "mipt/trajectory.hpp"
#include "oracles.hpp"

using namespace mipt;
namespace fs = std::filesystem;

namespace {

struct Context {
    std::string cache_dir = "acceptance_cache";
    int threads = 0;
    bool extended = false;
};

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

bool report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion << " (" << name << "): " << detail
              << std::endl;
    return pass;
}

// ---------------------------------------------------------------------------
// cached sweep machinery

std::vector<EnsembleResult> cached_sweep(const Context& ctx, const std::string& name, const RunConfig& cfg) {
    fs::create_directories(ctx.cache_dir);
    const std::string path = ctx.cache_dir + "/" + name + ".jsonl";
    const std::uint64_t hash = cfg.hash();
    const auto done = checkpoint_load(path, hash);
    const std::vector<SimParams> grid = cfg.grid();

    std::size_t n_done = 0;
    auto resume = [&](const SimParams& p) -> std::optional<EnsembleResult> {
        auto it = done.find(grid_key(p));
        if (it == done.end()) return std::nullopt;
        EnsembleResult r = it->second;
        r.params = p.resolved();
        ++n_done;
        return r;
    };
    auto sink = [&](const SimParams& p, const EnsembleResult& r) {
        checkpoint_append(path, hash, p, r);
        ++n_done;
        std::cerr << "  [" << name << " " << n_done << "/" << grid.size() << "] L=" << p.L
                  << " lambda=" << p.lambda << " xi_s=" << p.xi_s << " mean_S=" << fmt(r.mean_S)
                  << " var_S=" << fmt(r.var_S) << std::endl;
    };
    return sweep(grid, ctx.threads, resume, sink);
}

RunConfig sweep_config(const std::vector<int>& sizes, const std::vector<double>& lambdas, double xi_r, double xi_s,
                       int n_real, std::uint64_t seed, bool tmi) {
    RunConfig cfg;
    cfg.L_list = sizes;
    cfg.lambda_list = lambdas;
    cfg.xi_r_list = {xi_r};
    cfg.xi_s_list = {xi_s};
    cfg.base.dt = 0.01;
    cfg.base.n_realizations = n_real;
    cfg.base.master_seed = seed;
    cfg.base.record_tmi = tmi;
    cfg.validate();
    return cfg;
}

// Ensemble-averaged S(t) curve with per-time standard errors.
struct Curve {
    std::vector<double> times, mean, se;
};

Curve averaged_curve(const Context& ctx, const std::string& name, const SimParams& params) {
    fs::create_directories(ctx.cache_dir);
    const std::string path = ctx.cache_dir + "/" + name + ".csv";
    const std::string desc = "L=" + std::to_string(params.L) + ";xi_r=" + format_double(params.xi_r) +
                             ";lambda=" + format_double(params.lambda) + ";dt=" + format_double(params.dt) +
                             ";t_max=" + format_double(params.t_max) + ";n=" + std::to_string(params.n_realizations) +
                             ";seed=" + std::to_string(params.master_seed);
    if (fs::exists(path)) {
        const Table t = Table::read_csv(path);
        if (t.meta_value("params") == desc) {
            Curve c;
            for (const auto& row : t.rows) {
                c.times.push_back(row[0]);
                c.mean.push_back(row[1]);
                c.se.push_back(row[2]);
            }
            return c;
        }
    }

    const auto outcomes = run_trajectories(params, ctx.threads);
    std::vector<const TrajectoryRecord*> recs;
    for (const auto& o : outcomes)
        if (std::holds_alternative<TrajectoryRecord>(o)) recs.push_back(&std::get<TrajectoryRecord>(o));
    if (recs.size() < 2) throw std::runtime_error("averaged_curve: not enough surviving realizations");

    Curve c;
    const std::size_t nt = recs.front()->times.size();
    for (std::size_t i = 0; i < nt; ++i) {
        double mean = 0.0;
        for (const auto* r : recs) mean += r->entropy[i];
        mean /= static_cast<double>(recs.size());
        double var = 0.0;
        for (const auto* r : recs) var += (r->entropy[i] - mean) * (r->entropy[i] - mean);
        var /= static_cast<double>(recs.size() - 1);
        c.times.push_back(recs.front()->times[i]);
        c.mean.push_back(mean);
        c.se.push_back(std::sqrt(var / static_cast<double>(recs.size())));
    }

    Table t;
    t.meta = {"acceptance curve cache", "params=" + desc};
    t.columns = {"t", "mean_S", "stderr_S"};
    for (std::size_t i = 0; i < c.times.size(); ++i) t.rows.push_back({c.times[i], c.mean[i], c.se[i]});
    t.write_csv(path);
    return c;
}

// ---------------------------------------------------------------------------
// variance-peak pipeline shared by criteria 4, 5, 6 and 7b

struct PeakPipeline {
    std::map<int, PeakEstimate> peaks;
    double lambda_c = 0.0;
    double error = 0.0;
    std::vector<EnsembleResult> rows;
};

PeakPipeline variance_peak_pipeline(const Context& ctx, double xi_s, const std::vector<double>& lambdas,
                                    const std::vector<std::string>& sweep_names,
                                    const std::vector<RunConfig>& cfgs) {
    PeakPipeline out;
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        auto rows = cached_sweep(ctx, sweep_names[i], cfgs[i]);
        out.rows.insert(out.rows.end(), rows.begin(), rows.end());
    }

    std::map<int, std::vector<const EnsembleResult*>> by_size;
    for (const EnsembleResult& r : out.rows) by_size[r.params.L].push_back(&r);

    std::vector<double> inv_l, peaks, errs;
    for (const auto& [L, rows] : by_size) {
        std::vector<double> xs, ys, es;
        for (const EnsembleResult* r : rows) {
            xs.push_back(r->params.lambda);
            ys.push_back(r->var_S);
            es.push_back(r->stderr_var);
        }
        const FitResult fit = fit_exp_poly(xs, ys, es, +1);
        RngStream rng(derive_stream_seed(900100 + static_cast<int>(xi_s * 10), L));
        out.peaks[L] = bootstrap_peak(fit, lambdas.front(), lambdas.back(), 1000, rng);
        inv_l.push_back(1.0 / L);
        peaks.push_back(out.peaks[L].lambda_max);
        errs.push_back(out.peaks[L].error);
        std::cerr << "  lambda_max(L=" << L << ", xi_s=" << xi_s << ") = " << fmt(out.peaks[L].lambda_max)
                  << " +- " << fmt(out.peaks[L].error) << " (fit degree " << fit.degree << ")" << std::endl;
    }
    const auto [intercept, err] = extrapolate_linear(inv_l, peaks, errs);
    out.lambda_c = intercept;
    out.error = err;
    return out;
}

const std::vector<double> kLambdaGridClean{0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.15, 1.3, 1.5};
const std::vector<double> kLambdaGridDisorder{0.35, 0.45, 0.55, 0.65, 0.75, 0.85, 0.95, 1.1, 1.25, 1.45};

PeakPipeline clean_pipeline(const Context& ctx) {
    return variance_peak_pipeline(
        ctx, 0.0, kLambdaGridClean, {"c4_tmi_sizes", "c4_mid_size"},
        {sweep_config({8, 12}, kLambdaGridClean, 1.3, 0.0, 100, 1104, true),
         sweep_config({10}, kLambdaGridClean, 1.3, 0.0, 100, 1104, false)});
}

PeakPipeline disorder_pipeline(const Context& ctx) {
    return variance_peak_pipeline(ctx, 3.0, kLambdaGridDisorder, {"c5_disorder"},
                                  {sweep_config({8, 10, 12}, kLambdaGridDisorder, 1.3, 3.0, 100, 1105, false)});
}

// ---------------------------------------------------------------------------
// criteria

bool criterion_1(const Context& ctx) {
    // Page-law limit at lambda = 0
    bool pass = true;
    std::string detail;
    for (int L : {8, 10, 12}) {
        SimParams p;
        p.L = L;
        p.xi_r = 1.3;
        p.lambda = 0.0;
        p.dt = 0.01;
        p.t_burn = 35.0;
        p.t_max = 140.0;
        p.n_realizations = 50;
        p.master_seed = 1101;
        const EnsembleResult r = run_ensemble(p, ctx.threads);
        const double page = page_entropy(L);
        const double rel = std::abs(r.mean_S - page) / page;
        pass = pass && rel <= 0.05;
        detail += "L=" + std::to_string(L) + ": S=" + fmt(r.mean_S) + " Page=" + fmt(page) +
                  " rel.dev=" + fmt(rel, 2) + "; ";
    }
    return report(1, "Page-law limit", pass, detail + "tolerance 5%");
}

bool criterion_2(const Context& ctx) {
    // continuum limit: dt = 0.01 vs 0.005 agree at every sample time
    bool pass = true;
    std::string detail;
    for (double lambda : {0.5, 2.0}) {
        Curve curves[2];
        int idx = 0;
        for (double dt : {0.01, 0.005}) {
            SimParams p;
            p.L = 12;
            p.xi_r = 2.0;
            p.lambda = lambda;
            p.dt = dt;
            p.t_max = 15.0;
            p.t_burn = 0.0;
            p.n_steady_samples = 1;
            p.n_realizations = 300;
            p.master_seed = 1102 + idx;
            const std::string name = "c2_lambda" + fmt(lambda, 3) + "_dt" + format_double(dt);
            curves[idx++] = averaged_curve(ctx, name, p.resolved());
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < curves[0].times.size(); ++i) {
            if (curves[0].times[i] < 1.0) continue;  // both start exactly at S = 0
            const double diff = std::abs(curves[0].mean[i] - curves[1].mean[i]);
            const double tol = 2.0 * std::hypot(curves[0].se[i], curves[1].se[i]);
            worst = std::max(worst, diff / tol);
        }
        pass = pass && worst <= 1.0;
        detail += "lambda=" + fmt(lambda) + ": max |dS|/(2 se) = " + fmt(worst, 3) + "; ";
    }
    return report(2, "continuum-limit collapse", pass, detail);
}

bool criterion_3(const Context& ctx) {
    EnsembleResult rs[2];
    int idx = 0;
    for (int L : {8, 12}) {
        SimParams p;
        p.L = L;
        p.xi_r = 1.3;
        p.lambda = 1.0;
        p.dt = 0.01;
        p.n_realizations = 100;
        p.master_seed = 1103;
        rs[idx++] = run_ensemble(p, ctx.threads);
    }
    const double diff = std::abs(rs[0].mean_S - rs[1].mean_S);
    const double tol = 2.0 * std::hypot(rs[0].stderr_S, rs[1].stderr_S);
    const double cap = 0.3 * page_entropy(12);
    const bool pass = diff <= tol && rs[0].mean_S < cap && rs[1].mean_S < cap;
    return report(3, "area-law plateau", pass,
                  "S(8)=" + fmt(rs[0].mean_S) + " S(12)=" + fmt(rs[1].mean_S) + " |diff|=" + fmt(diff, 3) +
                      " <= " + fmt(tol, 3) + "; both < " + fmt(cap, 3));
}

bool criterion_4(const Context& ctx) {
    const PeakPipeline pipe = clean_pipeline(ctx);
    const bool decreasing = pipe.peaks.at(8).lambda_max > pipe.peaks.at(10).lambda_max &&
                            pipe.peaks.at(10).lambda_max > pipe.peaks.at(12).lambda_max;
    const bool in_window = pipe.lambda_c >= 0.48 && pipe.lambda_c <= 0.60;
    const bool pass = decreasing && in_window;
    return report(4, "critical point, clean case", pass,
                  "lambda_max = " + fmt(pipe.peaks.at(8).lambda_max) + "/" + fmt(pipe.peaks.at(10).lambda_max) +
                      "/" + fmt(pipe.peaks.at(12).lambda_max) + " (L=8/10/12), extrapolated lambda_c = " +
                      fmt(pipe.lambda_c) + " +- " + fmt(pipe.error) + ", window [0.48, 0.60]");
}

bool criterion_5(const Context& ctx) {
    const PeakPipeline clean = clean_pipeline(ctx);
    const PeakPipeline disordered = disorder_pipeline(ctx);
    const double gap = clean.lambda_c - disordered.lambda_c;
    const double combined = std::hypot(clean.error, disordered.error);
    const bool pass = gap > combined;
    return report(5, "disorder reduces lambda_c", pass,
                  "lambda_c(xi_s=0) = " + fmt(clean.lambda_c) + " +- " + fmt(clean.error) +
                      ", lambda_c(xi_s=3) = " + fmt(disordered.lambda_c) + " +- " + fmt(disordered.error) +
                      ", gap = " + fmt(gap) + " > combined error " + fmt(combined));
}

bool criterion_6(const Context& ctx) {
    const PeakPipeline pipe = clean_pipeline(ctx);

    // TMI curves for L = 8 and 12 from the same sweep; keep the lambda window
    // where both curves are strictly negative (the fit model is -exp(poly)).
    std::map<int, std::vector<std::array<double, 3>>> tmi;
    for (const EnsembleResult& r : pipe.rows) {
        if (!r.mean_tmi) continue;
        if (r.params.lambda < 0.4 - 1e-9 || r.params.lambda > 0.9 + 1e-9) continue;
        tmi[r.params.L].push_back({r.params.lambda, *r.mean_tmi, *r.stderr_tmi});
    }
    double window_hi = 0.9;
    for (const auto& [L, pts] : tmi)
        for (const auto& p : pts)
            if (p[1] >= 0.0) window_hi = std::min(window_hi, p[0] - 1e-9);

    std::map<int, FitResult> fits;
    double window_lo = 0.4;
    for (const auto& [L, pts] : tmi) {
        std::vector<double> xs, ys, es;
        for (const auto& p : pts) {
            if (p[0] > window_hi) continue;
            xs.push_back(p[0]);
            ys.push_back(p[1]);
            es.push_back(p[2]);
        }
        if (xs.size() < 5)
            return report(6, "TMI cross-check", false,
                          "only " + std::to_string(xs.size()) + " usable negative-TMI points for L = " +
                              std::to_string(L));
        fits[L] = fit_exp_poly(xs, ys, es, -1);
    }

    RngStream rng(906001);
    const CrossingEstimate cross = bootstrap_crossing(fits.at(8), fits.at(12), window_lo, window_hi, 1000, rng);
    const double tol = 2.0 * std::hypot(cross.error, pipe.error);
    const double diff = std::abs(cross.lambda_cross - pipe.lambda_c);
    const bool pass = diff <= tol;
    return report(6, "TMI cross-check", pass,
                  "crossing lambda_c = " + fmt(cross.lambda_cross) + " +- " + fmt(cross.error) +
                      " vs variance lambda_c = " + fmt(pipe.lambda_c) + " +- " + fmt(pipe.error) + ", |diff| = " +
                      fmt(diff, 3) + " <= " + fmt(tol, 3) + " (window [" + fmt(window_lo) + ", " + fmt(window_hi) +
                      "])");
}

bool criterion_7(const Context& ctx) {
    bool pass = true;
    std::string detail;
    for (double nu : {0.7, 1.0}) {
        RngStream rng(907000 + static_cast<int>(nu * 10));
        const auto data = fixtures::make_collapse_fixture(nu, 0.55, {8, 10, 12, 16}, 0.02, rng);
        const CollapseResult res = data_collapse(data, 0.55);
        const bool ok = res.nu_lo <= nu && nu <= res.nu_hi;
        pass = pass && ok;
        detail += "planted nu=" + fmt(nu, 2) + ": got " + fmt(res.nu, 3) + " band [" + fmt(res.nu_lo, 3) + ", " +
                  fmt(res.nu_hi, 3) + "]; ";
    }

    if (ctx.extended) {
        const PeakPipeline pipe = clean_pipeline(ctx);
        std::vector<CollapsePoint> points;
        for (const EnsembleResult& r : pipe.rows)
            points.push_back({r.params.L, r.params.lambda, r.mean_S, r.stderr_S});
        const CollapseResult res = data_collapse(points, pipe.lambda_c);
        const bool ok = res.nu >= 0.5 && res.nu <= 0.9;
        pass = pass && ok;
        detail += "simulated data: nu = " + fmt(res.nu, 3) + " band [" + fmt(res.nu_lo, 3) + ", " +
                  fmt(res.nu_hi, 3) + "] in [0.5, 0.9]; ";
    } else {
        detail += "extended run on simulated data skipped (optional; set MIPT_ACCEPT_EXTENDED=1)";
    }
    return report(7, "critical exponent", pass, detail);
}

bool criterion_8(const Context&) {
    bool pass = true;
    std::string detail;

    {  // unbiased pointer: E[x] = lambda0 <sigma_z>
        RngStream rng(908001);
        const double lambda0 = 0.3;
        const int n = 20000;
        double mean = 0.0;
        for (int i = 0; i < n; ++i) {
            StateVector s = StateVector::zeroed(2);
            s.amplitudes[0] = std::sqrt(0.3);
            s.amplitudes[1] = std::sqrt(0.7);
            mean += weak_measure_site_inplace(s, 0, lambda0, rng).x;
        }
        mean /= n;
        const double expect = lambda0 * (-0.4);
        const double sd = std::sqrt(0.5 + lambda0 * lambda0 * (1.0 - 0.16));
        const bool ok = std::abs(mean - expect) < 3.0 * sd / std::sqrt(static_cast<double>(n));
        pass = pass && ok;
        detail += "pointer mean " + fmt(mean, 3) + " vs " + fmt(expect, 3) + " (3-sigma " +
                  fmt(3.0 * sd / std::sqrt(static_cast<double>(n)), 3) + "); ";
    }

    {  // martingale: ensemble mean of <sigma_z> conserved under measurement only
        const int n_traj = 1500, n_steps = 150;
        double mean = 0.0;
        for (int t = 0; t < n_traj; ++t) {
            RngStream rng(derive_stream_seed(908002, t));
            StateVector s = StateVector::zeroed(2);
            s.amplitudes[0] = std::sqrt(0.65);
            s.amplitudes[1] = std::sqrt(0.35);
            for (int k = 0; k < n_steps; ++k) weak_measure_site_inplace(s, 0, 0.15, rng);
            mean += sigma_z_expectation(s, 0);
        }
        mean /= n_traj;
        const double se = std::sqrt((1.0 - 0.3 * 0.3) / n_traj);
        const bool ok = std::abs(mean - 0.3) < 3.0 * se;
        pass = pass && ok;
        detail += "martingale mean " + fmt(mean, 3) + " vs 0.3 (3-sigma " + fmt(3.0 * se, 3) + "); ";
    }

    {  // Zeno localization with Born-rule branch fractions
        const int n_traj = 1200, n_steps = 2500;  // t = 25 >> 1/lambda^2 at lambda = 2
        const double lambda0 = std::sqrt(0.01) * 2.0;
        int ups = 0, localized = 0;
        for (int t = 0; t < n_traj; ++t) {
            RngStream rng(derive_stream_seed(908003, t));
            StateVector s = StateVector::zeroed(2);
            s.amplitudes[0] = std::sqrt(0.3);
            s.amplitudes[1] = std::sqrt(0.7);
            for (int k = 0; k < n_steps; ++k) weak_measure_site_inplace(s, 0, lambda0, rng);
            const double sz = sigma_z_expectation(s, 0);
            if (std::abs(sz) > 0.99) ++localized;
            if (sz > 0.0) ++ups;
        }
        const double frac = ups / static_cast<double>(n_traj);
        const double se = std::sqrt(0.3 * 0.7 / n_traj);
        const bool ok = localized == n_traj && std::abs(frac - 0.3) < 3.0 * se;
        pass = pass && ok;
        detail += "Zeno: localized " + std::to_string(localized) + "/" + std::to_string(n_traj) + ", up fraction " +
                  fmt(frac, 3) + " vs 0.3 (3-sigma " + fmt(3.0 * se, 3) + ")";
    }
    return report(8, "measurement-channel statistics", pass, detail);
}

bool criterion_9(const Context&) {
    RngStream rng(909001);
    const int L = 4;
    const StaticDisorder dis = sample_static_disorder(0.5, L, rng);

    const int coarse_steps = 50;
    const double dt_coarse = 0.02;
    std::vector<NoiseStep> noises(coarse_steps);
    for (auto& n : noises) {
        n.dh.assign(L, {0.0, 0.0, 0.0});
        for (int j = 0; j < L; ++j)
            for (int a = 0; a < 3; ++a) n.dh[j][a] = rng.uniform(-0.8, 0.8);
    }

    auto field_of = [&](const NoiseStep& n) {
        std::vector<std::array<double, 3>> f(L);
        for (int j = 0; j < L; ++j)
            for (int a = 0; a < 3; ++a) f[j][a] = dis.h[j][a] + n.dh[j][a];
        return f;
    };

    const StateVector psi0 = make_neel(L);
    Eigen::VectorXcd exact = oracle::to_eigen(psi0);
    for (const NoiseStep& n : noises)
        exact = (oracle::dense_propagator(oracle::dense_hamiltonian(field_of(n)), dt_coarse) * exact).eval();

    auto global_error = [&](int refine) {
        StateVector psi = psi0;
        for (const NoiseStep& n : noises)
            for (int r = 0; r < refine; ++r) trotter_step_inplace(psi, dis, n, dt_coarse / refine);
        return (oracle::to_eigen(psi) - exact).norm();
    };
    const double ratio = global_error(1) / global_error(2);

    // single-step error against the dense propagator at dt = 0.01
    RngStream rng2(909002);
    const StateVector psi_rand = oracle::haar_random_state(L, rng2);
    const Eigen::VectorXcd exact_step =
        oracle::dense_propagator(oracle::dense_hamiltonian(field_of(noises[0])), 0.01) * oracle::to_eigen(psi_rand);
    const StateVector stepped = trotter_step(psi_rand, dis, noises[0], 0.01);
    const double step_err = (oracle::to_eigen(stepped) - exact_step).norm();

    const bool ratio_ok = ratio >= 3.0 && ratio <= 5.0;
    const bool step_ok = step_err < 1e-6;
    return report(9, "Trotter oracle", ratio_ok && step_ok,
                  "global error ratio under dt halving = " + fmt(ratio, 3) + " (want 4 +- 25%: " +
                      (ratio_ok ? "ok" : "violated") + "); per-step error at dt = 0.01 = " + fmt(step_err, 3) +
                      " (bound 1e-6: " + (step_ok ? "ok" : "violated") +
                      "; the dt^3 prefactor of the symmetric bond splitting is ~7 even at zero field, so the "
                      "bound is only reachable for dt <= 0.005)");
}

bool criterion_10(const Context&) {
    RngStream rng(910001);
    int checked = 0;
    double worst = 0.0;
    for (int L : {4, 6, 8}) {
        const std::uint64_t full = (std::uint64_t{1} << L) - 1;
        const int n_states = L == 8 ? 34 : 33;
        for (int i = 0; i < n_states; ++i) {
            const StateVector s = oracle::haar_random_state(L, rng);
            // one random subset plus the non-contiguous A|C quarter pattern
            std::uint64_t mask = 1 + rng.raw() % (full - 1);
            worst = std::max(worst, std::abs(entanglement_entropy(s, mask) - oracle::entropy_by_partial_trace(s, mask)));
            if (L % 4 == 0) {
                const int q = L / 4;
                const std::uint64_t a = (std::uint64_t{1} << q) - 1;
                const std::uint64_t ac = a | (a << (2 * q));
                worst = std::max(worst,
                                 std::abs(entanglement_entropy(s, ac) - oracle::entropy_by_partial_trace(s, ac)));
                worst = std::max(worst, std::abs(tripartite_mutual_information(s) - oracle::tmi_by_partial_trace(s)));
            }
            ++checked;
        }
    }
    const bool pass = worst < 1e-10 && checked == 100;
    return report(10, "entropy oracle", pass,
                  std::to_string(checked) + " random states, worst |Schmidt - partial trace| = " + fmt(worst, 3));
}

}  // namespace

int main(int argc, char** argv) {
    Context ctx;
    if (const char* env = std::getenv("MIPT_ACCEPT_CACHE")) ctx.cache_dir = env;
    if (const char* env = std::getenv("MIPT_ACCEPT_EXTENDED")) ctx.extended = std::string(env) == "1";

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--criterion" && i + 1 < argc) {
            wanted.push_back(std::atoi(argv[++i]));
        } else if (arg == "--cache-dir" && i + 1 < argc) {
            ctx.cache_dir = argv[++i];
        } else if (arg == "--threads" && i + 1 < argc) {
            ctx.threads = std::atoi(argv[++i]);
        } else if (arg == "--extended") {
            ctx.extended = true;
        } else if (arg == "--list") {
            std::cout << "criteria 1..10\n";
            return 0;
        } else {
            std::cerr << "usage: acceptance [--criterion N]... [--cache-dir DIR] [--threads N] [--extended]\n";
            return 2;
        }
    }
    if (wanted.empty()) wanted = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};

    bool all_pass = true;
    for (int n : wanted) {
        bool ok = false;
        try {
            switch (n) {
                case 1: ok = criterion_1(ctx); break;
                case 2: ok = criterion_2(ctx); break;
                case 3: ok = criterion_3(ctx); break;
                case 4: ok = criterion_4(ctx); break;
                case 5: ok = criterion_5(ctx); break;
                case 6: ok = criterion_6(ctx); break;
                case 7: ok = criterion_7(ctx); break;
                case 8: ok = criterion_8(ctx); break;
                case 9: ok = criterion_9(ctx); break;
                case 10: ok = criterion_10(ctx); break;
                default:
                    std::cerr << "unknown criterion " << n << "\n";
                    return 2;
            }
        } catch (const std::exception& e) {
            ok = report(n, "exception", false, e.what());
        }
        all_pass = all_pass && ok;
    }
    return all_pass ? 0 : 1;
}
