#include "mipt/trajectory.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <thread>

#include "mipt/entanglement.hpp"
#include "mipt/measurement.hpp"

namespace mipt {

namespace {

constexpr double kTimeEps = 1e-9;
constexpr double kDefaultMargin = 5.0;
constexpr double kMaxDefaultBurn = 100.0;  // keeps the lambda -> 0 default finite

double raw_default_burn(double lambda) {
    const double zeno = 10.0 / (lambda * lambda);  // inf at lambda = 0
    return std::max(20.0, zeno);
}

double steady_mean_of(const std::vector<double>& times, const std::vector<double>& values,
                      const SimParams& params) {
    std::size_t first = 0;
    while (first < times.size() && times[first] < params.t_burn - kTimeEps) ++first;
    if (first + params.n_steady_samples > values.size())
        throw std::invalid_argument("steady_state_mean: record too short for " +
                                    std::to_string(params.n_steady_samples) + " samples past t_burn");
    double sum = 0.0;
    for (int i = 0; i < params.n_steady_samples; ++i) sum += values[first + i];
    return sum / params.n_steady_samples;
}

struct MomentStats {
    double mean = 0.0;
    double stderr_mean = 0.0;
    double var = 0.0;         // unbiased
    double stderr_var = 0.0;  // fourth-moment estimate
};

MomentStats moments(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    MomentStats s;
    for (double x : xs) s.mean += x;
    s.mean /= n;
    double m2 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - s.mean;
        m2 += d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m4 /= n;
    s.var = (n > 1.0) ? m2 * n / (n - 1.0) : 0.0;
    s.stderr_mean = (n > 0.0) ? std::sqrt(s.var / n) : 0.0;
    if (n > 1.0) {
        const double var_of_var = (m4 - (n - 3.0) / (n - 1.0) * s.var * s.var) / n;
        s.stderr_var = std::sqrt(std::max(0.0, var_of_var));
    }
    return s;
}

}  // namespace

double SimParams::lambda0() const { return std::sqrt(dt) * lambda; }

void SimParams::resolve_defaults() {
    if (t_max < 0.0 && t_burn < 0.0) {
        t_burn = std::min(raw_default_burn(lambda), kMaxDefaultBurn);
        t_max = t_burn + n_steady_samples * sample_interval + kDefaultMargin;
    } else if (t_burn < 0.0) {
        t_burn = std::min(raw_default_burn(lambda), 0.5 * t_max);
    } else if (t_max < 0.0) {
        t_max = t_burn + n_steady_samples * sample_interval + kDefaultMargin;
    }
}

void SimParams::validate() const {
    if (L < 2 || L % 2 != 0) throw std::invalid_argument("SimParams: L must be even and >= 2");
    if (record_tmi && L % 4 != 0)
        throw std::invalid_argument("SimParams: recording the TMI requires L divisible by 4");
    if (xi_r < 0.0 || xi_s < 0.0) throw std::invalid_argument("SimParams: xi_r and xi_s must be >= 0");
    if (lambda < 0.0) throw std::invalid_argument("SimParams: lambda must be >= 0");
    if (!(dt > 0.0) || dt > 0.05) throw std::invalid_argument("SimParams: dt must lie in (0, 0.05]");
    if (!(sample_interval > 0.0)) throw std::invalid_argument("SimParams: sample_interval must be > 0");
    if (n_steady_samples < 1) throw std::invalid_argument("SimParams: n_steady_samples must be >= 1");
    if (t_max < 0.0 || t_burn < 0.0)
        throw std::invalid_argument("SimParams: t_max/t_burn unresolved; call resolve_defaults()");
    if (t_burn + n_steady_samples * sample_interval > t_max + kTimeEps)
        throw std::invalid_argument("SimParams: t_burn + n_steady_samples*sample_interval exceeds t_max");
    const double stride = sample_interval / dt;
    if (std::abs(stride - std::llround(stride)) > 1e-6)
        throw std::invalid_argument("SimParams: dt must divide sample_interval");
}

SimParams SimParams::resolved() const {
    SimParams p = *this;
    p.resolve_defaults();
    p.validate();
    return p;
}

TrajectoryRecord run_trajectory(const SimParams& params_in, int realization_index) {
    const SimParams params = params_in.resolved();
    const int L = params.L;

    TrajectoryRecord rec;
    rec.realization_seed = derive_stream_seed(params.master_seed, static_cast<std::uint64_t>(realization_index));
    RngStream rng(rec.realization_seed);

    StateVector state = make_neel(L);
    rec.disorder = sample_static_disorder(params.xi_s, L, rng);
    if (params.record_tmi) rec.tmi.emplace();

    const std::uint64_t half_mask = half_chain_mask(L);
    const double lambda0 = params.lambda0();
    const long long steps = std::llround(params.t_max / params.dt);
    const long long stride = std::llround(params.sample_interval / params.dt);
    const double entropy_bound = 0.5 * L * std::log(2.0) + 1e-9;

    auto sample = [&](long long step) {
        const double t = static_cast<double>(step / stride) * params.sample_interval;
        const double s = entanglement_entropy(state, half_mask);
        if (!std::isfinite(s) || s > entropy_bound)
            throw std::runtime_error("realization " + std::to_string(realization_index) +
                                     ": corrupt entropy sample " + std::to_string(s) + " at t = " +
                                     std::to_string(t));
        rec.times.push_back(t);
        rec.entropy.push_back(s);
        if (rec.tmi) rec.tmi->push_back(tripartite_mutual_information(state));
    };

    sample(0);
    for (long long step = 1; step <= steps; ++step) {
        const NoiseStep noise = sample_noise_step(params.xi_r, params.dt, L, rng);
        trotter_step_inplace(state, rec.disorder, noise, params.dt);
        if (lambda0 > 0.0) measure_layer_inplace(state, lambda0, rng);
        if (step % stride == 0) sample(step);
    }
    return rec;
}

double steady_state_mean(const TrajectoryRecord& record, const SimParams& params_in) {
    const SimParams params = params_in.resolved();
    return steady_mean_of(record.times, record.entropy, params);
}

int default_thread_count() {
    if (const char* env = std::getenv("MIPT_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<std::variant<TrajectoryRecord, std::string>> run_trajectories(const SimParams& params_in, int threads) {
    const SimParams params = params_in.resolved();
    const int n = params.n_realizations;
    if (threads <= 0) threads = default_thread_count();
    threads = std::min(threads, n);

    std::vector<std::variant<TrajectoryRecord, std::string>> results(n, std::string("not run"));
    std::atomic<int> next{0};
    auto worker = [&]() {
        for (;;) {
            const int k = next.fetch_add(1);
            if (k >= n) return;
            try {
                results[k] = run_trajectory(params, k);
            } catch (const std::exception& e) {
                results[k] = std::string(e.what());
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return results;
}

EnsembleResult run_ensemble(const SimParams& params_in, int threads) {
    const SimParams params = params_in.resolved();
    if (params.n_realizations < 2) throw std::invalid_argument("run_ensemble: n_realizations must be >= 2");

    auto outcomes = run_trajectories(params, threads);

    EnsembleResult res;
    res.params = params;
    std::vector<double> steady_s;
    std::vector<double> steady_tmi;
    for (int k = 0; k < params.n_realizations; ++k) {
        if (std::holds_alternative<std::string>(outcomes[k])) {
            res.aborted.emplace_back(k, std::get<std::string>(outcomes[k]));
            continue;
        }
        const TrajectoryRecord& rec = std::get<TrajectoryRecord>(outcomes[k]);
        steady_s.push_back(steady_mean_of(rec.times, rec.entropy, params));
        if (rec.tmi) steady_tmi.push_back(steady_mean_of(rec.times, *rec.tmi, params));
    }
    res.n_effective = static_cast<int>(steady_s.size());
    if (res.n_effective < 2)
        throw std::runtime_error("run_ensemble: fewer than 2 surviving realizations (" +
                                 std::to_string(res.n_effective) + " of " +
                                 std::to_string(params.n_realizations) + ")");

    const MomentStats s = moments(steady_s);
    res.mean_S = s.mean;
    res.stderr_S = s.stderr_mean;
    res.var_S = s.var;
    res.stderr_var = s.stderr_var;
    if (!steady_tmi.empty()) {
        const MomentStats t = moments(steady_tmi);
        res.mean_tmi = t.mean;
        res.stderr_tmi = t.stderr_mean;
    }
    return res;
}

std::vector<EnsembleResult> sweep(const std::vector<SimParams>& grid, int threads, const SweepResume& resume,
                                  const SweepSink& sink) {
    std::vector<EnsembleResult> out;
    out.reserve(grid.size());
    for (const SimParams& point : grid) {
        if (resume) {
            if (std::optional<EnsembleResult> hit = resume(point)) {
                out.push_back(std::move(*hit));
                continue;
            }
        }
        EnsembleResult res = run_ensemble(point, threads);
        if (sink) sink(point, res);
        out.push_back(std::move(res));
    }
    return out;
}

}  // namespace mipt
