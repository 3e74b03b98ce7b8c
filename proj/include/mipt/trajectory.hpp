#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "mipt/evolution.hpp"
#include "mipt/state.hpp"

namespace mipt {

// All physical and numerical parameters of one ensemble.
// Times are in units of hbar/J. Negative t_max/t_burn mean "use the default":
//   t_burn = max(20, 10/lambda^2), capped at t_max/2 (and at 100 when t_max
//   itself is defaulted), t_max = t_burn + n_steady_samples*sample_interval + 5.
struct SimParams {
    int L = 8;
    double xi_r = 0.0;
    double xi_s = 0.0;
    double lambda = 0.0;
    double dt = 0.01;
    double t_max = -1.0;
    double t_burn = -1.0;
    double sample_interval = 1.0;
    int n_steady_samples = 100;
    std::uint64_t master_seed = 1;
    int n_realizations = 100;
    bool record_tmi = false;

    double lambda0() const;
    void resolve_defaults();     // fills t_burn/t_max if negative
    void validate() const;       // throws std::invalid_argument with a reason
    SimParams resolved() const;  // resolve_defaults + validate, returned by value
};

// Time series of one stochastic realization.
struct TrajectoryRecord {
    std::vector<double> times;
    std::vector<double> entropy;               // half-chain S(t)
    std::optional<std::vector<double>> tmi;    // present when record_tmi
    std::uint64_t realization_seed = 0;
    StaticDisorder disorder;
};

// Cross-realization statistics of the steady-state observables.
struct EnsembleResult {
    SimParams params;
    double mean_S = 0.0;
    double stderr_S = 0.0;
    double var_S = 0.0;      // unbiased variance of per-realization steady means
    double stderr_var = 0.0; // fourth-moment estimate
    std::optional<double> mean_tmi;
    std::optional<double> stderr_tmi;
    int n_effective = 0;
    std::vector<std::pair<int, std::string>> aborted;  // (realization index, reason)
};

// Neel start, one disorder draw, t_max/dt steps of
// (noise sample -> trotter step -> measurement layer), sampled every
// sample_interval. RNG stream is derived from (master_seed, realization_index).
// Throws std::runtime_error if an amplitude turns non-finite.
TrajectoryRecord run_trajectory(const SimParams& params, int realization_index);

// Mean of n_steady_samples entropy samples starting at the first sample
// time >= t_burn.
double steady_state_mean(const TrajectoryRecord& record, const SimParams& params);

// One entry per realization: either the record or the abort reason.
std::vector<std::variant<TrajectoryRecord, std::string>> run_trajectories(const SimParams& params, int threads);

// threads <= 0 picks default_thread_count().
EnsembleResult run_ensemble(const SimParams& params, int threads = 0);

using SweepResume = std::function<std::optional<EnsembleResult>(const SimParams&)>;
using SweepSink = std::function<void(const SimParams&, const EnsembleResult&)>;

// Runs run_ensemble over the grid in order. `resume` may supply a previously
// completed result for a point (it is then not recomputed and not re-emitted
// to `sink`); `sink` sees every freshly computed point as soon as it is done,
// so an interrupted sweep loses at most the point in flight.
std::vector<EnsembleResult> sweep(const std::vector<SimParams>& grid, int threads = 0,
                                  const SweepResume& resume = {}, const SweepSink& sink = {});

// MIPT_THREADS environment variable, else hardware concurrency.
int default_thread_count();

}  // namespace mipt
