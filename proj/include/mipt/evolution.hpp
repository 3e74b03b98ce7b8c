#pragma once

#include <array>
#include <vector>

#include "mipt/rng.hpp"
#include "mipt/state.hpp"

namespace mipt {

// Static background field h_{j,alpha}, units of J, alpha = x,y,z.
struct StaticDisorder {
    std::vector<std::array<double, 3>> h;
};

// Per-step temporal field delta-h_{j,alpha} for one time step (already carries
// the 1/sqrt(dt) scaling; entries are physical field values for that step).
struct NoiseStep {
    std::vector<std::array<double, 3>> dh;
};

struct EvolutionParams {
    int L = 0;
    double xi_r = 0.0;
    double xi_s = 0.0;
    double dt = 0.01;

    void validate() const;  // even L, xi >= 0, 0 < dt <= 0.05
};

// Each of the 3L components uniform on [-xi_s, xi_s].
StaticDisorder sample_static_disorder(double xi_s, int L, RngStream& rng);

// Each component uniform on [-xi_r/sqrt(dt), xi_r/sqrt(dt)]; fresh draw per step.
NoiseStep sample_noise_step(double xi_r, double dt, int L, RngStream& rng);

// exp(-i tau H2) with H2 = sigma.sigma + h_left.sigma x 1 + 1 x h_right.sigma,
// via exact Hermitian eigendecomposition of the 4x4 generator.
Gate4 build_bond_gate(const std::array<double, 3>& h_left, const std::array<double, 3>& h_right, double tau);

// One symmetrized second-order step under periodic boundary conditions:
// exp(-i dt/2 H_even) exp(-i dt H_odd) exp(-i dt/2 H_even), where bond j
// couples sites (j, j+1 mod L) and the field of site j enters half into each
// of its two adjacent bonds. The even half-step gates are built once and
// reused for both even sub-layers.
void trotter_step_inplace(StateVector& state, const StaticDisorder& disorder, const NoiseStep& noise, double dt);
StateVector trotter_step(StateVector state, const StaticDisorder& disorder, const NoiseStep& noise, double dt);

}  // namespace mipt
