#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "mipt/rng.hpp"
#include "mipt/state.hpp"

namespace mipt {

struct MeasurementParams {
    double lambda = 0.0;  // continuous strength
    double dt = 0.01;

    double lambda0() const { return std::sqrt(dt) * lambda; }
    void validate() const;
};

// Gaussian pointer reading for one site; x is unbounded.
struct MeasurementOutcome {
    int site = 0;
    double x = 0.0;
};

// Weak measurement of sigma_z on one site with Kraus operator
//   M_x = phi(x - lambda0) P_up + phi(x + lambda0) P_down,
//   phi(u) = pi^{-1/4} exp(-u^2/2).
// x is sampled from the exact outcome distribution
//   P(x) = p_up N(lambda0, 1/2) + p_down N(-lambda0, 1/2)
// by choosing the branch with the Born probability and then drawing the
// Gaussian. The post-measurement state is renormalized analytically.
MeasurementOutcome weak_measure_site_inplace(StateVector& state, int site, double lambda0, RngStream& rng);
std::pair<StateVector, MeasurementOutcome> weak_measure_site(StateVector state, int site, double lambda0, RngStream& rng);

// Measures sites 0..L-1 in ascending order, then renormalizes the full vector.
std::vector<MeasurementOutcome> measure_layer_inplace(StateVector& state, double lambda0, RngStream& rng);
std::pair<StateVector, std::vector<MeasurementOutcome>> measure_layer(StateVector state, double lambda0, RngStream& rng);

}  // namespace mipt
