#include "mipt/measurement.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mipt {

namespace {

constexpr double kPointerStddev = 0.70710678118654752440;  // sqrt(1/2)

}  // namespace

void MeasurementParams::validate() const {
    if (lambda < 0.0) throw std::invalid_argument("MeasurementParams: lambda must be >= 0");
    if (!(dt > 0.0)) throw std::invalid_argument("MeasurementParams: dt must be > 0");
}

MeasurementOutcome weak_measure_site_inplace(StateVector& state, int site, double lambda0, RngStream& rng) {
    if (site < 0 || site >= state.num_sites)
        throw std::invalid_argument("weak_measure_site: site " + std::to_string(site) + " out of range");
    if (lambda0 < 0.0) throw std::invalid_argument("weak_measure_site: lambda0 must be >= 0");

    const std::uint64_t mask = std::uint64_t{1} << site;
    double p_up = 0.0, p_down = 0.0;
    for (std::uint64_t b = 0; b < state.dim(); ++b) {
        const double w = std::norm(state.amplitudes[b]);
        if (b & mask)
            p_down += w;
        else
            p_up += w;
    }
    const double total = p_up + p_down;
    if (!std::isfinite(total) || total <= 1e-300)
        throw std::runtime_error("weak_measure_site: degenerate state (norm^2 = " + std::to_string(total) + ")");
    p_up /= total;
    p_down /= total;

    const bool branch_up = rng.uniform01() < p_up;
    const double x = rng.normal(branch_up ? lambda0 : -lambda0, kPointerStddev);

    // M_x rescales up/down sectors by phi(x -+ lambda0); combined with the
    // 1/sqrt(P(x)) normalization this reduces to the two factors below.
    // exp overflow saturates to inf and the factor to 0, which is the correct
    // projective limit.
    const double c_up = 1.0 / std::sqrt(p_up + p_down * std::exp(-4.0 * x * lambda0));
    const double c_down = 1.0 / std::sqrt(p_down + p_up * std::exp(4.0 * x * lambda0));

    cplx* amp = state.amplitudes.data();
    for (std::uint64_t b = 0; b < state.dim(); ++b) amp[b] *= (b & mask) ? c_down : c_up;

    return MeasurementOutcome{site, x};
}

std::pair<StateVector, MeasurementOutcome> weak_measure_site(StateVector state, int site, double lambda0,
                                                             RngStream& rng) {
    MeasurementOutcome out = weak_measure_site_inplace(state, site, lambda0, rng);
    return {std::move(state), out};
}

std::vector<MeasurementOutcome> measure_layer_inplace(StateVector& state, double lambda0, RngStream& rng) {
    std::vector<MeasurementOutcome> outcomes;
    outcomes.reserve(state.num_sites);
    for (int j = 0; j < state.num_sites; ++j) outcomes.push_back(weak_measure_site_inplace(state, j, lambda0, rng));
    state.normalize();  // scrub accumulated rounding once per layer
    return outcomes;
}

std::pair<StateVector, std::vector<MeasurementOutcome>> measure_layer(StateVector state, double lambda0,
                                                                      RngStream& rng) {
    std::vector<MeasurementOutcome> outs = measure_layer_inplace(state, lambda0, rng);
    return {std::move(state), std::move(outs)};
}

}  // namespace mipt
