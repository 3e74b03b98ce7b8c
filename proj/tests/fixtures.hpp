#pragma once

// Synthetic data generators with planted ground truth, shared by the unit and
// acceptance suites.

#include <cmath>
#include <vector>

#include "mipt/analysis.hpp"
#include "mipt/rng.hpp"

namespace fixtures {

struct PeakCurve {
    int L = 0;
    double mu = 0.0;  // planted peak location
    std::vector<double> lambdas, values, errors;
};

// var-S-like bump: exp(c + a (lambda - mu)^2), a < 0, with relative noise.
inline PeakCurve make_peak_curve(int L, double mu, double rel_noise, mipt::RngStream& rng) {
    PeakCurve out;
    out.L = L;
    out.mu = mu;
    const double a = -6.0, c = -1.0;
    for (double l = 0.25; l <= 1.65001; l += 0.1) {
        const double clean = std::exp(c + a * (l - mu) * (l - mu));
        const double err = rel_noise * clean;
        out.lambdas.push_back(l);
        out.values.push_back(clean + (rel_noise > 0.0 ? rng.normal(0.0, err) : 0.0));
        out.errors.push_back(err);
    }
    return out;
}

// TMI-like curve -exp(b0 + b1 lambda): monotone in lambda, crossing curves for
// different sizes plant the crossing point analytically.
struct TmiCurve {
    int L = 0;
    std::vector<double> lambdas, values, errors;
};

inline TmiCurve make_tmi_curve(int L, double b0, double b1, double abs_noise, mipt::RngStream& rng) {
    TmiCurve out;
    out.L = L;
    for (double l = 0.25; l <= 1.25001; l += 0.1) {
        const double clean = -std::exp(b0 + b1 * l);
        out.lambdas.push_back(l);
        out.values.push_back(clean + (abs_noise > 0.0 ? rng.normal(0.0, abs_noise) : 0.0));
        out.errors.push_back(abs_noise > 0.0 ? abs_noise : 0.0);
    }
    return out;
}

// Scaling-collapse dataset with planted exponent nu: S(L, lambda) =
// c_L + F[(lambda - lambda_c) L^{1/nu}] with F a gentle sigmoid (the sampled
// lambda window keeps |x| moderate so no size sits in the saturated tail).
inline std::vector<mipt::CollapsePoint> make_collapse_fixture(double nu, double lambda_c,
                                                              const std::vector<int>& sizes, double noise,
                                                              mipt::RngStream& rng) {
    std::vector<mipt::CollapsePoint> out;
    for (int L : sizes) {
        const double c_l = 0.35 * L;
        for (int i = 0; i < 13; ++i) {
            const double lambda = lambda_c - 0.12 + 0.02 * i;
            const double x = (lambda - lambda_c) * std::pow(L, 1.0 / nu);
            const double clean = c_l - 0.85 * std::tanh(0.25 * x);
            const double err = noise > 0.0 ? noise : 1e-3;
            out.push_back({L, lambda, clean + (noise > 0.0 ? rng.normal(0.0, noise) : 0.0), err});
        }
    }
    return out;
}

}  // namespace fixtures
