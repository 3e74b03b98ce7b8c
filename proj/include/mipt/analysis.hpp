#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "mipt/rng.hpp"

namespace mipt {

// Weighted fit of y ~ sign * exp(sum_i a_i x^i).
struct FitResult {
    Eigen::VectorXd coefficients;  // a_0 .. a_k
    Eigen::MatrixXd covariance;
    double reduced_chi2 = 0.0;
    int degree = 0;
    int model_sign = +1;  // +1 for variance fits, -1 for TMI fits
};

// Linearizes through z = ln(sign*y) with sigma_z = yerr/|y| and solves the
// weighted least-squares problem for polynomial degrees k = 2..6 (where the
// point count leaves at least one degree of freedom); keeps the degree whose
// reduced chi^2 is closest to 1. Requires >= 5 points and sign*y > 0
// everywhere. Zero/negative errors fall back to unit weights.
FitResult fit_exp_poly(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::vector<double>& yerrs, int sign);

// Same linearized fit at one fixed polynomial degree.
FitResult fit_exp_poly_fixed_degree(const std::vector<double>& xs, const std::vector<double>& ys,
                                    const std::vector<double>& yerrs, int sign, int degree);

struct PeakEstimate {
    double lambda_max = 0.0;
    double error = 0.0;
    int n_failed = 0;  // bootstrap samples without an interior maximum
};

// Draws n_boot coefficient vectors from N(coefficients, covariance) and locates
// the interior maximum of the exponent polynomial on [lo, hi] per sample.
// Throws if the central fit has no interior maximum or if more than 20% of the
// samples lack one.
PeakEstimate bootstrap_peak(const FitResult& fit, double lo, double hi, int n_boot, RngStream& rng);

struct CrossingEstimate {
    double lambda_cross = 0.0;
    double error = 0.0;
    int n_failed = 0;
};

// Per bootstrap sample, solves fit_a = fit_b by bracketed root finding on the
// difference of the exponent polynomials. The central curves must cross
// exactly once in [lo, hi].
CrossingEstimate bootstrap_crossing(const FitResult& fit_a, const FitResult& fit_b, double lo, double hi,
                                    int n_boot, RngStream& rng);

// Weighted linear fit; returns (intercept at x = 0, its standard error).
// The caller supplies the transformed abscissa (1/L, Lbar^-2, ...).
std::pair<double, double> extrapolate_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                                             const std::vector<double>& yerrs);

struct CriticalEstimate {
    double lambda_c = 0.0;
    double error = 0.0;
    std::string method;  // "variance-peak" or "tmi-crossing"
    std::vector<std::array<double, 3>> inputs;  // (abscissa, value, error) per size
};

struct CollapsePoint {
    int L = 0;
    double lambda = 0.0;
    double value = 0.0;
    double error = 0.0;
};

struct CollapseOptions {
    double nu_min = 0.4;
    double nu_max = 1.4;
    double nu_step = 0.02;
    double window_quantile = 0.8;       // |x| window for the pooled fit
    std::vector<int> orders = {5, 6, 7, 8};
};

struct CollapseResult {
    double nu = 0.0;
    double nu_lo = 0.0;
    double nu_hi = 0.0;
    std::vector<std::pair<double, double>> chi2_profile;  // (nu, averaged reduced chi^2)
};

// Scaling collapse y = S(L,lambda) - S(L,lambda_c) vs x = (lambda-lambda_c) L^{1/nu}.
// S(L, lambda_c) is interpolated per size by a weighted polynomial fit; the
// quality function is the reduced chi^2 of a pooled polynomial fit near x = 0,
// averaged over the fit orders; nu minimizes it (grid scan plus golden-section
// refinement) and the error band is where chi^2(nu) < 2 chi^2(nu_min).
CollapseResult data_collapse(const std::vector<CollapsePoint>& data, double lambda_c,
                             const CollapseOptions& options = {});

double eval_poly(const Eigen::VectorXd& coeffs, double x);

}  // namespace mipt
