#include "mipt/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace mipt {

namespace {

struct PolyFit {
    Eigen::VectorXd coef;
    Eigen::MatrixXd cov;
    double chi2 = 0.0;
    int dof = 0;
    bool ok = false;
};

// Weighted least squares of z ~ sum_p a_p x^p. Empty/invalid sigmas fall back
// to unit weights with the covariance rescaled by the residual variance.
PolyFit weighted_poly_fit(const std::vector<double>& xs, const std::vector<double>& zs,
                          const std::vector<double>& sigmas, int degree) {
    const int n = static_cast<int>(xs.size());
    const int ncoef = degree + 1;
    PolyFit fit;
    fit.dof = n - ncoef;
    if (fit.dof < 0) return fit;

    bool weighted = sigmas.size() == xs.size();
    if (weighted)
        for (double s : sigmas)
            if (!(s > 0.0)) weighted = false;

    Eigen::MatrixXd a(n, ncoef);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) {
        const double w = weighted ? 1.0 / sigmas[i] : 1.0;
        double xp = 1.0;
        for (int p = 0; p < ncoef; ++p) {
            a(i, p) = w * xp;
            xp *= xs[i];
        }
        b(i) = w * zs[i];
    }

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
    if (qr.rank() < ncoef) return fit;
    fit.coef = qr.solve(b);
    fit.chi2 = (a * fit.coef - b).squaredNorm();

    Eigen::MatrixXd normal = a.transpose() * a;
    fit.cov = normal.ldlt().solve(Eigen::MatrixXd::Identity(ncoef, ncoef));
    if (!weighted && fit.dof > 0) fit.cov *= fit.chi2 / fit.dof;
    fit.cov = 0.5 * (fit.cov + fit.cov.transpose()).eval();
    fit.ok = true;
    return fit;
}

Eigen::VectorXd poly_derivative(const Eigen::VectorXd& coef) {
    if (coef.size() <= 1) return Eigen::VectorXd::Zero(1);
    Eigen::VectorXd d(coef.size() - 1);
    for (Eigen::Index p = 1; p < coef.size(); ++p) d(p - 1) = static_cast<double>(p) * coef(p);
    return d;
}

double bisect_root(const Eigen::VectorXd& poly, double a, double b) {
    double fa = eval_poly(poly, a);
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = eval_poly(poly, m);
        if (fm == 0.0 || 0.5 * (b - a) < 1e-14 * std::max(1.0, std::abs(m))) return m;
        if ((fa < 0.0) == (fm < 0.0)) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

// Interior local maxima of the polynomial on (lo, hi): roots of the derivative
// where the sign flips + to -. Returns the argmax among them, or nan.
double interior_argmax(const Eigen::VectorXd& coef, double lo, double hi) {
    const Eigen::VectorXd d = poly_derivative(coef);
    constexpr int kGrid = 512;
    double best_x = std::numeric_limits<double>::quiet_NaN();
    double best_val = -std::numeric_limits<double>::infinity();
    double x_prev = lo;
    double f_prev = eval_poly(d, lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double x = lo + (hi - lo) * i / kGrid;
        const double f = eval_poly(d, x);
        if (f_prev > 0.0 && f <= 0.0) {
            const double root = bisect_root(d, x_prev, x);
            const double val = eval_poly(coef, root);
            if (val > best_val) {
                best_val = val;
                best_x = root;
            }
        }
        x_prev = x;
        f_prev = f;
    }
    return best_x;
}

// First root of the polynomial on (lo, hi), or nan when the sign never flips.
double first_root(const Eigen::VectorXd& coef, double lo, double hi) {
    constexpr int kGrid = 512;
    double x_prev = lo;
    double f_prev = eval_poly(coef, lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double x = lo + (hi - lo) * i / kGrid;
        const double f = eval_poly(coef, x);
        if ((f_prev < 0.0) != (f < 0.0) || f == 0.0) return bisect_root(coef, x_prev, x);
        x_prev = x;
        f_prev = f;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

int count_sign_changes(const Eigen::VectorXd& coef, double lo, double hi) {
    constexpr int kGrid = 512;
    int changes = 0;
    double f_prev = eval_poly(coef, lo);
    for (int i = 1; i <= kGrid; ++i) {
        const double f = eval_poly(coef, lo + (hi - lo) * i / kGrid);
        if ((f_prev < 0.0) != (f < 0.0)) ++changes;
        f_prev = f;
    }
    return changes;
}

// Samples from N(mean, cov); falls back to an eigenvalue factorization with
// clamped spectrum when the covariance is only semidefinite.
class MvnSampler {
public:
    MvnSampler(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) : mean_(mean) {
        Eigen::MatrixXd sym = 0.5 * (cov + cov.transpose());
        Eigen::LLT<Eigen::MatrixXd> llt(sym);
        if (llt.info() == Eigen::Success) {
            factor_ = llt.matrixL();
        } else {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
            factor_ = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
        }
    }

    Eigen::VectorXd draw(RngStream& rng) const {
        Eigen::VectorXd z(mean_.size());
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = rng.normal(0.0, 1.0);
        return mean_ + factor_ * z;
    }

private:
    Eigen::VectorXd mean_;
    Eigen::MatrixXd factor_;
};

double nearest_rank_quantile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const auto n = static_cast<long>(v.size());
    long idx = static_cast<long>(std::ceil(q * n)) - 1;
    idx = std::clamp(idx, 0l, n - 1);
    return v[idx];
}

}  // namespace

double eval_poly(const Eigen::VectorXd& coeffs, double x) {
    double acc = 0.0;
    for (Eigen::Index p = coeffs.size() - 1; p >= 0; --p) acc = acc * x + coeffs(p);
    return acc;
}

namespace {

void log_transform(const std::vector<double>& xs, const std::vector<double>& ys, const std::vector<double>& yerrs,
                   int sign, std::vector<double>& zs, std::vector<double>& sigmas) {
    const std::size_t n = xs.size();
    if (sign != 1 && sign != -1) throw std::invalid_argument("fit_exp_poly: sign must be +1 or -1");
    if (ys.size() != n || yerrs.size() != n) throw std::invalid_argument("fit_exp_poly: array length mismatch");
    if (n < 5) throw std::invalid_argument("fit_exp_poly: need at least 5 points, got " + std::to_string(n));

    zs.resize(n);
    sigmas.resize(n);
    bool weighted = true;
    for (std::size_t i = 0; i < n; ++i) {
        const double v = sign * ys[i];
        if (!(v > 0.0))
            throw std::invalid_argument("fit_exp_poly: sign*y must be positive at every point (violated at x = " +
                                        std::to_string(xs[i]) + ")");
        zs[i] = std::log(v);
        if (!(yerrs[i] > 0.0)) weighted = false;
        sigmas[i] = yerrs[i] / std::abs(ys[i]);
    }
    if (!weighted) sigmas.clear();
}

}  // namespace

FitResult fit_exp_poly_fixed_degree(const std::vector<double>& xs, const std::vector<double>& ys,
                                    const std::vector<double>& yerrs, int sign, int degree) {
    std::vector<double> zs, sigmas;
    log_transform(xs, ys, yerrs, sign, zs, sigmas);
    if (static_cast<int>(xs.size()) - (degree + 1) < 1)
        throw std::invalid_argument("fit_exp_poly: not enough points for degree " + std::to_string(degree));
    const PolyFit fit = weighted_poly_fit(xs, zs, sigmas, degree);
    if (!fit.ok) throw std::runtime_error("fit_exp_poly: singular normal equations (degenerate grid)");
    FitResult out;
    out.coefficients = fit.coef;
    out.covariance = fit.cov;
    out.reduced_chi2 = fit.chi2 / fit.dof;
    out.degree = degree;
    out.model_sign = sign;
    return out;
}

FitResult fit_exp_poly(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::vector<double>& yerrs, int sign) {
    std::vector<double> zs, sigmas;
    log_transform(xs, ys, yerrs, sign, zs, sigmas);

    FitResult best;
    double best_score = std::numeric_limits<double>::infinity();
    bool any = false;
    for (int k = 2; k <= 6; ++k) {
        if (static_cast<int>(xs.size()) - (k + 1) < 1) break;
        const PolyFit fit = weighted_poly_fit(xs, zs, sigmas, k);
        if (!fit.ok) continue;
        const double red = fit.chi2 / fit.dof;
        const double score = std::abs(red - 1.0);
        if (!any || score < best_score) {
            any = true;
            best_score = score;
            best.coefficients = fit.coef;
            best.covariance = fit.cov;
            best.reduced_chi2 = red;
            best.degree = k;
            best.model_sign = sign;
        }
    }
    if (!any) throw std::runtime_error("fit_exp_poly: singular normal equations (degenerate grid)");
    return best;
}

PeakEstimate bootstrap_peak(const FitResult& fit, double lo, double hi, int n_boot, RngStream& rng) {
    if (!(lo < hi)) throw std::invalid_argument("bootstrap_peak: empty domain");
    if (n_boot < 1) throw std::invalid_argument("bootstrap_peak: n_boot must be >= 1");

    const double central = interior_argmax(fit.coefficients, lo, hi);
    if (!std::isfinite(central))
        throw std::runtime_error("bootstrap_peak: no interior maximum in [" + std::to_string(lo) + ", " +
                                 std::to_string(hi) + "] for the central fit");

    MvnSampler sampler(fit.coefficients, fit.covariance);
    std::vector<double> peaks;
    peaks.reserve(n_boot);
    int failed = 0;
    for (int b = 0; b < n_boot; ++b) {
        const double x = interior_argmax(sampler.draw(rng), lo, hi);
        if (std::isfinite(x))
            peaks.push_back(x);
        else
            ++failed;
    }
    if (failed * 5 > n_boot)
        throw std::runtime_error("bootstrap_peak: " + std::to_string(failed) + " of " + std::to_string(n_boot) +
                                 " bootstrap samples lack an interior maximum");

    double mean = 0.0;
    for (double p : peaks) mean += p;
    mean /= static_cast<double>(peaks.size());
    double var = 0.0;
    for (double p : peaks) var += (p - mean) * (p - mean);
    var = peaks.size() > 1 ? var / static_cast<double>(peaks.size() - 1) : 0.0;

    return PeakEstimate{mean, std::sqrt(var), failed};
}

CrossingEstimate bootstrap_crossing(const FitResult& fit_a, const FitResult& fit_b, double lo, double hi,
                                    int n_boot, RngStream& rng) {
    if (!(lo < hi)) throw std::invalid_argument("bootstrap_crossing: empty domain");
    if (fit_a.model_sign != fit_b.model_sign)
        throw std::invalid_argument("bootstrap_crossing: fits must share the model sign");

    auto diff = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(std::max(a.size(), b.size()));
        d.head(a.size()) = a;
        d.head(b.size()) -= b;
        return d;
    };

    const Eigen::VectorXd central = diff(fit_a.coefficients, fit_b.coefficients);
    const int changes = count_sign_changes(central, lo, hi);
    if (changes == 0)
        throw std::runtime_error("bootstrap_crossing: no sign change of the difference in the domain");
    if (changes > 1)
        throw std::runtime_error("bootstrap_crossing: central curves cross more than once in the domain");

    MvnSampler sampler_a(fit_a.coefficients, fit_a.covariance);
    MvnSampler sampler_b(fit_b.coefficients, fit_b.covariance);
    std::vector<double> roots;
    roots.reserve(n_boot);
    int failed = 0;
    for (int b = 0; b < n_boot; ++b) {
        const double r = first_root(diff(sampler_a.draw(rng), sampler_b.draw(rng)), lo, hi);
        if (std::isfinite(r))
            roots.push_back(r);
        else
            ++failed;
    }
    if (failed * 5 > n_boot)
        throw std::runtime_error("bootstrap_crossing: " + std::to_string(failed) + " of " + std::to_string(n_boot) +
                                 " bootstrap samples have no crossing");

    double mean = 0.0;
    for (double r : roots) mean += r;
    mean /= static_cast<double>(roots.size());
    double var = 0.0;
    for (double r : roots) var += (r - mean) * (r - mean);
    var = roots.size() > 1 ? var / static_cast<double>(roots.size() - 1) : 0.0;

    return CrossingEstimate{mean, std::sqrt(var), failed};
}

std::pair<double, double> extrapolate_linear(const std::vector<double>& xs, const std::vector<double>& ys,
                                             const std::vector<double>& yerrs) {
    const std::size_t n = xs.size();
    if (ys.size() != n || yerrs.size() != n) throw std::invalid_argument("extrapolate_linear: length mismatch");
    if (n < 2) throw std::invalid_argument("extrapolate_linear: need at least 2 points");

    bool weighted = true;
    for (double e : yerrs)
        if (!(e > 0.0)) weighted = false;

    double sw = 0.0, swx = 0.0, swy = 0.0, swxx = 0.0, swxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = weighted ? 1.0 / (yerrs[i] * yerrs[i]) : 1.0;
        sw += w;
        swx += w * xs[i];
        swy += w * ys[i];
        swxx += w * xs[i] * xs[i];
        swxy += w * xs[i] * ys[i];
    }
    const double delta = sw * swxx - swx * swx;
    if (!(std::abs(delta) > 0.0)) throw std::runtime_error("extrapolate_linear: degenerate abscissa");
    const double intercept = (swxx * swy - swx * swxy) / delta;
    double var_intercept = swxx / delta;
    if (!weighted && n > 2) {
        const double slope = (sw * swxy - swx * swy) / delta;
        double chi2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = ys[i] - (intercept + slope * xs[i]);
            chi2 += r * r;
        }
        var_intercept *= chi2 / static_cast<double>(n - 2);
    }
    return {intercept, std::sqrt(std::max(0.0, var_intercept))};
}

CollapseResult data_collapse(const std::vector<CollapsePoint>& data, double lambda_c,
                             const CollapseOptions& options) {
    std::map<int, std::vector<CollapsePoint>> by_size;
    for (const CollapsePoint& p : data) by_size[p.L].push_back(p);
    if (by_size.size() < 3) throw std::invalid_argument("data_collapse: need at least 3 system sizes");
    for (auto& [L, pts] : by_size) {
        if (pts.size() < 8)
            throw std::invalid_argument("data_collapse: need at least 8 lambda points for L = " + std::to_string(L));
        std::sort(pts.begin(), pts.end(), [](const CollapsePoint& a, const CollapsePoint& b) { return a.lambda < b.lambda; });
        if (lambda_c < pts.front().lambda || lambda_c > pts.back().lambda)
            throw std::invalid_argument("data_collapse: lambda_c outside the sampled range for L = " + std::to_string(L));
    }

    // Interpolate S(L, lambda_c) per size with a local weighted polynomial fit:
    // the nearest points around lambda_c, cubic at most. A global fit would be
    // biased by the saturated tails far from the transition.
    std::map<int, double> s_at_critical;
    for (const auto& [L, pts] : by_size) {
        std::vector<CollapsePoint> local(pts);
        std::sort(local.begin(), local.end(), [&](const CollapsePoint& a, const CollapsePoint& b) {
            return std::abs(a.lambda - lambda_c) < std::abs(b.lambda - lambda_c);
        });
        const std::size_t keep = std::min<std::size_t>(local.size(), 9);
        std::vector<double> xs, ys, sig;
        for (std::size_t i = 0; i < keep; ++i) {
            xs.push_back(local[i].lambda);
            ys.push_back(local[i].value);
            sig.push_back(local[i].error);
        }
        const int degree = std::min<int>(3, static_cast<int>(keep) - 2);
        const PolyFit fit = weighted_poly_fit(xs, ys, sig, degree);
        if (!fit.ok) throw std::runtime_error("data_collapse: interpolation fit failed for L = " + std::to_string(L));
        s_at_critical[L] = eval_poly(fit.coef, lambda_c);
    }

    struct Scaled {
        double l_size, dlambda, y, err;
    };
    std::vector<Scaled> pool;
    for (const auto& [L, pts] : by_size)
        for (const CollapsePoint& p : pts)
            pool.push_back({static_cast<double>(L), p.lambda - lambda_c, p.value - s_at_critical[L], p.error});

    auto chi2_of = [&](double nu) {
        const double inv_nu = 1.0 / nu;
        std::vector<double> xs(pool.size());
        std::vector<double> absx(pool.size());
        for (std::size_t i = 0; i < pool.size(); ++i) {
            xs[i] = pool[i].dlambda * std::pow(pool[i].l_size, inv_nu);
            absx[i] = std::abs(xs[i]);
        }
        const double window = nearest_rank_quantile(absx, options.window_quantile);
        std::vector<double> fx, fy, fs;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (absx[i] <= window) {
                fx.push_back(xs[i]);
                fy.push_back(pool[i].y);
                fs.push_back(pool[i].err);
            }
        }
        double acc = 0.0;
        int used = 0;
        for (int m : options.orders) {
            if (static_cast<int>(fx.size()) - (m + 1) < 1) continue;
            const PolyFit fit = weighted_poly_fit(fx, fy, fs, m);
            if (!fit.ok) continue;
            acc += fit.chi2 / fit.dof;
            ++used;
        }
        return used > 0 ? acc / used : std::numeric_limits<double>::infinity();
    };

    CollapseResult result;
    const int n_grid = static_cast<int>(std::round((options.nu_max - options.nu_min) / options.nu_step)) + 1;
    int best_idx = -1;
    double best_chi2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_grid; ++i) {
        const double nu = options.nu_min + i * options.nu_step;
        const double c = chi2_of(nu);
        result.chi2_profile.emplace_back(nu, c);
        if (c < best_chi2) {
            best_chi2 = c;
            best_idx = i;
        }
    }
    if (best_idx < 0 || !std::isfinite(best_chi2))
        throw std::runtime_error("data_collapse: chi^2 profile is degenerate");

    // Golden-section refinement between the grid neighbors of the minimum.
    double a = result.chi2_profile[std::max(0, best_idx - 1)].first;
    double b = result.chi2_profile[std::min(n_grid - 1, best_idx + 1)].first;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = chi2_of(x1), f2 = chi2_of(x2);
    for (int it = 0; it < 60 && (b - a) > 1e-6; ++it) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = chi2_of(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = chi2_of(x2);
        }
    }
    result.nu = f1 < f2 ? x1 : x2;
    const double chi2_min = std::min({f1, f2, best_chi2});
    const double threshold = 2.0 * chi2_min;

    auto refine_edge = [&](double inside, double outside) {
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (inside + outside);
            if (chi2_of(mid) < threshold)
                inside = mid;
            else
                outside = mid;
        }
        return 0.5 * (inside + outside);
    };

    int lo_idx = best_idx;
    while (lo_idx > 0 && result.chi2_profile[lo_idx - 1].second < threshold) --lo_idx;
    int hi_idx = best_idx;
    while (hi_idx < n_grid - 1 && result.chi2_profile[hi_idx + 1].second < threshold) ++hi_idx;

    result.nu_lo = (lo_idx == 0) ? options.nu_min
                                 : refine_edge(result.chi2_profile[lo_idx].first, result.chi2_profile[lo_idx - 1].first);
    result.nu_hi = (hi_idx == n_grid - 1)
                       ? options.nu_max
                       : refine_edge(result.chi2_profile[hi_idx].first, result.chi2_profile[hi_idx + 1].first);
    result.nu_lo = std::min(result.nu_lo, result.nu);
    result.nu_hi = std::max(result.nu_hi, result.nu);
    return result;
}

}  // namespace mipt
