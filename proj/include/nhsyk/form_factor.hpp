// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/linalg.hpp"
#include "nhsyk/model.hpp"
#include "nhsyk/spectral.hpp"

namespace nhsyk {

struct TimeGrid {
    std::vector<double> points;  // strictly increasing, positive

    static TimeGrid logspace(double t_min, double t_max, int count) {
        if (!(t_min > 0.0) || !(t_max > t_min) || count < 2)
            throw InvalidArgument("TimeGrid::logspace: bad arguments");
        TimeGrid g;
        g.points.resize(count);
        const double l0 = std::log(t_min), l1 = std::log(t_max);
        for (int i = 0; i < count; ++i)
            g.points[i] = std::exp(l0 + (l1 - l0) * i / (count - 1));
        return g;
    }

    static TimeGrid linspace(double t_min, double t_max, int count) {
        if (!(t_max > t_min) || count < 2)
            throw InvalidArgument("TimeGrid::linspace: bad arguments");
        TimeGrid g;
        g.points.resize(count);
        for (int i = 0; i < count; ++i)
            g.points[i] = t_min + (t_max - t_min) * i / (count - 1);
        return g;
    }

    int size() const { return static_cast<int>(points.size()); }
};

/// Ensemble-averaged singular form factor over a time grid. alpha = 0 is the
/// unfiltered curve.
struct FormFactorCurve {
    TimeGrid grid;
    std::vector<double> values;
    double alpha = 0.0;
    int n_realizations = 0;
    int n = 0;
    double p = 1.0;
    Mode mode = Mode::NonHermitian;
};

namespace detail {

/// |Y(alpha, t)|^2 with Y = sum_n exp(-alpha sigma_n^2) exp(-i sigma_n t).
inline double filtered_intensity(const std::vector<double>& sigma,
                                 const std::vector<double>& weight, double t) {
    KahanSum re, im;
    for (std::size_t k = 0; k < sigma.size(); ++k) {
        re.add(weight[k] * std::cos(sigma[k] * t));
        im.add(weight[k] * -std::sin(sigma[k] * t));
    }
    return re.value() * re.value() + im.value() * im.value();
}

}  // namespace detail

/// sigmaFF(t) = < |Y(alpha,t)|^2 / |Y(alpha,0)|^2 >, the average taken over
/// per-realization ratios. With alpha = 0 the normalization is 1/L^2.
inline FormFactorCurve sigma_ff(const std::vector<std::vector<double>>& spectra,
                                const TimeGrid& grid, double alpha = 0.0) {
    if (spectra.empty())
        throw InvalidArgument("sigma_ff: empty ensemble");
    if (alpha < 0.0)
        throw InvalidArgument("sigma_ff: alpha must be >= 0");
    const std::size_t dim = spectra.front().size();
    for (const auto& s : spectra)
        if (s.size() != dim)
            throw InvalidArgument("sigma_ff: spectra dimension mismatch");

    std::vector<KahanSum> acc(grid.size());
    std::vector<double> weight(dim);
    for (const std::vector<double>& sigma : spectra) {
        KahanSum w0;
        for (std::size_t k = 0; k < dim; ++k) {
            weight[k] = std::exp(-alpha * sigma[k] * sigma[k]);
            w0.add(weight[k]);
        }
        const double norm = w0.value() * w0.value();
        for (int i = 0; i < grid.size(); ++i)
            acc[i].add(detail::filtered_intensity(sigma, weight, grid.points[i]) / norm);
    }
    FormFactorCurve curve;
    curve.grid = grid;
    curve.alpha = alpha;
    curve.n_realizations = static_cast<int>(spectra.size());
    curve.values.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i)
        curve.values[i] = acc[i].value() / static_cast<double>(spectra.size());
    return curve;
}

inline FormFactorCurve sigma_ff(const std::vector<SingularSpectrum>& spectra,
                                const TimeGrid& grid, double alpha = 0.0) {
    std::vector<std::vector<double>> raw;
    raw.reserve(spectra.size());
    for (const SingularSpectrum& s : spectra) raw.push_back(s.values);
    FormFactorCurve curve = sigma_ff(raw, grid, alpha);
    if (!spectra.empty()) {
        curve.n = spectra.front().config.n;
        curve.p = spectra.front().config.p;
        curve.mode = spectra.front().config.mode;
    }
    return curve;
}

/// Mean squared singular value of the model, <tr H^dagger H> / L; used to
/// carry the N = 26 filter width over to other sizes via alpha ~ 1/<sigma^2>.
inline double mean_square_sigma(int n) {
    return 0.75 * static_cast<double>(n_choose_4(n)) / std::pow(static_cast<double>(n), 3);
}

inline double default_filter_alpha(int n) {
    return 3.27 * mean_square_sigma(26) / mean_square_sigma(n);
}

struct RampFit {
    double slope = 0.0;      // through-origin linear model sigma_ramp(t) = slope * t
    double t_dip = 0.0;
    double t_plateau = 0.0;
    double window_lo = 0.0;  // fit window [3 t_dip, t_plateau / 3]
    double window_hi = 0.0;
    double plateau_level = 0.0;
};

namespace detail {

/// Moving geometric mean, window 7; used only for dip/plateau detection.
inline std::vector<double> log_smooth(const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    const int half = 3;
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        int cnt = 0;
        for (int k = std::max(0, i - half); k <= std::min(n - 1, i + half); ++k) {
            s += std::log(std::max(v[k], 1e-300));
            ++cnt;
        }
        out[i] = std::exp(s / cnt);
    }
    return out;
}

}  // namespace detail

/// Fit the linear ramp of a dip-ramp-plateau curve. Detection uses the
/// smoothed curve: dip = global minimum, plateau level = median of the last
/// tenth of the grid. Raises NoRamp when the curve has no dip well below the
/// plateau or the window between them collapses (integrable-like curves).
inline RampFit fit_ramp(const FormFactorCurve& curve) {
    const int n = curve.grid.size();
    if (n < 20)
        throw InvalidArgument("fit_ramp: grid too short");
    const std::vector<double> sm = detail::log_smooth(curve.values);

    int dip = 0;
    for (int i = 1; i < n; ++i)
        if (sm[i] < sm[dip]) dip = i;

    std::vector<double> tail(sm.end() - std::max(3, n / 10), sm.end());
    std::nth_element(tail.begin(), tail.begin() + tail.size() / 2, tail.end());
    const double plateau_level = tail[tail.size() / 2];

    if (!(plateau_level > 2.0 * sm[dip]))
        throw NoRamp("fit_ramp: no dip below the plateau level");

    int ip = -1;
    for (int i = dip; i < n; ++i)
        if (sm[i] >= 0.9 * plateau_level) { ip = i; break; }
    if (ip < 0)
        throw NoRamp("fit_ramp: curve never reaches the plateau");

    RampFit fit;
    fit.t_dip = curve.grid.points[dip];
    fit.t_plateau = curve.grid.points[ip];
    fit.plateau_level = plateau_level;
    fit.window_lo = 3.0 * fit.t_dip;
    fit.window_hi = fit.t_plateau / 3.0;
    if (!(fit.window_hi > fit.window_lo))
        throw NoRamp("fit_ramp: dip-to-plateau window collapsed");

    KahanSum vt, tt;
    int used = 0;
    for (int i = 0; i < n; ++i) {
        const double t = curve.grid.points[i];
        if (t < fit.window_lo || t > fit.window_hi) continue;
        vt.add(curve.values[i] * t);
        tt.add(t * t);
        ++used;
    }
    if (used < 5)
        throw NoRamp("fit_ramp: too few grid points in the ramp window");
    fit.slope = vt.value() / tt.value();
    if (!(fit.slope > 0.0))
        throw NoRamp("fit_ramp: non-positive ramp slope");
    return fit;
}

/// Thouless (ramp) time: earliest grid point at or after the dip where the
/// fractional error |sigmaFF - slope*t| / (slope*t) stays within `threshold`
/// for 6 consecutive grid points.
inline double thouless_time(const FormFactorCurve& curve, const RampFit& ramp,
                            double threshold = 0.20) {
    const int n = curve.grid.size();
    const int run = 6;
    int dip = 0;
    for (int i = 1; i < n; ++i)
        if (curve.values[i] < curve.values[dip]) dip = i;
    auto eps = [&](int i) {
        const double r = ramp.slope * curve.grid.points[i];
        return std::abs(curve.values[i] - r) / r;
    };
    for (int i = dip; i + run <= n; ++i) {
        bool ok = true;
        for (int k = i; k < i + run; ++k)
            if (eps(k) > threshold) { ok = false; break; }
        if (ok) return curve.grid.points[i];
    }
    throw NoThoulessTime("thouless_time: fractional error never settles below threshold");
}

struct ThoulessScalingFit {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double rms_log_residual = 0.0;
};

/// Nonlinear least squares on log-residuals for t_Th ~ a / p^b + c,
/// Levenberg-Marquardt with a numerical Jacobian; a, b > 0 and c >= 0 are
/// enforced by an exponential parametrization.
inline ThoulessScalingFit fit_thouless_scaling(const std::vector<std::pair<double, double>>& points) {
    if (points.size() < 4)
        throw InsufficientData("fit_thouless_scaling: need at least 4 points");
    double pmin = points[0].first, pmax = points[0].first;
    for (const auto& [p, t] : points) {
        if (!(p > 0.0) || !(t > 0.0))
            throw InvalidArgument("fit_thouless_scaling: points must be positive");
        pmin = std::min(pmin, p);
        pmax = std::max(pmax, p);
    }
    if (pmax / pmin < 10.0)
        throw InsufficientData("fit_thouless_scaling: points must span a decade in p");

    const int m = static_cast<int>(points.size());
    // init from the log-log slope, c small
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& [p, t] : points) {
        const double x = std::log(1.0 / p), y = std::log(t);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    const double b0 = std::max(0.1, (m * sxy - sx * sy) / (m * sxx - sx * sx));
    double theta[3] = {(sy - b0 * sx) / m, std::log(b0), std::log(1e-6)};

    auto residuals = [&](const double* th, std::vector<double>& r) {
        const double a = std::exp(th[0]), b = std::exp(th[1]), c = std::exp(th[2]);
        for (int i = 0; i < m; ++i)
            r[i] = std::log(points[i].second) - std::log(a * std::pow(points[i].first, -b) + c);
    };

    std::vector<double> r(m), rp(m), rm_(m);
    double lambda = 1e-3;
    residuals(theta, r);
    double cost = 0;
    for (double v : r) cost += v * v;

    for (int iter = 0; iter < 400; ++iter) {
        // numerical Jacobian
        double jac[3][64];
        if (m > 64) throw InvalidArgument("fit_thouless_scaling: too many points");
        for (int k = 0; k < 3; ++k) {
            const double h = 1e-6;
            double tp[3] = {theta[0], theta[1], theta[2]};
            tp[k] += h;
            residuals(tp, rp);
            tp[k] -= 2 * h;
            residuals(tp, rm_);
            for (int i = 0; i < m; ++i) jac[k][i] = (rp[i] - rm_[i]) / (2 * h);
        }
        double jtj[3][3] = {}, jtr[3] = {};
        for (int i = 0; i < m; ++i)
            for (int k = 0; k < 3; ++k) {
                jtr[k] += jac[k][i] * r[i];
                for (int l = 0; l < 3; ++l) jtj[k][l] += jac[k][i] * jac[l][i];
            }
        // solve (JtJ + lambda I) d = -Jtr via 3x3 Gaussian elimination
        double a3[3][4];
        for (int k = 0; k < 3; ++k) {
            for (int l = 0; l < 3; ++l) a3[k][l] = jtj[k][l] + (k == l ? lambda * (1 + jtj[k][k]) : 0.0);
            a3[k][3] = -jtr[k];
        }
        bool singular = false;
        for (int k = 0; k < 3; ++k) {
            int piv = k;
            for (int l = k + 1; l < 3; ++l)
                if (std::abs(a3[l][k]) > std::abs(a3[piv][k])) piv = l;
            if (std::abs(a3[piv][k]) < 1e-300) { singular = true; break; }
            std::swap(a3[k], a3[piv]);
            for (int l = k + 1; l < 3; ++l) {
                const double f = a3[l][k] / a3[k][k];
                for (int q = k; q < 4; ++q) a3[l][q] -= f * a3[k][q];
            }
        }
        if (singular) { lambda *= 10; continue; }
        double d[3];
        for (int k = 2; k >= 0; --k) {
            double s = a3[k][3];
            for (int l = k + 1; l < 3; ++l) s -= a3[k][l] * d[l];
            d[k] = s / a3[k][k];
        }
        double trial[3] = {theta[0] + d[0], theta[1] + d[1], theta[2] + d[2]};
        std::vector<double> rt(m);
        residuals(trial, rt);
        double trial_cost = 0;
        for (double v : rt) trial_cost += v * v;
        if (trial_cost < cost) {
            const bool converged = (cost - trial_cost) < 1e-14 * (1.0 + cost);
            theta[0] = trial[0]; theta[1] = trial[1]; theta[2] = trial[2];
            r = rt;
            cost = trial_cost;
            lambda = std::max(lambda * 0.3, 1e-12);
            if (converged) break;
        } else {
            lambda *= 10;
            if (lambda > 1e12) break;
        }
    }
    ThoulessScalingFit fit;
    fit.a = std::exp(theta[0]);
    fit.b = std::exp(theta[1]);
    fit.c = std::exp(theta[2]);
    fit.rms_log_residual = std::sqrt(cost / m);
    if (!std::isfinite(fit.a) || !std::isfinite(fit.b) || !std::isfinite(fit.c))
        throw FitFailure("fit_thouless_scaling: diverged, rms log residual " +
                         std::to_string(fit.rms_log_residual));
    return fit;
}

}  // namespace nhsyk
