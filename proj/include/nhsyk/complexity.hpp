// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/form_factor.hpp"
#include "nhsyk/linalg.hpp"

namespace nhsyk {

struct ComplexityCurve {
    std::vector<double> times;
    std::vector<double> values;
    double beta = 0.0;
    int n_realizations = 0;
};

namespace detail {

/// Pairs with |sigma_i - sigma_j| <= rtol * sigma_max are excluded from the
/// pair sums (the plateau sum diverges on exact degeneracies). The sum runs
/// over ordered pairs; the early-time law (1 - 1/L) t^2 pins that convention.
inline double pair_cutoff(const std::vector<double>& sigma, double rtol) {
    double smax = 0.0;
    for (double s : sigma) smax = std::max(smax, std::abs(s));
    return rtol * (smax > 0.0 ? smax : 1.0);
}

inline double complexity_at(const std::vector<double>& sigma, double t, double beta,
                            double cutoff) {
    const std::size_t n = sigma.size();
    KahanSum sum;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double half = 0.5 * (sigma[i] - sigma[j]);
            if (std::abs(sigma[i] - sigma[j]) <= cutoff) continue;
            const double term = std::sin(t * half) / half;
            double w = 2.0;  // ordered pairs (i,j) and (j,i)
            if (beta > 0.0) w = 2.0 * std::exp(-beta * (sigma[i] + sigma[j]));
            sum.add(w * term * term);
        }
    if (beta > 0.0) {
        KahanSum z2;
        for (double s : sigma) z2.add(std::exp(-2.0 * beta * s));
        return sum.value() / (z2.value() * static_cast<double>(n));
    }
    return sum.value() / (static_cast<double>(n) * static_cast<double>(n));
}

}  // namespace detail

/// Singular complexity C(t), ensemble-averaged. beta = 0 is the
/// infinite-temperature pair-sinc sum with 1/L^2 normalization; beta > 0 uses
/// the thermal weights exp(-beta (sigma_i + sigma_j)) with prefactor
/// 1 / (Z_{2 sigma}(beta) L), where Z_{2 sigma}(beta) = sum_n exp(-2 beta sigma_n).
inline ComplexityCurve singular_complexity(const std::vector<std::vector<double>>& spectra,
                                           const std::vector<double>& times, double beta = 0.0,
                                           double degeneracy_rtol = 1e-12) {
    if (spectra.empty())
        throw InvalidArgument("singular_complexity: empty ensemble");
    if (beta < 0.0)
        throw InvalidArgument("singular_complexity: beta must be >= 0");
    ComplexityCurve curve;
    curve.times = times;
    curve.beta = beta;
    curve.n_realizations = static_cast<int>(spectra.size());
    std::vector<KahanSum> acc(times.size());
    for (const std::vector<double>& sigma : spectra) {
        const double cutoff = detail::pair_cutoff(sigma, degeneracy_rtol);
        for (std::size_t i = 0; i < times.size(); ++i)
            acc[i].add(detail::complexity_at(sigma, times[i], beta, cutoff));
    }
    curve.values.resize(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        curve.values[i] = acc[i].value() / static_cast<double>(spectra.size());
    return curve;
}

/// Long-time plateau: (2/L^2) sum over ordered pairs of 1/(sigma_i - sigma_j)^2.
inline double complexity_plateau(const std::vector<double>& sigma,
                                 double degeneracy_rtol = 1e-12) {
    const std::size_t n = sigma.size();
    if (n < 2)
        throw InvalidArgument("complexity_plateau: need at least 2 levels");
    const double cutoff = detail::pair_cutoff(sigma, degeneracy_rtol);
    KahanSum sum;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = sigma[i] - sigma[j];
            if (std::abs(d) <= cutoff) continue;
            sum.add(2.0 / (d * d));
            ++kept;
        }
    if (kept == 0)
        throw DegenerateSpectrum("complexity_plateau: all values degenerate");
    return 2.0 * sum.value() / (static_cast<double>(n) * static_cast<double>(n));
}

/// Check d^2C/dt^2 = 2 sigmaFF(t) - 2/L (unfiltered, single realization,
/// beta = 0) by Richardson-extrapolated central differences at the interior
/// grid points. Returns the sup-norm residual relative to the identity's own
/// scale. Raises ResolutionError when halving the step does not improve the
/// agreement (truncation-dominated grid).
inline double verify_derivative_identity(const std::vector<double>& sigma,
                                         const std::vector<double>& times,
                                         double step = 1e-4) {
    if (sigma.empty() || times.size() < 3)
        throw InvalidArgument("verify_derivative_identity: bad arguments");
    const double cutoff = detail::pair_cutoff(sigma, 1e-12);
    const double dim = static_cast<double>(sigma.size());

    auto c_at = [&](double t) { return detail::complexity_at(sigma, t, 0.0, cutoff); };
    auto target = [&](double t) {
        KahanSum re, im;
        for (double s : sigma) {
            re.add(std::cos(s * t));
            im.add(-std::sin(s * t));
        }
        const double ff = (re.value() * re.value() + im.value() * im.value()) / (dim * dim);
        return 2.0 * ff - 2.0 / dim;
    };
    auto second_diff = [&](double t, double h) {
        return (c_at(t + h) - 2.0 * c_at(t) + c_at(t - h)) / (h * h);
    };

    auto max_residual = [&](double h) {
        double max_res = 0.0, max_t = 0.0;
        for (std::size_t i = 1; i + 1 < times.size(); ++i) {
            const double t = times[i];
            const double d1 = second_diff(t, h);
            const double d2 = second_diff(t, 0.5 * h);
            const double richardson = (4.0 * d2 - d1) / 3.0;
            const double tgt = target(t);
            max_res = std::max(max_res, std::abs(richardson - tgt));
            max_t = std::max(max_t, std::abs(tgt));
        }
        return max_res / (max_t > 0.0 ? max_t : 1.0);
    };

    const double res = max_residual(step);
    const double res_half = max_residual(0.5 * step);
    if (res_half > res && res > 1e-3)
        throw ResolutionError("verify_derivative_identity: step halving does not converge");
    return std::min(res, res_half);
}

}  // namespace nhsyk
