// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/linalg.hpp"
#include "nhsyk/rng.hpp"
#include "nhsyk/spacing.hpp"

namespace nhsyk {

enum class EnsembleClass { GOE = 0, GUE = 1, GSE = 2, Poisson = 3 };

inline const char* to_string(EnsembleClass c) {
    switch (c) {
        case EnsembleClass::GOE: return "GOE";
        case EnsembleClass::GUE: return "GUE";
        case EnsembleClass::GSE: return "GSE";
        case EnsembleClass::Poisson: return "Poisson";
    }
    return "?";
}

/// Reference bulk <r> values the sampled curves are checked against.
inline double reference_r(EnsembleClass c) {
    switch (c) {
        case EnsembleClass::GOE: return 0.5307;
        case EnsembleClass::GUE: return 0.5996;
        case EnsembleClass::GSE: return 0.6744;
        case EnsembleClass::Poisson: return 0.3863;
    }
    throw InvalidArgument("unknown ensemble class");
}

/// Poisson surrogate spectrum: levels with i.i.d. unit-exponential spacings,
/// so the spacing density is exactly exp(-s) and <r> -> 2 ln 2 - 1.
inline std::vector<double> sample_poisson_levels(int dim, std::mt19937_64& rng) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(dim);
    double level = 0.0;
    for (int i = 0; i < dim; ++i) {
        level += e(rng);
        w[i] = level;
    }
    return w;
}

/// One Hermitian sample of the requested Gaussian class. GSE matrices are
/// quaternionic self-dual (Kramers pairs); Poisson samples are diagonal with
/// i.i.d. exponential spacings between consecutive levels. Entry variances
/// give the Gaussian classes the same semicircle scale, which the ratio
/// statistics do not depend on anyway.
inline Matrix sample_gaussian_matrix(EnsembleClass cls, int dim, std::mt19937_64& rng) {
    if (dim < 4) throw InvalidArgument("sample_gaussian_matrix: dim must be >= 4");
    std::normal_distribution<double> g(0.0, 1.0);
    switch (cls) {
        case EnsembleClass::GOE: {
            Matrix a(dim, dim);
            for (int j = 0; j < dim; ++j)
                for (int i = 0; i < dim; ++i) a(i, j) = g(rng);
            return 0.5 * (a + a.transpose());
        }
        case EnsembleClass::GUE: {
            Matrix a(dim, dim);
            for (int j = 0; j < dim; ++j)
                for (int i = 0; i < dim; ++i) a(i, j) = Complex(g(rng), g(rng));
            return 0.5 * (a + a.adjoint());
        }
        case EnsembleClass::GSE: {
            if (dim % 2 != 0) throw InvalidArgument("GSE requires even dim");
            const int n = dim / 2;
            Matrix ga(n, n), gb(n, n);
            for (int j = 0; j < n; ++j)
                for (int i = 0; i < n; ++i) {
                    ga(i, j) = Complex(g(rng), g(rng));
                    gb(i, j) = Complex(g(rng), g(rng));
                }
            const Matrix a = 0.5 * (ga + ga.adjoint());            // Hermitian
            const Matrix b = 0.5 * (gb - gb.transpose());          // antisymmetric
            Matrix h(dim, dim);
            h.block(0, 0, n, n) = a;
            h.block(0, n, n, n) = b;
            h.block(n, 0, n, n) = -b.conjugate();
            h.block(n, n, n, n) = a.conjugate();
            return h;
        }
        case EnsembleClass::Poisson: {
            Matrix h = Matrix::Zero(dim, dim);
            const std::vector<double> w = sample_poisson_levels(dim, rng);
            for (int i = 0; i < dim; ++i) h(i, i) = w[i];
            return h;
        }
    }
    throw InvalidArgument("unknown ensemble class");
}

/// Eigenvalue spectrum of one sample, with GSE Kramers pairs collapsed to
/// dim/2 distinct levels when requested.
inline std::vector<double> sample_spectrum(EnsembleClass cls, int dim, std::mt19937_64& rng,
                                           bool collapse_kramers = true) {
    if (cls == EnsembleClass::Poisson) return sample_poisson_levels(dim, rng);
    std::vector<double> w = lapack_eigvalsh(sample_gaussian_matrix(cls, dim, rng));
    if (cls == EnsembleClass::GSE && collapse_kramers) {
        std::vector<double> distinct;
        distinct.reserve(w.size() / 2);
        const double scale = std::max(std::abs(w.front()), std::abs(w.back()));
        for (std::size_t i = 0; i + 1 < w.size(); i += 2) {
            if (std::abs(w[i + 1] - w[i]) > 1e-10 * scale)
                throw DegenerateSpectrum("GSE sample missing Kramers degeneracy");
            distinct.push_back(0.5 * (w[i] + w[i + 1]));
        }
        return distinct;
    }
    return w;
}

/// Ensemble <r> of a sampled reference class (bulk, unit trim conventions
/// shared with the model statistics).
inline std::pair<double, double> reference_mean_r(EnsembleClass cls, int dim, int n_samples,
                                                  std::uint64_t seed, double edge_trim = 0.10) {
    std::vector<SpacingStats> stats;
    stats.reserve(n_samples);
    SpacingRatioOptions opt;
    opt.edge_trim = edge_trim;
    for (int s = 0; s < n_samples; ++s) {
        std::mt19937_64 rng = tagged_stream(seed, static_cast<std::uint64_t>(cls), s);
        stats.push_back(spacing_ratios(sample_spectrum(cls, dim, rng), opt));
    }
    return ensemble_mean_r(stats);
}

/// Sampled spacing-distribution curve (unit-mean-rescaled bulk spacings),
/// mirroring the solid reference lines the model histograms are compared to.
inline SpacingHistogram reference_spacing_curve(EnsembleClass cls, int dim, int n_samples,
                                                std::uint64_t seed, int bins = 60,
                                                double range_max = 4.0, double edge_trim = 0.10) {
    std::vector<std::vector<double>> spectra;
    spectra.reserve(n_samples);
    for (int s = 0; s < n_samples; ++s) {
        std::mt19937_64 rng = tagged_stream(seed, static_cast<std::uint64_t>(cls), s);
        spectra.push_back(sample_spectrum(cls, dim, rng));
    }
    return spacing_histogram(spectra, bins, range_max, edge_trim);
}

}  // namespace nhsyk
