// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/linalg.hpp"

namespace nhsyk {

/// Spacing-ratio statistics of one spectrum (bulk, after edge trimming).
struct SpacingStats {
    std::vector<double> r_values;   // each in [0, 1]
    double mean_r = 0.0;
    double std_error = 0.0;         // within-realization standard error
    long n_spacings = 0;
    double edge_trim = 0.0;
    double degeneracy_tolerance = 0.0;
    long n_zero_over_zero = 0;      // 0/0 ratios reported and excluded
    double near_degenerate_fraction = 0.0;
    bool degenerate_warning = false;
};

struct SpacingRatioOptions {
    double edge_trim = 0.10;              // fraction dropped from each spectral edge
    double degeneracy_tolerance = 1e-8;   // relative to the mean spacing
    bool collapse_degenerate = false;     // merge near-degenerate levels first
};

/// r_n = min(lambda_n, lambda_{n+1}) / max(lambda_n, lambda_{n+1}) over the
/// bulk of the sorted spectrum. Scale- and shift-invariant by construction.
inline SpacingStats spacing_ratios(std::vector<double> values,
                                   const SpacingRatioOptions& opt = {}) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    const std::size_t cut = static_cast<std::size_t>(std::floor(opt.edge_trim * static_cast<double>(n)));
    if (n < 2 * cut + 4)
        throw InsufficientData("spacing_ratios: fewer than 4 levels after trimming");
    std::vector<double> bulk(values.begin() + static_cast<std::ptrdiff_t>(cut),
                             values.end() - static_cast<std::ptrdiff_t>(cut));

    std::vector<double> gaps(bulk.size() - 1);
    KahanSum gap_sum;
    for (std::size_t i = 0; i + 1 < bulk.size(); ++i) {
        gaps[i] = bulk[i + 1] - bulk[i];
        gap_sum.add(gaps[i]);
    }
    const double mean_gap = gap_sum.value() / static_cast<double>(gaps.size());
    if (mean_gap <= 0.0)
        throw DegenerateSpectrum("spacing_ratios: all spacings are zero");

    SpacingStats st;
    st.edge_trim = opt.edge_trim;
    st.degeneracy_tolerance = opt.degeneracy_tolerance;

    const double degen_gap = opt.degeneracy_tolerance * mean_gap;
    std::size_t n_small = 0;
    for (double g : gaps)
        if (g < degen_gap) ++n_small;
    st.near_degenerate_fraction = static_cast<double>(n_small) / static_cast<double>(gaps.size());
    st.degenerate_warning = st.near_degenerate_fraction > 0.40;

    if (opt.collapse_degenerate && n_small > 0) {
        std::vector<double> collapsed;
        collapsed.push_back(bulk.front());
        for (std::size_t i = 1; i < bulk.size(); ++i)
            if (bulk[i] - collapsed.back() >= degen_gap) collapsed.push_back(bulk[i]);
        if (collapsed.size() < 4)
            throw DegenerateSpectrum("spacing_ratios: too few levels after degeneracy collapse");
        bulk = std::move(collapsed);
        gaps.resize(bulk.size() - 1);
        for (std::size_t i = 0; i + 1 < bulk.size(); ++i) gaps[i] = bulk[i + 1] - bulk[i];
    }

    st.n_spacings = static_cast<long>(gaps.size());
    st.r_values.reserve(gaps.size() - 1);
    KahanSum rsum;
    for (std::size_t i = 0; i + 1 < gaps.size(); ++i) {
        const double lo = std::min(gaps[i], gaps[i + 1]);
        const double hi = std::max(gaps[i], gaps[i + 1]);
        if (hi == 0.0) {
            ++st.n_zero_over_zero;  // 0/0: reported and excluded
            continue;
        }
        const double r = lo / hi;
        st.r_values.push_back(r);
        rsum.add(r);
    }
    if (st.r_values.empty())
        throw DegenerateSpectrum("spacing_ratios: no well-defined ratios");

    const double m = rsum.value() / static_cast<double>(st.r_values.size());
    st.mean_r = m;
    KahanSum var;
    for (double r : st.r_values) var.add((r - m) * (r - m));
    if (st.r_values.size() > 1) {
        const double v = var.value() / static_cast<double>(st.r_values.size() - 1);
        st.std_error = std::sqrt(v / static_cast<double>(st.r_values.size()));
    }
    return st;
}

/// Pooled mean over all ratios; standard error from realization-level means.
inline std::pair<double, double> ensemble_mean_r(const std::vector<SpacingStats>& stats) {
    if (stats.empty())
        throw InvalidArgument("ensemble_mean_r: empty input");
    KahanSum pooled;
    std::size_t count = 0;
    for (const SpacingStats& s : stats) {
        for (double r : s.r_values) pooled.add(r);
        count += s.r_values.size();
    }
    const double mean = pooled.value() / static_cast<double>(count);
    if (stats.size() == 1) return {mean, stats[0].std_error};
    KahanSum msum;
    for (const SpacingStats& s : stats) msum.add(s.mean_r);
    const double mbar = msum.value() / static_cast<double>(stats.size());
    KahanSum var;
    for (const SpacingStats& s : stats) var.add((s.mean_r - mbar) * (s.mean_r - mbar));
    const double v = var.value() / static_cast<double>(stats.size() - 1);
    return {mean, std::sqrt(v / static_cast<double>(stats.size()))};
}

/// Normalized density of bulk spacings rescaled to unit mean per realization.
struct SpacingHistogram {
    std::vector<double> bin_edges;  // size bins + 1
    std::vector<double> densities;  // unit area over the histogram range
    long n_spacings = 0;
};

inline SpacingHistogram spacing_histogram(const std::vector<std::vector<double>>& ensemble,
                                          int bins = 60, double range_max = 4.0,
                                          double edge_trim = 0.10) {
    if (ensemble.empty() || bins < 1 || range_max <= 0.0)
        throw InvalidArgument("spacing_histogram: bad arguments");
    SpacingHistogram h;
    h.bin_edges.resize(bins + 1);
    const double width = range_max / bins;
    for (int b = 0; b <= bins; ++b) h.bin_edges[b] = b * width;
    std::vector<double> counts(bins, 0.0);
    for (std::vector<double> values : ensemble) {
        std::sort(values.begin(), values.end());
        const std::size_t n = values.size();
        const std::size_t cut = static_cast<std::size_t>(std::floor(edge_trim * static_cast<double>(n)));
        if (n < 2 * cut + 4)
            throw InsufficientData("spacing_histogram: spectrum too short");
        KahanSum sum;
        std::vector<double> gaps;
        gaps.reserve(n - 2 * cut - 1);
        for (std::size_t i = cut; i + 1 < n - cut; ++i) {
            gaps.push_back(values[i + 1] - values[i]);
            sum.add(gaps.back());
        }
        const double mean_gap = sum.value() / static_cast<double>(gaps.size());
        if (mean_gap <= 0.0)
            throw DegenerateSpectrum("spacing_histogram: all spacings are zero");
        for (double g : gaps) {
            const double s = g / mean_gap;
            h.n_spacings++;
            if (s < range_max) counts[static_cast<int>(s / width)] += 1.0;
        }
    }
    // Normalize by the total pooled count, not just the in-window one, so the
    // curve estimates the true spacing density restricted to [0, range_max]
    // and its integral equals the in-window probability mass.
    h.densities.resize(bins);
    for (int b = 0; b < bins; ++b)
        h.densities[b] =
            h.n_spacings > 0 ? counts[b] / (static_cast<double>(h.n_spacings) * width) : 0.0;
    return h;
}

}  // namespace nhsyk
