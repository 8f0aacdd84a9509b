// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

// CSV and JSON-manifest writers for aggregate results. CSV files carry
// commented metadata header lines prefixed with '#'.

#include <ostream>
#include <string>

#include <json.hpp>

#include "nhsyk/complexity.hpp"
#include "nhsyk/ensemble.hpp"
#include "nhsyk/form_factor.hpp"
#include "nhsyk/spacing.hpp"

namespace nhsyk {

inline void write_spacing_stats_csv(std::ostream& os, const SpacingStats& st,
                                    int n, double p, Mode mode, int n_realizations) {
    os.precision(12);
    os << "# N=" << n << " p=" << p << " mode=" << to_string(mode)
       << " trim=" << st.edge_trim << " degeneracy_tolerance=" << st.degeneracy_tolerance
       << " n_realizations=" << n_realizations << '\n';
    os << "mean_r,std_error,n_spacings,n_zero_over_zero,near_degenerate_fraction\n";
    os << st.mean_r << ',' << st.std_error << ',' << st.n_spacings << ','
       << st.n_zero_over_zero << ',' << st.near_degenerate_fraction << '\n';
}

inline void write_histogram_csv(std::ostream& os, const SpacingHistogram& h,
                                const std::string& meta) {
    os.precision(12);
    os << "# " << meta << " n_spacings=" << h.n_spacings << '\n';
    os << "bin_lo,bin_hi,density\n";
    for (std::size_t b = 0; b + 1 < h.bin_edges.size(); ++b)
        os << h.bin_edges[b] << ',' << h.bin_edges[b + 1] << ',' << h.densities[b] << '\n';
}

inline void write_form_factor_csv(std::ostream& os, const FormFactorCurve& c) {
    os.precision(12);
    os << "# N=" << c.n << " p=" << c.p << " mode=" << to_string(c.mode)
       << " alpha=" << c.alpha << " n_realizations=" << c.n_realizations << '\n';
    os << "t,value\n";
    for (int i = 0; i < c.grid.size(); ++i)
        os << c.grid.points[i] << ',' << c.values[i] << '\n';
}

inline nlohmann::json form_factor_manifest(const FormFactorCurve& c) {
    return {{"N", c.n},
            {"p", c.p},
            {"mode", to_string(c.mode)},
            {"alpha", c.alpha},
            {"n_realizations", c.n_realizations},
            {"t_min", c.grid.points.front()},
            {"t_max", c.grid.points.back()},
            {"grid_points", c.grid.size()},
            {"artifact_version", kArtifactVersion}};
}

inline nlohmann::json thouless_manifest(const FormFactorCurve& dense, const RampFit& ramp,
                                        double threshold) {
    nlohmann::json j = form_factor_manifest(dense);
    j["ramp_slope"] = ramp.slope;
    j["ramp_window"] = {ramp.window_lo, ramp.window_hi};
    j["t_dip"] = ramp.t_dip;
    j["t_plateau"] = ramp.t_plateau;
    j["threshold"] = threshold;
    return j;
}

inline void write_complexity_csv(std::ostream& os, const ComplexityCurve& c,
                                 const std::string& meta) {
    os.precision(12);
    os << "# " << meta << " beta=" << c.beta << " n_realizations=" << c.n_realizations << '\n';
    os << "t,C\n";
    for (std::size_t i = 0; i < c.times.size(); ++i)
        os << c.times[i] << ',' << c.values[i] << '\n';
}

inline void write_scan_csv(std::ostream& os, const SparsityScanResult& scan, Mode mode,
                           int n_realizations) {
    os.precision(12);
    os << "# N=" << scan.n << " mode=" << to_string(mode)
       << " n_realizations=" << n_realizations << " r_dense=" << scan.r_dense
       << " p_crit=" << scan.p_crit << '\n';
    os << "p,mean_r,std_error\n";
    for (std::size_t i = 0; i < scan.p_grid.size(); ++i)
        os << scan.p_grid[i] << ',' << scan.mean_r[i] << ',' << scan.std_error[i] << '\n';
}

}  // namespace nhsyk
