// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nhsyk/errors.hpp"
#include "nhsyk/majorana.hpp"
#include "nhsyk/model.hpp"
#include "nhsyk/spacing.hpp"
#include "nhsyk/spectral.hpp"
#include "nhsyk/spectrum_io.hpp"

extern "C" void openblas_set_num_threads(int);

namespace nhsyk {

inline constexpr const char* kArtifactVersion = "1.0.0";

/// Full description of an ensemble run; the manifest determines every output
/// byte, independent of worker count.
struct RunManifest {
    std::vector<int> n_values;
    std::vector<double> p_values;
    Mode mode = Mode::NonHermitian;
    Sector sector = Sector::Plus;
    int n_realizations = 0;
    std::uint64_t master_seed = 0;
    std::string out_dir;
    int threads = 1;
    double edge_trim = 0.10;
    std::string artifact_version = kArtifactVersion;

    void validate() const {
        if (n_values.empty() || p_values.empty() || n_realizations < 1)
            throw InvalidArgument("RunManifest: empty N/p grid or no realizations");
        for (int n : n_values)
            if (n < 4 || n % 2 != 0) throw InvalidArgument("RunManifest: bad N");
        for (double p : p_values)
            if (!(p > 0.0 && p <= 1.0)) throw InvalidArgument("RunManifest: bad p");
    }
};

/// Sample -> assemble in the parity sector (or full space) -> singular values.
/// A pure function of its arguments; the MajoranaSet and parity are shared
/// read-only across workers.
inline SingularSpectrum compute_realization(const ModelConfig& config, Sector sector,
                                            const MajoranaSet& ms, const ParityOperator& parity) {
    const CouplingRealization coup = sample_couplings(config);
    Matrix h;
    if (sector == Sector::Full)
        h = assemble_hamiltonian(coup, ms);
    else
        h = assemble_sector(coup, ms, parity, static_cast<int>(sector));
    SingularSpectrum s;
    s.values = singular_values(h);
    s.config = config;
    s.sector = sector;
    return s;
}

namespace detail {

inline std::string spectrum_filename(const ModelConfig& c, Sector sector) {
    std::ostringstream os;
    os << "N" << c.n << "_p" << std::setprecision(12) << c.p << "_" << to_string(c.mode)
       << "_s" << static_cast<int>(sector) << "_seed" << c.master_seed
       << "_i" << std::setw(6) << std::setfill('0') << c.realization_index << ".spec";
    return os.str();
}

inline bool record_matches(const std::filesystem::path& path, const ModelConfig& c,
                           Sector sector) {
    try {
        const record::Header h = read_spectrum_header(path);
        return h.n == static_cast<std::uint32_t>(c.n) && h.p == c.p &&
               h.mode == static_cast<std::uint32_t>(c.mode) &&
               h.sector == static_cast<std::int32_t>(sector) &&
               h.seed == c.master_seed && h.index == c.realization_index;
    } catch (const IoError&) {
        return false;
    }
}

/// Run `work(i)` for i in [0, count) on `threads` workers. Items are
/// independent; BLAS is pinned to one thread per worker.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& work) {
    threads = std::max(1, threads);
    if (threads == 1) {
        for (std::size_t i = 0; i < count; ++i) work(i);
        return;
    }
    openblas_set_num_threads(1);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    work(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lk(error_mutex);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace detail

/// Execute (or resume) a manifest: one binary spectrum record per
/// (N, p, realization). Existing records whose headers match are skipped;
/// a header mismatch on an existing file is a corruption error.
inline std::vector<std::filesystem::path> run_ensemble(const RunManifest& manifest,
                                                       bool resume = true) {
    manifest.validate();
    namespace fs = std::filesystem;
    const fs::path dir(manifest.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory: " + dir.string());

    struct Item {
        ModelConfig config;
        fs::path path;
        bool skip;
    };
    std::vector<Item> items;
    std::vector<fs::path> all_paths;
    for (int n : manifest.n_values) {
        for (double p : manifest.p_values) {
            for (int i = 0; i < manifest.n_realizations; ++i) {
                ModelConfig c{n, p, manifest.mode, manifest.master_seed,
                              static_cast<std::uint64_t>(i)};
                const fs::path path = dir / detail::spectrum_filename(c, manifest.sector);
                all_paths.push_back(path);
                bool skip = false;
                if (fs::exists(path)) {
                    if (!resume)
                        throw IoError("output exists and resume is off: " + path.string());
                    if (!detail::record_matches(path, c, manifest.sector))
                        throw CorruptRecord("existing record does not match manifest: " +
                                            path.string());
                    skip = true;
                }
                items.push_back({c, path, skip});
            }
        }
    }

    // One MajoranaSet / parity per N, shared read-only.
    std::vector<int> ns = manifest.n_values;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::vector<MajoranaSet> sets;
    std::vector<ParityOperator> parities;
    sets.reserve(ns.size());
    for (int n : ns) {
        sets.emplace_back(n);
        parities.push_back(parity_operator(sets.back()));
    }
    auto set_for = [&](int n) -> std::size_t {
        return static_cast<std::size_t>(std::lower_bound(ns.begin(), ns.end(), n) - ns.begin());
    };

    detail::parallel_for(items.size(), manifest.threads, [&](std::size_t k) {
        const Item& item = items[k];
        if (item.skip) return;
        const std::size_t si = set_for(item.config.n);
        const SingularSpectrum s =
            compute_realization(item.config, manifest.sector, sets[si], parities[si]);
        write_spectrum(item.path, s);
    });
    return all_paths;
}

/// FNV-1a over the concatenated bytes of the given files in the given order.
inline std::uint64_t content_hash(const std::vector<std::filesystem::path>& files) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& f : files) {
        std::ifstream is(f, std::ios::binary);
        if (!is) throw IoError("cannot open for hashing: " + f.string());
        char buf[4096];
        while (is.read(buf, sizeof(buf)) || is.gcount() > 0) {
            for (std::streamsize i = 0; i < is.gcount(); ++i) {
                h ^= static_cast<unsigned char>(buf[i]);
                h *= 0x100000001b3ULL;
            }
            if (!is) break;
        }
    }
    return h;
}

/// <r_sigma>(p) over a descending sparsity grid, with the 99%-of-dense
/// crossing point.
struct SparsityScanResult {
    int n = 0;
    std::vector<double> p_grid;     // descending, includes p = 1
    std::vector<double> mean_r;     // pooled means
    std::vector<double> std_error;  // over realization-level means
    double r_dense = 0.0;
    double p_crit = 0.0;
};

/// Linear interpolation of the first downward crossing of
/// 0.99 * r_dense, scanning from p = 1 downward.
inline double p_crit_from_curve(const std::vector<double>& p_desc,
                                const std::vector<double>& mean_r, double r_dense) {
    const double threshold = 0.99 * r_dense;
    for (std::size_t i = 0; i + 1 < p_desc.size(); ++i) {
        if (mean_r[i] >= threshold && mean_r[i + 1] < threshold) {
            const double f = (mean_r[i] - threshold) / (mean_r[i] - mean_r[i + 1]);
            return p_desc[i] + f * (p_desc[i + 1] - p_desc[i]);
        }
    }
    throw ScanRangeError("p_crit: <r_sigma> never crosses 0.99 of its dense value");
}

/// Default descending sparsity grid: log-spaced, 12 points per decade, from
/// 1 down to 0.41 of the predicted threshold 1.68 N / C(N,4). Near that floor
/// <r_sigma> has saturated at the Poisson value; much below it the sector
/// spectrum develops exact block degeneracies, the folded statistic
/// undershoots Poisson, and the diagnostic is no longer clean.
inline std::vector<double> default_p_grid(int n) {
    const double p_lo = 0.41 * 1.68 * n / static_cast<double>(n_choose_4(n));
    const double decades = std::log10(1.0 / p_lo);
    const int count = static_cast<int>(std::ceil(decades * 12.0)) + 1;
    std::vector<double> grid(count);
    for (int i = 0; i < count; ++i)
        grid[i] = std::pow(10.0, -decades * i / (count - 1));
    grid.front() = 1.0;
    return grid;
}

/// Sparsity scan of <r_sigma>(p) with the 0.99-crossing threshold estimate.
/// When `cache_dir` is non-empty, every realization spectrum is persisted as
/// a validated binary record there, and subsequent calls with the same
/// parameters resume from the cached records instead of recomputing — scans
/// at large N can run for hours, so interrupted runs lose no work.
inline SparsityScanResult scan_sparsity(int n, const std::vector<double>& p_grid,
                                        int n_realizations, std::uint64_t master_seed,
                                        Mode mode = Mode::NonHermitian,
                                        Sector sector = Sector::Plus, double edge_trim = 0.10,
                                        int threads = 1,
                                        const std::filesystem::path& cache_dir = {}) {
    if (p_grid.size() < 2 || p_grid.front() != 1.0)
        throw InvalidArgument("scan_sparsity: p grid must start at 1");
    for (std::size_t i = 0; i + 1 < p_grid.size(); ++i)
        if (p_grid[i + 1] >= p_grid[i])
            throw InvalidArgument("scan_sparsity: p grid must be strictly descending");

    const bool use_cache = !cache_dir.empty();
    if (use_cache) {
        std::error_code ec;
        std::filesystem::create_directories(cache_dir, ec);
        if (ec) throw IoError("cannot create scan cache directory: " + cache_dir.string());
    }

    const MajoranaSet ms(n);
    const ParityOperator parity = parity_operator(ms);

    SparsityScanResult res;
    res.n = n;
    res.p_grid = p_grid;
    res.mean_r.resize(p_grid.size());
    res.std_error.resize(p_grid.size());

    SpacingRatioOptions opt;
    opt.edge_trim = edge_trim;
    // Exact multiplets (Kramers classes, decoupled blocks at strong sparsity)
    // carry no level-repulsion information; fold them before forming ratios.
    opt.collapse_degenerate = true;

    // Realization streams are keyed by index only, so the p = 1 column equals
    // the standalone dense computation on the same seeds.
    std::vector<std::vector<SpacingStats>> stats(p_grid.size());
    for (auto& v : stats) v.resize(n_realizations);
    detail::parallel_for(p_grid.size() * static_cast<std::size_t>(n_realizations), threads,
                         [&](std::size_t k) {
                             const std::size_t pi = k / n_realizations;
                             const std::size_t idx = k % n_realizations;
                             ModelConfig c{n, p_grid[pi], mode, master_seed,
                                           static_cast<std::uint64_t>(idx)};
                             SingularSpectrum s;
                             bool loaded = false;
                             std::filesystem::path rec;
                             if (use_cache) {
                                 rec = cache_dir / detail::spectrum_filename(c, sector);
                                 if (std::filesystem::exists(rec) &&
                                     detail::record_matches(rec, c, sector)) {
                                     try {
                                         s = read_spectrum(rec);
                                         loaded = true;
                                     } catch (const CorruptRecord&) {
                                         // stale or damaged cache entry: recompute
                                     }
                                 }
                             }
                             if (!loaded) {
                                 s = compute_realization(c, sector, ms, parity);
                                 if (use_cache) write_spectrum(rec, s);
                             }
                             try {
                                 stats[pi][idx] = spacing_ratios(s.values, opt);
                             } catch (const DegenerateSpectrum&) {
                                 // Fully fragmented spectrum: no usable ratios
                                 // in this realization; leave it empty.
                             }
                         });
    for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
        std::vector<SpacingStats> valid;
        valid.reserve(stats[pi].size());
        for (const SpacingStats& s : stats[pi])
            if (!s.r_values.empty()) valid.push_back(s);
        if (valid.size() * 2 < stats[pi].size())
            throw ScanRangeError("scan_sparsity: majority of realizations degenerate at p = " +
                                 std::to_string(p_grid[pi]));
        const auto [mean, err] = ensemble_mean_r(valid);
        res.mean_r[pi] = mean;
        res.std_error[pi] = err;
    }
    res.r_dense = res.mean_r.front();
    res.p_crit = p_crit_from_curve(res.p_grid, res.mean_r, res.r_dense);
    return res;
}

struct PcritScalingFit {
    double k = 0.0;
    double max_abs_residual = 0.0;  // in units of the fitted p_crit
};

/// Least squares for k in p_crit = k N / C(N,4).
inline PcritScalingFit fit_pcrit_scaling(const std::vector<std::pair<int, double>>& points) {
    if (points.size() < 3)
        throw InsufficientData("fit_pcrit_scaling: need at least 3 N values");
    double num = 0.0, den = 0.0;
    for (const auto& [n, pc] : points) {
        const double x = static_cast<double>(n) / static_cast<double>(n_choose_4(n));
        num += pc * x;
        den += x * x;
    }
    PcritScalingFit fit;
    fit.k = num / den;
    for (const auto& [n, pc] : points) {
        const double predicted = fit.k * static_cast<double>(n) / static_cast<double>(n_choose_4(n));
        fit.max_abs_residual = std::max(fit.max_abs_residual,
                                        std::abs(pc - predicted) / predicted);
    }
    return fit;
}

}  // namespace nhsyk
