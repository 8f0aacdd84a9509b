// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line surface over the nhsyk library: per-realization sampling and
// spectra, ensemble runs, spacing statistics, form factors, Thouless sweeps,
// complexity curves, sparsity scans and RMT references. All aggregate outputs
// are CSV with '#' metadata lines; manifests echo as JSON on stdout.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include <nhsyk/nhsyk.hpp>

namespace {

using namespace nhsyk;

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open for writing: " + path);
    return os;
}

Sector sector_from_string(const std::string& s) {
    if (s == "plus" || s == "+1" || s == "+") return Sector::Plus;
    if (s == "minus" || s == "-1" || s == "-") return Sector::Minus;
    if (s == "full") return Sector::Full;
    throw InvalidArgument("unknown sector: " + s);
}

/// Generate an ensemble of sector spectra in memory for the stats commands.
std::vector<SingularSpectrum> make_ensemble(int n, double p, Mode mode, Sector sector,
                                            std::uint64_t seed, int samples, int threads) {
    const MajoranaSet ms(n);
    const ParityOperator parity = parity_operator(ms);
    std::vector<SingularSpectrum> out(samples);
    detail::parallel_for(samples, threads, [&](std::size_t i) {
        ModelConfig c{n, p, mode, seed, static_cast<std::uint64_t>(i)};
        out[i] = compute_realization(c, sector, ms, parity);
    });
    return out;
}

/// Key/value + comma-list config file mirroring RunManifest fields.
RunManifest parse_manifest_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config: " + path);
    RunManifest m;
    std::string line;
    while (std::getline(is, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string val = strip(line.substr(eq + 1));
        std::istringstream vs(val);
        std::string item;
        if (key == "n") {
            while (std::getline(vs, item, ',')) m.n_values.push_back(std::stoi(item));
        } else if (key == "p") {
            while (std::getline(vs, item, ',')) m.p_values.push_back(std::stod(item));
        } else if (key == "mode") {
            m.mode = mode_from_string(val);
        } else if (key == "sector") {
            m.sector = sector_from_string(val);
        } else if (key == "samples") {
            m.n_realizations = std::stoi(val);
        } else if (key == "seed") {
            m.master_seed = std::stoull(val);
        } else if (key == "out") {
            m.out_dir = val;
        } else if (key == "threads") {
            m.threads = std::stoi(val);
        } else if (key == "trim") {
            m.edge_trim = std::stod(val);
        } else {
            throw InvalidArgument("unknown config key: " + key);
        }
    }
    return m;
}

nlohmann::json manifest_json(const RunManifest& m) {
    return {{"n", m.n_values},           {"p", m.p_values},
            {"mode", to_string(m.mode)}, {"sector", to_string(m.sector)},
            {"samples", m.n_realizations}, {"seed", m.master_seed},
            {"out", m.out_dir},          {"threads", m.threads},
            {"trim", m.edge_trim},       {"artifact_version", m.artifact_version}};
}

}  // namespace

int main(int argc, char** argv) {
    using namespace nhsyk;

    CLI::App app{"nhsyk: singular-value chaos diagnostics of the sparse non-Hermitian SYK model"};
    app.require_subcommand(1);

    int n = 18;
    double p = 1.0;
    std::string mode_str = "non-hermitian";
    std::string sector_str = "plus";
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    int samples = 100;
    double alpha = -1.0;  // < 0: use the default filter family
    double trim = 0.10;
    double beta = 0.0;
    int threads = 1;
    std::string out;

    auto add_common = [&](CLI::App* cmd, bool with_samples = true) {
        cmd->add_option("--n", n, "number of Majorana fermions (even)");
        cmd->add_option("--p", p, "sparsity probability in (0, 1]");
        cmd->add_option("--mode", mode_str, "non-hermitian | hermitian | anti-hermitian");
        cmd->add_option("--sector", sector_str, "plus | minus | full");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--trim", trim, "edge trim fraction per spectral edge");
        cmd->add_option("--threads", threads, "worker threads");
        cmd->add_option("--out", out, "output path");
        if (with_samples) cmd->add_option("--samples", samples, "number of disorder realizations");
    };

    // sample: one realization's couplings as flat text
    auto* c_sample = app.add_subcommand("sample", "emit one realization's couplings");
    add_common(c_sample, false);
    c_sample->add_option("--index", index, "realization index");

    // spectrum: one realization -> binary spectrum record (or CSV)
    auto* c_spectrum = app.add_subcommand("spectrum", "one realization -> spectrum file");
    add_common(c_spectrum, false);
    c_spectrum->add_option("--index", index, "realization index");

    // run: full manifest execution
    auto* c_run = app.add_subcommand("run", "execute (or resume) an ensemble manifest");
    std::string config_path;
    std::vector<int> n_list;
    std::vector<double> p_list;
    bool resume = true;
    c_run->add_option("--config", config_path, "manifest config file (key = value)");
    c_run->add_option("--n", n_list, "N values");
    c_run->add_option("--p", p_list, "p values");
    c_run->add_option("--mode", mode_str, "model mode");
    c_run->add_option("--sector", sector_str, "parity sector");
    c_run->add_option("--seed", seed, "master seed");
    c_run->add_option("--samples", samples, "realizations per (N, p)");
    c_run->add_option("--out", out, "output directory");
    c_run->add_option("--threads", threads, "worker threads");
    c_run->add_flag("--resume,!--no-resume", resume, "skip validated existing records");

    auto* c_rstat = app.add_subcommand("rstat", "ensemble <r_sigma> spacing statistics");
    add_common(c_rstat);
    bool collapse = false;
    c_rstat->add_flag("--collapse", collapse, "collapse exact multiplets before ratios");

    auto* c_hist = app.add_subcommand("hist", "spacing-distribution histogram");
    add_common(c_hist);
    int bins = 60;
    c_hist->add_option("--bins", bins, "histogram bins");

    auto* c_sff = app.add_subcommand("sff", "singular form factor curve");
    add_common(c_sff);
    c_sff->add_option("--alpha", alpha, "Gaussian filter strength (default: alpha family)");

    auto* c_thouless = app.add_subcommand("thouless", "t_Th(p) sweep and a/p^b + c fit");
    add_common(c_thouless);
    std::vector<double> sweep_p;
    double threshold = 0.20;
    c_thouless->add_option("--sweep", sweep_p, "p values of the sweep")->required();
    c_thouless->add_option("--alpha", alpha, "Gaussian filter strength");
    c_thouless->add_option("--threshold", threshold, "fractional ramp-deviation threshold");

    auto* c_complexity = app.add_subcommand("complexity", "singular complexity curve");
    add_common(c_complexity);
    c_complexity->add_option("--beta", beta, "inverse temperature");
    bool plateau_only = false;
    c_complexity->add_flag("--plateau", plateau_only, "emit plateau values instead of curves");

    auto* c_pcrit = app.add_subcommand("pcrit", "sparsity scans with p_crit and k fit");
    std::vector<int> scan_n{14, 16, 18};
    c_pcrit->add_option("--n", scan_n, "N values to scan");
    c_pcrit->add_option("--samples", samples, "realizations per grid point");
    c_pcrit->add_option("--seed", seed, "master seed");
    c_pcrit->add_option("--trim", trim, "edge trim fraction");
    c_pcrit->add_option("--threads", threads, "worker threads");
    c_pcrit->add_option("--out", out, "output CSV path prefix");

    auto* c_rmt = app.add_subcommand("rmt-ref", "sampled RMT reference statistics");
    std::string class_str = "GUE";
    int dim = 512;
    c_rmt->add_option("--class", class_str, "GOE | GUE | GSE | Poisson");
    c_rmt->add_option("--dim", dim, "matrix dimension");
    c_rmt->add_option("--samples", samples, "number of samples");
    c_rmt->add_option("--seed", seed, "master seed");
    c_rmt->add_option("--trim", trim, "edge trim fraction");
    c_rmt->add_option("--out", out, "output CSV path for the spacing curve");

    CLI11_PARSE(app, argc, argv);

    try {
        const Mode mode = mode_from_string(mode_str);
        const Sector sector = sector_from_string(sector_str);

        if (c_sample->parsed()) {
            const ModelConfig cfg{n, p, mode, seed, index};
            const CouplingRealization coup = sample_couplings(cfg);
            if (out.empty()) {
                write_couplings(std::cout, coup);
            } else {
                auto os = open_out(out);
                write_couplings(os, coup);
                std::cout << coup.entries.size() << " couplings -> " << out << "\n";
            }
        } else if (c_spectrum->parsed()) {
            const MajoranaSet ms(n);
            const ParityOperator parity = parity_operator(ms);
            const ModelConfig cfg{n, p, mode, seed, index};
            const SingularSpectrum s = compute_realization(cfg, sector, ms, parity);
            if (out.empty()) {
                write_spectrum_csv(std::cout, s);
            } else if (out.size() > 4 && out.substr(out.size() - 4) == ".csv") {
                auto os = open_out(out);
                write_spectrum_csv(os, s);
            } else {
                write_spectrum(out, s);
                std::cout << s.values.size() << " singular values -> " << out << "\n";
            }
        } else if (c_run->parsed()) {
            RunManifest m;
            if (!config_path.empty()) m = parse_manifest_file(config_path);
            if (!n_list.empty()) m.n_values = n_list;
            if (!p_list.empty()) m.p_values = p_list;
            if (c_run->count("--mode")) m.mode = mode;
            if (c_run->count("--sector")) m.sector = sector;
            if (c_run->count("--seed")) m.master_seed = seed;
            if (c_run->count("--samples") || m.n_realizations == 0) m.n_realizations = samples;
            if (!out.empty()) m.out_dir = out;
            if (c_run->count("--threads")) m.threads = threads;
            std::cout << manifest_json(m).dump(2) << "\n";
            const auto files = run_ensemble(m, resume);
            std::cout << files.size() << " records in " << m.out_dir
                      << "  content_hash=" << std::hex << content_hash(files) << std::dec << "\n";
        } else if (c_rstat->parsed()) {
            const auto ensemble = make_ensemble(n, p, mode, sector, seed, samples, threads);
            SpacingRatioOptions opt;
            opt.edge_trim = trim;
            opt.collapse_degenerate = collapse;
            std::vector<SpacingStats> stats;
            stats.reserve(ensemble.size());
            for (const auto& s : ensemble) stats.push_back(spacing_ratios(s.values, opt));
            const auto [mean, err] = ensemble_mean_r(stats);
            SpacingStats pooled = stats.front();
            pooled.mean_r = mean;
            pooled.std_error = err;
            if (out.empty()) {
                write_spacing_stats_csv(std::cout, pooled, n, p, mode, samples);
            } else {
                auto os = open_out(out);
                write_spacing_stats_csv(os, pooled, n, p, mode, samples);
            }
        } else if (c_hist->parsed()) {
            const auto ensemble = make_ensemble(n, p, mode, sector, seed, samples, threads);
            std::vector<std::vector<double>> raw;
            raw.reserve(ensemble.size());
            for (const auto& s : ensemble) raw.push_back(s.values);
            const SpacingHistogram h = spacing_histogram(raw, bins, 4.0, trim);
            std::ostringstream meta;
            meta << "N=" << n << " p=" << p << " mode=" << to_string(mode)
                 << " trim=" << trim << " n_realizations=" << samples;
            if (out.empty()) {
                write_histogram_csv(std::cout, h, meta.str());
            } else {
                auto os = open_out(out);
                write_histogram_csv(os, h, meta.str());
            }
        } else if (c_sff->parsed()) {
            const double a = alpha < 0.0 ? default_filter_alpha(n) : alpha;
            const auto ensemble = make_ensemble(n, p, mode, sector, seed, samples, threads);
            const TimeGrid grid = TimeGrid::logspace(1e-2, 1e6, 400);
            FormFactorCurve curve = sigma_ff(ensemble, grid, a);
            std::cout << form_factor_manifest(curve).dump(2) << "\n";
            if (!out.empty()) {
                auto os = open_out(out);
                write_form_factor_csv(os, curve);
            }
        } else if (c_thouless->parsed()) {
            const double a = alpha < 0.0 ? default_filter_alpha(n) : alpha;
            const TimeGrid grid = TimeGrid::logspace(1e-2, 1e6, 400);
            const auto dense_ensemble = make_ensemble(n, 1.0, mode, sector, seed, samples, threads);
            const FormFactorCurve dense = sigma_ff(dense_ensemble, grid, a);
            const RampFit ramp = fit_ramp(dense);
            std::vector<std::pair<double, double>> points;
            for (double ps : sweep_p) {
                const auto ens = make_ensemble(n, ps, mode, sector, seed, samples, threads);
                points.emplace_back(ps, thouless_time(sigma_ff(ens, grid, a), ramp, threshold));
            }
            nlohmann::json j = thouless_manifest(dense, ramp, threshold);
            j["t_th_per_p"] = points;
            try {
                const ThoulessScalingFit fit = fit_thouless_scaling(points);
                j["fit"] = {{"a", fit.a}, {"b", fit.b}, {"c", fit.c},
                            {"rms_log_residual", fit.rms_log_residual}};
            } catch (const std::runtime_error& e) {
                j["fit_error"] = e.what();
            }
            std::cout << j.dump(2) << "\n";
            if (!out.empty()) {
                auto os = open_out(out);
                os.precision(12);
                os << "# N=" << n << " alpha=" << a << " threshold=" << threshold << "\np,t_th\n";
                for (const auto& [ps, t] : points) os << ps << ',' << t << '\n';
            }
        } else if (c_complexity->parsed()) {
            const auto ensemble = make_ensemble(n, p, mode, sector, seed, samples, threads);
            std::vector<std::vector<double>> raw;
            raw.reserve(ensemble.size());
            for (const auto& s : ensemble) raw.push_back(s.values);
            std::ostringstream meta;
            meta << "N=" << n << " p=" << p << " mode=" << to_string(mode);
            if (plateau_only) {
                KahanSum sum;
                for (const auto& s : raw) sum.add(complexity_plateau(s));
                const double mean = sum.value() / static_cast<double>(raw.size());
                std::cout << "# " << meta.str() << "\np,plateau\n" << p << ',' << mean << "\n";
            } else {
                const TimeGrid grid = TimeGrid::logspace(1e-2, 1e4, 200);
                const ComplexityCurve curve = singular_complexity(raw, grid.points, beta);
                if (out.empty()) {
                    write_complexity_csv(std::cout, curve, meta.str());
                } else {
                    auto os = open_out(out);
                    write_complexity_csv(os, curve, meta.str());
                }
            }
        } else if (c_pcrit->parsed()) {
            std::vector<std::pair<int, double>> points;
            for (int nv : scan_n) {
                const SparsityScanResult scan = scan_sparsity(nv, default_p_grid(nv), samples,
                                                              seed, Mode::NonHermitian,
                                                              Sector::Plus, trim, threads);
                points.emplace_back(nv, scan.p_crit);
                std::cout << "N=" << nv << " p_crit=" << scan.p_crit
                          << " r_dense=" << scan.r_dense << "\n";
                if (!out.empty()) {
                    auto os = open_out(out + ".N" + std::to_string(nv) + ".csv");
                    write_scan_csv(os, scan, Mode::NonHermitian, samples);
                }
            }
            if (points.size() >= 3) {
                const PcritScalingFit fit = fit_pcrit_scaling(points);
                std::cout << "k=" << fit.k << " max_rel_residual=" << fit.max_abs_residual << "\n";
            }
        } else if (c_rmt->parsed()) {
            EnsembleClass cls;
            if (class_str == "GOE") cls = EnsembleClass::GOE;
            else if (class_str == "GUE") cls = EnsembleClass::GUE;
            else if (class_str == "GSE") cls = EnsembleClass::GSE;
            else if (class_str == "Poisson") cls = EnsembleClass::Poisson;
            else throw InvalidArgument("unknown ensemble class: " + class_str);
            const auto [mean, err] = reference_mean_r(cls, dim, samples, seed, trim);
            std::cout << class_str << " dim=" << dim << " samples=" << samples
                      << " mean_r=" << mean << " +- " << err
                      << " (reference " << reference_r(cls) << ")\n";
            if (!out.empty()) {
                const SpacingHistogram h = reference_spacing_curve(cls, dim, samples, seed);
                auto os = open_out(out);
                std::ostringstream meta;
                meta << "class=" << class_str << " dim=" << dim << " samples=" << samples;
                write_histogram_csv(os, h, meta.str());
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
