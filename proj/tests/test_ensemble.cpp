// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <nhsyk/ensemble.hpp>
#include <nhsyk/spectrum_io.hpp>

using namespace nhsyk;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    explicit TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("nhsyk_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

RunManifest small_manifest(const fs::path& dir) {
    RunManifest m;
    m.n_values = {10};
    m.p_values = {1.0};
    m.n_realizations = 4;
    m.master_seed = 51;
    m.out_dir = dir.string();
    return m;
}

}  // namespace

TEST_CASE("spectrum records round-trip") {
    TempDir tmp("io");
    SingularSpectrum s;
    s.config = {12, 0.25, Mode::Hermitian, 9001, 17};
    s.sector = Sector::Minus;
    s.values = {0.1, 0.5, 0.5, 2.0};
    const fs::path f = tmp.path / "one.spec";
    write_spectrum(f, s);

    const record::Header h = read_spectrum_header(f);
    REQUIRE(h.n == 12);
    REQUIRE(h.p == 0.25);
    REQUIRE(h.mode == static_cast<std::uint32_t>(Mode::Hermitian));
    REQUIRE(h.sector == -1);
    REQUIRE(h.seed == 9001);
    REQUIRE(h.index == 17);
    REQUIRE(h.length == 4);

    const SingularSpectrum back = read_spectrum(f);
    REQUIRE(back.values == s.values);
    REQUIRE(back.config.mode == Mode::Hermitian);
    REQUIRE(back.sector == Sector::Minus);
}

TEST_CASE("corrupt records are detected") {
    TempDir tmp("corrupt");
    SingularSpectrum s;
    s.config = {10, 1.0, Mode::NonHermitian, 1, 0};
    s.values = {0.1, 0.2, 0.3};
    const fs::path f = tmp.path / "bad.spec";
    write_spectrum(f, s);

    // truncate the payload
    fs::resize_file(f, fs::file_size(f) - 8);
    REQUIRE_THROWS_AS(read_spectrum(f), CorruptRecord);

    // bad magic
    std::ofstream os(f, std::ios::binary | std::ios::trunc);
    os << "NOTASPEC garbage";
    os.close();
    REQUIRE_THROWS_AS(read_spectrum_header(f), CorruptRecord);

    // non-ascending payload
    s.values = {0.3, 0.2, 0.1};
    write_spectrum(f, s);
    REQUIRE_THROWS_AS(read_spectrum(f), CorruptRecord);
}

TEST_CASE("run_ensemble writes one validated record per item") {
    TempDir tmp("run1");
    RunManifest m = small_manifest(tmp.path);
    m.n_realizations = 1;
    const auto files = run_ensemble(m);
    REQUIRE(files.size() == 1);
    const record::Header h = read_spectrum_header(files[0]);
    REQUIRE(h.n == 10);
    REQUIRE(h.p == 1.0);
    REQUIRE(h.seed == 51);
    REQUIRE(h.index == 0);
    REQUIRE(h.length == 16);  // sector-projected from 32
}

TEST_CASE("resume regenerates only missing records, byte-identical") {
    TempDir tmp("resume");
    const RunManifest m = small_manifest(tmp.path);
    const auto files = run_ensemble(m);
    const std::uint64_t original = content_hash(files);

    fs::remove(files[1]);
    fs::remove(files[3]);
    const auto again = run_ensemble(m);
    REQUIRE(again == files);
    REQUIRE(content_hash(again) == original);

    // resume off + existing output is an error
    REQUIRE_THROWS_AS(run_ensemble(m, false), IoError);
}

TEST_CASE("resume rejects records that do not match the manifest") {
    TempDir tmp("mismatch");
    const RunManifest m = small_manifest(tmp.path);
    const auto files = run_ensemble(m);

    // tamper with one header field (p) in place
    SingularSpectrum s = read_spectrum(files[0]);
    s.config.p = 0.5;
    write_spectrum(files[0], s);
    REQUIRE_THROWS_AS(run_ensemble(m), CorruptRecord);
}

TEST_CASE("output is identical across worker counts") {
    TempDir a("w1"), b("w3");
    RunManifest m1 = small_manifest(a.path);
    m1.n_realizations = 6;
    RunManifest m3 = m1;
    m3.out_dir = b.path.string();
    m3.threads = 3;
    const std::uint64_t h1 = content_hash(run_ensemble(m1));
    const std::uint64_t h3 = content_hash(run_ensemble(m3));
    REQUIRE(h1 == h3);
}

TEST_CASE("manifest validation") {
    RunManifest m;
    REQUIRE_THROWS_AS(m.validate(), InvalidArgument);
    m.n_values = {9};
    m.p_values = {0.5};
    m.n_realizations = 1;
    REQUIRE_THROWS_AS(m.validate(), InvalidArgument);
    m.n_values = {10};
    m.p_values = {1.5};
    REQUIRE_THROWS_AS(m.validate(), InvalidArgument);
}

TEST_CASE("p_crit interpolation contract") {
    // threshold 0.99 r_dense sits midway between two grid values
    const std::vector<double> p{1.0, 0.5, 0.25};
    const double rd = 0.6;
    const std::vector<double> r{rd, rd, rd * 0.98};
    REQUIRE(p_crit_from_curve(p, r, rd) == Catch::Approx(0.375).epsilon(1e-12));

    const std::vector<double> flat{rd, rd, rd};
    REQUIRE_THROWS_AS(p_crit_from_curve(p, flat, rd), ScanRangeError);
}

TEST_CASE("default p grid shape") {
    const std::vector<double> g = default_p_grid(16);
    REQUIRE(g.front() == 1.0);
    for (std::size_t i = 1; i < g.size(); ++i) REQUIRE(g[i] < g[i - 1]);
    REQUIRE(g.back() == Catch::Approx(0.41 * 1.68 * 16 / 1820.0).epsilon(1e-12));
}

TEST_CASE("k-scaling fit recovers an exact generator") {
    std::vector<std::pair<int, double>> pts;
    for (int n : {14, 16, 18, 20})
        pts.emplace_back(n, 1.68 * n / static_cast<double>(n_choose_4(n)));
    const PcritScalingFit fit = fit_pcrit_scaling(pts);
    REQUIRE(fit.k == Catch::Approx(1.68).epsilon(1e-12));
    REQUIRE(fit.max_abs_residual <= 1e-12);

    pts.resize(2);
    REQUIRE_THROWS_AS(fit_pcrit_scaling(pts), InsufficientData);
}

TEST_CASE("k-scaling fit flags a wrong power law") {
    std::vector<std::pair<int, double>> wrong;
    for (int n : {14, 16, 18, 20})
        wrong.emplace_back(n, 10.0 / static_cast<double>(n * n));  // 1/N^2 instead of ~1/N^3
    const double bad = fit_pcrit_scaling(wrong).max_abs_residual;

    std::vector<std::pair<int, double>> right;
    for (int n : {14, 16, 18, 20})
        right.emplace_back(n, 1.68 * n / static_cast<double>(n_choose_4(n)));
    const double good = fit_pcrit_scaling(right).max_abs_residual;
    REQUIRE(bad > 10.0 * std::max(good, 1e-15));
}

TEST_CASE("scan dense column equals the standalone computation") {
    const int n = 10, reals = 12;
    const SparsityScanResult scan = scan_sparsity(n, {1.0, 0.5}, reals, 4242);

    const MajoranaSet ms(n);
    const ParityOperator parity = parity_operator(ms);
    SpacingRatioOptions opt;
    opt.collapse_degenerate = true;
    std::vector<SpacingStats> stats;
    for (int i = 0; i < reals; ++i) {
        const SingularSpectrum s = compute_realization(
            {n, 1.0, Mode::NonHermitian, 4242, static_cast<std::uint64_t>(i)}, Sector::Plus, ms,
            parity);
        stats.push_back(spacing_ratios(s.values, opt));
    }
    const auto [mean, err] = ensemble_mean_r(stats);
    REQUIRE(scan.r_dense == mean);
    REQUIRE(scan.std_error[0] == err);
}

TEST_CASE("scan cache resumes and survives damaged entries") {
    TempDir tmp("scancache");
    // p_crit(10) ~ 0.08; the last point sits at half of it, where the drop is
    // far larger than the 6-realization noise, so the 0.99 crossing exists.
    const std::vector<double> grid{1.0, 0.2, 0.04};
    const SparsityScanResult cold = scan_sparsity(10, grid, 6, 77, Mode::NonHermitian,
                                                  Sector::Plus, 0.10, 1, tmp.path);
    std::vector<fs::path> records;
    for (const auto& e : fs::directory_iterator(tmp.path)) records.push_back(e.path());
    REQUIRE(records.size() == 18);

    // warm rerun from the cache gives the identical curve
    const SparsityScanResult warm = scan_sparsity(10, grid, 6, 77, Mode::NonHermitian,
                                                  Sector::Plus, 0.10, 1, tmp.path);
    REQUIRE(warm.mean_r == cold.mean_r);
    REQUIRE(warm.p_crit == cold.p_crit);

    // a truncated record is silently regenerated, not fatal
    std::sort(records.begin(), records.end());
    fs::resize_file(records[0], fs::file_size(records[0]) - 8);
    const SparsityScanResult healed = scan_sparsity(10, grid, 6, 77, Mode::NonHermitian,
                                                    Sector::Plus, 0.10, 1, tmp.path);
    REQUIRE(healed.mean_r == cold.mean_r);
    REQUIRE(fs::file_size(records[0]) > 0);
}

TEST_CASE("scan grid validation") {
    REQUIRE_THROWS_AS(scan_sparsity(10, {0.5, 0.25}, 4, 1), InvalidArgument);
    REQUIRE_THROWS_AS(scan_sparsity(10, {1.0, 1.0}, 4, 1), InvalidArgument);
}
