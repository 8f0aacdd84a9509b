// Copyright 2026 The nhsyk Authors
// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <nhsyk/form_factor.hpp>

using namespace nhsyk;

namespace {

std::vector<double> random_spectrum(int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(n);
    for (double& v : s) v = u(rng);
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

TEST_CASE("time grids validate their arguments") {
    REQUIRE_THROWS_AS(TimeGrid::logspace(0.0, 1.0, 10), InvalidArgument);
    REQUIRE_THROWS_AS(TimeGrid::logspace(1.0, 0.5, 10), InvalidArgument);
    REQUIRE_THROWS_AS(TimeGrid::linspace(0.0, 1.0, 1), InvalidArgument);
    const TimeGrid g = TimeGrid::logspace(1e-2, 1e2, 100);
    REQUIRE(g.size() == 100);
    for (int i = 1; i < g.size(); ++i) REQUIRE(g.points[i] > g.points[i - 1]);
}

TEST_CASE("single one-level spectrum gives a flat unit curve") {
    const TimeGrid g = TimeGrid::logspace(1e-2, 1e4, 60);
    const FormFactorCurve c = sigma_ff(std::vector<std::vector<double>>{{2.5}}, g, 0.0);
    for (double v : c.values) REQUIRE(v == Catch::Approx(1.0).margin(1e-14));
}

TEST_CASE("filtered curve is normalized at early times") {
    std::vector<std::vector<double>> ens;
    for (int i = 0; i < 10; ++i) ens.push_back(random_spectrum(32, 100 + i));
    const double smax = 1.0;
    const TimeGrid g = TimeGrid::logspace(1e-4 / smax, 1e2, 80);
    for (double alpha : {0.0, 1.0, 5.0}) {
        const FormFactorCurve c = sigma_ff(ens, g, alpha);
        REQUIRE(c.values.front() >= 0.999);
    }
}

TEST_CASE("alpha = 0 matches direct summation") {
    const std::vector<double> s = random_spectrum(24, 3);
    const double dim = 24.0;
    const TimeGrid g = TimeGrid::logspace(1e-2, 1e5, 120);
    const FormFactorCurve c = sigma_ff(std::vector<std::vector<double>>{s}, g, 0.0);
    for (int i = 0; i < g.size(); ++i) {
        const double t = g.points[i];
        double re = 0.0, im = 0.0;
        for (double v : s) {
            re += std::cos(v * t);
            im -= std::sin(v * t);
        }
        const double direct = (re * re + im * im);
        REQUIRE(c.values[i] * dim * dim == Catch::Approx(direct).epsilon(1e-12).margin(1e-12));
    }
}

TEST_CASE("long-time average of the unfiltered curve is 1/L") {
    const int dim = 16;
    const std::vector<double> s = random_spectrum(dim, 8);
    // mean spacing ~ 1/16, so [1e3, 1e5] x (mean spacing)^-1 ~ [1.6e4, 1.6e6]
    const TimeGrid g = TimeGrid::linspace(1.6e4, 1.6e6, 4001);
    const FormFactorCurve c = sigma_ff(std::vector<std::vector<double>>{s}, g, 0.0);
    double avg = 0.0;
    for (double v : c.values) avg += v;
    avg /= c.values.size();
    REQUIRE(std::abs(avg - 1.0 / dim) <= 0.1 / dim);
}

TEST_CASE("unfiltered intensity is invariant under permutation and shift") {
    std::vector<double> s = random_spectrum(20, 12);
    const TimeGrid g = TimeGrid::logspace(1e-1, 1e3, 50);
    const FormFactorCurve ref = sigma_ff(std::vector<std::vector<double>>{s}, g, 0.0);

    std::mt19937_64 rng(1);
    std::shuffle(s.begin(), s.end(), rng);
    const FormFactorCurve perm = sigma_ff(std::vector<std::vector<double>>{s}, g, 0.0);
    for (int i = 0; i < g.size(); ++i)
        REQUIRE(perm.values[i] == Catch::Approx(ref.values[i]).epsilon(1e-12));

    for (double& v : s) v += 4.0;  // global phase cancels in |Z|^2
    const FormFactorCurve shifted = sigma_ff(std::vector<std::vector<double>>{s}, g, 0.0);
    for (int i = 0; i < g.size(); ++i)
        REQUIRE(shifted.values[i] == Catch::Approx(ref.values[i]).epsilon(1e-9).margin(1e-12));
}

TEST_CASE("sigma_ff rejects bad input") {
    const TimeGrid g = TimeGrid::logspace(1e-2, 1e2, 60);
    REQUIRE_THROWS_AS(sigma_ff(std::vector<std::vector<double>>{}, g, 0.0), InvalidArgument);
    REQUIRE_THROWS_AS(sigma_ff(std::vector<std::vector<double>>{{1.0}, {1.0, 2.0}}, g, 0.0),
                      InvalidArgument);
    REQUIRE_THROWS_AS(sigma_ff(std::vector<std::vector<double>>{{1.0}}, g, -1.0), InvalidArgument);
}

TEST_CASE("filter family values") {
    REQUIRE(default_filter_alpha(26) == Catch::Approx(3.27).epsilon(1e-12));
    REQUIRE(default_filter_alpha(18) == Catch::Approx(5.30).margin(0.01));
    REQUIRE(mean_square_sigma(16) == Catch::Approx(0.75 * 1820.0 / 4096.0).epsilon(1e-14));
}

TEST_CASE("ramp fit recovers a synthetic generator") {
    const TimeGrid g = TimeGrid::logspace(1e-2, 1e6, 400);
    FormFactorCurve c;
    c.grid = g;
    c.values.resize(g.size());
    const double m = 0.001;
    for (int i = 0; i < g.size(); ++i) {
        const double t = g.points[i];
        c.values[i] = std::min(std::max(m * t, 50.0 / t), 5.0);
    }
    const RampFit fit = fit_ramp(c);
    REQUIRE(fit.slope == Catch::Approx(m).epsilon(1e-9));
    REQUIRE(fit.window_lo >= fit.t_dip);
    REQUIRE(fit.window_hi <= fit.t_plateau);
    REQUIRE(fit.plateau_level == Catch::Approx(5.0).epsilon(0.05));
}

TEST_CASE("no ramp on a structureless curve") {
    const TimeGrid g = TimeGrid::logspace(1e-2, 1e6, 400);
    FormFactorCurve c;
    c.grid = g;
    c.values.assign(g.size(), 0.7);  // flat: no dip below half the plateau
    REQUIRE_THROWS_AS(fit_ramp(c), NoRamp);
}

TEST_CASE("Thouless time of a curve equal to its ramp") {
    const TimeGrid g = TimeGrid::logspace(1e-1, 1e4, 200);
    FormFactorCurve c;
    c.grid = g;
    c.values.resize(g.size());
    RampFit ramp;
    ramp.slope = 2e-3;
    for (int i = 0; i < g.size(); ++i) c.values[i] = ramp.slope * g.points[i];
    // monotone increasing: the dip is the first grid point
    REQUIRE(thouless_time(c, ramp, 0.20) == g.points.front());
}

TEST_CASE("strict threshold on a noisy curve has no Thouless time") {
    const TimeGrid g = TimeGrid::logspace(1e-1, 1e4, 200);
    FormFactorCurve c;
    c.grid = g;
    c.values.resize(g.size());
    RampFit ramp;
    ramp.slope = 2e-3;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.01, 0.05);
    for (int i = 0; i < g.size(); ++i)
        c.values[i] = ramp.slope * g.points[i] * (1.0 + u(rng));
    REQUIRE_THROWS_AS(thouless_time(c, ramp, 0.0), NoThoulessTime);
}

TEST_CASE("Thouless scaling fit recovers synthetic parameters") {
    std::vector<std::pair<double, double>> pts;
    for (double p : {1.0, 0.6, 0.35, 0.2, 0.12, 0.07, 0.04})
        pts.emplace_back(p, 2.0 / std::pow(p, 0.9));
    const ThoulessScalingFit fit = fit_thouless_scaling(pts);
    REQUIRE(fit.a == Catch::Approx(2.0).epsilon(0.01));
    REQUIRE(fit.b == Catch::Approx(0.9).epsilon(0.01));
    REQUIRE(std::abs(fit.c) <= 0.02);
}

TEST_CASE("Thouless scaling fit distinguishes a 1/p^2 law") {
    std::vector<std::pair<double, double>> pts;
    for (double p : {1.0, 0.5, 0.25, 0.12, 0.06})
        pts.emplace_back(p, 3.0 / (p * p));
    const ThoulessScalingFit fit = fit_thouless_scaling(pts);
    REQUIRE(fit.b == Catch::Approx(2.0).epsilon(0.03));
}

TEST_CASE("Thouless scaling fit requires a decade of sparsities") {
    std::vector<std::pair<double, double>> pts{{1.0, 1.0}, {0.9, 1.1}, {0.8, 1.2}, {0.7, 1.3}};
    REQUIRE_THROWS_AS(fit_thouless_scaling(pts), InsufficientData);
    pts.resize(3);
    REQUIRE_THROWS_AS(fit_thouless_scaling(pts), InsufficientData);
}
