#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "colorcode/harness.hpp"
#include "colorcode/rng.hpp"

using namespace colorcode;

TEST_CASE("wilson interval reference values") {
    const WilsonInterval w = wilson_interval(5, 100);
    CHECK(w.rate == doctest::Approx(0.05));
    CHECK(w.lo == doctest::Approx(0.021543361456).epsilon(1e-9));
    CHECK(w.hi == doctest::Approx(0.111751965272).epsilon(1e-9));

    const WilsonInterval zero = wilson_interval(0, 1000);
    CHECK(zero.lo == doctest::Approx(0.0));
    CHECK(zero.hi == doctest::Approx(0.003826898586).epsilon(1e-9));

    const WilsonInterval full = wilson_interval(1000, 1000);
    CHECK(full.lo == doctest::Approx(0.996173101414).epsilon(1e-9));
    CHECK(full.hi == doctest::Approx(1.0));

    CHECK_THROWS_AS(wilson_interval(0, 0), std::invalid_argument);
}

TEST_CASE("threshold fit recovers exact model points") {
    const double c = 0.11, p_th = 0.00268, alpha = 0.679;
    std::vector<FitPoint> points;
    for (int d : {3, 5, 7})
        for (double p : {0.0008, 0.0012, 0.0018, 0.0027}) {
            const double rate = c * std::pow(p / p_th, alpha * (d + 1) / 2.0);
            points.push_back({p, d, rate});
        }
    const FitResult fit = fit_threshold(points);
    CHECK(fit.alpha_identifiable);
    CHECK(fit.points_used == 12);
    CHECK(fit.c == doctest::Approx(c).epsilon(1e-9));
    CHECK(fit.p_th == doctest::Approx(p_th).epsilon(1e-9));
    CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-9));
    CHECK(fit.rms_log_residual < 1e-10);
}

TEST_CASE("fit survives multiplicative rate noise") {
    const double c = 0.11, p_th = 0.00268, alpha = 0.679;
    ShotRng rng(21, 0);
    std::vector<FitPoint> points;
    for (int d : {3, 5, 7})
        for (double p : {0.0008, 0.0012, 0.0018, 0.0027}) {
            const double wiggle = 1.0 + 0.01 * (2.0 * rng.uniform() - 1.0);
            points.push_back({p, d, wiggle * c * std::pow(p / p_th, alpha * (d + 1) / 2.0)});
        }
    const FitResult fit = fit_threshold(points);
    CHECK(std::abs(fit.p_th - p_th) / p_th < 0.05);
    CHECK(std::abs(fit.alpha - alpha) / alpha < 0.05);
    CHECK(fit.p_th_se > 0.0);
    CHECK(fit.alpha_se > 0.0);
}

TEST_CASE("zero-rate points are dropped, degenerate designs rejected") {
    std::vector<FitPoint> points = {
        {0.001, 3, 0.02}, {0.001, 5, 0.01}, {0.002, 3, 0.06},
        {0.002, 5, 0.05}, {0.002, 7, 0.0},
    };
    const FitResult fit = fit_threshold(points);
    CHECK(fit.points_used == 4);
    CHECK(fit.points_dropped == 1);

    // All points at one noise rate: alpha drops out.
    std::vector<FitPoint> flat = {{0.001, 3, 0.02}, {0.001, 5, 0.01}, {0.001, 7, 0.005}};
    const FitResult deg = fit_threshold(flat);
    CHECK_FALSE(deg.alpha_identifiable);
    CHECK(deg.alpha == 0.0);
    CHECK(deg.p_th == doctest::Approx(0.001));
    CHECK(deg.c == doctest::Approx(std::cbrt(0.02 * 0.01 * 0.005)));

    // Single distance cannot separate c from p_th.
    std::vector<FitPoint> one_d = {{0.001, 3, 0.02}, {0.002, 3, 0.05}, {0.003, 3, 0.09}};
    CHECK_THROWS_AS(fit_threshold(one_d), std::invalid_argument);

    CHECK_THROWS_AS(fit_threshold({{0.001, 3, 0.02}}), std::invalid_argument);
}

TEST_CASE("experiments are deterministic and clean at zero noise") {
    ExperimentConfig config;
    config.family = CodeFamily::c488;
    config.distance = 3;
    config.method = ExtractionMethod::flagged;
    config.decode_basis = PauliType::z;
    config.scheme = WeightScheme::uniform;
    config.deflag = true;
    config.noise_p = 0.0;
    config.shots = 500;
    config.seed = 77;
    const ExperimentResult clean = run_experiment(config);
    CHECK(clean.shots == 500);
    CHECK(clean.failures == 0);
    CHECK(clean.budget_exceeded == 0);
    CHECK(clean.infeasible == 0);

    config.noise_p = 0.003;
    config.shots = 2000;
    const ExperimentResult a = run_experiment(config);
    const ExperimentResult b = run_experiment(config);
    CHECK(a.failures == b.failures);
    CHECK(a.infeasible == 0);
    CHECK(a.ci.lo <= a.ci.rate);
    CHECK(a.ci.rate <= a.ci.hi);
}

TEST_CASE("missing table for a weighted scheme is rejected") {
    ExperimentConfig config;
    config.scheme = WeightScheme::flagged;
    config.table = nullptr;
    config.shots = 1;
    CHECK_THROWS_AS(run_experiment(config), std::invalid_argument);
}

TEST_CASE("csv rows are byte-stable") {
    ExperimentConfig config;
    config.family = CodeFamily::c666;
    config.distance = 5;
    config.method = ExtractionMethod::single_ancilla;
    config.decode_basis = PauliType::x;
    config.scheme = WeightScheme::uniform;
    config.deflag = false;
    config.noise_p = 0.0015;
    config.shots = 1000;
    config.seed = 9;
    ExperimentResult result;
    result.shots = 1000;
    result.failures = 25;
    result.budget_exceeded = 0;
    result.infeasible = 0;
    result.ci = wilson_interval(25, 1000);
    const std::string row = result_csv_row(config, result);
    CHECK(row == result_csv_row(config, result));
    CHECK(row.find("c666,5,0.0015,single_ancilla,uniform,0,x,1000,25,0,0,") == 0);
    CHECK(result_csv_header().find("family,distance,p,") == 0);
}
