#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colorcode/circuit.hpp"
#include "colorcode/decoder.hpp"
#include "colorcode/geometry.hpp"
#include "colorcode/weights.hpp"

namespace colorcode {

struct WilsonInterval {
    double rate = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial rate; z defaults to the 95% quantile.
WilsonInterval wilson_interval(std::uint64_t failures, std::uint64_t shots, double z = 1.96);

struct ExperimentConfig {
    CodeFamily family = CodeFamily::c488;
    int distance = 3;
    ExtractionMethod method = ExtractionMethod::flagged;
    PauliType decode_basis = PauliType::z;
    WeightScheme scheme = WeightScheme::flagged;
    bool deflag = true;
    double noise_p = 1e-3;
    std::uint64_t shots = 1000;
    std::uint64_t seed = 1;
    std::uint64_t node_budget = kDefaultNodeBudget;
    // Required for the conventional and flagged schemes; ignored for uniform.
    const ConditionalProbTable* table = nullptr;
};

struct ExperimentResult {
    std::uint64_t shots = 0;
    std::uint64_t failures = 0;
    std::uint64_t budget_exceeded = 0;
    std::uint64_t infeasible = 0;
    WilsonInterval ci;
};

// Runs a memory experiment end to end: sample, optionally deflag, weight,
// decode, judge. Shot outcomes are independent of thread count.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct FitPoint {
    double noise_p = 0.0;
    int distance = 0;
    double rate = 0.0;
};

struct FitResult {
    double c = 0.0;
    double p_th = 0.0;
    double alpha = 0.0;
    double c_se = 0.0;
    double p_th_se = 0.0;
    double alpha_se = 0.0;
    bool alpha_identifiable = true;
    int points_used = 0;
    int points_dropped = 0;
    double rms_log_residual = 0.0;
};

// Fits rate = c * (p / p_th)^(alpha * (d+1)/2) by least squares on
// log rate, which is linear in (log c, alpha, alpha * log p_th).
// Zero-rate points are dropped. A design with a single noise rate
// cannot identify alpha and falls back to c = geometric mean of the
// rates, p_th = the common rate, alpha = 0, alpha_identifiable = false;
// any other rank-deficient design throws std::invalid_argument.
FitResult fit_threshold(const std::vector<FitPoint>& points);

const char* method_name(ExtractionMethod method);
const char* scheme_name(WeightScheme scheme);
const char* basis_name(PauliType basis);

std::string result_csv_header();
std::string result_csv_row(const ExperimentConfig& config, const ExperimentResult& result);

}  // namespace colorcode
