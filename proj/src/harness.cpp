#include "colorcode/harness.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

#include "colorcode/deflag.hpp"
#include "colorcode/sim.hpp"

namespace colorcode {

WilsonInterval wilson_interval(std::uint64_t failures, std::uint64_t shots, double z) {
    if (shots == 0) throw std::invalid_argument("interval needs at least one shot");
    const double n = static_cast<double>(shots);
    const double phat = static_cast<double>(failures) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = phat + z2 / (2.0 * n);
    const double spread = z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    WilsonInterval w;
    w.rate = phat;
    w.lo = (center - spread) / denom;
    w.hi = (center + spread) / denom;
    return w;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const ColorCode code = build_color_code(config.family, config.distance);
    const Circuit circuit = build_memory_experiment(code, config.method, config.decode_basis);
    const ReferenceRun ref = reference_run(circuit);
    const NoiseModel noise{config.noise_p};
    DeflagPlan plan;
    if (config.deflag) plan = build_deflag_plan(circuit, code);
    if (config.scheme != WeightScheme::uniform && config.table == nullptr)
        throw std::invalid_argument("non-uniform weight schemes need a probability table");

    std::uint64_t failures = 0;
    std::uint64_t budget_exceeded = 0;
    std::uint64_t infeasible = 0;
    const long long total = static_cast<long long>(config.shots);
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : failures, budget_exceeded, infeasible)
    for (long long i = 0; i < total; ++i) {
        ShotRecord shot =
            sample_shot(circuit, ref, noise, config.seed, static_cast<std::uint64_t>(i));
        if (config.deflag) shot = apply_deflagging(shot, plan);
        const WeightAssignment weights = build_weights(config.table, config.scheme, circuit,
                                                       shot, code, config.decode_basis);
        const DecodingInstance inst =
            build_instance(circuit, shot, code, weights, config.decode_basis);
        const DecodingSolution sol = decode(inst, config.node_budget);
        if (sol.status == SolveStatus::infeasible) {
            ++infeasible;
            ++failures;
            continue;
        }
        if (sol.status == SolveStatus::budget_exceeded) ++budget_exceeded;
        failures += static_cast<std::uint64_t>(
            judge_logical_error(sol, circuit, shot, code, config.decode_basis));
    }

    ExperimentResult result;
    result.shots = config.shots;
    result.failures = failures;
    result.budget_exceeded = budget_exceeded;
    result.infeasible = infeasible;
    result.ci = wilson_interval(failures, config.shots);
    return result;
}

FitResult fit_threshold(const std::vector<FitPoint>& points) {
    FitResult fit;
    std::vector<FitPoint> usable;
    for (const auto& pt : points) {
        if (pt.rate > 0.0 && pt.noise_p > 0.0)
            usable.push_back(pt);
        else
            ++fit.points_dropped;
    }
    fit.points_used = static_cast<int>(usable.size());
    if (usable.size() < 3)
        throw std::invalid_argument("fit needs at least three nonzero-rate points");

    std::set<double> distinct_p;
    std::set<int> distinct_d;
    for (const auto& pt : usable) {
        distinct_p.insert(pt.noise_p);
        distinct_d.insert(pt.distance);
    }
    if (distinct_p.size() < 2) {
        // Single noise rate: the exponent drops out of the design entirely.
        double log_sum = 0.0;
        for (const auto& pt : usable) log_sum += std::log(pt.rate);
        fit.alpha_identifiable = false;
        fit.alpha = 0.0;
        fit.c = std::exp(log_sum / static_cast<double>(usable.size()));
        fit.p_th = *distinct_p.begin();
        return fit;
    }
    if (distinct_d.size() < 2)
        throw std::invalid_argument("fit needs at least two distinct distances");

    // log rate = a + b * k * log p + g * k with k = (d+1)/2,
    // a = log c, b = alpha, g = -alpha * log p_th.
    const int N = static_cast<int>(usable.size());
    Eigen::MatrixXd X(N, 3);
    Eigen::VectorXd y(N);
    for (int i = 0; i < N; ++i) {
        const double k = (usable[static_cast<std::size_t>(i)].distance + 1) / 2.0;
        const double x = std::log(usable[static_cast<std::size_t>(i)].noise_p);
        X(i, 0) = 1.0;
        X(i, 1) = k * x;
        X(i, 2) = k;
        y(i) = std::log(usable[static_cast<std::size_t>(i)].rate);
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < 3) throw std::invalid_argument("degenerate fit design");
    const Eigen::Vector3d beta = qr.solve(y);
    const double a = beta(0);
    const double b = beta(1);
    const double g = beta(2);
    if (b == 0.0) throw std::invalid_argument("fit produced a zero exponent");
    fit.c = std::exp(a);
    fit.alpha = b;
    const double m = -g / b;  // log p_th
    fit.p_th = std::exp(m);

    const Eigen::VectorXd resid = y - X * beta;
    fit.rms_log_residual = std::sqrt(resid.squaredNorm() / N);
    if (N > 3) {
        const double sigma2 = resid.squaredNorm() / (N - 3);
        const Eigen::Matrix3d cov = sigma2 * (X.transpose() * X).inverse();
        fit.c_se = fit.c * std::sqrt(cov(0, 0));
        fit.alpha_se = std::sqrt(cov(1, 1));
        // m = -g / b, so grad_m = (g / b^2, -1 / b) over (b, g).
        const double db = g / (b * b);
        const double dg = -1.0 / b;
        const double var_m =
            db * db * cov(1, 1) + dg * dg * cov(2, 2) + 2.0 * db * dg * cov(1, 2);
        fit.p_th_se = fit.p_th * std::sqrt(std::max(0.0, var_m));
    }
    return fit;
}

const char* method_name(ExtractionMethod method) {
    return method == ExtractionMethod::single_ancilla ? "single_ancilla" : "flagged";
}

const char* scheme_name(WeightScheme scheme) {
    switch (scheme) {
        case WeightScheme::uniform: return "uniform";
        case WeightScheme::conventional: return "conventional";
        case WeightScheme::flagged: return "flagged";
    }
    return "unknown";
}

const char* basis_name(PauliType basis) { return basis == PauliType::x ? "x" : "z"; }

std::string result_csv_header() {
    return "family,distance,p,method,scheme,deflag,basis,shots,failures,"
           "budget_exceeded,infeasible,rate,ci_lo,ci_hi,seed,schedule\n";
}

std::string result_csv_row(const ExperimentConfig& config, const ExperimentResult& result) {
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "%s,%d,%.9g,%s,%s,%d,%s,%llu,%llu,%llu,%llu,%.9g,%.9g,%.9g,%llu,%s\n",
                  family_name(config.family), config.distance, config.noise_p,
                  method_name(config.method), scheme_name(config.scheme),
                  config.deflag ? 1 : 0, basis_name(config.decode_basis),
                  static_cast<unsigned long long>(result.shots),
                  static_cast<unsigned long long>(result.failures),
                  static_cast<unsigned long long>(result.budget_exceeded),
                  static_cast<unsigned long long>(result.infeasible), result.ci.rate,
                  result.ci.lo, result.ci.hi, static_cast<unsigned long long>(config.seed),
                  kScheduleVersion);
    return std::string(buf);
}

}  // namespace colorcode
