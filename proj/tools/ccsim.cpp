#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "colorcode/circuit.hpp"
#include "colorcode/deflag.hpp"
#include "colorcode/geometry.hpp"
#include "colorcode/harness.hpp"
#include "colorcode/sim.hpp"
#include "colorcode/weights.hpp"

namespace {

using namespace colorcode;

CodeFamily parse_family(const std::string& name) {
    if (name == "c488") return CodeFamily::c488;
    if (name == "c666") return CodeFamily::c666;
    throw CLI::ValidationError("--family", "expected c488 or c666");
}

PauliType parse_basis(const std::string& name) {
    if (name == "x") return PauliType::x;
    if (name == "z") return PauliType::z;
    throw CLI::ValidationError("--basis", "expected x or z");
}

ExtractionMethod parse_method(const std::string& name) {
    if (name == "single") return ExtractionMethod::single_ancilla;
    if (name == "flagged") return ExtractionMethod::flagged;
    throw CLI::ValidationError("--method", "expected single or flagged");
}

WeightScheme parse_scheme(const std::string& name) {
    if (name == "uniform") return WeightScheme::uniform;
    if (name == "conventional") return WeightScheme::conventional;
    if (name == "flagged") return WeightScheme::flagged;
    throw CLI::ValidationError("--scheme", "expected uniform, conventional, or flagged");
}

int cmd_validate(const std::string& family, int distance, bool as_json) {
    const ColorCode code = build_color_code(parse_family(family), distance);
    const ValidationReport report = validate_code(code);
    if (!report.ok()) {
        for (const auto& msg : report.violations) std::cerr << "violation: " << msg << "\n";
        return 1;
    }
    if (as_json) {
        std::cout << code_to_json(code) << "\n";
        return 0;
    }
    std::cout << "family " << family_name(code.family) << " distance " << code.distance
              << ": " << code.num_qubits() << " data qubits, " << code.num_faces()
              << " faces per basis\n";
    for (auto method : {ExtractionMethod::single_ancilla, ExtractionMethod::flagged}) {
        const Circuit c = build_memory_experiment(code, method, PauliType::z);
        std::cout << "  " << method_name(method) << ": " << c.num_qubits << " qubits, "
                  << c.num_layers() << " layers, " << c.num_measurements()
                  << " measurements, hash " << std::hex << circuit_hash(c) << std::dec << "\n";
    }
    return 0;
}

int cmd_estimate(const std::string& family, int distance, const std::string& side_name,
                 double p, std::uint64_t samples, std::uint64_t seed, bool deflag,
                 const std::string& out_path) {
    const ColorCode code = build_color_code(parse_family(family), distance);
    const EstimationSide side =
        side_name == "cx" ? EstimationSide::cx : EstimationSide::cz;
    if (side_name != "cx" && side_name != "cz")
        throw CLI::ValidationError("--side", "expected cx or cz");
    const ConditionalProbTable table =
        estimate_conditional_probs(code, side, NoiseModel{p}, samples, seed, deflag);
    save_table_json(table, out_path);
    std::cout << "wrote " << out_path << " (" << samples << " samples at p=" << p << ")\n";
    return 0;
}

int cmd_run(const ExperimentConfig& config, const std::string& table_path,
            const std::string& csv_path) {
    ConditionalProbTable table;
    ExperimentConfig cfg = config;
    if (cfg.scheme != WeightScheme::uniform) {
        if (table_path.empty()) {
            std::cerr << "--scheme " << scheme_name(cfg.scheme) << " needs --table\n";
            return 1;
        }
        table = load_table_json(table_path);
        cfg.table = &table;
    }
    const ExperimentResult result = run_experiment(cfg);
    const std::string row = result_csv_row(cfg, result);
    std::cout << result_csv_header() << row;
    if (!csv_path.empty()) {
        std::ofstream out(csv_path, std::ios::app);
        out << row;
    }
    return 0;
}

int cmd_fit(const std::string& points_path) {
    std::ifstream in(points_path);
    if (!in) {
        std::cerr << "cannot open " << points_path << "\n";
        return 1;
    }
    std::vector<FitPoint> points;
    double p, rate;
    int d;
    while (in >> p >> d >> rate) points.push_back({p, d, rate});
    const FitResult fit = fit_threshold(points);
    std::printf("c      = %.6g (se %.2g)\n", fit.c, fit.c_se);
    std::printf("p_th   = %.6g (se %.2g)\n", fit.p_th, fit.p_th_se);
    std::printf("alpha  = %.6g (se %.2g)%s\n", fit.alpha, fit.alpha_se,
                fit.alpha_identifiable ? "" : "  [not identifiable]");
    std::printf("points = %d used, %d dropped, rms log residual %.3g\n", fit.points_used,
                fit.points_dropped, fit.rms_log_residual);
    return 0;
}

int cmd_rules(const std::string& family, int distance, const std::string& basis,
              bool show_circuit) {
    const ColorCode code = build_color_code(parse_family(family), distance);
    const Circuit circuit =
        build_memory_experiment(code, ExtractionMethod::flagged, parse_basis(basis));
    if (show_circuit) std::cout << circuit_to_text(circuit);
    const DeflagPlan plan = build_deflag_plan(circuit, code);
    std::cout << deflag_rules_table(circuit, code, plan);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"color-code memory simulator"};
    app.require_subcommand(1);

    std::string family = "c488";
    int distance = 3;
    std::string basis = "z";
    std::string method = "flagged";
    std::string scheme = "flagged";
    std::string side = "cz";
    double p = 1e-3;
    std::uint64_t shots = 10000;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    std::uint64_t budget = colorcode::kDefaultNodeBudget;
    bool deflag = true;
    bool as_json = false;
    bool show_circuit = false;
    std::string table_path;
    std::string csv_path;
    std::string out_path = "table.json";
    std::string points_path;

    auto* validate = app.add_subcommand("validate", "check a code patch and print its shape");
    validate->add_option("--family", family, "c488 or c666");
    validate->add_option("--distance", distance, "odd distance >= 3");
    validate->add_flag("--json", as_json, "dump the patch as JSON");

    auto* estimate = app.add_subcommand("estimate", "sample a conditional probability table");
    estimate->add_option("--family", family, "c488 or c666");
    estimate->add_option("--distance", distance, "odd distance >= 3");
    estimate->add_option("--side", side, "cx or cz");
    estimate->add_option("--p", p, "depolarizing rate");
    estimate->add_option("--samples", samples, "sample count");
    estimate->add_option("--seed", seed, "master seed");
    estimate->add_flag("--deflag,!--no-deflag", deflag, "apply deflagging before counting");
    estimate->add_option("--out", out_path, "output JSON path");

    auto* run = app.add_subcommand("run", "run a memory experiment");
    run->add_option("--family", family, "c488 or c666");
    run->add_option("--distance", distance, "odd distance >= 3");
    run->add_option("--method", method, "single or flagged");
    run->add_option("--basis", basis, "decoded error type, x or z");
    run->add_option("--scheme", scheme, "uniform, conventional, or flagged");
    run->add_option("--p", p, "depolarizing rate");
    run->add_option("--shots", shots, "shot count");
    run->add_option("--seed", seed, "master seed");
    run->add_option("--budget", budget, "decoder node budget");
    run->add_flag("--deflag,!--no-deflag", deflag, "apply deflagging");
    run->add_option("--table", table_path, "probability table JSON");
    run->add_option("--csv", csv_path, "append the result row to this file");

    auto* fit = app.add_subcommand("fit", "fit rate = c (p/p_th)^(alpha (d+1)/2)");
    fit->add_option("points", points_path, "file of `p distance rate` triples")->required();

    auto* rules = app.add_subcommand("rules", "print the deflagging rule table");
    rules->add_option("--family", family, "c488 or c666");
    rules->add_option("--distance", distance, "odd distance >= 3");
    rules->add_option("--basis", basis, "decoded error type, x or z");
    rules->add_flag("--circuit", show_circuit, "also print the full circuit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(family, distance, as_json);
        if (estimate->parsed())
            return cmd_estimate(family, distance, side, p, samples, seed, deflag, out_path);
        if (run->parsed()) {
            colorcode::ExperimentConfig cfg;
            cfg.family = parse_family(family);
            cfg.distance = distance;
            cfg.method = parse_method(method);
            cfg.decode_basis = parse_basis(basis);
            cfg.scheme = parse_scheme(scheme);
            cfg.deflag = deflag;
            cfg.noise_p = p;
            cfg.shots = shots;
            cfg.seed = seed;
            cfg.node_budget = budget;
            return cmd_run(cfg, table_path, csv_path);
        }
        if (fit->parsed()) return cmd_fit(points_path);
        if (rules->parsed()) return cmd_rules(family, distance, basis, show_circuit);
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return 0;
}
