#include "colorcode/weights.hpp"

#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "colorcode/deflag.hpp"

namespace colorcode {

double logit_weight(double q) {
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("logit_weight requires q in (0, 1)");
    return -std::log(q / (1.0 - q));
}

double smoothed_probability(const LocationTable& loc, std::uint32_t pattern) {
    const auto& s = loc.stats[pattern];
    if (s.count >= kMinPatternCount)
        return static_cast<double>(s.errors + 1) / static_cast<double>(s.count + 2);
    return smoothed_marginal(loc);
}

double smoothed_marginal(const LocationTable& loc) {
    return static_cast<double>(loc.total_errors + 1) / static_cast<double>(loc.total_count + 2);
}

namespace {

std::vector<std::vector<FlagSource>> vertex_source_lists(const ColorCode& code,
                                                         const Circuit& circuit) {
    std::vector<std::vector<FlagSource>> out(static_cast<std::size_t>(code.num_qubits()));
    for (int v = 0; v < code.num_qubits(); ++v)
        for (int f : code.faces_of_vertex[v]) {
            const auto& g = circuit.gadgets[static_cast<std::size_t>(f)];
            for (int slot = 0; slot < static_cast<int>(g.flag_qubits.size()); ++slot)
                out[static_cast<std::size_t>(v)].push_back({f, slot});
        }
    return out;
}

std::vector<std::vector<FlagSource>> face_source_lists(const ColorCode& code,
                                                       const Circuit& circuit) {
    std::vector<std::vector<FlagSource>> out(static_cast<std::size_t>(code.num_faces()));
    for (int f = 0; f < code.num_faces(); ++f) {
        const auto& g = circuit.gadgets[static_cast<std::size_t>(f)];
        for (int slot = 0; slot < static_cast<int>(g.flag_qubits.size()); ++slot)
            out[static_cast<std::size_t>(f)].push_back({f, slot});
    }
    return out;
}

std::uint32_t read_pattern(const ShotRecord& shot, const Circuit& circuit,
                           const std::vector<FlagSource>& sources, StabBasis basis, int cycle) {
    std::uint32_t pattern = 0;
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const int m = circuit.flags_at(basis, cycle, sources[k].face)[static_cast<std::size_t>(
            sources[k].slot)];
        if (shot.outcomes[static_cast<std::size_t>(m)]) pattern |= 1u << k;
    }
    return pattern;
}

void tally(LocationTable& loc, std::uint32_t pattern, bool error) {
    auto& s = loc.stats[pattern];
    ++s.count;
    ++loc.total_count;
    if (error) {
        ++s.errors;
        ++loc.total_errors;
    }
}

void merge(LocationTable& into, const LocationTable& from) {
    for (std::size_t k = 0; k < into.stats.size(); ++k) {
        into.stats[k].count += from.stats[k].count;
        into.stats[k].errors += from.stats[k].errors;
    }
    into.total_count += from.total_count;
    into.total_errors += from.total_errors;
}

const char* side_name(EstimationSide side) { return side == EstimationSide::cx ? "cx" : "cz"; }

}  // namespace

ConditionalProbTable estimate_conditional_probs(const ColorCode& code, EstimationSide side,
                                                const NoiseModel& noise,
                                                std::uint64_t num_samples, std::uint64_t seed,
                                                bool deflag) {
    const Circuit circuit = build_estimation_circuit(code, side);
    const ReferenceRun ref = reference_run(circuit);
    const DeflagPlan plan = deflag ? build_deflag_plan(circuit, code) : DeflagPlan{};

    ConditionalProbTable table;
    table.family = code.family;
    table.distance = code.distance;
    table.noise_p = noise.p;
    table.samples = num_samples;
    table.deflagged = deflag;
    table.side = side;
    table.seed = seed;
    table.schedule_version = circuit.schedule_version;
    table.vertex_sources = vertex_source_lists(code, circuit);
    table.face_sources = face_source_lists(code, circuit);
    auto sized = [](const std::vector<std::vector<FlagSource>>& sources) {
        std::vector<LocationTable> out(sources.size());
        for (std::size_t i = 0; i < sources.size(); ++i) {
            out[i].width = static_cast<int>(sources[i].size());
            out[i].stats.assign(std::size_t{1} << out[i].width, PatternStats{});
        }
        return out;
    };
    table.vertex = sized(table.vertex_sources);
    table.face = sized(table.face_sources);

    // In C_X the leading disarmed half carries the X gadgets whose flags
    // condition the data-error bins, and the armed Z half supplies the
    // syndrome whose mismatch against the final-data parity is the
    // face-measurement error. C_Z mirrors the roles.
    const StabBasis vertex_basis = side == EstimationSide::cx ? StabBasis::x : StabBasis::z;
    const StabBasis face_basis = side == EstimationSide::cx ? StabBasis::z : StabBasis::x;

    const int num_threads =
#ifdef _OPENMP
        omp_get_max_threads();
#else
        1;
#endif
    std::vector<ConditionalProbTable> locals(static_cast<std::size_t>(num_threads));
    for (auto& local : locals) {
        local.vertex = sized(table.vertex_sources);
        local.face = sized(table.face_sources);
    }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long s = 0; s < static_cast<long long>(num_samples); ++s) {
        const int tid =
#ifdef _OPENMP
            omp_get_thread_num();
#else
            0;
#endif
        auto& local = locals[static_cast<std::size_t>(tid)];
        ShotRecord shot =
            sample_shot(circuit, ref, noise, seed, static_cast<std::uint64_t>(s));
        if (deflag) shot = apply_deflagging(shot, plan);

        for (int v = 0; v < code.num_qubits(); ++v) {
            const std::uint32_t pattern =
                read_pattern(shot, circuit, table.vertex_sources[static_cast<std::size_t>(v)],
                             vertex_basis, 1);
            const bool err =
                shot.outcomes[static_cast<std::size_t>(circuit.final_index[static_cast<std::size_t>(v)])];
            tally(local.vertex[static_cast<std::size_t>(v)], pattern, err);
        }
        for (int f = 0; f < code.num_faces(); ++f) {
            std::uint8_t parity = 0;
            for (int v : code.faces[static_cast<std::size_t>(f)].support)
                parity ^= shot.outcomes[static_cast<std::size_t>(
                    circuit.final_index[static_cast<std::size_t>(v)])];
            const std::uint8_t synd =
                shot.outcomes[static_cast<std::size_t>(circuit.syndrome_at(face_basis, 1, f))];
            const std::uint32_t pattern = read_pattern(
                shot, circuit, table.face_sources[static_cast<std::size_t>(f)], face_basis, 1);
            tally(local.face[static_cast<std::size_t>(f)], pattern, (parity ^ synd) != 0);
        }
    }

    for (const auto& local : locals) {
        for (std::size_t v = 0; v < table.vertex.size(); ++v) merge(table.vertex[v], local.vertex[v]);
        for (std::size_t f = 0; f < table.face.size(); ++f) merge(table.face[f], local.face[f]);
    }
    return table;
}

void save_table_json(const ConditionalProbTable& table, const std::string& path) {
    nlohmann::json j;
    j["format"] = "cond-prob-table-v1";
    j["family"] = family_name(table.family);
    j["distance"] = table.distance;
    j["p"] = table.noise_p;
    j["samples"] = table.samples;
    j["deflagged"] = table.deflagged;
    j["side"] = side_name(table.side);
    j["seed"] = table.seed;
    j["schedule_version"] = table.schedule_version;
    auto dump_locations = [](const std::vector<LocationTable>& locs,
                             const std::vector<std::vector<FlagSource>>& sources) {
        nlohmann::json out = nlohmann::json::array();
        for (std::size_t i = 0; i < locs.size(); ++i) {
            nlohmann::json entry;
            entry["id"] = i;
            entry["width"] = locs[i].width;
            entry["sources"] = nlohmann::json::array();
            for (const auto& src : sources[i])
                entry["sources"].push_back({src.face, src.slot});
            entry["total"] = {locs[i].total_count, locs[i].total_errors};
            entry["patterns"] = nlohmann::json::array();
            for (std::size_t k = 0; k < locs[i].stats.size(); ++k)
                if (locs[i].stats[k].count)
                    entry["patterns"].push_back(
                        {k, locs[i].stats[k].count, locs[i].stats[k].errors});
            out.push_back(std::move(entry));
        }
        return out;
    };
    j["vertex"] = dump_locations(table.vertex, table.vertex_sources);
    j["face"] = dump_locations(table.face, table.face_sources);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << j.dump(1) << "\n";
}

ConditionalProbTable load_table_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    nlohmann::json j;
    in >> j;
    if (j.value("format", "") != "cond-prob-table-v1")
        throw std::runtime_error("unrecognized table format in " + path);
    ConditionalProbTable table;
    table.family = j.at("family").get<std::string>() == "c488" ? CodeFamily::c488 : CodeFamily::c666;
    table.distance = j.at("distance").get<int>();
    table.noise_p = j.at("p").get<double>();
    table.samples = j.at("samples").get<std::uint64_t>();
    table.deflagged = j.at("deflagged").get<bool>();
    table.side = j.at("side").get<std::string>() == "cx" ? EstimationSide::cx : EstimationSide::cz;
    table.seed = j.at("seed").get<std::uint64_t>();
    table.schedule_version = j.at("schedule_version").get<std::string>();
    auto load_locations = [](const nlohmann::json& arr, std::vector<LocationTable>& locs,
                             std::vector<std::vector<FlagSource>>& sources) {
        locs.resize(arr.size());
        sources.resize(arr.size());
        for (const auto& entry : arr) {
            const std::size_t i = entry.at("id").get<std::size_t>();
            locs[i].width = entry.at("width").get<int>();
            locs[i].stats.assign(std::size_t{1} << locs[i].width, PatternStats{});
            for (const auto& src : entry.at("sources"))
                sources[i].push_back({src[0].get<int>(), src[1].get<int>()});
            locs[i].total_count = entry.at("total")[0].get<std::uint64_t>();
            locs[i].total_errors = entry.at("total")[1].get<std::uint64_t>();
            for (const auto& pat : entry.at("patterns")) {
                const auto k = pat[0].get<std::size_t>();
                locs[i].stats[k].count = pat[1].get<std::uint64_t>();
                locs[i].stats[k].errors = pat[2].get<std::uint64_t>();
            }
        }
    };
    load_locations(j.at("vertex"), table.vertex, table.vertex_sources);
    load_locations(j.at("face"), table.face, table.face_sources);
    return table;
}

WeightAssignment build_weights(const ConditionalProbTable* table, WeightScheme scheme,
                               const Circuit& circuit, const ShotRecord& shot,
                               const ColorCode& code, PauliType decode_basis) {
    const int rounds = circuit.cycles;
    const int n = code.num_qubits();
    const int num_faces = code.num_faces();
    WeightAssignment w;
    w.vertex_weight.assign(static_cast<std::size_t>(rounds + 1),
                           std::vector<double>(static_cast<std::size_t>(n), 1.0));
    w.meas_weight.assign(static_cast<std::size_t>(rounds),
                         std::vector<double>(static_cast<std::size_t>(num_faces), 1.0));
    if (scheme == WeightScheme::uniform) return w;

    if (!table) throw std::invalid_argument("weight scheme requires a probability table");
    const EstimationSide want =
        decode_basis == PauliType::x ? EstimationSide::cx : EstimationSide::cz;
    if (table->side != want)
        throw std::invalid_argument("table side does not match the decode basis");
    if (table->family != code.family || table->distance != code.distance)
        throw std::invalid_argument("table was built for a different code");
    if (table->schedule_version != circuit.schedule_version)
        throw std::invalid_argument("table was built for a different schedule");

    if (scheme == WeightScheme::conventional) {
        for (int t = 0; t <= rounds; ++t)
            for (int v = 0; v < n; ++v)
                w.vertex_weight[t][v] =
                    logit_weight(smoothed_marginal(table->vertex[static_cast<std::size_t>(v)]));
        for (int t = 0; t < rounds; ++t)
            for (int f = 0; f < num_faces; ++f)
                w.meas_weight[t][f] =
                    logit_weight(smoothed_marginal(table->face[static_cast<std::size_t>(f)]));
        return w;
    }

    // Flagged scheme. Vertex rounds read the decode-relevant gadget flags:
    // X decoding conditions round t on cycle-t X flags; Z decoding conditions
    // round t on cycle-(t-1) Z flags. Rounds whose flag cycle does not exist
    // (the final X round, the first Z round) read as all-zero patterns: no
    // gadget acts in those boundary windows, so hook-carrying samples must
    // not inflate their error estimate the way the merged marginal would.
    const StabBasis vertex_basis = decode_basis == PauliType::x ? StabBasis::x : StabBasis::z;
    const StabBasis face_basis = decode_basis == PauliType::x ? StabBasis::z : StabBasis::x;
    for (int round = 1; round <= rounds + 1; ++round) {
        const int cycle = decode_basis == PauliType::x ? round : round - 1;
        const bool in_range = cycle >= 1 && cycle <= rounds;
        for (int v = 0; v < n; ++v) {
            const auto& loc = table->vertex[static_cast<std::size_t>(v)];
            const std::uint32_t pattern =
                in_range ? read_pattern(shot, circuit,
                                        table->vertex_sources[static_cast<std::size_t>(v)],
                                        vertex_basis, cycle)
                         : 0;
            w.vertex_weight[round - 1][v] = logit_weight(smoothed_probability(loc, pattern));
        }
    }
    for (int round = 1; round <= rounds; ++round)
        for (int f = 0; f < num_faces; ++f) {
            const std::uint32_t pattern = read_pattern(
                shot, circuit, table->face_sources[static_cast<std::size_t>(f)], face_basis,
                round);
            w.meas_weight[round - 1][f] =
                logit_weight(smoothed_probability(table->face[static_cast<std::size_t>(f)], pattern));
        }
    return w;
}

}  // namespace colorcode
