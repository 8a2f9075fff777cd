#include "colorcode/decoder.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace colorcode {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StabBasis consumed_syndrome_basis(PauliType decode_basis) {
    // X errors flip Z-stabilizer outcomes and vice versa.
    return decode_basis == PauliType::x ? StabBasis::z : StabBasis::x;
}

struct ShiftedInstance {
    std::vector<std::vector<double>> vertex_weight;
    std::vector<std::vector<double>> meas_weight;
    std::vector<std::vector<std::uint8_t>> detectors;
    std::vector<std::vector<std::uint8_t>> vertex_flipped;  // x -> 1-x' applied
    std::vector<std::vector<std::uint8_t>> meas_flipped;
    double constant = 0.0;
};

// Substitutes x -> 1-x' for every negative-weight variable, flipping the
// detectors of the constraints that contain it. All resulting weights are
// nonnegative and the optimum is preserved up to `constant`.
ShiftedInstance shift_negative_weights(const DecodingInstance& inst) {
    ShiftedInstance s;
    s.vertex_weight = inst.vertex_weight;
    s.meas_weight = inst.meas_weight;
    s.detectors = inst.detectors;
    const int T = inst.rounds;
    s.vertex_flipped.assign(static_cast<std::size_t>(T + 1),
                            std::vector<std::uint8_t>(static_cast<std::size_t>(inst.num_vertices), 0));
    s.meas_flipped.assign(static_cast<std::size_t>(T),
                          std::vector<std::uint8_t>(static_cast<std::size_t>(inst.num_faces), 0));
    std::vector<std::vector<int>> faces_of(static_cast<std::size_t>(inst.num_vertices));
    for (int f = 0; f < inst.num_faces; ++f)
        for (int v : inst.face_support[static_cast<std::size_t>(f)])
            faces_of[static_cast<std::size_t>(v)].push_back(f);

    for (int t = 0; t <= T; ++t)
        for (int v = 0; v < inst.num_vertices; ++v)
            if (s.vertex_weight[t][v] < 0.0) {
                s.constant += s.vertex_weight[t][v];
                s.vertex_weight[t][v] = -s.vertex_weight[t][v];
                s.vertex_flipped[t][v] = 1;
                for (int f : faces_of[static_cast<std::size_t>(v)]) s.detectors[t][f] ^= 1;
            }
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < inst.num_faces; ++f)
            if (s.meas_weight[t][f] < 0.0) {
                s.constant += s.meas_weight[t][f];
                s.meas_weight[t][f] = -s.meas_weight[t][f];
                s.meas_flipped[t][f] = 1;
                // r_f^(t) sits in the round-t and round-(t+1) constraints.
                s.detectors[t][f] ^= 1;
                s.detectors[t + 1][f] ^= 1;
            }
    return s;
}

// Feasible fallback: zero data errors in measured rounds, measurement errors
// forced by the detector chain, and a final-round data pattern solving the
// remaining face parities by elimination. Inconsistency of that system
// proves the whole instance infeasible.
DecodingSolution greedy_fallback(const DecodingInstance& inst) {
    const int T = inst.rounds;
    DecodingSolution sol;
    sol.status = SolveStatus::budget_exceeded;
    sol.data_errors.assign(static_cast<std::size_t>(T + 1),
                           std::vector<std::uint8_t>(static_cast<std::size_t>(inst.num_vertices), 0));
    sol.meas_errors.assign(static_cast<std::size_t>(T),
                           std::vector<std::uint8_t>(static_cast<std::size_t>(inst.num_faces), 0));
    std::vector<std::uint8_t> r(static_cast<std::size_t>(inst.num_faces), 0);
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < inst.num_faces; ++f) {
            r[f] = static_cast<std::uint8_t>(r[f] ^ inst.detectors[t][f]);
            sol.meas_errors[t][f] = r[f];
        }
    // Solve face_support * x = sigma over GF(2).
    std::vector<std::uint64_t> rows;  // low num_vertices bits: support; bit 63: rhs
    if (inst.num_vertices > 62) throw std::logic_error("fallback supports at most 62 vertices");
    for (int f = 0; f < inst.num_faces; ++f) {
        std::uint64_t row = 0;
        for (int v : inst.face_support[static_cast<std::size_t>(f)]) row |= std::uint64_t{1} << v;
        if (inst.detectors[T][f] ^ r[f]) row |= std::uint64_t{1} << 63;
        rows.push_back(row);
    }
    std::vector<int> pivot_col;
    std::size_t rank = 0;
    for (int c = 0; c < inst.num_vertices && rank < rows.size(); ++c) {
        std::size_t sel = rows.size();
        for (std::size_t i = rank; i < rows.size(); ++i)
            if (rows[i] >> c & 1) { sel = i; break; }
        if (sel == rows.size()) continue;
        std::swap(rows[rank], rows[sel]);
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (i != rank && (rows[i] >> c & 1)) rows[i] ^= rows[rank];
        pivot_col.push_back(c);
        ++rank;
    }
    for (std::size_t i = rank; i < rows.size(); ++i)
        if (rows[i] >> 63 & 1) {
            sol.status = SolveStatus::infeasible;
            sol.objective = kInf;
            return sol;
        }
    for (std::size_t i = 0; i < rank; ++i)
        if (rows[i] >> 63 & 1)
            sol.data_errors[static_cast<std::size_t>(T)][static_cast<std::size_t>(pivot_col[i])] = 1;

    sol.objective = 0.0;
    for (int t = 0; t <= T; ++t)
        for (int v = 0; v < inst.num_vertices; ++v)
            if (sol.data_errors[t][v]) sol.objective += inst.vertex_weight[t][v];
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < inst.num_faces; ++f)
            if (sol.meas_errors[t][f]) sol.objective += inst.meas_weight[t][f];
    sol.nodes = static_cast<std::uint64_t>(inst.num_faces) *
                static_cast<std::uint64_t>(inst.num_vertices);
    return sol;
}

}  // namespace

DecodingInstance build_instance(const Circuit& circuit, const ShotRecord& shot,
                                const ColorCode& code, const WeightAssignment& weights,
                                PauliType decode_basis) {
    if (circuit.kind != CircuitKind::memory)
        throw std::invalid_argument("decoding instances are built from memory circuits");
    const int T = circuit.cycles;
    DecodingInstance inst;
    inst.num_vertices = code.num_qubits();
    inst.num_faces = code.num_faces();
    inst.rounds = T;
    for (const auto& face : code.faces) inst.face_support.push_back(face.support);
    if (weights.vertex_weight.size() != static_cast<std::size_t>(T + 1) ||
        weights.meas_weight.size() != static_cast<std::size_t>(T))
        throw std::invalid_argument("weight assignment shape mismatch");
    inst.vertex_weight = weights.vertex_weight;
    inst.meas_weight = weights.meas_weight;

    const StabBasis sb = consumed_syndrome_basis(decode_basis);
    inst.detectors.assign(static_cast<std::size_t>(T + 1),
                          std::vector<std::uint8_t>(static_cast<std::size_t>(inst.num_faces), 0));
    std::vector<std::uint8_t> prev(static_cast<std::size_t>(inst.num_faces), 0);
    for (int t = 1; t <= T; ++t)
        for (int f = 0; f < inst.num_faces; ++f) {
            const std::uint8_t s =
                shot.outcomes[static_cast<std::size_t>(circuit.syndrome_at(sb, t, f))];
            inst.detectors[t - 1][f] = static_cast<std::uint8_t>(s ^ prev[f]);
            prev[f] = s;
        }
    for (int f = 0; f < inst.num_faces; ++f) {
        std::uint8_t parity = 0;
        for (int v : code.faces[static_cast<std::size_t>(f)].support)
            parity ^= shot.outcomes[static_cast<std::size_t>(
                circuit.final_index[static_cast<std::size_t>(v)])];
        inst.detectors[T][f] = static_cast<std::uint8_t>(parity ^ prev[f]);
    }
    return inst;
}

DecodingSolution decode(const DecodingInstance& inst, std::uint64_t node_budget) {
    const int T = inst.rounds;
    const int n = inst.num_vertices;
    const int F = inst.num_faces;

    const ShiftedInstance s = shift_negative_weights(inst);

    DecodingSolution sol;
    sol.data_errors.assign(static_cast<std::size_t>(T + 1),
                           std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
    sol.meas_errors.assign(static_cast<std::size_t>(T),
                           std::vector<std::uint8_t>(static_cast<std::size_t>(F), 0));

    // Fast path: no shifted detectors and nonnegative shifted weights make
    // the all-zero shifted assignment optimal at any problem size, so this
    // must precede the budget gate.
    bool all_zero = true;
    for (int t = 0; t <= T && all_zero; ++t)
        for (int f = 0; f < F && all_zero; ++f)
            if (s.detectors[static_cast<std::size_t>(t)][static_cast<std::size_t>(f)])
                all_zero = false;
    if (all_zero) {
        sol.status = SolveStatus::optimal;
        for (int t = 0; t <= T; ++t)
            for (int v = 0; v < n; ++v) sol.data_errors[t][v] = s.vertex_flipped[t][v];
        for (int t = 0; t < T; ++t)
            for (int f = 0; f < F; ++f) sol.meas_errors[t][f] = s.meas_flipped[t][f];
        sol.objective = 0.0;
        for (int t = 0; t <= T; ++t)
            for (int v = 0; v < n; ++v)
                if (sol.data_errors[t][v]) sol.objective += inst.vertex_weight[t][v];
        for (int t = 0; t < T; ++t)
            for (int f = 0; f < F; ++f)
                if (sol.meas_errors[t][f]) sol.objective += inst.meas_weight[t][f];
        sol.nodes = 1;
        return sol;
    }

    const std::uint64_t stages =
        static_cast<std::uint64_t>(T + 1) * static_cast<std::uint64_t>(n) +
        static_cast<std::uint64_t>(T);
    if (F >= 31 || stages > node_budget >> F) return greedy_fallback(inst);

    const std::size_t states = std::size_t{1} << F;

    // Face-incidence mask per vertex.
    std::vector<std::uint32_t> vmask(static_cast<std::size_t>(n), 0);
    for (int f = 0; f < F; ++f)
        for (int v : inst.face_support[static_cast<std::size_t>(f)])
            vmask[static_cast<std::size_t>(v)] |= std::uint32_t{1} << f;

    auto det_mask = [&](int round) {
        std::uint32_t m = 0;
        for (int f = 0; f < F; ++f)
            if (s.detectors[static_cast<std::size_t>(round)][static_cast<std::size_t>(f)])
                m |= std::uint32_t{1} << f;
        return m;
    };

    // Round-sequential dynamic program over the running face-parity state.
    // Entering round t the state equals r^(t-1); each vertex decision XORs
    // its face mask; after round t's vertices the state sigma' forces
    // r^(t) = sigma' ^ delta^(t), paying that round's measurement weights.
    std::vector<double> cur(states, kInf), nxt(states);
    cur[0] = 0.0;
    // One packed choice bitset per vertex stage.
    std::vector<std::vector<std::uint64_t>> choices;
    choices.reserve(static_cast<std::size_t>(T + 1) * static_cast<std::size_t>(n));
    const std::size_t words = (states + 63) / 64;

    // Per-round measurement-cost table W[r] = sum of meas weights set in r.
    std::vector<double> wsum(states);

    std::uint64_t nodes = 0;
    for (int t = 1; t <= T + 1; ++t) {
        for (int v = 0; v < n; ++v) {
            const double w =
                s.vertex_weight[static_cast<std::size_t>(t - 1)][static_cast<std::size_t>(v)];
            const std::uint32_t mask = vmask[static_cast<std::size_t>(v)];
            auto& choice = choices.emplace_back(words, 0);
            for (std::size_t st = 0; st < states; ++st) {
                const double take = cur[st ^ mask] + w;
                if (take < cur[st]) {
                    nxt[st] = take;
                    choice[st >> 6] |= std::uint64_t{1} << (st & 63);
                } else {
                    nxt[st] = cur[st];
                }
            }
            cur.swap(nxt);
            nodes += states;
        }
        if (t <= T) {
            wsum[0] = 0.0;
            for (std::size_t r = 1; r < states; ++r)
                wsum[r] = wsum[r & (r - 1)] +
                          s.meas_weight[static_cast<std::size_t>(t - 1)]
                                       [static_cast<std::size_t>(std::countr_zero(r))];
            const std::uint32_t delta = det_mask(t - 1);
            for (std::size_t r = 0; r < states; ++r) nxt[r] = cur[r ^ delta] + wsum[r];
            cur.swap(nxt);
            nodes += states;
        }
    }

    const std::uint32_t final_target = det_mask(T);
    if (!std::isfinite(cur[final_target])) {
        sol.status = SolveStatus::infeasible;
        sol.objective = kInf;
        sol.nodes = nodes;
        return sol;
    }

    // Backtrack, preferring the 0-branch on ties (strict improvement set the
    // choice bit), then undo the variable shifts.
    std::uint32_t state = final_target;
    std::size_t stage = choices.size();
    for (int t = T + 1; t >= 1; --t) {
        if (t <= T) {
            for (int f = 0; f < F; ++f)
                sol.meas_errors[t - 1][f] = static_cast<std::uint8_t>(state >> f & 1);
            state ^= det_mask(t - 1);
        }
        for (int v = n - 1; v >= 0; --v) {
            --stage;
            const auto& choice = choices[stage];
            if (choice[state >> 6] >> (state & 63) & 1) {
                sol.data_errors[t - 1][v] = 1;
                state ^= vmask[static_cast<std::size_t>(v)];
            }
        }
    }
    if (state != 0) throw std::logic_error("backtrack did not return to the initial state");

    for (int t = 0; t <= T; ++t)
        for (int v = 0; v < n; ++v) sol.data_errors[t][v] ^= s.vertex_flipped[t][v];
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < F; ++f) sol.meas_errors[t][f] ^= s.meas_flipped[t][f];

    sol.objective = 0.0;
    for (int t = 0; t <= T; ++t)
        for (int v = 0; v < n; ++v)
            if (sol.data_errors[t][v]) sol.objective += inst.vertex_weight[t][v];
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < F; ++f)
            if (sol.meas_errors[t][f]) sol.objective += inst.meas_weight[t][f];
    sol.status = SolveStatus::optimal;
    sol.nodes = nodes;
    return sol;
}

DecodingSolution brute_force_decode(const DecodingInstance& inst) {
    const int T = inst.rounds;
    const int n = inst.num_vertices;
    const int F = inst.num_faces;
    const int num_x = (T + 1) * n;
    const int num_vars = num_x + T * F;
    if (num_vars > 24) throw std::invalid_argument("brute force capped at 24 binaries");
    const int num_cons = (T + 1) * F;

    std::vector<double> weight(static_cast<std::size_t>(num_vars));
    std::vector<std::vector<int>> touches(static_cast<std::size_t>(num_vars));
    for (int t = 0; t <= T; ++t)
        for (int v = 0; v < n; ++v) weight[t * n + v] = inst.vertex_weight[t][v];
    for (int t = 1; t <= T; ++t)
        for (int f = 0; f < F; ++f) weight[num_x + (t - 1) * F + f] = inst.meas_weight[t - 1][f];
    for (int t = 1; t <= T + 1; ++t)
        for (int f = 0; f < F; ++f) {
            const int c = (t - 1) * F + f;
            for (int v : inst.face_support[static_cast<std::size_t>(f)])
                touches[(t - 1) * n + v].push_back(c);
            if (t <= T) touches[num_x + (t - 1) * F + f].push_back(c);
            if (t >= 2) touches[num_x + (t - 2) * F + f].push_back(c);
        }

    int unsatisfied = 0;
    for (int t = 0; t <= T; ++t)
        for (int f = 0; f < F; ++f) unsatisfied += inst.detectors[t][f] ? 1 : 0;
    std::vector<std::uint8_t> parity(static_cast<std::size_t>(num_cons));
    for (int t = 0; t <= T; ++t)
        for (int f = 0; f < F; ++f) parity[t * F + f] = inst.detectors[t][f];

    double obj = 0.0;
    std::uint32_t assign = 0;
    double best_obj = kInf;
    std::uint32_t best_assign = 0;
    bool found = false;
    if (unsatisfied == 0) {
        best_obj = 0.0;
        best_assign = 0;
        found = true;
    }
    const std::uint64_t total = std::uint64_t{1} << num_vars;
    for (std::uint64_t g = 1; g < total; ++g) {
        const int b = std::countr_zero(g);
        const std::uint32_t bit = std::uint32_t{1} << b;
        assign ^= bit;
        obj += (assign & bit) ? weight[static_cast<std::size_t>(b)]
                              : -weight[static_cast<std::size_t>(b)];
        for (int c : touches[static_cast<std::size_t>(b)]) {
            parity[static_cast<std::size_t>(c)] ^= 1;
            unsatisfied += parity[static_cast<std::size_t>(c)] ? 1 : -1;
        }
        if (unsatisfied == 0 && obj < best_obj - 1e-12) {
            best_obj = obj;
            best_assign = assign;
            found = true;
        }
    }

    DecodingSolution sol;
    sol.data_errors.assign(static_cast<std::size_t>(T + 1),
                           std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0));
    sol.meas_errors.assign(static_cast<std::size_t>(T),
                           std::vector<std::uint8_t>(static_cast<std::size_t>(F), 0));
    if (!found) {
        sol.status = SolveStatus::infeasible;
        sol.objective = kInf;
        return sol;
    }
    for (int t = 0; t <= T; ++t)
        for (int v = 0; v < n; ++v)
            sol.data_errors[t][v] = static_cast<std::uint8_t>(best_assign >> (t * n + v) & 1);
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < F; ++f)
            sol.meas_errors[t][f] =
                static_cast<std::uint8_t>(best_assign >> (num_x + t * F + f) & 1);
    // Recompute exactly to shed incremental rounding.
    sol.objective = 0.0;
    for (int t = 0; t <= T; ++t)
        for (int v = 0; v < n; ++v)
            if (sol.data_errors[t][v]) sol.objective += inst.vertex_weight[t][v];
    for (int t = 0; t < T; ++t)
        for (int f = 0; f < F; ++f)
            if (sol.meas_errors[t][f]) sol.objective += inst.meas_weight[t][f];
    sol.status = SolveStatus::optimal;
    sol.nodes = total;
    return sol;
}

int judge_logical_error(const DecodingSolution& solution, const Circuit& circuit,
                        const ShotRecord& shot, const ColorCode& code, PauliType decode_basis) {
    (void)decode_basis;  // self-dual patch: one logical support serves both
    int parity = 0;
    for (int v : code.logical_support) {
        std::uint8_t bit =
            shot.outcomes[static_cast<std::size_t>(circuit.final_index[static_cast<std::size_t>(v)])];
        for (const auto& round : solution.data_errors) bit ^= round[static_cast<std::size_t>(v)];
        parity ^= bit;
    }
    return parity;
}

std::string instance_to_text(const DecodingInstance& inst) {
    std::ostringstream out;
    out << "instance vertices=" << inst.num_vertices << " faces=" << inst.num_faces
        << " rounds=" << inst.rounds << "\n";
    for (int f = 0; f < inst.num_faces; ++f) {
        out << "face " << f;
        for (int v : inst.face_support[static_cast<std::size_t>(f)]) out << " " << v;
        out << "\n";
    }
    char buf[64];
    for (int t = 1; t <= inst.rounds + 1; ++t)
        for (int v = 0; v < inst.num_vertices; ++v) {
            std::snprintf(buf, sizeof buf, "%.17g", inst.vertex_weight[t - 1][v]);
            out << "vw " << t << " " << v << " " << buf << "\n";
        }
    for (int t = 1; t <= inst.rounds; ++t)
        for (int f = 0; f < inst.num_faces; ++f) {
            std::snprintf(buf, sizeof buf, "%.17g", inst.meas_weight[t - 1][f]);
            out << "mw " << t << " " << f << " " << buf << "\n";
        }
    for (int t = 1; t <= inst.rounds + 1; ++t)
        for (int f = 0; f < inst.num_faces; ++f)
            out << "det " << t << " " << f << " " << int(inst.detectors[t - 1][f]) << "\n";
    out << "end\n";
    return out.str();
}

DecodingInstance instance_from_text(const std::string& text) {
    std::istringstream in(text);
    std::string tok;
    DecodingInstance inst;
    in >> tok;
    if (tok != "instance") throw std::invalid_argument("missing instance header");
    auto read_kv = [&in](const char* key) {
        std::string item;
        in >> item;
        const std::string prefix = std::string(key) + "=";
        if (item.rfind(prefix, 0) != 0)
            throw std::invalid_argument("expected " + prefix + "<int>");
        return std::stoi(item.substr(prefix.size()));
    };
    inst.num_vertices = read_kv("vertices");
    inst.num_faces = read_kv("faces");
    inst.rounds = read_kv("rounds");
    inst.face_support.resize(static_cast<std::size_t>(inst.num_faces));
    inst.vertex_weight.assign(static_cast<std::size_t>(inst.rounds + 1),
                              std::vector<double>(static_cast<std::size_t>(inst.num_vertices), 0));
    inst.meas_weight.assign(static_cast<std::size_t>(inst.rounds),
                            std::vector<double>(static_cast<std::size_t>(inst.num_faces), 0));
    inst.detectors.assign(static_cast<std::size_t>(inst.rounds + 1),
                          std::vector<std::uint8_t>(static_cast<std::size_t>(inst.num_faces), 0));
    std::string line;
    std::getline(in, line);  // rest of header
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        ls >> tok;
        if (tok == "end") break;
        if (tok == "face") {
            int f, v;
            ls >> f;
            while (ls >> v) inst.face_support[static_cast<std::size_t>(f)].push_back(v);
        } else if (tok == "vw") {
            int t, v;
            double wv;
            ls >> t >> v >> wv;
            inst.vertex_weight[t - 1][v] = wv;
        } else if (tok == "mw") {
            int t, f;
            double wv;
            ls >> t >> f >> wv;
            inst.meas_weight[t - 1][f] = wv;
        } else if (tok == "det") {
            int t, f, b;
            ls >> t >> f >> b;
            inst.detectors[t - 1][f] = static_cast<std::uint8_t>(b);
        } else if (!tok.empty()) {
            throw std::invalid_argument("unrecognized line: " + line);
        }
        tok.clear();
    }
    return inst;
}

}  // namespace colorcode
