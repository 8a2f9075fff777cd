#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colorcode/circuit.hpp"
#include "colorcode/sim.hpp"
#include "colorcode/weights.hpp"

namespace colorcode {

// Minimum-weight decoding problem over one memory run. Binary variables:
// a data-error bit per (vertex, round 1..T+1) and a measurement-error bit
// per (face, round 1..T). Constraint per (face, round t <= T):
//   sum_{v in face} x_v^(t) + r_f^(t) + r_f^(t-1) = detector (mod 2)
// with r^(0) = 0; the final round T+1 has no measurement variables:
//   sum_{v in face} x_v^(T+1) + r_f^(T) = detector.
struct DecodingInstance {
    int num_vertices = 0;
    int num_faces = 0;
    int rounds = 0;  // measured rounds T; arrays below carry T+1 rounds
    std::vector<std::vector<int>> face_support;
    std::vector<std::vector<double>> vertex_weight;      // [round-1][v], rounds 1..T+1
    std::vector<std::vector<double>> meas_weight;        // [round-1][f], rounds 1..T
    std::vector<std::vector<std::uint8_t>> detectors;    // [round-1][f], rounds 1..T+1
};

enum class SolveStatus { optimal, infeasible, budget_exceeded };

struct DecodingSolution {
    SolveStatus status = SolveStatus::optimal;
    double objective = 0.0;
    std::vector<std::vector<std::uint8_t>> data_errors;  // [round-1][v]
    std::vector<std::vector<std::uint8_t>> meas_errors;  // [round-1][f]
    std::uint64_t nodes = 0;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

// Detectors from consecutive syndrome differences of the decode-relevant
// basis, with the final round taken from face parities of the transversal
// data readout. Pass the deflagged record when deflagging is on.
DecodingInstance build_instance(const Circuit& circuit, const ShotRecord& shot,
                                const ColorCode& code, const WeightAssignment& weights,
                                PauliType decode_basis);

// Exact minimum-weight solve. Negative weights are folded away by the
// substitution x -> 1-x' before the search, so the optimum is exact for any
// sign pattern. When the projected node count exceeds the budget, returns a
// feasible fallback with status budget_exceeded instead of searching.
DecodingSolution decode(const DecodingInstance& instance,
                        std::uint64_t node_budget = kDefaultNodeBudget);

// Exhaustive oracle over every binary assignment; practical to ~20 binaries.
DecodingSolution brute_force_decode(const DecodingInstance& instance);

// 1 when the residual (actual data error XOR accumulated correction)
// anticommutes with the logical operator of the decode basis.
int judge_logical_error(const DecodingSolution& solution, const Circuit& circuit,
                        const ShotRecord& shot, const ColorCode& code, PauliType decode_basis);

std::string instance_to_text(const DecodingInstance& instance);
DecodingInstance instance_from_text(const std::string& text);

}  // namespace colorcode
