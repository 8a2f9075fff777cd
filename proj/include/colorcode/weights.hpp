#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colorcode/circuit.hpp"
#include "colorcode/sim.hpp"

namespace colorcode {

// Patterns with fewer samples than this fall back to the merged marginal.
inline constexpr std::uint64_t kMinPatternCount = 100;

struct PatternStats {
    std::uint64_t count = 0;
    std::uint64_t errors = 0;
};

// Error statistics for one location (data qubit or face), binned by the
// observed flag pattern. Bit k of a pattern is the k-th conditioning source.
struct LocationTable {
    int width = 0;
    std::vector<PatternStats> stats;  // size 1 << width
    std::uint64_t total_count = 0;
    std::uint64_t total_errors = 0;
};

struct FlagSource {
    int face;
    int slot;
};

struct ConditionalProbTable {
    CodeFamily family = CodeFamily::c488;
    int distance = 0;
    double noise_p = 0.0;
    std::uint64_t samples = 0;
    bool deflagged = false;
    EstimationSide side = EstimationSide::cx;
    std::uint64_t seed = 0;
    std::string schedule_version;
    std::vector<LocationTable> vertex;  // per data qubit
    std::vector<LocationTable> face;    // per face
    std::vector<std::vector<FlagSource>> vertex_sources;  // ascending (face, slot)
    std::vector<std::vector<FlagSource>> face_sources;
};

// -log(q / (1-q)), natural log. Throws std::invalid_argument outside (0, 1).
double logit_weight(double q);

// Laplace-smoothed conditional, falling back to the smoothed merged marginal
// for patterns below kMinPatternCount. Never returns 0 or 1.
double smoothed_probability(const LocationTable& loc, std::uint32_t pattern);
double smoothed_marginal(const LocationTable& loc);

// Runs the one-cycle estimation circuit `num_samples` times and bins data
// and face-measurement errors by flag pattern. When `deflag` is set the
// samples are deflagged first, matching decode-time use of the table.
ConditionalProbTable estimate_conditional_probs(const ColorCode& code, EstimationSide side,
                                                const NoiseModel& noise,
                                                std::uint64_t num_samples, std::uint64_t seed,
                                                bool deflag);

void save_table_json(const ConditionalProbTable& table, const std::string& path);
ConditionalProbTable load_table_json(const std::string& path);

enum class WeightScheme { uniform, conventional, flagged };

struct WeightAssignment {
    std::vector<std::vector<double>> vertex_weight;  // [round-1][v], rounds 1..T+1
    std::vector<std::vector<double>> meas_weight;    // [round-1][f], rounds 1..T
};

// Per-shot weights for a memory circuit. `uniform` needs no table; the other
// schemes require a table whose side matches the decode basis. `flagged`
// conditions each weight on the decode-relevant flag bits of `shot`:
// X decoding uses same-cycle X-gadget flags for vertices (merged marginal at
// the final round); Z decoding uses previous-cycle Z-gadget flags (merged at
// round 1). Face weights use same-cycle flags of the opposite-basis gadget.
WeightAssignment build_weights(const ConditionalProbTable* table, WeightScheme scheme,
                               const Circuit& circuit, const ShotRecord& shot,
                               const ColorCode& code, PauliType decode_basis);

}  // namespace colorcode
