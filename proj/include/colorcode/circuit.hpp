#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "colorcode/geometry.hpp"

namespace colorcode {

inline constexpr const char* kScheduleVersion = "sched-v1";

enum class OpType { prepare_0, prepare_plus, hadamard, cnot, idle, measure_x, measure_z };
enum class QubitRole { data, syndrome, flag };
enum class StabBasis { x, z };
enum class PauliType { x, z };  // error type a decoding run corrects
enum class MeasKind { syndrome, flag, final_data };
enum class ExtractionMethod { single_ancilla, flagged };
enum class EstimationSide { cx, cz };
enum class CircuitKind { cycle_fragment, memory, estimation };

struct Instruction {
    OpType op;
    int q0;
    int q1 = -1;  // cnot target
};

struct Layer {
    std::vector<Instruction> instructions;
};

struct MeasurementInfo {
    MeasKind kind;
    int face = -1;
    StabBasis basis = StabBasis::x;  // gadget basis, for syndrome and flag kinds
    int cycle = 0;                   // 1-based
    int flag_slot = -1;
    int data_qubit = -1;
};

// One syndrome-extraction gadget bound to a face. Data CNOTs touch the
// face support in cyclic order, split into one contiguous run per gadget
// qubit (syndrome first, then flags in cat order).
struct GadgetSpec {
    enum class Kind { single_ancilla, two_qubit, four_qubit };
    Kind kind;
    int face;
    int syndrome_qubit;
    std::vector<int> flag_qubits;
    std::vector<std::vector<int>> data_partition;
};

struct Circuit {
    CircuitKind kind = CircuitKind::cycle_fragment;
    CodeFamily family = CodeFamily::c488;
    int distance = 0;
    ExtractionMethod method = ExtractionMethod::flagged;
    PauliType decode_basis = PauliType::x;   // memory circuits
    EstimationSide side = EstimationSide::cx;  // estimation circuits

    int num_qubits = 0;
    int num_data = 0;
    int cycles = 0;
    std::vector<QubitRole> roles;
    std::vector<Layer> layers;
    std::vector<MeasurementInfo> measurement_map;
    std::vector<GadgetSpec> gadgets;  // per face id; qubits shared by both bases
    int first_ideal_layer = -1;       // layers at or past this index are noiseless
    std::string schedule_version;

    // Measurement index tables; -1 marks an absent entry.
    // syndrome_index[basis][cycle-1][face]; flag_index adds a slot dimension.
    std::vector<std::vector<std::vector<int>>> syndrome_index;
    std::vector<std::vector<std::vector<std::vector<int>>>> flag_index;
    std::vector<int> final_index;  // per data qubit
    // Index of each half-cycle's measurement layer: [basis][cycle-1].
    std::vector<std::vector<int>> half_end_layer;

    int num_measurements() const { return static_cast<int>(measurement_map.size()); }
    int num_layers() const { return static_cast<int>(layers.size()); }

    int syndrome_at(StabBasis b, int cycle, int face) const {
        return syndrome_index[static_cast<int>(b)][cycle - 1][face];
    }
    const std::vector<int>& flags_at(StabBasis b, int cycle, int face) const {
        return flag_index[static_cast<int>(b)][cycle - 1][face];
    }
};

// One extraction half-cycle in isolation (no data prep, no final readout).
Circuit build_single_ancilla_cycle(const ColorCode& code, StabBasis basis);
Circuit build_flagged_cycle(const ColorCode& code, StabBasis basis);

// Data prep, `distance` rounds of [X half; Z half], then one noiseless
// transversal data readout in the decode basis.
Circuit build_memory_experiment(const ColorCode& code, ExtractionMethod method,
                                PauliType decode_basis);

// One cycle with the leading half disarmed (all its gadget qubits prepared
// and measured in the basis that makes them deterministic spectators), the
// trailing half armed, then a noisy transversal data readout.
Circuit build_estimation_circuit(const ColorCode& code, EstimationSide side);

// Throws std::logic_error when any layer touches a qubit twice or references
// an invalid qubit.
void validate_layers(const Circuit& circuit);

std::string circuit_to_text(const Circuit& circuit);
std::uint64_t circuit_hash(const Circuit& circuit);  // FNV-1a over the text form

const char* op_name(OpType op);

}  // namespace colorcode
