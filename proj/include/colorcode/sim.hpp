#pragma once

#include <cstdint>
#include <vector>

#include "colorcode/circuit.hpp"
#include "colorcode/rng.hpp"

namespace colorcode {

// Circuit-level depolarizing model: strength-p depolarizing after every
// one-qubit gate and idle, strength-p two-qubit depolarizing after every
// cnot, preparation of the orthogonal state with probability p, and
// classical outcome inversion with probability p at each measurement.
struct NoiseModel {
    double p = 0.0;
};

struct ReferenceRun {
    std::vector<std::uint8_t> outcomes;       // per measurement, random ones fixed to 0
    std::vector<std::uint8_t> deterministic;  // per measurement
};

// Tableau trace of the noiseless circuit.
ReferenceRun reference_run(const Circuit& circuit);

struct FaultEvent {
    int layer;
    int instr;
    int pauli;  // 1q sites: 1..3 = X,Y,Z; cnot: 1..15 = 4*control+target; prep/meas flip: 0
};

struct ShotRecord {
    std::vector<std::uint8_t> outcomes;  // per measurement index
};

// Pauli-frame sample. Identical (circuit, noise, master_seed, shot_index)
// reproduce the record bit for bit regardless of threading.
ShotRecord sample_shot(const Circuit& circuit, const ReferenceRun& ref, const NoiseModel& noise,
                       std::uint64_t master_seed, std::uint64_t shot_index,
                       std::vector<FaultEvent>* fault_log = nullptr);

struct FaultEffect {
    FaultEvent site;
    double probability;               // first-order probability of this fault
    std::vector<std::uint8_t> flips;  // per measurement, relative to the reference
};

// Every single-fault location and Pauli with its downstream measurement
// flips. Multi-fault flip patterns are XORs of these (frame linearity).
std::vector<FaultEffect> exhaustive_single_fault_enumeration(const Circuit& circuit, double p);

// Injects X on `xs` and Z on `zs` at the start of `start_layer` and returns
// the downstream measurement flips.
std::vector<std::uint8_t> collect_flips_from_pauli(const Circuit& circuit, int start_layer,
                                                   const std::vector<int>& xs,
                                                   const std::vector<int>& zs);

// Single draw from the one-qubit depolarizing channel: 0 none, 1 X, 2 Y, 3 Z.
int draw_pauli1(ShotRng& rng, double p);
// Single draw from the two-qubit channel: 0 none, else 4*first+second with
// Pauli codes 0..3 = I,X,Y,Z (II excluded).
int draw_pauli2(ShotRng& rng, double p);

}  // namespace colorcode
